import pytest


@pytest.fixture
def announce(request):
    """Print through pytest's output capture, so acceptance pass/fail lines
    stay visible in plain ``pytest -v`` runs."""
    manager = request.config.pluginmanager.getplugin("capturemanager")

    def _announce(line: str) -> None:
        if manager is None:
            print(line, flush=True)
            return
        with manager.global_and_fixture_disabled():
            print(line, flush=True)

    return _announce
