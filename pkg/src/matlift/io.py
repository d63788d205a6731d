"""Text formats: .ckt matroids, .grp groups, .gfm matrices, .lift specs.

All formats are line-oriented, 1-based, and emitted canonically (sorted
families, LF endings) so files round-trip byte-stably.  ``#`` starts a
comment anywhere; blank lines are ignored.  Parse errors carry the
offending line number.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from matlift.core import Matroid, mask_of, one_based
from matlift.gf import GfMatrix
from matlift.groups import FinGroup
from matlift.lifts import LiftSpec


class ParseError(ValueError):
    """A malformed input file; carries path and 1-based line number."""

    def __init__(self, path: str, line: int, message: str) -> None:
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((lineno, body))
    return out


# ---------------------------------------------------------------------------
# .ckt


def parse_matroid_text(text: str, *, path: str = "<string>", validate: bool = True) -> Matroid:
    lines = _content_lines(text)
    if not lines:
        raise ParseError(path, 1, "empty matroid file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "matroid" or parts[2] != "circuits":
        raise ParseError(path, lineno, f"expected header 'matroid <n> circuits', got {header!r}")
    try:
        n = int(parts[1])
    except ValueError:
        raise ParseError(path, lineno, f"bad ground set size {parts[1]!r}") from None
    if not 1 <= n <= 64:
        raise ParseError(path, lineno, f"ground set size {n} outside [1, 64]")
    circuits = []
    for lineno, body in lines[1:]:
        try:
            elems = [int(tok) for tok in body.split()]
        except ValueError:
            raise ParseError(path, lineno, f"non-integer element in {body!r}") from None
        if not elems:
            continue
        for e in elems:
            if not 1 <= e <= n:
                raise ParseError(path, lineno, f"element {e} outside [1, {n}]")
        if len(set(elems)) != len(elems):
            raise ParseError(path, lineno, f"repeated element in circuit {body!r}")
        circuits.append(mask_of(e - 1 for e in elems))
    return Matroid(n, circuits, validate=validate)


def parse_matroid(path: str | Path, *, validate: bool = True) -> Matroid:
    p = Path(path)
    return parse_matroid_text(p.read_text(), path=str(p), validate=validate)


def emit_matroid_text(m: Matroid) -> str:
    lines = [f"matroid {m.n} circuits"]
    lines.extend(" ".join(str(e) for e in one_based(c)) for c in m.circuits)
    return "\n".join(lines) + "\n"


def write_matroid(m: Matroid, path: str | Path) -> None:
    Path(path).write_text(emit_matroid_text(m))


# ---------------------------------------------------------------------------
# .grp


def parse_group_text(text: str, *, path: str = "<string>") -> FinGroup:
    lines = _content_lines(text)
    if not lines:
        raise ParseError(path, 1, "empty group file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "group":
        raise ParseError(path, lineno, f"expected header 'group <k>', got {header!r}")
    try:
        k = int(parts[1])
    except ValueError:
        raise ParseError(path, lineno, f"bad group order {parts[1]!r}") from None
    if k < 1:
        raise ParseError(path, lineno, "group order must be positive")
    if len(lines) < 2 + k:
        raise ParseError(path, lines[-1][0], f"expected {k} table rows after the name line")
    name_lineno, name_line = lines[1]
    names = name_line.split()
    if len(names) != k:
        raise ParseError(path, name_lineno, f"expected {k} element names, got {len(names)}")
    if len(set(names)) != k:
        raise ParseError(path, name_lineno, "element names must be distinct")
    index = {nm: i for i, nm in enumerate(names)}
    table = []
    for row_idx, (lineno, body) in enumerate(lines[2 : 2 + k]):
        toks = body.split()
        if len(toks) != k:
            raise ParseError(path, lineno, f"table row {row_idx + 1} has {len(toks)} entries, expected {k}")
        row = []
        for tok in toks:
            if tok not in index:
                raise ParseError(path, lineno, f"unknown element name {tok!r}")
            row.append(index[tok])
        table.append(row)
    from matlift.groups import GroupAxiomError

    try:
        return FinGroup(table, names, name=Path(path).stem if path != "<string>" else "group")
    except GroupAxiomError as exc:
        raise ParseError(path, lines[0][0], str(exc)) from exc


def parse_group(path: str | Path) -> FinGroup:
    p = Path(path)
    return parse_group_text(p.read_text(), path=str(p))


def emit_group_text(g: FinGroup) -> str:
    lines = [f"group {g.order}", " ".join(g.names)]
    lines.extend(" ".join(g.names[x] for x in row) for row in g.table)
    return "\n".join(lines) + "\n"


def write_group(g: FinGroup, path: str | Path) -> None:
    Path(path).write_text(emit_group_text(g))


# ---------------------------------------------------------------------------
# .gfm


def parse_matrix_text(text: str, *, path: str = "<string>") -> GfMatrix:
    lines = _content_lines(text)
    if not lines:
        raise ParseError(path, 1, "empty matrix file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "gf":
        raise ParseError(path, lineno, f"expected header 'gf <p> <rows> <cols>', got {header!r}")
    try:
        p_val, rows, cols = int(parts[1]), int(parts[2]), int(parts[3])
    except ValueError:
        raise ParseError(path, lineno, f"bad header numbers in {header!r}") from None
    if len(lines) != 1 + rows:
        raise ParseError(path, lines[-1][0], f"expected {rows} matrix rows, got {len(lines) - 1}")
    data = []
    for lineno, body in lines[1:]:
        try:
            row = [int(tok) for tok in body.split()]
        except ValueError:
            raise ParseError(path, lineno, f"non-integer entry in {body!r}") from None
        if len(row) != cols:
            raise ParseError(path, lineno, f"row has {len(row)} entries, expected {cols}")
        data.append(row)
    try:
        return GfMatrix(p_val, data)
    except ValueError as exc:
        raise ParseError(path, lines[0][0], str(exc)) from exc


def parse_matrix(path: str | Path) -> GfMatrix:
    p = Path(path)
    return parse_matrix_text(p.read_text(), path=str(p))


def emit_matrix_text(a: GfMatrix) -> str:
    lines = [f"gf {a.p} {a.rows} {a.cols}"]
    lines.extend(" ".join(str(x) for x in row) for row in a.data)
    return "\n".join(lines) + "\n"


def write_matrix(a: GfMatrix, path: str | Path) -> None:
    Path(path).write_text(emit_matrix_text(a))


# ---------------------------------------------------------------------------
# .lift


def parse_lift_text(text: str, *, path: str = "<string>") -> LiftSpec:
    """A ``base`` section holding a .ckt body and an ``overlay`` section whose
    1-based elements index the base circuits in canonical order."""
    sections: dict[str, list[str]] = {}
    current: Optional[str] = None
    section_line = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body in ("base", "overlay"):
            if body in sections:
                raise ParseError(path, lineno, f"duplicate section {body!r}")
            current = body
            sections[body] = []
            section_line[body] = lineno
            continue
        if current is None:
            raise ParseError(path, lineno, f"content before any section: {body!r}")
        sections[current].append(raw)
    for required in ("base", "overlay"):
        if required not in sections:
            raise ParseError(path, 1, f"missing section {required!r}")
    base = parse_matroid_text("\n".join(sections["base"]), path=f"{path}[base]")
    overlay = parse_matroid_text("\n".join(sections["overlay"]), path=f"{path}[overlay]")
    if overlay.n != len(base.circuits):
        raise ParseError(
            path,
            section_line["overlay"],
            f"overlay ground set {overlay.n} != number of base circuits {len(base.circuits)}",
        )
    return LiftSpec(base, overlay)


def parse_lift(path: str | Path) -> LiftSpec:
    p = Path(path)
    return parse_lift_text(p.read_text(), path=str(p))


def emit_lift_text(spec: LiftSpec) -> str:
    """Both families plus the circuit index map (as comments) for reproducibility."""
    overlay = spec.overlay
    if not isinstance(overlay, Matroid):
        raise TypeError("only circuit-family overlays can be serialized")
    lines = ["base"]
    lines.append(emit_matroid_text(spec.base).rstrip("\n"))
    lines.append("overlay")
    for k, c in enumerate(spec.base.circuits, start=1):
        lines.append(f"# circuit {k}: {' '.join(str(e) for e in one_based(c))}")
    lines.append(emit_matroid_text(overlay).rstrip("\n"))
    return "\n".join(lines) + "\n"


def write_lift(spec: LiftSpec, path: str | Path) -> None:
    Path(path).write_text(emit_lift_text(spec))
