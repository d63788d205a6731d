"""Kernel tests: axioms, oracles against brute force, minors, duality,
isomorphism, sparse paving, relaxation, hyperplane construction."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matlift.core import (
    CircuitAxiomError,
    Matroid,
    find_isomorphism,
    has_minor_isomorphic_to,
    is_quotient,
    is_sparse_paving,
    mask_of,
    matroid_from_hyperplanes,
    one_based,
    relax,
    subsets_of_size,
    uniform_matroid,
    validate_circuits,
    validate_hyperplanes,
)
from matlift.krt import KrtSpec, build_krt

from zoo import closure_bruteforce, random_base_matroid, rank_bruteforce


def k43() -> Matroid:
    return build_krt(KrtSpec(4, 3))


class TestValidateCircuits:
    def test_uniform_family_ok(self):
        fam = list(subsets_of_size(0b1111, 3))
        assert validate_circuits(fam, 4).ok

    def test_antichain_violation(self):
        report = validate_circuits([mask_of([0, 1]), mask_of([0, 1, 2])], 4)
        assert not report.ok
        assert report.kind == "antichain"

    def test_k43_family_ok(self):
        m = k43()
        assert validate_circuits(m.circuits, 8).ok

    def test_empty_member_rejected(self):
        report = validate_circuits([0], 3)
        assert not report.ok
        assert report.kind == "empty-member"

    def test_elimination_violation_reported(self):
        # {0,1},{1,2} need a circuit inside {0,2} after removing 1; there is none.
        report = validate_circuits([mask_of([0, 1]), mask_of([1, 2])], 3)
        assert not report.ok
        assert report.kind == "elimination"
        c1, c2, e = report.witness
        assert e == 1

    def test_constructor_raises(self):
        with pytest.raises(CircuitAxiomError):
            Matroid(4, [mask_of([0, 1]), mask_of([0, 1, 2])])

    def test_sampled_mode_flags_report(self):
        m = k43()
        report = validate_circuits(m.circuits, 8, max_pairs=50)
        assert report.ok and report.sampled
        full = validate_circuits(m.circuits, 8)
        assert full.ok and not full.sampled


class TestRank:
    def test_uniform_rank(self):
        u24 = uniform_matroid(2, 4)
        assert u24.rank(mask_of([0, 1, 2])) == 2
        assert u24.rank(0) == 0
        assert u24.full_rank == 2

    def test_k43_paper_values(self):
        m = k43()
        assert m.rank(mask_of([0, 1, 6, 7])) == 3  # a circuit-hyperplane
        assert m.full_rank == 4

    def test_rank_matches_bruteforce_exhaustive(self):
        rng = random.Random(7)
        for _ in range(6):
            m = random_base_matroid(rng, max_elems=7)
            for mask in range(1 << m.n):
                assert m.rank(mask) == rank_bruteforce(m, mask)

    def test_rank_memo_is_consistent(self):
        m = k43()
        mask = mask_of([0, 1, 6, 7])
        assert m.rank(mask) == m.rank(mask)


class TestClosure:
    def test_rank1_closure(self):
        u13 = uniform_matroid(1, 3)
        assert u13.closure(1) == 0b111

    def test_closure_of_empty_is_loops(self):
        m = Matroid(3, [1, mask_of([1, 2])])  # element 0 is a loop
        assert m.closure(0) == 1
        assert m.loops() == 1

    def test_k43_closure_derived(self):
        assert one_based(k43().closure(mask_of([0, 1, 6]))) == [1, 2, 7, 8]

    def test_closure_matches_bruteforce(self):
        rng = random.Random(11)
        for _ in range(4):
            m = random_base_matroid(rng, max_elems=7)
            for mask in range(1 << m.n):
                assert m.closure(mask) == closure_bruteforce(m, mask)

    def test_idempotent_extensive_monotone(self):
        m = k43()
        rng = random.Random(3)
        masks = [rng.randrange(1 << m.n) for _ in range(60)]
        for x in masks:
            cx = m.closure(x)
            assert cx & x == x
            assert m.closure(cx) == cx
            for y in masks:
                if x & ~y == 0:
                    assert m.closure(x) & ~m.closure(y) == 0


class TestCircuitsWithin:
    def test_independent_set_has_none(self):
        assert k43().circuits_within(mask_of([0, 1, 2])) == []

    def test_u13_all_pairs(self):
        u13 = uniform_matroid(1, 3)
        assert len(u13.circuits_within(0b111)) == 3

    def test_k43_c_double_prime(self):
        got = k43().circuits_within(mask_of(range(6)))
        # All circuits of the restriction: the two declared 4-element sets
        # plus the two spanning 5-circuits that avoid {7,8}.
        assert sorted(one_based(c) for c in got) == [
            [1, 2, 3, 4],
            [1, 2, 3, 5, 6],
            [1, 2, 4, 5, 6],
            [3, 4, 5, 6],
        ]
        four_element = [c for c in got if c.bit_count() == 4]
        assert sorted(one_based(c) for c in four_element) == [[1, 2, 3, 4], [3, 4, 5, 6]]


class TestMinors:
    def test_contract_uniform(self):
        got = uniform_matroid(2, 4).contract(1)
        assert got == uniform_matroid(1, 3)

    def test_delete_k43_paper(self):
        got = k43().delete(mask_of([6, 7]))
        assert got.full_rank == 4
        chs = [c for c in got.circuits if got.is_circuit_hyperplane(c)]
        assert sorted(one_based(c) for c in chs) == [[1, 2, 3, 4], [3, 4, 5, 6]]

    def test_contract_k43_paper(self):
        got = k43().contract(mask_of([6, 7]))
        assert got.full_rank == 2
        for pair in ([0, 1], [2, 3], [4, 5]):
            assert got.is_circuit(mask_of(pair))

    def test_minors_commute_with_duality(self):
        rng = random.Random(23)
        for _ in range(8):
            m = random_base_matroid(rng, max_elems=7)
            d = rng.randrange(1 << m.n)
            left = m.delete(d).dual()
            right = m.dual().contract(d)
            assert left == right


class TestDual:
    def test_dual_of_uniform(self):
        assert uniform_matroid(2, 4).dual() == uniform_matroid(2, 4)
        assert uniform_matroid(1, 3).dual() == uniform_matroid(2, 3)

    def test_dual_involution(self):
        rng = random.Random(5)
        for _ in range(6):
            m = random_base_matroid(rng, max_elems=7)
            assert m.dual().dual() == m

    def test_dual_circuits_are_hyperplane_complements(self):
        m = k43()
        full = m.full_mask
        expected = sorted(full ^ h for h in m.hyperplanes())
        assert sorted(m.dual().circuits) == expected


class TestQuotient:
    def test_paper_example(self):
        assert is_quotient(uniform_matroid(1, 3), uniform_matroid(2, 3))

    def test_reverse_fails(self):
        assert not is_quotient(uniform_matroid(2, 3), uniform_matroid(1, 3))

    def test_identity(self):
        m = k43()
        assert is_quotient(m, m)

    def test_contract_delete_soundness(self):
        rng = random.Random(31)
        for _ in range(10):
            m = random_base_matroid(rng, max_elems=8)
            elems = [e for e in range(m.n)]
            rng.shuffle(elems)
            f = 0
            for e in elems[: rng.randint(0, m.full_rank)]:
                if m.is_independent(f | (1 << e)):
                    f |= 1 << e
            assert is_quotient(m.contract(f), m.delete(f))


class TestIsomorphism:
    def test_identity_map(self):
        m = k43()
        assert find_isomorphism(m, m) == list(range(8))

    def test_k43_vs_relabelled(self):
        m = k43()
        perm = [3, 5, 0, 7, 1, 6, 2, 4]
        relabelled = Matroid(
            8, [mask_of(perm[e - 1] for e in one_based(c)) for c in m.circuits]
        )
        got = find_isomorphism(m, relabelled)
        assert got is not None
        for c in m.circuits:
            image = mask_of(got[e - 1] for e in one_based(c))
            assert relabelled.is_circuit(image)

    def test_different_ranks_absent(self):
        assert find_isomorphism(uniform_matroid(2, 4), uniform_matroid(3, 4)) is None

    def test_same_profile_non_isomorphic(self):
        # K(4,3) vs its relaxation share sizes but differ in CH count.
        m = k43()
        assert find_isomorphism(m, relax(m, mask_of([0, 1, 2, 3]))) is None

    def test_budget_exceeded_distinct_from_absent(self):
        from matlift.core import SearchBudgetExceeded

        m = k43()
        with pytest.raises(SearchBudgetExceeded):
            find_isomorphism(m, m, node_budget=3)


class TestSparsePaving:
    def test_k43(self):
        assert is_sparse_paving(k43())

    def test_uniform(self):
        assert is_sparse_paving(uniform_matroid(2, 4))

    def test_graphic_k4_is_sparse_paving(self):
        # M(K_4): edges 01,02,03,12,13,23 as elements 0..5; circuits are the
        # four triangles and three quadrilaterals.  Triangles are maximal
        # rank-2 sets, hence circuit-hyperplanes, and every other 3-subset is
        # a spanning tree; M(K_4) is sparse paving.
        m_k4 = Matroid(
            6,
            [
                mask_of([0, 1, 3]),
                mask_of([0, 2, 4]),
                mask_of([1, 2, 5]),
                mask_of([3, 4, 5]),
                mask_of([0, 2, 3, 5]),
                mask_of([0, 1, 4, 5]),
                mask_of([1, 2, 3, 4]),
            ],
        )
        assert m_k4.full_rank == 3
        assert is_sparse_paving(m_k4)
        triangle = mask_of([0, 1, 3])
        assert m_k4.is_circuit_hyperplane(triangle)

    def test_two_disjoint_triangles_not_sparse_paving(self):
        # Rank-4 on 6 elements with a 3-circuit: any 4-set over a triangle is
        # dependent without being a circuit.
        bowtie = Matroid(6, [mask_of([0, 1, 2]), mask_of([3, 4, 5])])
        assert bowtie.full_rank == 4
        assert not is_sparse_paving(bowtie)


class TestRelax:
    def test_relax_k43(self):
        m = relax(k43(), mask_of([0, 1, 2, 3]))
        assert m.full_rank == 4 and m.n == 8
        assert len([c for c in m.circuits if m.is_circuit_hyperplane(c)]) == 4
        assert is_sparse_paving(m)

    def test_relax_rejects_basis(self):
        m = k43()
        basis = mask_of([0, 1, 2, 4])
        assert m.is_basis(basis)
        with pytest.raises(ValueError):
            relax(m, basis)

    def test_relax_twice(self):
        m = relax(k43(), mask_of([0, 1, 2, 3]))
        again = relax(m, mask_of([2, 3, 4, 5]))
        assert is_sparse_paving(again)
        assert len([c for c in again.circuits if again.is_circuit_hyperplane(c)]) == 3


class TestHyperplanes:
    def test_u23_hyperplanes_are_singletons(self):
        got = uniform_matroid(2, 3).hyperplanes()
        assert sorted(got) == [0b001, 0b010, 0b100]

    def test_validate_u23(self):
        assert validate_hyperplanes([0b001, 0b010, 0b100], 3).ok

    def test_spec_counterexample_family(self):
        report = validate_hyperplanes([mask_of([0, 1]), mask_of([0, 2]), mask_of([1, 2])], 4)
        assert not report.ok
        assert report.kind == "exchange"
        assert report.witness[2] == 3  # the uncovered element

    def test_roundtrip_u23(self):
        u23 = uniform_matroid(2, 3)
        assert matroid_from_hyperplanes(u23.hyperplanes(), 3, 2) == u23

    def test_roundtrip_k43(self):
        m = k43()
        assert matroid_from_hyperplanes(m.hyperplanes(), 8, 4) == m

    def test_roundtrip_random(self):
        rng = random.Random(13)
        for _ in range(6):
            m = random_base_matroid(rng, max_elems=7)
            if m.full_rank == 0:
                continue
            assert matroid_from_hyperplanes(m.hyperplanes(), m.n, m.full_rank) == m

    def test_claimed_rank_mismatch(self):
        u23 = uniform_matroid(2, 3)
        with pytest.raises(ValueError):
            matroid_from_hyperplanes(u23.hyperplanes(), 3, 1)


class TestMinorSearch:
    def test_self_minor(self):
        m = uniform_matroid(2, 4)
        assert has_minor_isomorphic_to(m, m)

    def test_uniform_contraction(self):
        assert has_minor_isomorphic_to(uniform_matroid(2, 4), uniform_matroid(1, 3))

    def test_no_bigger_minor(self):
        assert not has_minor_isomorphic_to(uniform_matroid(1, 3), uniform_matroid(2, 4))


class TestDegenerateGrounds:
    def test_empty_matroid(self):
        m = Matroid(0, [])
        assert m.full_rank == 0 and m.circuits == ()
        assert m.dual() == m

    def test_all_loops(self):
        m = uniform_matroid(0, 3)
        assert m.full_rank == 0
        assert m.loops() == 0b111
        assert m.closure(0) == 0b111
        assert is_sparse_paving(m)

    def test_single_element(self):
        free = Matroid(1, [])
        assert free.full_rank == 1
        loop = Matroid(1, [1])
        assert loop.full_rank == 0
        assert free.dual() == loop


def test_rank_cache_safe_under_concurrent_use():
    # The memo table allows concurrent reads and idempotent inserts; hammer
    # one matroid from several threads and check every answer.
    import threading

    m = build_krt(KrtSpec(5, 4))
    masks = [random.Random(s).getrandbits(m.n) for s in range(200)]
    expected = {x: rank_bruteforce(m, x) for x in masks[:40]}
    errors: list[str] = []

    def worker(offset: int) -> None:
        for x in masks[offset::4]:
            got = m.rank(x)
            want = expected.get(x)
            if want is not None and got != want:
                errors.append(f"rank({x}) = {got}, expected {want}")

    threads = [threading.Thread(target=worker, args=(k,)) for k in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    for x, want in expected.items():
        assert m.rank(x) == want


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=255), st.integers(min_value=0, max_value=255))
def test_rank_submodular_on_k43(x: int, y: int):
    m = k43()
    assert m.rank(x | y) + m.rank(x & y) <= m.rank(x) + m.rank(y)


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=255))
def test_closure_idempotent_on_k43(x: int):
    m = k43()
    assert m.closure(m.closure(x)) == m.closure(x)
