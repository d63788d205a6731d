"""Lift constructions: elementary lifts from linear classes and the M^N lift.

The overlay matroid N lives on the circuit list of a base matroid M, indexed
in M's canonical circuit order.  N only has to provide a rank oracle, so both
circuit-family matroids and matrix-backed linear matroids work as overlays.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Protocol

from matlift.core import (
    Mask,
    Matroid,
    ValidationReport,
    circuits_from_rank_oracle,
    one_based,
)


class MatroidLike(Protocol):
    """Rank-oracle view of a matroid on ground set {0, ..., n-1}."""

    n: int

    def rank(self, mask: Mask) -> int: ...

    def closure(self, mask: Mask) -> Mask: ...

    @property
    def full_rank(self) -> int: ...


class LiftConditionError(ValueError):
    """The overlay fails the modular-pair closure condition (*')."""

    def __init__(self, witness: "StarWitness") -> None:
        super().__init__(f"lift condition (*') fails: {witness}")
        self.witness = witness


@dataclass(frozen=True)
class StarWitness:
    """A failing instance: circuit ``c`` escapes cl_N of the collection."""

    collection: tuple[int, ...]
    circuit: int

    def __str__(self) -> str:
        return f"circuit #{self.circuit + 1} not in cl_N of {{{', '.join(str(i + 1) for i in self.collection)}}}"


@dataclass(frozen=True)
class LiftSpec:
    """A base matroid plus an overlay matroid on its circuit list."""

    base: Matroid
    overlay: MatroidLike

    def __post_init__(self) -> None:
        if self.overlay.n != len(self.base.circuits):
            raise ValueError(
                f"overlay ground set has {self.overlay.n} elements, "
                f"base has {len(self.base.circuits)} circuits"
            )


def is_modular_pair(m: Matroid, c1: Mask, c2: Mask) -> bool:
    """True iff distinct circuits c1, c2 satisfy |c1 | c2| - r(c1 | c2) = 2."""
    if c1 == c2:
        raise ValueError("modular pair needs distinct circuits")
    if not (m.is_circuit(c1) and m.is_circuit(c2)):
        raise ValueError("modular pair arguments must be circuits")
    union = c1 | c2
    return union.bit_count() - m.rank(union) == 2


def is_perfect(m: Matroid, circuits: Iterable[Mask]) -> bool:
    """Perfect collection test: nullity of the union equals the collection
    size and no member lies inside the union of the others."""
    col = list(circuits)
    for c in col:
        if not m.is_circuit(c):
            raise ValueError(f"{one_based(c)} is not a circuit")
    if len(set(col)) != len(col):
        return False
    union = 0
    for c in col:
        union |= c
    if union.bit_count() - m.rank(union) != len(col):
        return False
    for i, c in enumerate(col):
        rest = 0
        for j, d in enumerate(col):
            if j != i:
                rest |= d
        if c & ~rest == 0:
            return False
    return True


def is_linear_class(m: Matroid, members: Iterable[int]) -> bool:
    """True iff the circuit-index set is closed under modular pairs: for any
    modular pair inside it, every circuit of M within the union is inside."""
    s = set(members)
    for i in s:
        if not 0 <= i < len(m.circuits):
            raise ValueError(f"circuit index {i} out of range")
    idx = {c: k for k, c in enumerate(m.circuits)}
    for i, j in combinations(sorted(s), 2):
        c1, c2 = m.circuits[i], m.circuits[j]
        union = c1 | c2
        if union.bit_count() - m.rank(union) != 2:
            continue
        for c in m.circuits_within(union):
            if idx[c] not in s:
                return False
    return True


def linear_class_closure(m: Matroid, seed: Iterable[int]) -> frozenset[int]:
    """Smallest linear class containing the given circuit indices."""
    s = set(seed)
    idx = {c: k for k, c in enumerate(m.circuits)}
    changed = True
    while changed:
        changed = False
        for i, j in combinations(sorted(s), 2):
            c1, c2 = m.circuits[i], m.circuits[j]
            union = c1 | c2
            if union.bit_count() - m.rank(union) != 2:
                continue
            for c in m.circuits_within(union):
                k = idx[c]
                if k not in s:
                    s.add(k)
                    changed = True
    return frozenset(s)


def elementary_lift(m: Matroid, members: Iterable[int]) -> Matroid:
    """The elementary lift of M given a linear class of circuits.

    Rank goes up by one on exactly the sets whose restriction has a circuit
    outside the class.  The result is materialized as a circuit family and
    axiom-validated.
    """
    s = frozenset(members)
    if not is_linear_class(m, s):
        raise ValueError("circuit set is not a linear class")
    in_class = [i in s for i in range(len(m.circuits))]

    def lifted_rank(mask: Mask) -> int:
        idxs = m.circuit_indices_within(mask)
        while idxs:
            low = idxs & -idxs
            idxs ^= low
            if not in_class[low.bit_length() - 1]:
                return m.rank(mask) + 1
        return m.rank(mask)

    top = m.full_rank + (0 if len(s) == len(m.circuits) else 1)
    fam = circuits_from_rank_oracle(lifted_rank, m.n, min(m.n, top + 1))
    return Matroid(m.n, fam)


def lift_rank(spec: LiftSpec, mask: Mask) -> int:
    """The lift rank formula r(X) = r_M(X) + r_N({circuits of M|X})."""
    return spec.base.rank(mask) + spec.overlay.rank(spec.base.circuit_indices_within(mask))


def check_star_prime(spec: LiftSpec) -> tuple[bool, Optional[StarWitness]]:
    """Condition (*'): for every modular pair {C1, C2} every circuit of M
    inside C1 | C2 lies in cl_N({C1, C2}).  Returns a witness on failure.

    Closure membership is evaluated by rank comparison, r_N(S + C) = r_N(S),
    which keeps overlays given only by rank oracles cheap.
    """
    m = spec.base
    n = spec.overlay
    idx = {c: k for k, c in enumerate(m.circuits)}
    for i, j in combinations(range(len(m.circuits)), 2):
        c1, c2 = m.circuits[i], m.circuits[j]
        union = c1 | c2
        if union.bit_count() - m.rank(union) != 2:
            continue
        inside = m.circuits_within(union)
        if len(inside) <= 2:
            continue
        pair_mask = (1 << i) | (1 << j)
        pair_rank = n.rank(pair_mask)
        for c in inside:
            k = idx[c]
            if (pair_mask >> k) & 1:
                continue
            if n.rank(pair_mask | (1 << k)) != pair_rank:
                return False, StarWitness((i, j), k)
    return True, None


def check_star(spec: LiftSpec) -> tuple[bool, Optional[StarWitness]]:
    """Condition (*): the closure requirement over every perfect collection.

    Perfect collections are enumerated depth-first by size; every subset of
    a perfect collection is perfect, so branches rooted at a non-perfect
    collection are skipped.  Collection size is bounded by the corank of M.
    """
    m = spec.base
    overlay = spec.overlay
    circuits = m.circuits
    count = len(circuits)
    idx = {c: k for k, c in enumerate(circuits)}
    max_size = min(count, m.n - m.full_rank)

    def violates(chosen: list[int], union: Mask) -> Optional[StarWitness]:
        members = 0
        for i in chosen:
            members |= 1 << i
        members_rank = overlay.rank(members)
        for c in m.circuits_within(union):
            k = idx[c]
            if (members >> k) & 1:
                continue
            if overlay.rank(members | (1 << k)) != members_rank:
                return StarWitness(tuple(chosen), k)
        return None

    def perfect(chosen: list[int], union: Mask) -> bool:
        if union.bit_count() - m.rank(union) != len(chosen):
            return False
        for i in chosen:
            rest = 0
            for j in chosen:
                if j != i:
                    rest |= circuits[j]
            if circuits[i] & ~rest == 0:
                return False
        return True

    def extend(chosen: list[int], union: Mask) -> Optional[StarWitness]:
        if len(chosen) >= 2:
            bad = violates(chosen, union)
            if bad is not None:
                return bad
        if len(chosen) == max_size:
            return None
        start = chosen[-1] + 1 if chosen else 0
        for nxt in range(start, count):
            nunion = union | circuits[nxt]
            chosen.append(nxt)
            if perfect(chosen, nunion):
                bad = extend(chosen, nunion)
                if bad is not None:
                    return bad
            chosen.pop()
        return None

    witness = extend([], 0)
    return (witness is None), witness


def build_lift(spec: LiftSpec) -> Matroid:
    """The lift M^N with rank r(X) = r_M(X) + r_N(circuits of M|X).

    Refuses overlays failing (*'); the result is materialized as a circuit
    family, axiom-validated, and has rank r(M) + r(N).
    """
    ok, witness = check_star_prime(spec)
    if not ok:
        assert witness is not None
        raise LiftConditionError(witness)
    top = spec.base.full_rank + spec.overlay.full_rank
    fam = circuits_from_rank_oracle(
        lambda mask: lift_rank(spec, mask), spec.base.n, min(spec.base.n, top + 1)
    )
    return Matroid(spec.base.n, fam)


def evaluate_lift_formula(spec: LiftSpec) -> tuple[Optional[Matroid], ValidationReport]:
    """Diagnostic mode: evaluate the lift rank formula without requiring (*').

    Checks the rank axioms (normalization, unit increase, local
    submodularity) over all subsets and reports the first violation; when
    none is found the materialized matroid is returned alongside an ok
    report.  Intended for small ground sets only (exhaustive over 2^n
    subsets).
    """
    n = spec.base.n
    if n > 16:
        raise ValueError("diagnostic evaluation is exhaustive; needs n <= 16")
    full = (1 << n) - 1
    ranks = [0] * (full + 1)
    for mask in range(full + 1):
        ranks[mask] = lift_rank(spec, mask)
    if ranks[0] != 0:
        return None, ValidationReport(False, "normalization", (0, ranks[0]))
    for mask in range(full + 1):
        rest = full & ~mask
        while rest:
            low = rest & -rest
            rest ^= low
            gain = ranks[mask | low] - ranks[mask]
            if gain < 0 or gain > 1:
                return None, ValidationReport(
                    False, "unit-increase", (mask, low.bit_length() - 1, gain)
                )
    # Local submodularity r(X+e) + r(X+f) >= r(X+e+f) + r(X) is equivalent
    # to the global form given the other axioms.
    for mask in range(full + 1):
        outside = [1 << e for e in range(n) if not (mask >> e) & 1]
        for a in range(len(outside)):
            for b in range(a + 1, len(outside)):
                e, f = outside[a], outside[b]
                if ranks[mask | e] + ranks[mask | f] < ranks[mask | e | f] + ranks[mask]:
                    return None, ValidationReport(
                        False,
                        "submodularity",
                        (mask, e.bit_length() - 1, f.bit_length() - 1),
                    )
    top = ranks[full]
    fam = circuits_from_rank_oracle(lambda m: ranks[m], n, min(n, top + 1))
    return Matroid(n, fam), ValidationReport(True)


def rank_one_overlay(m: Matroid, loop_indices: Iterable[int]) -> Matroid:
    """Rank-1 matroid on M's circuits: given indices are loops, the rest are
    parallel non-loops (rank 0 when everything is a loop)."""
    loops = set(loop_indices)
    count = len(m.circuits)
    fam: list[Mask] = [1 << i for i in sorted(loops)]
    nonloops = [i for i in range(count) if i not in loops]
    fam.extend((1 << i) | (1 << j) for i, j in combinations(nonloops, 2))
    return Matroid(count, fam, validate=False)


def lift_agrees_with_elementary(m: Matroid, members: Iterable[int]) -> bool:
    """Consistency of the two routes: the M^N lift with the rank-1 overlay
    whose loops are a linear class equals the elementary lift from that
    class."""
    s = frozenset(members)
    if not is_linear_class(m, s):
        raise ValueError("circuit set is not a linear class")
    spec = LiftSpec(m, rank_one_overlay(m, s))
    via_general = build_lift(spec)
    via_elementary = elementary_lift(m, s)
    return via_general == via_elementary
