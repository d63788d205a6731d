"""Circuit-based matroid kernel.

Matroids are stored by their circuit families (minimal dependent sets) over
a ground set {0, ..., n-1} with n <= 64.  Subsets are plain Python ints used
as bit masks; element i corresponds to bit ``1 << i``.  File formats and CLI
surfaces are 1-based, the conversion happens at the I/O boundary.

All operations are pure functions of their inputs.  A ``Matroid`` is
immutable after construction except for its rank memo table, which is a
grow-only dict (atomic under the GIL, idempotent inserts), so values can be
shared freely across threads.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Iterator, Optional, Sequence

Mask = int

MAX_GROUND = 64

RANK_CACHE_LIMIT = 1 << 20


class CircuitAxiomError(ValueError):
    """A would-be circuit family violates the circuit axioms."""

    def __init__(self, report: "ValidationReport") -> None:
        super().__init__(f"invalid circuit family: {report.describe()}")
        self.report = report


class HyperplaneAxiomError(ValueError):
    """A would-be hyperplane family violates the hyperplane axioms."""

    def __init__(self, report: "ValidationReport") -> None:
        super().__init__(f"invalid hyperplane family: {report.describe()}")
        self.report = report


class SearchBudgetExceeded(RuntimeError):
    """An exhaustive search ran out of its node budget.

    Distinct from a negative answer: the search neither found a witness nor
    proved that none exists.
    """


def mask_of(elements: Iterable[int]) -> Mask:
    """Pack 0-based element indices into a bit mask."""
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: Mask) -> list[int]:
    """Unpack a bit mask into a sorted list of 0-based elements."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def one_based(mask: Mask) -> list[int]:
    return [e + 1 for e in elements_of(mask)]


def subsets_of_size(universe: Mask, k: int) -> Iterator[Mask]:
    """All k-element submasks of ``universe``."""
    elems = elements_of(universe)
    if k > len(elems):
        return
    for combo in combinations(elems, k):
        m = 0
        for e in combo:
            m |= 1 << e
        yield m


def submasks(mask: Mask) -> Iterator[Mask]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def canonical_circuits(circuits: Iterable[Mask]) -> tuple[Mask, ...]:
    """Deduplicate and sort by (popcount, numeric value); ties impossible."""
    return tuple(sorted(set(circuits), key=lambda c: (c.bit_count(), c)))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of an axiom check: ``ok`` or the first violation found."""

    ok: bool
    kind: str = "ok"
    witness: tuple = ()
    sampled: bool = False

    def describe(self) -> str:
        if self.ok:
            return "ok (sampled)" if self.sampled else "ok"
        if self.kind in ("elimination", "exchange"):
            a, b, e = self.witness
            return f"{self.kind} fails at ({one_based(a)}, {one_based(b)}) with element {e + 1}"
        if self.witness and all(isinstance(w, int) for w in self.witness):
            sets = ", ".join(str(one_based(w)) for w in self.witness)
            return f"{self.kind} witness={sets}"
        return f"{self.kind} witness={self.witness}"


def _check_members(members: Sequence[Mask], n: int) -> Optional[ValidationReport]:
    full = (1 << n) - 1
    for m in members:
        if m == 0:
            return ValidationReport(False, "empty-member", (m,))
        if m & ~full:
            return ValidationReport(False, "out-of-range", (m,))
    return None


def validate_circuits(
    circuits: Sequence[Mask],
    n: int,
    *,
    max_pairs: Optional[int] = None,
    seed: int = 0,
) -> ValidationReport:
    """Check the circuit axioms: nonempty members, antichain, elimination.

    Elimination is checked pairwise: for distinct circuits C1, C2 and
    e in C1 & C2 there must be a circuit inside (C1 | C2) with e removed.
    Equivalently the intersection of all circuits inside C1 | C2 must miss
    C1 & C2; that form lets each pair short-circuit as soon as the running
    intersection empties.

    When ``max_pairs`` is given and the family has more pairs than that,
    a deterministic random sample of pairs is checked instead and the
    report is flagged ``sampled``.
    """
    bad = _check_members(circuits, n)
    if bad is not None:
        return bad
    fam = canonical_circuits(circuits)
    m = len(fam)
    sizes = [c.bit_count() for c in fam]

    total_pairs = m * (m - 1) // 2
    sampled = max_pairs is not None and total_pairs > max_pairs
    if sampled:
        rng = random.Random(seed)
        pair_iter: Iterable[tuple[int, int]] = (
            tuple(sorted(rng.sample(range(m), 2))) for _ in range(max_pairs or 0)
        )
    else:
        pair_iter = ((i, j) for i in range(m) for j in range(i + 1, m))

    for i, j in pair_iter:
        ci, cj = fam[i], fam[j]
        # Canonical order makes ci the smaller set, so one test covers both
        # containment directions (and duplicates).
        if ci & ~cj == 0:
            return ValidationReport(False, "antichain", (ci, cj), sampled)
        inter = ci & cj
        if inter == 0:
            continue
        union = ci | cj
        usize = union.bit_count()
        remaining = inter
        for k, c in enumerate(fam):
            if sizes[k] > usize:
                break
            if c & ~union == 0:
                remaining &= c
                if remaining == 0:
                    break
        if remaining:
            e = (remaining & -remaining).bit_length() - 1
            return ValidationReport(False, "elimination", (ci, cj, e), sampled)
    return ValidationReport(True, "ok", (), sampled)


class Matroid:
    """A matroid given by its circuit family on ground set {0, ..., n-1}.

    The rank oracle is greedy independent-set extension in ascending element
    order (correct for matroids) with a memo table capped at 2**20 entries;
    past the cap new results are computed but not cached.
    """

    __slots__ = ("n", "circuits", "_sizes", "_circuit_set", "_rank_cache", "_full_rank")

    def __init__(
        self,
        n: int,
        circuits: Iterable[Mask],
        *,
        validate: bool = True,
        max_pairs: Optional[int] = None,
    ) -> None:
        if not 0 <= n <= MAX_GROUND:
            raise ValueError(f"ground set size {n} outside [0, {MAX_GROUND}]")
        fam = canonical_circuits(circuits)
        if validate:
            report = validate_circuits(fam, n, max_pairs=max_pairs)
            if not report.ok:
                raise CircuitAxiomError(report)
        else:
            bad = _check_members(fam, n)
            if bad is not None:
                raise CircuitAxiomError(bad)
        self.n = n
        self.circuits = fam
        self._sizes = tuple(c.bit_count() for c in fam)
        self._circuit_set = frozenset(fam)
        self._rank_cache: dict[Mask, int] = {0: 0}
        self._full_rank: Optional[int] = None

    @property
    def full_mask(self) -> Mask:
        return (1 << self.n) - 1

    @property
    def full_rank(self) -> int:
        if self._full_rank is None:
            self._full_rank = self.rank(self.full_mask)
        return self._full_rank

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        return self.n == other.n and self.circuits == other.circuits

    def __hash__(self) -> int:
        return hash((self.n, self.circuits))

    def __repr__(self) -> str:
        return f"Matroid(n={self.n}, circuits={len(self.circuits)}, rank={self.full_rank})"

    def is_circuit(self, mask: Mask) -> bool:
        return mask in self._circuit_set

    def contains_circuit(self, mask: Mask) -> bool:
        """True iff some circuit is a subset of ``mask``."""
        msize = mask.bit_count()
        for size, c in zip(self._sizes, self.circuits):
            if size > msize:
                return False
            if c & ~mask == 0:
                return True
        return False

    def is_independent(self, mask: Mask) -> bool:
        return not self.contains_circuit(mask)

    def rank(self, mask: Mask) -> int:
        cached = self._rank_cache.get(mask)
        if cached is not None:
            return cached
        indep = 0
        isize = 0
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            cand = indep | low
            csize = isize + 1
            hit = False
            for size, c in zip(self._sizes, self.circuits):
                if size > csize:
                    break
                if c & ~cand == 0:
                    hit = True
                    break
            if not hit:
                indep = cand
                isize = csize
        if len(self._rank_cache) < RANK_CACHE_LIMIT:
            self._rank_cache[mask] = isize
        return isize

    def closure(self, mask: Mask) -> Mask:
        r = self.rank(mask)
        closed = mask
        rest = self.full_mask & ~mask
        while rest:
            low = rest & -rest
            rest ^= low
            if self.rank(mask | low) == r:
                closed |= low
        return closed

    def is_flat(self, mask: Mask) -> bool:
        return self.closure(mask) == mask

    def loops(self) -> Mask:
        out = 0
        for size, c in zip(self._sizes, self.circuits):
            if size > 1:
                break
            out |= c
        return out

    def circuits_within(self, mask: Mask) -> list[Mask]:
        """Circuits of the restriction M|mask (exactly those inside mask)."""
        msize = mask.bit_count()
        out = []
        for size, c in zip(self._sizes, self.circuits):
            if size > msize:
                break
            if c & ~mask == 0:
                out.append(c)
        return out

    def circuit_indices_within(self, mask: Mask) -> Mask:
        """Same as ``circuits_within`` but as a bit mask of circuit indices."""
        msize = mask.bit_count()
        out = 0
        for idx, c in enumerate(self.circuits):
            if self._sizes[idx] > msize:
                break
            if c & ~mask == 0:
                out |= 1 << idx
        return out

    def delete(self, removed: Mask) -> "Matroid":
        """M \\ removed, with survivors relabeled to 0..n'-1 preserving order."""
        kept, relabel = _relabel_map(self.n, removed)
        fam = [_compress(c, relabel) for c in self.circuits if c & removed == 0]
        return Matroid(len(kept), fam, validate=False)

    def contract(self, removed: Mask) -> "Matroid":
        """M / removed, with survivors relabeled to 0..n'-1 preserving order."""
        kept, relabel = _relabel_map(self.n, removed)
        reduced = {c & ~removed for c in self.circuits}
        reduced.discard(0)
        minimal = _minimal_sets(reduced)
        fam = [_compress(c, relabel) for c in minimal]
        return Matroid(len(kept), fam, validate=False)

    def dual(self) -> "Matroid":
        full = self.full_mask
        r = self.full_rank

        def dual_rank(mask: Mask) -> int:
            return mask.bit_count() + self.rank(full & ~mask) - r

        fam = circuits_from_rank_oracle(dual_rank, self.n, self.n - r + 1)
        return Matroid(self.n, fam, validate=False)

    def flats(self) -> list[Mask]:
        """All flats (closure-fixed sets), by lattice walk from cl(empty)."""
        bottom = self.closure(0)
        seen = {bottom}
        frontier = [bottom]
        while frontier:
            nxt = []
            for f in frontier:
                rest = self.full_mask & ~f
                while rest:
                    low = rest & -rest
                    rest ^= low
                    g = self.closure(f | low)
                    if g not in seen:
                        seen.add(g)
                        nxt.append(g)
            frontier = nxt
        return sorted(seen, key=lambda m: (m.bit_count(), m))

    def hyperplanes(self) -> list[Mask]:
        r = self.full_rank
        return [f for f in self.flats() if self.rank(f) == r - 1]

    def is_basis(self, mask: Mask) -> bool:
        return mask.bit_count() == self.full_rank and self.is_independent(mask)

    def is_circuit_hyperplane(self, mask: Mask) -> bool:
        return self.is_circuit(mask) and self.rank(mask) == self.full_rank - 1 and self.is_flat(mask)

    def circuit_hyperplanes(self) -> list[Mask]:
        return [c for c in self.circuits if self.is_circuit_hyperplane(c)]


def _relabel_map(n: int, removed: Mask) -> tuple[list[int], dict[int, int]]:
    kept = [e for e in range(n) if not (removed >> e) & 1]
    return kept, {e: i for i, e in enumerate(kept)}


def _compress(mask: Mask, relabel: dict[int, int]) -> Mask:
    out = 0
    for e in elements_of(mask):
        out |= 1 << relabel[e]
    return out


def _minimal_sets(sets: Iterable[Mask]) -> list[Mask]:
    """Subset-minimal members of a family of masks."""
    ordered = sorted(set(sets), key=lambda m: (m.bit_count(), m))
    minimal: list[Mask] = []
    for cand in ordered:
        if not any(c & ~cand == 0 for c in minimal):
            minimal.append(cand)
    return minimal


def circuits_from_rank_oracle(
    rank_fn: Callable[[Mask], int],
    n: int,
    max_size: int,
    *,
    universe: Optional[Mask] = None,
) -> list[Mask]:
    """Materialize the minimal dependent sets of a matroid rank function.

    Enumerates subsets in size order up to ``max_size``; a set is a circuit
    iff it is dependent while all its one-element deletions are independent.
    ``rank_fn`` must be a genuine matroid rank function for this to be the
    circuit family.
    """
    if universe is None:
        universe = (1 << n) - 1
    cache: dict[Mask, int] = {0: 0}

    def rank(mask: Mask) -> int:
        got = cache.get(mask)
        if got is None:
            got = rank_fn(mask)
            cache[mask] = got
        return got

    out: list[Mask] = []
    for k in range(1, max_size + 1):
        for mask in subsets_of_size(universe, k):
            if rank(mask) >= k:
                continue
            rest = mask
            minimal = True
            while rest:
                low = rest & -rest
                rest ^= low
                if rank(mask ^ low) < k - 1:
                    minimal = False
                    break
            if minimal:
                out.append(mask)
    return out


def uniform_matroid(r: int, n: int) -> Matroid:
    """U_{r,n}: circuits are all (r+1)-element subsets."""
    if not 0 <= r <= n:
        raise ValueError(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
    full = (1 << n) - 1
    return Matroid(n, subsets_of_size(full, r + 1), validate=False)


def is_quotient(quotient: Matroid, lift: Matroid) -> bool:
    """True iff every flat of ``quotient`` is a flat of ``lift``.

    This is the lift/quotient oracle: ``lift`` is a lift of ``quotient``
    exactly when this holds.
    """
    if quotient.n != lift.n:
        raise ValueError("is_quotient needs a common ground set")
    return all(lift.closure(f) == f for f in quotient.flats())


def is_sparse_paving(m: Matroid) -> bool:
    """True iff every rank(M)-element subset is a basis or a circuit-hyperplane."""
    r = m.full_rank
    if r == 0:
        return m.n == 0 or all(c.bit_count() == 1 for c in m.circuits)
    for mask in subsets_of_size(m.full_mask, r):
        if m.is_circuit(mask):
            if m.closure(mask) != mask:
                return False
        elif m.contains_circuit(mask):
            return False
    return True


def relax(m: Matroid, hyperplane: Mask) -> Matroid:
    """Relax a circuit-hyperplane into a basis.

    Recomputes the full circuit family from the relaxed rank function and
    re-validates, rather than patching the old family.
    """
    if not m.is_circuit_hyperplane(hyperplane):
        raise ValueError(f"{one_based(hyperplane)} is not a circuit-hyperplane")
    r = m.full_rank

    def relaxed_rank(mask: Mask) -> int:
        if mask == hyperplane:
            return r
        return m.rank(mask)

    fam = circuits_from_rank_oracle(relaxed_rank, m.n, r + 1)
    return Matroid(m.n, fam)


# ---------------------------------------------------------------------------
# isomorphism and minors


def _element_signatures(m: Matroid) -> list[tuple]:
    by_size: list[dict[int, int]] = [dict() for _ in range(m.n)]
    for c in m.circuits:
        size = c.bit_count()
        for e in elements_of(c):
            by_size[e][size] = by_size[e].get(size, 0) + 1
    sig1 = [tuple(sorted(d.items())) for d in by_size]
    # One refinement round: multiset of co-circuit neighbours' base signatures.
    neigh: list[list[tuple]] = [[] for _ in range(m.n)]
    for c in m.circuits:
        elems = elements_of(c)
        for e in elems:
            neigh[e].extend(sig1[f] for f in elems if f != e)
    return [(sig1[e], tuple(sorted(neigh[e]))) for e in range(m.n)]


def find_isomorphism(
    m1: Matroid,
    m2: Matroid,
    *,
    node_budget: int = 10**7,
) -> Optional[list[int]]:
    """A ground-set bijection mapping circuits onto circuits, or None.

    Backtracks on element images ordered by circuit-degree signatures.
    Raises SearchBudgetExceeded past ``node_budget`` search nodes, which is
    an explicitly different outcome from "not isomorphic".
    """
    if m1.n != m2.n or len(m1.circuits) != len(m2.circuits):
        return None
    if sorted(m1._sizes) != sorted(m2._sizes) or m1.full_rank != m2.full_rank:
        return None
    sig1 = _element_signatures(m1)
    sig2 = _element_signatures(m2)
    if sorted(sig1) != sorted(sig2):
        return None

    classes2: dict[tuple, list[int]] = {}
    for f, s in enumerate(sig2):
        classes2.setdefault(s, []).append(f)
    # Most constrained first: small signature classes early.
    order = sorted(range(m1.n), key=lambda e: (len(classes2.get(sig1[e], ())), sig1[e], e))

    circ2_set = m2._circuit_set
    circ1_set = m1._circuit_set
    circs1_at: list[list[Mask]] = [[] for _ in range(m1.n)]
    for c in m1.circuits:
        for e in elements_of(c):
            circs1_at[e].append(c)
    circs2_at: list[list[Mask]] = [[] for _ in range(m2.n)]
    for c in m2.circuits:
        for e in elements_of(c):
            circs2_at[e].append(c)

    image = [-1] * m1.n
    preimage = [-1] * m2.n
    nodes = 0

    def apply(mask: Mask, mapping: list[int]) -> Mask:
        out = 0
        for e in elements_of(mask):
            out |= 1 << mapping[e]
        return out

    def extend(pos: int, dom_mask: Mask, img_mask: Mask) -> bool:
        nonlocal nodes
        if pos == len(order):
            return True
        e = order[pos]
        for f in classes2[sig1[e]]:
            if (img_mask >> f) & 1:
                continue
            nodes += 1
            if nodes > node_budget:
                raise SearchBudgetExceeded(f"isomorphism search exceeded {node_budget} nodes")
            image[e] = f
            preimage[f] = e
            ndom = dom_mask | (1 << e)
            nimg = img_mask | (1 << f)
            ok = True
            for c in circs1_at[e]:
                if c & ~ndom == 0 and apply(c, image) not in circ2_set:
                    ok = False
                    break
            if ok:
                for c in circs2_at[f]:
                    if c & ~nimg == 0 and apply(c, preimage) not in circ1_set:
                        ok = False
                        break
            if ok and extend(pos + 1, ndom, nimg):
                return True
            image[e] = -1
            preimage[f] = -1
        return False

    if extend(0, 0, 0):
        return list(image)
    return None


def minors_with_shape(
    m: Matroid,
    target_rank: int,
    target_size: int,
) -> Iterator[tuple[Mask, Mask, Matroid]]:
    """All minors of given rank and size as (contracted, deleted, minor).

    Enumerates independent contraction sets and coindependent deletion sets;
    every minor of that shape arises this way.
    """
    c_size = m.full_rank - target_rank
    d_size = (m.n - target_size) - c_size
    if c_size < 0 or d_size < 0:
        return
    for cmask in subsets_of_size(m.full_mask, c_size):
        if not m.is_independent(cmask):
            continue
        contracted = m.contract(cmask)
        kept, _ = _relabel_map(m.n, cmask)
        r = contracted.full_rank
        for dmask_small in subsets_of_size(contracted.full_mask, d_size):
            if contracted.rank(contracted.full_mask & ~dmask_small) != r:
                continue
            dmask = mask_of(kept[e] for e in elements_of(dmask_small))
            yield cmask, dmask, contracted.delete(dmask_small)


def has_minor_isomorphic_to(m: Matroid, target: Matroid, *, node_budget: int = 10**7) -> bool:
    """True iff some contract-then-delete sequence yields a matroid isomorphic to target."""
    if target.n > m.n or target.full_rank > m.full_rank:
        return False
    if (target.n - target.full_rank) > (m.n - m.full_rank):
        return False
    for _, _, minor in minors_with_shape(m, target.full_rank, target.n):
        if find_isomorphism(minor, target, node_budget=node_budget) is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# hyperplane-side construction


def validate_hyperplanes(
    hyperplanes: Sequence[Mask],
    n: int,
    *,
    max_pairs: Optional[int] = None,
    seed: int = 0,
) -> ValidationReport:
    """Check the hyperplane axioms: proper antichain plus exchange.

    Exchange: for all distinct H1, H2 and every element e outside H1 | H2
    there is a family member containing (H1 & H2) | {e}.  Unlike circuits,
    the empty set is a legal hyperplane (rank-1 loopless matroids); the full
    ground set is not.
    """
    full = (1 << n) - 1
    fam = canonical_circuits(hyperplanes)
    for h in fam:
        if h & ~full:
            return ValidationReport(False, "out-of-range", (h,))
        if h == full:
            return ValidationReport(False, "improper-member", (h,))
    m = len(fam)

    total_pairs = m * (m - 1) // 2
    sampled = max_pairs is not None and total_pairs > max_pairs
    if sampled:
        rng = random.Random(seed)
        pair_iter: Iterable[tuple[int, int]] = (
            tuple(sorted(rng.sample(range(m), 2))) for _ in range(max_pairs or 0)
        )
    else:
        pair_iter = ((i, j) for i in range(m) for j in range(i + 1, m))

    for i, j in pair_iter:
        h1, h2 = fam[i], fam[j]
        if h1 & ~h2 == 0:
            return ValidationReport(False, "antichain", (h1, h2), sampled)
        outside = full & ~(h1 | h2)
        if outside == 0:
            continue
        inter = h1 & h2
        covered = 0
        for h in fam:
            if inter & ~h == 0:
                covered |= h
                if outside & ~covered == 0:
                    break
        if outside & ~covered:
            e = ((outside & ~covered) & -(outside & ~covered)).bit_length() - 1
            return ValidationReport(False, "exchange", (h1, h2, e), sampled)
    return ValidationReport(True, "ok", (), sampled)


def matroid_from_hyperplanes(hyperplanes: Sequence[Mask], n: int, claimed_rank: int) -> Matroid:
    """Build the matroid whose hyperplane family is the given one.

    Route: complements of hyperplanes are the cocircuits, i.e. the circuits
    of the dual; those are validated under the circuit axioms, the dual
    matroid is built from them, and the primal is materialized through
    r(X) = r*(E-X) - |E-X| + r(E).
    """
    report = validate_hyperplanes(hyperplanes, n)
    if not report.ok:
        raise HyperplaneAxiomError(report)
    full = (1 << n) - 1
    cocircuits = [full ^ h for h in hyperplanes]
    dual = Matroid(n, cocircuits)  # raises CircuitAxiomError if complements are bad
    rank = n - dual.full_rank
    if rank != claimed_rank:
        raise ValueError(f"hyperplane family has rank {rank}, expected {claimed_rank}")

    def primal_rank(mask: Mask) -> int:
        co = full & ~mask
        return dual.rank(co) - co.bit_count() + rank

    fam = circuits_from_rank_oracle(primal_rank, n, rank + 1)
    made = Matroid(n, fam, validate=False)
    if made.full_rank != claimed_rank:
        raise ValueError(f"materialized rank {made.full_rank} != claimed {claimed_rank}")
    return made
