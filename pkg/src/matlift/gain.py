"""Full gain graphs over finite groups: balance, switching, and the lifts.

The full gain graph on n vertices over a group has every group label on
every vertex pair; the edge (i, j, label) with i < j is oriented from i to
j.  Edges are enumerated canonically (vertex pairs lexicographic, labels in
group order) and edge sets are bit masks over that enumeration, so they plug
directly into the matroid kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable, Optional, Sequence

from matlift.core import (
    Mask,
    Matroid,
    elements_of,
    mask_of,
    matroid_from_hyperplanes,
    validate_hyperplanes,
)
from matlift.core import HyperplaneAxiomError, is_quotient
from matlift.groups import FinGroup, GroupPartition, primitive_partition
from matlift.lifts import elementary_lift, is_linear_class


class NoPartitionError(ValueError):
    """The group has no nontrivial partition, so the rank-2 lift does not exist."""


@dataclass(frozen=True)
class GainEdge:
    """Edge (i, j, label) with 0-based vertices i < j, oriented i -> j."""

    i: int
    j: int
    label: int

    def __post_init__(self) -> None:
        if not 0 <= self.i < self.j:
            raise ValueError(f"need 0 <= i < j, got ({self.i}, {self.j})")


class GainGraph:
    """The full gain graph on n >= 3 vertices over a finite group."""

    __slots__ = ("group", "n", "edges", "_index")

    def __init__(self, group: FinGroup, n: int) -> None:
        if n < 3:
            raise ValueError("gain graphs here have at least 3 vertices")
        count = n * (n - 1) // 2 * group.order
        if count > 64:
            raise ValueError(f"edge count {count} exceeds the 64-element cap")
        self.group = group
        self.n = n
        self.edges = tuple(
            GainEdge(i, j, label)
            for i, j in combinations(range(n), 2)
            for label in range(group.order)
        )
        self._index = {(e.i, e.j, e.label): k for k, e in enumerate(self.edges)}

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def full_mask(self) -> Mask:
        return (1 << len(self.edges)) - 1

    def edge_index(self, i: int, j: int, label: int) -> int:
        return self._index[(i, j, label)]

    def pair_mask(self, i: int, j: int) -> Mask:
        """All edges between a fixed vertex pair."""
        return mask_of(
            self.edge_index(i, j, label) for label in range(self.group.order)
        )

    def labels_mask(self, labels: Iterable[int]) -> Mask:
        """E_A: all edges whose label lies in the given set."""
        lab = set(labels)
        return mask_of(
            k for k, e in enumerate(self.edges) if e.label in lab
        )

    def switch_edge(self, edge: GainEdge, k: int, beta: int) -> GainEdge:
        """Switching at vertex k with value beta: label alpha becomes
        beta^-1 * alpha when i = k, alpha * beta when j = k."""
        g = self.group
        if edge.i == k:
            return GainEdge(edge.i, edge.j, g.mul(g.inv(beta), edge.label))
        if edge.j == k:
            return GainEdge(edge.i, edge.j, g.mul(edge.label, beta))
        return edge

    def switch_mask(self, mask: Mask, k: int, beta: int) -> Mask:
        out = 0
        for idx in elements_of(mask):
            e = self.switch_edge(self.edges[idx], k, beta)
            out |= 1 << self.edge_index(e.i, e.j, e.label)
        return out


def full_gain_graph(group: FinGroup, n: int) -> GainGraph:
    return GainGraph(group, n)


@dataclass(frozen=True)
class Cycle:
    """A cycle of the underlying multigraph, as a closed edge walk."""

    edges: tuple[int, ...]
    mask: Mask


def cycles(gg: GainGraph) -> list[Cycle]:
    """All cycles: parallel pairs on 2 vertex sets and, on k >= 3 vertices,
    one label choice per consecutive pair along each cyclic vertex order."""
    out: list[Cycle] = []
    order = gg.group.order
    for i, j in combinations(range(gg.n), 2):
        for a, b in combinations(range(order), 2):
            e1 = gg.edge_index(i, j, a)
            e2 = gg.edge_index(i, j, b)
            out.append(Cycle((e1, e2), (1 << e1) | (1 << e2)))
    for k in range(3, gg.n + 1):
        for verts in combinations(range(gg.n), k):
            v0 = verts[0]
            for middle in permutations(verts[1:]):
                if middle[0] > middle[-1]:
                    continue  # each cyclic order once, up to direction
                walk = (v0, *middle, v0)
                pairs = [tuple(sorted((walk[s], walk[s + 1]))) for s in range(k)]
                for labels in product(range(order), repeat=k):
                    idxs = tuple(
                        gg.edge_index(p[0], p[1], lab) for p, lab in zip(pairs, labels)
                    )
                    out.append(Cycle(idxs, mask_of(idxs)))
    return out


def _cycle_walk(gg: GainGraph, edge_indices: Sequence[int]) -> list[tuple[GainEdge, bool]]:
    """Order the edges of a cycle into a closed walk from its smallest vertex.

    Returns (edge, forward) pairs, forward meaning traversal i -> j.  The
    walk starts at the smallest vertex and leaves along the lowest-indexed
    incident edge, which fixes the traversal for balance evaluation.
    """
    edges = [gg.edges[k] for k in edge_indices]
    if len(edges) != len(set(edge_indices)):
        raise ValueError("repeated edges do not form a cycle")
    incidence: dict[int, list[int]] = {}
    for pos, e in enumerate(edges):
        incidence.setdefault(e.i, []).append(pos)
        incidence.setdefault(e.j, []).append(pos)
    if any(len(v) != 2 for v in incidence.values()):
        raise ValueError("edge set is not a single cycle (vertex degree != 2)")
    start = min(incidence)
    walk: list[tuple[GainEdge, bool]] = []
    used = [False] * len(edges)
    at = start
    pos = min(incidence[start])
    for _ in range(len(edges)):
        used[pos] = True
        e = edges[pos]
        forward = e.i == at
        walk.append((e, forward))
        at = e.j if forward else e.i
        nxt = [q for q in incidence[at] if not used[q]]
        if not nxt:
            break
        pos = nxt[0]
    if len(walk) != len(edges) or at != start:
        raise ValueError("edge set is not a single closed cycle")
    return walk


def is_balanced(gg: GainGraph, edge_indices: Sequence[int] | Mask) -> bool:
    """True iff the oriented label product along the cycle is the identity.

    An edge traversed against its i -> j orientation contributes the inverse
    of its label.  The outcome does not depend on the traversal choice
    (reversal inverts the product, rotation conjugates it).
    """
    if isinstance(edge_indices, int):
        edge_indices = elements_of(edge_indices)
    g = gg.group
    prod_val = g.identity
    for e, forward in _cycle_walk(gg, edge_indices):
        contrib = e.label if forward else g.inv(e.label)
        prod_val = g.mul(prod_val, contrib)
    return prod_val == g.identity


def switching_orbit(gg: GainGraph, mask: Mask) -> tuple[Mask, list[Mask]]:
    """Canonical form (lexicographically least mask) and the full orbit of an
    edge set under all switchings.  Composite switchings send the label of
    (i, j) to g_i^-1 * label * g_j, so the orbit is the image over all
    per-vertex value tuples."""
    g = gg.group
    if g.order ** gg.n > 1 << 20:
        raise ValueError("switching orbit enumeration too large")
    seen: set[Mask] = set()
    for values in product(range(g.order), repeat=gg.n):
        image = 0
        for idx in elements_of(mask):
            e = gg.edges[idx]
            lab = g.mul(g.mul(g.inv(values[e.i]), e.label), values[e.j])
            image |= 1 << gg.edge_index(e.i, e.j, lab)
        seen.add(image)
    orbit = sorted(seen)
    return orbit[0], orbit


def graphic_matroid(gg: GainGraph) -> Matroid:
    """The matroid of the underlying multigraph: circuits are its cycles."""
    return Matroid(len(gg.edges), (c.mask for c in cycles(gg)))


def balanced_class_indices(gg: GainGraph, m: Matroid) -> frozenset[int]:
    """Indices (in m's canonical circuit order) of the balanced cycles."""
    return frozenset(
        k for k, c in enumerate(m.circuits) if is_balanced(gg, elements_of(c))
    )


def zaslavsky_lift(gg: GainGraph) -> Matroid:
    """The elementary lift of the graphic matroid along the balanced cycles.

    Balanced cycles always form a linear class; a failure here would be an
    internal error, not bad input.  In the lift a cycle is a circuit iff it
    is balanced.
    """
    base = graphic_matroid(gg)
    balanced = balanced_class_indices(gg, base)
    if not is_linear_class(base, balanced):
        raise AssertionError("balanced cycles failed the linear class check")
    return elementary_lift(base, balanced)


@dataclass(frozen=True)
class CycleAuditRow:
    edges: tuple[int, ...]
    balanced: bool
    is_circuit: bool


@dataclass(frozen=True)
class CycleAuditReport:
    """Per-cycle comparison of balance against circuit membership."""

    rows: tuple[CycleAuditRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.balanced == r.is_circuit for r in self.rows)

    @property
    def first_mismatch(self) -> Optional[CycleAuditRow]:
        return next((r for r in self.rows if r.balanced != r.is_circuit), None)


def balanced_circuit_audit(m: Matroid, gg: GainGraph) -> CycleAuditReport:
    """Check that a matroid on the edges of ``gg`` has exactly the balanced
    cycles among its circuits (the membership test per cycle)."""
    if m.n != len(gg.edges):
        raise ValueError("matroid is not on the edge set of the gain graph")
    rows = []
    for cyc in cycles(gg):
        rows.append(
            CycleAuditRow(
                edges=cyc.edges,
                balanced=is_balanced(gg, cyc.edges),
                is_circuit=m.is_circuit(cyc.mask),
            )
        )
    return CycleAuditReport(tuple(rows))


@dataclass(frozen=True)
class Rank2LiftResult:
    """The rank-2 lift of the 3-vertex gain graph plus its certificate data."""

    matroid: Matroid
    gain_graph: GainGraph
    partition: GroupPartition
    hyperplanes: tuple[Mask, ...]
    audit: CycleAuditReport
    quotient_ok: bool


def rank2_lift_k3(group: FinGroup) -> Rank2LiftResult:
    """The rank-2 lift of the graphic matroid of the full 3-vertex gain graph
    over a group with a nontrivial partition.

    Hyperplanes are (a) the switching orbits of the label sets A | {identity}
    for parts A of the primitive partition and (b) the three per-pair edge
    sets.  The family is validated, the matroid built through duality at
    claimed rank 4, and the construction is certified by the balance audit
    and the quotient test against the graphic matroid.
    """
    if group.order > 8:
        raise ValueError("rank-2 lift construction is capped at group order 8")
    partition = primitive_partition(group)
    if partition is None:
        raise NoPartitionError(f"{group.name} has no nontrivial partition")
    gg = GainGraph(group, 3)
    eps = group.identity

    hyperplanes: set[Mask] = set()
    for part in partition.parts:
        seed = gg.labels_mask(set(part) | {eps})
        _, orbit = switching_orbit(gg, seed)
        hyperplanes.update(orbit)
    for i, j in combinations(range(3), 2):
        hyperplanes.add(gg.pair_mask(i, j))
    fam = tuple(sorted(hyperplanes))

    report = validate_hyperplanes(fam, len(gg.edges))
    if not report.ok:
        raise HyperplaneAxiomError(report)
    lift = matroid_from_hyperplanes(fam, len(gg.edges), 4)
    if lift.full_rank != 4:
        raise AssertionError("lift rank is not 4")
    audit = balanced_circuit_audit(lift, gg)
    if not audit.ok:
        raise AssertionError(f"balance audit failed at {audit.first_mismatch}")
    quotient_ok = is_quotient(graphic_matroid(gg), lift)
    if not quotient_ok:
        raise AssertionError("graphic matroid is not a quotient of the lift")
    return Rank2LiftResult(lift, gg, partition, fam, audit, quotient_ok)
