"""Finite changes near the root, inducing on top cylinders, first-return checks.

Editing finitely many levels of a diagram never changes the isomorphism class
of its stage-indexed group, only the distinguished unit; removing top edges
corresponds to inducing the dynamics on the union of the kept level-1
cylinders.  Only unions of level-1 cylinders are accepted here.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .diagram import BratteliDiagram, Edge, OrderedDiagram, VertexId
from .dimension import GroupElement, GroupPresentation
from .stationary import (
    NotProperlyOrderedError,
    StationaryOrderedDiagram,
    min_cycle,
    properly_ordered,
)
from .vershik import minimal_path


@dataclass(frozen=True)
class FiniteChange:
    """Replacement vertex and ordered edge lists for levels 1..depth."""

    levels: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[Edge, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(tuple(lv) for lv in self.levels))
        object.__setattr__(
            self, "edges", tuple(tuple(Edge(*e) for e in lv) for lv in self.edges)
        )
        if len(self.levels) != len(self.edges):
            raise ValueError("a change replaces the same number of vertex and edge levels")

    @property
    def depth(self) -> int:
        return len(self.levels)

    @classmethod
    def capture(cls, od: BratteliDiagram, depth: int) -> "FiniteChange":
        """Change that restores the first `depth` levels of the given diagram."""
        if not (0 <= depth <= od.depth):
            raise ValueError(f"depth {depth} outside represented depth {od.depth}")
        return cls(od.levels[1 : depth + 1], od.edges[:depth])


def apply_finite_change(od: OrderedDiagram, ch: FiniteChange) -> OrderedDiagram:
    """Splice the replacement levels in; everything above the change is kept.

    The result must still be a valid ordered diagram, otherwise this raises.
    """
    L = ch.depth
    if L > od.depth:
        raise ValueError(f"change depth {L} exceeds represented depth {od.depth}")
    levels = (od.levels[0],) + ch.levels + od.levels[L + 1 :]
    edges = ch.edges + od.edges[L:]
    out = OrderedDiagram(levels, edges)
    report = out.validate()
    if report:
        raise ValueError("; ".join(v.message for v in report))
    return out


def change_stationary_top(
    sd: StationaryOrderedDiagram, new_top_word: Sequence[str]
) -> StationaryOrderedDiagram:
    """Depth-1 change that keeps the stationary tail: replace the top word."""
    out = StationaryOrderedDiagram(sd.alphabet, tuple(new_top_word), sd.words)
    if properly_ordered(sd) and not properly_ordered(out):
        raise NotProperlyOrderedError("top change broke proper ordering")
    return out


def induce_on_top(od: OrderedDiagram, keep: Iterable[int]) -> OrderedDiagram:
    """Remove the top edges outside `keep` and prune what that strands.

    Vertices left without incoming edges disappear, cascading downward (their
    outgoing edges vanish with them); orders are re-indexed gaplessly and
    vertex labels survive the pruning.
    """
    keep_set = set(int(e) for e in keep)
    if not keep_set:
        raise ValueError("keep must be a nonempty set of top edge ids")
    if not keep_set <= set(range(len(od.edges[0]))):
        raise ValueError("keep references missing top edges")
    new_levels: list[tuple[str, ...]] = [od.levels[0]]
    new_edges: list[tuple[Edge, ...]] = []
    vmap_prev = {0: 0}
    for n in range(1, od.depth + 1):
        if n == 1:
            candidates = [e for eid, e in enumerate(od.edges[0]) if eid in keep_set]
        else:
            candidates = [e for e in od.edges[n - 1] if e.src in vmap_prev]
        survivors = sorted({e.dst for e in candidates})
        if not survivors:
            raise ValueError(f"pruning empties level {n}")
        vmap = {old: new for new, old in enumerate(survivors)}
        new_levels.append(tuple(od.levels[n][old] for old in survivors))
        # re-index the order within each surviving range vertex
        buckets: dict[int, list[Edge]] = {old: [] for old in survivors}
        for e in candidates:
            buckets[e.dst].append(e)
        lvl = []
        for old in survivors:
            ranked = sorted(buckets[old], key=lambda e: e.order)
            for rank, e in enumerate(ranked):
                lvl.append(Edge(vmap_prev[e.src], vmap[e.dst], rank))
        new_edges.append(tuple(lvl))
        vmap_prev = vmap
    return OrderedDiagram(tuple(new_levels), tuple(new_edges))


def _tower_reading(od: OrderedDiagram, v: VertexId) -> list[tuple[int, str]]:
    """Per floor of the tower over v, the first edge id and the level-1 label."""
    lists: list[list[list[tuple[int, str]]]] = [[[]]]
    first: list[list[tuple[int, str]]] = []
    for u in range(od.size(1)):
        first.append(
            [(eid, od.label(1, u)) for eid in od.in_edges_ordered(1, u)]
        )
    lists.append(first)
    for n in range(2, v.level + 1):
        per: list[list[tuple[int, str]]] = []
        for u in range(od.size(n)):
            acc: list[tuple[int, str]] = []
            for eid in od.in_edges_ordered(n, u):
                acc.extend(lists[n - 1][od.edges[n - 1][eid].src])
            per.append(acc)
        lists.append(per)
    return lists[v.level][v.index]


def _min_deep_vertex(od: OrderedDiagram, phase_labels: Sequence[str], rank) -> int:
    """Deepest-level vertex of the minimal path whose tail enters through one
    of the phase labels; ties broken by the lexicographically least symbol
    chain (compared through `rank`)."""
    depth = od.depth
    best_chain = None
    best_vertex = None
    for label in phase_labels:
        if label not in od.levels[depth]:
            continue
        cur = od.levels[depth].index(label)
        chain = [cur]
        for n in range(depth, 1, -1):
            eid = od.in_edges_ordered(n, chain[-1])[0]
            chain.append(od.edges[n - 1][eid].src)
        symbols = tuple(od.label(n, v) for n, v in zip(range(1, depth + 1), reversed(chain)))
        key = tuple(rank(s) for s in symbols)
        if best_chain is None or key < best_chain:
            best_chain = key
            best_vertex = od.levels[depth].index(label)
    if best_vertex is None:
        raise ValueError("no minimal-path phase survives at the deepest level")
    return best_vertex


def first_return_check(sd: StationaryOrderedDiagram, keep: Iterable[int], n: int) -> bool:
    """Compare the induced orbit with the first-return reading of the original.

    True iff the first n symbols of the induced diagram's minimal orbit equal
    the subsequence of the original orbit at the times its level-1 edge lies
    in `keep`.
    """
    verdict = properly_ordered(sd)
    if not verdict:
        raise NotProperlyOrderedError(verdict.reason)
    keep_set = set(int(e) for e in keep)
    if not keep_set:
        raise ValueError("keep must be a nonempty set of top edge ids")
    x_min = minimal_path(sd)
    cycle = min_cycle(sd)
    depth = 8
    while depth <= 72:
        trunc = sd.truncate(depth)
        induced = induce_on_top(trunc, keep_set)
        orig_vertex = sd.index(x_min.edge_at(depth)[0])
        reading = _tower_reading(trunc, VertexId(depth, orig_vertex))
        filtered = [sym for eid, sym in reading if eid in keep_set]
        ind_vertex = _min_deep_vertex(induced, cycle, sd.index)
        ind_reading = _tower_reading(induced, VertexId(depth, ind_vertex))
        if len(filtered) >= n and len(ind_reading) >= n:
            return filtered[:n] == [sym for _, sym in ind_reading[:n]]
        depth += 4
    raise RuntimeError(f"towers never reached {n} return times (alphabet {sd.alphabet})")


@dataclass(frozen=True)
class UnitChangeReport:
    tails_match: bool
    stage: int
    old_unit: GroupElement
    new_unit: GroupElement


def unit_change_report(od: OrderedDiagram, ch: FiniteChange) -> UnitChangeReport:
    """Evidence that a change below level L keeps the group and moves the unit.

    The matrices strictly above the changed levels are compared, and both
    distinguished units are pushed through their own chains to the common
    deepest stage of the unchanged tail.
    """
    new = apply_finite_change(od, ch)
    L = ch.depth
    tails_match = all(
        od.incidence(m) == new.incidence(m) for m in range(L + 1, od.depth + 1)
    ) and od.levels[L + 1 :] == new.levels[L + 1 :]
    p_old = GroupPresentation.from_diagram(od)
    p_new = GroupPresentation.from_diagram(new)
    stage = od.depth
    return UnitChangeReport(
        tails_match,
        stage,
        p_old.push(p_old.unit(), stage),
        p_new.push(p_new.unit(), stage),
    )
