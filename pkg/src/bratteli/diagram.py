"""Graded diagrams with one root: data model, validity, telescoping, primitivity.

A diagram is stored as an explicit finite truncation: vertex label lists per
level (level 0 has the single root) and edge lists per level, where the edges
of level n run from level n-1 vertices down to level n vertices.  Edges are
identified by their position in the level's edge list.  Ordered diagrams
additionally carry, on every edge, an order index that is a bijection onto
0..deg-1 within each set of edges sharing a range vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import NamedTuple, Optional, Sequence

from .intmat import Matrix, all_positive, mat_mul, pattern, pattern_mul

MAX_CANONICAL_WIDTH = 8


class Edge(NamedTuple):
    """One edge of a level: src indexes the upper level, dst the lower one."""

    src: int
    dst: int
    order: Optional[int] = None


class VertexId(NamedTuple):
    level: int
    index: int


class Violation(NamedTuple):
    clause: str
    where: str
    message: str


@dataclass(frozen=True)
class BratteliDiagram:
    """Explicit truncation of a graded diagram (levels 0..depth)."""

    levels: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[Edge, ...], ...]

    def __post_init__(self):
        levels = tuple(tuple(lv) for lv in self.levels)
        edges = tuple(tuple(Edge(*e) for e in lv) for lv in self.edges)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "edges", edges)
        if not levels:
            raise ValueError("a diagram needs at least level 0")
        if len(edges) != len(levels) - 1:
            raise ValueError("need exactly one edge list between consecutive levels")
        for n, lv in enumerate(levels):
            if len(set(lv)) != len(lv):
                raise ValueError(f"duplicate vertex labels at level {n}")
        for n, lv in enumerate(edges, start=1):
            for e in lv:
                if not (0 <= e.src < len(levels[n - 1])):
                    raise ValueError(f"edge at level {n} has source index {e.src} out of range")
                if not (0 <= e.dst < len(levels[n])):
                    raise ValueError(f"edge at level {n} has range index {e.dst} out of range")

    @property
    def depth(self) -> int:
        return len(self.edges)

    def size(self, n: int) -> int:
        return len(self.levels[n])

    def label(self, n: int, v: int) -> str:
        return self.levels[n][v]

    @property
    def is_ordered(self) -> bool:
        return all(e.order is not None for lv in self.edges for e in lv)

    @cached_property
    def _in_index(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        # _in_index[n-1][v] = edge ids into vertex v at level n, in storage order
        out = []
        for n in range(1, self.depth + 1):
            per = [[] for _ in range(self.size(n))]
            for eid, e in enumerate(self.edges[n - 1]):
                per[e.dst].append(eid)
            out.append(tuple(tuple(x) for x in per))
        return tuple(out)

    def in_edges(self, n: int, v: int) -> tuple[int, ...]:
        """Edge ids of level n with range vertex v, in storage order."""
        return self._in_index[n - 1][v]

    def incidence(self, n: int) -> Matrix:
        """Entry (i, j) counts the edges from vertex j at level n-1 to vertex i at level n."""
        if not (1 <= n <= self.depth):
            raise ValueError(f"level {n} outside represented depth {self.depth}")
        rows = [[0] * self.size(n - 1) for _ in range(self.size(n))]
        for e in self.edges[n - 1]:
            rows[e.dst][e.src] += 1
        return tuple(tuple(r) for r in rows)

    def validate(self) -> list[Violation]:
        """Check the defining clauses; violations are data, not exceptions."""
        report: list[Violation] = []
        if self.size(0) != 1:
            report.append(
                Violation("root", "level 0", f"level 0 must hold exactly one vertex, found {self.size(0)}")
            )
        for n in range(1, self.depth + 1):
            for v in range(self.size(n)):
                if not self.in_edges(n, v):
                    report.append(
                        Violation(
                            "no-incoming",
                            f"{self.label(n, v)}@{n}",
                            f"vertex {self.label(n, v)} at level {n} has no incoming edge",
                        )
                    )
        # outgoing edges are only required within the represented depth
        for n in range(self.depth):
            used = {e.src for e in self.edges[n]}
            for v in range(self.size(n)):
                if v not in used:
                    report.append(
                        Violation(
                            "no-outgoing",
                            f"{self.label(n, v)}@{n}",
                            f"vertex {self.label(n, v)} at level {n} has no outgoing edge",
                        )
                    )
        return report

    def truncate(self, depth: int) -> "BratteliDiagram":
        if not (0 <= depth <= self.depth):
            raise ValueError(f"cannot truncate depth-{self.depth} diagram to {depth}")
        return type(self)(self.levels[: depth + 1], self.edges[:depth])


@dataclass(frozen=True)
class OrderedDiagram(BratteliDiagram):
    """Diagram with a linear order on each set of edges sharing a range vertex."""

    def __post_init__(self):
        super().__post_init__()
        for n in range(1, self.depth + 1):
            for v in range(self.size(n)):
                orders = sorted(self.edges[n - 1][eid].order for eid in self.in_edges(n, v))
                if orders and (orders[0] is None or orders != list(range(len(orders)))):
                    raise ValueError(
                        f"orders on edges into {self.label(n, v)} at level {n} "
                        f"must be a bijection onto 0..{len(orders) - 1}"
                    )

    def in_edges_ordered(self, n: int, v: int) -> tuple[int, ...]:
        eids = self.in_edges(n, v)
        return tuple(sorted(eids, key=lambda eid: self.edges[n - 1][eid].order))

    def in_sources_ordered(self, n: int, v: int) -> tuple[int, ...]:
        """Sources of the edges into v, listed in increasing edge order."""
        return tuple(self.edges[n - 1][eid].src for eid in self.in_edges_ordered(n, v))

    def max_min_edges(self, v: VertexId) -> tuple[int, int]:
        """Edge ids of the order-maximal and order-minimal edges into v."""
        if v.level < 1:
            raise ValueError("the root has no incoming edges")
        eids = self.in_edges_ordered(v.level, v.index)
        return eids[-1], eids[0]

    def strip_order(self) -> BratteliDiagram:
        return BratteliDiagram(
            self.levels,
            tuple(tuple(Edge(e.src, e.dst, None) for e in lv) for lv in self.edges),
        )


def max_min_edges(od: OrderedDiagram, v: VertexId) -> tuple[int, int]:
    return od.max_min_edges(v)


def incidence_matrix(d: BratteliDiagram, n: int) -> Matrix:
    return d.incidence(n)


def validate(d: BratteliDiagram) -> list[Violation]:
    return d.validate()


def _check_cuts(d: BratteliDiagram, cuts: Sequence[int]) -> tuple[int, ...]:
    cuts = tuple(int(c) for c in cuts)
    if len(cuts) < 2 or cuts[0] != 0:
        raise ValueError("a telescope schedule starts at 0 and holds at least one more cut")
    if any(a >= b for a, b in zip(cuts, cuts[1:])):
        raise ValueError("telescope cuts must be strictly increasing")
    if cuts[-1] > d.depth:
        raise ValueError(f"cut {cuts[-1]} beyond represented depth {d.depth}")
    return cuts


def telescope(d: BratteliDiagram, cuts: Sequence[int]):
    """Collapse the levels between consecutive cuts, composing edges into paths.

    Composite edges into a vertex are ordered by the induced rule: the last
    differing coordinate decides (ordered input), and carry order indexes equal
    to their rank.  The incidence matrix of a collapsed window is the ordered
    product of the window's matrices.
    """
    cuts = _check_cuts(d, cuts)
    ordered = d.is_ordered
    new_levels = tuple(d.levels[m] for m in cuts)
    new_edge_levels = []
    for w in range(1, len(cuts)):
        a, b = cuts[w - 1], cuts[w]
        # frontier[v] = list of (source at level a, key of the partial path)
        frontier = {v: [(v, ())] for v in range(d.size(a))}
        for lvl in range(a + 1, b + 1):
            step: dict[int, list[tuple[int, tuple]]] = {v: [] for v in range(d.size(lvl))}
            for eid, e in enumerate(d.edges[lvl - 1]):
                mark = e.order if ordered else eid
                bucket = step[e.dst]
                for src0, key in frontier[e.src]:
                    bucket.append((src0, key + (mark,)))
            frontier = step
        level_edges = []
        for v in range(d.size(b)):
            paths = frontier[v]
            if ordered:
                paths.sort(key=lambda p: p[1][::-1])
                level_edges.extend(Edge(src0, v, rank) for rank, (src0, _) in enumerate(paths))
            else:
                paths.sort(key=lambda p: p[1])
                level_edges.extend(Edge(src0, v, None) for src0, _ in paths)
        new_edge_levels.append(tuple(level_edges))
    cls = OrderedDiagram if ordered else BratteliDiagram
    return cls(new_levels, tuple(new_edge_levels))


def induced_order_telescope(od: OrderedDiagram, cuts: Sequence[int]) -> OrderedDiagram:
    """Telescope an ordered diagram; composite edges get the induced order."""
    if not isinstance(od, OrderedDiagram):
        raise TypeError("induced_order_telescope needs an ordered diagram")
    return telescope(od, cuts)


def compose_schedules(outer: Sequence[int], inner: Sequence[int]) -> tuple[int, ...]:
    """Schedule equivalent to telescoping by `outer` and then by `inner`."""
    return tuple(outer[i] for i in inner)


@dataclass(frozen=True)
class Primitivity:
    primitive: bool
    power: Optional[int]  # minimal k with strictly positive k-th power


def is_primitive(c: Matrix) -> Primitivity:
    """Decide primitivity of a square nonnegative matrix.

    Searches powers up to the sharp bound n*n - 2n + 2; beyond it no new
    positive power can appear, so a miss is an exact No.
    """
    n = len(c)
    if n == 0 or any(len(row) != n for row in c):
        raise ValueError("primitivity is defined for square matrices")
    if any(x < 0 for row in c for x in row):
        raise ValueError("primitivity is defined for nonnegative matrices")
    bound = n * n - 2 * n + 2
    base = pattern(c)
    cur = base
    for k in range(1, bound + 1):
        if all_positive(cur):
            return Primitivity(True, k)
        cur = pattern_mul(cur, base)
    return Primitivity(False, None)


@dataclass(frozen=True)
class Simplicity:
    verdict: str  # "yes" | "no" | "undetermined"
    schedule: Optional[tuple[int, ...]]
    reason: str

    def __bool__(self) -> bool:
        return self.verdict == "yes"


def is_simple_explicit(d: BratteliDiagram, horizon: Optional[int] = None) -> Simplicity:
    """Search for a telescoping whose matrices are strictly positive.

    The window containing the root is a reachability column and carries no
    evidence, so the search wants strictly positive windows beyond level 1.
    Widening a window on either side preserves strict positivity (rows and
    columns are nonzero in a valid diagram), hence greedy earliest cuts from
    level 1 are complete and the leftover tail can be absorbed into the last
    window.  A truncation can never certify No.
    """
    top = d.depth if horizon is None else min(d.depth, horizon)
    cuts = [0, 1]
    prod: Optional[Matrix] = None
    for end in range(2, top + 1):
        step = d.incidence(end)
        prod = step if prod is None else mat_mul(step, prod)
        if all_positive(prod):
            cuts.append(end)
            prod = None
    if len(cuts) > 2:
        if cuts[-1] < d.depth:
            cuts[-1] = d.depth
        return Simplicity("yes", tuple(cuts), "telescoped matrices strictly positive")
    return Simplicity(
        "undetermined", None, f"no strictly positive window within horizon {top}"
    )


def _level_signature(d, n, perm, prev, prev_inv, ordered):
    if ordered:
        return tuple(
            tuple(prev_inv[s] for s in d.in_sources_ordered(n, perm[i]))
            for i in range(len(perm))
        )
    mat_n = d.incidence(n)
    return tuple(
        tuple(mat_n[perm[i]][prev[j]] for j in range(len(prev))) for i in range(len(perm))
    )


def canonical_key(d: BratteliDiagram, ordered: Optional[bool] = None):
    """Canonical form under graded relabelings (order-preserving if ordered).

    Level by level, keep every vertex arrangement that minimizes the level
    signature given some surviving arrangement of the previous level; the
    recorded minima form a key equal for two diagrams iff they are isomorphic.
    Exponential in the worst case, fine at desk scale.
    """
    if ordered is None:
        ordered = d.is_ordered
    if any(len(lv) > MAX_CANONICAL_WIDTH for lv in d.levels):
        raise ValueError(f"canonical form limited to {MAX_CANONICAL_WIDTH} vertices per level")
    branches: set[tuple[int, ...]] = {(0,)}
    key = [len(d.levels[0])]
    for n in range(1, d.depth + 1):
        t = d.size(n)
        best = None
        chosen: set[tuple[int, ...]] = set()
        for prev in branches:
            prev_inv = [0] * len(prev)
            for new_j, old_j in enumerate(prev):
                prev_inv[old_j] = new_j
            for perm in permutations(range(t)):
                sig = _level_signature(d, n, perm, prev, prev_inv, ordered)
                if best is None or sig < best:
                    best = sig
                    chosen = {perm}
                elif sig == best:
                    chosen.add(perm)
        key.append(best)
        branches = chosen
    return tuple(key)


def graded_isomorphic(d1: BratteliDiagram, d2: BratteliDiagram) -> bool:
    """Isomorphism via graded bijections intertwining source and range maps."""
    if [len(lv) for lv in d1.levels] != [len(lv) for lv in d2.levels]:
        return False
    if [len(lv) for lv in d1.edges] != [len(lv) for lv in d2.edges]:
        return False
    return canonical_key(d1, ordered=False) == canonical_key(d2, ordered=False)


def order_isomorphic(d1: OrderedDiagram, d2: OrderedDiagram) -> bool:
    """Graded isomorphism that also matches the edge orders."""
    if [len(lv) for lv in d1.levels] != [len(lv) for lv in d2.levels]:
        return False
    if [len(lv) for lv in d1.edges] != [len(lv) for lv in d2.edges]:
        return False
    return canonical_key(d1, ordered=True) == canonical_key(d2, ordered=True)


def _parity_cuts(depth: int, odd: bool) -> tuple[int, ...]:
    if odd:
        return (0,) + tuple(range(1, depth + 1, 2))
    return tuple(range(0, depth + 1, 2))


def _matches_some_telescoping(target, d, ordered: bool) -> bool:
    iso = order_isomorphic if ordered else graded_isomorphic
    for r in range(1, d.depth + 1):
        for cut_set in combinations(range(1, d.depth + 1), r):
            t = telescope(d, (0,) + cut_set)
            depth = min(t.depth, target.depth)
            if depth < 1:
                continue
            if iso(t.truncate(depth), target.truncate(depth)):
                return True
    return False


def verify_interleaving_witness(
    d1: BratteliDiagram, d2: BratteliDiagram, w: BratteliDiagram
) -> bool:
    """Check that w interleaves d1 and d2.

    True iff telescoping w to odd levels matches a telescoping of one input
    and telescoping w to even levels matches a telescoping of the other,
    compared up to the represented depth.  When all three diagrams are
    ordered the match must also preserve the orders.
    """
    ordered = d1.is_ordered and d2.is_ordered and w.is_ordered
    w_odd = telescope(w, _parity_cuts(w.depth, odd=True))
    w_even = telescope(w, _parity_cuts(w.depth, odd=False))
    for first, second in ((d1, d2), (d2, d1)):
        if _matches_some_telescoping(w_odd, first, ordered) and _matches_some_telescoping(
            w_even, second, ordered
        ):
            return True
    return False
