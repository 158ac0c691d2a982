"""Path space machinery and the lexicographic successor dynamics.

Finite prefixes of explicit ordered diagrams are walked with the successor
rule; infinite paths of stationary diagrams are represented as a finite prefix
plus an eventually-periodic all-minimal or all-maximal tail, which is the only
shape the dynamics ever needs: a step changes a finite prefix, except that the
unique maximal path maps to the unique minimal one.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Iterator, Optional

from .diagram import OrderedDiagram, VertexId
from .stationary import (
    DegenerateDiagramError,
    NotProperlyOrderedError,
    StationaryOrderedDiagram,
    _functional_cycles,
    properly_ordered,
)

PathEdge = tuple[str, int]  # (range symbol, order slot within the edges into it)


def _require_dynamics(sd: StationaryOrderedDiagram) -> None:
    verdict = properly_ordered(sd)
    if not verdict:
        raise NotProperlyOrderedError(verdict.reason)
    if sd.has_finite_path_space:
        raise DegenerateDiagramError("path space is finite; successor dynamics excluded")


def _cycle_of(sd: StationaryOrderedDiagram, kind: str) -> tuple[str, ...]:
    fmap = sd.min_source if kind == "min" else sd.max_source
    cycles = _functional_cycles(fmap)
    if len(cycles) != 1:
        raise NotProperlyOrderedError(f"{len(cycles)} {kind}imal paths")
    return cycles[0]


@dataclass(frozen=True)
class AdicPath:
    """Infinite path: explicit prefix, then the extreme tail of the given kind.

    The entry at position i of the prefix is the level-(i+1) edge, stored as
    (range symbol, order slot); tail_start is the symbol the tail enters at
    level len(prefix)+1 and must lie on the cycle of the matching extreme
    source map, so the all-minimal (or all-maximal) continuation is unique.
    """

    diagram: StationaryOrderedDiagram
    prefix: tuple[PathEdge, ...]
    tail_kind: str  # "min" | "max"
    tail_start: str

    def __post_init__(self):
        object.__setattr__(
            self, "prefix", tuple((str(s), int(j)) for s, j in self.prefix)
        )
        sd = self.diagram
        if self.tail_kind not in ("min", "max"):
            raise ValueError("tail_kind must be 'min' or 'max'")
        for i, (sym, slot) in enumerate(self.prefix):
            level = i + 1
            deg = sd.degree(level, sym)
            if not (0 <= slot < deg):
                raise ValueError(f"slot {slot} out of range at level {level}")
            if i >= 1 and sd.source(level, sym, slot) != self.prefix[i - 1][0]:
                raise ValueError(f"edges at levels {level - 1},{level} do not connect")
        cyc = _cycle_of(sd, self.tail_kind)
        if self.tail_start not in cyc:
            raise ValueError(f"tail start {self.tail_start} is not on the {self.tail_kind} cycle")
        if self.prefix:
            lvl = len(self.prefix) + 1
            src = sd.source(lvl, self.tail_start, self._tail_slot(lvl, self.tail_start))
            if src != self.prefix[-1][0]:
                raise ValueError("prefix does not connect to the tail")

    def _tail_slot(self, level: int, sym: str) -> int:
        deg = self.diagram.degree(level, sym)
        return 0 if self.tail_kind == "min" else deg - 1

    @cached_property
    def _tail_inverse(self) -> dict[str, str]:
        fmap = (
            self.diagram.min_source if self.tail_kind == "min" else self.diagram.max_source
        )
        cyc = _cycle_of(self.diagram, self.tail_kind)
        return {fmap[c]: c for c in cyc}

    def edge_at(self, level: int) -> PathEdge:
        """Edge of the path at the given level (1-based), following the tail."""
        if level < 1:
            raise ValueError("levels are 1-based")
        if level <= len(self.prefix):
            return self.prefix[level - 1]
        sym = self.tail_start
        for _ in range(len(self.prefix) + 1, level):
            sym = self._tail_inverse[sym]
        return (sym, self._tail_slot(level, sym))

    def edges_up_to(self, level: int) -> tuple[PathEdge, ...]:
        out = list(self.prefix[:level])
        sym = self.tail_start
        while len(out) < level:
            lvl = len(out) + 1
            out.append((sym, self._tail_slot(lvl, sym)))
            sym = self._tail_inverse[sym]
        return tuple(out)

    def symbol(self, level: int = 1) -> str:
        return self.edge_at(level)[0]

    def with_prefix_to(self, level: int) -> "AdicPath":
        """Equal path with the prefix materialized at least to the given level."""
        if level <= len(self.prefix):
            return self
        edges = self.edges_up_to(level)
        sym = self.tail_start
        for _ in range(len(self.prefix), level):
            sym = self._tail_inverse[sym]
        return AdicPath(self.diagram, edges, self.tail_kind, sym)

    def is_all_max(self) -> bool:
        sd = self.diagram
        for i, (sym, slot) in enumerate(self.prefix):
            if slot != sd.degree(i + 1, sym) - 1:
                return False
        if self.tail_kind == "max":
            return True
        cyc = _cycle_of(sd, "min")
        if any(len(sd.word(c)) != 1 for c in cyc):
            return False
        if not self.prefix and sd.multiplicities[sd.index(self.tail_start)] != 1:
            return False
        return True

    def is_all_min(self) -> bool:
        sd = self.diagram
        if any(slot != 0 for _, slot in self.prefix):
            return False
        if self.tail_kind == "min":
            return True
        cyc = _cycle_of(sd, "max")
        if any(len(sd.word(c)) != 1 for c in cyc):
            return False
        if not self.prefix and sd.multiplicities[sd.index(self.tail_start)] != 1:
            return False
        return True


def extreme_paths(sd: StationaryOrderedDiagram) -> tuple[AdicPath, AdicPath]:
    """The unique all-maximal and all-minimal paths, as periodic descriptors.

    The phase of a length-p cycle is pinned canonically at the first symbol in
    alphabet order.
    """
    verdict = properly_ordered(sd)
    if not verdict:
        raise NotProperlyOrderedError(verdict.reason)
    if sd.has_finite_path_space:
        raise DegenerateDiagramError("path space is finite; extreme paths coincide")
    x_max = AdicPath(sd, (), "max", min(_cycle_of(sd, "max"), key=sd.index))
    x_min = AdicPath(sd, (), "min", min(_cycle_of(sd, "min"), key=sd.index))
    return x_max, x_min


def minimal_path(sd: StationaryOrderedDiagram) -> AdicPath:
    return extreme_paths(sd)[1]


def _min_head(sd: StationaryOrderedDiagram, symbol: str, level: int) -> list[PathEdge]:
    """All-minimal finite path from the root into the symbol's vertex at the level."""
    out: list[PathEdge] = []
    sym = symbol
    for lvl in range(level, 0, -1):
        out.append((sym, 0))
        if lvl >= 2:
            sym = sd.min_source[sym]
    out.reverse()
    return out


def vershik_step(x: AdicPath) -> AdicPath:
    """Lexicographic successor: bump the least non-maximal edge, minimal below.

    The unique all-maximal path maps to the all-minimal one; otherwise only a
    finite prefix changes and the tail is untouched.
    """
    sd = x.diagram
    _require_dynamics(sd)
    if x.is_all_max():
        return minimal_path(sd)
    k = None
    for i, (sym, slot) in enumerate(x.prefix):
        if slot < sd.degree(i + 1, sym) - 1:
            k = i + 1
            break
    if k is None:
        # the prefix is all-maximal; the first non-maximal edge sits on the tail
        limit = len(x.prefix) + 2 * sd.k + 2
        lvl = len(x.prefix) + 1
        while lvl <= limit:
            sym, slot = x.edge_at(lvl)
            if slot < sd.degree(lvl, sym) - 1:
                k = lvl
                break
            lvl += 1
        if k is None:
            raise DegenerateDiagramError("no non-maximal edge found on the tail")
        x = x.with_prefix_to(k)
    sym_k, slot_k = x.edge_at(k)
    bumped = (sym_k, slot_k + 1)
    if k == 1:
        head: list[PathEdge] = []
    else:
        head = _min_head(sd, sd.source(k, sym_k, slot_k + 1), k - 1)
    new_prefix = tuple(head) + (bumped,) + x.prefix[k:]
    return AdicPath(sd, new_prefix, x.tail_kind, x.tail_start)


def _max_head(sd: StationaryOrderedDiagram, symbol: str, level: int) -> list[PathEdge]:
    out: list[PathEdge] = []
    sym = symbol
    for lvl in range(level, 0, -1):
        out.append((sym, sd.degree(lvl, sym) - 1))
        if lvl >= 2:
            sym = sd.max_source[sym]
    out.reverse()
    return out


def vershik_predecessor(x: AdicPath) -> AdicPath:
    """Inverse step: the all-minimal path maps back to the all-maximal one."""
    sd = x.diagram
    _require_dynamics(sd)
    if x.is_all_min():
        return extreme_paths(sd)[0]
    k = None
    for i, (sym, slot) in enumerate(x.prefix):
        if slot > 0:
            k = i + 1
            break
    if k is None:
        limit = len(x.prefix) + 2 * sd.k + 2
        lvl = len(x.prefix) + 1
        while lvl <= limit:
            sym, slot = x.edge_at(lvl)
            if slot > 0:
                k = lvl
                break
            lvl += 1
        if k is None:
            raise DegenerateDiagramError("no non-minimal edge found on the tail")
        x = x.with_prefix_to(k)
    sym_k, slot_k = x.edge_at(k)
    bumped = (sym_k, slot_k - 1)
    if k == 1:
        head: list[PathEdge] = []
    else:
        head = _max_head(sd, sd.source(k, sym_k, slot_k - 1), k - 1)
    new_prefix = tuple(head) + (bumped,) + x.prefix[k:]
    return AdicPath(sd, new_prefix, x.tail_kind, x.tail_start)


def paths_equal(x: AdicPath, y: AdicPath) -> bool:
    """Extensional equality: the same edge at every level.

    Beyond both prefixes the paths are purely periodic, so agreement on the
    prefixes plus one common full period decides.
    """
    if x.diagram != y.diagram:
        return False
    base = max(len(x.prefix), len(y.prefix))
    p = lcm(len(_cycle_of(x.diagram, x.tail_kind)), len(_cycle_of(y.diagram, y.tail_kind)))
    return all(x.edge_at(l) == y.edge_at(l) for l in range(1, base + 2 * p + 1))


def is_cofinal(x: AdicPath, y: AdicPath) -> bool:
    """True iff the paths have the same tails (edges agree from some level on)."""
    if x.diagram != y.diagram:
        raise ValueError("cofinality compares paths of one diagram")
    base = max(len(x.prefix), len(y.prefix))
    p = lcm(len(_cycle_of(x.diagram, x.tail_kind)), len(_cycle_of(y.diagram, y.tail_kind)))
    # beyond `base` both paths are purely periodic with period dividing p, so
    # agreement on one full window decides the tail
    lo, hi = base + p + 1, base + 2 * p
    return all(x.edge_at(l) == y.edge_at(l) for l in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# finite prefixes of explicit ordered diagrams


@dataclass(frozen=True)
class PathPrefix:
    """Finite path from the root, as edge ids per level of an explicit diagram."""

    diagram: OrderedDiagram
    eids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "eids", tuple(int(e) for e in self.eids))
        d = self.diagram
        if len(self.eids) > d.depth:
            raise ValueError("prefix longer than the represented depth")
        prev = 0
        for i, eid in enumerate(self.eids):
            level = i + 1
            if not (0 <= eid < len(d.edges[level - 1])):
                raise ValueError(f"edge id {eid} out of range at level {level}")
            e = d.edges[level - 1][eid]
            if e.src != prev:
                raise ValueError(f"edges at levels {level - 1},{level} do not connect")
            prev = e.dst

    @property
    def level(self) -> int:
        return len(self.eids)

    @property
    def end(self) -> VertexId:
        if not self.eids:
            return VertexId(0, 0)
        return VertexId(self.level, self.diagram.edges[self.level - 1][self.eids[-1]].dst)

    def symbols(self) -> tuple[str, ...]:
        d = self.diagram
        return tuple(
            d.label(i + 1, d.edges[i][eid].dst) for i, eid in enumerate(self.eids)
        )


def min_prefix(od: OrderedDiagram, v: VertexId) -> PathPrefix:
    eids: list[int] = []
    cur = v.index
    for level in range(v.level, 0, -1):
        eid = od.in_edges_ordered(level, cur)[0]
        eids.append(eid)
        cur = od.edges[level - 1][eid].src
    eids.reverse()
    return PathPrefix(od, tuple(eids))


def max_prefix(od: OrderedDiagram, v: VertexId) -> PathPrefix:
    eids: list[int] = []
    cur = v.index
    for level in range(v.level, 0, -1):
        eid = od.in_edges_ordered(level, cur)[-1]
        eids.append(eid)
        cur = od.edges[level - 1][eid].src
    eids.reverse()
    return PathPrefix(od, tuple(eids))


def successor_in_tower(p: PathPrefix) -> Optional[PathPrefix]:
    """Lexicographic successor among prefixes into the same final vertex.

    Bump the least non-maximal edge and fill below with the minimal path; the
    maximal prefix has no successor.
    """
    od = p.diagram
    for i, eid in enumerate(p.eids):
        level = i + 1
        e = od.edges[level - 1][eid]
        ordered = od.in_edges_ordered(level, e.dst)
        if e.order < len(ordered) - 1:
            f = ordered[e.order + 1]
            fsrc = od.edges[level - 1][f].src
            head = min_prefix(od, VertexId(level - 1, fsrc)).eids
            return PathPrefix(od, head + (f,) + p.eids[level:])
    return None


def predecessor_in_tower(p: PathPrefix) -> Optional[PathPrefix]:
    od = p.diagram
    for i, eid in enumerate(p.eids):
        level = i + 1
        e = od.edges[level - 1][eid]
        ordered = od.in_edges_ordered(level, e.dst)
        if e.order > 0:
            f = ordered[e.order - 1]
            fsrc = od.edges[level - 1][f].src
            head = max_prefix(od, VertexId(level - 1, fsrc)).eids
            return PathPrefix(od, head + (f,) + p.eids[level:])
    return None


@dataclass(frozen=True)
class Tower:
    """All prefixes into one vertex, in strictly increasing lexicographic order."""

    diagram: OrderedDiagram
    vertex: VertexId
    entries: tuple[tuple[int, ...], ...]

    @property
    def height(self) -> int:
        return len(self.entries)

    def prefix(self, floor: int) -> PathPrefix:
        return PathPrefix(self.diagram, self.entries[floor])

    def rank(self, p: PathPrefix) -> int:
        return self.entries.index(p.eids)


def _prefix_lists(od: OrderedDiagram, depth: int) -> list[list[list[tuple[int, ...]]]]:
    """lists[n][v] = ordered prefix tuples into vertex v at level n, for n <= depth."""
    lists: list[list[list[tuple[int, ...]]]] = [[[()]]]
    for n in range(1, depth + 1):
        per: list[list[tuple[int, ...]]] = []
        for v in range(od.size(n)):
            acc: list[tuple[int, ...]] = []
            for eid in od.in_edges_ordered(n, v):
                src = od.edges[n - 1][eid].src
                acc.extend(pp + (eid,) for pp in lists[n - 1][src])
            per.append(acc)
        lists.append(per)
    return lists


def tower(od: OrderedDiagram, v: VertexId) -> Tower:
    """Enumerate the tower over a vertex; grouping is by last edge in order."""
    if not (1 <= v.level <= od.depth):
        raise ValueError(f"level {v.level} outside represented depth {od.depth}")
    lists = _prefix_lists(od, v.level)
    return Tower(od, v, tuple(lists[v.level][v.index]))


# ---------------------------------------------------------------------------
# orbit reading


def _min_vertex_chain(sd: StationaryOrderedDiagram, depth: int) -> list[str]:
    """Symbols the minimal path passes through at levels 1..depth."""
    x_min = minimal_path(sd)
    return [x_min.edge_at(l)[0] for l in range(1, depth + 1)]


def _tower_words(sd: StationaryOrderedDiagram, depth: int) -> dict[str, list[str]]:
    """Level-1 symbol reading of every tower at the given level."""
    words = {a: [a] * sd.multiplicities[sd.index(a)] for a in sd.alphabet}
    for _ in range(2, depth + 1):
        words = {
            a: [s for u in sd.word(a) for s in words[u]] for a in sd.alphabet
        }
    return words


def orbit_sequence(sd: StationaryOrderedDiagram, n: int) -> tuple[str, ...]:
    """First n level-1 symbols along the successor orbit of the minimal path.

    Computed by tower enumeration at the shallowest level whose tower over the
    minimal path's vertex already has height >= n: the orbit crosses that
    tower floor by floor before leaving it.
    """
    _require_dynamics(sd)
    if n < 1:
        raise ValueError("orbit length must be positive")
    depth = 1
    while True:
        chain = _min_vertex_chain(sd, depth)
        if sd.heights(depth)[sd.index(chain[-1])] >= n:
            break
        depth += 1
    words = _tower_words(sd, depth)
    return tuple(words[chain[-1]][:n])


@dataclass
class OrbitStream:
    """Resumable successor orbit; the state is the explicit current path."""

    path: AdicPath
    index: int = 0

    @classmethod
    def from_start(cls, sd: StationaryOrderedDiagram) -> "OrbitStream":
        return cls(minimal_path(sd), 0)

    def take(self, n: int) -> tuple[str, ...]:
        out = []
        for _ in range(n):
            out.append(self.path.symbol(1))
            self.path = vershik_step(self.path)
            self.index += 1
        return tuple(out)

    def __iter__(self) -> Iterator[str]:
        while True:
            sym = self.path.symbol(1)
            self.path = vershik_step(self.path)
            self.index += 1
            yield sym
