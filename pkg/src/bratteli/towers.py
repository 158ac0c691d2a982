"""Nested tower partitions as combinatorial data, and their diagram translation.

A level holds tower heights and, per tower, the traversal word: the ordered
list of previous-level towers it crosses.  Heights must satisfy the recursion
h[k] = sum of the previous heights along the word, level 0 is the single
height-1 tower, and every tower must be traversed by the next level.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .diagram import Edge, OrderedDiagram, VertexId, order_isomorphic
from .vershik import AdicPath, PathPrefix, tower


@dataclass(frozen=True)
class KRLevel:
    heights: tuple[int, ...]
    words: Optional[tuple[tuple[int, ...], ...]]  # None only at level 0

    def __post_init__(self):
        object.__setattr__(self, "heights", tuple(int(h) for h in self.heights))
        if self.words is not None:
            object.__setattr__(
                self, "words", tuple(tuple(int(i) for i in w) for w in self.words)
            )
        if any(h <= 0 for h in self.heights):
            raise ValueError("tower heights must be positive")
        if self.words is not None and len(self.words) != len(self.heights):
            raise ValueError("one traversal word per tower required")


@dataclass(frozen=True)
class NestedKRSequence:
    levels: tuple[KRLevel, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if not self.levels:
            raise ValueError("need at least level 0")
        base = self.levels[0]
        if base.heights != (1,) or base.words is not None:
            raise ValueError("level 0 must be the single height-1 tower")
        for n in range(1, len(self.levels)):
            prev, cur = self.levels[n - 1], self.levels[n]
            if cur.words is None:
                raise ValueError(f"level {n} needs traversal words")
            for k, w in enumerate(cur.words):
                if not w:
                    raise ValueError(f"tower {k} at level {n} has an empty traversal word")
                if any(not (0 <= i < len(prev.heights)) for i in w):
                    raise ValueError(f"tower {k} at level {n} references a missing tower")
                if cur.heights[k] != sum(prev.heights[i] for i in w):
                    raise ValueError(
                        f"height of tower {k} at level {n} does not match its traversal word"
                    )
            traversed = {i for w in cur.words for i in w}
            if traversed != set(range(len(prev.heights))):
                raise ValueError(f"level {n} does not traverse every tower of level {n - 1}")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def diagram_from_nested(seq: NestedKRSequence) -> OrderedDiagram:
    """Vertices are towers; a tower's traversal word gives its ordered in-edges."""
    levels: list[tuple[str, ...]] = [("v0",)]
    edge_levels: list[tuple[Edge, ...]] = []
    for n in range(1, seq.depth + 1):
        lv = seq.levels[n]
        levels.append(tuple(str(k) for k in range(len(lv.heights))))
        lvl = []
        for k, w in enumerate(lv.words):
            for pos, i in enumerate(w):
                lvl.append(Edge(i, k, pos))
        edge_levels.append(tuple(lvl))
    return OrderedDiagram(tuple(levels), tuple(edge_levels))


def nested_from_diagram(od: OrderedDiagram, depth: int) -> NestedKRSequence:
    """Canonical inverse: towers are the ordered prefix cylinders of each vertex.

    The traversal word of a vertex reads the previous-level towers its ordered
    prefix list crosses, i.e. the sources of its in-edges in edge order.
    """
    if not (0 <= depth <= od.depth):
        raise ValueError(f"depth {depth} outside represented depth {od.depth}")
    levels = [KRLevel((1,), None)]
    heights = [1]
    for n in range(1, depth + 1):
        words = tuple(od.in_sources_ordered(n, v) for v in range(od.size(n)))
        new_heights = tuple(sum(heights[i] for i in w) for w in words)
        levels.append(KRLevel(new_heights, words))
        heights = list(new_heights)
    return NestedKRSequence(tuple(levels))


def roundtrip_check(od: OrderedDiagram, depth: int) -> bool:
    """Rebuilding the diagram from its tower data gives an order-isomorphic one."""
    rebuilt = diagram_from_nested(nested_from_diagram(od, depth))
    return order_isomorphic(rebuilt, od.truncate(depth))


def locate(x: AdicPath, n: int) -> tuple[str, int]:
    """Tower and floor of the path at level n: the vertex its level-n edge
    enters and the rank of its length-n prefix in that tower."""
    if n < 1:
        raise ValueError("levels are 1-based")
    sd = x.diagram
    pre = x.edges_up_to(n)
    height_vectors = [(1,)] + [sd.heights(j) for j in range(1, n)]
    floor = 0
    for j in range(n, 0, -1):
        sym, slot = pre[j - 1]
        if j == 1:
            floor += slot
        else:
            word = sd.word(sym)
            floor += sum(height_vectors[j - 1][sd.index(word[t])] for t in range(slot))
    return pre[n - 1][0], floor


def locate_prefix(od: OrderedDiagram, eids: Sequence[int]) -> tuple[VertexId, int]:
    """Explicit-diagram variant of locate, by rank in the enumerated tower."""
    p = PathPrefix(od, tuple(eids))
    t = tower(od, p.end)
    return p.end, t.rank(p)
