"""Stationary ordered diagrams, substitutions, proper ordering, symbol splitting.

A stationary ordered diagram repeats the same ordered edge data beyond level 1
and is described finitely by its alphabet, the top word (range symbols of the
level-1 edges, with repetitions for multiplicity, in edge order) and one
incoming word per symbol (the ordered sources of the edges into that symbol,
which doubles as the substitution word).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Mapping, Optional, Sequence

from .diagram import (
    Edge,
    OrderedDiagram,
    Simplicity,
    is_primitive,
    is_simple_explicit,
)
from .intmat import Matrix, mat_pow, row_sums


class NotProperlyOrderedError(ValueError):
    pass


class DegenerateDiagramError(ValueError):
    """The path space is finite; the successor dynamics degenerate."""


def _as_word(word) -> tuple[str, ...]:
    if isinstance(word, str):
        return tuple(word)
    return tuple(str(s) for s in word)


@dataclass(frozen=True)
class Substitution:
    """Map from an alphabet to nonempty words over the same alphabet."""

    alphabet: tuple[str, ...]
    words: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        alphabet = tuple(str(a) for a in self.alphabet)
        words = tuple(_as_word(w) for w in self.words)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "words", words)
        if len(set(alphabet)) != len(alphabet) or not alphabet:
            raise ValueError("alphabet must be nonempty with distinct symbols")
        if len(words) != len(alphabet):
            raise ValueError("one word per symbol required")
        for a, w in zip(alphabet, words):
            if not w:
                raise ValueError(f"word for {a} is empty")
            for s in w:
                if s not in alphabet:
                    raise ValueError(f"word for {a} uses unknown symbol {s}")

    @classmethod
    def from_rules(cls, rules: Mapping[str, Sequence[str] | str], alphabet=None):
        alphabet = tuple(alphabet) if alphabet is not None else tuple(rules)
        return cls(alphabet, tuple(_as_word(rules[a]) for a in alphabet))

    @property
    def rules(self) -> dict[str, tuple[str, ...]]:
        return dict(zip(self.alphabet, self.words))

    def word(self, symbol: str) -> tuple[str, ...]:
        return self.words[self.alphabet.index(symbol)]

    def apply(self, word: Sequence[str]) -> tuple[str, ...]:
        out: list[str] = []
        for s in word:
            out.extend(self.word(s))
        return tuple(out)

    def abelianization(self) -> Matrix:
        """Row i counts the occurrences of each symbol in the word of symbol i."""
        idx = {a: j for j, a in enumerate(self.alphabet)}
        rows = []
        for w in self.words:
            row = [0] * len(self.alphabet)
            for s in w:
                row[idx[s]] += 1
            rows.append(tuple(row))
        return tuple(rows)


@dataclass(frozen=True)
class StationaryOrderedDiagram:
    alphabet: tuple[str, ...]
    top_word: tuple[str, ...]
    words: tuple[tuple[str, ...], ...]  # incoming word per symbol, aligned with alphabet

    def __post_init__(self):
        alphabet = tuple(str(a) for a in self.alphabet)
        top_word = _as_word(self.top_word)
        words = tuple(_as_word(w) for w in self.words)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "top_word", top_word)
        object.__setattr__(self, "words", words)
        if not alphabet or len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet must be nonempty with distinct symbols")
        if len(words) != len(alphabet):
            raise ValueError("one incoming word per symbol required")
        if not top_word:
            raise ValueError("top word must be nonempty")
        for s in top_word:
            if s not in alphabet:
                raise ValueError(f"top word uses unknown symbol {s}")
        missing_top = [a for a in alphabet if a not in top_word]
        if missing_top:
            raise ValueError(
                f"every symbol needs an incoming top edge; missing: {', '.join(missing_top)}"
            )
        used: set[str] = set()
        for a, w in zip(alphabet, words):
            if not w:
                raise ValueError(f"incoming word for {a} is empty")
            for s in w:
                if s not in alphabet:
                    raise ValueError(f"incoming word for {a} uses unknown symbol {s}")
            used.update(w)
        unused = [a for a in alphabet if a not in used]
        if unused:
            raise ValueError(
                f"every symbol must occur as a source; unused: {', '.join(unused)}"
            )

    @classmethod
    def from_incoming(cls, alphabet, top_word, incoming: Mapping[str, Sequence[str] | str]):
        alphabet = tuple(alphabet)
        return cls(alphabet, _as_word(top_word), tuple(_as_word(incoming[a]) for a in alphabet))

    @property
    def k(self) -> int:
        return len(self.alphabet)

    def index(self, symbol: str) -> int:
        return self.alphabet.index(symbol)

    def word(self, symbol: str) -> tuple[str, ...]:
        return self.words[self.index(symbol)]

    @cached_property
    def incoming(self) -> dict[str, tuple[str, ...]]:
        return dict(zip(self.alphabet, self.words))

    @cached_property
    def matrix(self) -> Matrix:
        """Stationary incidence matrix: entry (i, j) counts symbol j in the word of symbol i."""
        return substitution_of(self).abelianization()

    @cached_property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(self.top_word.count(a) for a in self.alphabet)

    def degree(self, level: int, symbol: str) -> int:
        """Number of edges into the symbol's vertex at the given level."""
        if level == 1:
            return self.multiplicities[self.index(symbol)]
        return len(self.word(symbol))

    def source(self, level: int, symbol: str, slot: int) -> Optional[str]:
        """Source symbol of the slot-th edge (in edge order) into symbol at level; None at level 1."""
        if level == 1:
            return None
        return self.word(symbol)[slot]

    @cached_property
    def max_source(self) -> dict[str, str]:
        return {a: w[-1] for a, w in zip(self.alphabet, self.words)}

    @cached_property
    def min_source(self) -> dict[str, str]:
        return {a: w[0] for a, w in zip(self.alphabet, self.words)}

    def heights(self, level: int) -> tuple[int, ...]:
        """Tower heights per symbol: number of root paths into each vertex."""
        if level < 0:
            raise ValueError("level must be nonnegative")
        if level == 0:
            return (1,)
        h = list(self.multiplicities)
        for _ in range(level - 1):
            h = [sum(self.matrix[i][j] * h[j] for j in range(self.k)) for i in range(self.k)]
        return tuple(h)

    @property
    def has_finite_path_space(self) -> bool:
        # all column sums 1 means the number of root paths never grows
        return sum(x for row in self.matrix for x in row) == self.k

    def truncate(self, depth: int) -> OrderedDiagram:
        """Explicit ordered truncation of the first `depth` levels.

        Level-1 edge ids equal positions in the top word; the order of the
        edges into a symbol is their order of appearance there.  Deeper edge
        ids group by range symbol in alphabet order.
        """
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        levels: list[tuple[str, ...]] = [("v0",)]
        edge_levels: list[tuple[Edge, ...]] = []
        if depth >= 1:
            levels.append(self.alphabet)
            seen: dict[str, int] = {}
            lvl1 = []
            for s in self.top_word:
                rank = seen.get(s, 0)
                seen[s] = rank + 1
                lvl1.append(Edge(0, self.index(s), rank))
            edge_levels.append(tuple(lvl1))
        for _ in range(2, depth + 1):
            levels.append(self.alphabet)
            lvl = []
            for i, a in enumerate(self.alphabet):
                for t, u in enumerate(self.word(a)):
                    lvl.append(Edge(self.index(u), i, t))
            edge_levels.append(tuple(lvl))
        return OrderedDiagram(tuple(levels), tuple(edge_levels))


def substitution_of(sd: StationaryOrderedDiagram) -> Substitution:
    """Read off the substitution: each symbol maps to its ordered incoming word."""
    return Substitution(sd.alphabet, sd.words)


def diagram_of_substitution(
    sigma: Substitution, top_word: Optional[Sequence[str]] = None
) -> StationaryOrderedDiagram:
    """Inverse reading; the top word defaults to one edge per symbol in alphabet order."""
    top = _as_word(top_word) if top_word is not None else sigma.alphabet
    return StationaryOrderedDiagram(sigma.alphabet, top, sigma.words)


def _functional_cycles(fmap: Mapping[str, str]) -> list[tuple[str, ...]]:
    """Cycles of a self-map of a finite set, each rooted at its first-found node."""
    cycles: list[tuple[str, ...]] = []
    seen_cyclic: set[str] = set()
    for start in fmap:
        # walk until a repeat; the repeated tail is a cycle
        trail: list[str] = []
        visited: dict[str, int] = {}
        node = start
        while node not in visited:
            visited[node] = len(trail)
            trail.append(node)
            node = fmap[node]
        cyc = tuple(trail[visited[node]:])
        if not any(c in seen_cyclic for c in cyc):
            cycles.append(cyc)
            seen_cyclic.update(cyc)
    return cycles


def count_extreme_paths(sd: StationaryOrderedDiagram) -> tuple[int, int]:
    """Number of tail-infinite all-maximal and all-minimal paths.

    A tail of maximal edges is determined by a cycle of the max-edge-source
    self-map on the alphabet (the functional graph is eventually periodic),
    so the count is the number of cycles of that map; dually for minimal.
    """
    return (
        len(_functional_cycles(sd.max_source)),
        len(_functional_cycles(sd.min_source)),
    )


@dataclass(frozen=True)
class ProperOrdering:
    ok: bool
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def properly_ordered(sd: StationaryOrderedDiagram) -> ProperOrdering:
    """Simple (primitive matrix) with unique maximal and unique minimal path."""
    if not is_primitive(sd.matrix).primitive:
        return ProperOrdering(False, "not simple: incidence matrix is not primitive")
    n_max, n_min = count_extreme_paths(sd)
    if n_max != 1:
        return ProperOrdering(False, f"{n_max} maximal paths")
    if n_min != 1:
        return ProperOrdering(False, f"{n_min} minimal paths")
    return ProperOrdering(True)


def is_simple(d, horizon: Optional[int] = None) -> Simplicity:
    """Simplicity search: exact for stationary descriptors, semidecided otherwise."""
    if isinstance(d, StationaryOrderedDiagram):
        pr = is_primitive(d.matrix)
        if pr.primitive:
            k = pr.power
            return Simplicity(
                "yes", (0, k + 1, 2 * k + 1), f"matrix power {k} strictly positive"
            )
        return Simplicity("no", None, "incidence matrix is not primitive")
    return is_simple_explicit(d, horizon)


def max_cycle(sd: StationaryOrderedDiagram) -> tuple[str, ...]:
    cycles = _functional_cycles(sd.max_source)
    if len(cycles) != 1:
        raise NotProperlyOrderedError(f"{len(cycles)} maximal paths")
    return cycles[0]


def min_cycle(sd: StationaryOrderedDiagram) -> tuple[str, ...]:
    cycles = _functional_cycles(sd.min_source)
    if len(cycles) != 1:
        raise NotProperlyOrderedError(f"{len(cycles)} minimal paths")
    return cycles[0]


def _chunk_sizes(total: int, parts: int) -> list[int]:
    # earlier chunks take the extra letters
    base, extra = divmod(total, parts)
    return [base + 1 if i < extra else base for i in range(parts)]


def symbol_split(
    sd: StationaryOrderedDiagram, witness_periods: int = 3
) -> tuple[StationaryOrderedDiagram, OrderedDiagram]:
    """Split symbols so that no top edge is repeated.

    Telescopes periodically (power p of the matrix, keeping level 1) until
    every row sum dominates the largest top multiplicity, then inserts one new
    vertex per top edge between consecutive levels.  Each new vertex w_e, for
    the top edge e into symbol v, receives a consecutive chunk of the p-fold
    word of v (chunks in edge order, earlier chunks larger); the split
    substitution rewrites each chunk letter u by the new vertices of the top
    edges into u, in top order.  p is also chosen coprime to the lengths of
    the extreme cycles so the split diagram keeps unique extreme paths.

    Returns the split diagram and an interleaved witness: telescoping the
    witness to even levels reproduces a telescoping of the input, to odd
    levels the split diagram.
    """
    verdict = properly_ordered(sd)
    if not verdict:
        raise NotProperlyOrderedError(verdict.reason)
    mult = sd.multiplicities
    m_max = max(mult)
    c_max = len(max_cycle(sd))
    c_min = len(min_cycle(sd))
    p = 1
    while True:
        rs = row_sums(mat_pow(sd.matrix, p))
        if min(rs) >= m_max and gcd(p, c_max) == 1 and gcd(p, c_min) == 1:
            break
        p += 1
    sigma = substitution_of(sd)
    word_p = {a: (a,) for a in sd.alphabet}
    for _ in range(p):
        word_p = {a: sigma.apply(w) for a, w in word_p.items()}

    tops = {a: [e for e, s in enumerate(sd.top_word) if s == a] for a in sd.alphabet}
    labels = []
    for e, s in enumerate(sd.top_word):
        rank = tops[s].index(e)
        labels.append(f"{s}.{rank}")
    labels = tuple(labels)

    chunks: list[tuple[str, ...]] = [()] * len(sd.top_word)
    for a in sd.alphabet:
        sizes = _chunk_sizes(len(word_p[a]), len(tops[a]))
        pos = 0
        for e, size in zip(tops[a], sizes):
            chunks[e] = word_p[a][pos : pos + size]
            pos += size

    def rewrite(chunk: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(labels[f] for u in chunk for f in tops[u])

    split = StationaryOrderedDiagram(labels, labels, tuple(rewrite(c) for c in chunks))
    check = properly_ordered(split)
    if not check:
        raise RuntimeError(f"split output failed proper ordering: {check.reason}")

    witness = _split_witness(sd, labels, chunks, tops, witness_periods)
    return split, witness


def _split_witness(sd, labels, chunks, tops, periods: int) -> OrderedDiagram:
    """Alternating old/new levels realizing both telescopings of the split."""
    alpha = sd.alphabet
    T = len(sd.top_word)
    levels: list[tuple[str, ...]] = [("v0",), labels]
    edge_levels: list[tuple[Edge, ...]] = [tuple(Edge(0, e, 0) for e in range(T))]
    for period in range(periods):
        # new -> old: each old vertex collects one edge per top edge into it
        levels.append(alpha)
        lvl = []
        for vi, v in enumerate(alpha):
            for rank, e in enumerate(tops[v]):
                lvl.append(Edge(e, vi, rank))
        edge_levels.append(tuple(lvl))
        if period == periods - 1:
            break
        # old -> new: each new vertex collects its chunk word
        levels.append(labels)
        lvl = []
        for e in range(T):
            for t, u in enumerate(chunks[e]):
                lvl.append(Edge(alpha.index(u), e, t))
        edge_levels.append(tuple(lvl))
    return OrderedDiagram(tuple(levels), tuple(edge_levels))
