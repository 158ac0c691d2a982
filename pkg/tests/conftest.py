import random

import pytest

from bratteli import (
    BratteliDiagram,
    Edge,
    StationaryOrderedDiagram,
    properly_ordered,
)

LETTERS = "abcd"


@pytest.fixture
def odometer():
    return StationaryOrderedDiagram(("a",), ("a", "a"), (("a", "a"),))


@pytest.fixture
def fibonacci():
    return StationaryOrderedDiagram(("a", "b"), ("a", "b"), (("a", "b"), ("a",)))


@pytest.fixture
def fibonacci_aab():
    return StationaryOrderedDiagram(("a", "b"), ("a", "a", "b"), (("a", "b"), ("a",)))


def random_valid_diagram(rng: random.Random, max_depth=4, max_width=4) -> BratteliDiagram:
    """Random explicit diagram satisfying the defining clauses, entries <= 3."""
    depth = rng.randint(1, max_depth)
    sizes = [1] + [rng.randint(1, max_width) for _ in range(depth)]
    edge_levels = []
    for n in range(1, depth + 1):
        rows, cols = sizes[n], sizes[n - 1]
        m = [[rng.choice((0, 0, 0, 1, 1, 1, 2, 3)) for _ in range(cols)] for _ in range(rows)]
        for i in range(rows):
            if not any(m[i]):
                m[i][rng.randrange(cols)] = 1
        for j in range(cols):
            if not any(m[i][j] for i in range(rows)):
                m[rng.randrange(rows)][j] = 1
        lvl = []
        for i in range(rows):
            for j in range(cols):
                lvl.extend(Edge(j, i, None) for _ in range(m[i][j]))
        edge_levels.append(tuple(lvl))
    levels = tuple(
        tuple(f"v{n}_{i}" for i in range(sizes[n])) for n in range(depth + 1)
    )
    return BratteliDiagram(levels, tuple(edge_levels))


def random_proper_stationary(
    rng: random.Random, max_k=4, height_cap=20_000, cap_level=6
) -> StationaryOrderedDiagram:
    """Random stationary descriptor that is properly ordered and non-degenerate."""
    k = rng.randint(1, max_k)
    alphabet = tuple(LETTERS[:k])
    while True:
        words = [
            tuple(rng.choice(alphabet) for _ in range(rng.randint(1, 3))) for _ in range(k)
        ]
        used = {s for w in words for s in w}
        for a in alphabet:
            if a not in used:
                i = rng.randrange(k)
                words[i] = words[i] + (a,)
        top = list(alphabet)
        for _ in range(rng.randint(0, 2)):
            top.append(rng.choice(alphabet))
        rng.shuffle(top)
        try:
            sd = StationaryOrderedDiagram(alphabet, tuple(top), tuple(words))
        except ValueError:
            continue
        if not properly_ordered(sd):
            continue
        if sd.has_finite_path_space:
            continue
        if max(sd.heights(cap_level)) > height_cap:
            continue
        return sd
