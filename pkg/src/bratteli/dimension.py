"""Stage-indexed integer groups along incidence matrices, with order decisions.

Elements are integer vectors at a stage; two elements are identified when
pushing them through the connecting matrices makes them agree.  Positivity in
the limit order is decided exactly where possible: by eventual-kernel tests,
by sign stabilization of pushes, and in the primitive stationary case by the
sign of the pairing against the dominant left eigenvector, certified with
rational interval enclosures (never floats).  A certified-ambiguous pairing
(the infinitesimal boundary) is reported as undetermined, not guessed.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .diagram import BratteliDiagram, is_primitive
from .intmat import Matrix, Vector, mat_mul, mat_pow, mat_vec, solve_integer
from .stationary import StationaryOrderedDiagram
from .towers import KRLevel, NestedKRSequence, diagram_from_nested


class Sign(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    UNDETERMINED = "undetermined"


class GroupElement(NamedTuple):
    stage: int
    vector: tuple[int, ...]

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.stage, tuple(-x for x in self.vector))


ITER_DEFAULT = 12
REFINE_DEFAULT = 10
REFINE_CAP = 14  # each refinement squares the matrix; entries double in bit length


@dataclass(frozen=True)
class GroupPresentation:
    """Chain of integer lattices connected by nonnegative matrices.

    Explicit presentations carry finitely many matrices; stationary ones
    repeat a single square matrix beyond stage 1 and allow arbitrary stages.
    """

    dims: tuple[int, ...]
    mats: tuple[Matrix, ...]
    stationary_matrix: Optional[Matrix] = None

    @classmethod
    def from_diagram(cls, d: BratteliDiagram) -> "GroupPresentation":
        dims = tuple(len(lv) for lv in d.levels)
        mats = tuple(d.incidence(n) for n in range(1, d.depth + 1))
        return cls(dims, mats)

    @classmethod
    def from_stationary(cls, sd: StationaryOrderedDiagram) -> "GroupPresentation":
        top = tuple((m,) for m in sd.multiplicities)
        return cls((1, sd.k), (top,), sd.matrix)

    @property
    def is_stationary(self) -> bool:
        return self.stationary_matrix is not None

    @property
    def last_stage(self) -> Optional[int]:
        return None if self.is_stationary else len(self.dims) - 1

    def dim(self, stage: int) -> int:
        if stage < 0:
            raise ValueError("stages are nonnegative")
        if self.is_stationary:
            return 1 if stage == 0 else len(self.stationary_matrix)
        if stage >= len(self.dims):
            raise ValueError(f"stage {stage} beyond represented depth {self.last_stage}")
        return self.dims[stage]

    def matrix(self, n: int) -> Matrix:
        """Connecting matrix from stage n-1 to stage n."""
        if n < 1:
            raise ValueError("connecting matrices are 1-based")
        if self.is_stationary:
            return self.mats[0] if n == 1 else self.stationary_matrix
        if n > len(self.mats):
            raise ValueError(f"stage {n} beyond represented depth {self.last_stage}")
        return self.mats[n - 1]

    def element(self, stage: int, vector: Sequence[int]) -> GroupElement:
        vec = tuple(int(x) for x in vector)
        if len(vec) != self.dim(stage):
            raise ValueError(
                f"stage {stage} holds vectors of length {self.dim(stage)}, got {len(vec)}"
            )
        return GroupElement(stage, vec)

    def unit(self) -> GroupElement:
        return GroupElement(0, (1,))

    def push(self, g: GroupElement, m: int) -> GroupElement:
        """Image of g at stage m >= stage(g) under the connecting matrices."""
        if m < g.stage:
            raise ValueError(f"cannot push from stage {g.stage} back to {m}")
        self.element(g.stage, g.vector)
        v = g.vector
        for n in range(g.stage + 1, m + 1):
            v = mat_vec(self.matrix(n), v)
        return GroupElement(m, v)

    def sub(self, a: GroupElement, b: GroupElement) -> GroupElement:
        m = max(a.stage, b.stage)
        va, vb = self.push(a, m).vector, self.push(b, m).vector
        return GroupElement(m, tuple(x - y for x, y in zip(va, vb)))

    def _in_eventual_kernel(self, stage: int, v: Vector) -> bool:
        if all(x == 0 for x in v):
            return True
        if self.is_stationary:
            if stage == 0:
                v = mat_vec(self.matrix(1), v)
            c = self.stationary_matrix
            # the kernel chain of c stabilizes within dim steps
            return all(x == 0 for x in mat_vec(mat_pow(c, len(c)), v))
        for n in range(stage + 1, len(self.dims)):
            v = mat_vec(self.matrix(n), v)
            if all(x == 0 for x in v):
                return True
        return False

    def equal(self, a: GroupElement, b: GroupElement) -> bool:
        """Identity in the limit: some common push agrees.

        Exact for stationary presentations via the stabilized kernel chain;
        explicit presentations are decided within their represented depth.
        """
        d = self.sub(a, b)
        return self._in_eventual_kernel(d.stage, d.vector)

    def realization_stage(self, g: GroupElement) -> int:
        """Smallest stage whose lattice already contains the class of g.

        The class is anchored past the stabilized kernel chain (k more pushes
        in the stationary case, the last stage in the explicit case), and a
        stage m realizes it iff the anchored vector has an integer preimage
        under the matrix chain from m to the anchor.
        """
        g = self.element(g.stage, g.vector)
        if self.is_stationary:
            k = len(self.stationary_matrix)
            anchor = g.stage + k
        else:
            anchor = len(self.dims) - 1
        target = self.push(g, anchor).vector
        for m in range(g.stage + 1):
            chain = None
            for n in range(m + 1, anchor + 1):
                c = self.matrix(n)
                chain = c if chain is None else mat_mul(c, chain)
            if chain is None:
                return m
            if solve_integer(chain, target) is not None:
                return m
        return g.stage

    # -- positivity ---------------------------------------------------------

    def sign_of(self, g: GroupElement, horizon: Optional[int] = None) -> Sign:
        """Order verdict for the class of g (see the module docstring)."""
        g = self.element(g.stage, g.vector)
        if self._in_eventual_kernel(g.stage, g.vector):
            return Sign.ZERO
        if self.is_stationary:
            return self._sign_stationary(g, horizon)
        return self._sign_explicit(g, horizon)

    def _sign_explicit(self, g: GroupElement, horizon: Optional[int]) -> Sign:
        v = g.vector
        last = len(self.dims) - 1
        if horizon is not None:
            last = min(last, g.stage + horizon)
        for n in range(g.stage, last + 1):
            if all(x >= 0 for x in v) and any(x > 0 for x in v):
                return Sign.POSITIVE
            if all(x <= 0 for x in v) and any(x < 0 for x in v):
                return Sign.NEGATIVE
            if n + 1 <= last:
                v = mat_vec(self.matrix(n + 1), v)
        return Sign.UNDETERMINED

    def _sign_stationary(self, g: GroupElement, horizon: Optional[int]) -> Sign:
        c = self.stationary_matrix
        k = len(c)
        v = self.push(g, max(1, g.stage)).vector
        steps = ITER_DEFAULT + 2 * k if horizon is None else horizon
        w = v
        for _ in range(steps + 1):
            if all(x >= 0 for x in w) and any(x > 0 for x in w):
                return Sign.POSITIVE
            if all(x <= 0 for x in w) and any(x < 0 for x in w):
                return Sign.NEGATIVE
            w = mat_vec(c, w)
        prim = is_primitive(c)
        if not prim.primitive:
            return Sign.UNDETERMINED
        budget = REFINE_DEFAULT if horizon is None else min(max(horizon, 4), REFINE_CAP)
        return _certified_pairing_sign(c, prim.power, v, budget)


def _certified_pairing_sign(c: Matrix, prim_power: int, v: Vector, budget: int) -> Sign:
    """Sign of the dominant-left-eigenvector pairing, by interval refinement.

    For a strictly positive power P, the ratios l_j / l_0 of the dominant left
    eigenvector lie between the column ratios min_i P[i][j] / P[i][0] and
    max_i P[i][j] / P[i][0]; squaring P contracts the enclosure.  The pairing
    interval either certifies a sign or the refinement budget runs out.
    """
    p = mat_pow(c, prim_power)
    for _ in range(budget):
        lo_hi = []
        for j in range(len(c)):
            ratios = [Fraction(row[j], row[0]) for row in p]
            lo_hi.append((min(ratios), max(ratios)))
        lo = sum((l if x >= 0 else h) * x for (l, h), x in zip(lo_hi, v))
        hi = sum((h if x >= 0 else l) * x for (l, h), x in zip(lo_hi, v))
        if lo > 0:
            return Sign.POSITIVE
        if hi < 0:
            return Sign.NEGATIVE
        p = mat_mul(p, p)
    return Sign.UNDETERMINED


def k0_of(d) -> GroupPresentation:
    """Presentation of the ordered group of a diagram or stationary descriptor."""
    if isinstance(d, StationaryOrderedDiagram):
        return GroupPresentation.from_stationary(d)
    return GroupPresentation.from_diagram(d)


def push(p: GroupPresentation, g: GroupElement, m: int) -> GroupElement:
    return p.push(g, m)


def equal(p: GroupPresentation, a: GroupElement, b: GroupElement) -> bool:
    return p.equal(a, b)


def is_positive(p: GroupPresentation, g: GroupElement, horizon: Optional[int] = None) -> Sign:
    return p.sign_of(g, horizon)


def unit_of(p: GroupPresentation) -> GroupElement:
    return p.unit()


def interpolate(
    p: GroupPresentation,
    a1: GroupElement,
    a2: GroupElement,
    b1: GroupElement,
    b2: GroupElement,
    horizon: int = 8,
) -> Optional[GroupElement]:
    """Search a c with a_i <= c <= b_j, trying entrywise maxima at deeper stages.

    Returns None when the search budget runs out; that is not a disproof.
    """
    nonneg = (Sign.POSITIVE, Sign.ZERO)
    for a in (a1, a2):
        for b in (b1, b2):
            s = p.sign_of(p.sub(b, a))
            if s not in nonneg:
                raise ValueError(f"precondition a <= b failed: difference is {s.value}")
    base = max(a1.stage, a2.stage, b1.stage, b2.stage)
    for extra in range(horizon + 1):
        m = base + extra
        if p.last_stage is not None and m > p.last_stage:
            break
        u1, u2 = p.push(a1, m).vector, p.push(a2, m).vector
        c = GroupElement(m, tuple(max(x, y) for x, y in zip(u1, u2)))
        checks = [p.sign_of(p.sub(c, a)) for a in (a1, a2)]
        checks += [p.sign_of(p.sub(b, c)) for b in (b1, b2)]
        if all(s in nonneg for s in checks):
            return c
    return None


# ---------------------------------------------------------------------------
# tower functions: the finite-stage model over a nested tower sequence


@dataclass(frozen=True)
class TowerFunction:
    """Integer function constant on tower floors of one level: values[k][j]."""

    level: int
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "values", tuple(tuple(int(x) for x in row) for row in self.values)
        )

    def matches(self, lv: KRLevel) -> bool:
        return tuple(len(row) for row in self.values) == lv.heights


def gamma(f: TowerFunction) -> GroupElement:
    """Sum the values over each tower; the tower-sum vector at the function's level."""
    return GroupElement(f.level, tuple(sum(row) for row in f.values))


def lift_tower_function(seq: NestedKRSequence, f: TowerFunction) -> TowerFunction:
    """Express a level-n function at level n+1: every finer floor inherits the
    value of the floor it refines, read along the traversal words."""
    lv = seq.levels[f.level]
    if not f.matches(lv):
        raise ValueError("tower function does not match the level shape")
    nxt = seq.levels[f.level + 1]
    rows = []
    for w in nxt.words:
        row: list[int] = []
        for i in w:
            row.extend(f.values[i])
        rows.append(tuple(row))
    return TowerFunction(f.level + 1, tuple(rows))


def gamma_intertwine_check(seq: NestedKRSequence, n: int) -> bool:
    """Tower sums commute with lifting: summing the lift equals applying the
    incidence matrix of the rebuilt diagram to the sums, on every floor
    indicator of level n."""
    if not (0 <= n < seq.depth):
        raise ValueError(f"need consecutive levels {n},{n + 1} within depth {seq.depth}")
    q = diagram_from_nested(seq).incidence(n + 1)
    lv = seq.levels[n]
    for k, h in enumerate(lv.heights):
        for j in range(h):
            f = TowerFunction(
                n,
                tuple(
                    tuple(1 if (kk == k and jj == j) else 0 for jj in range(hh))
                    for kk, hh in enumerate(lv.heights)
                ),
            )
            lifted = gamma(lift_tower_function(seq, f))
            pushed = mat_vec(q, gamma(f).vector)
            if lifted.vector != pushed:
                return False
    return True


def coboundary_witness(f: TowerFunction) -> TowerFunction:
    """Partial-sum transfer function for a null-sum tower function.

    Returns g with g[k][0] = 0 and f[k][j] = g[k][j+1] - g[k][j] below the top
    floor; across the wrap at the top the identity is exactly the null-sum
    condition, so f agrees with the one-step difference of g everywhere.
    """
    sums = [sum(row) for row in f.values]
    if any(s != 0 for s in sums):
        raise ValueError("coboundary witnesses exist only for null tower sums")
    rows = []
    for row in f.values:
        acc = 0
        g_row = []
        for x in row:
            g_row.append(acc)
            acc += x
        rows.append(tuple(g_row))
    return TowerFunction(f.level, tuple(rows))
