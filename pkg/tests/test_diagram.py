import random

import pytest

from bratteli import (
    BratteliDiagram,
    Edge,
    OrderedDiagram,
    compose_schedules,
    graded_isomorphic,
    incidence_matrix,
    induced_order_telescope,
    is_primitive,
    is_simple,
    order_isomorphic,
    telescope,
    validate,
    verify_interleaving_witness,
)
from bratteli.intmat import mat_mul, mat_pow

from conftest import random_valid_diagram


def two_level(c1, c2, top=None):
    """Explicit diagram with given matrices between levels 1-2 and 2-3."""
    t1 = len(c1[0])
    top = top or [1] * t1
    levels = [("v0",)]
    edges = []
    lvl1 = []
    for i, m in enumerate(top):
        lvl1.extend(Edge(0, i, None) for _ in range(m))
    levels.append(tuple(f"a{i}" for i in range(t1)))
    edges.append(tuple(lvl1))
    for mat_, tag in ((c1, "b"), (c2, "c")):
        rows = len(mat_)
        lvl = []
        for i in range(rows):
            for j in range(len(mat_[0])):
                lvl.extend(Edge(j, i, None) for _ in range(mat_[i][j]))
        levels.append(tuple(f"{tag}{i}" for i in range(rows)))
        edges.append(tuple(lvl))
    return BratteliDiagram(tuple(levels), tuple(edges))


class TestValidate:
    def test_parallel_edges_valid(self, odometer):
        assert validate(odometer.truncate(4)) == []

    def test_missing_incoming_edge_reported(self):
        d = BratteliDiagram(
            (("v0",), ("a",), ("a", "b")),
            ((Edge(0, 0),), (Edge(0, 0),)),
        )
        report = validate(d)
        assert len(report) == 1
        assert report[0].clause == "no-incoming"
        assert "b" in report[0].where

    def test_two_roots_reported(self):
        d = BratteliDiagram(
            (("v0", "w0"), ("a",)),
            ((Edge(0, 0), Edge(1, 0)),),
        )
        clauses = {v.clause for v in validate(d)}
        assert "root" in clauses

    def test_no_outgoing_within_depth_reported(self):
        d = BratteliDiagram(
            (("v0",), ("a", "b"), ("c",)),
            ((Edge(0, 0), Edge(0, 1)), (Edge(0, 0),)),
        )
        report = validate(d)
        assert any(v.clause == "no-outgoing" and "b" in v.where for v in report)


class TestIncidence:
    def test_odometer(self, odometer):
        assert incidence_matrix(odometer.truncate(2), 2) == ((2,),)

    def test_fibonacci(self, fibonacci):
        assert incidence_matrix(fibonacci.truncate(3), 2) == ((1, 1), (1, 0))

    def test_level_out_of_range(self, odometer):
        with pytest.raises(ValueError):
            incidence_matrix(odometer.truncate(2), 3)


class TestTelescope:
    def test_identity_schedule_isomorphic(self, fibonacci):
        d = fibonacci.truncate(4)
        t = telescope(d, tuple(range(5)))
        assert order_isomorphic(t, d)

    def test_matrix_product_example(self):
        c1 = ((1, 1), (1, 1))
        c2 = ((2, 1), (0, 1))
        d = two_level(c1, c2)
        t = telescope(d, (0, 1, 3))
        assert incidence_matrix(t, 2) == ((3, 3), (1, 1))
        assert incidence_matrix(t, 2) == mat_mul(c2, c1)

    def test_odometer_double_step(self, odometer):
        t = telescope(odometer.truncate(4), (0, 2, 4))
        assert incidence_matrix(t, 1) == ((4,),)
        assert incidence_matrix(t, 2) == ((4,),)

    def test_product_law_random(self):
        rng = random.Random(1201)
        for _ in range(60):
            d = random_valid_diagram(rng)
            cuts = sorted(rng.sample(range(1, d.depth + 1), rng.randint(1, d.depth)))
            sched = (0, *cuts)
            t = telescope(d, sched)
            for w in range(1, len(sched)):
                prod = None
                for m in range(sched[w - 1] + 1, sched[w] + 1):
                    prod = d.incidence(m) if prod is None else mat_mul(d.incidence(m), prod)
                assert t.incidence(w) == prod

    def test_composition_up_to_isomorphism(self):
        rng = random.Random(77)
        for _ in range(25):
            d = random_valid_diagram(rng, max_depth=4)
            if d.depth < 2:
                continue
            s1 = (0, *sorted(rng.sample(range(1, d.depth + 1), rng.randint(2, d.depth)))[:3])
            s2 = tuple(range(len(s1)))[: rng.randint(2, len(s1))]
            two_step = telescope(telescope(d, s1), s2)
            one_step = telescope(d, compose_schedules(s1, s2))
            assert graded_isomorphic(two_step, one_step)

    def test_validity_preserved(self):
        rng = random.Random(99)
        for _ in range(30):
            d = random_valid_diagram(rng)
            assert validate(d) == []
            t = telescope(d, (0, d.depth))
            assert validate(t) == []

    def test_truncating_schedule_drops_tail(self, odometer):
        t = telescope(odometer.truncate(5), (0, 2, 4))
        assert t.depth == 2
        assert incidence_matrix(t, 2) == ((4,),)

    def test_bad_schedules_rejected(self, odometer):
        d = odometer.truncate(3)
        for cuts in ((1, 2), (0, 2, 2), (0, 5), (0,)):
            with pytest.raises(ValueError):
                telescope(d, cuts)

    def test_induced_order_example(self, odometer):
        # four composite paths into the single vertex, ordered by the rule
        # where the last differing coordinate decides
        t = induced_order_telescope(odometer.truncate(2), (0, 2))
        assert [e.order for e in t.edges[0]] == [0, 1, 2, 3]
        # rebuild the expected order by brute-force sorting of (ord1, ord2) pairs
        pairs = [(o1, o2) for o2 in range(2) for o1 in range(2)]
        expected = sorted(pairs, key=lambda p: (p[1], p[0]))
        assert expected == [(0, 0), (1, 0), (0, 1), (1, 1)]


class TestPrimitivity:
    def test_scalar(self):
        assert is_primitive(((2,),)) == is_primitive(((2,),))
        res = is_primitive(((2,),))
        assert res.primitive and res.power == 1

    def test_fibonacci_power_two(self):
        res = is_primitive(((1, 1), (1, 0)))
        assert res.primitive and res.power == 2

    def test_swap_not_primitive(self):
        assert not is_primitive(((0, 1), (1, 0))).primitive

    def test_minimal_power_witness(self):
        rng = random.Random(5)
        found = 0
        while found < 20:
            n = rng.randint(1, 4)
            c = tuple(
                tuple(rng.choice((0, 1, 1, 2)) for _ in range(n)) for _ in range(n)
            )
            res = is_primitive(c)
            if not res.primitive:
                continue
            found += 1
            k = res.power
            assert all(x > 0 for row in mat_pow(c, k) for x in row)
            if k > 1:
                assert any(x == 0 for row in mat_pow(c, k - 1) for x in row)

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            is_primitive(((1, 2),))


class TestSimplicity:
    def test_stationary_yes(self, fibonacci):
        res = is_simple(fibonacci)
        assert res.verdict == "yes" and res.schedule is not None

    def test_stationary_no(self):
        from bratteli import StationaryOrderedDiagram

        sd = StationaryOrderedDiagram(("a", "b"), ("a", "b"), (("a", "a"), ("b", "b")))
        assert is_simple(sd).verdict == "no"

    def test_explicit_undetermined_with_zero_pattern(self):
        # lower-triangular matrices keep a zero corner in every window product
        lower = ((1, 0), (1, 1))
        d = two_level(lower, lower, top=[1, 1])
        assert is_simple(d, horizon=3).verdict == "undetermined"

    def test_explicit_yes_has_positive_windows(self):
        d = two_level(((1, 1), (1, 1)), ((1, 1), (1, 0)), top=[1, 1])
        res = is_simple(d)
        assert res.verdict == "yes"
        sched = res.schedule
        for w in range(1, len(sched)):
            prod = None
            for m in range(sched[w - 1] + 1, sched[w] + 1):
                prod = d.incidence(m) if prod is None else mat_mul(d.incidence(m), prod)
            assert all(x > 0 for row in prod for x in row)


class TestInterleaving:
    def test_odometer_natural_interleaving(self, odometer):
        w = odometer.truncate(4).strip_order()
        d1 = odometer.truncate(4).strip_order()
        d2 = telescope(d1, (0, 2, 4))
        assert verify_interleaving_witness(d1, d2, w)

    def test_unrelated_false(self, odometer, fibonacci):
        w = fibonacci.truncate(4).strip_order()
        d1 = odometer.truncate(4).strip_order()
        d2 = telescope(d1, (0, 2, 4))
        assert not verify_interleaving_witness(d1, d2, w)


class TestIsomorphism:
    def test_label_permutation_is_isomorphic(self, fibonacci):
        d = fibonacci.truncate(3)
        swapped_levels = tuple(
            lv if n == 0 else tuple(reversed(lv)) for n, lv in enumerate(d.levels)
        )
        remap = lambda n, v: len(d.levels[n]) - 1 - v if n > 0 else v
        swapped_edges = tuple(
            tuple(Edge(remap(n - 1, e.src), remap(n, e.dst), e.order) for e in lv)
            for n, lv in enumerate(d.edges, start=1)
        )
        other = OrderedDiagram(swapped_levels, swapped_edges)
        assert order_isomorphic(d, other)
        assert graded_isomorphic(d, other)

    def test_different_multiplicity_not_isomorphic(self, odometer):
        d2 = odometer.truncate(3)
        d3 = telescope(d2, (0, 1, 3))
        assert not graded_isomorphic(d2, d3)
