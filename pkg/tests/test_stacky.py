import random
from fractions import Fraction

import pytest

from conftest import (fan_a1, fan_p1, fan_p2, fan_p12, fan_p112, mk_sfan,
                      named_fans)
from stackyfan.core import Cone, ZERO_CONE
from stackyfan.errors import NotMaximalCone, OutsideSupport
from stackyfan.stacky import (PiecewiseQLinear, StackyFan, age, box_all,
                              box_bar_n, box_elements, element_order,
                              enumerate_support_points, eval_pl,
                              fractional_decompose, group_order, iota, psi,
                              zero_functional)


def cone12():
    """Single-cone fan on (1,0), (1,2), weights 1."""
    return mk_sfan(2, [(1, 0), (1, 2)], (1, 1), [(0, 1)], "convex")


def test_psi_on_b_is_one():
    for f in named_fans().values():
        for i in range(len(f.fan.rays)):
            assert psi(f, f.b(i)) == 1


def test_psi_p12_values():
    f = fan_p12()
    assert psi(f, (-2,)) == 1
    assert psi(f, (-3,)) == Fraction(3, 2)
    assert psi(f, (0,)) == 0


def test_psi_outside_support():
    with pytest.raises(OutsideSupport):
        psi(fan_a1(), (-1,))


def test_psi_homogeneity():
    f = fan_p112()
    rng = random.Random(5)
    for _ in range(20):
        v = (rng.randint(-5, 5), rng.randint(-5, 5))
        k = Fraction(rng.randint(0, 6), rng.randint(1, 3))
        assert psi(f, tuple(k * x for x in v)) == k * psi(f, v)


def test_eval_pl_matches_psi_for_ones():
    f = fan_p112()
    ones = PiecewiseQLinear(f, (1, 1, 1))
    rng = random.Random(13)
    for _ in range(20):
        v = (rng.randint(-5, 5), rng.randint(-5, 5))
        assert eval_pl(ones, v) == psi(f, v)


def test_eval_pl_p1():
    f = fan_p1()
    lam = PiecewiseQLinear(f, (1, 0))
    assert eval_pl(lam, (3,)) == 3
    assert eval_pl(lam, (-2,)) == 0


def test_box_elements_cone12():
    f = cone12()
    elems = box_elements(f, Cone((0, 1)))
    assert len(elems) == 1
    e = elems[0]
    assert e.point == (1, 1)
    assert e.q == (Fraction(1, 2), Fraction(1, 2))
    assert e.order == 2


def test_box_elements_p112():
    f = fan_p112()
    elems = box_elements(f, Cone((0, 2)))
    assert [(e.point, e.q, e.order) for e in elems] == \
        [((0, -1), (Fraction(1, 2), Fraction(1, 2)), 2)]


def test_box_elements_unit_weight_ray_empty():
    f = fan_p2()
    for i in range(3):
        assert box_elements(f, Cone((i,))) == []


def test_box_all_fixtures():
    assert [e.point for e in box_all(fan_p2())] == [(0, 0)]
    assert [e.point for e in box_all(fan_p112())] == [(0, 0), (0, -1)]
    assert [e.point for e in box_all(fan_p12())] == [(0,), (-1,)]
    p12_box = box_all(fan_p12())[1]
    assert p12_box.q == (Fraction(1, 2),) and p12_box.order == 2


def test_iota_fixed_points():
    f = fan_p12()
    e = box_all(f)[1]
    assert iota(f, e).point == (-1,)
    g = cone12()
    e2 = box_elements(g, Cone((0, 1)))[0]
    assert iota(g, e2).point == (1, 1)
    zero = box_all(f)[0]
    assert iota(f, zero) is zero


def test_iota_involution_and_age_sum():
    for f in named_fans().values():
        for e in box_all(f):
            back = iota(f, iota(f, e))
            assert back.point == e.point and back.q == e.q
            if not e.is_zero:
                assert age(f, e) + age(f, iota(f, e)) == e.cone.dim


def test_ages():
    f = fan_p12()
    zero, minus1 = box_all(f)
    assert age(f, zero) == 0
    assert age(f, minus1) == Fraction(1, 2)
    g = fan_p112()
    assert age(g, box_all(g)[1]) == 1


def test_age_is_psi_of_point():
    for f in named_fans().values():
        for e in box_all(f):
            assert age(f, e) == psi(f, e.point)


def test_group_order():
    f = fan_p2()
    for sigma in f.fan.maximal_cones:
        assert group_order(f, sigma) == 1
    assert group_order(cone12(), Cone((0, 1))) == 2
    assert group_order(fan_p12(), Cone((1,))) == 2


def test_group_order_requires_maximal_dim():
    with pytest.raises(NotMaximalCone):
        group_order(fan_p2(), Cone((0,)))


def test_box_group_bijection():
    for f in named_fans().values():
        for sigma in f.fan.maximal_cones:
            if sigma.dim != f.rank:
                continue
            total = sum(len(box_elements(f, tau)) for tau in sigma.faces())
            assert total == group_order(f, sigma)


def test_element_order():
    assert element_order(fan_p12(), box_all(fan_p12())[0]) == 1
    e = box_elements(cone12(), Cone((0, 1)))[0]
    assert element_order(cone12(), e) == 2


def test_fractional_decompose_integral():
    f = fan_a1()
    d = fractional_decompose(f, (2,))
    assert d.box_part.is_zero and d.shifts == ((0, 2),)


def test_fractional_decompose_p12():
    f = fan_p12()
    d = fractional_decompose(f, (-3,))
    assert d.box_part.point == (-1,)
    assert d.shifts == ((1, 1),)


def test_fractional_decompose_reassembles():
    rng = random.Random(17)
    for f in named_fans().values():
        pts = [p for p, _, _ in enumerate_support_points(f, 4)]
        for w in rng.sample(pts, min(10, len(pts))):
            d = fractional_decompose(f, w)
            rebuilt = list(d.box_part.point)
            for i, n in d.shifts:
                assert n >= 0
                for j, x in enumerate(f.b(i)):
                    rebuilt[j] += n * x
            assert tuple(rebuilt) == w


def test_fractional_decompose_on_b():
    for f in named_fans().values():
        for i in range(len(f.fan.rays)):
            d = fractional_decompose(f, f.b(i))
            assert d.box_part.is_zero
            assert dict(d.shifts).get(i) == 1


def test_box_bar_n():
    assert box_bar_n(fan_a1(), Cone((0,)), 2) == [(1,), (2,)]
    assert box_bar_n(fan_p12(), Cone((1,)), 1) == [(-2,), (-1,)]
    assert box_bar_n(cone12(), Cone((0, 1)), 1) == [(1, 1), (2, 2)]


def test_box_bar_1_strict_interior_is_box():
    for f in named_fans().values():
        for tau in f.fan.sorted_cones:
            if tau == ZERO_CONE:
                continue
            strict = [e.point for e in box_elements(f, tau)]
            bar = box_bar_n(f, tau, 1)
            # removing points with some q_i = 1 leaves exactly the box
            boundary = [p for p in bar if p not in strict]
            assert sorted(strict) == sorted(p for p in bar if p in strict)
            for p in boundary:
                assert p not in strict


def test_enumerate_support_points_matches_brute_count():
    from stackyfan.deltainv import count_lattice_points
    for f in named_fans().values():
        for m in range(4):
            pts = enumerate_support_points(f, m)
            assert len(pts) == count_lattice_points(f, m)
            assert all(ps <= m for _, ps, _ in pts)
            psis = [ps for _, ps, _ in pts]
            assert psis == sorted(psis)


def test_enumerate_support_points_lambda_values():
    f = fan_p1()
    lam = (Fraction(1), Fraction(0))
    for p, ps, lv in enumerate_support_points(f, 3, lam):
        assert lv == (p[0] if p[0] >= 0 else 0)
