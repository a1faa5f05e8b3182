"""Shared fixtures: the five named test fans and randomized generators."""

import functools
import math
from fractions import Fraction
from pathlib import Path

from stackyfan.core import Fan, validate_fan
from stackyfan.stacky import PiecewiseQLinear, StackyFan
from stackyfan.arcspace import StackDivisor

DATA = Path(__file__).parent / "data"


def mk_sfan(rank, rays, weights, cones, support):
    fan = Fan.from_maximal(rank, rays, cones, support)
    return StackyFan(fan, weights)


def fan_a1():
    """Half-line: rank 1, single ray +1, weight 1, convex support."""
    return mk_sfan(1, [(1,)], (1,), [(0,)], "convex")


def fan_p1():
    """Projective line: rank 1, rays +1 and -1, weights 1."""
    return mk_sfan(1, [(1,), (-1,)], (1, 1), [(0,), (1,)], "complete")


def fan_p2():
    """Projective plane: rays (1,0), (0,1), (-1,-1), weights 1."""
    return mk_sfan(2, [(1, 0), (0, 1), (-1, -1)], (1, 1, 1),
                   [(0, 1), (1, 2), (0, 2)], "complete")


def fan_p12():
    """Weighted projective line P(1,2): rays +1, -1, weights (1, 2)."""
    return mk_sfan(1, [(1,), (-1,)], (1, 2), [(0,), (1,)], "complete")


def fan_p112():
    """P(1,1,2)-type surface: rays (1,0), (0,1), (-1,-2), weights 1."""
    return mk_sfan(2, [(1, 0), (0, 1), (-1, -2)], (1, 1, 1),
                   [(0, 1), (1, 2), (0, 2)], "complete")


def named_fans():
    return {"a1": fan_a1(), "p1": fan_p1(), "p2": fan_p2(),
            "p12": fan_p12(), "p112": fan_p112()}


# ---------------------------------------------------------------------------
# Randomized generators (seeded by the caller for reproducibility)


def _angle_half(v):
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(a, b):
    if _angle_half(a) != _angle_half(b):
        return _angle_half(a) - _angle_half(b)
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


_PRIMITIVE_2D = [(x, y) for x in range(-3, 4) for y in range(-3, 4)
                 if (x, y) != (0, 0) and math.gcd(abs(x), abs(y)) == 1]


def random_complete_rank2(rng, max_weight=3):
    """A random complete rank-2 stacky fan with 3-5 rays."""
    while True:
        rays = rng.sample(_PRIMITIVE_2D, rng.randint(3, 5))
        rays.sort(key=functools.cmp_to_key(_angle_cmp))
        n = len(rays)
        if not all(rays[i][0] * rays[(i + 1) % n][1]
                   - rays[i][1] * rays[(i + 1) % n][0] > 0 for i in range(n)):
            continue
        fan = Fan.from_maximal(2, rays, [(i, (i + 1) % n) for i in range(n)],
                               "complete")
        if validate_fan(fan).ok:
            return StackyFan(fan, tuple(rng.randint(1, max_weight)
                                        for _ in rays))


def random_convex_rank2(rng, max_weight=3):
    """A random single-cone rank-2 stacky fan (convex support)."""
    while True:
        a, b = rng.sample(_PRIMITIVE_2D, 2)
        if a[0] * b[1] - a[1] * b[0] <= 0:
            continue
        fan = Fan.from_maximal(2, [a, b], [(0, 1)], "convex")
        if validate_fan(fan).ok:
            return StackyFan(fan, (rng.randint(1, max_weight),
                                   rng.randint(1, max_weight)))


def random_complete_rank3(rng, max_weight=3):
    """A random complete rank-3 stacky fan over a simplex with apex
    (-a,-b,-c)."""
    while True:
        apex = (-rng.randint(1, 2), -rng.randint(1, 2), -rng.randint(1, 2))
        if math.gcd(math.gcd(abs(apex[0]), abs(apex[1])), abs(apex[2])) != 1:
            continue
        rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), apex]
        fan = Fan.from_maximal(3, rays,
                               [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)],
                               "complete")
        if validate_fan(fan).ok:
            return StackyFan(fan, tuple(rng.randint(1, max_weight)
                                        for _ in rays))


def random_convex_rank3(rng, max_weight=3):
    """A random single-cone rank-3 stacky fan."""
    while True:
        rays = [tuple(rng.randint(-2, 2) for _ in range(3)) for _ in range(3)]
        if any(math.gcd(math.gcd(abs(r[0]), abs(r[1])), abs(r[2])) != 1
               for r in rays):
            continue
        if len(set(rays)) != 3:
            continue
        fan = Fan.from_maximal(3, rays, [(0, 1, 2)], "convex")
        if validate_fan(fan).ok:
            return StackyFan(fan, tuple(rng.randint(1, max_weight)
                                        for _ in rays))


def random_admissible_lambda(rng, sfan, min_num=None):
    """Random functional with values in (-1, 2], denominators <= 4.

    min_num bounds the numerator from below on the quarter grid; the
    default -3 allows values as low as -3/4."""
    lo = -3 if min_num is None else min_num
    values = tuple(Fraction(rng.randint(lo, 8), 4)
                   for _ in sfan.fan.rays)
    return PiecewiseQLinear(sfan, values)


def random_klt_divisor(rng, sfan):
    """Random klt divisor with coefficients on the quarter grid, <= 1/2."""
    return StackDivisor(sfan, tuple(Fraction(rng.randint(-4, 2), 4)
                                    for _ in sfan.fan.rays))
