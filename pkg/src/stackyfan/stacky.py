"""Stacky-fan structure: ray weights b_i = a_i v_i, piecewise Q-linear
functionals, BOX enumeration, the box involution, ages, group orders and
fractional-part decompositions of lattice points."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import core
from .core import Cone, Fan, ZERO_CONE, as_vec, is_zero_vec, vec_add
from .errors import NotMaximalCone, OutsideSupport


@dataclass(frozen=True)
class StackyFan:
    """The triple (N, Sigma, {b_i}) with b_i = a_i * v_i."""

    fan: Fan
    weights: tuple  # positive integer a_i per ray

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(a) for a in self.weights))
        if len(self.weights) != len(self.fan.rays):
            raise ValueError("one weight per ray required")
        if any(a < 1 for a in self.weights):
            raise ValueError("weights must be positive")

    @property
    def rank(self) -> int:
        return self.fan.rank

    def b(self, i) -> tuple:
        return tuple(self.weights[i] * x for x in self.fan.rays[i])

    @property
    def b_vectors(self) -> tuple:
        return tuple(self.b(i) for i in range(len(self.fan.rays)))


@dataclass(frozen=True)
class PiecewiseQLinear:
    """A functional on |Sigma|, linear on every cone, determined by its
    values on the b_i."""

    sfan: StackyFan
    values_on_b: tuple  # exact rationals

    def __post_init__(self):
        object.__setattr__(self, "values_on_b",
                           tuple(Fraction(v) for v in self.values_on_b))
        if len(self.values_on_b) != len(self.sfan.fan.rays):
            raise ValueError("one value per ray required")


def zero_functional(sfan: StackyFan) -> PiecewiseQLinear:
    return PiecewiseQLinear(sfan, (Fraction(0),) * len(sfan.fan.rays))


@dataclass(frozen=True)
class BoxElement:
    """A lattice point v = sum q_i b_i with all q_i in (0,1), together with
    its minimal cone and the order of the corresponding group element."""

    point: tuple
    cone: Cone
    q: tuple      # fractions, one per ray of the cone, same order as indices
    order: int

    @property
    def is_zero(self) -> bool:
        return self.cone == ZERO_CONE


def zero_box_element(rank: int) -> BoxElement:
    return BoxElement((0,) * rank, ZERO_CONE, (), 1)


@dataclass(frozen=True)
class FractionalDecomposition:
    """w = {w} + sum lambda_i b_i over the rays of sigma(w)."""

    w: tuple
    box_part: BoxElement
    shifts: tuple  # pairs (ray_index, non-negative integer)


# ---------------------------------------------------------------------------
# Coordinates with respect to the b_i


def b_coordinates(sfan: StackyFan, cone: Cone, v) -> tuple:
    """Coordinates of v with respect to {b_i : rho_i in cone}."""
    q = core.cone_coordinates(sfan.fan, cone, v)
    return tuple(qi / sfan.weights[i] for qi, i in zip(q, cone.ray_indices))


def locate(sfan: StackyFan, v):
    """(minimal cone of v, coordinates of v w.r.t. its b_i)."""
    cone = core.minimal_containing_cone(sfan.fan, v)
    return cone, b_coordinates(sfan, cone, v)


def psi(sfan: StackyFan, v) -> Fraction:
    """The piecewise Q-linear function with psi(b_i) = 1."""
    _, q = locate(sfan, v)
    return sum(q, Fraction(0))


def eval_pl(f: PiecewiseQLinear, v) -> Fraction:
    cone, q = locate(f.sfan, v)
    return sum((qi * f.values_on_b[i] for qi, i in zip(q, cone.ray_indices)),
               Fraction(0))


# ---------------------------------------------------------------------------
# BOX enumeration


def _bounding_box(vectors, lo_mult, hi_mult):
    """Integer bounding box of {sum c_i * vectors_i : lo <= c_i <= hi}."""
    dim = len(vectors[0])
    lows = [Fraction(0)] * dim
    highs = [Fraction(0)] * dim
    for vec in vectors:
        for j, x in enumerate(vec):
            lows[j] += min(lo_mult * x, hi_mult * x)
            highs[j] += max(lo_mult * x, hi_mult * x)
    return ([math.ceil(v) for v in lows], [math.floor(v) for v in highs])


def _scan_parallelepiped(sfan: StackyFan, tau: Cone, keep):
    """Integer points of the closed parallelepiped of {b_i : rho_i in tau},
    filtered by keep(q)."""
    bvecs = [sfan.b(i) for i in tau.ray_indices]
    if not bvecs:
        return [((0,) * sfan.rank, ())] if keep(()) else []
    lows, highs = _bounding_box(bvecs, 0, 1)
    out = []
    for point in itertools.product(*[range(lo, hi + 1)
                                     for lo, hi in zip(lows, highs)]):
        q = core.solve_rational_system(bvecs, as_vec(point))
        if q is not None and keep(q):
            out.append((tuple(point), q))
    out.sort(key=lambda pq: pq[0])
    return out


def box_elements(sfan: StackyFan, tau: Cone) -> list:
    """All of BOX(tau), sorted lexicographically by point coordinates."""
    if tau == ZERO_CONE:
        return [zero_box_element(sfan.rank)]
    found = _scan_parallelepiped(
        sfan, tau, lambda q: all(0 < qi < 1 for qi in q))
    return [BoxElement(point, tau, q, _order_of(q)) for point, q in found]


def _order_of(q) -> int:
    order = 1
    for qi in q:
        order = order * qi.denominator // math.gcd(order, qi.denominator)
    return order


def box_all(sfan: StackyFan) -> list:
    """BOX(Sigma): concatenation over all cones in canonical order; the zero
    element appears exactly once (from the zero cone)."""
    out = []
    for tau in sfan.fan.sorted_cones:
        out.extend(box_elements(sfan, tau))
    return out


def iota(sfan: StackyFan, e: BoxElement) -> BoxElement:
    """The box involution q_i -> 1 - q_i; fixes the zero element."""
    if e.is_zero:
        return e
    q = tuple(1 - qi for qi in e.q)
    point = (0,) * sfan.rank
    for qi, i in zip(q, e.cone.ray_indices):
        point = vec_add(point, tuple(qi * x for x in sfan.b(i)))
    point = tuple(int(x) for x in point)
    return BoxElement(point, e.cone, q, _order_of(q))


def age(sfan: StackyFan, e: BoxElement) -> Fraction:
    """age = psi(v) = sum of the box coordinates."""
    return sum(e.q, Fraction(0))


def element_order(sfan: StackyFan, e: BoxElement) -> int:
    return e.order


def group_order(sfan: StackyFan, sigma: Cone) -> int:
    """|N(sigma)| for a maximal-dimensional cone, as |det{b_i}|."""
    if sigma.dim != sfan.rank:
        raise NotMaximalCone(f"cone {list(sigma.ray_indices)} is not "
                             "maximal-dimensional")
    return core.determinant_abs([sfan.b(i) for i in sigma.ray_indices])


def fractional_decompose(sfan: StackyFan, w) -> FractionalDecomposition:
    """The unique decomposition w = {w} + sum lambda_i b_i over sigma(w)."""
    w = tuple(int(x) for x in w)
    cone, q = locate(sfan, w)
    shifts = tuple((i, math.floor(qi)) for i, qi in zip(cone.ray_indices, q))
    frac = [(i, qi - math.floor(qi)) for i, qi in zip(cone.ray_indices, q)]
    nonzero = [(i, f) for i, f in frac if f != 0]
    if not nonzero:
        box = zero_box_element(sfan.rank)
    else:
        tau = Cone(tuple(i for i, _ in nonzero))
        qs = tuple(f for _, f in nonzero)
        point = (Fraction(0),) * sfan.rank
        for i, f in nonzero:
            point = vec_add(point, tuple(f * x for x in sfan.b(i)))
        box = BoxElement(tuple(int(x) for x in point), tau, qs, _order_of(qs))
    return FractionalDecomposition(w, box, shifts)


def box_bar_n(sfan: StackyFan, tau: Cone, n: int) -> list:
    """Lattice points sum q_i b_i with 0 < q_i <= n over the rays of tau."""
    if tau == ZERO_CONE:
        return [(0,) * sfan.rank]
    bvecs = [sfan.b(i) for i in tau.ray_indices]
    lows, highs = _bounding_box(bvecs, 0, n)
    out = []
    for point in itertools.product(*[range(lo, hi + 1)
                                     for lo, hi in zip(lows, highs)]):
        q = core.solve_rational_system(bvecs, as_vec(point))
        if q is not None and all(0 < qi <= n for qi in q):
            out.append(tuple(point))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# Fast enumeration of |Sigma| cap N by psi-sublevel, via the box
# decomposition w = u + sum lambda_i b_i within each maximal cone.  Used by
# the series oracles, orbit enumeration and the truncated motivic integral,
# where the bounding-box scan of deltainv.count_lattice_points would be too
# slow.  The two routes cross-check each other in the tests.


def _unit_box_reps(sfan: StackyFan, sigma: Cone):
    """Lattice points u = sum q_i b_i with 0 <= q_i < 1 over the rays of
    sigma (coset representatives of the b-sublattice)."""
    return _scan_parallelepiped(
        sfan, sigma, lambda q: all(0 <= qi < 1 for qi in q))


def enumerate_support_points(sfan: StackyFan, bound, lam_values=None):
    """All lattice points w in |Sigma| with psi(w) <= bound.

    Yields (point, psi(w), lam(w)) where lam is the piecewise Q-linear
    functional with the given values on the b_i (None -> lam(w) = None).
    Deterministic order: ascending psi, ties broken lexicographically.
    """
    bound = Fraction(bound)
    if bound < 0:
        return []
    found = {}
    for sigma in sfan.fan.maximal_cones:
        idx = sigma.ray_indices
        bvecs = [sfan.b(i) for i in idx]
        lam_b = None
        if lam_values is not None:
            lam_b = [Fraction(lam_values[i]) for i in idx]
        for u, q in _unit_box_reps(sfan, sigma):
            psi_u = sum(q, Fraction(0))
            if psi_u > bound:
                continue
            lam_u = None
            if lam_b is not None:
                lam_u = sum((qi * lv for qi, lv in zip(q, lam_b)), Fraction(0))
            budget = bound - psi_u
            for shifts in _bounded_tuples(len(bvecs), math.floor(budget)):
                point = list(u)
                for k, s in enumerate(shifts):
                    if s:
                        bk = bvecs[k]
                        for j in range(len(point)):
                            point[j] += s * bk[j]
                point = tuple(point)
                if point in found:
                    continue
                total = sum(shifts)
                lam_w = None
                if lam_b is not None:
                    lam_w = lam_u + sum(s * lv for s, lv in zip(shifts, lam_b))
                found[point] = (psi_u + total, lam_w)
    return sorted(((p, ps, lv) for p, (ps, lv) in found.items()),
                  key=lambda item: (item[1], item[0]))


def _bounded_tuples(k: int, total_max: int):
    """Non-negative integer k-tuples with coordinate sum <= total_max."""
    if k == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in _bounded_tuples(k - 1, total_max - first):
            yield (first,) + rest
