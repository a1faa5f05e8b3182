"""Twisted-arc orbit bookkeeping: orbit labels, the closure partial order,
cylinder measures, contact orders, the shift function and the truncated
direct motivic integral used as an oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import core, stacky
from .core import Cone
from .errors import NotKLT, OutsideSupport
from .qseries import FracPoly, TruncatedSeries
from .stacky import (BoxElement, FractionalDecomposition, PiecewiseQLinear,
                     StackyFan, age, eval_pl, fractional_decompose, iota, psi)


@dataclass(frozen=True)
class OrbitLabel:
    """A twisted-arc orbit, labelled by its lattice point w together with the
    cached fractional decomposition w = {w} + sum lambda_i b_i."""

    w: tuple
    decomposition: FractionalDecomposition


def orbit_label(sfan: StackyFan, w) -> OrbitLabel:
    w = tuple(int(x) for x in w)
    return OrbitLabel(w, fractional_decompose(sfan, w))


@dataclass(frozen=True)
class StackDivisor:
    """A T-invariant Q-divisor sum beta_i D_i on the stack."""

    sfan: StackyFan
    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           tuple(Fraction(b) for b in self.coefficients))
        if len(self.coefficients) != len(self.sfan.fan.rays):
            raise ValueError("one coefficient per ray required")

    @property
    def is_klt(self) -> bool:
        return all(b < 1 for b in self.coefficients)


def zero_divisor(sfan: StackyFan) -> StackDivisor:
    return StackDivisor(sfan, (Fraction(0),) * len(sfan.fan.rays))


def canonical_divisor(sfan: StackyFan) -> StackDivisor:
    return StackDivisor(sfan, (Fraction(-1),) * len(sfan.fan.rays))


def pullback_divisor(sfan: StackyFan, alpha) -> StackDivisor:
    """Pull a coarse-space divisor sum alpha_i D_i back to the stack:
    beta_i = a_i * alpha_i."""
    return StackDivisor(sfan, tuple(sfan.weights[i] * Fraction(a)
                                    for i, a in enumerate(alpha)))


def divisor_to_pl(e: StackDivisor) -> PiecewiseQLinear:
    """The piecewise Q-linear functional of the pushed-forward divisor,
    normalised so lambda(b_i) = -beta_i."""
    return PiecewiseQLinear(e.sfan, tuple(-b for b in e.coefficients))


def contact_order(e: StackDivisor, w: OrbitLabel) -> Fraction:
    """Contact order of the orbit of w along the divisor."""
    return -eval_pl(divisor_to_pl(e), w.w)


def shift_function(sfan: StackyFan, w: OrbitLabel) -> Fraction:
    """dim sigma({w}) - psi({w}); equal to psi(iota({w}))."""
    box = w.decomposition.box_part
    value = box.cone.dim - age(sfan, box)
    alt = age(sfan, iota(sfan, box))
    assert value == alt, "shift-function formulas disagree"
    return value


def orbit_measure(sfan: StackyFan, w: OrbitLabel) -> FracPoly:
    """Cylinder measure of the orbit: (q-1)^d q^{-psi(w)+psi({w})-dim}."""
    d = sfan.rank
    box = w.decomposition.box_part
    exponent = -psi(sfan, w.w) + age(sfan, box) - box.cone.dim
    return (FracPoly({0: -1, 1: 1}) ** d) * FracPoly.t_power(exponent)


def closure_leq(sfan: StackyFan, v: OrbitLabel, w: OrbitLabel) -> bool:
    """orbit(w) lies in the closure of orbit(v): w - v is a non-negative
    integer combination of the b_i of some cone containing both."""
    diff = core.vec_sub(w.w, v.w)
    for sigma in sfan.fan.maximal_cones:
        if not (_in_cone(sfan, sigma, v.w) and _in_cone(sfan, sigma, w.w)):
            continue
        sol = core.solve_rational_system(
            [sfan.b(i) for i in sigma.ray_indices], core.as_vec(diff))
        if sol is not None and all(c >= 0 and c.denominator == 1 for c in sol):
            return True
    return False


def _in_cone(sfan: StackyFan, sigma: Cone, v) -> bool:
    sol = core.solve_rational_system(
        [sfan.fan.rays[i] for i in sigma.ray_indices], core.as_vec(v))
    return sol is not None and all(c >= 0 for c in sol)


@dataclass
class OrbitPoset:
    """Orbit labels with psi <= bound and their closure order.

    relations holds every strict pair (v, w) with orbit(w) in the closure
    of orbit(v); covers is its transitive reduction, for rendering."""

    labels: list
    relations: set  # ordered pairs of label points (v, w), v strictly below w
    covers: set


def orbit_poset(sfan: StackyFan, bound) -> OrbitPoset:
    pts = stacky.enumerate_support_points(sfan, bound)
    labels = [orbit_label(sfan, p) for p, _, _ in pts]
    psis = {lab.w: ps for lab, (_, ps, _) in zip(labels, pts)}
    strict = set()
    for v in labels:
        for w in labels:
            if v.w != w.w and closure_leq(sfan, v, w):
                strict.add((v.w, w.w))
    # partial-order axioms before reduction
    for (a, b) in strict:
        assert (b, a) not in strict, "closure order not antisymmetric"
        assert psis[a] < psis[b], "psi not strictly increasing along closure"
    for (a, b) in strict:
        for (c, d) in strict:
            if b == c:
                assert (a, d) in strict, "closure order not transitive"
    covers = {(a, b) for (a, b) in strict
              if not any((a, c) in strict and (c, b) in strict
                         for c in psis if c != a and c != b)}
    return OrbitPoset(labels, strict, covers)


def gamma_truncated_direct(sfan: StackyFan, e: StackDivisor, bound) -> TruncatedSeries:
    """Partial sum (q-1)^d sum_w q^{-psi(w)-lambda(w)} over labels with
    psi(w) + lambda(w) <= bound.

    Every term is computed twice: directly, and as
    orbit_measure(w) * q^{shift(w) + contact_order(w)}; the two must agree.
    Returned as a series in q^{-1} (negative q-exponents ascending) with
    cutoff bound - d, so that all omitted terms have q-exponent strictly
    below d - bound.
    """
    bound = Fraction(bound)
    if not e.is_klt:
        raise NotKLT("divisor is not Kawamata log terminal")
    if bound < 0:
        raise ValueError("bound must be non-negative")
    d = sfan.rank
    lam = divisor_to_pl(e)
    # psi + lam >= psi (1 - L) with L = max(0, max beta_i) < 1
    slack = Fraction(1) - max(Fraction(0), max(e.coefficients, default=Fraction(0)))
    psi_bound = math.floor(bound / slack) + 1
    total = FracPoly.zero()
    qm1 = FracPoly({0: -1, 1: 1}) ** d
    for point, psi_w, lam_w in stacky.enumerate_support_points(
            sfan, psi_bound, lam.values_on_b):
        if psi_w + lam_w > bound:
            continue
        direct = qm1 * FracPoly.t_power(-psi_w - lam_w)
        label = orbit_label(sfan, point)
        via_measure = orbit_measure(sfan, label) * FracPoly.t_power(
            shift_function(sfan, label) + contact_order(e, label))
        assert direct == via_measure, "orbit-measure route disagrees"
        total = total + direct
    # series in q^{-1}: exponent of q^{-1} is minus the q-exponent
    return TruncatedSeries({-qe: c for qe, c in total.terms.items()
                            if -qe <= bound - d}, bound - d)
