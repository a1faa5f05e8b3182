"""Exact algebra of polynomials and rational functions in t with rational
exponents on a common 1/N grid, plus ascending power-series expansion.

Fractional exponents are handled by the substitution s = t^{1/N}, where N is
the lcm of all exponent denominators in the expression; gcd reduction is then
ordinary univariate polynomial gcd over the rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DivisionByZero, NoExpansionAtZero


class FracPoly:
    """Laurent polynomial with exact rational coefficients and rational
    exponents; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    clean[Fraction(e)] = c
        self.terms = clean

    @classmethod
    def constant(cls, c):
        return cls({Fraction(0): Fraction(c)})

    @classmethod
    def t_power(cls, e, c=1):
        return cls({Fraction(e): Fraction(c)})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls.constant(1)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, FracPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return FracPoly(out)

    def __neg__(self):
        return FracPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return FracPoly(out)

    def scale(self, c):
        c = Fraction(c)
        return FracPoly({e: c * v for e, v in self.terms.items()})

    def __pow__(self, n: int):
        result = FracPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def grid(self) -> int:
        """lcm of the exponent denominators."""
        g = 1
        for e in self.terms:
            g = g * e.denominator // math.gcd(g, e.denominator)
        return g

    def min_exp(self):
        return min(self.terms) if self.terms else Fraction(0)

    def max_exp(self):
        return max(self.terms) if self.terms else Fraction(0)

    def coeff(self, e):
        return self.terms.get(Fraction(e), Fraction(0))

    def truncate(self, cutoff) -> "TruncatedSeries":
        cutoff = Fraction(cutoff)
        return TruncatedSeries(
            {e: c for e, c in self.terms.items() if e <= cutoff}, cutoff)

    def __repr__(self):
        return f"FracPoly({format_poly(self)})"


def poly_add(f, g):
    return f + g


def poly_mul(f, g):
    return f * g


def poly_neg(f):
    return -f


def poly_scale(f, c):
    return f.scale(c)


# --- dense integer-exponent helpers (coefficient lists in s) ---------------

def _to_dense(poly: FracPoly, n_grid: int, shift: int):
    deg = 0
    for e in poly.terms:
        deg = max(deg, int(e * n_grid) + shift)
    coeffs = [Fraction(0)] * (deg + 1)
    for e, c in poly.terms.items():
        coeffs[int(e * n_grid) + shift] = c
    return coeffs


def _dense_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _dense_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] / lead
        if f == 0:
            continue
        q[i] = f
        for j, bc in enumerate(b):
            a[i + j] -= f * bc
    return _dense_trim(q), _dense_trim(a)


# longest dense representation for which gcd reduction is attempted
_GCD_DENSE_LIMIT = 1200


def _dense_to_primitive_int(p):
    """Scale a Fraction coefficient list to a primitive integer list."""
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    q = [int(c * den) for c in p]
    g = 0
    for c in q:
        g = math.gcd(g, abs(c))
    return [c // g for c in q] if g > 1 else q


def _dense_gcd(a, b):
    """Monic gcd via a primitive polynomial remainder sequence over the
    integers; avoids the coefficient blow-up of rational-arithmetic Euclid."""
    a = _dense_trim(list(a))
    b = _dense_trim(list(b))
    if not a:
        a, b = b, a
    if not b:
        if a:
            lead = a[-1]
            return [c / lead for c in a]
        return a
    A = _dense_to_primitive_int(a)
    B = _dense_to_primitive_int(b)
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = list(A)
        db = len(B) - 1
        lead = B[-1]
        for i in range(len(R) - len(B), -1, -1):
            coef = R[i + db]
            if coef == 0:
                continue
            # R <- lead*R - coef*(B shifted by i): cancels position i+db
            for j in range(len(R)):
                R[j] *= lead
            for j, bc in enumerate(B):
                R[i + j] -= coef * bc
        R = _dense_trim(R[:db] if len(R) > db else R)
        g = 0
        for c in R:
            g = math.gcd(g, abs(c))
        if g > 1:
            R = [c // g for c in R]
        A, B = B, R
    lead = A[-1]
    return [Fraction(c, lead) for c in A]


def _from_dense(coeffs, n_grid: int, shift: int) -> FracPoly:
    return FracPoly({Fraction(i - shift, n_grid): c
                     for i, c in enumerate(coeffs) if c != 0})


class FracRational:
    """Rational function num/den in canonical form.

    Canonical form: after substituting s = t^{1/N} and clearing to
    non-negative integer exponents, numerator and denominator share no common
    polynomial factor, the denominator's lowest nonzero coefficient is
    positive, and integer content is removed symmetrically.

    For very long dense representations the common-factor removal is skipped
    (it is quadratic in the dense length); equality then falls back to exact
    cross-multiplication, so values still compare correctly.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, FracPoly):
            num = FracPoly.constant(num)
        if den is None:
            den = FracPoly.one()
        elif not isinstance(den, FracPoly):
            den = FracPoly.constant(den)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self.num, self.den = _canonicalize(num, den)

    @classmethod
    def from_poly(cls, poly):
        return cls(poly)

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den == FracPoly.one()

    def __eq__(self, other):
        if not isinstance(other, FracRational):
            return NotImplemented
        if self.num == other.num and self.den == other.den:
            return True
        # representations may differ when gcd reduction was skipped for
        # size reasons; cross-multiplication is always exact
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        # invariant under the choice of representative: order and leading
        # coefficient of the function at t -> 0 and t -> infinity
        if self.num.is_zero():
            return hash(0)
        lo = self.num.min_exp() - self.den.min_exp()
        hi = self.num.max_exp() - self.den.max_exp()
        c_lo = self.num.coeff(self.num.min_exp()) / self.den.coeff(self.den.min_exp())
        c_hi = self.num.coeff(self.num.max_exp()) / self.den.coeff(self.den.max_exp())
        return hash((lo, c_lo, hi, c_hi))

    def __add__(self, other):
        other = _coerce(other)
        return FracRational(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    def __sub__(self, other):
        other = _coerce(other)
        return FracRational(self.num * other.den - other.num * self.den,
                            self.den * other.den)

    def __neg__(self):
        return FracRational(-self.num, self.den)

    def __mul__(self, other):
        other = _coerce(other)
        return FracRational(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = _coerce(other)
        if other.num.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return FracRational(self.num * other.den, self.den * other.num)

    def __repr__(self):
        return f"FracRational({format_rational(self)})"


def _coerce(x) -> FracRational:
    if isinstance(x, FracRational):
        return x
    if isinstance(x, FracPoly):
        return FracRational(x)
    return FracRational(FracPoly.constant(x))


def _canonicalize(num: FracPoly, den: FracPoly):
    if num.is_zero():
        return FracPoly.zero(), FracPoly.one()
    n_grid = 1
    for g in (num.grid(), den.grid()):
        n_grid = n_grid * g // math.gcd(n_grid, g)
    shift = -min(int(num.min_exp() * n_grid), int(den.min_exp() * n_grid), 0)
    a = _to_dense(num, n_grid, shift)
    b = _to_dense(den, n_grid, shift)
    # gcd reduction is quadratic in the dense length, so skip it for very
    # long representations (fine exponent grid); equality stays exact via
    # cross-multiplication and expansion never needs lowest terms
    if max(len(a), len(b)) <= _GCD_DENSE_LIMIT:
        g = _dense_gcd(a, b)
        if len(g) > 1 or (g and g[0] != 1):
            a, _ = _dense_divmod(a, g)
            b, _ = _dense_divmod(b, g)
    # remove rational content symmetrically; make coefficients coprime ints
    denom_lcm = 1
    for c in a + b:
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    a = [c * denom_lcm for c in a]
    b = [c * denom_lcm for c in b]
    g_int = 0
    for c in a + b:
        g_int = math.gcd(g_int, abs(c.numerator))
    if g_int > 1:
        a = [c / g_int for c in a]
        b = [c / g_int for c in b]
    low = next(c for c in b if c != 0)
    if low < 0:
        a = [-c for c in a]
        b = [-c for c in b]
    return _from_dense(a, n_grid, 0), _from_dense(b, n_grid, 0)


def rat_add(f, g):
    return _coerce(f) + _coerce(g)


def rat_mul(f, g):
    return _coerce(f) * _coerce(g)


def rat_div(f, g):
    return _coerce(f) / _coerce(g)


def substitute_reciprocal(f: FracRational) -> FracRational:
    """Replace t by 1/t and re-canonicalize."""
    num = FracPoly({-e: c for e, c in f.num.terms.items()})
    den = FracPoly({-e: c for e, c in f.den.terms.items()})
    return FracRational(num, den)


@dataclass
class TruncatedSeries:
    """Ascending series with exact coefficients, valid up to a cutoff
    exponent; exponents may be negative (Laurent tails)."""

    terms: dict = field(default_factory=dict)
    cutoff: Fraction = Fraction(0)

    def __post_init__(self):
        self.cutoff = Fraction(self.cutoff)
        self.terms = {Fraction(e): Fraction(c) for e, c in self.terms.items()
                      if c != 0 and Fraction(e) <= self.cutoff}

    def coeff(self, e):
        return self.terms.get(Fraction(e), Fraction(0))


def series_equal(a: TruncatedSeries, b: TruncatedSeries) -> bool:
    """Exact coefficient agreement at all exponents <= min(cutoffs)."""
    bound = min(a.cutoff, b.cutoff)
    exps = {e for e in a.terms if e <= bound} | {e for e in b.terms if e <= bound}
    return all(a.coeff(e) == b.coeff(e) for e in exps)


def _expand(f: FracRational, cutoff, laurent: bool) -> TruncatedSeries:
    cutoff = Fraction(cutoff)
    if f.num.is_zero():
        return TruncatedSeries({}, cutoff)
    n_grid = f.num.grid()
    for g in (f.den.grid(), cutoff.denominator):
        n_grid = n_grid * g // math.gcd(n_grid, g)
    a = _to_dense(f.num, n_grid, 0)
    b = _to_dense(f.den, n_grid, 0)
    pole = next(i for i, c in enumerate(b) if c != 0)
    if pole > 0:
        if not laurent:
            raise NoExpansionAtZero("denominator vanishes at t = 0")
        b = b[pole:]
    # long division: coefficients of a/b in ascending s powers
    top = int(math.floor(cutoff * n_grid)) + pole
    inv0 = Fraction(1) / b[0]
    b_nonzero = [(j, bj) for j, bj in enumerate(b) if j > 0 and bj != 0]
    coeffs = []
    rem = list(a) + [Fraction(0)] * max(0, top + 1 - len(a))
    for k in range(top + 1):
        c = rem[k] * inv0
        coeffs.append(c)
        if c != 0:
            for j, bj in b_nonzero:
                if k + j > top:
                    break
                rem[k + j] -= c * bj
    return TruncatedSeries(
        {Fraction(k - pole, n_grid): c for k, c in enumerate(coeffs) if c != 0},
        cutoff)


def expand_series(f: FracRational, cutoff) -> TruncatedSeries:
    """Ascending expansion of f at t = 0, exact up to the cutoff exponent."""
    return _expand(f, cutoff, laurent=False)


def expand_laurent(f: FracRational, cutoff) -> TruncatedSeries:
    """Like expand_series but allows a pole at t = 0 (finite Laurent tail)."""
    return _expand(f, cutoff, laurent=True)


# ---------------------------------------------------------------------------
# Canonical text rendering: the bit-exact contract for CLI output and
# test fixtures.

def _format_exponent(var, e: Fraction) -> str:
    if e == 1:
        return var
    if e.denominator == 1:
        return f"{var}^{e.numerator}"
    return f"{var}^{{{e}}}"


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(poly: FracPoly, var: str = "t") -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for e in sorted(poly.terms):
        c = poly.terms[e]
        mag = abs(c)
        if e == 0:
            body = _format_coeff(mag)
        elif mag == 1:
            body = _format_exponent(var, e)
        elif mag.denominator == 1:
            body = f"{mag.numerator}{_format_exponent(var, e)}"
        else:
            body = f"({_format_coeff(mag)}){_format_exponent(var, e)}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def format_rational(f: FracRational, var: str = "t") -> str:
    if f.is_polynomial():
        return format_poly(f.num, var)
    return f"({format_poly(f.num, var)})/({format_poly(f.den, var)})"


def format_series(s: TruncatedSeries, var: str = "t") -> str:
    return format_poly(FracPoly(s.terms), var) + f" + O({_format_exponent(var, s.cutoff)})"
