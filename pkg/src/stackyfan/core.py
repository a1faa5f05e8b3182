"""Exact rational linear algebra and polyhedral primitives.

Lattices, simplicial cones, fans, point-in-cone tests and validation.  All
arithmetic uses arbitrary-precision integers and ``fractions.Fraction``;
there is no floating point anywhere in the package.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NotInSpan, OutsideSupport

Vec = tuple  # integer or Fraction coordinates


def as_vec(coords) -> Vec:
    return tuple(Fraction(c) for c in coords)


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Vec) -> Vec:
    return tuple(c * a for a in v)


def is_zero_vec(v: Vec) -> bool:
    return all(a == 0 for a in v)


def content(v: Sequence[int]) -> int:
    """gcd of the coordinates of an integer vector (0 for the zero vector)."""
    g = 0
    for a in v:
        g = math.gcd(g, abs(int(a)))
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def primitive_part(v: Sequence[int]) -> Vec:
    """The primitive integer vector on the ray through v (v nonzero)."""
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(int(a) // g for a in v)


def solve_rational_system(columns: Sequence[Vec], rhs: Vec) -> Optional[tuple]:
    """Solve sum_j x_j * columns[j] = rhs exactly; None if inconsistent.

    Gaussian elimination over the rationals.  When the columns are linearly
    independent the solution is unique; otherwise an arbitrary consistent
    solution is returned (free variables set to zero).
    """
    k = len(columns)
    d = len(rhs)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(rhs[i])]
           for i in range(d)]
    piv_cols = []
    row = 0
    for col in range(k):
        piv = next((r for r in range(row, d) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][col]
        aug[row] = [a / p for a in aug[row]]
        for r in range(d):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        piv_cols.append(col)
        row += 1
        if row == d:
            break
    for r in range(row, d):
        if aug[r][k] != 0:
            return None
    sol = [Fraction(0)] * k
    for r, col in enumerate(piv_cols):
        sol[col] = aug[r][k]
    return tuple(sol)


def determinant_abs(vectors: Sequence[Vec]) -> int:
    """|det| of d integer vectors of length d, by fraction-free (Bareiss)
    elimination."""
    d = len(vectors)
    if d == 0:
        return 1
    if any(len(v) != d for v in vectors):
        raise ValueError("need d vectors of length d")
    m = [[int(a) for a in v] for v in vectors]
    sign = 1
    prev = 1
    for k in range(d - 1):
        if m[k][k] == 0:
            piv = next((r for r in range(k + 1, d) if m[r][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return abs(m[d - 1][d - 1])


def matrix_rank(vectors: Sequence[Vec]) -> int:
    rows = [[Fraction(a) for a in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / p
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def nullspace_vector(vectors: Sequence[Vec], dim: int) -> Optional[Vec]:
    """A nonzero rational vector orthogonal to all given vectors, or None
    if they span the whole space."""
    rows = [[Fraction(a) for a in v] for v in vectors]
    # reduce to row echelon with pivot bookkeeping
    piv_of_col = {}
    rank = 0
    for col in range(dim):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        rows[rank] = [a / p for a in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        piv_of_col[col] = rank
        rank += 1
    free = [c for c in range(dim) if c not in piv_of_col]
    if not free:
        return None
    fc = free[0]
    n = [Fraction(0)] * dim
    n[fc] = Fraction(1)
    for col, r in piv_of_col.items():
        n[col] = -rows[r][fc]
    return tuple(n)


# ---------------------------------------------------------------------------
# Fourier-Motzkin feasibility (exact), used for pairwise cone-intersection
# validation at desk scale.

def _fm_feasible(ineqs, eqs, nvars) -> bool:
    """Is there a rational x with a.x >= c for all (a, c) in ineqs and
    a.x == c for all (a, c) in eqs?"""
    ineqs = [([Fraction(a) for a in row], Fraction(c)) for row, c in ineqs]
    eqs = [([Fraction(a) for a in row], Fraction(c)) for row, c in eqs]
    # substitute out equalities
    live = list(range(nvars))
    while eqs:
        row, c = eqs.pop()
        piv = next((j for j in live if row[j] != 0), None)
        if piv is None:
            if c != 0:
                return False
            continue
        p = row[piv]

        def subst(orow, oc):
            f = orow[piv] / p
            return ([a - f * b for a, b in zip(orow, row)], oc - f * c)

        eqs = [subst(r, cc) for r, cc in eqs]
        ineqs = [subst(r, cc) for r, cc in ineqs]
        live.remove(piv)
    # Fourier-Motzkin on the remaining variables
    for j in live:
        pos = [(r, c) for r, c in ineqs if r[j] > 0]
        neg = [(r, c) for r, c in ineqs if r[j] < 0]
        rest = [(r, c) for r, c in ineqs if r[j] == 0]
        for (rp, cp), (rn, cn) in itertools.product(pos, neg):
            # rp.x >= cp with rp[j] > 0, rn.x >= cn with rn[j] < 0
            a = [x / rp[j] - y / rn[j] for x, y in zip(rp, rn)]
            c = cp / rp[j] - cn / rn[j]
            rest.append((a, c))
        ineqs = rest
    return all(c <= 0 for _, c in ineqs)


# ---------------------------------------------------------------------------
# Cones and fans


@dataclass(frozen=True, order=True)
class Cone:
    """A simplicial cone, stored as sorted indices into the fan's ray list."""

    ray_indices: tuple

    def __post_init__(self):
        object.__setattr__(self, "ray_indices", tuple(sorted(self.ray_indices)))

    @property
    def dim(self) -> int:
        return len(self.ray_indices)

    def faces(self):
        for k in range(len(self.ray_indices) + 1):
            for sub in itertools.combinations(self.ray_indices, k):
                yield Cone(sub)

    def is_face_of(self, other: "Cone") -> bool:
        return set(self.ray_indices) <= set(other.ray_indices)


ZERO_CONE = Cone(())


@dataclass(frozen=True)
class Fan:
    """A simplicial rational fan given by primitive rays and its cones,
    closed under taking faces."""

    rank: int
    rays: tuple          # tuple of integer vectors
    cones: frozenset     # frozenset of Cone
    support_kind: str = "general"   # complete | convex | general

    @classmethod
    def from_maximal(cls, rank, rays, maximal_cones, support_kind="general"):
        rays = tuple(tuple(int(a) for a in r) for r in rays)
        cones = set()
        for c in maximal_cones:
            cone = c if isinstance(c, Cone) else Cone(tuple(c))
            cones.update(cone.faces())
        return cls(rank, rays, frozenset(cones), support_kind)

    @property
    def sorted_cones(self):
        """Canonical enumeration order: lexicographic by ray indices."""
        return sorted(self.cones, key=lambda c: c.ray_indices)

    @property
    def maximal_cones(self):
        maximal = [c for c in self.cones
                   if not any(c != o and c.is_face_of(o) for o in self.cones)]
        return sorted(maximal, key=lambda c: c.ray_indices)

    def ray_vectors(self, cone: Cone):
        return tuple(self.rays[i] for i in cone.ray_indices)

    def cones_of_dim(self, k):
        return sorted((c for c in self.cones if c.dim == k),
                      key=lambda c: c.ray_indices)


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str):
        self.violations.append(msg)


def _cones_overlap_improperly(fan: Fan, a: Cone, b: Cone) -> bool:
    """True iff cone(a) and cone(b) share a point outside their common face.

    Feasibility of: A p = B q, p >= 0, q >= 0, sum of p over non-shared
    rays of a equals 1.  Exact Fourier-Motzkin at desk scale.
    """
    common = set(a.ray_indices) & set(b.ray_indices)
    extra = [i for i in a.ray_indices if i not in common]
    if not extra:
        return False
    ka, kb = a.dim, b.dim
    n = ka + kb
    eqs = []
    for coord in range(fan.rank):
        row = [Fraction(fan.rays[i][coord]) for i in a.ray_indices]
        row += [-Fraction(fan.rays[j][coord]) for j in b.ray_indices]
        eqs.append((row, Fraction(0)))
    norm = [Fraction(1) if (k < ka and a.ray_indices[k] in extra) else Fraction(0)
            for k in range(n)]
    eqs.append((norm, Fraction(1)))
    ineqs = []
    for k in range(n):
        row = [Fraction(0)] * n
        row[k] = Fraction(1)
        ineqs.append((row, Fraction(0)))
    return _fm_feasible(ineqs, eqs, n)


def validate_fan(fan: Fan) -> ValidationReport:
    """Check all structural invariants; violations are data, not errors."""
    rep = ValidationReport()
    for i, r in enumerate(fan.rays):
        if len(r) != fan.rank:
            rep.add(f"ray {i} has wrong length")
        elif is_zero_vec(r):
            rep.add(f"ray {i} is zero")
        elif not is_primitive(r):
            rep.add(f"ray {i} not primitive")
    if len(set(fan.rays)) != len(fan.rays):
        rep.add("duplicate rays")
    for c in fan.sorted_cones:
        if any(i < 0 or i >= len(fan.rays) for i in c.ray_indices):
            rep.add(f"cone {list(c.ray_indices)} references missing ray")
            continue
        vecs = fan.ray_vectors(c)
        if vecs and matrix_rank(vecs) != len(vecs):
            rep.add(f"cone {list(c.ray_indices)} rays not linearly independent")
    if ZERO_CONE not in fan.cones:
        rep.add("zero cone missing")
    for c in fan.cones:
        for f in c.faces():
            if f not in fan.cones:
                rep.add(f"face {list(f.ray_indices)} of cone "
                        f"{list(c.ray_indices)} missing from fan")
    if not rep.ok:
        return rep
    maximal = fan.maximal_cones
    for a, b in itertools.combinations(maximal, 2):
        if (_cones_overlap_improperly(fan, a, b)
                or _cones_overlap_improperly(fan, b, a)):
            rep.add(f"cones {list(a.ray_indices)} and {list(b.ray_indices)} "
                    "intersect outside their common face")
    if fan.support_kind == "complete":
        top = [c for c in maximal if c.dim == fan.rank]
        if not top:
            rep.add("complete fan has no maximal-dimensional cone")
        if any(c.dim != fan.rank for c in maximal):
            rep.add("complete fan has a maximal cone of lower dimension")
        for facet in fan.cones_of_dim(fan.rank - 1):
            count = sum(1 for c in top if facet.is_face_of(c))
            if count != 2:
                rep.add(f"facet {list(facet.ray_indices)} on {count} maximal "
                        "cone" + ("" if count == 1 else "s"))
    elif fan.support_kind == "convex":
        top = [c for c in maximal if c.dim == fan.rank]
        for facet in fan.cones_of_dim(fan.rank - 1):
            count = sum(1 for c in top if facet.is_face_of(c))
            if count != 1:
                continue
            normal = nullspace_vector(fan.ray_vectors(facet), fan.rank)
            if normal is None:
                continue
            dots = [sum(n * x for n, x in zip(normal, r)) for r in fan.rays]
            if any(d > 0 for d in dots) and any(d < 0 for d in dots):
                rep.add(f"boundary facet {list(facet.ray_indices)} admits no "
                        "supporting hyperplane (support not convex)")
    return rep


def cone_coordinates(fan: Fan, cone: Cone, v) -> tuple:
    """The unique rationals q with v = sum q_i * ray_i over the cone's rays."""
    v = as_vec(v)
    if cone.dim == 0:
        if is_zero_vec(v):
            return ()
        raise NotInSpan("nonzero point vs zero cone")
    sol = solve_rational_system(fan.ray_vectors(cone), v)
    if sol is None:
        raise NotInSpan(f"point {v} not in span of cone {list(cone.ray_indices)}")
    return sol


def minimal_containing_cone(fan: Fan, v) -> Cone:
    """The unique cone containing v in its relative interior."""
    v = as_vec(v)
    if is_zero_vec(v):
        return ZERO_CONE
    for cone in fan.maximal_cones:
        sol = solve_rational_system(fan.ray_vectors(cone), v)
        if sol is None or any(q < 0 for q in sol):
            continue
        face = tuple(i for i, q in zip(cone.ray_indices, sol) if q > 0)
        return Cone(face)
    raise OutsideSupport(f"point {v} outside the fan support")
