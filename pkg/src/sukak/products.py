"""Double-coset product certification, polytope fat points, and degree bookkeeping.

The large-product locus of a pair is the set of alcove points X whose
double coset satisfies K exp(i pi X) K exp(-i pi X) K = SU(n).  For the
implemented pairs it is a single point (AI, AII: the alcove centroid) or
the fixed line of the alcove reversal (AIII), and coincides with the set
of points fixed by every alcove symmetry.

Polytope computations (fat points) run in exact rational arithmetic in
ambient dimension at most 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd

import numpy as np

from .alcove import AlcovePoint, PairType, stabilizer_group, type_a_centroid
from .cartan import alcove_invariant
from .errors import BoundExceeded
from .numerics import Tolerance, default_tolerance

# ---------------------------------------------------------------------------
# membership predicates


def in_large_product_set(x: AlcovePoint, tol: Tolerance | None = None) -> bool:
    """Whether K exp(i pi x) K exp(-i pi x) K fills the whole group.

    AI/AII: true exactly at the alcove centroid.  AIII: true on the line
    ``x_i + x_{m-i+1} = 1/2``.  Compared in sup norm within eps_spec.
    """
    tol = tol or default_tolerance()
    v = x.vector
    m = x.pair.m
    if x.pair.is_type_a:
        zeta = np.array([float(c) for c in type_a_centroid(m)])
        return bool(np.max(np.abs(v - zeta)) <= tol.eps_spec)
    return bool(np.max(np.abs(v + v[::-1] - 0.5)) <= tol.eps_spec)


def fixed_by_alcove_symmetries(x: AlcovePoint, tol: Tolerance | None = None) -> bool:
    """Whether every alcove-stabilizing affine symmetry fixes x (necessary condition)."""
    tol = tol or default_tolerance()
    v = x.vector
    for f in stabilizer_group(x.pair):
        if np.max(np.abs(f.apply(v) - v)) > tol.eps_spec:
            return False
    return True


@dataclass(frozen=True)
class PairCertificate:
    """Outcome of a product certification, carrying both alcove points."""

    product_is_group: bool
    a_u: AlcovePoint
    a_v_inv: AlcovePoint

    def __bool__(self):
        return self.product_is_group


def pair_large_product(u, v, pair: PairType,
                       tol: Tolerance | None = None) -> PairCertificate:
    """Certify whether K u K v K equals the whole special unitary group.

    True iff the invariant of u lies in the large-product locus and agrees
    with the invariant of v^{-1}.
    """
    tol = tol or default_tolerance()
    a_u = alcove_invariant(u, pair, tol)
    a_v_inv = alcove_invariant(np.asarray(v, dtype=complex).conj().T, pair, tol)
    ok = (in_large_product_set(a_u, tol)
          and np.max(np.abs(a_u.vector - a_v_inv.vector)) <= tol.eps_spec)
    return PairCertificate(bool(ok), a_u, a_v_inv)


# ---------------------------------------------------------------------------
# exact rational linear algebra (small dimensions only)


def _rref(rows):
    """Reduced row echelon form over Fractions; returns (rref_rows, pivot_cols)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [v / rows[r][c] for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _null_space(rows, dim):
    """Basis of {v in Q^dim : r . v = 0 for all rows}."""
    rref, pivots = _rref(rows)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * dim
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -rref[i][f]
        basis.append(tuple(v))
    return basis


def _solve_square(a_rows, b):
    """Unique exact solution of a square system, or None if singular."""
    n = len(b)
    aug = [list(r) + [bv] for r, bv in zip(a_rows, b)]
    rref, pivots = _rref(aug)
    if len(pivots) != n or pivots != list(range(n)):
        return None
    return tuple(rref[i][n] for i in range(n))


def _normalize_ineq(a, b):
    """Scale (a, b) by a positive rational to primitive integers."""
    denom = 1
    for v in list(a) + [b]:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = [int(v * denom) for v in a] + [int(b * denom)]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints[:-1]), ints[-1]


def _facet_system(points, dim):
    """Exact H-representation of the convex hull of a point set.

    Returns (eqs, ineqs): lists of (a, b) meaning a . x = b resp.
    a . x <= b.  Handles lower-dimensional hulls through the equality part.
    """
    points = [tuple(Fraction(v) for v in p) for p in points]
    if not points:
        raise ValueError("empty point set")
    p0 = points[0]
    dirs = [tuple(pi - qi for pi, qi in zip(p, p0)) for p in points[1:]]
    basis_rows, _ = _rref(dirs)
    basis = [tuple(r) for r in basis_rows]
    d_aff = len(basis)
    eqs = []
    for a in _null_space(basis, dim):
        b = sum(ai * pi for ai, pi in zip(a, p0))
        eqs.append(_normalize_ineq(tuple(Fraction(v) for v in a), Fraction(b)))
    if d_aff == 0:
        return eqs, []
    # coordinates of the points in the affine-hull basis: y = G^{-1} B (p - p0)
    gram = [[sum(u * v for u, v in zip(r1, r2)) for r2 in basis] for r1 in basis]
    reduced = []
    for p in points:
        rhs = [sum(bi * (pi - qi) for bi, pi, qi in zip(row, p, p0)) for row in basis]
        y = _solve_square(gram, rhs)
        reduced.append(y)
    reduced = list(dict.fromkeys(reduced))
    ineqs_red = set()
    for subset in combinations(range(len(reduced)), d_aff):
        pts = [reduced[i] for i in subset]
        diffs = [tuple(a - b for a, b in zip(pts[i], pts[0])) for i in range(1, d_aff)]
        rref_rows, _ = _rref(diffs)
        if len(rref_rows) != d_aff - 1:
            continue
        normal = _null_space([tuple(r) for r in rref_rows], d_aff)
        if len(normal) != 1:
            continue
        a = normal[0]
        b = sum(ai * vi for ai, vi in zip(a, pts[0]))
        vals = [sum(ai * vi for ai, vi in zip(a, q)) for q in reduced]
        if all(v <= b for v in vals):
            ineqs_red.add(_normalize_ineq(a, b))
        elif all(v >= b for v in vals):
            ineqs_red.add(_normalize_ineq(tuple(-ai for ai in a), -b))
    # lift reduced inequalities to ambient coordinates: a_amb = a^T G^{-1} B
    gram_rows = [tuple(Fraction(v) for v in row) for row in gram]
    ineqs = set()
    for a_red, b_red in ineqs_red:
        c = _solve_square(gram_rows, [Fraction(v) for v in a_red])
        a_amb = tuple(sum(ci * basis[i][j] for i, ci in enumerate(c))
                      for j in range(dim))
        b_amb = Fraction(b_red) + sum(ai * pi for ai, pi in zip(a_amb, p0))
        ineqs.add(_normalize_ineq(tuple(Fraction(v) for v in a_amb), b_amb))
    return eqs, sorted(ineqs)


def _vertex_enum(eqs, ineqs, dim):
    """Vertices of {x : eqs hold, ineqs hold} by basis enumeration (exact)."""
    eqs = list(dict.fromkeys(eqs))
    ineqs = list(dict.fromkeys(ineqs))
    rref_eq, piv = _rref([list(a) + [b] for a, b in eqs]) if eqs else ([], [])
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in rref_eq):
        return []
    n_eq = len(rref_eq)
    need = dim - n_eq
    if need < 0:
        return []
    verts = set()
    for subset in combinations(range(len(ineqs)), need):
        rows = [list(a) for a, _ in eqs] + [list(ineqs[i][0]) for i in subset]
        rhs = [b for _, b in eqs] + [ineqs[i][1] for i in subset]
        # reduce an overdetermined equality block to a square solvable one
        aug_rref, piv2 = _rref([r + [v] for r, v in zip(rows, rhs)])
        if len(piv2) != dim or dim in piv2:
            continue
        sol = tuple(aug_rref[i][dim] for i in range(dim))
        if all(sum(ai * xi for ai, xi in zip(a, sol)) <= b for a, b in ineqs):
            if all(sum(ai * xi for ai, xi in zip(a, sol)) == b for a, b in eqs):
                verts.add(sol)
    return sorted(verts)


@dataclass(frozen=True)
class VPolytope:
    """Convex polytope given by its vertex list (exact rationals).

    Construction reduces the input points to the extreme ones.  An empty
    vertex list represents the empty polytope (possible fat-point output).
    """

    dim: int
    vertices: tuple

    def __init__(self, dim: int, points):
        pts = [tuple(Fraction(v) for v in p) for p in points]
        for p in pts:
            if len(p) != dim:
                raise ValueError("vertex length does not match dimension")
        pts = list(dict.fromkeys(pts))
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "vertices", tuple(_extreme_points(pts, dim)))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def hrep(self):
        if self.is_empty:
            raise ValueError("empty polytope has no H-representation")
        return _facet_system(self.vertices, self.dim)

    def contains(self, point) -> bool:
        """Exact membership test."""
        if self.is_empty:
            return False
        p = tuple(Fraction(v) for v in point)
        eqs, ineqs = self.hrep()
        return (all(sum(ai * xi for ai, xi in zip(a, p)) == b for a, b in eqs)
                and all(sum(ai * xi for ai, xi in zip(a, p)) <= b for a, b in ineqs))

    def float_hrep(self):
        """H-representation as float arrays (A_eq, b_eq, A_in, b_in)."""
        eqs, ineqs = self.hrep()
        a_eq = np.array([[float(v) for v in a] for a, _ in eqs]).reshape(-1, self.dim)
        b_eq = np.array([float(b) for _, b in eqs])
        a_in = np.array([[float(v) for v in a] for a, _ in ineqs]).reshape(-1, self.dim)
        b_in = np.array([float(b) for _, b in ineqs])
        return a_eq, b_eq, a_in, b_in


def _extreme_points(pts, dim):
    if len(pts) <= 1:
        return pts
    eqs, ineqs = _facet_system(pts, dim)
    out = []
    for p in pts:
        active = [a for a, b in ineqs
                  if sum(ai * xi for ai, xi in zip(a, p)) == b]
        active += [a for a, _ in eqs]
        _, piv = _rref([list(a) for a in active])
        if len(piv) == dim:
            out.append(p)
    return out


def fat_points(q: VPolytope, split) -> VPolytope:
    """Points y of the second factor with proj1(Q) x {y} contained in Q.

    ``split = (d1, d2)`` partitions the ambient coordinates.  Computed as
    the intersection over the vertices v of proj1(Q) of the slices
    {y : (v, y) in Q}, all in exact arithmetic.  May be empty.
    """
    d1, d2 = split
    if d1 + d2 != q.dim or d1 < 1 or d2 < 1:
        raise ValueError(f"split {split} does not partition dimension {q.dim}")
    if q.dim > 4:
        raise ValueError("ambient dimension above 4 is not supported")
    if q.is_empty:
        return VPolytope(d2, [])
    proj_pts = [p[:d1] for p in q.vertices]
    proj_vertices = _extreme_points(list(dict.fromkeys(proj_pts)), d1)
    eqs, ineqs = q.hrep()
    slice_eqs, slice_ineqs = [], []
    for v in proj_vertices:
        for a, b in eqs:
            head = sum(Fraction(ai) * vi for ai, vi in zip(a[:d1], v))
            slice_eqs.append(_normalize_ineq(
                tuple(Fraction(x) for x in a[d1:]), Fraction(b) - head))
        for a, b in ineqs:
            head = sum(Fraction(ai) * vi for ai, vi in zip(a[:d1], v))
            slice_ineqs.append(_normalize_ineq(
                tuple(Fraction(x) for x in a[d1:]), Fraction(b) - head))
    # a slice equality with zero normal is a consistency condition
    kept_eqs, kept_ineqs = [], []
    for a, b in slice_eqs:
        if all(v == 0 for v in a):
            if b != 0:
                return VPolytope(d2, [])
        else:
            kept_eqs.append((tuple(Fraction(v) for v in a), Fraction(b)))
    for a, b in slice_ineqs:
        if all(v == 0 for v in a):
            if b < 0:
                return VPolytope(d2, [])
        else:
            kept_ineqs.append((tuple(Fraction(v) for v in a), Fraction(b)))
    verts = _vertex_enum(kept_eqs, kept_ineqs, d2)
    return VPolytope(d2, verts)


# ---------------------------------------------------------------------------
# quantum-cohomology degree bookkeeping


@dataclass(frozen=True)
class SubsetTriple:
    """Three k-subsets of {1..n} plus a degree d."""

    n: int
    k: int
    i_set: tuple
    j_set: tuple
    k_set: tuple
    d: int

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise ValueError("need 1 <= k <= n")
        for s in (self.i_set, self.j_set, self.k_set):
            if (len(s) != self.k or list(s) != sorted(set(s))
                    or s[0] < 1 or s[-1] > self.n):
                raise ValueError(f"{s} is not a strictly increasing k-subset of 1..n")
        if self.d < 0:
            raise ValueError("degree must be nonnegative")


def qlr_degree_ok(t: SubsetTriple) -> bool:
    """Degree constraint a nonzero quantum Littlewood-Richardson coefficient must satisfy.

    sum(I) + sum(J) - sum(K) == k (n - k) + C(k+1, 2) - n d, in exact
    integer arithmetic.
    """
    lhs = sum(t.i_set) + sum(t.j_set) - sum(t.k_set)
    rhs = t.k * (t.n - t.k) + comb(t.k + 1, 2) - t.n * t.d
    return lhs == rhs


def centroid_feasibility_scan(n: int):
    """Scan the centroid inequalities over all degree-compatible subset triples.

    For every 1 <= k < n, all k-subsets I, J, K with the degree equation
    solvable by an integer d >= 0, and every alcove vertex, checks the
    linear inequality in the integer-cleared form
    ``p k - n a + k (n + 1) <= n d + sum(I) + sum(J)`` (a = |K inter [p]|).
    Returns the violating tuples (expected empty).
    """
    if not 2 <= n <= 8:
        raise BoundExceeded("scan supports 2 <= n <= 8")
    violations = []
    for k in range(1, n):
        deg = k * (n - k) + comb(k + 1, 2)
        subsets = [(sum(s), s) for s in combinations(range(1, n + 1), k)]
        for sum_i, i_set in subsets:
            for sum_j, j_set in subsets:
                for sum_k, k_set in subsets:
                    nd = deg - sum_i - sum_j + sum_k
                    if nd < 0 or nd % n:
                        continue
                    d = nd // n
                    for p in range(1, n + 1):
                        a = sum(1 for v in k_set if v <= p)
                        if p * k - n * a + k * (n + 1) > nd + sum_i + sum_j:
                            violations.append(
                                SubsetTriple(n, k, i_set, j_set, k_set, d))
                            break
    violations.sort(key=lambda t: (t.k, t.i_set, t.j_set, t.k_set, t.d))
    return violations
