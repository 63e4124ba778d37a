"""Restricted root system combinatorics and fundamental alcoves.

Three symmetric pair types are supported.  AI and AII share the type-A
root system (alcove in the sum-zero hyperplane of R^m); AIII has the
type-C root system (alcove ``1/2 >= x_1 >= ... >= x_m >= 0``).

Vertices, stabilizer maps and fixed-point sets are computed in exact
rational arithmetic; only the reduction of numeric spectra uses floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .errors import NotInAlcove, SignsInTypeA, SumNotInteger
from .numerics import Tolerance, default_tolerance

AI = "AI"
AII = "AII"
AIII = "AIII"


@dataclass(frozen=True)
class PairType:
    """A symmetric pair of SU(n): kind in {AI, AII, AIII} plus the alcove dimension m.

    For AI the matrix size is m itself; for AII and AIII it is 2m.
    """

    kind: str
    m: int

    def __post_init__(self):
        if self.kind not in (AI, AII, AIII):
            raise ValueError(f"unknown pair kind {self.kind!r}")
        if self.m < 1:
            raise ValueError("m must be >= 1")

    @property
    def dim(self) -> int:
        """Matrix dimension of the ambient special unitary group."""
        return self.m if self.kind == AI else 2 * self.m

    @property
    def is_type_a(self) -> bool:
        """True when the restricted root system is type A (pairs AI, AII)."""
        return self.kind in (AI, AII)

    def __str__(self):
        return f"{self.kind}(m={self.m})"


def pair_ai(n: int) -> PairType:
    return PairType(AI, n)


def pair_aii(m: int) -> PairType:
    return PairType(AII, m)


def pair_aiii(m: int) -> PairType:
    return PairType(AIII, m)


def in_closed_alcove(pair: PairType, x, slack: float) -> bool:
    """Closed-alcove membership with boundary slack, in the sup norm."""
    x = np.asarray(x, dtype=float)
    if x.shape != (pair.m,):
        return False
    if np.any(np.diff(x) > slack):
        return False
    if pair.is_type_a:
        return (abs(x.sum()) <= slack * max(pair.m, 1)
                and x[-1] >= x[0] - 1.0 - slack)
    return x[0] <= 0.5 + slack and x[-1] >= -slack


@dataclass(frozen=True)
class AlcovePoint:
    """A point of the closed fundamental alcove of a symmetric pair."""

    pair: PairType
    x: tuple

    def __init__(self, pair: PairType, x, tol: Tolerance | None = None):
        tol = tol or default_tolerance()
        xv = np.asarray(x, dtype=float)
        if not in_closed_alcove(pair, xv, tol.eps_spec):
            raise NotInAlcove(f"{xv} is not in the closed alcove of {pair}")
        object.__setattr__(self, "pair", pair)
        object.__setattr__(self, "x", tuple(float(v) for v in xv))

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.x, dtype=float)

    def __len__(self):
        return len(self.x)


def _reduce_type_a_with_perm(theta, eps: float):
    """Type-A alcove reduction of an angle vector, tracking the permutation.

    Returns ``(x, perm)`` with ``x[k] = fold(theta[perm[k]])`` so that
    ``exp(2 pi i x[k]) == exp(2 pi i theta[perm[k]])``, x in the closed
    alcove and sum(x) projected to exactly zero.
    """
    theta = np.asarray(theta, dtype=float)
    m = theta.shape[0]
    t = np.mod(theta, 1.0)
    total = t.sum()
    s = int(np.round(total))
    if abs(total - s) > eps * max(m, 1):
        raise SumNotInteger(f"sum of angles {total:.12f} is not near an integer")
    order = np.argsort(-t, kind="stable")
    perm = np.concatenate([order[s:], order[:s]]).astype(int)
    x = np.concatenate([t[order[s:]], t[order[:s]] - 1.0])
    x -= x.sum() / m
    return x, perm


def reduce_type_a(theta, tol: Tolerance | None = None) -> np.ndarray:
    """Reduce angles (in units of full turns) to the type-A fundamental alcove.

    The output r satisfies ``r_1 >= ... >= r_m >= r_1 - 1``, ``sum r = 0``,
    and ``{exp(2 pi i r_j)} = {exp(2 pi i theta_j)}`` as multisets.  The
    input must have coordinate sum within tolerance of an integer.
    """
    tol = tol or default_tolerance()
    x, _ = _reduce_type_a_with_perm(theta, tol.eps_spec)
    return x


def reduce_type_c(theta) -> np.ndarray:
    """Reduce angles to the type-C alcove: fold mod 1 into [0, 1/2], sort descending."""
    t = np.mod(np.asarray(theta, dtype=float), 1.0)
    folded = np.minimum(t, 1.0 - t)
    return np.sort(folded)[::-1]


@dataclass(frozen=True)
class SignedPermutation:
    """Signed permutation in one-line notation; entry i is w(i+1) in {+-1..+-m}."""

    images: tuple

    def __post_init__(self):
        absimg = sorted(abs(v) for v in self.images)
        if absimg != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a signed permutation")

    @classmethod
    def identity(cls, m: int) -> "SignedPermutation":
        return cls(tuple(range(1, m + 1)))

    @property
    def m(self) -> int:
        return len(self.images)

    @property
    def is_unsigned(self) -> bool:
        return all(v > 0 for v in self.images)

    def apply(self, v):
        """Linear action on vectors: result[i] = sgn(w(i+1)) * v[|w(i+1)| - 1].

        Works on float arrays and on tuples of Fractions alike.
        """
        if isinstance(v, np.ndarray):
            out = np.empty_like(v)
            for i, w in enumerate(self.images):
                out[i] = v[abs(w) - 1] if w > 0 else -v[abs(w) - 1]
            return out
        return tuple(v[w - 1] if w > 0 else -v[-w - 1] for w in self.images)

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """Composition as linear maps: (self.compose(other)).apply == self.apply o other.apply."""
        img = []
        for w in self.images:
            t = other.images[abs(w) - 1]
            img.append(t if w > 0 else -t)
        return SignedPermutation(tuple(img))

    def inverse(self) -> "SignedPermutation":
        img = [0] * self.m
        for i, w in enumerate(self.images):
            img[abs(w) - 1] = (i + 1) if w > 0 else -(i + 1)
        return SignedPermutation(tuple(img))


@dataclass(frozen=True)
class AffineMap:
    """Affine map x -> linear(x) + translation, translation exact rational."""

    linear: SignedPermutation
    translation: tuple

    @classmethod
    def identity(cls, m: int) -> "AffineMap":
        return cls(SignedPermutation.identity(m), tuple(Fraction(0) for _ in range(m)))

    def apply_exact(self, x):
        y = self.linear.apply(tuple(Fraction(v) for v in x))
        return tuple(a + b for a, b in zip(y, self.translation))

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.linear.apply(np.asarray(x, dtype=float)) + np.array(
            [float(t) for t in self.translation])

    def compose(self, other: "AffineMap") -> "AffineMap":
        lin = self.linear.compose(other.linear)
        tr = self.linear.apply(other.translation)
        return AffineMap(lin, tuple(a + b for a, b in zip(tr, self.translation)))


def cyclic_descents(w: SignedPermutation, pair: PairType):
    """Cyclic descent set of w and its weighted count.

    Type A (pairs AI, AII): descent at 0 < i < m when w(i) > w(i+1), at the
    affine node 0 when w(m) > w(1); all weights 1.  Type C (pair AIII):
    descent at 0 < i < m when s*w(i) > s*w(i+1) with s the product of the
    two signs, at m when w(m) < 0, at 0 when w(1) > 0; weights (1, 2, ..., 2, 1).
    """
    img = w.images
    m = w.m
    if pair.is_type_a:
        if not w.is_unsigned:
            raise SignsInTypeA("type-A pairs take plain permutations")
        des = {i for i in range(1, m) if img[i - 1] > img[i]}
        if m > 1 and img[m - 1] > img[0]:
            des.add(0)
        return des, len(des)
    des = set()
    for i in range(1, m):
        s = (1 if img[i - 1] > 0 else -1) * (1 if img[i] > 0 else -1)
        if s * img[i - 1] > s * img[i]:
            des.add(i)
    if img[m - 1] < 0:
        des.add(m)
    if img[0] > 0:
        des.add(0)
    weights = {0: 1, m: 1}
    cdes = sum(weights.get(i, 2) for i in des)
    return des, cdes


def alcove_vertices(pair: PairType):
    """Vertices of the closed fundamental alcove, as exact rational tuples.

    Type A: the m points 0, w_1, ..., w_{m-1} with
    ``w_k = (k/m, ..., k/m, (k-m)/m, ..., (k-m)/m)`` (m-k then k entries).
    Type C: the m+1 points ``(1/2, ..., 1/2, 0, ..., 0)`` with i halves.
    """
    m = pair.m
    if pair.is_type_a:
        verts = [tuple(Fraction(0) for _ in range(m))]
        for k in range(1, m):
            verts.append(tuple([Fraction(k, m)] * (m - k) + [Fraction(k - m, m)] * k))
        return verts
    return [tuple([Fraction(1, 2)] * i + [Fraction(0)] * (m - i)) for i in range(m + 1)]


def _type_a_coweight(m: int, k: int):
    if k % m == 0:
        return tuple(Fraction(0) for _ in range(m))
    k = k % m
    return tuple([Fraction(k, m)] * (m - k) + [Fraction(k - m, m)] * k)


def type_a_centroid(m: int):
    """The point ((m-1)/2m, (m-3)/2m, ..., -(m-1)/2m), exact."""
    return tuple(Fraction(m - 2 * j + 1, 2 * m) for j in range(1, m + 1))


def stabilizer_group(pair: PairType):
    """All alcove-preserving symmetries w tau_{-delta_w}, for w with cdes(w) = 1.

    Type A gives the cyclic group of order m generated by the long cycle
    (vertex rotation); type C gives the order-2 group whose nontrivial
    element acts by x -> (1/2 - x_m, ..., 1/2 - x_1).
    """
    m = pair.m
    if pair.is_type_a:
        if m == 1:
            return [AffineMap.identity(1)]
        maps = []
        for i in range(1, m + 1):
            w = SignedPermutation(tuple(list(range(i, m + 1)) + list(range(1, i))))
            des, cdes = cyclic_descents(w, pair)
            assert cdes == 1
            delta = _type_a_coweight(m, next(iter(des)))
            neg = w.apply(tuple(-d for d in delta))
            maps.append(AffineMap(w, neg))
        return maps
    c = SignedPermutation(tuple(-(m - i) for i in range(m)))
    half = tuple(Fraction(1, 2) for _ in range(m))
    return [AffineMap.identity(m), AffineMap(c, half)]


@dataclass(frozen=True)
class AffineSubspace:
    """Affine subspace given by a basepoint and spanning directions (exact)."""

    basepoint: tuple
    directions: tuple

    @property
    def dim(self) -> int:
        return len(self.directions)

    def contains(self, x, tol: float = 1e-10) -> bool:
        """Membership in the affine span (ignores alcove boundaries)."""
        x = np.asarray(x, dtype=float)
        b = np.array([float(v) for v in self.basepoint])
        if not self.directions:
            return bool(np.max(np.abs(x - b)) <= tol)
        d = np.array([[float(v) for v in row] for row in self.directions]).T
        coef, *_ = np.linalg.lstsq(d, x - b, rcond=None)
        return bool(np.max(np.abs(d @ coef - (x - b))) <= tol)


def fixed_point_set(pair: PairType) -> AffineSubspace:
    """Points of the closed alcove fixed by every stabilizer element.

    Type A: the single centroid point.  Type C: the set
    ``x_i + x_{m-i+1} = 1/2``, returned as basepoint (1/4, ..., 1/4) plus
    the floor(m/2) directions e_i - e_{m-i+1}.
    """
    m = pair.m
    if pair.is_type_a:
        return AffineSubspace(type_a_centroid(m), ())
    base = tuple(Fraction(1, 4) for _ in range(m))
    dirs = []
    for i in range(m // 2):
        d = [Fraction(0)] * m
        d[i] = Fraction(1)
        d[m - 1 - i] = Fraction(-1)
        dirs.append(tuple(d))
    return AffineSubspace(base, tuple(dirs))


def orbit_reduce_oracle_type_a(theta, shift_bound: int = 2):
    """Brute-force reduction oracle: scan permutations x integer shifts.

    Returns every alcove point obtainable as perm(theta) - z with z an
    integer vector (|z_j| <= shift_bound) of the right total.  Exponential;
    for tests at m <= 5 only.
    """
    theta = np.asarray(theta, dtype=float)
    m = theta.shape[0]
    total = int(np.round(theta.sum()))
    found = []

    def shifts(prefix, remaining, budget):
        if remaining == 0:
            if budget == 0:
                yield tuple(prefix)
            return
        for z in range(-shift_bound, shift_bound + 1):
            if abs(budget - z) <= shift_bound * (remaining - 1):
                yield from shifts(prefix + [z], remaining - 1, budget - z)

    pair = PairType(AI, m)
    for perm in permutations(range(m)):
        pt = theta[list(perm)]
        for z in shifts([], m, total):
            cand = pt - np.array(z, dtype=float)
            if in_closed_alcove(pair, cand, 1e-9):
                found.append(cand)
    return found


def orbit_reduce_oracle_type_c(theta):
    """Brute-force type-C oracle: scan all 2^m sign patterns with integer shifts.

    For each sign choice, translate coordinates into [0, 1); the sorted
    arrangement supplies the permutation part of the hyperoctahedral orbit.
    """
    theta = np.asarray(theta, dtype=float)
    m = theta.shape[0]
    found = []
    for signs in range(2 ** m):
        sv = np.array([1.0 if (signs >> j) & 1 == 0 else -1.0 for j in range(m)])
        shifted = np.mod(sv * theta, 1.0)
        if np.all(shifted <= 0.5 + 1e-12):
            cand = np.sort(shifted)[::-1]
            if in_closed_alcove(PairType(AIII, m), cand, 1e-9):
                found.append(cand)
    return found
