"""Involutions, Cartan doubles, the canonical alcove invariant, and KAK factorizations.

The three involutions on SU(n):

* AI:   theta(g) = conj(g), fixed subgroup SO(n).
* AII:  theta(g) = Omega conj(g) Omega^{-1} with Omega = [[0, -I], [I, 0]],
        fixed subgroup Sp(m) (matrix size 2m).
* AIII: theta(g) = J g J with J = diag(I, -I), fixed subgroup
        S(U(m) x U(m)) (matrix size 2m, equal block sizes).

Constructive factor recovery is provided for AI and AIII.  For AII only
the spectral invariant is computed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .alcove import (AI, AII, AIII, AlcovePoint, PairType,
                     _reduce_type_a_with_perm, reduce_type_c)
from .errors import (DimensionMismatch, NotInAlcove, PairingFailure,
                     SpectralMismatch)
from .numerics import (Tolerance, check_unitary, cs_middle, default_tolerance,
                       diag_symmetric_unitary, eig_unitary)


def _check_dim(u: np.ndarray, pair: PairType) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (pair.dim, pair.dim):
        raise DimensionMismatch(f"matrix shape {u.shape} does not match {pair}")
    return u


def _omega(m: int) -> np.ndarray:
    z = np.zeros((m, m))
    i = np.eye(m)
    return np.block([[z, -i], [i, z]])


def apply_involution(u, pair: PairType) -> np.ndarray:
    """The involution theta of the pair applied to u."""
    u = _check_dim(u, pair)
    if pair.kind == AI:
        return u.conj()
    m = pair.m
    if pair.kind == AII:
        om = _omega(m)
        return om @ u.conj() @ om.T.conj()
    out = u.copy()
    out[:m, m:] *= -1
    out[m:, :m] *= -1
    return out


def cartan_double(u, pair: PairType) -> np.ndarray:
    """u theta(u)^{-1}; for AI this is the symmetric unitary u u^T."""
    u = _check_dim(u, pair)
    return u @ apply_involution(u, pair).conj().T


@dataclass(frozen=True)
class CartanFactors:
    """Factors of u = k1 alcove_exp(x) k2 with k1, k2 in the symmetric subgroup."""

    pair: PairType
    k1: np.ndarray
    k2: np.ndarray
    x: AlcovePoint

    def reconstruct(self) -> np.ndarray:
        return self.k1 @ alcove_exp(self.x) @ self.k2


def alcove_exp(x: AlcovePoint) -> np.ndarray:
    """The canonical representative exp(i pi X) of the double coset of an alcove point.

    AI: diag(exp(i pi x_j)).  AII: the same diagonal repeated in both half
    blocks.  AIII: [[cos D, i sin D], [i sin D, cos D]] with D = diag(pi x).
    """
    v = x.vector
    if x.pair.kind == AI:
        return np.diag(np.exp(1j * np.pi * v))
    if x.pair.kind == AII:
        d = np.exp(1j * np.pi * v)
        return np.diag(np.concatenate([d, d]))
    return cs_middle(v)


def _pair_doubled_spectrum(lam: np.ndarray, radius: float):
    """Group a multiplicity-two spectrum into pairs; return one angle per pair.

    The eigenvalues arrive sorted by argument, so duplicates are adjacent
    up to a possible wrap at the branch cut; both adjacent pairings are
    tried and the tighter one kept.
    """
    n = lam.shape[0]
    m = n // 2

    def pairing(offset):
        idx = list(range(offset, n)) + list(range(offset))
        pairs = [(lam[idx[2 * i]], lam[idx[2 * i + 1]]) for i in range(m)]
        cost = sum(abs(a - b) for a, b in pairs)
        return cost, pairs

    cost0, pairs0 = pairing(0)
    cost1, pairs1 = pairing(1)
    cost, pairs = (cost0, pairs0) if cost0 <= cost1 else (cost1, pairs1)
    worst = max(abs(a - b) for a, b in pairs)
    if worst > radius:
        raise PairingFailure(
            f"eigenvalues do not pair with multiplicity 2 (worst gap {worst:.3e})")
    return np.array([np.angle(a + b) / (2 * np.pi) for a, b in pairs])


def alcove_invariant(u, pair: PairType, tol: Tolerance | None = None) -> AlcovePoint:
    """The unique alcove point whose double coset contains u.

    AI: alcove reduction of the spectrum of u u^T.  AII: the Cartan-double
    spectrum pairs up with multiplicity two; one representative per pair is
    reduced.  AIII: arccos of the corner singular values (reversed), with
    the Cartan-double spectrum retained as a cross-check.
    """
    tol = tol or default_tolerance()
    u = check_unitary(_check_dim(u, pair), tol)
    if pair.kind == AI:
        lam, _ = eig_unitary(cartan_double(u, pair), tol)
        x, _ = _reduce_type_a_with_perm(np.angle(lam) / (2 * np.pi), tol.eps_spec)
        return AlcovePoint(pair, x, tol)
    if pair.kind == AII:
        lam, _ = eig_unitary(cartan_double(u, pair), tol)
        theta = _pair_doubled_spectrum(lam, 10 * tol.eps_spec)
        x, _ = _reduce_type_a_with_perm(theta, tol.eps_spec)
        return AlcovePoint(pair, x, tol)
    m = pair.m
    sigma = np.linalg.svd(u[:m, :m], compute_uv=False)
    x = np.arccos(np.clip(sigma[::-1], 0.0, 1.0)) / np.pi
    # cross-check against the +-paired Cartan-double spectrum, in cosine space
    lam, _ = eig_unitary(cartan_double(u, pair), tol)
    folded = reduce_type_c(np.angle(lam) / (2 * np.pi))
    dup = folded.reshape(m, 2).mean(axis=1)
    gap = np.max(np.abs(np.diff(folded.reshape(m, 2), axis=1)))
    err = np.max(np.abs(np.cos(np.pi * dup) - np.cos(np.pi * x)))
    if gap > 10 * tol.eps_spec or err > 10 * tol.eps_spec:
        raise SpectralMismatch(
            f"corner singular values and Cartan-double spectrum disagree "
            f"(pair gap {gap:.3e}, cosine error {err:.3e})")
    return AlcovePoint(pair, x, tol)


def decompose_ai(u, tol: Tolerance | None = None) -> CartanFactors:
    """KAK factorization u = o1 D o2 for the pair (SU(n), SO(n)).

    Diagonalizes the symmetric unitary u u^T over a real orthogonal basis,
    reduces the half-angles to the alcove, and back-solves
    o2 = D^{-1} o1^T u.  Both orthogonal factors come out with det +1.
    """
    tol = tol or default_tolerance()
    n = np.asarray(u).shape[0]
    pair = PairType(AI, n)
    u = check_unitary(_check_dim(u, pair), tol)
    q, lam = diag_symmetric_unitary(cartan_double(u, pair), tol)
    x, perm = _reduce_type_a_with_perm(np.angle(lam) / (2 * np.pi), tol.eps_spec)
    o1 = q[:, perm]
    if np.linalg.det(o1) < 0:
        o1 = o1.copy()
        o1[:, 0] = -o1[:, 0]
    o2 = ((o1.T @ u) * np.exp(-1j * np.pi * x)[:, None]).real
    return CartanFactors(pair, o1.astype(float), o2, AlcovePoint(pair, x, tol))


def decompose_aiii(u, tol: Tolerance | None = None) -> CartanFactors:
    """KAK factorization for the pair (SU(2m), S(U(m) x U(m))): the CSD.

    The block-diagonal factors are rebalanced by a scalar phase so that
    both have determinant exactly one.
    """
    from .numerics import csd_2block

    tol = tol or default_tolerance()
    n = np.asarray(u).shape[0]
    pair = PairType(AIII, n // 2)
    u = check_unitary(_check_dim(u, pair), tol)
    m = pair.m
    p, q, r, s, x = csd_2block(u, tol)
    k1 = scipy.linalg.block_diag(p, q)
    k2 = scipy.linalg.block_diag(r, s)
    z = np.exp(-1j * np.angle(np.linalg.det(k1)) / (2 * m))
    k1 = z * k1
    k2 = np.conj(z) * k2
    return CartanFactors(pair, k1, k2, AlcovePoint(pair, x, tol))


def k_membership_residual(k, pair: PairType) -> float:
    """Distance of k from the symmetric subgroup of the pair (0 when inside).

    AI: imaginary part plus orthogonality defect plus |det - 1|.
    AII: Frobenius defect of Omega conj(k) Omega^{-1} = k.
    AIII: off-diagonal block mass plus |det - 1|.
    """
    k = _check_dim(k, pair)
    n = pair.dim
    if pair.kind == AI:
        return float(np.linalg.norm(k.imag)
                     + np.linalg.norm(k.real.T @ k.real - np.eye(n))
                     + abs(np.linalg.det(k) - 1))
    if pair.kind == AII:
        return float(np.linalg.norm(apply_involution(k, pair) - k))
    m = pair.m
    return float(np.linalg.norm(k[:m, m:]) + np.linalg.norm(k[m:, :m])
                 + abs(np.linalg.det(k) - 1))


def random_k_element(pair: PairType, seed: int) -> np.ndarray:
    """A random element of the symmetric subgroup, deterministic in the seed."""
    rng = np.random.default_rng(seed)
    m = pair.m
    if pair.kind == AI:
        z = rng.standard_normal((m, m))
        q, r = np.linalg.qr(z)
        q = q * np.sign(np.diagonal(r))
        if np.linalg.det(q) < 0:
            q = q.copy()
            q[:, 0] = -q[:, 0]
        return q.astype(complex)
    if pair.kind == AII:
        g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        h = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        a = (g - g.conj().T) / 2
        b = (h + h.T) / 2
        xi = np.block([[a, -b.conj()], [b, a.conj()]])
        return scipy.linalg.expm(xi)
    from .numerics import haar_unitary

    v = haar_unitary(m, int(rng.integers(2 ** 63)))
    w = haar_unitary(m, int(rng.integers(2 ** 63)))
    w = w * np.exp(-1j * np.angle(np.linalg.det(v) * np.linalg.det(w)) / m)
    return scipy.linalg.block_diag(v, w)
