"""Dense complex linear-algebra kernel.

Eigendecomposition of unitary matrices, diagonalization of symmetric
unitary matrices with a real orthogonal eigenbasis, the 2x2-block
cosine-sine decomposition, and seeded Haar-random unitary sampling.

All matrices are plain ``numpy`` arrays.  Functions are pure: no global
mutable state apart from the overridable default :class:`Tolerance`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import DimensionOdd, NonConvergence, NotSymmetric, NotUnitary


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerances: orthogonality, spectral matching, reconstruction."""

    eps_ortho: float = 1e-10
    eps_spec: float = 1e-8
    eps_recon: float = 1e-8

    def __post_init__(self):
        if min(self.eps_ortho, self.eps_spec, self.eps_recon) <= 0:
            raise ValueError("tolerances must be strictly positive")

    def scaled(self, eps_recon: float) -> "Tolerance":
        """New tolerances with eps_recon set and the others scaled proportionally."""
        f = eps_recon / self.eps_recon
        return Tolerance(self.eps_ortho * f, self.eps_spec * f, eps_recon)


_default_tol = Tolerance()


def default_tolerance() -> Tolerance:
    return _default_tol


def set_default_tolerance(tol: Tolerance) -> None:
    global _default_tol
    _default_tol = tol


def _tol(tol: Tolerance | None) -> Tolerance:
    return _default_tol if tol is None else tol


def unitarity_residual(u) -> float:
    u = np.asarray(u)
    n = u.shape[0]
    return float(np.linalg.norm(u.conj().T @ u - np.eye(n)))


def check_unitary(u, tol: Tolerance | None = None) -> np.ndarray:
    """Return ``u`` as a complex array, raising :class:`NotUnitary` if it fails the test."""
    tol = _tol(tol)
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(np.inf, "matrix is not square")
    r = unitarity_residual(u)
    if r > tol.eps_ortho * u.shape[0]:
        raise NotUnitary(r)
    return u


def eig_unitary(u, tol: Tolerance | None = None):
    """Eigendecomposition ``u = v diag(lam) v^dag`` of a unitary matrix.

    ``v`` is unitary (Schur-based, so orthonormal eigenvectors even for
    clustered eigenvalues) and the eigenvalues are sorted by principal
    argument in [0, 2pi), descending, ties broken by original position.
    """
    tol = _tol(tol)
    u = check_unitary(u, tol)
    try:
        t, v = scipy.linalg.schur(u, output="complex")
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - rare in LAPACK
        raise NonConvergence(str(exc)) from exc
    lam = np.diag(t).copy()
    order = np.argsort(-np.mod(np.angle(lam), 2 * np.pi), kind="stable")
    return lam[order], v[:, order]


def _cluster_bounds(sorted_vals, gap):
    """Index ranges [i, j) of maximal runs with consecutive gaps <= gap."""
    bounds = []
    i = 0
    n = len(sorted_vals)
    while i < n:
        j = i + 1
        while j < n and sorted_vals[j] - sorted_vals[j - 1] <= gap:
            j += 1
        bounds.append((i, j))
        i = j
    return bounds


def diag_symmetric_unitary(m, tol: Tolerance | None = None):
    """Diagonalize a symmetric unitary matrix with a real orthogonal basis.

    Returns ``(q, lam)`` with ``q`` real orthogonal and
    ``m = q diag(lam) q^T``.  Works by simultaneously diagonalizing the
    commuting real symmetric pair Re(m), Im(m): Re(m) first, then Im(m)
    restricted to each eigenvalue cluster of Re(m).  This is what makes a
    real basis possible even when ``m`` has repeated eigenvalues.
    """
    tol = _tol(tol)
    m = check_unitary(m, tol)
    n = m.shape[0]
    if np.linalg.norm(m - m.T) > tol.eps_spec * n:
        raise NotSymmetric(f"||m - m^T|| = {np.linalg.norm(m - m.T):.3e}")
    a = (m.real + m.real.T) / 2.0
    b = (m.imag + m.imag.T) / 2.0
    try:
        w, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NonConvergence(str(exc)) from exc
    gap = max(tol.eps_spec * max(np.abs(w).max(), 1.0), 1e-13)
    for i, j in _cluster_bounds(w, gap):
        if j - i > 1:
            sub = q[:, i:j].T @ b @ q[:, i:j]
            _, qb = np.linalg.eigh((sub + sub.T) / 2.0)
            q[:, i:j] = q[:, i:j] @ qb
    lam = np.einsum("ji,jk,ki->i", q, m, q)
    return q, lam


class BlockCSD(NamedTuple):
    """Factors of the 2x2-block cosine-sine decomposition (see :func:`csd_2block`)."""

    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    s: np.ndarray
    x: np.ndarray


def cs_middle(x) -> np.ndarray:
    """The matrix ``[[cos D, i sin D], [i sin D, cos D]]`` with ``D = diag(pi * x)``."""
    d = np.pi * np.asarray(x, dtype=float)
    c, s = np.diag(np.cos(d)), np.diag(np.sin(d))
    return np.block([[c, 1j * s], [1j * s, c]])


def csd_2block(u, tol: Tolerance | None = None) -> BlockCSD:
    """Cosine-sine decomposition of an even-dimensional unitary matrix.

    ``u = diag(p, q) @ cs_middle(x) @ diag(r, s)`` with all four blocks
    unitary and ``x`` nonincreasing in [0, 1/2].  Under this ordering the
    singular values of the upper-left corner satisfy
    ``sigma_{m-i+1}(u11) = cos(pi * x_i)``.
    """
    tol = _tol(tol)
    u = check_unitary(u, tol)
    n = u.shape[0]
    if n % 2:
        raise DimensionOdd(f"dimension {n} is odd")
    m = n // 2
    try:
        w, cs, vdh = scipy.linalg.cossin(u, p=m, q=m)
    except Exception as exc:
        raise NonConvergence(str(exc)) from exc
    # LAPACK returns u = w [[C, -S], [S, C]] vdh with the angles ascending.
    # Convert to the i*sin form and reverse so x is nonincreasing.
    theta = np.arctan2(np.diag(cs[m:, :m]), np.diag(cs[:m, :m]))
    rev = np.arange(m)[::-1]
    x = theta[rev] / np.pi
    p = w[:m, :m][:, rev].astype(complex)
    q = -1j * w[m:, m:][:, rev]
    r = vdh[:m, :m][rev, :].astype(complex)
    s = 1j * vdh[m:, m:][rev, :]
    return BlockCSD(p, q, r, s, x)


def haar_unitary(n: int, seed: int, special: bool = False) -> np.ndarray:
    """Haar-distributed n x n unitary, deterministic in the seed.

    QR of a complex Ginibre matrix with the R-diagonal phases pushed back
    into Q.  With ``special`` the determinant is normalized to 1 by a
    global phase.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = r.diagonal()
    q = q * (d.conj() / np.abs(d))
    if special:
        q = q * np.exp(-1j * np.angle(np.linalg.det(q)) / n)
    return q
