"""Constructive fixed-depth factorizations.

* Berkeley-gate circuits: any 4x4 unitary as L1 B L2 B L3 with the L_i
  single-qubit layers, found by spectral matching over the orthogonal
  group in the magic basis with a full-matrix fallback.
* Corner singular-value solvers for the split pair of SU(4) and their
  block-paired extension to SU(2m) (five-factor form k1 V k2 V^{-1} k3).
* Single-level block-ZXZ decomposition of an n-qubit gate with two
  Hadamard layers.

Every synthesizer verifies its output by multiplying the factors back
out; gauge freedom in the factors is unconstrained.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import least_squares

from .alcove import AIII, AlcovePoint, PairType
from .cartan import alcove_invariant, alcove_exp, decompose_ai
from .errors import DimensionMismatch, DimensionOdd, SolverFailure, SynthesisFailure
from .numerics import Tolerance, check_unitary, default_tolerance

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


def berkeley_gate() -> np.ndarray:
    """The 4x4 Berkeley gate: two applications suffice for any two-qubit gate."""
    c8, s8 = np.cos(np.pi / 8), np.sin(np.pi / 8)
    c38, s38 = np.cos(3 * np.pi / 8), np.sin(3 * np.pi / 8)
    return np.array([
        [c8, 0, 0, 1j * s8],
        [0, c38, 1j * s38, 0],
        [0, 1j * s38, c38, 0],
        [1j * s8, 0, 0, c8],
    ])


def magic_matrix() -> np.ndarray:
    """Bell-basis change Q with Q^dag (SU(2) x SU(2)) Q = SO(4)."""
    return np.array([
        [1, 0, 0, 1j],
        [0, 1j, 1, 0],
        [0, 1j, -1, 0],
        [1, 0, 0, -1j],
    ]) / np.sqrt(2.0)


_SO4_BASIS = None


def _so4_basis():
    global _SO4_BASIS
    if _SO4_BASIS is None:
        mats = []
        for i in range(4):
            for j in range(i + 1, 4):
                e = np.zeros((4, 4))
                e[i, j], e[j, i] = 1.0, -1.0
                mats.append(e)
        _SO4_BASIS = np.array(mats)
    return _SO4_BASIS


def _so4(theta) -> np.ndarray:
    return scipy.linalg.expm(np.tensordot(theta, _so4_basis(), axes=1))


def _matrix_seed(m: np.ndarray) -> int:
    digest = hashlib.sha256(np.round(m, 12).tobytes()).digest()
    return int.from_bytes(digest[:8], "big")


def _split_tensor_pair(l: np.ndarray):
    """Factor a 4x4 Kronecker product (up to phase) into (a, b, phase).

    Reshuffling l[(i j), (k l)] -> m[(i k), (j l)] turns a tensor product
    into a rank-one matrix; both 2x2 factors are normalized to det 1 and
    the leftover unimodular scalar is returned separately.
    """
    m = l.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(m)
    a = (u[:, 0] * np.sqrt(s[0])).reshape(2, 2)
    b = (vh[0] * np.sqrt(s[0])).reshape(2, 2)
    a = a / np.sqrt(np.linalg.det(a))
    b = b / np.sqrt(np.linalg.det(b))
    phase = np.trace(np.kron(a, b).conj().T @ l) / 4.0
    return a, b, phase / abs(phase)


@dataclass(frozen=True)
class SU4Circuit:
    """Factors of target ~ L1 B L2 B L3 with L_i = phase_i * (a_i kron b_i)."""

    factors: tuple          # three (a, b, phase) triples
    phase: complex          # product of factors equals phase * target

    def layer(self, i: int) -> np.ndarray:
        a, b, ph = self.factors[i]
        return ph * np.kron(a, b)

    def reconstruct(self) -> np.ndarray:
        b = berkeley_gate()
        return self.layer(0) @ b @ self.layer(1) @ b @ self.layer(2)


def synth_su4(target, max_restarts: int = 32,
              tol: Tolerance | None = None) -> SU4Circuit:
    """Depth-two Berkeley circuit for an arbitrary 4x4 unitary.

    Works in the magic basis, where the single-qubit layers become real
    orthogonal.  First a 6-parameter damped least-squares matches the
    Cartan-double spectrum of B k B to the target invariant and aligns the
    outer factors through the AI decomposition; degenerate targets
    (repeated invariant entries) fall back to an 18-parameter solve of the
    full matrix equation.  Restart seeds derive from the input hash.
    """
    tol = tol or default_tolerance()
    tgt = check_unitary(np.asarray(target, dtype=complex), tol)
    if tgt.shape != (4, 4):
        raise DimensionMismatch("target must be 4x4")
    su = tgt * np.exp(-1j * np.angle(np.linalg.det(tgt)) / 4)
    qm = magic_matrix()
    bm = qm.conj().T @ berkeley_gate() @ qm
    w = qm.conj().T @ su @ qm
    pair = PairType("AI", 4)
    a = alcove_invariant(w, pair, tol).vector
    mu = np.exp(2j * np.pi * a)
    tpow = np.array([mu.sum(), (mu ** 2).sum(), (mu ** 3).sum()])

    def spec_resid(theta):
        y = bm @ _so4(theta) @ bm
        g = y @ y.T
        g2 = g @ g
        p = np.array([np.trace(g), np.trace(g2), np.trace(g2 @ g)]) - tpow
        return np.concatenate([p.real, p.imag])

    def full_resid(params):
        m = (_so4(params[:6]) @ bm @ _so4(params[6:12]) @ bm @ _so4(params[12:])
             - w)
        return np.concatenate([m.real.ravel(), m.imag.ravel()])

    rng = np.random.default_rng(_matrix_seed(su))
    triple = None
    for k in range(max(4, max_restarts // 4)):
        x0 = np.zeros(6) if k == 0 else rng.uniform(-np.pi, np.pi, 6)
        sol = least_squares(spec_resid, x0, method="lm",
                            xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if sol.cost < 1e-18:
            o2 = _so4(sol.x)
            y = bm @ o2 @ bm
            fy = decompose_ai(y, tol)
            fw = decompose_ai(w, tol)
            o1 = fw.k1 @ fy.k1.T
            o3 = fy.k2.T @ fw.k2
            if np.linalg.norm(o1 @ y @ o3 - w) < 1e-7 * 4:
                triple = (o1, o2, o3)
                break
    if triple is None:
        for _ in range(max_restarts):
            p0 = rng.uniform(-np.pi, np.pi, 18)
            sol = least_squares(full_resid, p0, method="lm", xtol=1e-15,
                                ftol=1e-15, gtol=1e-15, max_nfev=3000)
            if sol.cost < 5e-15:
                cand = (_so4(sol.x[:6]), _so4(sol.x[6:12]), _so4(sol.x[12:]))
                if np.linalg.norm(cand[0] @ bm @ cand[1] @ bm @ cand[2] - w) < 1e-6:
                    triple = cand
                    break
    if triple is None:
        raise SynthesisFailure("restart budget exhausted without a verified circuit")
    factors = tuple(_split_tensor_pair(qm @ o @ qm.conj().T) for o in triple)
    circuit = SU4Circuit(factors, 1.0 + 0j)
    prod = circuit.reconstruct()
    ph = np.trace(prod @ tgt.conj().T)
    ph = ph / abs(ph)
    circuit = SU4Circuit(factors, complex(ph))
    if np.linalg.norm(prod - ph * tgt) > 1e-6 * 4:
        raise SynthesisFailure("verification of the assembled circuit failed")
    return circuit


# ---------------------------------------------------------------------------
# AIII corner singular-value solvers


@dataclass(frozen=True)
class GatePair:
    """Blocks (k1, k2) realizing target corner singular values (see corner_matrix)."""

    k1: np.ndarray
    k2: np.ndarray


def corner_matrix(x: AlcovePoint, k1, k2) -> np.ndarray:
    """cos(D) k1 cos(D) - sin(D) k2 sin(D) with D = diag(pi x)."""
    d = np.pi * x.vector
    c, s = np.diag(np.cos(d)), np.diag(np.sin(d))
    return c @ np.asarray(k1) @ c - s @ np.asarray(k2) @ s


def _xrot(b: float) -> np.ndarray:
    return np.array([[np.cos(b), 1j * np.sin(b)], [1j * np.sin(b), np.cos(b)]])


def _rot(a: float) -> np.ndarray:
    return np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])


def _family_phase_xrot(v):
    k1 = np.exp(1j * v[0]) * _xrot(v[1])
    return k1, k1.conj().T


def _family_real_rot(v):
    return _rot(v[0]), _rot(v[1])


def _pq(m: np.ndarray):
    det = np.linalg.det(m)
    tr = float(np.trace(m @ m.conj().T).real)
    return 0.5 * tr + det.real, 0.5 * tr - det.real


def _newton_2d(f, v0, max_iter=80):
    v = np.asarray(v0, dtype=float)
    for _ in range(max_iter):
        r = f(v)
        nr = np.linalg.norm(r)
        if nr < 1e-13:
            return v
        jac = np.zeros((2, 2))
        h = 1e-7
        for k in range(2):
            vp = v.copy()
            vp[k] += h
            jac[:, k] = (f(vp) - r) / h
        try:
            dv = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            return None
        lam = 1.0
        while lam > 1e-8:
            if np.linalg.norm(f(v + lam * dv)) < nr:
                break
            lam /= 2
        else:
            return None
        v = v + lam * dv
    return v if np.linalg.norm(f(v)) < 1e-11 else None


def synth_aiii_2x2(x: AlcovePoint, sigma, tol: Tolerance | None = None) -> GatePair:
    """2x2 blocks (k1, k2) whose corner matrix has prescribed singular values.

    ``x`` must be a fixed-line point (1/2 - t, t) of the split pair of
    SU(4); every 1 >= sigma_1 >= sigma_2 >= 0 is achievable.  Equal
    targets have a closed form (k1, k2 opposite rotations give a scalar
    corner); otherwise a two-parameter Newton solve runs over the
    phase-times-X-rotation family and the real-rotation family, matching
    the two unitary invariants 1/2 tr(M M^dag) +- det(M).
    """
    tol = tol or default_tolerance()
    if x.pair.kind != AIII or x.pair.m != 2:
        raise SolverFailure("expected an AIII m=2 alcove point")
    v = x.vector
    t = float(v[1])
    if abs(v[0] + v[1] - 0.5) > 10 * tol.eps_spec:
        raise SolverFailure(f"{v} is not on the fixed line (1/2 - t, t)")
    s1, s2 = float(sigma[0]), float(sigma[1])
    if not (1 + 1e-12 >= s1 >= s2 >= -1e-12):
        raise SolverFailure("need 1 >= sigma_1 >= sigma_2 >= 0")
    s1, s2 = min(s1, 1.0), max(s2, 0.0)

    def verified(k1, k2):
        sv = np.linalg.svd(corner_matrix(x, k1, k2), compute_uv=False)
        return max(abs(sv[0] - s1), abs(sv[1] - s2)) < 1e-8

    if abs(s1 - s2) < 1e-12:
        ang = float(np.arccos(np.clip(s1, 0.0, 1.0)))
        k1, k2 = _rot(ang), _rot(np.pi - ang)
        if verified(k1, k2):
            return GatePair(k1, k2)
    families = [_family_phase_xrot, _family_real_rot]
    if t < 1 / 8:
        families.reverse()
    starts = [np.array([a, b])
              for a in np.linspace(0.4, 2 * np.pi, 8, endpoint=False)
              for b in np.linspace(0.4, 2 * np.pi, 8, endpoint=False)]
    near_equal = np.array([float(np.arccos(np.clip((s1 + s2) / 2, 0, 1))),
                           np.pi - float(np.arccos(np.clip((s1 + s2) / 2, 0, 1)))])
    for family in families:
        for alpha in (1.0, -1.0):
            p_t = 0.5 * (s1 + alpha * s2) ** 2
            q_t = 0.5 * (s1 - alpha * s2) ** 2

            def f(vv):
                p, q = _pq(corner_matrix(x, *family(vv)))
                return np.array([p - p_t, q - q_t])

            for v0 in [near_equal] + starts:
                sol = _newton_2d(f, v0)
                if sol is None:
                    continue
                k1, k2 = family(sol)
                if verified(k1, k2):
                    return GatePair(k1, k2)
    raise SolverFailure(
        f"no gate pair found for sigma = ({s1}, {s2}) at t = {t}")


@dataclass(frozen=True)
class AIIISequence:
    """Five factors k1 V k2 V^{-1} k3 with k_i block-diagonal and V canonical."""

    pair: PairType
    k1: np.ndarray
    v: np.ndarray
    k2: np.ndarray
    v_inv: np.ndarray
    k3: np.ndarray
    x_star: AlcovePoint

    def reconstruct(self) -> np.ndarray:
        return self.k1 @ self.v @ self.k2 @ self.v_inv @ self.k3


def _fix_block_det(k: np.ndarray, m: int) -> np.ndarray:
    """Scalar phase making a block-diagonal 2m x 2m matrix special."""
    return k * np.exp(-1j * np.angle(np.linalg.det(k)) / (2 * m))


def synth_aiii(target, tol: Tolerance | None = None) -> AIIISequence:
    """Five-factor decomposition of a 2m x 2m special unitary: k1 V k2 V^{-1} k3.

    V is the canonical representative of the uniform fixed-line point
    (1/4, ..., 1/4), whose invariant lies in the large-product locus, so
    the middle conjugation can reach any double coset.  The corner of
    V k2 V^{-1} decomposes into independent 2x2 (and one 1x1 for odd m)
    problems handled by :func:`synth_aiii_2x2`.
    """
    tol = tol or default_tolerance()
    u = check_unitary(np.asarray(target, dtype=complex), tol)
    n = u.shape[0]
    if n % 2:
        raise DimensionOdd("target dimension must be even")
    m = n // 2
    pair = PairType(AIII, m)
    from .cartan import decompose_aiii

    factors = decompose_aiii(u, tol)
    y = factors.x.vector
    # target corner singular values, descending
    sigma = np.cos(np.pi * y)[::-1]
    x_star = AlcovePoint(pair, np.full(m, 0.25), tol)
    v = alcove_exp(x_star)
    line_pt = AlcovePoint(PairType(AIII, 2), np.array([0.25, 0.25]), tol)
    kb1 = np.zeros((m, m), dtype=complex)
    kb2 = np.zeros((m, m), dtype=complex)
    for j in range(m // 2):
        gp = synth_aiii_2x2(line_pt, (sigma[2 * j], sigma[2 * j + 1]), tol)
        kb1[2 * j: 2 * j + 2, 2 * j: 2 * j + 2] = gp.k1
        kb2[2 * j: 2 * j + 2, 2 * j: 2 * j + 2] = gp.k2
    if m % 2:
        # 1x1 block at the line midpoint: corner value (e^{i a} + e^{-i a})/2
        ang = float(np.arccos(np.clip(sigma[-1], 0.0, 1.0)))
        kb1[m - 1, m - 1] = np.exp(1j * ang)
        kb2[m - 1, m - 1] = -np.exp(-1j * ang)
    # corner convention of the solver is cos K1 cos - sin K2 sin; the actual
    # conjugated corner is cos K1 cos + sin K2 sin, so flip the sign of k2's
    # lower block
    k_mid = _fix_block_det(scipy.linalg.block_diag(kb1, -kb2), m)
    w = v @ k_mid @ v.conj().T
    inner = decompose_aiii(w, tol)
    if np.max(np.abs(inner.x.vector - y)) > 1e-7:
        raise SolverFailure("middle conjugation missed the target invariant")
    # w = g1 mid g2  =>  u = h1 mid h2 = (h1 g1^dag) w (g2^dag h2)
    k1 = _fix_block_det(factors.k1 @ inner.k1.conj().T, m)
    k3 = _fix_block_det(inner.k2.conj().T @ factors.k2, m)
    seq = AIIISequence(pair, k1, v, k_mid, v.conj().T, k3, x_star)
    err = np.linalg.norm(seq.reconstruct() - u)
    if err > 1e-6 * n:
        raise SolverFailure(f"five-factor reconstruction error {err:.3e}")
    return seq


# ---------------------------------------------------------------------------
# block-ZXZ decomposition


@dataclass(frozen=True)
class ZXZFactors:
    """diag(I, a) (H x I) diag(I, b) (H x I) diag(s, c) for an n-qubit gate."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    s: np.ndarray
    n_qubits: int

    def reconstruct(self) -> np.ndarray:
        m = self.s.shape[0]
        eye = np.eye(m)
        h_layer = np.kron(HADAMARD, eye)
        left = scipy.linalg.block_diag(eye, self.a)
        mid = scipy.linalg.block_diag(eye, self.b)
        right = scipy.linalg.block_diag(self.s, self.c)
        return left @ h_layer @ mid @ h_layer @ right


def block_zxz(u, tol: Tolerance | None = None) -> ZXZFactors:
    """Single-level block-ZXZ decomposition with both one-qubit layers Hadamard.

    From the block identities u11 = (I + b) s / 2, u12 = (I - b) c / 2,
    u21 = a (I - b) s / 2, u22 = a (I + b) c / 2: b shares the left
    singular basis of u11 with eigenphases 2 arccos(sigma); s, c, a follow
    by back-substitution.  Corner singular values at 0 or 1 make I +- b
    singular; the corresponding rows of c are completed through the
    orthogonal complement and the columns of a routed through whichever
    block equation is well conditioned.
    """
    tol = tol or default_tolerance()
    u = check_unitary(np.asarray(u, dtype=complex), tol)
    n = u.shape[0]
    if n < 2 or n & (n - 1):
        raise SolverFailure("dimension must be a power of two, at least 2")
    m = n // 2
    u11, u12 = u[:m, :m], u[:m, m:]
    u21, u22 = u[m:, :m], u[m:, m:]
    w, sig, vh = np.linalg.svd(u11)
    sig = np.clip(sig, 0.0, 1.0)
    eph = np.exp(2j * np.arccos(sig))
    low = sig < 1e-9
    eph[low] = -1.0
    phases = np.ones(m, dtype=complex)
    phases[~low] = 2.0 * sig[~low] / (1.0 + eph[~low])
    wu12 = w.conj().T @ u12
    c_t = np.zeros((m, m), dtype=complex)
    known = np.zeros(m, dtype=bool)
    for j in range(m):
        den = 1.0 - eph[j]
        if abs(den) > 1e-12:
            row = 2.0 * wu12[j] / den
            norm = np.linalg.norm(row)
            if norm > 0.5:
                c_t[j] = row / norm
                known[j] = True
    # remaining rows belong to corner singular values at (or within noise
    # of) one: snap the eigenphase and complete the rows orthonormally
    eph[~known & ~low] = 1.0
    phases[~known & ~low] = 1.0
    if not known.all():
        rows = c_t[known]
        if rows.shape[0]:
            _, sv, nvh = np.linalg.svd(rows)
            null_rows = nvh[rows.shape[0]:]
        else:
            null_rows = np.eye(m, dtype=complex)
        c_t[~known] = null_rows[: np.count_nonzero(~known)]
    b = (w * eph) @ w.conj().T
    s = (w * phases) @ vh
    c = w @ c_t
    m1 = u22 @ c_t.conj().T
    m2 = u21 @ (vh.conj().T * np.conj(phases))
    a_t = np.empty((m, m), dtype=complex)
    for j in range(m):
        if sig[j] >= np.sqrt(0.5):
            a_t[:, j] = 2.0 * m1[:, j] / (1.0 + eph[j])
        else:
            a_t[:, j] = 2.0 * m2[:, j] / (1.0 - eph[j])
    a = a_t @ w.conj().T
    return ZXZFactors(a, b, c, s, int(np.round(np.log2(n))))
