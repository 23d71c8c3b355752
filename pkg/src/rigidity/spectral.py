"""Pointwise singular-value analytics of rigidity matrices.

Singular values come from a one-sided Jacobi SVD that works on whole batches
of small complex matrices at once (all model matrices are at most
16 x 16).  The pair sweep order is fixed, so results are reproducible bit for
bit on a given platform.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .polynomial import RigidityPolynomial, grid_momenta

DEFAULT_RANK_TOL = 1e-9
_EPS = np.finfo(float).eps


class RankDeficientError(ArithmeticError):
    """Flattening or retraction requested on the zero locus."""

    def __init__(self, sigma_min: float, tol: float):
        super().__init__(
            f"rank-deficient; flattening undefined on zero locus (sigma_min={sigma_min:.3e}, tol={tol:.1e})")
        self.sigma_min = sigma_min


def jacobi_svd(a, max_sweeps: int = 80):
    """Thin SVD ``a = U diag(s) Vh`` of a matrix or a stack of matrices.

    Returns ``(U, s, Vh)`` with ``s`` sorted in descending order and shapes
    ``(..., M, k)``, ``(..., k)``, ``(..., k, N)`` where ``k = min(M, N)``.
    Columns of ``U`` belonging to zero singular values are completed to an
    orthonormal set.
    """
    a = np.asarray(a, dtype=complex)
    wide = a.shape[-2] < a.shape[-1]
    if wide:
        a = np.conj(np.swapaxes(a, -1, -2))
    m, n = a.shape[-2:]
    batch = a.shape[:-2]
    B = a.reshape((-1, m, n)).copy()
    tol = max(m, n) * _EPS
    # scale each matrix to unit max entry so products of column norms cannot underflow
    scale = np.max(np.abs(B), axis=(1, 2))
    scale = np.where(scale > 0, scale, 1.0)
    B /= scale[:, None, None]
    floor = tol * np.linalg.norm(B, axis=(1, 2))
    V = np.broadcast_to(np.eye(n, dtype=complex), B.shape[:1] + (n, n)).copy()

    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                bp, bq = B[:, :, p], B[:, :, q]
                alpha = np.einsum("bi,bi->b", bp.conj(), bp).real
                beta = np.einsum("bi,bi->b", bq.conj(), bq).real
                gamma = np.einsum("bi,bi->b", bp.conj(), bq)
                g = np.abs(gamma)
                act = g > tol * np.sqrt(alpha * beta)
                # a column at roundoff level carries no information; rotating it never settles
                act &= (np.sqrt(alpha) > floor) & (np.sqrt(beta) > floor)
                if not act.any():
                    continue
                rotated = True
                g_safe = np.where(act, g, 1.0)
                ph = np.where(act, gamma / g_safe, 1.0)
                zeta = (beta - alpha) / (2.0 * g_safe)
                t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = np.where(act, 1.0 / np.sqrt(1.0 + t * t), 1.0)
                s = np.where(act, c * t, 0.0)
                cph = ph.conj()
                for M_ in (B, V):
                    xp = M_[:, :, p].copy()
                    xq = M_[:, :, q] * cph[:, None]
                    M_[:, :, p] = c[:, None] * xp - s[:, None] * xq
                    M_[:, :, q] = s[:, None] * xp + c[:, None] * xq
        if not rotated:
            break
    else:
        raise RuntimeError("Jacobi SVD did not converge")

    sig = np.linalg.norm(B, axis=1)                     # (b, n)
    order = np.argsort(-sig, axis=1, kind="stable")
    sig = np.take_along_axis(sig, order, axis=1)
    B = np.take_along_axis(B, order[:, None, :], axis=2)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    U = np.zeros_like(B)
    for b in range(B.shape[0]):
        U[b] = _left_vectors(B[b], sig[b])
    sig = sig * scale[:, None]

    U = U.reshape(batch + (m, n))
    sig = sig.reshape(batch + (n,))
    V = V.reshape(batch + (n, n))
    if wide:
        # a^H = U s V^H  =>  a = V s U^H
        return V, sig, np.conj(np.swapaxes(U, -1, -2))
    return U, sig, np.conj(np.swapaxes(V, -1, -2))


def _left_vectors(B: np.ndarray, sig: np.ndarray) -> np.ndarray:
    m, n = B.shape
    smax = sig[0] if n else 0.0
    good = sig > max(smax, 1.0) * m * _EPS * 4 if smax > 0 else np.zeros(n, bool)
    U = np.zeros((m, n), dtype=complex)
    U[:, good] = B[:, good] / sig[good]
    if good.all():
        return U
    # Gram-Schmidt completion against the standard basis
    basis = [U[:, j] for j in range(n) if good[j]]
    fill = []
    for e in np.eye(m, dtype=complex):
        v = e.copy()
        for u in basis + fill:
            v -= np.vdot(u, v) * u
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            fill.append(v / nv)
        if len(fill) == int((~good).sum()):
            break
    U[:, ~good] = np.array(fill).T
    return U


def singular_values(a) -> np.ndarray:
    return jacobi_svd(a)[1]


def numerical_rank(sigmas, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Count singular values above ``tol`` relative to the largest one."""
    sigmas = np.asarray(sigmas, dtype=float)
    if sigmas.shape[-1] == 0:
        return np.zeros(sigmas.shape[:-1], dtype=int)
    thresh = tol * sigmas[..., :1]
    return np.sum(sigmas > thresh, axis=-1)


@dataclass(frozen=True)
class SingularSpectrum:
    k: tuple[float, ...]
    sigmas: tuple[float, ...]
    rank: int


def singular_spectrum(r: RigidityPolynomial, k, tol: float = DEFAULT_RANK_TOL) -> SingularSpectrum:
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = singular_values(r.evaluate(k))
    return SingularSpectrum(tuple(float(v) for v in np.ravel(k)), tuple(float(v) for v in s),
                            int(numerical_rank(s, tol)))


def maxwell_index(r: RigidityPolynomial, samples: int = 10, tol: float = DEFAULT_RANK_TOL,
                  seed: int = 0) -> int:
    """Maxwell counting index ``N - M``, checked against ``nul r - nul r^dagger``.

    The nullities of ``r~(k)`` and of ``r~(k)^dagger`` are computed from two
    independent SVDs at ``samples`` random momenta.
    """
    nu = r.cols - r.rows
    rng = np.random.default_rng(seed)
    ks = rng.uniform(-np.pi, np.pi, size=(max(samples, 10), r.dim))
    rk = numerical_rank(singular_values(r.evaluate(ks)), tol)
    rk_adj = numerical_rank(singular_values(r.dagger().evaluate(ks)), tol)
    diff = (r.cols - rk) - (r.rows - rk_adj)
    bad = np.nonzero(diff != nu)[0]
    if bad.size:
        raise RuntimeError(
            f"rank-nullity identity violated at k={ks[bad[0]].tolist()}: "
            f"nul r - nul r^dagger = {int(diff[bad[0]])}, expected {nu}")
    return nu


@dataclass
class GapMap:
    """Singular spectra on a momentum grid; momenta in radians."""

    ks: np.ndarray          # (P, d)
    sigmas: np.ndarray      # (P, n)
    ranks: np.ndarray       # (P,)

    @property
    def min_sigma(self) -> np.ndarray:
        if self.sigmas.shape[1] == 0:
            return np.zeros(len(self.ks))
        return self.sigmas[:, -1]

    @property
    def max_rank(self) -> int:
        return int(self.ranks.max()) if len(self.ranks) else 0

    def header(self) -> list[str]:
        d, n = self.ks.shape[1], self.sigmas.shape[1]
        return [f"k{i + 1}" for i in range(d)] + [f"sigma{i + 1}" for i in range(n)] + ["rank"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# momenta k in radians\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        for k, s, rk in zip(self.ks, self.sigmas, self.ranks):
            w.writerow([f"{v:.12e}" for v in k] + [f"{v:.12e}" for v in s] + [int(rk)])
        return buf.getvalue()


def gap_map(r: RigidityPolynomial, grid, tol: float = DEFAULT_RANK_TOL) -> GapMap:
    """Singular values and ranks of ``r~`` on a uniform grid with points in (-pi, pi]."""
    ks = grid_momenta(r.dim, grid)
    s = singular_values(r.evaluate(ks))
    return GapMap(ks, s, numerical_rank(s, tol))


def zero_locus(r: RigidityPolynomial, grid, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Grid momenta where the rank drops below its maximum over the grid."""
    gm = gap_map(r, grid, tol)
    return gm.ks[gm.ranks < gm.max_rank]


@dataclass(frozen=True)
class StiefelFrame:
    """Orthonormal frame ``Q`` (``m x n``, ``Q^dagger Q = I``).

    ``adjoint`` records that the input matrix was wide (``M < N``) and ``Q``
    is the flattened adjoint; :meth:`as_matrix` returns the flattened matrix
    in the original ``M x N`` orientation.
    """

    Q: np.ndarray
    adjoint: bool = False

    def as_matrix(self) -> np.ndarray:
        return self.Q.conj().T if self.adjoint else self.Q

    def orthonormality_defect(self) -> float:
        n = self.Q.shape[1]
        return float(np.linalg.norm(self.Q.conj().T @ self.Q - np.eye(n)))


def _full_rank_svd(matrix, tol):
    matrix = np.asarray(matrix, dtype=complex)
    U, s, Vh = jacobi_svd(matrix)
    smin = float(s[-1]) if s.size else 0.0
    if s.size == 0 or smin <= tol:
        raise RankDeficientError(smin, tol)
    return U, s, Vh


def flatten(matrix, tol: float = DEFAULT_RANK_TOL) -> StiefelFrame:
    """Polar factor ``U V^dagger`` of a full-rank matrix, as a Stiefel frame."""
    U, _, Vh = _full_rank_svd(matrix, tol)
    flat = U @ Vh
    if flat.shape[0] < flat.shape[1]:
        return StiefelFrame(flat.conj().T, adjoint=True)
    return StiefelFrame(flat)


def retraction_path(matrix, t: float, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Point ``U (S + t (I - S)) V^dagger`` on the straight-line singular-value flattening."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    U, s, Vh = _full_rank_svd(matrix, tol)
    return (U * (s + t * (1.0 - s))) @ Vh


def flatten_polynomial(r: RigidityPolynomial, ks, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Flattened matrices ``(P, M, N)`` at a batch of momenta (original orientation)."""
    mats = r.evaluate(np.atleast_2d(ks))
    U, s, Vh = jacobi_svd(mats)
    smin = s[:, -1]
    if np.any(smin <= tol):
        i = int(np.argmin(smin))
        raise RankDeficientError(float(smin[i]), tol)
    return U @ Vh


def spinwave_spectrum(r: RigidityPolynomial, k) -> np.ndarray:
    """Eigenvalues of ``h~(k) = r~(k)^dagger r~(k)``, descending (length ``N``)."""
    a = r.evaluate(k)
    h = a.conj().T @ a
    w = np.linalg.eigvalsh(h)[::-1]
    return np.clip(w, 0.0, None)
