"""Time-reversal equivariance of rigidity matrices.

Three classes are distinguished by the canonical time-reversal symmetry:

======== ===================================================================
AIII     no condition
AIII/BDI ``r~(-k) = conj(r~(k))``
AIII/CII ``r~(-k) = (I (x) s2) conj(r~(k)) (I (x) s2)``, ``M`` and ``N`` even
======== ===================================================================

Because ``r~(-k)`` and ``conj(r~(k))`` are both sums over ``exp(-i k.x)``,
each condition holds on the whole torus iff it holds coefficient by
coefficient.  :func:`detect_class` uses that exact criterion; grid checks
are reserved for user-supplied unitaries (:func:`verify_equivariance`).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .polynomial import RigidityPolynomial, grid_momenta

DEFAULT_TOL = 1e-10

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


class SymmetryClass(enum.Enum):
    AIII = "AIII"
    AIII_BDI = "AIII/BDI"
    AIII_CII = "AIII/CII"

    @property
    def label(self) -> str:
        return self.value

    @property
    def equivariant(self) -> bool:
        return self is not SymmetryClass.AIII

    @classmethod
    def parse(cls, text: str) -> "SymmetryClass":
        key = text.strip().upper().replace("-", "/").replace("_", "/")
        for c in cls:
            if key == c.value:
                return c
        aliases = {"BDI": cls.AIII_BDI, "CII": cls.AIII_CII}
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown symmetry class {text!r}; expected AIII, AIII/BDI or AIII/CII")


def quaternionic_j(n: int) -> np.ndarray:
    """``I_{n/2} (x) s2``."""
    if n % 2:
        raise ValueError("CII requires even M and N")
    return np.kron(np.eye(n // 2), SIGMA2)


@dataclass
class ClassReport:
    symclass: SymmetryClass
    residuals: dict[str, float] = field(default_factory=dict)

    def __str__(self):
        res = ", ".join(f"{k}={v:.3e}" for k, v in self.residuals.items())
        return f"{self.symclass.label} ({res})"


def cii_residual(r: RigidityPolynomial) -> float:
    jm, jn = quaternionic_j(r.rows), quaternionic_j(r.cols)
    return max((float(np.linalg.norm(jm @ m.conj() @ jn - m)) for m in r.coeffs.values()), default=0.0)


def detect_class(r: RigidityPolynomial, tol: float = DEFAULT_TOL) -> ClassReport:
    """Most specific class whose coefficient-level residual is within ``tol``.

    Residuals are Frobenius norms maximized over coefficients.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    res = {"bdi": r.max_imag()}
    if res["bdi"] <= tol:
        return ClassReport(SymmetryClass.AIII_BDI, res)
    if r.rows % 2 == 0 and r.cols % 2 == 0:
        res["cii"] = cii_residual(r)
        if res["cii"] <= tol:
            return ClassReport(SymmetryClass.AIII_CII, res)
    return ClassReport(SymmetryClass.AIII, res)


@dataclass(frozen=True)
class EquivarianceSpec:
    """Condition ``r~(-k) = U_M C(r~(k)) U_N^dagger`` with ``C`` conjugation if antiunitary."""

    U_M: np.ndarray
    U_N: np.ndarray
    antiunitary: bool = True

    def __post_init__(self):
        for name in ("U_M", "U_N"):
            u = np.asarray(getattr(self, name), dtype=complex)
            if u.ndim != 2 or u.shape[0] != u.shape[1]:
                raise ValueError(f"{name} must be a square matrix")
            if np.abs(u.conj().T @ u - np.eye(len(u))).max() > 1e-12:
                raise ValueError(f"{name} is not unitary")
            object.__setattr__(self, name, u)

    @classmethod
    def standard(cls, symclass: SymmetryClass, rows: int, cols: int) -> "EquivarianceSpec":
        """Spec for the standard form of a class.

        For CII the two quaternionic structures ``J = I (x) i s2`` enter as
        ``J_M conj(.) J_N^dagger``; the factors of ``i`` cancel, leaving
        ``(I (x) s2) conj(.) (I (x) s2)``.
        """
        if symclass is SymmetryClass.AIII_BDI:
            return cls(np.eye(rows), np.eye(cols), True)
        if symclass is SymmetryClass.AIII_CII:
            if rows % 2 or cols % 2:
                raise ValueError("CII requires even M and N")
            return cls(quaternionic_j(rows), quaternionic_j(cols), True)
        raise ValueError("AIII carries no equivariance condition")

    @classmethod
    def from_json_obj(cls, obj) -> "EquivarianceSpec":
        def mat(key):
            re = np.asarray(obj[key + "_re"] if key + "_re" in obj else obj[key], dtype=float)
            im = np.asarray(obj.get(key + "_im", np.zeros_like(re)), dtype=float)
            return re + 1j * im
        return cls(mat("U_M"), mat("U_N"), bool(obj.get("antiunitary", True)))


@dataclass
class EquivarianceResult:
    passed: bool
    max_residual: float
    worst_k: tuple[float, ...]

    def __bool__(self):
        return self.passed


def verify_equivariance(r: RigidityPolynomial, spec: EquivarianceSpec, grid=32,
                        tol: float = DEFAULT_TOL) -> EquivarianceResult:
    """Check the equivariance condition on a uniform grid (spectral-norm residual)."""
    if spec.U_M.shape[0] != r.rows or spec.U_N.shape[0] != r.cols:
        raise ValueError(
            f"U_M is {spec.U_M.shape[0]}x{spec.U_M.shape[0]} and U_N is {spec.U_N.shape[0]}x{spec.U_N.shape[0]}, "
            f"but r is {r.rows}x{r.cols}")
    ks = grid_momenta(r.dim, grid)
    plus = r.evaluate(ks)
    minus = r.evaluate(-ks)
    img = plus.conj() if spec.antiunitary else plus
    rhs = spec.U_M @ img @ spec.U_N.conj().T
    res = np.linalg.norm(minus - rhs, ord=2, axis=(-2, -1))
    i = int(np.argmax(res))
    worst = float(res[i])
    return EquivarianceResult(worst <= tol, worst, tuple(float(v) for v in ks[i]))


def trims(d: int) -> list[tuple[float, ...]]:
    """The ``2^d`` time-reversal invariant momenta, components in {0, pi}, lexicographic."""
    if not 1 <= d <= 6:
        raise ValueError("dimension must lie in 1..6")
    return [tuple(v) for v in itertools.product((0.0, float(np.pi)), repeat=d)]


def trim_fixed_form(r: RigidityPolynomial, trim, symclass: SymmetryClass, tol: float = DEFAULT_TOL) -> EquivarianceResult:
    """Check that ``r~`` at a TRIM lies in the fixed-point set of the class."""
    trim = tuple(float(v) for v in trim)
    if len(trim) != r.dim or any(not (v == 0.0 or np.isclose(abs(v), np.pi)) for v in trim):
        raise ValueError(f"{trim} is not a time-reversal invariant momentum")
    a = r.evaluate(trim)
    if symclass is SymmetryClass.AIII_BDI:
        res = float(np.linalg.norm(a.imag))
    elif symclass is SymmetryClass.AIII_CII:
        res = float(np.linalg.norm(quaternionic_j(r.rows) @ a.conj() @ quaternionic_j(r.cols) - a))
    else:
        raise ValueError("no fixed-point form for AIII")
    return EquivarianceResult(res <= tol, res, trim)


def block_sum(*mats) -> np.ndarray:
    """Direct sum of square or rectangular matrices."""
    mats = [np.atleast_2d(np.asarray(m, dtype=complex)) for m in mats]
    out = np.zeros((sum(m.shape[0] for m in mats), sum(m.shape[1] for m in mats)), dtype=complex)
    i = j = 0
    for m in mats:
        out[i:i + m.shape[0], j:j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out


def rotation_squared_blocks() -> tuple[np.ndarray, np.ndarray]:
    """The two 6x6 row actions ``(-s1) + (s1 (x) s1)`` and ``s1 + (-s1 (x) s1)``.

    They arise from squaring the spin-flip-plus-quarter-turn symmetry of the
    anisotropic Neel state; rows are in channel-major order.
    """
    s11 = np.kron(SIGMA1, SIGMA1)
    return block_sum(-SIGMA1, s11), block_sum(SIGMA1, -s11)


def anisotropic_rotation_specs(row_order=None, col_order=None) -> dict[str, EquivarianceSpec]:
    """Candidate rotation-derived conditions for the 12x4 anisotropic matrix.

    Returns the four sign assignments of the two 6x6 blocks, keyed
    ``"A+B"``, ``"B+A"``, ``"A+A"``, ``"B+B"``, all non-antiunitary with
    ``U_N = s1 + s1``.  ``row_order``/``col_order`` translate from
    channel-major order to another layout (as passed to
    :meth:`RigidityPolynomial.permute`).
    """
    A, B = rotation_squared_blocks()
    u_n = block_sum(SIGMA1, SIGMA1)
    out = {}
    for key, (x, y) in {"A+B": (A, B), "B+A": (B, A), "A+A": (A, A), "B+B": (B, B)}.items():
        u_m = block_sum(x, y)
        if row_order is not None:
            u_m = _conjugate_by_order(u_m, row_order)
        un = _conjugate_by_order(u_n, col_order) if col_order is not None else u_n
        out[key] = EquivarianceSpec(u_m, un, antiunitary=False)
    return out


def _conjugate_by_order(u: np.ndarray, order) -> np.ndarray:
    """Express ``u`` (acting in the reference layout) in the permuted layout.

    If ``new[i] = old[order[i]]`` then ``u_new = P u P^T`` with ``P[i, order[i]] = 1``.
    """
    order = list(order)
    return u[np.ix_(order, order)]
