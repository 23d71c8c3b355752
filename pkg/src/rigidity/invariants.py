"""Numerical winding diagnostics for square rigidity matrices.

These are computable diagnostics (determinant windings along closed loops and
signs at time-reversal invariant momenta), not complete invariants of the
equivariant classes in ``d >= 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polynomial import RigidityPolynomial, TWO_PI
from .spectral import DEFAULT_RANK_TOL, singular_values
from .symmetry import SymmetryClass, detect_class, trims

MIN_RESOLUTION = 16
MAX_RESOLUTION = 2 ** 14
MAX_STEP = np.pi / 2
INTEGER_TOL = 1e-3


class GapClosureError(ArithmeticError):
    pass


class ResolutionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LoopSpec:
    """A closed loop on the torus.

    Either an axis cycle (``axis`` set, ``base`` the fixed point the cycle
    passes through) or an explicit polyline ``points`` whose first and last
    vertices agree modulo ``2 pi``.
    """

    axis: int | None = None
    base: tuple[float, ...] | None = None
    points: tuple[tuple[float, ...], ...] | None = None
    resolution: int = 256

    def __post_init__(self):
        if self.resolution < MIN_RESOLUTION:
            raise ValueError(f"loop resolution must be >= {MIN_RESOLUTION}")
        if (self.axis is None) == (self.points is None):
            raise ValueError("give exactly one of axis or points")
        if self.points is not None:
            p = np.asarray(self.points, dtype=float)
            if len(p) < 2:
                raise ValueError("a polyline loop needs at least two vertices")
            gap = p[-1] - p[0]
            if not np.allclose(gap / TWO_PI, np.round(gap / TWO_PI), atol=1e-9):
                raise ValueError("polyline loop is not closed modulo 2 pi")

    @classmethod
    def axis_cycle(cls, axis: int, base, resolution: int = 256) -> "LoopSpec":
        return cls(axis=axis, base=tuple(float(v) for v in base), resolution=resolution)

    @classmethod
    def parse(cls, text: str, dim: int, resolution: int = 256) -> "LoopSpec":
        """Parse ``"axis=0;fixed=pi"`` or ``"points=0,0|3.14,0|6.28,0"``."""
        fields = dict(part.split("=", 1) for part in text.replace(" ", "").split(";") if part)
        if "axis" in fields:
            axis = int(fields["axis"])
            if not 0 <= axis < dim:
                raise ValueError(f"axis {axis} out of range for d={dim}")
            fixed = [_parse_angle(v) for v in fields.get("fixed", "0").split(",")]
            if len(fixed) == 1:
                fixed = fixed * dim
            elif len(fixed) == dim - 1:
                fixed = fixed[:axis] + [0.0] + fixed[axis:]
            elif len(fixed) != dim:
                raise ValueError("fixed needs 1, d-1 or d components")
            fixed[axis] = 0.0
            return cls.axis_cycle(axis, fixed, resolution)
        if "points" in fields:
            pts = tuple(tuple(_parse_angle(v) for v in p.split(",")) for p in fields["points"].split("|"))
            if any(len(p) != dim for p in pts):
                raise ValueError("every loop vertex needs d components")
            return cls(points=pts, resolution=resolution)
        raise ValueError(f"cannot parse loop spec {text!r}")

    def sample(self, dim: int, resolution: int | None = None) -> np.ndarray:
        """Momenta along the loop, ``resolution + 1`` points, last equal to first mod 2 pi."""
        n = resolution or self.resolution
        if self.axis is not None:
            base = np.asarray(self.base if self.base is not None else np.zeros(dim), dtype=float)
            if len(base) != dim:
                raise ValueError("loop base point has wrong dimension")
            t = np.linspace(0.0, TWO_PI, n + 1)
            ks = np.repeat(base[None, :], n + 1, axis=0)
            ks[:, self.axis] = base[self.axis] + t
            return ks
        p = np.asarray(self.points, dtype=float)
        if p.shape[1] != dim:
            raise ValueError("loop vertices have wrong dimension")
        seg = np.linalg.norm(np.diff(p, axis=0), axis=1)
        s = np.concatenate([[0.0], np.cumsum(seg)])
        u = np.linspace(0.0, s[-1], n + 1)
        return np.stack([np.interp(u, s, p[:, j]) for j in range(dim)], axis=1)


def _parse_angle(tok: str) -> float:
    tok = tok.strip().lower()
    sign = -1.0 if tok.startswith("-") else 1.0
    tok = tok.lstrip("+-")
    if tok.endswith("pi"):
        head = tok[:-2].rstrip("*")
        if "/" in head:
            num, den = head.split("/")
            return sign * (float(num) if num else 1.0) * np.pi / float(den)
        return sign * (float(head) if head else 1.0) * np.pi
    if "pi/" in tok:
        return sign * np.pi / float(tok.split("pi/")[1])
    return sign * float(tok)


def _det_phase_track(r: RigidityPolynomial, ks: np.ndarray, tol: float):
    mats = r.evaluate(ks)
    s = singular_values(mats)
    smin, smax = s[:, -1], s[:, 0].max()
    if smax == 0 or np.any(smin <= tol * smax):
        i = int(np.argmin(smin))
        raise GapClosureError(f"gap closure on cycle at k={ks[i].tolist()} (sigma_min={smin[i]:.3e})")
    det = np.linalg.det(mats)
    return np.angle(det[1:] / det[:-1])


def det_winding(r: RigidityPolynomial, loop: LoopSpec, tol: float = DEFAULT_RANK_TOL) -> int:
    """Winding number of ``det r~(k)`` around ``loop``.

    The sampling is refined (doubling up to 2**14 samples) until every phase
    increment is below pi/2.
    """
    if r.rows != r.cols:
        raise ValueError(f"determinant winding needs a square matrix, got {r.rows}x{r.cols}")
    n = loop.resolution
    while True:
        inc = _det_phase_track(r, loop.sample(r.dim, n), tol)
        if np.max(np.abs(inc)) < MAX_STEP:
            break
        if n * 2 > MAX_RESOLUTION:
            raise ResolutionError(f"phase increments exceed pi/2 even at {n} samples")
        n *= 2
    w = inc.sum() / TWO_PI
    if abs(w - round(w)) > INTEGER_TOL:
        raise ResolutionError(f"winding {w:.6f} is not close to an integer")
    return int(round(w))


def cycle_windings(r: RigidityPolynomial, resolution: int = 256, basepoint=None,
                   tol: float = DEFAULT_RANK_TOL) -> tuple[int, ...]:
    """Determinant windings along the ``d`` axis cycles through the base point (default 0)."""
    base = np.zeros(r.dim) if basepoint is None else np.asarray(basepoint, dtype=float)
    return tuple(det_winding(r, LoopSpec.axis_cycle(j, base, resolution), tol) for j in range(r.dim))


def half_cycle_windings(r: RigidityPolynomial, axis: int, basepoint=None, resolution: int = 256,
                        tol: float = DEFAULT_RANK_TOL) -> tuple[float, float]:
    """Phase change of ``det r~`` (in turns) over the two halves of an axis cycle."""
    base = np.zeros(r.dim) if basepoint is None else np.asarray(basepoint, dtype=float)
    ks = LoopSpec.axis_cycle(axis, base, resolution).sample(r.dim)
    inc = _det_phase_track(r, ks, tol)
    half = resolution // 2
    return float(inc[:half].sum() / TWO_PI), float(inc[half:].sum() / TWO_PI)


def trim_signs(r: RigidityPolynomial, tol: float = DEFAULT_RANK_TOL) -> dict[tuple[float, ...], int]:
    """Sign of the (real) 1x1 BDI rigidity matrix at each TRIM."""
    if r.shape != (1, 1):
        raise ValueError(f"TRIM signs need a 1x1 matrix, got {r.rows}x{r.cols}")
    if detect_class(r).symclass is not SymmetryClass.AIII_BDI:
        raise ValueError("TRIM signs need symmetry class AIII/BDI")
    out = {}
    for t in trims(r.dim):
        v = complex(r.evaluate(t)[0, 0])
        if abs(v) <= tol:
            raise GapClosureError(f"r vanishes at TRIM {t}")
        out[t] = 1 if v.real > 0 else -1
    return out
