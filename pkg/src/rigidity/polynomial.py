"""Matrix-valued Laurent polynomials on the Brillouin torus.

A translation-invariant rigidity operator is fully described by finitely many
real-space coefficient matrices ``r(x)``, ``x`` in ``Z^d``.  Its momentum-space
form is the trigonometric sum::

    r~(k) = sum_x r(x) exp(i k.x)

:class:`RigidityPolynomial` stores that coefficient map sparsely and evaluates
it pointwise or on batches of momenta.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

TWO_PI = 2.0 * np.pi

Offset = tuple[int, ...]


def reduce_momentum(k):
    """Map momenta componentwise into the half-open interval (-pi, pi]."""
    k = np.asarray(k, dtype=float)
    red = np.remainder(k + np.pi, TWO_PI) - np.pi
    # remainder lands on [-pi, pi); fold the left end over to +pi
    return np.where(red <= -np.pi, red + TWO_PI, red)


@dataclass(frozen=True, eq=False)
class RigidityPolynomial:
    """Sparse map ``offset -> complex (rows x cols) matrix``.

    Construct through :meth:`from_coeffs` to get a normalized support (no
    all-zero matrices) and validated shapes.
    """

    rows: int
    cols: int
    dim: int
    coeffs: Mapping[Offset, np.ndarray]

    @classmethod
    def from_coeffs(cls, rows: int, cols: int, dim: int, coeffs) -> "RigidityPolynomial":
        if rows < 1 or cols < 1 or dim < 1:
            raise ValueError(f"rows, cols and dim must be >= 1, got {rows}, {cols}, {dim}")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Offset, np.ndarray] = {}
        for offset, mat in items:
            off = tuple(int(v) for v in offset)
            if len(off) != dim:
                raise ValueError(f"offset {off} has length {len(off)}, expected {dim}")
            mat = np.array(mat, dtype=complex)
            if mat.shape != (rows, cols):
                raise ValueError(f"coefficient at {off} has shape {mat.shape}, expected {(rows, cols)}")
            if off in acc:
                acc[off] = acc[off] + mat
            else:
                acc[off] = mat
        normalized = {}
        for off in sorted(acc):
            mat = acc[off]
            if np.any(mat != 0):
                mat.setflags(write=False)
                normalized[off] = mat
        return cls(rows, cols, dim, normalized)

    @classmethod
    def zero(cls, rows: int, cols: int, dim: int) -> "RigidityPolynomial":
        return cls.from_coeffs(rows, cols, dim, {})

    @classmethod
    def constant(cls, matrix, dim: int) -> "RigidityPolynomial":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
        return cls.from_coeffs(matrix.shape[0], matrix.shape[1], dim, {(0,) * dim: matrix})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def offsets(self) -> list[Offset]:
        return list(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, RigidityPolynomial):
            return NotImplemented
        if (self.rows, self.cols, self.dim) != (other.rows, other.cols, other.dim):
            return False
        if set(self.coeffs) != set(other.coeffs):
            return False
        return all(np.array_equal(self.coeffs[x], other.coeffs[x]) for x in self.coeffs)

    def __repr__(self):
        return f"RigidityPolynomial({self.rows}x{self.cols}, d={self.dim}, {len(self.coeffs)} offsets)"

    def _check_k(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        if k.shape[-1:] != (self.dim,):
            raise ValueError(f"momentum has trailing dimension {k.shape[-1:]} but polynomial has d={self.dim}")
        return k

    def evaluate(self, k, strict: bool = False) -> np.ndarray:
        """Evaluate ``r~(k)``.

        ``k`` may be a single momentum of length ``dim`` or a batch of shape
        ``(..., dim)``; the result then has shape ``(..., rows, cols)``.
        With ``strict=True`` every entry is accumulated with ``math.fsum``
        (single momenta only).
        """
        k = reduce_momentum(self._check_k(k))
        batch = k.shape[:-1]
        if not self.coeffs:
            return np.zeros(batch + (self.rows, self.cols), dtype=complex)
        offs = np.array(list(self.coeffs), dtype=float)            # (T, d)
        mats = np.stack(list(self.coeffs.values()))                  # (T, M, N)
        phases = np.exp(1j * (k @ offs.T))                            # (..., T)
        if strict:
            if batch:
                raise ValueError("strict evaluation takes a single momentum")
            terms = phases[:, None, None] * mats
            out = np.empty((self.rows, self.cols), dtype=complex)
            for i in range(self.rows):
                for j in range(self.cols):
                    col = terms[:, i, j]
                    out[i, j] = complex(math.fsum(col.real), math.fsum(col.imag))
            return out
        return np.tensordot(phases, mats, axes=([-1], [0]))

    __call__ = evaluate

    def dagger(self) -> "RigidityPolynomial":
        """Pointwise adjoint: ``x -> r(-x)^dagger``."""
        new = {tuple(-v for v in off): mat.conj().T for off, mat in self.coeffs.items()}
        return RigidityPolynomial.from_coeffs(self.cols, self.rows, self.dim, new)

    def conj(self) -> "RigidityPolynomial":
        """Coefficientwise complex conjugate (``k -> conj(r~(-k))``)."""
        return RigidityPolynomial.from_coeffs(
            self.rows, self.cols, self.dim, {off: m.conj() for off, m in self.coeffs.items()})

    def restrict_block(self, rows: Sequence[int] | range | slice, cols: Sequence[int] | range | slice) -> "RigidityPolynomial":
        """Sub-polynomial on the given row/column index sets (0-based)."""
        ridx = _as_indices(rows, self.rows, "row")
        cidx = _as_indices(cols, self.cols, "column")
        new = {off: m[np.ix_(ridx, cidx)] for off, m in self.coeffs.items()}
        return RigidityPolynomial.from_coeffs(len(ridx), len(cidx), self.dim, new)

    def permute(self, row_order: Sequence[int], col_order: Sequence[int]) -> "RigidityPolynomial":
        """Return the polynomial whose row ``i`` is old row ``row_order[i]`` (same for columns)."""
        ridx = _as_indices(row_order, self.rows, "row")
        cidx = _as_indices(col_order, self.cols, "column")
        if sorted(ridx) != list(range(self.rows)) or sorted(cidx) != list(range(self.cols)):
            raise ValueError("row_order and col_order must be permutations")
        return self.restrict_block(ridx, cidx)

    def scale(self, factor: complex) -> "RigidityPolynomial":
        return RigidityPolynomial.from_coeffs(
            self.rows, self.cols, self.dim, {off: factor * m for off, m in self.coeffs.items()})

    def __add__(self, other: "RigidityPolynomial") -> "RigidityPolynomial":
        self._check_same_space(other, (self.rows, self.cols))
        items = list(self.coeffs.items()) + list(other.coeffs.items())
        return RigidityPolynomial.from_coeffs(self.rows, self.cols, self.dim, items)

    def __matmul__(self, other: "RigidityPolynomial") -> "RigidityPolynomial":
        """Pointwise matrix product, i.e. convolution of the coefficient maps."""
        if self.dim != other.dim or self.cols != other.rows:
            raise ValueError(f"cannot multiply {self!r} by {other!r}")
        items = []
        for xa, ma in self.coeffs.items():
            for xb, mb in other.coeffs.items():
                items.append((tuple(a + b for a, b in zip(xa, xb)), ma @ mb))
        return RigidityPolynomial.from_coeffs(self.rows, other.cols, self.dim, items)

    def _check_same_space(self, other, shape):
        if other.dim != self.dim or other.shape != shape:
            raise ValueError(f"shape mismatch: {self!r} vs {other!r}")

    def max_imag(self) -> float:
        """Largest Frobenius norm of an imaginary part over all coefficients."""
        return max((float(np.linalg.norm(m.imag)) for m in self.coeffs.values()), default=0.0)

    # -- serialization --------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "dim": self.dim,
            "coeffs": [
                {
                    "offset": list(off),
                    "matrix_re": _clean(m.real).tolist(),
                    "matrix_im": _clean(m.imag).tolist(),
                }
                for off, m in self.coeffs.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1)

    @classmethod
    def from_json_obj(cls, obj) -> "RigidityPolynomial":
        if isinstance(obj, list):
            entries = obj
            if not entries:
                raise ValueError("a bare coefficient array must be nonempty to infer its shape")
            shape = np.asarray(entries[0]["matrix_re"]).shape
            rows, cols, dim = shape[0], shape[1], len(entries[0]["offset"])
        else:
            entries = obj["coeffs"]
            rows, cols, dim = int(obj["rows"]), int(obj["cols"]), int(obj["dim"])
        items = []
        for e in entries:
            re = np.asarray(e["matrix_re"], dtype=float)
            im = np.asarray(e.get("matrix_im", np.zeros_like(re)), dtype=float)
            items.append((e["offset"], re + 1j * im))
        return cls.from_coeffs(rows, cols, dim, items)

    @classmethod
    def from_json(cls, text: str) -> "RigidityPolynomial":
        return cls.from_json_obj(json.loads(text))


def _clean(a: np.ndarray) -> np.ndarray:
    # turn -0.0 into 0.0 so serialized files are stable
    return a + 0.0


def _as_indices(sel, size: int, what: str) -> list[int]:
    if isinstance(sel, slice):
        return list(range(size))[sel]
    idx = [int(i) for i in sel]
    for i in idx:
        if not 0 <= i < size:
            raise IndexError(f"{what} index {i} out of range for size {size}")
    return idx


def grid_momenta(dim: int, n: int | Iterable[int]) -> np.ndarray:
    """Uniform grid on the torus with points in (-pi, pi].

    Along an axis with ``n`` points the values are ``-pi + 2 pi (j+1)/n``,
    so ``pi`` is always included and ``0`` is included for even ``n``.
    Returns an array of shape ``(prod(n), dim)`` in lexicographic order.
    """
    ns = [int(n)] * dim if np.isscalar(n) else [int(v) for v in n]
    if len(ns) != dim:
        raise ValueError("need one resolution per axis")
    if min(ns) < 2:
        raise ValueError("grid needs at least 2 points per axis")
    axes = [-np.pi + TWO_PI * (np.arange(m) + 1) / m for m in ns]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=-1)
