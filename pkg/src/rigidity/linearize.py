"""Linearize collinear ground-state constraints into a rigidity polynomial.

Spins are parameterized as ``(p, q) -> (cos q sqrt(1-p^2), sin q sqrt(1-p^2), p)``
around a collinear state along the x axis (``p = 0``, ``q`` in ``{0, pi}``).
At such a state

* ``dS/dp = (0, 0, 1)`` regardless of the spin orientation, and
* ``dS/dq = (0, cos q, 0) = (0, spin_sign, 0)``.

A vanishing-sum constraint ``sum_t coeff_t S_t = 0`` therefore yields two
linear rows: an in-plane row with weights ``coeff * spin_sign`` on the
``dq`` variables and an out-of-plane row with weights ``coeff`` on the ``dp``
variables.  The x component is stationary to first order.

Ordering convention
-------------------
columns: sublattice-major, ``(dq, dp)`` minor -> ``[q0, p0, q1, p1, ...]``
rows:    family-major, ``(in-plane, out-of-plane)`` minor.

:func:`channel_major_order` gives the permutation to the channel-major layout
``[all in-plane rows, all out-of-plane rows] x [all dq, all dp]``, which is
the block layout commonly written down by hand.
"""

from __future__ import annotations

import numpy as np

from .model import ModelInvariantError, SpinModel, validate
from .polynomial import RigidityPolynomial


def linearize_collinear(model: SpinModel) -> RigidityPolynomial:
    errors = [d for d in validate(model) if d.level == "error"]
    if errors:
        raise ModelInvariantError(errors)
    n_cols = 2 * model.sublattices
    n_rows = 2 * model.n_families
    coeffs: dict[tuple[int, ...], np.ndarray] = {}
    for f, fam in enumerate(model.constraints):
        row_in, row_out = 2 * f, 2 * f + 1
        for term in fam.terms:
            mat = coeffs.setdefault(tuple(term.offset), np.zeros((n_rows, n_cols)))
            col_q, col_p = 2 * term.sublattice, 2 * term.sublattice + 1
            mat[row_in, col_q] += term.coeff * term.spin_sign
            mat[row_out, col_p] += term.coeff
    return RigidityPolynomial.from_coeffs(n_rows, n_cols, model.dim, coeffs)


def channel_major_order(n_families: int, n_sublattices: int) -> tuple[list[int], list[int]]:
    """Row and column orders mapping the interleaved layout to channel-major.

    Use as ``r.permute(*channel_major_order(F, S))``.
    """
    rows = [2 * f for f in range(n_families)] + [2 * f + 1 for f in range(n_families)]
    cols = [2 * s for s in range(n_sublattices)] + [2 * s + 1 for s in range(n_sublattices)]
    return rows, cols


def linearize_channel_major(model: SpinModel) -> RigidityPolynomial:
    r = linearize_collinear(model)
    return r.permute(*channel_major_order(model.n_families, model.sublattices))
