"""Classification lookup for flattened rigidity matrices.

The classifying set for a gapped rigidity matrix with ``m = max(M, N)`` and
Maxwell index ``nu`` in dimension ``d`` is the set of based equivariant
homotopy classes ``[(I^d, dI^d), (V_{m-|nu|}(C^m), E)]``.  :func:`classify`
resolves a query by a fixed precedence of rules:

1. ``degenerate-target``   ``n = m - |nu| = 0``: the target is a point.
2. ``stable-triviality``   equivariant class and ``|nu| >= ceil(d/2)``: trivial.
3. ``circle-target``       AIII/BDI with ``m = 1`` (target ``U(1)``): ``Z`` for every ``d``.
4. ``table``               a stored table cell (possibly ``*``).
5. ``circle-homotopy``     AIII with ``m = 1``: ``pi_d(S^1) = 0`` for ``d >= 2``.
   ``connectivity``        AIII fallback, ``V_n(C^m)`` is ``2|nu|``-connected:
                           ``0`` for ``d <= 2|nu|``, ``Z`` at ``d = 2|nu| + 1``.
6. otherwise an error.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .abgroup import AbGroup
from .polynomial import RigidityPolynomial
from .spectral import maxwell_index
from .symmetry import DEFAULT_TOL, SymmetryClass, detect_class

MAX_DIM = 6


class ClassificationError(ValueError):
    pass


@dataclass(frozen=True)
class ClassificationQuery:
    symclass: SymmetryClass
    abs_nu: int
    d: int
    m: int

    def __post_init__(self):
        if self.abs_nu < 0:
            raise ClassificationError("abs_nu must be nonnegative")
        if self.m < 1:
            raise ClassificationError("m must be >= 1")
        if not 1 <= self.d:
            raise ClassificationError("d must be >= 1")
        if self.d > MAX_DIM:
            raise ClassificationError(f"d={self.d} exceeds the tabulated range 1..{MAX_DIM}")
        if self.m < self.abs_nu:
            raise ClassificationError(f"m={self.m} < |nu|={self.abs_nu}: no frame of negative size")
        if self.symclass is SymmetryClass.AIII_CII:
            if self.abs_nu % 2:
                raise ClassificationError("N and M even forces nu even for AIII/CII")
            if self.m % 2:
                raise ClassificationError("AIII/CII needs even m")

    @property
    def n(self) -> int:
        return self.m - self.abs_nu


@dataclass(frozen=True)
class Verdict:
    """A group, the unevaluated marker ``*``, or a degenerate (point) target."""

    kind: str                       # "group" | "star" | "degenerate"
    group: AbGroup | None
    rule: str
    note: str

    def __str__(self):
        if self.kind == "star":
            return "*"
        if self.kind == "degenerate":
            return "0 (degenerate)"
        return str(self.group)

    @property
    def is_trivial(self) -> bool:
        return self.kind == "degenerate" or (self.kind == "group" and self.group.is_trivial)


def _match_nu(spec, nu: int) -> bool:
    if isinstance(spec, int):
        return nu == spec
    return nu >= int(spec[2:])


def _match_m(spec: str, m: int) -> bool:
    if spec == "any":
        return True
    if spec.startswith(">="):
        return m >= int(spec[2:])
    return m == int(spec)


@lru_cache(maxsize=1)
def load_tables() -> dict:
    text = resources.files("rigidity.data").joinpath("classification.json").read_text(encoding="utf-8")
    return json.loads(text)


def table_cells(symclass: SymmetryClass) -> list[dict]:
    return load_tables()["tables"][symclass.value]


def lookup_cell(q: ClassificationQuery) -> dict | None:
    hits = [c for c in table_cells(q.symclass)
            if c["d"] == q.d and _match_nu(c["nu"], q.abs_nu) and _match_m(c["m"], q.m)]
    if len(hits) > 1:
        raise ClassificationError(f"ambiguous table data for {q}")
    return hits[0] if hits else None


def connectivity_fallback(abs_nu: int, d: int) -> AbGroup | None:
    """``pi_d(V_n(C^m))`` from ``2|nu|``-connectivity, when it decides the group."""
    if 1 <= d <= 2 * abs_nu:
        return AbGroup()
    if d == 2 * abs_nu + 1:
        return AbGroup.free(1)
    return None


def _verdict_from_value(value, rule, note) -> Verdict:
    if value == "*":
        return Verdict("star", None, rule, note)
    return Verdict("group", AbGroup.parse(value), rule, note)


def classify(q: ClassificationQuery) -> Verdict:
    where = f"{q.symclass.label} |nu|={q.abs_nu} d={q.d} m={q.m}"
    if q.n == 0:
        return Verdict("degenerate", AbGroup(), "degenerate-target",
                       f"{where}: n = 0, target V_0 is a point")
    if q.symclass.equivariant and q.abs_nu >= math.ceil(q.d / 2):
        return Verdict("group", AbGroup(), "stable-triviality",
                       f"{where}: |nu| >= ceil(d/2) gives the trivial set")
    if q.symclass is SymmetryClass.AIII_BDI and q.m == 1:
        return Verdict("group", AbGroup.free(1), "circle-target",
                       f"{where}: equivariant maps into U(1) with real structure, Z for all d")
    cell = lookup_cell(q)
    if cell is not None and cell["value"] is not None:
        return _verdict_from_value(
            cell["value"], "table",
            f"{where}: table cell ({cell['source']}; nu={cell['nu']}, d={cell['d']}, m={cell['m']})")
    if q.symclass is SymmetryClass.AIII:
        if q.m == 1:
            g = AbGroup.free(1) if q.d == 1 else AbGroup()
            return Verdict("group", g, "circle-homotopy", f"{where}: pi_d(S^1)")
        g = connectivity_fallback(q.abs_nu, q.d)
        if g is not None:
            return Verdict("group", g, "connectivity",
                           f"{where}: derived from 2|nu|-connectivity of V_n(C^m), not a stored cell")
    raise ClassificationError(f"{where}: outside tabulated range")


# -- model-level report ---------------------------------------------------


@dataclass
class BlockReport:
    rows: list[int]
    cols: list[int]
    symclass: SymmetryClass
    nu: int
    d: int
    m: int
    verdict: Verdict | None
    error: str | None = None
    residuals: dict = field(default_factory=dict)

    @property
    def abs_nu(self) -> int:
        return abs(self.nu)

    def summary(self) -> str:
        head = f"({self.symclass.label}, |nu|={self.abs_nu}, d={self.d}, m={self.m})"
        tail = str(self.verdict) if self.verdict is not None else f"unresolved: {self.error}"
        return f"{head} -> {tail}"


@dataclass
class ModelClassification:
    whole: BlockReport
    blocks: list[BlockReport]
    isolated_rows: list[int]
    isolated_cols: list[int]


def independent_blocks(r: RigidityPolynomial, tol: float = 0.0) -> tuple[list[tuple[list[int], list[int]]], list[int], list[int]]:
    """Connected components of the row/column support graph across all coefficients.

    Returns ``(blocks, isolated_rows, isolated_cols)``; blocks are ordered by
    their smallest row index.
    """
    support = np.zeros((r.rows, r.cols), dtype=bool)
    for m in r.coeffs.values():
        support |= np.abs(m) > tol
    ri, ci = np.nonzero(support)
    n = r.rows + r.cols
    g = coo_matrix((np.ones(len(ri)), (ri, r.rows + ci)), shape=(n, n))
    _, labels = connected_components(g, directed=False)
    comps: dict[int, tuple[list[int], list[int]]] = {}
    for i in range(r.rows):
        comps.setdefault(labels[i], ([], []))[0].append(i)
    for j in range(r.cols):
        comps.setdefault(labels[r.rows + j], ([], []))[1].append(j)
    blocks = [c for c in comps.values() if c[0] and c[1]]
    blocks.sort(key=lambda c: c[0][0])
    iso_rows = sorted(i for c in comps.values() if not c[1] for i in c[0])
    iso_cols = sorted(j for c in comps.values() if not c[0] for j in c[1])
    return blocks, iso_rows, iso_cols


def _block_report(r: RigidityPolynomial, rows, cols, tol) -> BlockReport:
    cls = detect_class(r, tol)
    nu = maxwell_index(r)
    m = max(r.rows, r.cols)
    verdict, err = None, None
    try:
        verdict = classify(ClassificationQuery(cls.symclass, abs(nu), r.dim, m))
    except ClassificationError as exc:
        err = str(exc)
    return BlockReport(list(rows), list(cols), cls.symclass, nu, r.dim, m, verdict, err, cls.residuals)


def classify_model(r: RigidityPolynomial, tol: float = DEFAULT_TOL) -> ModelClassification:
    """Class, Maxwell index and verdict for the whole matrix and for each independent block."""
    whole = _block_report(r, range(r.rows), range(r.cols), tol)
    blocks, iso_r, iso_c = independent_blocks(r)
    reports = [_block_report(r.restrict_block(rows, cols), rows, cols, tol) for rows, cols in blocks]
    return ModelClassification(whole, reports, iso_r, iso_c)
