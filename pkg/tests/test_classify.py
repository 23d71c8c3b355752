import math

import numpy as np
import pytest

from rigidity.abgroup import AbGroup
from rigidity.acceptance import GOLDEN_TABLES
from rigidity.classify import (ClassificationError, ClassificationQuery, classify, classify_model,
                               connectivity_fallback, independent_blocks, table_cells)
from rigidity.polynomial import RigidityPolynomial
from rigidity.symmetry import SymmetryClass

BDI, CII, AIII = SymmetryClass.AIII_BDI, SymmetryClass.AIII_CII, SymmetryClass.AIII


def q(cls, nu, d, m):
    return classify(ClassificationQuery(cls, nu, d, m))


class TestExamples:
    @pytest.mark.parametrize("m", [1, 2, 4, 7])
    def test_bdi_nu0_d2(self, m):
        assert str(q(BDI, 0, 2, m)) == "Z"

    @pytest.mark.parametrize("m", [2, 3, 5])
    def test_bdi_star(self, m):
        v = q(BDI, 0, 3, m)
        assert v.kind == "star" and str(v) == "*" and v.rule == "table"

    def test_cii(self):
        assert str(q(CII, 2, 3, 4)) == "0"

    def test_aiii_table_cells(self):
        assert str(q(AIII, 2, 5, 3)) == "Z"
        assert str(q(AIII, 0, 6, 2)) == "Z_12"
        assert str(q(AIII, 0, 6, 3)) == "Z_6"

    def test_ceiling_rule(self):
        v = q(BDI, 2, 3, 5)
        assert v.is_trivial and v.rule == "stable-triviality"

    def test_degenerate(self):
        v = q(AIII, 2, 3, 2)
        assert v.kind == "degenerate" and v.is_trivial and str(v) == "0 (degenerate)"

    def test_blank_cell_is_degenerate(self):
        # |nu| = 1 with m = 1 leaves an empty frame
        v = q(BDI, 1, 3, 1)
        assert v.kind == "degenerate" and v.rule == "degenerate-target"

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
    def test_circle_target(self, d):
        v = q(BDI, 0, d, 1)
        assert str(v) == "Z" and v.rule in ("circle-target", "table")

    def test_circle_homotopy(self):
        v = q(AIII, 0, 4, 1)
        assert v.is_trivial and v.rule == "circle-homotopy"

    def test_notes_name_rule_inputs(self):
        v = q(AIII, 0, 6, 2)
        assert "AIII" in v.note and "d=6" in v.note


class TestErrors:
    def test_cii_odd_nu(self):
        with pytest.raises(ClassificationError, match="forces nu even"):
            ClassificationQuery(CII, 1, 2, 4)

    def test_cii_odd_m(self):
        with pytest.raises(ClassificationError, match="even m"):
            ClassificationQuery(CII, 0, 2, 3)

    def test_d_range(self):
        with pytest.raises(ClassificationError, match="exceeds"):
            ClassificationQuery(AIII, 0, 7, 2)

    def test_m_below_nu(self):
        with pytest.raises(ClassificationError):
            ClassificationQuery(AIII, 3, 2, 2)

    def test_outside_range(self):
        with pytest.raises(ClassificationError, match="outside tabulated range"):
            q(BDI, 0, 4, 3)


@pytest.mark.parametrize("cls", [BDI, CII, AIII])
def test_goldens(cls):
    for nus, d, ms, want in GOLDEN_TABLES[cls]:
        for nu in nus:
            for m in ms:
                if m < nu:
                    continue
                v = q(cls, nu, d, m)
                assert str(v).split(" ")[0] == want or (want == "0" and v.is_trivial), (cls, nu, d, m, v)


def test_ceiling_rule_sweep():
    for cls in (BDI, CII):
        for d in (1, 2, 3):
            for nu in range(math.ceil(d / 2), 6):
                if cls is CII and nu % 2:
                    continue
                m = nu + 2
                assert q(cls, nu, d, m).is_trivial


def _representative_m(cell, nu):
    spec = cell["m"]
    base = nu + 1
    if spec == "any":
        return max(base, 2)
    if spec.startswith(">="):
        return max(int(spec[2:]), base)
    return int(spec)


@pytest.mark.parametrize("cls", [BDI, CII, AIII])
def test_stored_cells_returned(cls):
    for cell in table_cells(cls):
        nu = cell["nu"] if isinstance(cell["nu"], int) else int(cell["nu"][2:])
        m = _representative_m(cell, nu)
        if cls is CII and m % 2:
            m += 1
        if m < nu:
            continue
        v = q(cls, nu, cell["d"], m)
        if cell["value"] is None:
            assert v.kind == "degenerate"
        elif v.rule == "table":
            assert str(v) == cell["value"] or (cell["value"] == "0" and v.is_trivial)
        else:
            # an earlier rule fired; it must agree with the stored value
            assert (str(v) == cell["value"]) or (cell["value"] == "0" and v.is_trivial)


def test_connectivity_never_contradicts_table():
    for cell in table_cells(AIII):
        if cell["value"] in (None, "*") or not isinstance(cell["nu"], int):
            continue
        g = connectivity_fallback(cell["nu"], cell["d"])
        if g is not None and cell["m"] not in ("1",):
            assert g == AbGroup.parse(cell["value"]), cell


class TestModel:
    def test_j1j2(self, j1j2):
        rep = classify_model(j1j2)
        assert rep.whole.summary() == "(AIII/BDI, |nu|=0, d=2, m=2) -> Z"
        assert all(str(b.verdict) == "Z" for b in rep.blocks)

    def test_pyrochlore(self, pyro):
        rep = classify_model(pyro)
        assert len(rep.blocks) == 2
        for b in rep.blocks:
            assert (b.symclass, b.nu, b.d, b.m) == (BDI, 2, 3, 4)
            assert b.verdict.is_trivial
        assert rep.blocks[0].rows == [0, 1] and rep.blocks[0].cols == [0, 1, 2, 3]

    def test_anisotropic(self, aniso):
        rep = classify_model(aniso)
        assert len(rep.blocks) == 2
        for b in rep.blocks:
            assert (b.symclass, b.abs_nu, b.nu, b.d, b.m) == (BDI, 4, -4, 2, 6)
            assert b.verdict.is_trivial

    def test_isolated_rows_and_cols(self):
        c = np.zeros((3, 3))
        c[0, 0] = 1
        r = RigidityPolynomial.from_coeffs(3, 3, 1, {(0,): c, (1,): c})
        blocks, iso_r, iso_c = independent_blocks(r)
        assert blocks == [([0], [0])] and iso_r == [1, 2] and iso_c == [1, 2]

    def test_unresolved_block_reports_error(self):
        r = RigidityPolynomial.from_coeffs(1, 1, 6, {(0,) * 6: [[1j]]})
        rep = classify_model(r)
        assert rep.whole.verdict is not None
        # real 3x3 in d = 4: equivariant, |nu| = 0, beyond the equivariant tables
        r = RigidityPolynomial.from_coeffs(3, 3, 4, {(0,) * 4: np.eye(3)})
        rep = classify_model(r)
        assert rep.whole.verdict is None and "outside tabulated range" in rep.whole.error
