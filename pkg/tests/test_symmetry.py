import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidity.polynomial import RigidityPolynomial, grid_momenta
from rigidity.spectral import singular_values
from rigidity.symmetry import (EquivarianceSpec, SymmetryClass, anisotropic_rotation_specs, detect_class,
                               quaternionic_j, trim_fixed_form, trims, verify_equivariance)

PI = np.pi
S2 = np.array([[0, -1j], [1j, 0]])


def _cii_poly(rng, half_rows, half_cols, dim=1, terms=3):
    """Coefficients symmetrized onto the CII fixed set: m -> (m + J conj(m) J) / 2."""
    jm, jn = np.kron(np.eye(half_rows), S2), np.kron(np.eye(half_cols), S2)
    coeffs = {}
    for _ in range(terms):
        off = tuple(int(v) for v in rng.integers(-2, 3, dim))
        m = rng.normal(size=(2 * half_rows, 2 * half_cols)) + 1j * rng.normal(size=(2 * half_rows, 2 * half_cols))
        coeffs[off] = coeffs.get(off, 0) + (m + jm @ m.conj() @ jn) / 2
    return RigidityPolynomial.from_coeffs(2 * half_rows, 2 * half_cols, dim, coeffs)


class TestParse:
    @pytest.mark.parametrize("text, cls", [("AIII", SymmetryClass.AIII), ("AIII/BDI", SymmetryClass.AIII_BDI),
                                           ("bdi", SymmetryClass.AIII_BDI), ("AIII_CII", SymmetryClass.AIII_CII)])
    def test_parse(self, text, cls):
        assert SymmetryClass.parse(text) is cls

    def test_parse_unknown(self):
        with pytest.raises(ValueError):
            SymmetryClass.parse("DIII")


class TestDetect:
    @pytest.mark.parametrize("fixture", ["j1j2", "aniso", "pyro"])
    def test_builtins_bdi_exact(self, request, fixture):
        rep = detect_class(request.getfixturevalue(fixture))
        assert rep.symclass is SymmetryClass.AIII_BDI
        assert rep.residuals["bdi"] == 0.0

    def test_imaginary_coefficient_is_aiii(self):
        r = RigidityPolynomial.from_coeffs(1, 1, 1, {(1,): [[1j]]})
        rep = detect_class(r)
        assert rep.symclass is SymmetryClass.AIII
        assert rep.residuals["bdi"] == pytest.approx(1.0)

    def test_cii_detected(self, rng):
        r = _cii_poly(rng, 1, 2)
        assert detect_class(r).symclass is SymmetryClass.AIII_CII

    def test_odd_shape_never_cii(self, rng):
        r = RigidityPolynomial.from_coeffs(3, 2, 1, {(0,): 1j * rng.normal(size=(3, 2))})
        rep = detect_class(r)
        assert rep.symclass is SymmetryClass.AIII and "cii" not in rep.residuals

    def test_bad_tol(self, j1j2):
        with pytest.raises(ValueError):
            detect_class(j1j2, tol=0)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1e-3, 1e3), st.integers(0, 2 ** 31))
    def test_invariant_under_positive_scaling(self, c, seed):
        rng = np.random.default_rng(seed)
        kind = seed % 3
        if kind == 0:
            r = RigidityPolynomial.from_coeffs(2, 2, 1, {(0,): rng.normal(size=(2, 2)), (1,): rng.normal(size=(2, 2))})
        elif kind == 1:
            r = _cii_poly(rng, 1, 1)
        else:
            r = RigidityPolynomial.from_coeffs(1, 2, 1, {(0,): rng.normal(size=(1, 2)) + 1j})
        assert detect_class(r.scale(c)).symclass is detect_class(r).symclass


class TestVerify:
    def test_j1j2_bdi(self, j1j2):
        res = verify_equivariance(j1j2, EquivarianceSpec.standard(SymmetryClass.AIII_BDI, 2, 2), grid=32)
        assert res.passed and res.max_residual < 1e-14

    def test_j1j2_cii_fails(self, j1j2):
        res = verify_equivariance(j1j2, EquivarianceSpec.standard(SymmetryClass.AIII_CII, 2, 2), grid=32)
        # the sigma_2 conjugation swaps the two channels, whose difference reaches 4 in norm
        assert not res.passed
        assert res.max_residual == pytest.approx(4.0, abs=1e-9)

    def test_cii_spec_needs_even(self):
        with pytest.raises(ValueError, match="CII requires even M and N"):
            EquivarianceSpec.standard(SymmetryClass.AIII_CII, 3, 2)

    def test_aiii_has_no_spec(self):
        with pytest.raises(ValueError):
            EquivarianceSpec.standard(SymmetryClass.AIII, 2, 2)

    def test_cii_random_passes(self, rng):
        r = _cii_poly(rng, 2, 1, dim=2)
        assert verify_equivariance(r, EquivarianceSpec.standard(SymmetryClass.AIII_CII, 4, 2), grid=8, tol=1e-12)

    def test_rotation_variants(self, aniso):
        results = {k: verify_equivariance(aniso, s, grid=32, tol=1e-12)
                   for k, s in anisotropic_rotation_specs().items()}
        assert results["A+B"].passed and results["A+B"].max_residual < 1e-12
        assert [k for k, v in results.items() if v.passed] == ["A+B"]

    def test_rotation_variants_in_interleaved_layout(self):
        from rigidity.linearize import channel_major_order, linearize_collinear
        from rigidity.model import load_builtin
        r = linearize_collinear(load_builtin("square_anisotropic_nnn"))
        rows, cols = channel_major_order(6, 2)
        inv_r, inv_c = np.argsort(rows), np.argsort(cols)
        spec = anisotropic_rotation_specs(inv_r, inv_c)["A+B"]
        assert verify_equivariance(r, spec, grid=16, tol=1e-12)

    def test_shape_mismatch(self, j1j2):
        with pytest.raises(ValueError, match="U_M"):
            verify_equivariance(j1j2, EquivarianceSpec(np.eye(3), np.eye(2)))

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError, match="not unitary"):
            EquivarianceSpec(2 * np.eye(2), np.eye(2))

    def test_from_json(self):
        spec = EquivarianceSpec.from_json_obj({"U_M_re": [[0, 1], [1, 0]], "U_N": [[1]], "antiunitary": False})
        assert not spec.antiunitary and spec.U_M[0, 1] == 1

    def test_residual_symmetric_in_k(self, rng):
        # the grid is not symmetric under k -> -k, so compare against the mirrored grid explicitly
        r = RigidityPolynomial.from_coeffs(2, 2, 1, {(0,): rng.normal(size=(2, 2)),
                                                     (1,): rng.normal(size=(2, 2)) + 0.3j})
        ks = grid_momenta(1, 9)

        def res(k):
            return np.linalg.norm(r.evaluate(-k) - r.evaluate(k).conj(), 2)
        assert np.allclose([res(k) for k in ks], [res(-k) for k in ks], atol=1e-12)


class TestTrims:
    def test_d1(self):
        assert trims(1) == [(0.0,), (PI,)]

    def test_d2(self):
        assert trims(2) == [(0.0, 0.0), (0.0, PI), (PI, 0.0), (PI, PI)]

    @pytest.mark.parametrize("d", range(1, 7))
    def test_count(self, d):
        assert len(trims(d)) == 2 ** d

    def test_range(self):
        with pytest.raises(ValueError):
            trims(7)


class TestTrimFixedForm:
    def test_j1j2_corner(self, j1j2):
        res = trim_fixed_form(j1j2, (PI, PI), SymmetryClass.AIII_BDI)
        assert res.passed and res.max_residual < 1e-14
        assert np.allclose(j1j2.evaluate([PI, PI]), np.diag([4, 0]), atol=1e-14)

    def test_pyrochlore_origin(self, pyro):
        assert trim_fixed_form(pyro, (0, 0, 0), SymmetryClass.AIII_BDI).max_residual < 1e-14

    def test_aiii_rejected(self, j1j2):
        with pytest.raises(ValueError, match="no fixed-point form for AIII"):
            trim_fixed_form(j1j2, (0, 0), SymmetryClass.AIII)

    def test_not_a_trim(self, j1j2):
        with pytest.raises(ValueError, match="not a time-reversal"):
            trim_fixed_form(j1j2, (0.5, 0), SymmetryClass.AIII_BDI)

    def test_cii_at_all_trims(self, rng):
        r = _cii_poly(rng, 1, 1, dim=2)
        assert all(trim_fixed_form(r, t, SymmetryClass.AIII_CII, tol=1e-12) for t in trims(2))


def test_quaternionic_j_odd():
    with pytest.raises(ValueError):
        quaternionic_j(3)


@pytest.mark.parametrize("fixture", ["j1j2", "aniso", "pyro"])
def test_equivariant_sigmas_match(request, fixture):
    r = request.getfixturevalue(fixture)
    ks = grid_momenta(r.dim, 8)
    assert np.max(np.abs(singular_values(r.evaluate(ks)) - singular_values(r.evaluate(-ks)))) < 1e-10


def test_cii_sigmas_match(rng):
    r = _cii_poly(rng, 2, 1, dim=2)
    ks = rng.uniform(-PI, PI, (40, 2))
    assert np.max(np.abs(singular_values(r.evaluate(ks)) - singular_values(r.evaluate(-ks)))) < 1e-10
