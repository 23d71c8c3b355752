import numpy as np
import pytest

from rigidity.linearize import channel_major_order, linearize_channel_major, linearize_collinear
from rigidity.model import BUILTIN_MODELS, ConstraintFamily, ConstraintTerm, SpinModel, load_builtin
from rigidity.polynomial import grid_momenta

e = lambda t: np.exp(1j * t)  # noqa: E731


# Reference matrices written out entry by entry as functions of k, in channel-major layout.
def ref_j1j2(k):
    kx, ky = k
    return np.diag([1 - e(kx) - e(ky) + e(kx + ky), 1 + e(kx) + e(ky) + e(kx + ky)])


def ref_anisotropic(k):
    kx, ky = k
    r = np.zeros((12, 4), dtype=complex)
    r[0, :2] = 1 + e(kx), -1 - e(-ky)
    r[1, :2] = 1 + e(ky), -1 - e(-kx)
    r[2, 1] = e(-ky) - 1
    r[3, 0] = 1 - e(kx)
    r[4, 1] = 1 - e(-kx)
    r[5, 0] = e(ky) - 1
    r[6, 2:] = 1 + e(kx), 1 + e(-ky)
    r[7, 2:] = 1 + e(ky), 1 + e(-kx)
    r[8, 3] = 1 - e(-ky)
    r[9, 2] = 1 - e(kx)
    r[10, 3] = e(-kx) - 1
    r[11, 2] = e(ky) - 1
    return r


def ref_pyrochlore(k):
    k1, k2, k3 = k
    r = np.zeros((4, 8), dtype=complex)
    r[0, :4] = 1, -1, 1, -1
    r[1, :4] = 1, -e(k2 - k3), e(-k3), -e(k1 - k3)
    r[2, 4:] = 1, 1, 1, 1
    r[3, 4:] = 1, e(k2 - k3), e(-k3), e(k1 - k3)
    return r


REFS = {"j1j2_square": ref_j1j2, "square_anisotropic_nnn": ref_anisotropic, "pyrochlore": ref_pyrochlore}


@pytest.mark.parametrize("name", BUILTIN_MODELS)
def test_golden_matrices(name):
    r = linearize_channel_major(load_builtin(name))
    ref = REFS[name]
    rng = np.random.default_rng(7)
    for k in rng.uniform(-np.pi, np.pi, (25, r.dim)):
        assert np.max(np.abs(r.evaluate(k) - ref(k))) < 1e-13


@pytest.mark.parametrize("name", BUILTIN_MODELS)
def test_coefficients_are_integers(name):
    r = linearize_channel_major(load_builtin(name))
    for m in r.coeffs.values():
        assert np.array_equal(m.imag, np.zeros_like(m.imag))
        assert np.array_equal(m.real, np.round(m.real))


def test_single_term_identity():
    m = SpinModel("one", 1, 1, (ConstraintFamily("c", (ConstraintTerm(0, (0,), 1.0, 1),)),))
    r = linearize_collinear(m)
    assert list(r.coeffs) == [(0,)]
    assert np.array_equal(r.coeffs[(0,)], np.eye(2))


def test_interleaved_layout_of_j1j2():
    r = linearize_collinear(load_builtin("j1j2_square"))
    # rows (in-plane, out-of-plane), cols (dq, dp): already diagonal for one site
    assert np.allclose(r.evaluate([0.3, 0.9]), ref_j1j2([0.3, 0.9]), atol=1e-14)


def test_channel_major_permutation():
    rows, cols = channel_major_order(3, 2)
    assert rows == [0, 2, 4, 1, 3, 5] and cols == [0, 2, 1, 3]
    m = load_builtin("pyrochlore")
    a, b = linearize_collinear(m), linearize_channel_major(m)
    k = np.array([0.2, 0.5, -1.0])
    rr, cc = channel_major_order(m.n_families, m.sublattices)
    assert np.allclose(a.evaluate(k)[np.ix_(rr, cc)], b.evaluate(k))


@pytest.mark.parametrize("name", BUILTIN_MODELS)
def test_counting(name):
    m = load_builtin(name)
    r = linearize_collinear(m)
    assert r.cols - r.rows == 2 * (m.sublattices - m.n_families)


def test_in_plane_row_carries_sign():
    fam = ConstraintFamily("c", (ConstraintTerm(0, (0,), 2.0, -1), ConstraintTerm(0, (1,), 3.0, 1)))
    r = linearize_collinear(SpinModel("s", 1, 1, (fam,)))
    k = grid_momenta(1, 7)[2]
    val = r.evaluate(k)
    assert np.isclose(val[0, 0], -2 + 3 * e(k[0]))
    assert np.isclose(val[1, 1], 2 + 3 * e(k[0]))
    assert val[0, 1] == 0 and val[1, 0] == 0
