import numpy as np
import pytest

from rigidity.invariants import (GapClosureError, LoopSpec, ResolutionError, cycle_windings, det_winding,
                                 half_cycle_windings, trim_signs)
from rigidity.polynomial import RigidityPolynomial

PI = np.pi


def mono(n, dim=1, axis=0, c=1.0):
    off = [0] * dim
    off[axis] = n
    return RigidityPolynomial.from_coeffs(1, 1, dim, {tuple(off): [[c]]})


def loop1(res=256):
    return LoopSpec.axis_cycle(0, (0.0,), res)


class TestWinding:
    @pytest.mark.parametrize("n", range(-3, 4))
    def test_monomials(self, n):
        assert det_winding(mono(n), loop1()) == n

    def test_diagonal(self):
        r = RigidityPolynomial.from_coeffs(2, 2, 1, {(1,): [[1, 0], [0, 0]], (-2,): [[0, 0], [0, 1]]})
        assert det_winding(r, loop1()) == -1

    def test_constant_unitary(self):
        r = RigidityPolynomial.constant([[0, 1j], [1, 0]], 1)
        assert det_winding(r, loop1()) == 0

    def test_needs_square(self):
        with pytest.raises(ValueError, match="square"):
            det_winding(RigidityPolynomial.constant(np.ones((1, 2)), 1), loop1())

    def test_gap_closure(self):
        r = RigidityPolynomial.from_coeffs(1, 1, 1, {(0,): [[1]], (1,): [[1]]})    # 1 + e^{ik}
        with pytest.raises(GapClosureError, match="gap closure on cycle"):
            det_winding(r, loop1())

    def test_auto_refinement(self):
        # 40 turns need more than 16 samples; the sampler doubles until steps are below pi/2
        assert det_winding(mono(40), LoopSpec.axis_cycle(0, (0.0,), 16)) == 40

    def test_resolution_exhausted(self):
        # 1 + (1 - 1e-7) e^{ik}: the phase turns by ~pi within ~1e-7 of k = pi
        r = RigidityPolynomial.from_coeffs(1, 1, 1, {(0,): [[1]], (1,): [[1 - 1e-7]]})
        with pytest.raises(ResolutionError):
            det_winding(r, LoopSpec.axis_cycle(0, (0.1,), 16))

    def test_polyline_loop(self):
        loop = LoopSpec(points=((0.0, 0.3), (PI, 0.3), (2 * PI, 0.3)), resolution=64)
        assert det_winding(mono(2, dim=2), loop) == 2

    def test_additivity(self, rng):
        for _ in range(50):
            a, b = rng.integers(-4, 5, 2)
            ca, cb = rng.uniform(0.5, 2, 2) * np.exp(1j * rng.uniform(-PI, PI, 2))
            ra, rb = mono(a, c=ca), mono(b, c=cb)
            assert det_winding(ra @ rb, loop1()) == det_winding(ra, loop1()) + det_winding(rb, loop1())

    def test_positive_envelope(self, rng):
        for _ in range(50):
            n = int(rng.integers(-3, 4))
            base = mono(n, c=np.exp(1j * rng.uniform(-PI, PI)))
            # a positive trigonometric envelope a0 + sum a_j cos(jk) with a0 > sum |a_j|
            amps = rng.uniform(-1, 1, 3)
            a0 = np.abs(amps).sum() + rng.uniform(0.1, 1)
            env = {(0,): [[a0]]}
            for j, a in enumerate(amps, start=1):
                env[(j,)] = [[a / 2]]
                env[(-j,)] = [[a / 2]]
            envelope = RigidityPolynomial.from_coeffs(1, 1, 1, env)
            assert det_winding(envelope @ base, loop1()) == n


class TestLoopSpec:
    def test_parse_axis(self):
        loop = LoopSpec.parse("axis=0;fixed=pi", 2)
        assert loop.axis == 0 and loop.base == (0.0, PI)

    def test_parse_points(self):
        loop = LoopSpec.parse("points=0,0|pi,0|2pi,0", 2)
        assert len(loop.points) == 3

    def test_open_polyline(self):
        with pytest.raises(ValueError, match="not closed"):
            LoopSpec(points=((0.0,), (1.0,)))

    def test_min_resolution(self):
        with pytest.raises(ValueError):
            LoopSpec.axis_cycle(0, (0.0,), 8)

    def test_bad_axis(self):
        with pytest.raises(ValueError):
            LoopSpec.parse("axis=2", 2)

    def test_sample_closed(self):
        ks = LoopSpec.axis_cycle(1, (0.4, 0.0), 32).sample(2)
        assert ks.shape == (33, 2) and np.isclose(ks[-1, 1] - ks[0, 1], 2 * PI)


class TestCycles:
    def test_diagonal_in_2d(self):
        r = RigidityPolynomial.from_coeffs(2, 2, 2, {(1, 0): [[1, 0], [0, 0]], (0, 0): [[0, 0], [0, 1]]})
        assert cycle_windings(r) == (1, 0)

    def test_constant(self):
        assert cycle_windings(RigidityPolynomial.constant(np.eye(2), 3)) == (0, 0, 0)

    def test_j1j2_closes_gap(self, j1j2):
        with pytest.raises(GapClosureError, match="gap closure on cycle"):
            cycle_windings(j1j2)

    def test_basepoint(self):
        # 2 + e^{iky} - 2.5 e^{ikx}: along x it is 3 - 2.5 e^{ikx} at ky = 0 and 1 - 2.5 e^{ikx} at ky = pi
        r = RigidityPolynomial.from_coeffs(1, 1, 2, {(0, 0): [[2]], (1, 0): [[-2.5]], (0, 1): [[1]]})
        assert cycle_windings(r, basepoint=(0.0, 0.0))[0] == 0
        assert cycle_windings(r, basepoint=(0.0, PI))[0] == 1


class TestHalfCycles:
    @pytest.mark.parametrize("coeffs", [
        {(1,): [[1]]},
        {(0,): [[0.3]], (2,): [[1]]},
        {(0,): [[2]], (1,): [[1]], (-1,): [[0.4]]},
        {(0,): [[0.2, 0], [0, 1]], (1,): [[1, 0.5], [0, 0]], (-3,): [[0, 0], [0.1, 0.2]]},
    ])
    def test_halves_sum_to_winding(self, coeffs):
        n = len(next(iter(coeffs.values())))
        r = RigidityPolynomial.from_coeffs(n, n, 1, coeffs)
        h1, h2 = half_cycle_windings(r, 0)
        w = det_winding(r, loop1())
        assert abs(h1 + h2 - w) < 1e-3
        # real coefficients: the two halves mirror each other
        assert abs(h1 - h2) < 1e-9


class TestTrimSigns:
    def test_monomial(self):
        assert trim_signs(mono(1)) == {(0.0,): 1, (PI,): -1}

    def test_constant(self):
        assert set(trim_signs(RigidityPolynomial.constant([[1.0]], 2)).values()) == {1}

    def test_two_plus_cos(self):
        r = RigidityPolynomial.from_coeffs(1, 1, 1, {(0,): [[2]], (1,): [[0.5]], (-1,): [[0.5]]})
        assert trim_signs(r) == {(0.0,): 1, (PI,): 1}

    def test_zero_at_trim(self):
        r = RigidityPolynomial.from_coeffs(1, 1, 1, {(0,): [[1]], (1,): [[1]]})
        with pytest.raises(GapClosureError):
            trim_signs(r)

    def test_wrong_class(self):
        with pytest.raises(ValueError, match="AIII/BDI"):
            trim_signs(mono(1, c=1j))

    def test_wrong_shape(self, j1j2):
        with pytest.raises(ValueError, match="1x1"):
            trim_signs(j1j2)
