"""Core grid/transform/recurrence tests against independent oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebbvp.chebyshev import (
    ChebCoeffs,
    GridValues,
    cheb_points,
    dense_sample,
    double_integrate_coeffs,
    endpoint_derivative,
    eval_endpoints,
    eval_series,
    integrate_coeffs,
    to_coeffs,
    to_values,
)


def dct1_direct(x):
    """O(M^2) cosine-sum oracle: 2 * sum'' x_k cos(j k pi / M)."""
    m = len(x) - 1
    j = np.arange(m + 1)
    w = np.ones(m + 1)
    w[0] = w[m] = 0.5
    return 2.0 * np.cos(np.pi * np.outer(j, j) / m) @ (w * x)


def coeff_vectors(max_m=32):
    return st.integers(3, max_m).flatmap(
        lambda m: st.lists(
            st.floats(-10, 10, allow_nan=False), min_size=m + 1, max_size=m + 1
        ).map(lambda xs: ChebCoeffs(m, np.array(xs)))
    )


class TestChebPoints:
    def test_m1(self):
        assert cheb_points(1).points.tolist() == [1.0, -1.0]

    def test_m2(self):
        assert cheb_points(2).points.tolist() == [1.0, 0.0, -1.0]

    def test_m4_interior(self):
        assert cheb_points(4).points[1] == pytest.approx(0.7071067811865476, abs=1e-16)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            cheb_points(0)

    @pytest.mark.parametrize("m", [1, 2, 5, 8, 33])
    def test_endpoints_exact_and_decreasing(self, m):
        pts = cheb_points(m).points
        assert pts[0] == 1.0 and pts[m] == -1.0
        assert np.all(np.diff(pts) < 0)
        assert np.allclose(pts, np.cos(np.arange(m + 1) * np.pi / m), atol=1e-15)


class TestTransforms:
    def test_constant(self):
        c = to_coeffs(GridValues(6, np.ones(7)))
        expect = np.zeros(7)
        expect[0] = 2.0
        np.testing.assert_allclose(c.a, expect, atol=1e-15)

    def test_pure_mode_t3(self):
        pts = cheb_points(8).points
        c = to_coeffs(GridValues(8, np.cos(3 * np.arccos(pts))))
        expect = np.zeros(9)
        expect[3] = 1.0
        np.testing.assert_allclose(c.a, expect, atol=1e-14)

    def test_y_squared_m4(self):
        pts = cheb_points(4).points
        c = to_coeffs(GridValues(4, pts**2))
        np.testing.assert_allclose(c.a, [1.0, 0.0, 0.5, 0.0, 0.0], atol=1e-15)

    @pytest.mark.parametrize("m", [3, 8, 17, 64])
    def test_matches_direct_cosine_sum(self, m):
        rng = np.random.default_rng(m)
        v = rng.standard_normal(m + 1)
        c = to_coeffs(GridValues(m, v))
        oracle = dct1_direct(v) / m
        oracle[m] = 0.0
        np.testing.assert_allclose(c.a, oracle, atol=1e-13)

    def test_values_of_constant(self):
        a = np.zeros(9)
        a[0] = 2.0
        np.testing.assert_allclose(to_values(ChebCoeffs(8, a)).v, 1.0, atol=1e-15)

    def test_values_of_t1_are_grid_points(self):
        a = np.zeros(9)
        a[1] = 1.0
        np.testing.assert_allclose(
            to_values(ChebCoeffs(8, a)).v, cheb_points(8).points, atol=1e-15
        )

    @given(coeff_vectors())
    def test_roundtrip_values_coeffs(self, c):
        back = to_coeffs(to_values(c))
        np.testing.assert_allclose(back.a, c.a, atol=1e-13 * max(1.0, abs(c.a).max()))

    @pytest.mark.parametrize("m", [16, 256, 4096])
    def test_roundtrip_large(self, m):
        rng = np.random.default_rng(m)
        v = rng.standard_normal(m + 1)
        # remove the a[M] component so the roundtrip is an identity
        cleaned = to_values(to_coeffs(GridValues(m, v)))
        again = to_values(to_coeffs(cleaned))
        np.testing.assert_allclose(again.v, cleaned.v, atol=1e-13)

    def test_last_coefficient_always_zero(self):
        c = to_coeffs(GridValues(5, np.random.default_rng(1).standard_normal(6)))
        assert c.a[5] == 0.0


class TestEvalSeries:
    def test_t2_at_zero(self):
        assert eval_series(ChebCoeffs.unit(6, 2), 0.0) == pytest.approx(-1.0, abs=1e-15)

    def test_t3_at_minus_one(self):
        assert eval_series(ChebCoeffs.unit(6, 3), -1.0) == pytest.approx(-1.0, abs=1e-15)

    def test_against_trig_oracle(self):
        c = ChebCoeffs(3, np.array([1.0, 2.0, 3.0, 0.0]))
        y = 0.3
        oracle = 1.0 / 2 + 2 * np.cos(np.arccos(y)) + 3 * np.cos(2 * np.arccos(y))
        assert eval_series(c, y) == pytest.approx(oracle, abs=1e-14)

    def test_rejects_outside_interval(self):
        with pytest.raises(ValueError):
            eval_series(ChebCoeffs.zeros(4), 1.0000001)

    def test_vectorized(self):
        c = ChebCoeffs(5, np.array([0.4, 1.0, -2.0, 0.3, 0.0, 0.0]))
        ys = np.linspace(-1, 1, 11)
        np.testing.assert_allclose(
            eval_series(c, ys), [eval_series(c, float(y)) for y in ys], atol=1e-15
        )

    def test_dense_sample_is_exact_evaluation(self):
        c = ChebCoeffs(7, np.random.default_rng(3).standard_normal(8))
        pts, vals = dense_sample(c, 40)
        np.testing.assert_allclose(vals, eval_series(c, pts), atol=1e-13)


class TestEndpoints:
    def test_t1(self):
        assert eval_endpoints(ChebCoeffs.unit(5, 1)) == (1.0, -1.0)

    def test_constant(self):
        assert eval_endpoints(ChebCoeffs.unit(5, 0)) == (1.0, 1.0)

    @given(coeff_vectors())
    def test_agrees_with_eval_series(self, c):
        plus, minus = eval_endpoints(c)
        scale = max(1.0, abs(c.a).sum())
        assert abs(plus - eval_series(c, 1.0)) <= 1e-14 * scale
        assert abs(minus - eval_series(c, -1.0)) <= 1e-14 * scale

    @pytest.mark.parametrize("n", [1, 2, 5, 6])
    def test_endpoint_derivative_of_modes(self, n):
        c = ChebCoeffs.unit(10, n)
        assert endpoint_derivative(c, 1) == pytest.approx(n * n, rel=1e-15)
        assert endpoint_derivative(c, -1) == pytest.approx((-1) ** (n + 1) * n * n, rel=1e-15)


class TestIntegration:
    def test_t0_gives_y(self):
        out = integrate_coeffs(ChebCoeffs.unit(8, 0))
        expect = np.zeros(9)
        expect[1] = 1.0
        np.testing.assert_allclose(out.a, expect, atol=1e-16)

    def test_t1_gives_quarter_t2(self):
        out = integrate_coeffs(ChebCoeffs.unit(8, 1))
        assert out.a[2] == 0.25
        assert np.count_nonzero(out.a) == 1

    def test_t4(self):
        out = integrate_coeffs(ChebCoeffs.unit(8, 4))
        assert out.a[5] == pytest.approx(1.0 / 10)
        assert out.a[3] == pytest.approx(-1.0 / 6)
        assert out.a[0] == 0.0

    def test_double_t0(self):
        out = double_integrate_coeffs(ChebCoeffs.unit(8, 0))
        assert out.a[2] == 0.25
        assert np.count_nonzero(out.a) == 1

    def test_double_t2(self):
        out = double_integrate_coeffs(ChebCoeffs.unit(8, 2))
        assert out.a[4] == pytest.approx(1.0 / 48)
        assert out.a[2] == pytest.approx(-1.0 / 6)

    def test_double_t5_matches_composition(self):
        m = 16
        direct = double_integrate_coeffs(ChebCoeffs.unit(m, 5))
        twice = integrate_coeffs(integrate_coeffs(ChebCoeffs.unit(m, 5)))
        fixed = np.array(twice.a)
        fixed[:2] = 0.0
        np.testing.assert_allclose(direct.a, fixed, atol=1e-15)

    @pytest.mark.parametrize("n", range(11))
    def test_against_symbolic_antiderivative(self, n):
        # acceptance 8: recurrences vs symbolic antiderivatives, n <= 10
        import sympy

        y = sympy.Symbol("y")
        tn = sympy.chebyshevt(n, y)
        anti = sympy.integrate(tn, y)
        m = 16
        out = integrate_coeffs(ChebCoeffs.unit(m, n))
        for yv in np.linspace(-1, 1, 7):
            expect = float(anti.subs(y, sympy.Rational(yv)))
            got = eval_series(out, yv)
            # the recurrence zeroes the T_0 mode; compare up to that constant
            shift = eval_series(out, 0.0) - float(anti.subs(y, 0))
            assert got - expect == pytest.approx(shift, abs=1e-15)

    @given(coeff_vectors(max_m=20), st.floats(-3, 3), st.floats(-3, 3))
    @settings(max_examples=40)
    def test_linearity(self, c, alpha, beta):
        rng = np.random.default_rng(0)
        d = ChebCoeffs(c.m, rng.standard_normal(c.m + 1))
        combo = ChebCoeffs(c.m, alpha * c.a + beta * d.a)
        lhs = integrate_coeffs(combo).a
        rhs = alpha * integrate_coeffs(c).a + beta * integrate_coeffs(d).a
        np.testing.assert_allclose(lhs, rhs, atol=1e-14 * max(1.0, abs(lhs).max()))

    @pytest.mark.parametrize("n", range(7))
    def test_derivative_of_antiderivative_recovers_mode(self, n):
        # finite differences on a refined evaluation, O(h^2) accuracy
        m = 16
        g = integrate_coeffs(ChebCoeffs.unit(m, n))
        h = 1e-5
        ys = np.linspace(-0.9, 0.9, 19)
        fd = (eval_series(g, ys + h) - eval_series(g, ys - h)) / (2 * h)
        np.testing.assert_allclose(fd, np.cos(n * np.arccos(ys)), atol=5e-8)
