import math
import warnings

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.interpolate import BSpline

from nodal_lab import weight as wt
from nodal_lab.constants import load_constants, weight_entry
from nodal_lab.weight import WeightConfig


class TestTaylorRemainder:
    def test_alpha_one_m_one(self):
        e = wt.taylor_remainder(1.0, 1, 1.0 / 3.0, 3).expansion
        got = {p: c for c, p in e.terms}
        assert got == pytest.approx({-1.0: 1.0, 0.0: -2.0, 1.0: 1.0})

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.5, 30.0), st.integers(1, 4), st.floats(0.01, 1.0), st.integers(1, 5))
    def test_vanishes_to_order_2m_at_outer_radius(self, alpha, m, r, d):
        e = wt.taylor_remainder(alpha, m, r, d).expansion
        for j in range(2 * m):
            dj = e.derivative(j)
            assert abs(dj(3 * r)) <= 1e-9 * dj.abs_sum(3 * r)

    def test_matches_sympy_series(self):
        rho = sp.symbols("rho", positive=True)
        alpha, s, order = sp.Rational(7, 2), sp.Rational(1, 2), 5
        series = sp.series(rho ** -alpha, rho, s, order + 1).removeO()
        tp = wt.taylor_polynomial(float(alpha), order, float(s), 2)
        for x in (0.2, 0.45, 0.8):
            assert tp(x) == pytest.approx(float(series.subs(rho, x)), rel=1e-12)

    def test_positive_inside(self):
        e = wt.taylor_remainder(6.0, 2, 0.1, 3).expansion
        xs = np.linspace(0.01, 0.299, 200)
        assert np.all(e(xs) > 0)


class TestAlpha:
    def test_sigma_high_dimension(self):
        assert wt.select_alpha(4, 3, K=1.0) == pytest.approx(3 ** 2.5)
        assert 3 ** 2.5 == pytest.approx(15.588, abs=1e-3)

    def test_sigma_low_dimension(self):
        assert wt.select_alpha(2, 4, K=1.0) == pytest.approx(4 * math.log(5) ** 2)
        assert 4 * math.log(5) ** 2 == pytest.approx(10.36, abs=1e-2)

    def test_case_b(self):
        a = wt.select_alpha(3, 2, gamma=100.0, r0=0.5, case="b", K=1.0, Kp=1.0)
        assert a == pytest.approx(2 * math.log(3) ** 2 + math.sqrt(200) * 0.5)

    def test_calibrated_default(self):
        K = weight_entry(load_constants(), 3, 2, "a")["K"]
        assert wt.select_alpha(3, 2) == pytest.approx(K * wt.sigma_weight(3, 2))

    def test_constant_estimate_formula(self):
        e = weight_entry(load_constants(), 3, 1, "a")
        assert wt.constant_estimate(3, 1) == pytest.approx(e["C0"] * math.exp(e["C1"] * wt.sigma_weight(3, 1)))

    def test_constant_estimate_covers_measurement(self):
        for d in (1, 2, 3):
            for m in (1, 2, 3):
                rep = wt.verify_lemma1(WeightConfig(d, m, (0.0,) * m, 0.1))
                assert rep.doubling_bound <= wt.constant_estimate(d, m)

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            wt.select_alpha(2, 0)
        with pytest.raises(ValueError):
            wt.select_alpha(2, 1, case="c")


class TestCutoff:
    def test_linear_ramp(self):
        r = 0.3
        c = wt.build_cutoff(r, 1)
        xs = np.linspace(r / 2 + 1e-9, r - 1e-9, 50)
        np.testing.assert_allclose(c(xs, order=1), 2 / r, rtol=1e-12)
        assert c(r / 2) == pytest.approx(0.0, abs=1e-15)
        assert c(r) == pytest.approx(1.0)

    @pytest.mark.parametrize("K", [2, 3, 4, 6])
    def test_derivative_is_cardinal_bspline(self, K):
        r = 0.4
        c = wt.build_cutoff(r, K)
        knots = np.linspace(r / 2, r, K + 1)
        b = BSpline.basis_element(knots, extrapolate=False)
        xs = np.linspace(r / 2 + 1e-6, r - 1e-6, 101)
        # the B-spline integrates to (r/2)/K; the cutoff derivative to 1
        np.testing.assert_allclose(c(xs, order=1), b(xs) * K / (r / 2), rtol=1e-9, atol=1e-9)

    @pytest.mark.parametrize("K", [1, 2, 4, 6])
    def test_smoothness_and_range(self, K):
        c = wt.build_cutoff(0.2, K)
        for order in range(K):
            assert np.max(np.abs(c.jumps(order))) <= 1e-8 * (1 + max(c.derivative_max))
        xs = np.linspace(0.0, 0.3, 601)
        v = c(xs)
        assert np.all((v >= -1e-12) & (v <= 1 + 1e-12))
        assert np.all(np.diff(v) >= -1e-12)
        assert np.all(v[xs <= 0.1] == 0.0) and np.all(v[xs >= 0.2] == 1.0)

    def test_derivative_certificate(self):
        r, K = 0.2, 5
        c = wt.build_cutoff(r, K)
        for j, mx in enumerate(c.derivative_max, start=1):
            assert mx <= (c.certificate_C * j * math.log(j + 1) ** 2) ** j * r ** -j * (1 + 1e-12)

    def test_geometric_boxes(self):
        c = wt.build_cutoff(0.2, 3, ratio=2.0)
        assert sum(c.lengths) == pytest.approx(0.1)
        assert c.lengths[1] == pytest.approx(2 * c.lengths[0])


class TestAssembledWeight:
    def test_normalisation(self):
        r = 0.1
        w = wt.assemble_weight(WeightConfig(3, 1, (0.0,), r, alpha=2.0))
        xs = np.linspace(r, 2 * r, 4001)
        vals = w.script_L(xs)
        assert vals.min() >= 1 - 1e-9
        assert vals.min() == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("gamma", [0.0, 30.0])
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_script_L_matches_finite_differences(self, d, gamma):
        r = 0.1
        w = wt.assemble_weight(WeightConfig(d, 1, (gamma,), r))
        h = 1e-5
        for rho in (0.07, 0.13, 0.22, 0.27):
            v0, vp, vm = w.value(rho), w.value(rho + h), w.value(rho - h)
            lap = (vp - 2 * v0 + vm) / h ** 2 + (d - 1) / rho * (vp - vm) / (2 * h)
            want = lap + gamma * v0
            assert w.script_L(rho) == pytest.approx(want, rel=1e-4, abs=1e-4 * abs(w.script_L(0.15)))

    def test_support(self):
        w = wt.assemble_weight(WeightConfig(2, 2, (0.0, 0.0), 0.1))
        assert w.value(0.04) == 0.0
        assert w.value(0.31) == 0.0
        assert w.value(0.2) > 0

    def test_alpha_too_small_fails_property_ii(self):
        cfg = WeightConfig(3, 2, (0.0, 0.0), 0.1, alpha=0.5)
        rep = wt.verify_lemma1(cfg)
        assert not rep.passed
        assert "ii" in {c.name for c in rep.failures()}
        assert 0.1 <= rep.check("ii").location <= 0.2
        with pytest.raises(wt.WeightConstraintError, match=r"\(ii\)"):
            wt.assemble_weight(cfg)

    @pytest.mark.parametrize("gammas", [(4.0, 40.0), (-10.0, -10.0)])
    def test_shifted_configs_pass(self, gammas):
        rep = wt.verify_lemma1(WeightConfig(2, 2, gammas, 0.1))
        assert rep.passed, [c.to_json() for c in rep.failures()]

    def test_config_violations(self):
        assert "m >= 1" in WeightConfig(2, 0, (), 0.1).violations()
        assert any("r0/c" in v for v in WeightConfig(2, 1, (0.0,), 0.5).violations())
        assert "case a needs every gamma_k >= 0" in WeightConfig(2, 1, (-1.0,), 0.1, case="a").violations()
        assert "gamma list has length m" in WeightConfig(2, 2, (0.0,), 0.1).violations()
        assert WeightConfig(2, 1, (-1.0,), 0.1).case == "b"

    def test_lemma4_checks_pass_for_calibrated_alpha(self):
        for d in (1, 2, 3):
            for m in (1, 2, 3):
                checks = wt.lemma4_checks(wt.select_alpha(d, m), m, d)
                assert all(c.passed for c in checks), [c.to_json() for c in checks if not c.passed]


class TestPolynomialWeight:
    def test_boundary_vanishing(self):
        pw = wt.polynomial_weight(6, 0.3, 2)
        assert pw.boundary_vanishing() <= 1e-12

    def test_laplacian_matches_sympy(self):
        k, r0, d = 6, 0.3, 3
        rho = sp.symbols("rho", positive=True)
        f = (rho ** 2 - sp.nsimplify(r0) ** 2) ** k
        lap = sp.diff(f, rho, 2) + (d - 1) / rho * sp.diff(f, rho)
        pw = wt.polynomial_weight(k, r0, d)
        for x in (0.1, 0.25):
            assert pw.lap(x) == pytest.approx(float(lap.subs(rho, x)), rel=1e-10)

    def test_warns_outside_regime(self):
        with pytest.warns(UserWarning):
            wt.polynomial_weight(3, 0.1, 2)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            wt.polynomial_weight(6, 0.1, 2)

    def test_threshold_polynomial_matches_sympy(self):
        k, d, a, b = 6, 2, 3.0, 5.0
        s = sp.symbols("s", positive=True)

        def lap(f):
            return sp.diff(f, s, 2) + (d - 1) / s * sp.diff(f, s)

        w = (s ** 2 - 1) ** k
        full = sp.expand(lap(lap(w)) + (a + b) * lap(w) + a * b * w)
        reduced = sp.cancel(full / (s ** 2 - 1) ** (k - 4))
        q = wt.threshold_polynomial(k, d, a, b)
        for x in (0.2, 0.6, 0.9):
            t = x * x - 1
            assert np.polynomial.polynomial.polyval(t, q) == pytest.approx(float(reduced.subs(s, x)), rel=1e-10)

    def test_threshold_bracket(self):
        res = wt.verify_theorem3_threshold(6, 2, 1e4, 1e4)
        lam = 1e4
        assert wt.threshold_min(6, 2, lam * (10 * res.r_min) ** 2, lam * (10 * res.r_min) ** 2) > 0
        assert wt.threshold_min(6, 2, lam * (0.9 * res.r_min) ** 2, lam * (0.9 * res.r_min) ** 2) <= 0

    def test_threshold_scales_with_r_star(self):
        a = wt.verify_theorem3_threshold(8, 3, 1e3, 4e3)
        b = wt.verify_theorem3_threshold(8, 3, 1e5, 4e5)
        assert a.ratio == pytest.approx(b.ratio, rel=1e-9)

    def test_threshold_rejects_odd_k(self):
        with pytest.raises(ValueError):
            wt.verify_theorem3_threshold(5, 2, 1e3, 1e3)
