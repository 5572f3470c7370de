import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nodal_lab import doubling as dbl
from nodal_lab.poly import Polynomial, apply_laplacian_product
from nodal_lab.quadrature import Region, integrate
from nodal_lab.spectral import EigenSum
from nodal_lab.weight import WeightConfig, assemble_weight


class TestDoublingRatio:
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_constant(self, d):
        assert dbl.doubling_ratio(dbl.constant_one(d), (0.0,) * d, 0.3, d).ratio == pytest.approx(2 ** d, rel=1e-13)

    @pytest.mark.parametrize("r", [1e-3, 0.1, 2.0])
    def test_x1_squared(self, r):
        assert dbl.doubling_ratio(dbl.coordinate_square(2), (0.0, 0.0), r, 2).ratio == pytest.approx(16, rel=1e-8)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 6), st.integers(1, 3), st.floats(0.01, 1.0))
    def test_radial_power_homogeneity(self, k, d, r):
        res = dbl.doubling_ratio(dbl.radial_power(k, d), (0.0,) * d, r, d)
        assert res.ratio == pytest.approx(2.0 ** (2 * k + d), rel=1e-8)
        assert res.error < 1e-8 * res.ratio

    def test_off_centre(self):
        # int over B((c, 0), R) of x1^2 = pi R^2 (c^2 + R^2 / 4)
        c = 0.5

        def exact(R):
            return math.pi * R ** 2 * (c ** 2 + R ** 2 / 4)

        res = dbl.doubling_ratio(dbl.coordinate_square(2), (c, 0.0), 0.2, 2)
        assert res.ratio == pytest.approx(exact(0.4) / exact(0.2), rel=1e-12)

    def test_sign_change_rejected(self):
        u = dbl.polynomial_subsolution(Polynomial.coordinate(0, 2), "x1")
        with pytest.raises(dbl.PositivityError):
            dbl.doubling_ratio(u, (0.0, 0.0), 0.1, 2)

    def test_vanishing_mass(self):
        def u(x):
            return np.maximum(np.linalg.norm(x, axis=1) - 0.1, 0.0) ** 2

        with pytest.raises(dbl.VanishingMassError):
            dbl.doubling_ratio(u, (0.0, 0.0), 0.1, 2)

    def test_cylinder_constant(self):
        res = dbl.cylinder_ratio(lambda x: np.ones(len(x)), (0.0, 0.0, 0.0), 0.1, 2)
        assert res.ratio == pytest.approx(8.0)
        assert dbl.cylinder_bound(3.0) == 9.0


class TestIntegrationByParts:
    def test_constant_m1(self):
        res = dbl.check_integration_by_parts(dbl.constant_one(3), WeightConfig(3, 1, (0.0,), 0.1))
        assert abs(res.lhs) == 0.0
        assert abs(res.rhs) <= 10 * res.error + 1e-12
        assert res.passed

    def test_x1_squared_bilaplacian(self):
        res = dbl.check_integration_by_parts(dbl.coordinate_square(3), WeightConfig(3, 2, (0.0, 0.0), 0.1))
        assert res.passed

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_radial_square_m1(self, d):
        cfg = WeightConfig(d, 1, (0.0,), 0.1)
        w = assemble_weight(cfg)
        region = Region("ball", d, 0.3, breakpoints=tuple(w.breakpoints()))
        mass = integrate(lambda x: w.value(np.linalg.norm(x, axis=1)), region, 24).value
        res = dbl.check_integration_by_parts(dbl.radial_power(1, d, (0.0,)), cfg)
        assert res.lhs == pytest.approx(2 * d * mass, rel=1e-10)
        assert res.passed

    @pytest.mark.parametrize("gammas", [(1.0,), (-2.0, 3.0)])
    def test_shifted(self, gammas):
        m = len(gammas)
        cfg = WeightConfig(2, m, gammas, 0.1)
        res = dbl.check_integration_by_parts(dbl.coordinate_square(2, gammas), cfg)
        assert res.passed

    def test_wrong_dimension(self):
        with pytest.raises(ValueError):
            dbl.check_integration_by_parts(dbl.constant_one(2), WeightConfig(3, 1, (0.0,), 0.1))


class TestTheorem2:
    def test_x1_squared_bilaplacian(self):
        v = dbl.verify_theorem2(dbl.coordinate_square(2), WeightConfig(2, 2, (0.0, 0.0), 0.1))
        assert v.ratio == pytest.approx(16.0, rel=1e-8)
        assert v.passed and v.margin > 0
        assert v.ratio <= v.proof_bound

    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_gallery(self, d, m):
        for u in dbl.gallery(d, m):
            assert dbl.verify_theorem2(u, WeightConfig(d, m, (0.0,) * m, 0.1)).passed

    def test_extended_torus_sum(self):
        f = EigenSum.torus([(1.0, "cos", (1,)), (0.5, "cos", (2,))])
        u = dbl.extended_sum(f)
        v = dbl.verify_theorem2(u, WeightConfig(2, 2, u.operator[1], 0.02), center=(0.0, 0.0))
        assert v.passed

    def test_sign_change_precondition(self):
        u = dbl.polynomial_subsolution(Polynomial.coordinate(0, 2) - 0.05, "x1 - 0.05", (0.0,))
        with pytest.raises(dbl.PositivityError):
            dbl.verify_theorem2(u, WeightConfig(2, 1, (0.0,), 0.1))

    def test_not_subsolution(self):
        # Delta x1^2 = 2 > 0
        with pytest.raises(dbl.NotSubsolutionError):
            dbl.verify_theorem2(dbl.coordinate_square(2, (0.0,)), WeightConfig(2, 1, (0.0,), 0.1))

    def test_sweep_rows(self):
        rows = dbl.sweep_rows_theorem2(2, 2, (0.0, 0.0), [0.05, 0.1], dbl.coordinate_square(2))
        assert [tuple(r) for r in rows] == [dbl.SWEEP_COLUMNS] * 2
        assert all(r["pass"] for r in rows)


class TestTheorem1Reduction:
    def test_positive_ball_bound(self):
        f = EigenSum.torus([(1.0, "cos", (1,))])
        res = dbl.theorem1_contradiction_experiment(f, (0.0,), 0.02)
        assert res.holds
        assert res.time_ratio == pytest.approx(2 * math.cosh(2 * math.pi * 0.02))
        assert res.r_limit == pytest.approx(math.log(res.rhs_bound) / (2 * math.pi))
        assert res.cylinder_ratio <= res.rhs_bound

    def test_requires_positivity(self):
        f = EigenSum.torus([(1.0, "sin", (1,))])
        with pytest.raises(dbl.PositivityError):
            dbl.theorem1_contradiction_experiment(f, (0.0,), 0.02)


class TestTheorem4:
    def test_bilaplacian_x1_squared(self):
        op = dbl.GeneralOperator2m.polyharmonic(2, 2)
        v = dbl.verify_theorem4(op, Polynomial.coordinate(0, 2) ** 2, 0.2)
        assert v.ratio == pytest.approx(16.0, rel=1e-8)
        assert v.passed

    def test_lower_order_term_rejected(self):
        op = dbl.GeneralOperator2m.polyharmonic(2, 2, {(2, 0): 1.0, (0, 2): 1.0})
        assert op.apply(Polynomial.coordinate(0, 2) ** 2).constant_value() == 2.0
        with pytest.raises(dbl.NotSubsolutionError):
            dbl.verify_theorem4(op, Polynomial.coordinate(0, 2) ** 2, 0.2)

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_triharmonic_gallery(self, d):
        op = dbl.GeneralOperator2m.polyharmonic(d, 3)
        for tag, u in dbl.theorem4_gallery(d, 3):
            v = dbl.verify_theorem4(op, u, 0.2, tag=tag)
            assert v.passed and math.isfinite(v.ratio)

    def test_polyharmonic_apply_matches_laplacian(self):
        p = Polynomial.coordinate(0, 3) ** 3 * Polynomial.coordinate(1, 3) ** 3
        op = dbl.GeneralOperator2m.polyharmonic(3, 2)
        assert op.apply(p) == apply_laplacian_product(p, (0.0, 0.0))
        assert op.ellipticity() == pytest.approx(1.0, rel=1e-12)

    def test_non_elliptic_rejected(self):
        op = dbl.GeneralOperator2m(2, 2, {(4, 0): 1.0})
        with pytest.raises(dbl.EllipticityError):
            dbl.verify_theorem4(op, Polynomial.constant(1.0, 2), 0.2)

    def test_bad_multi_index(self):
        with pytest.raises(ValueError):
            dbl.GeneralOperator2m(2, 2, {(2, 0): 1.0})

    def test_bound_grows_with_coefficient_ratio(self):
        assert dbl.theorem4_bound(2, 1.0, 4.0) == pytest.approx(dbl.theorem4_bound(2, 1.0, 1.0) * 4 ** 4)


class TestSchrodinger:
    @pytest.mark.parametrize("k,eta,ratio", [(1, 6, 32), (2, 20, 128)])
    def test_examples(self, k, eta, ratio):
        res = dbl.schrodinger_case(k, 3)
        assert res.eta == eta
        assert res.ratio == pytest.approx(ratio, rel=1e-10)
        assert res.residual == 0.0
        assert res.passed

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_bound_holds(self, d):
        for k in range(1, 21):
            res = dbl.schrodinger_case(k, d)
            assert res.ratio == pytest.approx(res.exact_ratio, rel=1e-8)
            assert res.passed

    def test_proof_bound_finite(self):
        b = dbl.schrodinger_proof_bound(dbl.schrodinger_eta(2, 3), 3)
        assert math.isfinite(b) and b > 1

    def test_low_dimension_rejected(self):
        with pytest.raises(ValueError):
            dbl.schrodinger_case(1, 2)
