import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nodal_lab import quadrature as q
from nodal_lab.poly import Polynomial, apply_laplacian_product, multi_indices


def to_sympy(p: Polynomial, xs):
    return sum((c * sp.prod([x ** k for x, k in zip(xs, e)]) for e, c in p.terms.items()), sp.Integer(0))


poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-5, 5).map(float), min_size=1, max_size=5)


class TestPolynomial:
    @settings(max_examples=30, deadline=None)
    @given(poly_terms, st.lists(st.integers(-3, 3).map(float), max_size=3))
    def test_laplacian_product_matches_sympy(self, terms, gammas):
        xs = sp.symbols("x y")
        p = Polynomial(terms, 2)
        f = to_sympy(p, xs)
        for g in gammas:
            f = sum(sp.diff(f, x, 2) for x in xs) + g * f
        assert sp.expand(to_sympy(apply_laplacian_product(p, gammas), xs) - f) == 0

    def test_x1_squared_is_biharmonic(self):
        x1sq = Polynomial.coordinate(0, 3) ** 2
        assert apply_laplacian_product(x1sq, [0.0, 0.0]).is_zero()
        assert apply_laplacian_product(x1sq, [0.0]).constant_value() == 2.0

    def test_radial_power(self):
        p = Polynomial.radial_power(2, 3)
        x = np.array([[0.1, 0.2, 0.3], [1.0, -1.0, 0.5]])
        np.testing.assert_allclose(p(x), np.sum(x ** 2, axis=1) ** 2)
        assert p.laplacian().laplacian().constant_value() == pytest.approx(120.0)

    def test_partial_and_translate(self):
        x, y = Polynomial.coordinate(0, 2), Polynomial.coordinate(1, 2)
        p = x ** 3 * y + y ** 2
        assert p.partial((2, 1)) == x * 6.0
        shifted = p.translate((1.0, -2.0))
        pt = np.array([[0.3, 0.7]])
        np.testing.assert_allclose(shifted(pt), p(pt - [1.0, -2.0]))

    def test_multi_indices(self):
        idx = list(multi_indices(3, 3))
        assert len(idx) == math.comb(5, 2)
        assert all(sum(e) == 3 for e in idx)
        assert len(set(idx)) == len(idx)

    def test_bad_exponent(self):
        with pytest.raises(ValueError):
            Polynomial({(1,): 1.0}, 2)


class TestQuadrature:
    def test_unit_ball_area(self):
        val = q.integrate(lambda x: np.ones(len(x)), q.Region("ball", 2, 0.7)).value
        assert val == pytest.approx(math.pi * 0.49, rel=1e-12)

    def test_x1_squared_disc(self):
        R = 0.9
        x1 = Polynomial.coordinate(0, 2) ** 2
        assert q.integrate(x1, q.Region("ball", 2, R)).value == pytest.approx(math.pi * R ** 4 / 4, rel=1e-10)

    def test_r4_ball_3d(self):
        R = 1.3
        val = q.integrate(Polynomial.radial_power(2, 3), q.Region("ball", 3, R)).value
        assert val == pytest.approx(4 * math.pi * R ** 7 / 7, rel=1e-10)

    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("p", [0, 2, 3, 6])
    def test_monomials_against_closed_form(self, d, p):
        R = 0.8
        reg = q.Region("ball", d, R, (0.2,) * d)
        c = np.array(reg.center)

        def u(x):
            return np.linalg.norm(x - c, axis=1) ** p

        res = q.integrate(u, reg)
        want = q.monomial_ball_integral(p, d, R)
        assert res.value == pytest.approx(want, rel=1e-12)
        assert res.error < 1e-10 * want

    def test_annulus(self):
        reg = q.Region("annulus", 3, 1.0, inner=0.5)
        val = q.integrate(lambda x: np.ones(len(x)), reg).value
        assert val == pytest.approx(4 / 3 * math.pi * (1 - 0.125), rel=1e-12)
        assert reg.measure() == pytest.approx(val)

    def test_cylinder(self):
        reg = q.Region("cylinder", 2, 0.5, half_height=0.25)
        # int (x1^2 + t^2) over disc x [-h, h]
        val = q.integrate(lambda x: x[:, 0] ** 2 + x[:, 2] ** 2, reg).value
        want = math.pi * 0.5 ** 4 / 4 * 0.5 + math.pi * 0.25 * 2 * 0.25 ** 3 / 3
        assert val == pytest.approx(want, rel=1e-12)

    def test_breakpoints_handle_kinks(self):
        reg = q.Region("ball", 3, 1.0, breakpoints=(0.5,))

        def u(x):
            return np.maximum(np.linalg.norm(x, axis=1) - 0.5, 0.0)

        # int_{0.5}^1 (s - 0.5) 4 pi s^2 ds
        want = 4 * math.pi * ((1 - 0.5 ** 4) / 4 - 0.5 * (1 - 0.5 ** 3) / 3)
        assert q.integrate(u, reg).value == pytest.approx(want, rel=1e-12)

    def test_error_estimate_bounds_true_error(self):
        # non-polynomial integrand: error estimate must cover the truth
        reg = q.Region("ball", 2, 1.0)
        res = q.integrate(lambda x: np.exp(3 * x[:, 0]), reg, n_radial=6)
        from scipy.special import i1

        want = 2 * math.pi * i1(3.0) / 3.0
        assert abs(res.value - want) <= max(res.error, 1e-15)

    def test_invalid_regions(self):
        with pytest.raises(ValueError):
            q.Region("ball", 4, 1.0)
        with pytest.raises(ValueError):
            q.Region("annulus", 2, 1.0, inner=1.0)
        with pytest.raises(ValueError):
            q.Region("cube", 2, 1.0)
