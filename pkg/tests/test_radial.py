import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nodal_lab import radial
from nodal_lab.radial import PieceExpansion, RadialExpansion

r = sp.symbols("r", positive=True)


def sym(e: RadialExpansion):
    return sum((sp.nsimplify(c) * r ** sp.nsimplify(p) for c, p in e.terms), sp.Integer(0))


def sym_lap(f, d):
    return sp.diff(f, r, 2) + (d - 1) / r * sp.diff(f, r)


def close(e, f, points=(0.3, 0.7, 1.3, 2.9)):
    fn = sp.lambdify(r, f, "math")
    for x in points:
        want = float(fn(x))
        assert e(x) == pytest.approx(want, rel=1e-11, abs=1e-11 * (1 + e.abs_sum(x)))


class TestExamples:
    def test_inverse_square_d3(self):
        out = radial.apply_laplacian_radial(RadialExpansion.power(-2, 3))
        assert out.terms == ((2.0, -4.0),)

    def test_constant_harmonic(self):
        assert radial.apply_laplacian_radial(RadialExpansion.power(0, 2)).is_zero()

    def test_fundamental_solution(self):
        assert radial.apply_laplacian_radial(RadialExpansion.power(-1, 3)).is_zero()

    def test_bilaplacian_of_inverse_fourth(self):
        assert radial.apply_power_Lm(RadialExpansion.power(-4, 3), 2).terms == ((360.0, -8.0),)

    def test_alpha_one_m_one(self):
        assert radial.apply_power_Lm(RadialExpansion.power(-1, 3), 1).is_zero()

    def test_sign_flip_when_alpha_small(self):
        assert radial.apply_power_Lm(RadialExpansion.power(-2, 5), 1).terms == ((-2.0, -4.0),)

    def test_script_L_zero_shifts(self):
        e = RadialExpansion(((1.0, -3.0), (2.0, 4.0)), 3)
        assert radial.apply_script_L(e, [0.0, 0.0]) == radial.apply_power_Lm(e, 2)

    def test_script_L_constant(self):
        assert radial.apply_script_L(RadialExpansion.power(0, 2), [2.5]).terms == ((2.5, 0.0),)

    def test_shifted_square_of_inverse_fourth(self):
        out = radial.apply_script_L(RadialExpansion.power(-4, 3), [1.0, 1.0])
        assert dict((p, c) for c, p in out.terms) == {-8.0: 360.0, -6.0: 24.0, -4.0: 1.0}

    def test_schrodinger_sharp_family(self):
        for k in range(1, 6):
            for d in (3, 4, 5):
                eta = 2 * k * (2 * k + d - 2)
                assert radial.apply_schrodinger(RadialExpansion.power(2 * k, d), -eta).is_zero()


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-9, 9).map(float), st.integers(-12, 12).map(lambda p: p / 2)), min_size=1,
             max_size=4),
    st.integers(1, 6),
    st.integers(1, 3),
)
def test_power_laplacian_matches_sympy(terms, d, m):
    e = RadialExpansion(tuple(terms), d)
    f = sym(e)
    for _ in range(m):
        f = sym_lap(f, d)
    close(radial.apply_power_Lm(e, m), sp.simplify(f))


@settings(max_examples=25, deadline=None)
@given(st.integers(-6, 6), st.integers(1, 5), st.lists(st.integers(-5, 5).map(float), min_size=1, max_size=3))
def test_script_L_matches_sympy(p, d, gammas):
    e = RadialExpansion.power(float(p), d)
    f = sym(e)
    for g in gammas:
        f = sym_lap(f, d) + sp.nsimplify(g) * f
    close(radial.apply_script_L(e, gammas), f)


@pytest.mark.parametrize("d", [2, 3])
def test_radial_rule_matches_cartesian_laplacian(d):
    xs = sp.symbols(f"x0:{d}", real=True)
    rho = sp.sqrt(sum(x ** 2 for x in xs))
    p = sp.Rational(-3, 2)
    f = rho ** p
    lap = sum(sp.diff(f, x, 2) for x in xs)
    pt = {x: v for x, v in zip(xs, (0.3, -0.4, 0.5)[:d])}
    want = float(lap.subs(pt))
    got = radial.apply_laplacian_radial(RadialExpansion.power(float(p), d))(float(rho.subs(pt)))
    assert got == pytest.approx(want, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(-4, 4), st.integers(0, 5), st.integers(1, 4), st.floats(0.1, 1.0))
def test_piece_laplacian_matches_sympy(p, j, d, b):
    e = PieceExpansion(((1.5, float(p), j),), b, d)
    f = sp.Rational(3, 2) * r ** p * (r - sp.nsimplify(b)) ** j
    out = e.laplacian()
    fn = sp.lambdify(r, sym_lap(f, d), "math")
    for x in (0.4, 0.9, 1.7):
        assert out(x) == pytest.approx(float(fn(x)), rel=1e-10, abs=1e-10 * (1 + out.abs_sum(x)))


def test_piece_from_product():
    e = RadialExpansion(((2.0, -1.0),), 3)
    pe = PieceExpansion.from_product(e, [1.0, 0.0, 3.0], 0.5)
    for x in (0.6, 1.1):
        assert pe(x) == pytest.approx(2.0 / x * (1 + 3 * (x - 0.5) ** 2))


def test_cancellation_dropped():
    e = RadialExpansion(((1.0, 2.0), (-1.0, 2.0), (3.0, 1.0)), 2)
    assert e.terms == ((3.0, 1.0),)


def test_negative_power_at_origin_rejected():
    with pytest.raises(ValueError):
        RadialExpansion.power(-1.0, 3)(0.0)


def test_json_roundtrip():
    e = RadialExpansion(((1.5, -2.5), (2.0, 4.0)), 3)
    assert RadialExpansion.from_json(e.to_json()) == e


class TestSemifactorial:
    def test_conventions(self):
        assert radial.semifactorial(0) == 1
        assert radial.semifactorial(-1) == 1
        assert radial.semifactorial(5) == 15
        assert radial.semifactorial(6) == 48

    @pytest.mark.parametrize("n", range(1, 16))
    def test_brute_force(self, n):
        assert radial.semifactorial(n) == math.prod(range(n, 0, -2))

    def test_power_coefficient(self):
        # Delta^2 |x|^5 in d = 3: 5*6 * 3*4
        assert radial.laplacian_power_coefficient(5, 2, 3) == 360.0

    def test_ratio_bounded_by_calibrated_constant(self):
        from nodal_lab.constants import load_constants

        C = load_constants()["semifactorial"]["constant"]
        worst = max(radial.semifactorial_ratio(l, m, d) for d in range(1, 6) for m in range(1, 6) for l in range(2 * m))
        assert worst <= C * (1 + 1e-12)
