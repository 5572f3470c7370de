"""Exit criteria of the build, each at its stated tolerance and time budget."""
import math
import time

import numpy as np
import pytest

from nodal_lab import doubling as dbl
from nodal_lab import gap, nodal, spectral
from nodal_lab.weight import WeightConfig, select_alpha, verify_lemma1, verify_theorem3_threshold

pytestmark = pytest.mark.acceptance


def _random_torus_sum(rng, m, dim, bound=6):
    """``m`` distinct eigenvalues, one or two modes each, random coefficients."""
    shells: dict[int, list] = {}
    while len(shells) < m:
        nu = tuple(int(v) for v in rng.integers(-bound, bound + 1, size=dim))
        lam = sum(v * v for v in nu)
        if lam == 0:
            continue
        shells.setdefault(lam, []).append(nu)
    terms = []
    for lam in sorted(shells)[:m]:
        for nu in shells[lam][:2]:
            terms.append((float(rng.uniform(0.5, 2.0) * rng.choice([-1, 1])), str(rng.choice(["cos", "sin"])), nu))
    return spectral.EigenSum.torus(terms, dim=dim)


def test_criterion_01_doubling_sharp_case(verdict):
    ok = True
    details = []
    for name, u, d, exact in (
        ("x1^2, d=2", dbl.coordinate_square(2), 2, 16.0),
        ("|x|^4, d=3", dbl.radial_power(2, 3), 3, 128.0),
    ):
        t0 = time.perf_counter()
        res = dbl.doubling_ratio(u, (0.0,) * d, 0.1, d)
        dt = time.perf_counter() - t0
        rel = abs(res.ratio - exact) / exact
        ok &= rel <= 1e-8 and dt < 1.0
        details.append(f"{name}: {res.ratio:.12g} rel {rel:.1e} in {dt:.2f}s")
    assert verdict("1 doubling sharp case", ok, "; ".join(details))


def test_criterion_02_schrodinger_sharpness(verdict):
    t0 = time.perf_counter()
    rows = [dbl.schrodinger_case(k, 3) for k in range(1, 21)]
    dt = time.perf_counter() - t0
    exact = all(abs(r.log2_ratio - (2 * r.k + 3)) <= 1e-8 * (2 * r.k + 3) for r in rows)
    etas = all(r.eta == 2 * r.k * (2 * r.k + 1) for r in rows)
    x = np.sqrt([r.eta for r in rows])
    y = np.log([r.ratio for r in rows])
    fit = np.polyval(np.polyfit(x, y, 1), x)
    r2 = 1.0 - np.sum((y - fit) ** 2) / np.sum((y - y.mean()) ** 2)
    ok = exact and etas and r2 > 0.999 and dt < 5.0
    assert verdict("2 Schrodinger sharpness scan", ok, f"R^2 {r2:.6f}, {dt:.2f}s")


def test_criterion_03_lemma1_suite(verdict):
    t0 = time.perf_counter()
    failures = []
    tol = {"i": 1e-9, "ii": 1e-9, "iii": 1e-9}
    for d in (1, 2, 3):
        for m in (1, 2, 3):
            cfg = WeightConfig(d, m, (0.0,) * m, 0.1, alpha=select_alpha(d, m))
            rep = verify_lemma1(cfg)
            names = {c.name for c in rep.checks}
            assert {"i", "ii", "iii", "iv"} <= names
            for c in rep.checks:
                if c.name in tol:
                    assert c.tolerance <= tol[c.name]
                if c.name == "iv":
                    assert math.isfinite(c.value)
            if not rep.passed:
                failures.append((d, m, [c.name for c in rep.failures()]))
    dt = time.perf_counter() - t0
    ok = not failures and dt < 30.0
    assert verdict("3 weight properties (i)-(iv)", ok, f"failures {failures}, {dt:.2f}s")


def test_criterion_04_integration_by_parts(verdict):
    t0 = time.perf_counter()
    bad = []
    n = 0
    for d in (1, 2, 3):
        for m in (1, 2, 3):
            cfg = WeightConfig(d, m, (0.0,) * m, 0.1)
            for u in (dbl.constant_one(d), dbl.radial_power(1, d), dbl.coordinate_square(d)):
                res = dbl.check_integration_by_parts(u, cfg)
                n += 1
                if not res.residual <= 10 * res.error:
                    bad.append((d, m, u.tag, res.residual, res.error))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30.0
    assert verdict("4 integration-by-parts residual", ok, f"{n} cases, failures {bad}, {dt:.2f}s")


def test_criterion_05_exact_annihilation(verdict, rng):
    worst_op = worst_ext = 0.0
    for i in range(100):
        m = 1 + i % 5
        f = _random_torus_sum(rng, m, 1 + i % 2)
        assert f.m == m
        g = spectral.apply_product_operator(f, f.eigenvalues)
        worst_op = max(worst_op, float(np.max(np.abs(g.coefficients))) / spectral.annihilation_scale(f))
        h = spectral.extend(f)
        worst_ext = max(worst_ext, spectral.product_residual_exact(h) / spectral.residual_scale(h))
    slopes = []
    for i in range(10):
        m = 1 + i % 2
        f = _random_torus_sum(rng, m, 1, bound=2)
        h = spectral.extend(f)
        point = (float(rng.uniform()), float(rng.uniform(-0.2, 0.2)))
        steps = (1e-2, 5e-3, 2.5e-3)
        res = [abs(spectral.product_residual_fd(h, point, s)) for s in steps]
        slopes += [math.log2(res[j] / res[j + 1]) for j in range(2)]
    ok = worst_op <= 1e-12 and worst_ext <= 1e-12 and all(1.7 <= s <= 2.3 for s in slopes)
    assert verdict("5 exact annihilation", ok,
                   f"operator {worst_op:.1e}, extension {worst_ext:.1e}, slopes {min(slopes):.2f}..{max(slopes):.2f}")


def test_criterion_06_density_scaling(verdict):
    t0 = time.perf_counter()
    rows = nodal.scaling_experiment(lambda n: spectral.EigenSum.torus([(1.0, "sin", (n,))]), range(1, 65))
    target = math.pi / 2
    worst = max(abs(r.product_radius_sqrtlambda - target) / (0.05 * target + r.grid_error * math.sqrt(r.lambda1))
                for r in rows)
    pair = nodal.scaling_experiment(
        lambda n: spectral.EigenSum.torus([(1.0, "sin", (n,)), (0.5, "sin", (2 * n,))]), range(1, 65))
    prods = [r.product_radius_sqrtlambda for r in pair]
    spread = max(prods) / min(prods)
    dt = time.perf_counter() - t0
    ok = worst <= 1.0 and spread <= 1.5 and dt < 20.0
    assert verdict("6 density radius scaling", ok, f"worst/allowed {worst:.3f}, pair spread {spread:.3f}, {dt:.2f}s")


def test_criterion_07_ko_density(verdict):
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    fails = []
    for n in range(1, 33):
        if not gap.verify_ko_density(gap.GapPolynomial.from_trig({n: 1.0})).passed:
            fails.append(f"cos{n}")
    for i in range(200):
        p = gap.random_gap_polynomial(rng, 20)
        assert len(p.spectrum) <= 20
        if not gap.verify_ko_density(p).passed:
            fails.append(f"random{i}")
    dt = time.perf_counter() - t0
    ok = not fails and dt < 30.0
    assert verdict("7 KO density", ok, f"failures {fails}, {dt:.2f}s")


def test_criterion_08_sharpness_lp(verdict):
    t0 = time.perf_counter()
    interval = (0.45, 0.55)
    results = gap.gap_sweep(range(2, 17), interval, 1e-3)
    dt = time.perf_counter() - t0
    certified = all(r.feasible and r.certified for r in results)
    rechecked = all(gap.certify_positivity(r.polynomial, interval, r.certificate_step) for r in results)
    arcs = [r.positive_arc for r in results]
    ok = certified and rechecked and min(arcs) >= interval[1] - interval[0] and dt < 60.0
    assert verdict("8 sharpness LP", ok, f"min positive arc {min(arcs):.4f}, {dt:.2f}s")


def test_criterion_09_theorem3_threshold(verdict):
    t0 = time.perf_counter()
    vals = [verify_theorem3_threshold(6, 2, lam, lam).r_min_sqrt_lambda1 for lam in (1e3, 1e4, 1e5, 1e6)]
    dt = time.perf_counter() - t0
    variation = max(vals) / min(vals) - 1.0
    ok = variation < 0.2 and dt < 10.0
    assert verdict("9 polynomial weight threshold", ok, f"variation {variation:.2e}, {dt:.2f}s")


def test_criterion_10_isolated_zero(verdict):
    f = spectral.isolated_zero_example(2, 5)
    at_pole = abs(spectral.evaluate(f, np.array([[0.0, 0.0, 1.0]]))[0])
    zk, _ = spectral.zonal_harmonic(2)
    radii = []
    for g in (f, zk):
        field = nodal.sample(g, nodal.resolution_for(g, 64))
        radii.append(nodal.density_radius(nodal.distance_field(field, nodal.extract_zero_set(field))))
    ratio = radii[0] / radii[1]
    ok = at_pole <= 1e-10 and ratio <= 1.2
    assert verdict("10 isolated zero", ok, f"|f(pole)| {at_pole:.1e}, density ratio {ratio:.3f}")
