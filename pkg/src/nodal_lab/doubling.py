"""Doubling ratios of non-negative subsolutions and the checks built on them.

Every ratio is a quotient of two Gauss integrals (see
:mod:`nodal_lab.quadrature`).  Bounds come from two places:

* the integration-by-parts argument, which gives ``1 + sup_{B_r}|L v_r|``
  for the weight actually constructed (``proof_bound``);
* the calibrated ceilings ``C0 exp(C1 sigma)`` frozen in the constants file.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import constants as _const
from .poly import Polynomial, apply_laplacian_product, multi_indices
from .quadrature import EPS, Integral, Region, integrate, make_rule
from .radial import RadialExpansion, apply_laplacian_radial
from .spectral import EigenSum, ExtendedFunction, extend, product_residual_exact, residual_scale
from .weight import (
    C_RATIO,
    DEFAULT_R0,
    WeightConfig,
    assemble_weight,
    constant_estimate,
    sigma_weight,
    verify_lemma1,
)

POSITIVITY_TOL = 1e-12
VANISHING_TOL = 1e3 * EPS
DEFAULT_ORDER = 16


class PositivityError(ValueError):
    """``u`` is negative somewhere it must be non-negative."""


class VanishingMassError(ValueError):
    """The inner integral is too small to form a ratio."""


class NotSubsolutionError(ValueError):
    """``script-L u <= 0`` fails."""


class EllipticityError(ValueError):
    pass


# ---------------------------------------------------------------------------
# subsolution gallery


@dataclass(frozen=True)
class Subsolution:
    """A non-negative function with the operator it is claimed to be a subsolution of.

    ``operator`` is ``("product", gammas)``, ``("schrodinger", eta, k)`` or
    ``("general", descriptor)``.  ``polynomial`` is set for closed-form members,
    which allows exact operator checks.
    """

    tag: str
    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    operator: tuple = ()
    polynomial: Polynomial | None = field(default=None, repr=False)
    extension: ExtendedFunction | None = field(default=None, repr=False)

    def __call__(self, points) -> np.ndarray:
        return np.asarray(self.evaluator(np.atleast_2d(np.asarray(points, dtype=float))), dtype=float)


def polynomial_subsolution(p: Polynomial, tag: str, gammas: Sequence[float] = ()) -> Subsolution:
    return Subsolution(tag, p.dim, p, ("product", tuple(float(g) for g in gammas)), p)


def coordinate_square(d: int, gammas: Sequence[float] = (0.0, 0.0)) -> Subsolution:
    """``x_1^2``: non-negative, killed by the bilaplacian, no pointwise Harnack inequality."""
    return polynomial_subsolution(Polynomial.coordinate(0, d) ** 2, "x1^2", gammas)


def radial_power(k: int, d: int, gammas: Sequence[float] | None = None) -> Subsolution:
    """``|x|^(2k)``, killed by ``Delta^(k+1)``."""
    gammas = (0.0,) * (k + 1) if gammas is None else gammas
    return polynomial_subsolution(Polynomial.radial_power(k, d), f"|x|^{2 * k}", gammas)


def constant_one(d: int, gammas: Sequence[float] = (0.0,)) -> Subsolution:
    return polynomial_subsolution(Polynomial.constant(1.0, d), "1", gammas)


def extended_sum(f: EigenSum) -> Subsolution:
    """``h(x, t) = f(x) exp(sqrt(lambda_1) t)`` on the cylinder over the torus."""
    if f.manifold != "torus":
        raise ValueError("extended sums are implemented on the torus only")
    h = extend(f)
    return Subsolution("extended-sum", f.dim + 1, h.at, ("product", h.operator_shifts), None, h)


def gallery(d: int, m: int) -> list[Subsolution]:
    """Closed-form subsolutions of ``Delta^m`` in dimension ``d``."""
    g = (0.0,) * m
    out = [constant_one(d, g), radial_power(1, d, g) if m >= 2 else None, coordinate_square(d, g) if m >= 2 else None]
    return [u for u in out if u is not None]


# ---------------------------------------------------------------------------
# integrals and ratios


@dataclass(frozen=True)
class DoublingResult:
    ratio: float
    error: float
    inner: Integral
    outer: Integral

    def to_json(self) -> dict:
        return {"ratio": self.ratio, "error": self.error, "inner": self.inner.value, "outer": self.outer.value}


def _ball(d, center, radius, breaks=()):
    return Region("ball", d, radius, tuple(center), breakpoints=tuple(breaks))


def check_nonnegative(u: Callable, region: Region, n_radial: int = DEFAULT_ORDER) -> float:
    """Minimum of ``u`` on the rule nodes; raises if below ``-1e-12 max|u|``."""
    rule = make_rule(region, n_radial)
    vals = np.asarray(u(rule.points), dtype=float)
    # include the centre, which no Gauss node hits
    vals = np.concatenate([vals, np.atleast_1d(u(np.asarray(region.center)[None, :]))])
    lo, hi = float(np.min(vals)), float(np.max(np.abs(vals)))
    if lo < -POSITIVITY_TOL * hi:
        raise PositivityError(f"u takes the value {lo:.3e} on the region (max |u| = {hi:.3e})")
    return lo


def doubling_ratio(
    u: Callable,
    center: Sequence[float],
    r: float,
    d: int | None = None,
    n_radial: int = DEFAULT_ORDER,
    check_positive: bool = True,
    n_angular: int | None = None,
    vanishing_tol: float = VANISHING_TOL,
) -> DoublingResult:
    """``int_{B(center, 2r)} u / int_{B(center, r)} u`` with a combined error estimate.

    Raises :class:`VanishingMassError` when the inner integral is below
    ``vanishing_tol`` times the outer one or below its own error estimate.
    """
    center = tuple(float(c) for c in np.atleast_1d(center))
    d = d or len(center)
    if r <= 0:
        raise ValueError("r must be positive")
    outer_region = _ball(d, center, 2 * r)
    if check_positive:
        check_nonnegative(u, outer_region, n_radial)
    inner = integrate(u, _ball(d, center, r), n_radial, n_angular)
    outer = integrate(u, outer_region, n_radial, n_angular)
    if inner.value <= 0.0 or inner.value <= inner.error or inner.value <= vanishing_tol * abs(outer.value):
        raise VanishingMassError(f"inner integral {inner.value:.3e} vanishes (outer {outer.value:.3e}, error {inner.error:.3e})")
    ratio = outer.value / inner.value
    err = ratio * (outer.error / abs(outer.value) + inner.error / inner.value)
    return DoublingResult(ratio, err, inner, outer)


# ---------------------------------------------------------------------------
# integration by parts


@dataclass(frozen=True)
class IBPResult:
    tag: str
    lhs: float
    rhs: float
    residual: float
    error: float

    @property
    def passed(self) -> bool:
        return self.residual <= 10.0 * self.error

    def to_json(self) -> dict:
        return {"u": self.tag, "lhs": self.lhs, "rhs": self.rhs, "residual": self.residual,
                "error": self.error, "passed": self.passed}


def check_integration_by_parts(u: Subsolution | Polynomial, cfg: WeightConfig, n_radial: int = 24,
                               constants: dict | None = None, n_angular: int | None = None) -> IBPResult:
    """``int (L u) v_r`` against ``int u (L v_r)`` over ``B_{3r}``.

    ``L u`` is exact for polynomial ``u``.  The two sides agree exactly when
    the boundary terms vanish, which is property (i) of the weight.
    """
    p = u.polynomial if isinstance(u, Subsolution) else u
    tag = u.tag if isinstance(u, Subsolution) else "polynomial"
    if p is None:
        raise ValueError("integration by parts needs a closed-form polynomial u")
    if p.dim != cfg.d:
        raise ValueError("dimension mismatch between u and the weight")
    w = assemble_weight(cfg, constants)
    Lu = apply_laplacian_product(p, cfg.gammas)
    region = _ball(cfg.d, (0.0,) * cfg.d, 3 * cfg.r, w.breakpoints())

    def radius(x):
        return np.sqrt(np.sum(x * x, axis=1))

    # the integrands are radial times polynomial: angular order only has to cover deg u
    n_angular = n_angular or max(4, p.degree + 2)
    lhs = integrate(lambda x: Lu(x) * w.value(radius(x)), region, n_radial, n_angular)
    rhs = integrate(lambda x: p(x) * w.script_L(radius(x)), region, n_radial, n_angular)
    return IBPResult(tag, lhs.value, rhs.value, abs(lhs.value - rhs.value), lhs.error + rhs.error)


# ---------------------------------------------------------------------------
# Theorem 2


@dataclass(frozen=True)
class Verdict:
    check: str
    ratio: float
    bound: float
    proof_bound: float | None
    passed: bool
    details: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        """``1 - ratio / bound``; positive when the check passes."""
        return 1.0 - self.ratio / self.bound

    def to_json(self) -> dict:
        out = {"check": self.check, "ratio": self.ratio, "bound": self.bound, "proof_bound": self.proof_bound,
               "margin": self.margin, "passed": self.passed}
        out.update(self.details)
        return out


def _check_subsolution(u: Subsolution, gammas: Sequence[float], region: Region) -> float:
    """Largest positive value of ``script-L u`` (0 when it is a subsolution)."""
    if u.polynomial is not None:
        Lu = apply_laplacian_product(u.polynomial, gammas)
        if Lu.is_constant():
            worst = Lu.constant_value()
        else:
            worst = float(np.max(Lu(make_rule(region, DEFAULT_ORDER).points)))
        scale = max(1.0, u.polynomial.max_coefficient())
        if worst > 1e-12 * scale:
            raise NotSubsolutionError(f"script-L u reaches {worst:.3e} > 0")
        return max(worst, 0.0)
    if u.extension is not None:
        if tuple(gammas) != tuple(u.extension.operator_shifts):
            raise NotSubsolutionError("weight shifts differ from the operator annihilating the extension")
        res = product_residual_exact(u.extension)
        if res > 1e-12 * residual_scale(u.extension):
            raise NotSubsolutionError(f"extension residual {res:.3e}")
        return 0.0
    return 0.0


def verify_theorem2(u: Subsolution, cfg: WeightConfig, center: Sequence[float] | None = None,
                    n_radial: int = DEFAULT_ORDER, constants: dict | None = None) -> Verdict:
    """Doubling ratio of ``u`` on ``B(center, r)`` against the calibrated constant."""
    cfg.validate()
    if u.dim != cfg.d:
        raise ValueError(f"u lives in dimension {u.dim}, the weight in {cfg.d}")
    center = tuple(center) if center is not None else (0.0,) * cfg.d
    big = _ball(cfg.d, center, cfg.c * cfg.r)
    check_nonnegative(u, big, n_radial)
    _check_subsolution(u, cfg.gammas, big)
    res = doubling_ratio(u, center, cfg.r, cfg.d, n_radial, check_positive=False)
    report = verify_lemma1(cfg, constants)
    bound = constant_estimate(cfg.d, cfg.m, cfg.gamma, cfg.r0, cfg.case, constants)
    passed = report.passed and res.ratio <= bound and res.ratio <= report.doubling_bound
    return Verdict("theorem2", res.ratio, bound, report.doubling_bound, passed,
                   {"u": u.tag, "d": cfg.d, "m": cfg.m, "gamma_max": cfg.gamma, "r": cfg.r,
                    "alpha": report.alpha, "ratio_error": res.error})


def cylinder_ratio(u: Callable, center: Sequence[float], r: float, d: int, n_radial: int = DEFAULT_ORDER) -> DoublingResult:
    """``int_{B_2r x [-2r, 2r]} u / int_{B_r x [-r, r]} u`` about ``center`` in R^(d+1)."""
    center = tuple(float(c) for c in center)
    outer = integrate(u, Region("cylinder", d, 2 * r, center, half_height=2 * r), n_radial)
    inner = integrate(u, Region("cylinder", d, r, center, half_height=r), n_radial)
    if inner.value <= 0 or inner.value <= inner.error or inner.value <= VANISHING_TOL * abs(outer.value):
        raise VanishingMassError("inner cylinder integral vanishes")
    ratio = outer.value / inner.value
    return DoublingResult(ratio, ratio * (outer.error / abs(outer.value) + inner.error / inner.value), inner, outer)


def cylinder_bound(ball_constant: float) -> float:
    """Cylinder doubling constant from the ball one: inscribe in a ball of twice the radius, double twice."""
    return ball_constant ** 2


# ---------------------------------------------------------------------------
# Theorem 1 through the extension


@dataclass(frozen=True)
class ContradictionResult:
    lambda1: float
    m: int
    r: float
    lhs_exp: float
    rhs_bound: float
    cylinder_ratio: float
    time_ratio: float
    r_limit: float

    @property
    def holds(self) -> bool:
        return self.lhs_exp <= self.rhs_bound

    def to_json(self) -> dict:
        return {"lambda1": self.lambda1, "m": self.m, "r": self.r, "lhs_exp": self.lhs_exp,
                "rhs_bound": self.rhs_bound, "cylinder_ratio": self.cylinder_ratio,
                "time_ratio": self.time_ratio, "r_limit": self.r_limit, "holds": self.holds}


def sample_ball_torus(f: EigenSum, p: Sequence[float], radius: float, n: int = 64) -> np.ndarray:
    """Values of ``f`` on a polar sample of the torus ball ``B(p, radius)``."""
    region = Region("ball", f.dim, radius, tuple(p))
    pts = make_rule(region, n // 4 + 1, n).points
    pts = np.concatenate([pts, np.asarray(p, dtype=float)[None, :]])
    return f(pts)


def theorem1_contradiction_experiment(f: EigenSum, p: Sequence[float], r: float, n_radial: int = DEFAULT_ORDER,
                                      constants: dict | None = None) -> ContradictionResult:
    """Both sides of the reduction from the doubling estimate to the density bound.

    With ``h = f exp(mu t)`` and ``f > 0`` near ``p``, the cylinder doubling
    estimate forces ``exp(mu r) <= 2 cosh(mu r) <= C``; the second value is
    the time-integral quotient ``int_{-2r}^{2r} e^{mu t} / int_{-r}^{r} e^{mu t}``.
    ``r_limit = log(C) / mu`` is the largest radius compatible with positivity.
    """
    if f.manifold != "torus":
        raise ValueError("the experiment runs on the torus")
    vals = sample_ball_torus(f, p, C_RATIO * r)
    if np.min(vals) <= 0.0:
        raise PositivityError("f is not positive on B(p, 3r)")
    h = extend(f)
    mu = h.mu
    u = extended_sum(f)
    center = tuple(float(x) for x in p) + (0.0,)
    cyl = cylinder_ratio(u, center, r, f.dim, n_radial)
    ball_c = constant_estimate(f.dim + 1, f.m, 0.0, DEFAULT_R0, "a", constants)
    bound = cylinder_bound(ball_c)
    time_ratio = 2.0 * math.cosh(mu * r)
    return ContradictionResult(f.lambda1, f.m, r, math.exp(mu * r), bound, cyl.ratio, time_ratio,
                               math.log(bound) / mu)


# ---------------------------------------------------------------------------
# Theorem 4: general constant-coefficient operators


@dataclass(frozen=True)
class GeneralOperator2m:
    """``sum_{|mu| = 2m} a_mu d^mu + sum_{|mu| < 2m} b_mu d^mu`` with constant coefficients."""

    dim: int
    m: int
    top: dict
    lower: dict = field(default_factory=dict)
    C1: float | None = None
    C2: float | None = None

    def __post_init__(self):
        top = {tuple(k): float(v) for k, v in dict(self.top).items()}
        lower = {tuple(k): float(v) for k, v in dict(self.lower).items()}
        for mu in top:
            if len(mu) != self.dim or sum(mu) != 2 * self.m:
                raise ValueError(f"top multi-index {mu} is not of order {2 * self.m}")
        for mu in lower:
            if len(mu) != self.dim or sum(mu) >= 2 * self.m:
                raise ValueError(f"lower multi-index {mu} must have order < {2 * self.m}")
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "lower", lower)

    @classmethod
    def polyharmonic(cls, dim: int, m: int, lower: dict | None = None) -> "GeneralOperator2m":
        """``Delta^m`` written out in multi-indices, plus optional lower-order terms."""
        lap = Polynomial.radial_power(m, dim)  # symbol |xi|^(2m)
        return cls(dim, m, dict(lap.terms), lower or {})

    def symbol(self, xi: np.ndarray) -> np.ndarray:
        xi = np.atleast_2d(xi)
        out = np.zeros(len(xi))
        for mu, a in self.top.items():
            out += a * np.prod(xi ** np.array(mu), axis=1)
        return out

    def ellipticity(self, samples: int = 4096) -> float:
        """``min_{|xi| = 1}`` of the principal symbol on a dense deterministic sample."""
        if self.dim == 1:
            xi = np.array([[1.0], [-1.0]])
        elif self.dim == 2:
            t = np.linspace(0, 2 * math.pi, samples, endpoint=False)
            xi = np.stack([np.cos(t), np.sin(t)], axis=1)
        else:
            n = int(math.sqrt(samples))
            rule = make_rule(Region("ball", 3, 1.0), 1, n)
            xi = rule.points / np.linalg.norm(rule.points, axis=1)[:, None]
        return float(np.min(self.symbol(xi)))

    def coefficient_bound(self) -> float:
        return max([abs(v) for v in self.top.values()] + [abs(v) for v in self.lower.values()])

    def apply(self, p: Polynomial) -> Polynomial:
        out = Polynomial.constant(0.0, self.dim)
        for mu, a in list(self.top.items()) + list(self.lower.items()):
            out = out + p.partial(mu) * a
        return out

    def constants(self) -> tuple[float, float]:
        c1 = self.C1 if self.C1 is not None else self.ellipticity()
        c2 = self.C2 if self.C2 is not None else self.coefficient_bound()
        return c1, c2


def subsolution_excess(op: GeneralOperator2m, u: Polynomial, center: Sequence[float], radius: float,
                       n_radial: int = DEFAULT_ORDER) -> float:
    """Largest value of ``L u`` on ``B(center, radius)`` above the roundoff floor, else 0."""
    Lu = op.apply(u)
    if Lu.is_constant():
        worst = Lu.constant_value()
    else:
        worst = float(np.max(Lu(make_rule(_ball(op.dim, center, radius), n_radial).points)))
    return worst if worst > 1e-12 * max(1.0, u.max_coefficient()) else 0.0


def theorem4_bound(m: int, C1: float, C2: float, constants: dict | None = None) -> float:
    """Recorded ceiling ``A exp(B m) max(1, C2 / C1)^(2m)`` from the calibration sweep."""
    sec = _const.section(constants or _const.load_constants(), "theorem4")
    return float(sec["A"] * math.exp(sec["B"] * m) * max(1.0, C2 / C1) ** (2 * m))


def verify_theorem4(op: GeneralOperator2m, u: Polynomial, R: float, center: Sequence[float] | None = None,
                    n_radial: int = DEFAULT_ORDER, constants: dict | None = None, tag: str = "u") -> Verdict:
    if 4 * R > 1.0 + 1e-12:
        raise ValueError("need 4R <= 1")
    if u.dim != op.dim:
        raise ValueError("dimension mismatch")
    C1, C2 = op.constants()
    measured = op.ellipticity()
    if measured <= 1e-12 * op.coefficient_bound() or measured < C1 * (1 - 1e-12):
        raise EllipticityError(f"principal symbol minimum {measured:.4g} below C1 = {C1:.4g}")
    center = tuple(center) if center is not None else (0.0,) * op.dim
    big = _ball(op.dim, center, 4 * R)
    check_nonnegative(u, big, n_radial)
    worst = subsolution_excess(op, u, center, 4 * R, n_radial)
    if worst > 0:
        raise NotSubsolutionError(f"operator applied to u reaches {worst:.4g} > 0")
    res = doubling_ratio(u, center, R, op.dim, n_radial, check_positive=False)
    bound = theorem4_bound(op.m, C1, C2, constants)
    return Verdict("theorem4", res.ratio, bound, None, res.ratio <= bound,
                   {"u": tag, "d": op.dim, "m": op.m, "C1": C1, "C2": C2, "R": R})


def theorem4_gallery(d: int, m: int) -> list[tuple[str, Polynomial]]:
    """Non-negative polynomials killed by ``Delta^m`` (and by its lower-order perturbations with ``b <= 0``)."""
    x = [Polynomial.coordinate(i, d) for i in range(d)]
    out = [("1", Polynomial.constant(1.0, d))]
    for j in range(1, m):
        out.append((f"x1^{2 * j}", x[0] ** (2 * j)))
        out.append((f"|x|^{2 * j}", Polynomial.radial_power(j, d)))
    if d >= 2 and m >= 3:
        out.append(("(x1^2-x2^2)^2", (x[0] ** 2 - x[1] ** 2) ** 2))
    if m >= 2:
        out.append(("(x1-0.1)^2", (x[0] - 0.1) ** 2))
    return out


# ---------------------------------------------------------------------------
# Schrodinger operators with inverse-square potentials


@dataclass(frozen=True)
class SchrodingerResult:
    k: int
    d: int
    eta: float
    ratio: float
    exact_ratio: float
    bound: float
    residual: float

    @property
    def log2_ratio(self) -> float:
        return math.log2(self.ratio)

    @property
    def passed(self) -> bool:
        return self.ratio <= self.bound

    def to_json(self) -> dict:
        return {"k": self.k, "d": self.d, "eta": self.eta, "ratio": self.ratio, "exact_ratio": self.exact_ratio,
                "bound": self.bound, "residual": self.residual, "passed": self.passed}


def schrodinger_eta(k: int, d: int) -> float:
    return float(2 * k * (2 * k + d - 2))


def schrodinger_alpha(eta: float, d: int, constants: dict | None = None) -> float:
    sec = _const.section(constants or _const.load_constants(), "schrodinger")
    return float(d + sec["A0"] + sec["A1"] * math.sqrt(eta))


def schrodinger_bound(eta: float, constants: dict | None = None) -> float:
    sec = _const.section(constants or _const.load_constants(), "schrodinger")
    return float(math.exp(sec["C0"] + sec["C1"] * math.sqrt(eta)))


def schrodinger_weight_config(eta: float, d: int, r: float = DEFAULT_R0 / C_RATIO, constants: dict | None = None) -> WeightConfig:
    """Weight for ``Delta + V`` with the worst-case potential ``V = -eta / |x|^2``."""
    return WeightConfig(d, 1, (0.0,), r, alpha=schrodinger_alpha(eta, d, constants), potential=-eta)


def schrodinger_case(k: int, d: int, r: float = 0.1, n_radial: int = DEFAULT_ORDER,
                     constants: dict | None = None) -> SchrodingerResult:
    """``u = |x|^(2k)`` solves ``Delta u + V u = 0`` with ``V = -eta / |x|^2``, ``eta = 2k(2k + d - 2)``."""
    if d < 3:
        raise ValueError("the inverse-square setting needs d >= 3")
    if k < 1:
        raise ValueError("k >= 1")
    eta = schrodinger_eta(k, d)
    u = RadialExpansion.power(2.0 * k, d)
    resid = apply_laplacian_radial(u) + u.times_power(-2.0, -eta)
    residual = max((abs(c) for c in resid.coefficients), default=0.0)
    # radial integrand: a 1-D Gauss-Legendre rule in rho with weight rho^(d-1)
    # is exact here and works in any dimension.  The true ratio 2^(2k+d)
    # reaches ~2^43 at k = 20, far beyond the usual vanishing-mass cut-off.
    nodes, weights = np.polynomial.legendre.leggauss(max(n_radial, k + d + 2))

    def mass(R):
        rho = R * (nodes + 1) / 2
        return float(np.sum(weights * rho ** (2 * k + d - 1)) * R / 2)

    ratio = mass(2 * r) / mass(r)
    return SchrodingerResult(k, d, eta, ratio, 2.0 ** (2 * k + d), schrodinger_bound(eta, constants), residual)


def schrodinger_proof_bound(eta: float, d: int, constants: dict | None = None) -> float:
    """``1 + sup_{B_r}|(Delta + V) v_r|`` for the weight with ``V = -eta/|x|^2``."""
    report = verify_lemma1(schrodinger_weight_config(eta, d, constants=constants), constants)
    if not report.passed:
        report.raise_for_failure()
    return report.doubling_bound


def sweep_rows_theorem2(d: int, m: int, gammas: Sequence[float], rs: Sequence[float], u: Subsolution,
                        constants: dict | None = None) -> list[dict]:
    """CSV rows ``(d, m, gamma_max, r, ratio, bound, margin, pass)``."""
    rows = []
    for r in rs:
        v = verify_theorem2(u, WeightConfig(d, m, tuple(gammas), r), constants=constants)
        rows.append({"d": d, "m": m, "gamma_max": max((abs(g) for g in gammas), default=0.0), "r": r,
                     "ratio": v.ratio, "bound": v.bound, "margin": v.margin, "pass": v.passed})
    return rows


SWEEP_COLUMNS = ("d", "m", "gamma_max", "r", "ratio", "bound", "margin", "pass")


def sigma_theorem1(d: int, m: int) -> float:
    """``sigma(m)`` in the density theorem for a d-dimensional manifold (weight in dimension d + 1)."""
    return sigma_weight(d + 1, m)
