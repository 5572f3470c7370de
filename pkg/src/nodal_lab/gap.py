"""Spectral-gap trigonometric polynomials on the circle.

Two experiments:

* the density radius ``R(S) = sum_{nu in S} 1/(8|nu|)``: every arc of length
  ``2R(S)`` contains a zero of any real polynomial with spectrum in ``S``;
* the converse: a polynomial with spectrum in ``[-2N, -N] u [N, 2N]`` that is
  positive on a fixed arc, found by linear programming and certified with
  the derivative bound ``|f'| <= 2 pi N_max sum |c(nu)|``.

Frequencies on the circle are plain integers; ``R(S)`` uses ``|nu|`` directly,
without the ``2 pi`` of the Laplace eigenvalue.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import brentq, linprog, minimize_scalar

TWO_PI = 2.0 * math.pi
SAMPLES_PER_PERIOD = 16
ROOT_XTOL = 1e-14
GAP_TOL = 1e-10


class ResolutionRefused(ValueError):
    """The sampling grid does not resolve the highest frequency."""


class SolverFailure(RuntimeError):
    """The LP solver stopped without a verdict (distinct from infeasibility)."""


def _norm(nu) -> float:
    return float(np.linalg.norm(np.atleast_1d(nu)))


def _neg(nu):
    return -nu if isinstance(nu, int) else tuple(-x for x in nu)


@dataclass(frozen=True)
class SpectrumSet:
    """Finite ``S`` in ``Z`` or ``Z^d`` with ``0 not in S`` and ``S = -S``."""

    frequencies: frozenset

    def __post_init__(self):
        freqs = frozenset(int(v) if np.ndim(v) == 0 else tuple(int(x) for x in v) for v in self.frequencies)
        for nu in freqs:
            if _norm(nu) == 0:
                raise ValueError("0 is not allowed in a spectrum")
            if _neg(nu) not in freqs:
                raise ValueError(f"spectrum is not symmetric: {nu} present, {_neg(nu)} missing")
        object.__setattr__(self, "frequencies", freqs)

    @classmethod
    def symmetric(cls, positive: Iterable) -> "SpectrumSet":
        """``S = P u -P`` from a list of frequencies."""
        pos = list(positive)
        return cls(frozenset(pos) | frozenset(_neg(int(v) if np.ndim(v) == 0 else tuple(v)) for v in pos))

    @classmethod
    def band(cls, lo: int, hi: int) -> "SpectrumSet":
        """``([-hi, -lo] u [lo, hi]) n Z``."""
        if lo < 1 or hi < lo:
            raise ValueError("need 1 <= lo <= hi")
        return cls.symmetric(range(lo, hi + 1))

    @property
    def n_max(self) -> float:
        return max((_norm(nu) for nu in self.frequencies), default=0.0)

    def __len__(self) -> int:
        return len(self.frequencies)

    def __or__(self, other: "SpectrumSet") -> "SpectrumSet":
        return SpectrumSet(self.frequencies | other.frequencies)

    def without(self, nu) -> "SpectrumSet":
        return SpectrumSet(self.frequencies - {nu, _neg(nu)})


def ko_radius(S: SpectrumSet) -> float:
    """``R(S) = sum_{nu in S} 1 / (8 |nu|)``, summed in a fixed order."""
    return float(math.fsum(1.0 / (8.0 * _norm(nu)) for nu in sorted(S.frequencies, key=lambda v: (_norm(v), str(v)))))


@dataclass(frozen=True)
class TrigPolynomial:
    """``sum_nu c(nu) exp(2 pi i nu x)`` on the circle with ``c(-nu) = conj c(nu)``.

    The constant term is allowed here; :class:`GapPolynomial` forbids it.
    """

    coefficients: Mapping[int, complex]

    def __post_init__(self):
        coeffs = {int(k): complex(v) for k, v in dict(self.coefficients).items() if v != 0}
        for k, v in coeffs.items():
            w = coeffs.get(-k, 0.0)
            if abs(w - v.conjugate()) > 1e-14 * max(1.0, abs(v)):
                raise ValueError(f"c({-k}) must be the conjugate of c({k}) for a real polynomial")
        object.__setattr__(self, "coefficients", dict(sorted(coeffs.items())))

    @classmethod
    def from_trig(cls, cos: Mapping[int, float] | None = None, sin: Mapping[int, float] | None = None):
        """``sum a_n cos(2 pi n x) + b_n sin(2 pi n x)`` with ``n >= 0``."""
        cos, sin = dict(cos or {}), dict(sin or {})
        c: dict[int, complex] = {}
        for n in set(cos) | set(sin):
            a, b = float(cos.get(n, 0.0)), float(sin.get(n, 0.0))
            if n < 0:
                raise ValueError("use non-negative frequencies in from_trig")
            if n == 0:
                c[0] = complex(a)
            else:
                c[n] = complex(a, -b) / 2
                c[-n] = complex(a, b) / 2
        return cls(c)

    @property
    def n_max(self) -> int:
        return max((abs(k) for k in self.coefficients), default=0)

    def abs_sum(self) -> float:
        """``sum_nu |c(nu)|``."""
        return float(sum(abs(v) for v in self.coefficients.values()))

    def trig(self) -> tuple[dict[int, float], dict[int, float]]:
        """``(a_n, b_n)`` for ``n >= 0``."""
        a, b = {}, {}
        for k, v in self.coefficients.items():
            if k == 0:
                a[0] = v.real
            elif k > 0:
                a[k], b[k] = 2 * v.real, -2 * v.imag
        return a, b

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.trig()
        out = np.zeros_like(x)
        for n, v in a.items():
            out = out + v * np.cos(TWO_PI * n * x)
        for n, v in b.items():
            out = out + v * np.sin(TWO_PI * n * x)
        return out if out.ndim else float(out)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.trig()
        out = np.zeros_like(x)
        for n, v in a.items():
            out = out - TWO_PI * n * v * np.sin(TWO_PI * n * x)
        for n, v in b.items():
            out = out + TWO_PI * n * v * np.cos(TWO_PI * n * x)
        return out

    def to_json(self) -> dict:
        return {"coefficients": [[k, v.real, v.imag] for k, v in self.coefficients.items()]}


@dataclass(frozen=True)
class GapPolynomial(TrigPolynomial):
    """A real trigonometric polynomial whose coefficients live exactly on ``spectrum``."""

    spectrum: SpectrumSet = field(default=None)

    def __post_init__(self):
        super().__post_init__()
        if self.spectrum is None:
            object.__setattr__(self, "spectrum", SpectrumSet(frozenset(self.coefficients)))
        stray = [k for k in self.coefficients if k not in self.spectrum.frequencies]
        if stray:
            raise ValueError(f"coefficients outside the spectrum: {stray}")

    @classmethod
    def from_trig(cls, cos=None, sin=None, spectrum: SpectrumSet | None = None) -> "GapPolynomial":
        base = TrigPolynomial.from_trig(cos, sin)
        if 0 in base.coefficients:
            raise ValueError("a gap polynomial has no constant term")
        return cls(base.coefficients, spectrum)

    def to_json(self) -> dict:
        out = super().to_json()
        out["spectrum"] = sorted(self.spectrum.frequencies)
        return out


def random_gap_polynomial(rng: np.random.Generator, max_size: int = 20, max_freq: int = 64) -> GapPolynomial:
    """Random signs and magnitudes on a random symmetric spectrum with ``|S| <= max_size``."""
    k = int(rng.integers(1, max_size // 2 + 1))
    lo = int(rng.integers(1, max_freq // 2 + 1))
    hi = max(lo + k - 1, int(rng.integers(lo, max_freq + 1)))
    pos = sorted(rng.choice(np.arange(lo, hi + 1), size=k, replace=False).tolist())
    mags = rng.uniform(0.1, 1.0, size=k) * rng.choice([-1.0, 1.0], size=k)
    phases = rng.uniform(0, TWO_PI, size=k)
    cos = {int(n): float(a * math.cos(p)) for n, a, p in zip(pos, mags, phases)}
    sin = {int(n): float(a * math.sin(p)) for n, a, p in zip(pos, mags, phases)}
    return GapPolynomial.from_trig(cos, sin, SpectrumSet.symmetric(pos))


# ---------------------------------------------------------------------------
# zeros and the density check


def circle_zeros(p: TrigPolynomial, grid_size: int) -> np.ndarray:
    """Zeros on ``[0, 1)``: sign changes on the grid refined by bisection, plus touching zeros."""
    n_max = p.n_max
    if n_max == 0:
        return np.array([])
    if grid_size < SAMPLES_PER_PERIOD * n_max:
        raise ResolutionRefused(f"grid of {grid_size} points needs at least {SAMPLES_PER_PERIOD * n_max}")
    x = np.arange(grid_size + 1) / grid_size
    f = p(x)
    scale = p.abs_sum()
    zeros = []
    for i in range(grid_size):
        a, b = f[i], f[i + 1]
        if a == 0.0:
            zeros.append(x[i])
        elif a * b < 0:
            zeros.append(brentq(p, x[i], x[i + 1], xtol=ROOT_XTOL))
    # double zeros: local minima of |f| without a sign change
    g = np.abs(f[:-1])
    for i in range(grid_size):
        prev, nxt = g[i - 1], g[(i + 1) % grid_size]
        if g[i] <= prev and g[i] <= nxt and g[i] < 1e-3 * scale:
            if f[i - 1] * f[(i + 1) % grid_size] > 0 and f[i] != 0.0:
                lo, hi = x[i] - 1.0 / grid_size, x[i] + 1.0 / grid_size
                res = minimize_scalar(lambda t: p(t) ** 2, bounds=(lo, hi), method="bounded",
                                      options={"xatol": 1e-14})
                if abs(p(res.x)) <= 1e-10 * scale:
                    zeros.append(res.x % 1.0)
    z = np.sort(np.mod(np.asarray(zeros, dtype=float), 1.0))
    if len(z) > 1:
        keep = np.concatenate([[True], np.diff(z) > 1e-12])
        z = z[keep]
        if z[-1] - z[0] > 1 - 1e-12:
            z = z[:-1]
    return z


def max_zero_gap(zeros: np.ndarray) -> float:
    """Largest arc between consecutive zeros on the circle (1 if there is at most one zero)."""
    if len(zeros) == 0:
        return math.inf
    if len(zeros) == 1:
        return 1.0
    gaps = np.diff(np.concatenate([zeros, [zeros[0] + 1.0]]))
    return float(np.max(gaps))


@dataclass(frozen=True)
class KOVerdict:
    max_gap: float
    radius: float
    passed: bool
    n_zeros: int

    @property
    def margin(self) -> float:
        return 1.0 - self.max_gap / (2.0 * self.radius)

    def to_json(self) -> dict:
        return {"max_gap": self.max_gap, "R": self.radius, "passed": self.passed, "n_zeros": self.n_zeros,
                "margin": self.margin}


def verify_ko_density(p: GapPolynomial, grid_size: int | None = None) -> KOVerdict:
    """Every closed arc of length ``2 R(S)`` contains a zero iff the largest zero gap is ``<= 2 R(S)``."""
    grid_size = grid_size or 64 * p.spectrum.n_max
    zeros = circle_zeros(p, int(grid_size))
    R = ko_radius(p.spectrum)
    gap = max_zero_gap(zeros)
    return KOVerdict(gap, R, gap <= 2.0 * R + GAP_TOL, len(zeros))


# ---------------------------------------------------------------------------
# positivity certificate


def _arc_grid(interval: Sequence[float], h: float) -> np.ndarray:
    a, b = float(interval[0]), float(interval[1])
    if b < a:
        b += 1.0
    n = max(1, math.ceil((b - a) / h))
    return np.linspace(a, b, n + 1)


def certify_positivity(p: TrigPolynomial, interval: Sequence[float], h: float) -> bool:
    """``min_grid f - h 2 pi N_max sum|c| > 0`` on a grid of spacing at most ``h``.

    Every point of the arc is within ``h`` of a grid node and ``|f'|`` is at
    most ``2 pi N_max sum |c|``, so a positive result proves ``f > 0`` on the arc.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    return certified_margin(p, interval, h) > 0.0


def certified_margin(p: TrigPolynomial, interval: Sequence[float], h: float) -> float:
    x = _arc_grid(interval, h)
    return float(np.min(p(x))) - h * TWO_PI * p.n_max * p.abs_sum()


# ---------------------------------------------------------------------------
# LP search


@dataclass(frozen=True)
class GapSearchResult:
    N: int
    interval: tuple[float, float]
    delta: float
    status: str  # "feasible", "infeasible" or "solver_error"
    polynomial: GapPolynomial | None
    optimum: float
    certified: bool
    certificate_step: float
    positive_arc: float
    message: str = ""

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def to_json(self) -> dict:
        coeffs = []
        if self.polynomial is not None:
            a, b = self.polynomial.trig()
            coeffs = [{"n": n, "cos": a.get(n, 0.0), "sin": b.get(n, 0.0)} for n in sorted(set(a) | set(b))]
        return {"N": self.N, "interval": list(self.interval), "delta": self.delta, "status": self.status,
                "optimum": self.optimum, "coefficients": coeffs, "certified": self.certified,
                "certificate_step": self.certificate_step, "positive_arc": self.positive_arc}


def positive_arc_length(p: TrigPolynomial, interval: Sequence[float], grid_size: int | None = None) -> float:
    """Length of the maximal arc around ``interval`` on which ``p > 0`` (0 if ``p`` is not positive there)."""
    a, b = float(interval[0]), float(interval[1])
    mid = 0.5 * (a + b)
    if p(mid) <= 0:
        return 0.0
    zeros = circle_zeros(p, grid_size or max(64 * p.n_max, 1024))
    if len(zeros) == 0:
        return 1.0
    left = zeros[zeros <= mid % 1.0]
    right = zeros[zeros > mid % 1.0]
    lo = left[-1] if len(left) else zeros[-1] - 1.0
    hi = right[0] if len(right) else zeros[0] + 1.0
    return float(hi - lo)


def find_positive_gap_polynomial(
    N: int,
    interval: Sequence[float] = (0.45, 0.55),
    delta: float = 1e-3,
    grid_step: float | None = None,
) -> GapSearchResult:
    """Largest ``t`` with ``f(x_i) >= t`` on a grid of the arc and ``sum(|a_n| + |b_n|) <= 1``.

    ``f = sum_{n=N}^{2N} a_n cos(2 pi n x) + b_n sin(2 pi n x)``; coefficients
    are split into positive and negative parts so that the normalisation is
    linear.  Feasible when the optimum reaches ``delta``.  The returned
    polynomial is then certified on a grid fine enough for the derivative
    bound.
    """
    if N < 1:
        raise ValueError("N >= 1")
    if delta <= 0:
        raise ValueError("delta > 0")
    a, b = float(interval[0]), float(interval[1])
    ns = np.arange(N, 2 * N + 1)
    step = grid_step or 1.0 / (256 * N)
    if step > 1.0 / (64 * N):
        raise ValueError("grid step must be at most 1/(64N)")
    x = _arc_grid((a, b), step)
    C = np.cos(TWO_PI * np.outer(x, ns))
    S = np.sin(TWO_PI * np.outer(x, ns))
    basis = np.hstack([C, S])
    k = basis.shape[1]
    # variables: [u+ (k), u- (k), t]; maximise t
    cost = np.zeros(2 * k + 1)
    cost[-1] = -1.0
    A_ub = np.vstack([
        np.hstack([-basis, basis, np.ones((len(x), 1))]),
        np.concatenate([np.ones(2 * k), [0.0]])[None, :],
    ])
    b_ub = np.concatenate([np.zeros(len(x)), [1.0]])
    bounds = [(0, None)] * (2 * k) + [(None, None)]
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    iv = (a, b)
    if res.status != 0:
        return GapSearchResult(N, iv, delta, "solver_error", None, math.nan, False, step, 0.0, res.message)
    t = float(-res.fun)
    coef = res.x[:k] - res.x[k:2 * k]
    coef[np.abs(coef) < 1e-15] = 0.0
    cos = {int(n): float(c) for n, c in zip(ns, coef[: len(ns)]) if c}
    sin = {int(n): float(c) for n, c in zip(ns, coef[len(ns):]) if c}
    if t < delta:
        return GapSearchResult(N, iv, delta, "infeasible", None, t, False, step, 0.0,
                               f"best achievable margin {t:.3e} < delta")
    poly = GapPolynomial.from_trig(cos, sin, SpectrumSet.band(N, 2 * N))
    # certificate step: half the slack that the derivative bound may eat
    h = min(step, t / (2.0 * TWO_PI * poly.n_max * max(poly.abs_sum(), 1e-300)))
    ok = certify_positivity(poly, iv, h)
    return GapSearchResult(N, iv, delta, "feasible", poly, t, ok, h, positive_arc_length(poly, iv))


def gap_sweep(Ns: Iterable[int], interval=(0.45, 0.55), delta: float = 1e-3, threads: int = 1) -> list[GapSearchResult]:
    """Independent LP solves over ``Ns``; order of the output follows ``Ns``."""
    Ns = list(Ns)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda n: find_positive_gap_polynomial(n, interval, delta), Ns))
    return [find_positive_gap_polynomial(n, interval, delta) for n in Ns]


SWEEP_COLUMNS = ("N", "interval_length", "positive_arc", "delta", "optimum", "certified")


def write_sweep_csv(results: Sequence[GapSearchResult], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_COLUMNS)
        for r in results:
            w.writerow([r.N, f"{r.interval[1] - r.interval[0]:.6g}", f"{r.positive_arc:.6g}", f"{r.delta:.6g}",
                        f"{r.optimum:.6e}", int(r.certified)])


def write_certificate(result: GapSearchResult, path) -> None:
    Path(path).write_text(json.dumps(result.to_json(), indent=2, sort_keys=True) + "\n")
