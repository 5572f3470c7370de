"""Radial weights for the integral doubling estimate.

The weight on ``B_{3r}`` starts from ``|x|^-alpha``, subtracts the Taylor
polynomial of order ``2m - 1`` at ``|x| = 3r`` so that every derivative up to
order ``2m - 1`` vanishes on the sphere, and is then switched off inside
``B_{r/2}`` by a piecewise-polynomial cutoff built from repeated
convolutions of box functions.  All operator evaluations are exact (see
:mod:`nodal_lab.radial`); only maxima and minima are taken on dense grids.

Internally everything lives in the unit frame ``s = |x| / (3r)``, where
``Delta_x = Delta_s / (3r)^2``.  A shift ``gamma`` becomes ``9 r^2 gamma``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize_scalar

from .constants import load_constants, weight_entry
from .radial import (
    PieceExpansion,
    RadialExpansion,
    apply_factors,
    apply_power_Lm,
)

C_RATIO = 3.0
DEFAULT_R0 = 0.5
ANNULUS_GRID = 4096
CHECK_GRID = 8192
PIECE_GRID = 512
ALPHA_MAX = 400.0
# scale applied to the unit-frame expansion so that values stay in range
_FRAME = 2.0 / 3.0


class WeightConstraintError(ValueError):
    """A property of the weight failed; names the property and where."""

    def __init__(self, prop: str, location: float, value: float, detail: str = ""):
        self.prop = prop
        self.location = location
        self.value = value
        msg = f"property ({prop}) violated at |x| = {location:.6g}: value {value:.6g}"
        super().__init__(msg + (f"; {detail}" if detail else ""))


# ---------------------------------------------------------------------------
# Taylor remainder


@dataclass(frozen=True)
class TaylorRemainderWeight:
    alpha: float
    m: int
    r: float
    dim: int
    expansion: RadialExpansion

    @property
    def outer(self) -> float:
        return 3.0 * self.r


def taylor_polynomial(alpha: float, order: int, s: float, dim: int) -> RadialExpansion:
    """``P_l(rho; s)``, the order-``l`` Taylor polynomial of ``rho^-alpha`` at ``s``, in powers of ``rho``."""
    terms = []
    rising = 1.0
    for k in range(order + 1):
        if k > 0:
            rising *= alpha + k - 1
        lead = rising / (math.factorial(k) * s ** (alpha + k))
        for l in range(k + 1):
            terms.append((lead * math.comb(k, l) * (-1) ** l * s ** (k - l), float(l)))
    return RadialExpansion(tuple(terms), dim)


def taylor_remainder(alpha: float, m: int, r: float, d: int) -> TaylorRemainderWeight:
    """``|x|^-alpha - P_{2m-1}(|x|; 3r)`` as an exact expansion."""
    if alpha <= 0 or r <= 0:
        raise ValueError("alpha and r must be positive")
    if m < 1:
        raise ValueError("m >= 1")
    v = RadialExpansion.power(-float(alpha), d)
    e = v - taylor_polynomial(alpha, 2 * m - 1, 3.0 * r, d)
    return TaylorRemainderWeight(float(alpha), m, float(r), d, e)


# ---------------------------------------------------------------------------
# alpha selection and the theorem constant


def sigma_weight(d: int, m: int) -> float:
    """Growth rate of ``alpha`` in ``m``: ``m^((d+1)/2)`` for ``d >= 4``, else ``m log^2(m+1)``."""
    if d >= 4:
        return m ** ((d + 1) / 2.0)
    return m * math.log(m + 1) ** 2


def gamma_max(gammas: Sequence[float]) -> float:
    return max((abs(g) for g in gammas), default=0.0)


def _case_of(gammas: Sequence[float]) -> str:
    return "a" if all(g >= 0 for g in gammas) else "b"


def select_alpha(
    d: int,
    m: int,
    gamma: float = 0.0,
    r0: float = DEFAULT_R0,
    case: str = "a",
    K: float | None = None,
    Kp: float | None = None,
    constants: dict | None = None,
) -> float:
    """``K sigma(d, m) + [case b] K' sqrt(m gamma) r0``; calibrated ``K, K'`` unless given."""
    if m < 1:
        raise ValueError("m >= 1")
    if case not in ("a", "b"):
        raise ValueError("case must be 'a' or 'b'")
    if K is None or (case == "b" and Kp is None):
        entry = weight_entry(constants or load_constants(), d, m, case)
        K = entry["K"] if K is None else K
        Kp = entry.get("Kp", 1.0) if Kp is None else Kp
    alpha = K * sigma_weight(d, m)
    if case == "b":
        alpha += Kp * math.sqrt(m * gamma) * r0
    return float(alpha)


def constant_estimate(
    d: int,
    m: int,
    gamma: float = 0.0,
    r0: float = DEFAULT_R0,
    case: str = "a",
    constants: dict | None = None,
) -> float:
    """Calibrated ``C0 exp(C1 sigma)`` ceiling for the doubling constant."""
    entry = weight_entry(constants or load_constants(), d, m, case)
    s = sigma_weight(d, m)
    if case == "b":
        s += math.sqrt(m * gamma) * r0
    return float(entry["C0"] * math.exp(entry["C1"] * s))


# ---------------------------------------------------------------------------
# cutoff


def _shift_poly(c: np.ndarray, h: float) -> np.ndarray:
    """Coefficients of ``p(t + h)`` from those of ``p(t)`` (ascending)."""
    n = len(c)
    res = np.zeros(n)
    for j in range(n):
        for k in range(j + 1):
            res[k] += c[j] * math.comb(j, k) * h ** (j - k)
    return res


class _Piecewise:
    """Piecewise polynomial on ``knots``; value 0 to the left, ``right`` to the right."""

    def __init__(self, knots, polys, right: float = 0.0):
        self.knots = np.asarray(knots, dtype=float)
        self.polys = [np.asarray(p, dtype=float) for p in polys]
        self.right = float(right)

    def locate(self, x: float) -> int:
        """Index of the piece containing ``x``; -1 left, ``len(polys)`` right."""
        if x < self.knots[0]:
            return -1
        if x >= self.knots[-1]:
            return len(self.polys)
        return int(np.searchsorted(self.knots, x, side="right") - 1)

    def local(self, x_mid: float, origin: float, width: int) -> np.ndarray:
        """Polynomial valid around ``x_mid``, re-expanded in ``(x - origin)``."""
        i = self.locate(x_mid)
        out = np.zeros(width)
        if i < 0:
            return out
        if i >= len(self.polys):
            out[0] = self.right
            return out
        c = _shift_poly(self.polys[i], origin - self.knots[i])
        out[: len(c)] = c
        return out

    def antiderivative(self) -> "_Piecewise":
        polys = []
        acc = 0.0
        for i, c in enumerate(self.polys):
            a = P.polyint(c)
            a[0] = acc
            polys.append(a)
            acc = P.polyval(self.knots[i + 1] - self.knots[i], a)
        return _Piecewise(self.knots, polys, right=acc)

    def derivative(self, order: int = 1) -> "_Piecewise":
        polys = [P.polyder(c, order) if len(c) > order else np.zeros(1) for c in self.polys]
        return _Piecewise(self.knots, polys, right=0.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= self.knots[-1], self.right, 0.0)
        idx = np.clip(np.searchsorted(self.knots, x, side="right") - 1, 0, len(self.polys) - 1)
        inside = (x >= self.knots[0]) & (x < self.knots[-1])
        for i, c in enumerate(self.polys):
            sel = inside & (idx == i)
            if np.any(sel):
                out = np.where(sel, P.polyval(x - self.knots[i], c), out)
        return out if out.ndim else float(out)


def _convolve_box(g: _Piecewise, length: float) -> _Piecewise:
    """``(g * box_length)(x) = (G(x) - G(x - length)) / length`` with ``G`` the antiderivative."""
    G = g.antiderivative()
    knots = np.union1d(g.knots, g.knots + length)
    # merge knots that coincide up to roundoff
    keep = np.concatenate([[True], np.diff(knots) > 1e-14 * max(1.0, abs(knots[-1]))])
    knots = knots[keep]
    width = max(len(c) for c in G.polys)
    polys = []
    for a, b in zip(knots[:-1], knots[1:]):
        mid = 0.5 * (a + b)
        hi = G.local(mid, a, width)
        lo = G.local(mid - length, a - length, width)
        polys.append((hi - lo) / length)
    return _Piecewise(knots, polys, right=0.0)


def _box_lengths(total: float, K: int, ratio: float) -> np.ndarray:
    w = ratio ** np.arange(K, dtype=float)
    return total * w / w.sum()


@dataclass(frozen=True)
class CutoffFunction:
    """Radial cutoff: 0 on ``[0, r/2]``, 1 on ``[r, inf)``, piecewise polynomial of degree ``K`` between."""

    r: float
    K: int
    lengths: tuple[float, ...]
    knots: np.ndarray = field(repr=False)
    polys: tuple[np.ndarray, ...] = field(repr=False)
    derivative_max: tuple[float, ...]
    certificate_C: float

    def __call__(self, rho, order: int = 0):
        pw = _Piecewise(self.knots, self.polys, right=1.0)
        if order:
            pw = pw.derivative(order)
        return pw(rho)

    def pieces(self):
        """``(left knot, right knot, ascending coefficients in (rho - left))`` per interval."""
        return [(self.knots[i], self.knots[i + 1], self.polys[i]) for i in range(len(self.polys))]

    def jumps(self, order: int) -> np.ndarray:
        """Jump of the ``order``-th derivative at each knot, ends included."""
        n = len(self.polys)
        out = []
        for k, x in enumerate(self.knots):
            if k == 0:
                left = 0.0
            else:
                c = P.polyder(self.polys[k - 1], order) if order else self.polys[k - 1]
                left = float(P.polyval(x - self.knots[k - 1], c))
            if k == n:
                right = 1.0 if order == 0 else 0.0
            else:
                c = P.polyder(self.polys[k], order) if order else self.polys[k]
                right = float(c[0]) if len(c) else 0.0
            out.append(right - left)
        return np.array(out)


def derivative_certificate(j: int, max_abs: float, r: float) -> float:
    """Smallest ``C`` with ``max_abs <= (C j log^2(j+1))^j r^-j``."""
    return (max_abs * r ** j) ** (1.0 / j) / (j * math.log(j + 1) ** 2)


def build_cutoff(r: float, K: int, ratio: float = 1.0) -> CutoffFunction:
    """K-fold convolution of normalised boxes on ``[r/2, r]``, integrated once.

    Box lengths form a geometric sequence with the given ratio summing to
    ``r/2``; ratio 1 gives equal lengths (a cardinal B-spline profile).
    """
    if K < 1:
        raise ValueError("K >= 1")
    if r <= 0 or ratio <= 0:
        raise ValueError("r and ratio must be positive")
    lengths = _box_lengths(0.5 * r, K, ratio)
    a = 0.5 * r
    g = _Piecewise([a, a + lengths[0]], [[1.0 / lengths[0]]])
    for ell in lengths[1:]:
        g = _convolve_box(g, ell)
    psi = g.antiderivative()
    # shift the knot frame so the support starts exactly at r/2 and ends at r
    knots = psi.knots.copy()
    knots[0], knots[-1] = a, r
    polys = tuple(psi.polys)
    pw = _Piecewise(knots, polys, right=1.0)
    maxima = []
    for j in range(1, K + 1):
        d = pw.derivative(j)
        best = 0.0
        for i in range(len(polys)):
            xs = np.linspace(knots[i], knots[i + 1], 65)
            best = max(best, float(np.max(np.abs(P.polyval(xs - knots[i], d.polys[i])))))
        maxima.append(best)
    cert = max(derivative_certificate(j, mx, r) for j, mx in enumerate(maxima, start=1))
    return CutoffFunction(float(r), K, tuple(float(x) for x in lengths), knots, polys, tuple(maxima), cert)


# ---------------------------------------------------------------------------
# weight configuration and assembly


@dataclass(frozen=True)
class WeightConfig:
    d: int
    m: int
    gammas: tuple[float, ...]
    r: float
    r0: float = DEFAULT_R0
    case: str | None = None
    alpha: float | None = None
    c: float = C_RATIO
    cutoff_ratio: float = 1.0
    # inverse-square potential ``potential / |x|^2`` added to every factor
    potential: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        if self.case is None:
            object.__setattr__(self, "case", _case_of(self.gammas))

    @property
    def gamma(self) -> float:
        return gamma_max(self.gammas)

    def violations(self) -> list[str]:
        out = []
        if self.d < 1:
            out.append("d >= 1")
        if self.m < 1:
            out.append("m >= 1")
        if len(self.gammas) != self.m:
            out.append("gamma list has length m")
        if self.r <= 0:
            out.append("r > 0")
        if self.r > self.r0 / self.c * (1 + 1e-12):
            out.append(f"r <= r0/c = {self.r0 / self.c:.6g}")
        if self.case not in ("a", "b"):
            out.append("case in {a, b}")
        if self.case == "a" and any(g < 0 for g in self.gammas):
            out.append("case a needs every gamma_k >= 0")
        if self.potential and self.alpha is None:
            out.append("alpha must be given when a potential is present")
        if self.alpha is not None and not (0 < self.alpha <= ALPHA_MAX):
            out.append(f"0 < alpha <= {ALPHA_MAX:g}")
        return out

    def validate(self) -> None:
        v = self.violations()
        if v:
            raise ValueError("invalid weight config: " + "; ".join(v))

    def resolved_alpha(self, constants: dict | None = None) -> float:
        if self.alpha is not None:
            return float(self.alpha)
        return select_alpha(self.d, self.m, self.gamma, self.r0, self.case, constants=constants)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m": self.m,
            "gammas": list(self.gammas),
            "r": self.r,
            "r0": self.r0,
            "case": self.case,
            "alpha": self.alpha,
            "c": self.c,
            "cutoff_ratio": self.cutoff_ratio,
            "potential": self.potential,
        }


def _grid_min(f, a: float, b: float, n: int) -> tuple[float, float]:
    xs = np.linspace(a, b, n)
    vals = f(xs)
    i = int(np.argmin(vals))
    best, loc = float(vals[i]), float(xs[i])
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
    if hi > lo:
        res = minimize_scalar(lambda x: float(f(np.array([x]))[0]), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * (b - a)})
        if res.fun < best:
            best, loc = float(res.fun), float(res.x)
    return best, loc


@dataclass(frozen=True)
class AssembledWeight:
    """``v_r`` with ``script-L v_r`` available exactly on every piece.

    ``tilde`` and ``pieces`` live in the unit frame ``s = |x| / 3r`` and carry
    an arbitrary positive scale; ``normalization`` is their annulus infimum.
    """

    cfg: WeightConfig
    alpha: float
    tilde: RadialExpansion
    tilde_L: RadialExpansion
    cutoff: CutoffFunction
    pieces: tuple[tuple[float, float, PieceExpansion, PieceExpansion], ...]
    normalization: float
    normalization_at: float

    @property
    def outer(self) -> float:
        return 3.0 * self.cfg.r

    @property
    def _value_scale(self) -> float:
        return (9.0 * self.cfg.r ** 2) ** self.cfg.m / self.normalization

    def _map(self, rho, inner, outer_fn):
        s = np.asarray(rho, dtype=float) / self.outer
        out = np.zeros_like(s)
        for a, b, pv, pl in self.pieces:
            sel = (s >= a) & (s < b)
            if np.any(sel):
                out[sel] = inner(pv, pl, s[sel])
        sel = (s >= self.cutoff.r) & (s <= 1.0)
        if np.any(sel):
            out[sel] = outer_fn(s[sel])
        return out

    def value(self, rho):
        """``v_r(|x|)``; zero outside ``B_{3r}``."""
        out = self._map(rho, lambda pv, pl, s: pv(s), self.tilde) * self._value_scale
        return out if np.ndim(rho) else float(out)

    def script_L(self, rho):
        """``script-L v_r (|x|)``, normalised so its annulus infimum is 1."""
        out = self._map(rho, lambda pv, pl, s: pl(s), self.tilde_L) / self.normalization
        return out if np.ndim(rho) else float(out)

    def breakpoints(self) -> list[float]:
        """Radii where the piecewise representation changes."""
        return [float(x) * self.outer for x in self.cutoff.knots] + [self.outer]


def _unit_gammas(cfg: WeightConfig) -> list[tuple[float, float]]:
    # the inverse-square potential is scale invariant
    return [(9.0 * cfg.r ** 2 * g, cfg.potential) for g in cfg.gammas]


def assemble_weight(cfg: WeightConfig, constants: dict | None = None, allow_negative: bool = False) -> AssembledWeight:
    """Build ``v_r = (inf_{annulus} script-L tilde)^-1 psi tilde``.

    Raises :class:`WeightConstraintError` (property ii) when the annulus
    infimum is not positive, unless ``allow_negative`` is set, in which case
    the absolute value is used so that the failure can be reported.
    """
    cfg.validate()
    alpha = cfg.resolved_alpha(constants)
    if not 0 < alpha <= ALPHA_MAX:
        raise ValueError(f"alpha = {alpha:g} outside (0, {ALPHA_MAX:g}]")
    factors = _unit_gammas(cfg)
    tilde = taylor_remainder(alpha, cfg.m, 1.0 / 3.0, cfg.d).expansion.scaled(_FRAME ** alpha)
    tilde_L = apply_factors(tilde, factors)
    norm, at = _grid_min(tilde_L, 1.0 / 3.0, 2.0 / 3.0, ANNULUS_GRID)
    if norm <= 0.0:
        if not allow_negative:
            raise WeightConstraintError("ii", at * 3 * cfg.r, norm, "annulus infimum is not positive; alpha too small")
    cutoff = build_cutoff(1.0 / 3.0, 2 * cfg.m, cfg.cutoff_ratio)
    pieces = []
    for a, b, poly in cutoff.pieces():
        pv = PieceExpansion.from_product(tilde, poly, a)
        pl = apply_factors(pv, factors)
        pieces.append((float(a), float(b), pv, pl))
    return AssembledWeight(cfg, alpha, tilde, tilde_L, cutoff, tuple(pieces), abs(norm) if norm <= 0 else norm, at)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    location: float | None
    tolerance: float
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "value": self.value,
            "location": self.location,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class Lemma1Report:
    cfg: WeightConfig
    alpha: float
    checks: tuple[Check, ...]
    C_measured: float
    normalization: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def raise_for_failure(self) -> None:
        for c in self.failures():
            raise WeightConstraintError(c.name, c.location if c.location is not None else float("nan"), c.value, c.detail)

    @property
    def doubling_bound(self) -> float:
        """``1 + C_measured``: the constant the integration-by-parts argument yields."""
        return 1.0 + self.C_measured

    def to_json(self) -> dict:
        return {
            "config": self.cfg.to_json(),
            "alpha": self.alpha,
            "passed": self.passed,
            "C_measured": self.C_measured,
            "doubling_bound": self.doubling_bound,
            "checks": [c.to_json() for c in self.checks],
        }


def _boundary_check(tilde: RadialExpansion, m: int, outer: float, tol: float) -> Check:
    worst, worst_j = 0.0, 0
    for j in range(2 * m):
        dj = tilde.derivative(j)
        scale = dj.abs_sum(1.0)
        rel = abs(dj(1.0)) / scale if scale > 0 else 0.0
        if rel > worst:
            worst, worst_j = rel, j
    return Check("i", worst <= tol, worst, outer, tol, f"worst derivative order {worst_j}")


def verify_lemma1(cfg: WeightConfig, constants: dict | None = None, weight: AssembledWeight | None = None) -> Lemma1Report:
    """Check properties (i)-(iv) on dense radial grids.

    (i) radial derivatives of order < 2m vanish at 3r, relative 1e-9;
    (ii) min of script-L v_r on [r, 2r] is at least 1 - 1e-9;
    (iii) min on [r, 3r] is at least -1e-9;
    (iv) sup of |script-L v_r| on [r/2, r] is finite; recorded as ``C_measured``.
    """
    w = weight or assemble_weight(cfg, constants, allow_negative=True)
    outer = 3.0 * cfg.r
    checks = [_boundary_check(w.tilde, cfg.m, outer, 1e-9)]

    def scaled_L(s):
        return w.tilde_L(s) / w.normalization

    raw_min, raw_at = _grid_min(w.tilde_L, 1.0 / 3.0, 2.0 / 3.0, ANNULUS_GRID)
    if raw_min <= 0:
        checks.append(Check("ii", False, raw_min, raw_at * outer, 1e-9, "annulus infimum is not positive; alpha too small"))
    else:
        xs = np.concatenate([np.linspace(1.0 / 3.0, 2.0 / 3.0, CHECK_GRID), [w.normalization_at]])
        vals = scaled_L(xs)
        i = int(np.argmin(vals))
        checks.append(Check("ii", vals[i] >= 1 - 1e-9, float(vals[i]), float(xs[i] * outer), 1e-9))
    xs = np.linspace(1.0 / 3.0, 1.0, CHECK_GRID)
    vals = scaled_L(xs)
    i = int(np.argmin(vals))
    checks.append(Check("iii", vals[i] >= -1e-9, float(vals[i]), float(xs[i] * outer), 1e-9))
    sup, sup_at = 0.0, None
    for a, b, _, pl in w.pieces:
        xs = np.linspace(a, b, PIECE_GRID)
        vals = np.abs(pl(xs)) / w.normalization
        i = int(np.argmax(vals))
        if vals[i] > sup:
            sup, sup_at = float(vals[i]), float(xs[i] * outer)
    checks.append(Check("iv", bool(np.isfinite(sup)), sup, sup_at, math.inf))
    return Lemma1Report(cfg, w.alpha, tuple(checks), sup, w.normalization)


def rising(alpha: float, n: int) -> float:
    out = 1.0
    for j in range(n):
        out *= alpha + j
    return out


DOMINATION_CONSTANT = 2.0


def lemma4_checks(alpha: float, m: int, d: int, n: int = 2048) -> tuple[Check, ...]:
    """Positivity, domination, main-term and derivative-cascade checks for ``tilde v``.

    Unit frame (``3r = 1``); every statement is scale invariant.  Domination
    holds only up to an implied constant: the check is
    ``|L^q tilde v| <= DOMINATION_CONSTANT * L^q v`` and the measured ratio is
    reported.
    """
    tilde = taylor_remainder(alpha, m, 1.0 / 3.0, d).expansion
    v = RadialExpansion.power(-alpha, d)
    near = np.linspace(1.0 / 3.0, 1.0, n)
    full = np.linspace(1e-2, 1.0, 4 * n)
    out = []
    pos_worst, pos_at, dom_worst, dom_at = 0.0, None, 0.0, None
    casc_worst, casc_at = 0.0, None
    for q in range(m):
        wq = apply_power_Lm(tilde, q)
        vq = apply_power_Lm(v, q)
        rel = wq(near) / np.maximum(wq.abs_sum(near), 1e-300)
        i = int(np.argmin(rel))
        if rel[i] < pos_worst:
            pos_worst, pos_at = float(rel[i]), float(near[i])
        excess = np.abs(wq(full)) / np.maximum(vq(full), 1e-300)
        i = int(np.argmax(excess))
        if excess[i] > dom_worst:
            dom_worst, dom_at = float(excess[i]), float(full[i])
        dq = wq.derivative(2 * (m - q))
        xs = full[full < 1.0]
        rel = dq(xs) / np.maximum(dq.abs_sum(xs), 1e-300)
        i = int(np.argmin(rel))
        if casc_at is None or rel[i] < casc_worst:
            casc_worst, casc_at = float(rel[i]), float(xs[i])
    out.append(Check("lemma4_positivity", pos_worst >= -1e-9, pos_worst, pos_at, 1e-9))
    out.append(Check("lemma4_domination", dom_worst <= DOMINATION_CONSTANT, dom_worst, dom_at, DOMINATION_CONSTANT))
    out.append(Check("cascade", casc_worst > 0.0, casc_worst, casc_at, 0.0))
    wm = apply_power_Lm(tilde, m)
    ratio = wm(near) / (0.5 * rising(alpha, 2 * m) * near ** (-alpha - 2 * m))
    i = int(np.argmin(ratio))
    out.append(Check("main_term", ratio[i] >= 1.0, float(ratio[i]), float(near[i]), 0.0))
    return tuple(out)


# ---------------------------------------------------------------------------
# polynomial weight (|x|^2 - r^2)^k


@dataclass(frozen=True)
class PolynomialWeight:
    k: int
    r: float
    d: int
    w: RadialExpansion
    lap: RadialExpansion
    bilap: RadialExpansion

    def boundary_vanishing(self) -> float:
        """Largest relative radial derivative of order < k at ``|x| = r``."""
        worst = 0.0
        for j in range(self.k):
            dj = self.w.derivative(j)
            scale = dj.abs_sum(self.r)
            if scale > 0:
                worst = max(worst, abs(dj(self.r)) / scale)
        return worst


def polynomial_weight(k: int, r: float, d: int) -> PolynomialWeight:
    """``(|x|^2 - r^2)^k`` with its exact Laplacian and bilaplacian."""
    if k < 1 or r <= 0 or d < 1:
        raise ValueError("need k >= 1, r > 0, d >= 1")
    if k % 2 or k <= 4:
        warnings.warn(f"k = {k} is outside the even k > 4 regime of the threshold argument", stacklevel=2)
    terms = tuple((math.comb(k, i) * (-(r ** 2)) ** (k - i), 2.0 * i) for i in range(k + 1))
    w = RadialExpansion(terms, d)
    lap = apply_power_Lm(w, 1)
    return PolynomialWeight(k, float(r), d, w, lap, apply_power_Lm(lap, 1))


def _lap_t(c: np.ndarray, d: int) -> np.ndarray:
    """Radial Laplacian in ``t = s^2 - 1``: ``4 (t + 1) g'' + 2 d g'``."""
    g1 = P.polyder(c, 1) if len(c) > 1 else np.zeros(1)
    g2 = P.polyder(c, 2) if len(c) > 2 else np.zeros(1)
    return P.polyadd(4.0 * P.polymul([1.0, 1.0], g2), 2.0 * d * g1)


def threshold_polynomial(k: int, d: int, a: float, b: float) -> np.ndarray:
    """``(Delta + a)(Delta + b)(s^2 - 1)^k / (s^2 - 1)^(k-4)`` as a polynomial in ``t = s^2 - 1``.

    ``a = lambda_1 r^2`` and ``b = lambda_2 r^2``: the unit-ball form of the operator.
    """
    g = np.zeros(k + 1)
    g[k] = 1.0
    lg = _lap_t(g, d)
    llg = _lap_t(lg, d)
    total = P.polyadd(P.polyadd(llg, (a + b) * lg), a * b * g)
    total = np.concatenate([total, np.zeros(max(0, k + 1 - len(total)))])
    low = total[: k - 4]
    if np.any(np.abs(low) > 1e-12 * np.max(np.abs(total))):
        raise ArithmeticError("factor (s^2 - 1)^(k-4) did not divide out")
    return total[k - 4:]


def threshold_min(k: int, d: int, a: float, b: float) -> float:
    """Exact minimum over ``t`` in ``[-1, 0]`` (i.e. over the unit ball) of the reduced polynomial."""
    q = threshold_polynomial(k, d, a, b)
    cand = [-1.0, 0.0]
    crit = P.polyroots(P.polyder(q)) if len(q) > 2 else np.array([])
    cand += [float(z.real) for z in np.atleast_1d(crit) if abs(z.imag) < 1e-9 and -1.0 <= z.real <= 0.0]
    return float(min(P.polyval(np.array(cand), q)))


@dataclass(frozen=True)
class ThresholdResult:
    k: int
    d: int
    lambda1: float
    lambda2: float
    r_min: float
    r_star: float

    @property
    def ratio(self) -> float:
        return self.r_min / self.r_star

    @property
    def r_min_sqrt_lambda1(self) -> float:
        return self.r_min * math.sqrt(self.lambda1)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "d": self.d,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "r_min": self.r_min,
            "r_star": self.r_star,
            "ratio": self.ratio,
        }


def verify_theorem3_threshold(k: int, d: int, lambda1: float, lambda2: float, rtol: float = 1e-12) -> ThresholdResult:
    """Smallest ``r`` with ``(Delta + l1)(Delta + l2) w > 0`` on ``B_r``, by bisection."""
    if lambda1 <= 0 or lambda2 <= 0:
        raise ValueError("eigenvalues must be positive")
    if k % 2 or k <= 4:
        raise ValueError("k must be an even integer > 4")
    r_star = math.sqrt(1.0 / lambda1 + 1.0 / lambda2)

    def positive(r):
        return threshold_min(k, d, lambda1 * r * r, lambda2 * r * r) > 0.0

    lo, hi = 1e-3 * r_star, 1e3 * r_star
    if positive(lo) or not positive(hi):
        raise ValueError("no sign change in the scan bracket")
    while hi - lo > rtol * hi:
        mid = math.sqrt(lo * hi)
        if positive(mid):
            hi = mid
        else:
            lo = mid
    return ThresholdResult(k, d, float(lambda1), float(lambda2), hi, r_star)
