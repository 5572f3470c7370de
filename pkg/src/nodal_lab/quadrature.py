"""Product Gauss rules on balls, annuli and cylinders in dimensions 1 to 3.

Radial direction: composite Gauss-Legendre with the Jacobian ``rho^(d-1)``
folded into the weights, split at optional breakpoints so that piecewise
smooth radial integrands are integrated at full order.  Angular direction:
``{-1, +1}`` in d=1, trapezoid on the circle in d=2, Gauss-Legendre in
``cos theta`` times trapezoid in ``phi`` in d=3.  Cylinders are a ball rule
times Gauss-Legendre on the axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

EPS = np.finfo(float).eps
ROUNDOFF_FACTOR = 100.0


def ball_volume(d: int, R: float) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * R ** d


def sphere_area(d: int) -> float:
    """``omega_{d-1}``, the area of the unit sphere in R^d."""
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def monomial_ball_integral(p: int, d: int, R: float) -> float:
    """``int_{B_R} |x|^p dx = omega_{d-1} R^(p+d) / (p+d)``."""
    return sphere_area(d) * R ** (p + d) / (p + d)


@dataclass(frozen=True)
class Region:
    """``ball`` (radius), ``annulus`` (inner < |x - center| < radius) or ``cylinder`` (ball x [-h, h])."""

    kind: str
    dim: int
    radius: float
    center: tuple[float, ...] = ()
    inner: float = 0.0
    half_height: float = 0.0
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("ball", "annulus", "cylinder"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.dim not in (1, 2, 3):
            raise ValueError("quadrature is implemented for d in {1, 2, 3}")
        if self.radius <= 0 or self.inner < 0 or self.inner >= self.radius:
            raise ValueError("need 0 <= inner < radius")
        if self.kind == "cylinder" and self.half_height <= 0:
            raise ValueError("cylinder needs a positive half height")
        total = self.dim + (1 if self.kind == "cylinder" else 0)
        c = tuple(float(x) for x in self.center) or (0.0,) * total
        if len(c) != total:
            raise ValueError("center has the wrong dimension")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "breakpoints", tuple(sorted(float(b) for b in self.breakpoints)))

    @property
    def ambient_dim(self) -> int:
        return len(self.center)

    def measure(self) -> float:
        v = ball_volume(self.dim, self.radius) - ball_volume(self.dim, self.inner) if self.inner else ball_volume(self.dim, self.radius)
        return v * (2 * self.half_height if self.kind == "cylinder" else 1.0)


@dataclass(frozen=True)
class QuadratureRule:
    region: Region
    n_radial: int
    n_angular: int
    n_axial: int
    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def exactness(self) -> int:
        """Total polynomial degree integrated exactly (about the centre, single radial panel)."""
        d = self.region.dim
        radial = 2 * self.n_radial - d
        if d == 1:
            ang = radial
        elif d == 2:
            ang = self.n_angular - 1
        else:
            ang = 2 * self.n_angular - 1
        deg = min(radial, ang)
        if self.region.kind == "cylinder":
            deg = min(deg, 2 * self.n_axial - 1)
        return deg


def _radial_nodes(a: float, b: float, n: int, d: int, breaks: Sequence[float]):
    cuts = [a] + [x for x in breaks if a < x < b] + [b]
    g, w = np.polynomial.legendre.leggauss(n)
    rs, ws = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        x = 0.5 * (hi - lo) * g + 0.5 * (hi + lo)
        rs.append(x)
        ws.append(0.5 * (hi - lo) * w * x ** (d - 1))
    return np.concatenate(rs), np.concatenate(ws)


def _directions(d: int, n: int):
    if d == 1:
        return np.array([[-1.0], [1.0]]), np.array([1.0, 1.0])
    if d == 2:
        t = 2.0 * math.pi * (np.arange(n) + 0.5) / n
        return np.stack([np.cos(t), np.sin(t)], axis=1), np.full(n, 2.0 * math.pi / n)
    ct, wt = np.polynomial.legendre.leggauss(n)
    ph = 2.0 * math.pi * (np.arange(2 * n) + 0.5) / (2 * n)
    st = np.sqrt(1.0 - ct ** 2)
    x = (st[:, None] * np.cos(ph)[None, :]).ravel()
    y = (st[:, None] * np.sin(ph)[None, :]).ravel()
    z = np.repeat(ct, 2 * n)
    w = np.repeat(wt, 2 * n) * (math.pi / n)
    return np.stack([x, y, z], axis=1), w


def make_rule(region: Region, n_radial: int = 16, n_angular: int | None = None, n_axial: int | None = None) -> QuadratureRule:
    d = region.dim
    n_angular = n_angular or 2 * n_radial
    n_axial = n_axial or n_radial
    rs, wr = _radial_nodes(region.inner, region.radius, n_radial, d, region.breakpoints)
    dirs, wa = _directions(d, n_angular)
    pts = (rs[:, None, None] * dirs[None, :, :]).reshape(-1, d)
    wts = (wr[:, None] * wa[None, :]).ravel()
    if region.kind == "cylinder":
        g, w = np.polynomial.legendre.leggauss(n_axial)
        t = region.half_height * g
        wt = region.half_height * w
        pts = np.concatenate(
            [np.repeat(pts, n_axial, axis=0), np.tile(t, len(pts))[:, None]], axis=1
        )
        wts = np.repeat(wts, n_axial) * np.tile(wt, len(wts))
    pts = pts + np.asarray(region.center)[None, :]
    return QuadratureRule(region, n_radial, n_angular, n_axial, pts, wts)


@dataclass(frozen=True)
class Integral:
    value: float
    error: float
    coarse: float
    roundoff: float


def integrate(
    u: Callable[[np.ndarray], np.ndarray],
    region: Region,
    n_radial: int = 16,
    n_angular: int | None = None,
    n_axial: int | None = None,
) -> Integral:
    """Integral of ``u`` over ``region`` with an order-doubling error estimate.

    The value comes from the doubled rule; the error is the difference to
    the base rule plus a roundoff floor proportional to ``sum |w u|``.
    """
    n_angular = n_angular or 2 * n_radial
    n_axial = n_axial or n_radial
    coarse = make_rule(region, n_radial, n_angular, n_axial)
    fine = make_rule(region, 2 * n_radial, 2 * n_angular, 2 * n_axial)
    fc = np.asarray(u(coarse.points), dtype=float)
    ff = np.asarray(u(fine.points), dtype=float)
    i_c = float(np.sum(coarse.weights * fc))
    i_f = float(np.sum(fine.weights * ff))
    floor = ROUNDOFF_FACTOR * EPS * float(np.sum(np.abs(fine.weights * ff)))
    return Integral(i_f, abs(i_f - i_c) + floor, i_c, floor)


def with_breakpoints(region: Region, breaks: Sequence[float]) -> Region:
    return replace(region, breakpoints=tuple(region.breakpoints) + tuple(breaks))
