"""Exact calculus for radial functions of the form sum c * rho**p.

Only the Euclidean Laplacian is implemented.  On a radial function
``f(rho)`` it acts as ``f'' + (d - 1) f' / rho``, which sends ``rho**p`` to
``p (p + d - 2) rho**(p - 2)``.

Two representations share the same operator interface:

* :class:`RadialExpansion` -- ``sum c_i rho**p_i`` with real exponents.
* :class:`PieceExpansion` -- ``sum c * rho**p * (rho - b)**j`` with a fixed
  shift ``b``; used on the knot intervals of a piecewise-polynomial cutoff so
  that products ``psi * f`` stay exact under the Laplacian.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# two exponents closer than this are treated as equal
EXPONENT_DIGITS = 12
# a merged coefficient is dropped when it is this small relative to its parts
CANCEL_TOL = 1e-15


def _key(p: float) -> float:
    return round(float(p), EXPONENT_DIGITS)


def _merge(items: Iterable[tuple[tuple, float]]) -> dict:
    """Sum coefficients over equal keys, dropping cancellations."""
    total: dict = {}
    mass: dict = {}
    first: dict = {}
    for key, c in items:
        k = tuple(_key(x) if isinstance(x, float) else x for x in key)
        if k not in total:
            first[k] = key
            total[k] = 0.0
            mass[k] = 0.0
        total[k] += c
        mass[k] += abs(c)
    out = {}
    for k, c in total.items():
        if c != 0.0 and abs(c) > CANCEL_TOL * mass[k]:
            out[first[k]] = c
    return out


def _check_domain(rho: np.ndarray, exponents) -> None:
    if any(p < 0 for p in exponents) and np.any(rho <= 0.0):
        raise ValueError("negative exponent evaluated at rho <= 0")


@dataclass(frozen=True)
class RadialExpansion:
    """``sum c_i |x|**p_i`` in dimension ``dim``; exponents distinct and sorted."""

    terms: tuple[tuple[float, float], ...]
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        merged = _merge(((float(p),), float(c)) for c, p in self.terms)
        terms = tuple(sorted(((c, k[0]) for k, c in merged.items()), key=lambda t: t[1]))
        object.__setattr__(self, "terms", terms)

    @classmethod
    def power(cls, p: float, dim: int, coefficient: float = 1.0) -> "RadialExpansion":
        return cls(((coefficient, p),), dim)

    @classmethod
    def zero(cls, dim: int) -> "RadialExpansion":
        return cls((), dim)

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.terms)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(c for c, _ in self.terms)

    def coefficient(self, p: float) -> float:
        for c, q in self.terms:
            if _key(q) == _key(p):
                return c
        return 0.0

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        _check_domain(rho, self.exponents)
        out = np.zeros_like(rho)
        for c, p in self.terms:
            out = out + c * rho ** p
        return out if out.ndim else float(out)

    def abs_sum(self, rho):
        """``sum |c_i| rho**p_i``: the scale against which roundoff is judged."""
        rho = np.asarray(rho, dtype=float)
        out = np.zeros_like(rho)
        for c, p in self.terms:
            out = out + abs(c) * rho ** p
        return out if out.ndim else float(out)

    def __add__(self, other: "RadialExpansion") -> "RadialExpansion":
        self._same_dim(other)
        return RadialExpansion(self.terms + other.terms, self.dim)

    def __sub__(self, other: "RadialExpansion") -> "RadialExpansion":
        return self + other.scaled(-1.0)

    def __neg__(self) -> "RadialExpansion":
        return self.scaled(-1.0)

    def scaled(self, factor: float) -> "RadialExpansion":
        return RadialExpansion(tuple((factor * c, p) for c, p in self.terms), self.dim)

    def times_power(self, q: float, factor: float = 1.0) -> "RadialExpansion":
        """Multiply by ``factor * rho**q``."""
        return RadialExpansion(tuple((factor * c, p + q) for c, p in self.terms), self.dim)

    def __mul__(self, other: "RadialExpansion") -> "RadialExpansion":
        self._same_dim(other)
        return RadialExpansion(
            tuple((a * b, p + q) for a, p in self.terms for b, q in other.terms), self.dim
        )

    def derivative(self, order: int = 1) -> "RadialExpansion":
        """Radial derivative ``d^order / d rho^order``."""
        terms = self.terms
        for _ in range(order):
            terms = tuple((c * p, p - 1.0) for c, p in terms if p != 0.0)
        return RadialExpansion(terms, self.dim)

    def _same_dim(self, other) -> None:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")

    def to_json(self) -> dict:
        return {"dim": self.dim, "terms": [{"c": c, "p": p} for c, p in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> "RadialExpansion":
        return cls(tuple((t["c"], t["p"]) for t in data["terms"]), int(data["dim"]))


def apply_laplacian_radial(e: RadialExpansion) -> RadialExpansion:
    """Exact Euclidean Laplacian: ``c rho**p -> c p (p + d - 2) rho**(p - 2)``."""
    d = e.dim
    return RadialExpansion(tuple((c * p * (p + d - 2), p - 2.0) for c, p in e.terms), d)


def apply_power_Lm(e: RadialExpansion, m: int) -> RadialExpansion:
    if m < 0:
        raise ValueError("m must be >= 0")
    for _ in range(m):
        e = apply_laplacian_radial(e)
    return e


def apply_script_L(e: RadialExpansion, gammas: Sequence[float]) -> RadialExpansion:
    """``prod_k (Delta + gamma_k)`` applied exactly."""
    for g in gammas:
        e = apply_laplacian_radial(e) + e.scaled(float(g))
    return e


def apply_schrodinger(e: RadialExpansion, potential: float) -> RadialExpansion:
    """``(Delta + V) e`` for the inverse-square potential ``V = potential / rho**2``."""
    return apply_laplacian_radial(e) + e.times_power(-2.0, potential)


@dataclass(frozen=True)
class PieceExpansion:
    """``sum c rho**p (rho - b)**j`` for a fixed shift ``b``; ``j`` a non-negative integer."""

    terms: tuple[tuple[float, float, int], ...]
    shift: float
    dim: int

    def __post_init__(self):
        merged = _merge(((float(p), int(j)), float(c)) for c, p, j in self.terms if j >= 0)
        terms = tuple(sorted(((c, k[0], k[1]) for k, c in merged.items()), key=lambda t: (t[1], t[2])))
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_product(cls, e: RadialExpansion, poly: Sequence[float], shift: float) -> "PieceExpansion":
        """``e(rho) * sum_j poly[j] (rho - shift)**j``."""
        return cls(
            tuple((c * a, p, j) for c, p in e.terms for j, a in enumerate(poly) if a != 0.0),
            shift,
            e.dim,
        )

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        _check_domain(rho, [p for _, p, _ in self.terms])
        t = rho - self.shift
        out = np.zeros_like(rho)
        for c, p, j in self.terms:
            out = out + c * rho ** p * t ** j
        return out if out.ndim else float(out)

    def abs_sum(self, rho):
        rho = np.asarray(rho, dtype=float)
        t = np.abs(rho - self.shift)
        out = np.zeros_like(rho)
        for c, p, j in self.terms:
            out = out + abs(c) * rho ** p * t ** j
        return out if out.ndim else float(out)

    def __add__(self, other: "PieceExpansion") -> "PieceExpansion":
        if other.shift != self.shift or other.dim != self.dim:
            raise ValueError("shift or dimension mismatch")
        return PieceExpansion(self.terms + other.terms, self.shift, self.dim)

    def scaled(self, factor: float) -> "PieceExpansion":
        return PieceExpansion(tuple((factor * c, p, j) for c, p, j in self.terms), self.shift, self.dim)

    def times_power(self, q: float, factor: float = 1.0) -> "PieceExpansion":
        return PieceExpansion(tuple((factor * c, p + q, j) for c, p, j in self.terms), self.shift, self.dim)

    def derivative(self, order: int = 1) -> "PieceExpansion":
        e = self
        for _ in range(order):
            out = []
            for c, p, j in e.terms:
                if p != 0.0:
                    out.append((c * p, p - 1.0, j))
                if j > 0:
                    out.append((c * j, p, j - 1))
            e = PieceExpansion(tuple(out), e.shift, e.dim)
        return e

    def laplacian(self) -> "PieceExpansion":
        d = self.dim
        out = []
        for c, p, j in self.terms:
            out.append((c * p * (p + d - 2), p - 2.0, j))
            if j >= 1:
                out.append((c * j * (2 * p + d - 1), p - 1.0, j - 1))
            if j >= 2:
                out.append((c * j * (j - 1), p, j - 2))
        return PieceExpansion(tuple(out), self.shift, d)


def _lap(e):
    return e.laplacian() if isinstance(e, PieceExpansion) else apply_laplacian_radial(e)


def apply_factors(e, factors: Sequence[tuple[float, float]]):
    """Apply ``prod (Delta + gamma + potential / rho**2)`` over ``factors = [(gamma, potential), ...]``.

    Works on both representations; the factors commute only when every
    potential is zero, so they are applied right to left as listed.
    """
    for gamma, potential in reversed(list(factors)):
        out = _lap(e) + e.scaled(float(gamma))
        if potential:
            out = out + e.times_power(-2.0, float(potential))
        e = out
    return e


def semifactorial(n: int) -> int:
    """``n!!`` with ``0!! = (-1)!! = 1``."""
    if n < -1:
        raise ValueError("semifactorial defined for n >= -1")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def laplacian_power_coefficient(l: float, m: int, d: int) -> float:
    """Coefficient of ``rho**(l - 2m)`` in ``Delta^m rho**l``."""
    out = 1.0
    for i in range(m):
        p = l - 2 * i
        out *= p * (p + d - 2)
    return out


def semifactorial_ratio(l: int, m: int, d: int) -> float:
    """``|Delta^m |x|^l|`` coefficient over ``l!! (l + d - 2)!! (2m - 1 - l)!``."""
    bound = semifactorial(l) * semifactorial(l + d - 2) * math.factorial(2 * m - 1 - l)
    return abs(laplacian_power_coefficient(l, m, d)) / bound
