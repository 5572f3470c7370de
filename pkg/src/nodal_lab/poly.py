"""Sparse multivariate polynomials with exact differentiation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np


def _clean(terms: Iterable[tuple[tuple[int, ...], float]]) -> dict:
    out: dict = {}
    for e, c in terms:
        out[e] = out.get(e, 0.0) + c
    return {e: c for e, c in out.items() if c != 0.0}


@dataclass(frozen=True)
class Polynomial:
    """``sum c_e x^e`` in ``dim`` variables; ``terms`` maps exponent tuples to coefficients."""

    terms: Mapping[tuple[int, ...], float]
    dim: int

    def __post_init__(self):
        items = []
        for e, c in dict(self.terms).items():
            e = tuple(int(k) for k in e)
            if len(e) != self.dim or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for dimension {self.dim}")
            items.append((e, float(c)))
        object.__setattr__(self, "terms", _clean(items))

    @classmethod
    def constant(cls, c: float, dim: int) -> "Polynomial":
        return cls({(0,) * dim: c}, dim)

    @classmethod
    def coordinate(cls, i: int, dim: int) -> "Polynomial":
        e = [0] * dim
        e[i] = 1
        return cls({tuple(e): 1.0}, dim)

    @classmethod
    def radial_power(cls, k: int, dim: int) -> "Polynomial":
        """``|x|^(2k)``."""
        r2 = sum((cls.coordinate(i, dim) ** 2 for i in range(dim)), cls.constant(0.0, dim))
        return r2 ** k

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> float:
        return self.terms.get((0,) * self.dim, 0.0)

    def max_coefficient(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(float(other), self.dim)
        return Polynomial(_clean(list(self.terms.items()) + list(other.terms.items())), self.dim)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return self * -1.0

    def __sub__(self, other) -> "Polynomial":
        return self + (-other if isinstance(other, Polynomial) else -float(other))

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial({e: c * float(other) for e, c in self.terms.items()}, self.dim)
        out = []
        for (e1, c1), (e2, c2) in product(self.terms.items(), other.terms.items()):
            out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return Polynomial(_clean(out), self.dim)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        out = Polynomial.constant(1.0, self.dim)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self, i: int, order: int = 1) -> "Polynomial":
        out = []
        for e, c in self.terms.items():
            if e[i] >= order:
                f = math.perm(e[i], order)
                e2 = list(e)
                e2[i] -= order
                out.append((tuple(e2), c * f))
        return Polynomial(_clean(out), self.dim)

    def partial(self, mu: Sequence[int]) -> "Polynomial":
        """``d^mu`` for a multi-index ``mu``."""
        p = self
        for i, k in enumerate(mu):
            if k:
                p = p.derivative(i, k)
        return p

    def laplacian(self) -> "Polynomial":
        out = Polynomial.constant(0.0, self.dim)
        for i in range(self.dim):
            out = out + self.derivative(i, 2)
        return out

    def translate(self, shift: Sequence[float]) -> "Polynomial":
        """``x -> p(x - shift)``."""
        out = Polynomial.constant(0.0, self.dim)
        lin = [Polynomial.coordinate(i, self.dim) - float(shift[i]) for i in range(self.dim)]
        for e, c in self.terms.items():
            term = Polynomial.constant(c, self.dim)
            for i, k in enumerate(e):
                if k:
                    term = term * lin[i] ** k
            out = out + term
        return out

    def __call__(self, points) -> np.ndarray:
        x = np.atleast_2d(np.asarray(points, dtype=float))
        if x.shape[-1] != self.dim:
            raise ValueError("point dimension mismatch")
        out = np.zeros(x.shape[0])
        for e, c in self.terms.items():
            t = np.full(x.shape[0], c)
            for i, k in enumerate(e):
                if k:
                    t = t * x[:, i] ** k
            out += t
        return out


def apply_laplacian_product(p: Polynomial, gammas: Sequence[float]) -> Polynomial:
    """``prod_k (Delta + gamma_k) p``."""
    for g in gammas:
        p = p.laplacian() + p * float(g)
    return p


def multi_indices(order: int, dim: int):
    """All multi-indices of total order ``order`` in ``dim`` variables."""
    if dim == 1:
        yield (order,)
        return
    for k in range(order, -1, -1):
        for rest in multi_indices(order - k, dim - 1):
            yield (k,) + rest
