"""Closed-form eigenfunction sums on the flat torus and the round 2-sphere.

Conventions
-----------
Torus: the unit torus ``[0, 1)^d``; the mode ``(kind, nu)`` is
``cos(2 pi <nu, x>)`` or ``sin(2 pi <nu, x>)`` and has Laplace eigenvalue
``4 pi^2 |nu|^2``.  The basis functions are *not* L2-normalised: ``cos`` and
``sin`` modes have squared L2 norm 1/2, the constant mode has norm 1.

Sphere: real spherical harmonics ``Y_k^q`` on S^2, L2-normalised, without the
Condon-Shortley phase.  ``q > 0`` carries ``sqrt(2) cos(q phi)``, ``q < 0``
carries ``sqrt(2) sin(|q| phi)``.  Eigenvalue ``k (k + 1)``.

Every sum is immutable; operations return new objects.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

TWO_PI = 2.0 * math.pi

TORUS_CONVENTION = "torus: modes cos/sin(2*pi*<nu,x>) on [0,1)^d, eigenvalue 4*pi^2*|nu|^2"
SPHERE_CONVENTION = "sphere: real L2-normalised Y_k^q, no Condon-Shortley phase, eigenvalue k(k+1)"
LATTICE_CONVENTION = "lattice: eigenvalue |nu|^2"

UNIT_TOL = 1e-12


@dataclass(frozen=True)
class FrequencyVector:
    """Lattice frequency ``nu`` in Z^d."""

    components: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(int(c) for c in self.components))

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.components))

    @property
    def eigenvalue(self) -> float:
        """Laplace eigenvalue under the unit-torus convention, ``4 pi^2 |nu|^2``."""
        return 4.0 * math.pi ** 2 * sum(c * c for c in self.components)

    @property
    def lattice_eigenvalue(self) -> int:
        """``|nu|^2``, the eigenvalue used when the torus has period 2 pi."""
        return sum(c * c for c in self.components)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __neg__(self) -> "FrequencyVector":
        return FrequencyVector(tuple(-c for c in self.components))

    def canonical(self) -> tuple["FrequencyVector", int]:
        """Representative with first nonzero component positive, and the sign used."""
        for c in self.components:
            if c != 0:
                return (self, 1) if c > 0 else (-self, -1)
        return self, 1


@dataclass(frozen=True)
class TorusMode:
    kind: str
    nu: FrequencyVector

    def __post_init__(self):
        if self.kind not in ("cos", "sin"):
            raise ValueError(f"torus mode kind must be 'cos' or 'sin', got {self.kind!r}")
        if not isinstance(self.nu, FrequencyVector):
            object.__setattr__(self, "nu", FrequencyVector(tuple(self.nu)))

    @property
    def eigenvalue(self) -> float:
        return self.nu.eigenvalue

    @property
    def norm_squared(self) -> float:
        return 1.0 if self.nu.is_zero() else 0.5

    def to_json(self) -> dict:
        return {"kind": self.kind, "nu": list(self.nu.components)}


@dataclass(frozen=True)
class SphereMode:
    k: int
    q: int

    def __post_init__(self):
        if self.k < 0 or abs(self.q) > self.k:
            raise ValueError(f"invalid spherical harmonic index (k={self.k}, q={self.q})")

    @property
    def eigenvalue(self) -> float:
        return float(self.k * (self.k + 1))

    @property
    def norm_squared(self) -> float:
        return 1.0

    def to_json(self) -> dict:
        return {"k": self.k, "q": self.q}


Mode = Union[TorusMode, SphereMode]


@dataclass(frozen=True)
class EigenSum:
    """Finite real combination ``sum_j a_j phi_j`` of closed-form eigenfunctions.

    Terms are merged on identical modes and sorted by eigenvalue at
    construction.  ``dim`` is the torus dimension, or 2 for the sphere.
    """

    manifold: str
    dim: int
    terms: tuple[tuple[float, Mode], ...]

    def __post_init__(self):
        if self.manifold not in ("torus", "sphere"):
            raise ValueError(f"unknown manifold {self.manifold!r}")
        if self.manifold == "sphere" and self.dim != 2:
            raise ValueError("only the 2-sphere is supported")
        merged: dict[Mode, float] = {}
        for a, mode in self.terms:
            a = float(a)
            if self.manifold == "torus":
                if not isinstance(mode, TorusMode):
                    raise TypeError("torus sums take TorusMode terms")
                if mode.nu.dim != self.dim:
                    raise ValueError(f"frequency {mode.nu.components} does not live in Z^{self.dim}")
                nu, sign = mode.nu.canonical()
                if mode.kind == "sin":
                    if nu.is_zero():
                        continue
                    a *= sign
                mode = TorusMode(mode.kind, nu)
            elif not isinstance(mode, SphereMode):
                raise TypeError("sphere sums take SphereMode terms")
            merged[mode] = merged.get(mode, 0.0) + a
        ordered = sorted(merged.items(), key=lambda item: (item[0].eigenvalue, _mode_key(item[0])))
        object.__setattr__(self, "terms", tuple((a, mode) for mode, a in ordered))

    # -- construction helpers -------------------------------------------------
    @classmethod
    def torus(cls, terms: Iterable[tuple[float, str, Sequence[int]]], dim: int | None = None) -> "EigenSum":
        """Build from ``(a, kind, nu)`` triples, e.g. ``(1.0, "sin", (1,))``."""
        terms = list(terms)
        if dim is None:
            if not terms:
                raise ValueError("dimension required for an empty sum")
            dim = len(terms[0][2])
        return cls("torus", dim, tuple((a, TorusMode(kind, FrequencyVector(tuple(nu)))) for a, kind, nu in terms))

    @classmethod
    def sphere(cls, terms: Iterable[tuple[float, int, int]]) -> "EigenSum":
        """Build from ``(a, k, q)`` triples."""
        return cls("sphere", 2, tuple((a, SphereMode(k, q)) for a, k, q in terms))

    # -- spectral data --------------------------------------------------------
    @property
    def coefficients(self) -> np.ndarray:
        return np.array([a for a, _ in self.terms])

    @property
    def term_eigenvalues(self) -> np.ndarray:
        return np.array([mode.eigenvalue for _, mode in self.terms])

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        """Distinct eigenvalues present, ascending."""
        seen: list[float] = []
        for _, mode in self.terms:
            lam = mode.eigenvalue
            if not seen or lam != seen[-1]:
                seen.append(lam)
        return tuple(seen)

    @property
    def m(self) -> int:
        return len(self.eigenvalues)

    @property
    def lambda1(self) -> float:
        if not self.terms:
            raise ValueError("empty eigenfunction sum")
        return self.eigenvalues[0]

    @property
    def lambda_max(self) -> float:
        if not self.terms:
            raise ValueError("empty eigenfunction sum")
        return self.eigenvalues[-1]

    @property
    def convention(self) -> str:
        return TORUS_CONVENTION if self.manifold == "torus" else SPHERE_CONVENTION

    def l2_norm_squared(self) -> float:
        """Squared L2 norm on the manifold (unit-volume torus, area-4pi sphere)."""
        return float(sum(a * a * mode.norm_squared for a, mode in self.terms))

    def is_zero(self, atol: float = 0.0) -> bool:
        return all(abs(a) <= atol for a, _ in self.terms)

    def scaled(self, factor: float) -> "EigenSum":
        return EigenSum(self.manifold, self.dim, tuple((a * factor, mode) for a, mode in self.terms))

    def __neg__(self) -> "EigenSum":
        return self.scaled(-1.0)

    def __add__(self, other: "EigenSum") -> "EigenSum":
        if (self.manifold, self.dim) != (other.manifold, other.dim):
            raise ValueError("cannot add sums on different manifolds")
        return EigenSum(self.manifold, self.dim, self.terms + other.terms)

    def __sub__(self, other: "EigenSum") -> "EigenSum":
        return self + (-other)

    # -- evaluation -----------------------------------------------------------
    def __call__(self, points) -> np.ndarray | float:
        return evaluate(self, points)

    # -- serialisation --------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "manifold": self.manifold,
            "dim": self.dim,
            "convention": self.convention,
            "terms": [{"a": a, "mode": mode.to_json()} for a, mode in self.terms],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "EigenSum":
        manifold = data["manifold"]
        terms = []
        for item in data["terms"]:
            mode = item["mode"]
            if manifold == "torus":
                terms.append((item["a"], TorusMode(mode["kind"], FrequencyVector(tuple(mode["nu"])))))
            else:
                terms.append((item["a"], SphereMode(int(mode["k"]), int(mode["q"]))))
        return cls(manifold, int(data.get("dim", 2)), tuple(terms))

    @classmethod
    def loads(cls, text: str) -> "EigenSum":
        return cls.from_json(json.loads(text))


def _mode_key(mode: Mode) -> tuple:
    if isinstance(mode, TorusMode):
        return (mode.kind, mode.nu.components)
    return (mode.k, mode.q)


# ---------------------------------------------------------------------------
# spherical harmonics
# ---------------------------------------------------------------------------

def normalized_legendre(kmax: int, x) -> np.ndarray:
    """Fully normalised associated Legendre functions without Condon-Shortley phase.

    Returns ``P[k, q, ...]`` for ``0 <= q <= k <= kmax`` such that
    ``P[k, q](cos theta) * sqrt(2 - delta_q0) * cos(q phi)`` has unit L2 norm
    on S^2.  Built with the standard three-term recurrence in ``k`` at fixed
    ``q``, seeded from the sectoral values.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    out = np.zeros((kmax + 1, kmax + 1) + x.shape)
    out[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for q in range(1, kmax + 1):
        out[q, q] = math.sqrt((2.0 * q + 1.0) / (2.0 * q)) * s * out[q - 1, q - 1]
    for q in range(0, kmax):
        out[q + 1, q] = math.sqrt(2.0 * q + 3.0) * x * out[q, q]
    for q in range(0, kmax + 1):
        for k in range(q + 2, kmax + 1):
            a = math.sqrt((4.0 * k * k - 1.0) / (k * k - q * q))
            b = math.sqrt(((k - 1.0) ** 2 - q * q) / (4.0 * (k - 1.0) ** 2 - 1.0))
            out[k, q] = a * (x * out[k - 1, q] - b * out[k - 2, q])
    return out


def real_sph_harm(k: int, q: int, points) -> np.ndarray:
    """Real L2-normalised ``Y_k^q`` at unit vectors ``points[..., 3]``."""
    pts = np.asarray(points, dtype=float)
    z = np.clip(pts[..., 2], -1.0, 1.0)
    phi = np.arctan2(pts[..., 1], pts[..., 0])
    leg = normalized_legendre(k, z)[k, abs(q)]
    if q == 0:
        return leg
    if q > 0:
        return math.sqrt(2.0) * leg * np.cos(q * phi)
    return math.sqrt(2.0) * leg * np.sin(-q * phi)


def _check_unit(points: np.ndarray) -> None:
    norms = np.linalg.norm(points, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        bad = float(np.max(np.abs(norms - 1.0)))
        raise ValueError(f"sphere point is not a unit vector (|norm - 1| = {bad:.3e})")


def evaluate(f: EigenSum, points):
    """Value of ``f`` at one point or an array of points (last axis = coordinates).

    Torus points may be any real coordinates (the sum is 1-periodic); sphere
    points must be unit 3-vectors to within 1e-12.
    """
    if not f.terms:
        raise ValueError("cannot evaluate an empty eigenfunction sum")
    pts = np.asarray(points, dtype=float)
    scalar = False
    if f.manifold == "torus":
        if f.dim == 1 and (pts.ndim == 0 or pts.shape[-1:] != (1,)):
            pts = pts[..., None]
        if pts.shape[-1] != f.dim:
            raise ValueError(f"expected points with {f.dim} coordinates, got shape {pts.shape}")
        scalar = pts.ndim == 1
        out = np.zeros(pts.shape[:-1])
        for a, mode in f.terms:
            phase = TWO_PI * (pts @ np.array(mode.nu.components, dtype=float))
            out = out + a * (np.cos(phase) if mode.kind == "cos" else np.sin(phase))
    else:
        if pts.shape[-1] != 3:
            raise ValueError("sphere points are unit 3-vectors")
        _check_unit(pts)
        scalar = pts.ndim == 1
        kmax = max(mode.k for _, mode in f.terms)
        z = np.clip(pts[..., 2], -1.0, 1.0)
        phi = np.arctan2(pts[..., 1], pts[..., 0])
        leg = normalized_legendre(kmax, z)
        out = np.zeros(pts.shape[:-1])
        for a, mode in f.terms:
            q = mode.q
            term = leg[mode.k, abs(q)]
            if q > 0:
                term = math.sqrt(2.0) * term * np.cos(q * phi)
            elif q < 0:
                term = math.sqrt(2.0) * term * np.sin(-q * phi)
            out = out + a * term
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# spectral calculus
# ---------------------------------------------------------------------------

def apply_product_operator(f: EigenSum, gammas: Sequence[float]) -> EigenSum:
    """Exact action of ``prod_k (Delta + gamma_k)`` on ``f``.

    Each coefficient ``a_j`` becomes ``a_j * prod_k (gamma_k - lambda_j)``.
    Terms are kept even when they become zero.
    """
    terms = []
    for a, mode in f.terms:
        factor = 1.0
        for g in gammas:
            factor *= float(g) - mode.eigenvalue
        terms.append((a * factor, mode))
    # bypass merging: the mode set is unchanged
    out = object.__new__(EigenSum)
    object.__setattr__(out, "manifold", f.manifold)
    object.__setattr__(out, "dim", f.dim)
    object.__setattr__(out, "terms", tuple(terms))
    return out


def annihilation_scale(f: EigenSum) -> float:
    """Magnitude used to judge ``apply_product_operator(f, f.eigenvalues)`` as zero."""
    lams = f.eigenvalues
    if not lams:
        return 0.0
    amax = float(np.max(np.abs(f.coefficients)))
    return amax * float(np.prod([lams[-1] + lam for lam in lams]))


@dataclass(frozen=True)
class ExtendedFunction:
    """``h(x, t) = f(x) exp(mu t)`` on ``M x R``."""

    base: EigenSum
    mu: float

    def __call__(self, x, t):
        return evaluate(self.base, x) * np.exp(self.mu * np.asarray(t, dtype=float))

    def at(self, points) -> np.ndarray:
        """Evaluate at points ``(x_1, ..., x_d, t)`` stacked on the last axis."""
        pts = np.asarray(points, dtype=float)
        return evaluate(self.base, pts[..., :-1]) * np.exp(self.mu * pts[..., -1])

    @property
    def operator_shifts(self) -> tuple[float, ...]:
        """Shifts ``lambda_k - lambda_1`` of the order-2m operator annihilating ``h``."""
        lams = self.base.eigenvalues
        return (0.0,) + tuple(lam - lams[0] for lam in lams[1:])

    def term_symbols(self, gammas: Sequence[float] | None = None) -> np.ndarray:
        """Per-term symbol ``prod_k (mu^2 - lambda_j + gamma_k)`` of the cylinder operator."""
        gammas = self.operator_shifts if gammas is None else gammas
        mu2 = self.mu * self.mu
        out = []
        for _, mode in self.base.terms:
            s = 1.0
            for g in gammas:
                s *= mu2 - mode.eigenvalue + g
            out.append(s)
        return np.array(out)


def extend(f: EigenSum) -> ExtendedFunction:
    """Harmonic-type extension ``f(x) exp(sqrt(lambda_1) t)``."""
    lam1 = f.lambda1
    if lam1 <= 0.0:
        raise ValueError(f"extension needs lambda_1 > 0, got {lam1}")
    return ExtendedFunction(f, math.sqrt(lam1))


def product_residual_exact(h: ExtendedFunction, gammas: Sequence[float] | None = None) -> float:
    """Largest per-term coefficient of ``Delta prod_{k>=2} (Delta + lambda_k - lambda_1) h``.

    Computed from the exact symbol of each ``phi_j exp(mu t)``; zero up to
    roundoff when ``mu^2 = lambda_1``.
    """
    coeffs = np.abs(h.base.coefficients)
    if coeffs.size == 0:
        return 0.0
    return float(np.max(coeffs * np.abs(h.term_symbols(gammas))))


def residual_scale(h: ExtendedFunction) -> float:
    """Scale for relative residuals: ``max|a_j| * prod_k (lambda_m + lambda_k)``."""
    lams = h.base.eigenvalues
    amax = float(np.max(np.abs(h.base.coefficients)))
    return amax * float(np.prod([lams[-1] + lam for lam in lams]))


def _operator_polynomial(shifts: Sequence[float]) -> np.ndarray:
    """Coefficients (ascending) of ``prod (z + s)`` in the Laplacian symbol ``z``."""
    poly = np.array([1.0])
    for s in shifts:
        poly = np.convolve(poly, np.array([s, 1.0]))
    return poly


def product_residual_fd(h: ExtendedFunction, point, step: float) -> float:
    """Finite-difference value of the cylinder operator applied to ``h`` at ``point``.

    The operator is expanded as a polynomial in the Laplacian and each power
    ``Delta^j`` is replaced by ``j`` nested 3-point Laplacians on a local grid
    around ``point = (x_1, ..., x_d, t)``.  Torus bases only; ``m <= 4``.
    Truncation error is ``O(step^2)``.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if h.base.manifold != "torus":
        raise ValueError("the finite-difference oracle works on flat torus cylinders only")
    if step < 1e-4:
        raise ValueError("step below 1e-4: finite-difference roundoff dominates")
    m = h.base.m
    if m > 4:
        raise ValueError("finite-difference oracle limited to m <= 4")
    poly = _operator_polynomial(h.operator_shifts)
    dim = h.base.dim + 1
    point = np.asarray(point, dtype=float).reshape(dim)
    offsets = np.arange(-m, m + 1) * step
    axes = [point[i] + offsets for i in range(dim)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    values = h.at(grid)
    total = poly[0] * values[(m,) * dim]
    current = values
    for j in range(1, len(poly)):
        current = _discrete_laplacian(current, step)
        centre = (m - j,) * dim
        total += poly[j] * current[centre]
    return float(total)


def _discrete_laplacian(u: np.ndarray, step: float) -> np.ndarray:
    inner = tuple(slice(1, -1) for _ in range(u.ndim))
    out = -2.0 * u.ndim * u[inner]
    for ax in range(u.ndim):
        lo = list(inner)
        hi = list(inner)
        lo[ax] = slice(0, -2)
        hi[ax] = slice(2, None)
        out = out + u[tuple(lo)] + u[tuple(hi)]
    return out / (step * step)


# ---------------------------------------------------------------------------
# zonal harmonics
# ---------------------------------------------------------------------------

def _unit(pole) -> np.ndarray:
    p = np.asarray(pole, dtype=float).reshape(3)
    if abs(np.linalg.norm(p) - 1.0) > UNIT_TOL:
        raise ValueError("pole must be a unit vector")
    return p


def zonal_harmonic(k: int, pole=(0.0, 0.0, 1.0)) -> tuple[EigenSum, float]:
    """L2-normalised zonal harmonic of degree ``k`` about ``pole`` and its peak value.

    Expanded in the fixed real basis through the addition theorem,
    ``Z_k(x) = sqrt(4 pi / (2k+1)) sum_q Y_k^q(pole) Y_k^q(x)``.
    The peak is ``Z_k(pole) = sqrt((2k+1) / (4 pi))``.
    """
    if k < 0:
        raise ValueError("degree must be non-negative")
    p = _unit(pole)
    scale = math.sqrt(4.0 * math.pi / (2 * k + 1))
    # one Legendre table for all orders; real_sph_harm would rebuild it per q
    leg = normalized_legendre(k, np.clip(p[2], -1.0, 1.0))[k]
    phi = math.atan2(p[1], p[0])
    terms = []
    for q in range(-k, k + 1):
        if q == 0:
            y = leg[0]
        elif q > 0:
            y = math.sqrt(2.0) * leg[q] * math.cos(q * phi)
        else:
            y = math.sqrt(2.0) * leg[-q] * math.sin(-q * phi)
        c = scale * float(y)
        if c != 0.0:
            terms.append((c, k, q))
    return EigenSum.sphere(terms), math.sqrt((2 * k + 1) / (4.0 * math.pi))


def isolated_zero_example(k: int, n: int, pole=(0.0, 0.0, 1.0), scale: float = 1.0) -> EigenSum:
    """``Z_k - scale * (d_k / d_n) Z_n``; vanishes at ``pole`` when ``scale == 1``."""
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got k={k}, n={n}")
    zk, dk = zonal_harmonic(k, pole)
    zn, dn = zonal_harmonic(n, pole)
    return zk - zn.scaled(scale * dk / dn)
