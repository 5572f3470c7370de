"""Zero sets, distance-to-zero-set fields and nodal domains on sampled grids.

Torus grids are ``N`` (d=1) or ``N x N`` (d=2) nodes at ``i/N``.  Sphere
grids are latitude-longitude: colatitude ``i*pi/N`` for ``i = 0..N`` (both
poles included) and longitude ``2*pi*j/(2N)`` for ``j = 0..2N-1``.

Sign convention: a node whose value is exactly zero counts as positive.
Nodes with ``|f| <= ZERO_NODE_TOL * max|f|`` are additionally reported as
point zeros, so that zeros of even multiplicity (touching zeros) are not
lost by sign-change detection.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .spectral import EigenSum, evaluate

ZERO_NODE_TOL = 1e-12
MIN_RESOLUTION = 16
SAMPLES_PER_OSCILLATION = 8


class ResolutionError(ValueError):
    """Grid too coarse for the highest eigenvalue of the sum."""

    def __init__(self, N: int, minimum: int):
        super().__init__(f"resolution N={N} refused: need N >= {minimum}")
        self.N = N
        self.minimum = minimum


class EmptyZeroSetError(ValueError):
    """Raised when a distance to the zero set is requested but there are no zeros."""

    def __init__(self):
        super().__init__("no zeros in window")


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def minimum_resolution(f: EigenSum) -> int:
    """Smallest ``N`` giving more than 8 samples per shortest oscillation ``2 pi / sqrt(lambda_m)``."""
    lam = f.lambda_max
    if f.manifold == "torus":
        # spacing 1/N < (1/8) * 2pi/sqrt(lam)  <=>  N > 8 |nu|_max
        bound = SAMPLES_PER_OSCILLATION * math.sqrt(lam) / (2.0 * math.pi)
    else:
        # spacing pi/N < (1/8) * 2pi/sqrt(lam)  <=>  N > 4 sqrt(lam)
        bound = 0.5 * SAMPLES_PER_OSCILLATION * math.sqrt(lam)
    nearest = round(bound)
    n_min = nearest + 1 if abs(bound - nearest) < 1e-9 else math.floor(bound) + 1
    return max(MIN_RESOLUTION, n_min)


def torus_nodes(N: int, dim: int) -> np.ndarray:
    ticks = np.arange(N) / N
    if dim == 1:
        return ticks[:, None]
    if dim == 2:
        x, y = np.meshgrid(ticks, ticks, indexing="ij")
        return np.stack([x, y], axis=-1)
    raise ValueError("torus grids are implemented for d = 1, 2")


def sphere_angles(N: int) -> tuple[np.ndarray, np.ndarray]:
    return np.arange(N + 1) * (math.pi / N), np.arange(2 * N) * (math.pi / N)


def sphere_nodes(N: int) -> np.ndarray:
    theta, phi = sphere_angles(N)
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    return _sph_to_xyz(th, ph)


def _sph_to_xyz(theta, phi) -> np.ndarray:
    s = np.sin(theta)
    return np.stack([s * np.cos(phi), s * np.sin(phi), np.cos(theta)], axis=-1)


@dataclass(frozen=True, eq=False)
class ScalarGridField:
    source: EigenSum
    N: int
    values: np.ndarray
    nodes: np.ndarray

    @property
    def manifold(self) -> str:
        return self.source.manifold

    @property
    def dim(self) -> int:
        return self.source.dim

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    @property
    def grid_error(self) -> float:
        """Half the largest cell diagonal."""
        if self.manifold == "torus":
            return math.sqrt(self.dim) / (2.0 * self.N)
        return math.pi / (math.sqrt(2.0) * self.N)


def sample(f: EigenSum, N: int) -> ScalarGridField:
    """Evaluate ``f`` exactly at the grid nodes of resolution ``N``."""
    n_min = minimum_resolution(f)
    if N < n_min:
        raise ResolutionError(N, n_min)
    nodes = torus_nodes(N, f.dim) if f.manifold == "torus" else sphere_nodes(N)
    values = np.asarray(evaluate(f, nodes), dtype=float)
    values.setflags(write=False)
    nodes.setflags(write=False)
    return ScalarGridField(f, N, values, nodes)


# ---------------------------------------------------------------------------
# zero sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Zero set as segments ``(n, 2, D)``; points are degenerate segments.

    ``D`` is 1 on T^1, 2 on T^2 and 3 on S^2 (unit vectors).  Torus segment
    endpoints are stored in the frame of their grid cell and may lie slightly
    outside ``[0, 1)``.
    """

    manifold: str
    dim: int
    segments: np.ndarray

    @property
    def empty(self) -> bool:
        return len(self.segments) == 0

    @property
    def points(self) -> np.ndarray:
        """All segment endpoints, torus coordinates reduced to ``[0, 1)``."""
        pts = self.segments.reshape(-1, self.segments.shape[-1])
        if self.manifold == "torus":
            pts = np.mod(pts, 1.0)
            pts[pts >= 1.0] = 0.0
        return pts


def _signs(values: np.ndarray) -> np.ndarray:
    return values >= 0.0


def _zero_nodes(field: ScalarGridField) -> np.ndarray:
    scale = field.sup_norm
    if scale == 0.0:
        return np.zeros(field.values.shape, dtype=bool)
    return np.abs(field.values) <= ZERO_NODE_TOL * scale


def extract_zero_set(field: ScalarGridField) -> ZeroSet:
    """Zero crossings of the sampled field.

    d=1: sign changes between neighbouring nodes refined by bisection on the
    exact sum.  d=2 and the sphere: marching squares with linear
    interpolation on cell edges and periodic wrap; saddle cells are resolved
    by the sign of the exact value at the cell centre.
    """
    if field.manifold == "torus" and field.dim == 1:
        return _zeros_1d(field)
    if field.manifold == "torus":
        v = field.values
        N = field.N
        h = 1.0 / N

        def centre(i, j):
            pts = (np.stack([i, j], axis=-1) + 0.5) / N
            return evaluate(field.source, pts)

        def to_coords(i, j, di, dj, t, axis):
            # point at fraction t along the edge leaving corner (i+di, j+dj) in +axis direction
            x = (i + di) * h + (t * h if axis == 0 else 0.0)
            y = (j + dj) * h + (t * h if axis == 1 else 0.0)
            return np.stack([x, y], axis=-1)

        segs = _marching_squares(v, wrap_rows=True, centre=centre, to_coords=to_coords)
    else:
        v = field.values
        N = field.N
        dth = math.pi / N

        def centre(i, j):
            th = (i + 0.5) * dth
            ph = (j + 0.5) * dth
            return evaluate(field.source, _sph_to_xyz(th, ph))

        def to_coords(i, j, di, dj, t, axis):
            th = (i + di) * dth + (t * dth if axis == 0 else 0.0)
            ph = (j + dj) * dth + (t * dth if axis == 1 else 0.0)
            return _sph_to_xyz(th, ph)

        segs = _marching_squares(v, wrap_rows=False, centre=centre, to_coords=to_coords)
    zero_nodes = field.nodes[_zero_nodes(field)]
    if len(zero_nodes):
        pts = np.repeat(zero_nodes[:, None, :], 2, axis=1)
        segs = np.concatenate([segs, pts], axis=0) if len(segs) else pts
    if len(segs) == 0:
        segs = np.zeros((0, 2, field.nodes.shape[-1]))
    return ZeroSet(field.manifold, field.dim, segs)


def _zeros_1d(field: ScalarGridField) -> ZeroSet:
    v = field.values
    N = field.N
    s = _signs(v)
    nxt = np.roll(s, -1)
    idx = np.nonzero(s != nxt)[0]
    f = field.source

    def g(x):
        return float(evaluate(f, x))

    roots = []
    for i in idx:
        a, b = i / N, (i + 1) / N
        fa, fb = v[i], v[(i + 1) % N]
        if fa == 0.0:
            roots.append(a)
        elif fb == 0.0:
            roots.append(b)
        else:
            roots.append(brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
    pts = list(roots) + list(field.nodes[_zero_nodes(field), 0])
    pts = np.mod(np.array(pts, dtype=float), 1.0)
    pts[pts >= 1.0] = 0.0
    pts = np.sort(pts)
    # a root on a node is found both by the sign scan and as a zero node
    if len(pts) > 1:
        pts = pts[np.concatenate([[True], np.diff(pts) > 1e-12])]
        if len(pts) > 1 and pts[-1] > 1.0 - 1e-12:
            pts = pts[:-1]
    segs = np.repeat(pts[:, None, None], 2, axis=1)
    return ZeroSet("torus", 1, segs.reshape(-1, 2, 1))


# corner order: 0=(i,j) 1=(i+1,j) 2=(i+1,j+1) 3=(i,j+1)
# edge order:   0: 0-1, 1: 1-2, 2: 3-2, 3: 0-3
_EDGE_CORNERS = ((0, 1), (1, 2), (3, 2), (0, 3))


def _marching_squares(v, wrap_rows, centre, to_coords) -> np.ndarray:
    R, C = v.shape
    rows = np.arange(R if wrap_rows else R - 1)
    cols = np.arange(C)
    I, J = np.meshgrid(rows, cols, indexing="ij")
    I = I.ravel()
    J = J.ravel()
    I1 = (I + 1) % R
    J1 = (J + 1) % C
    corners = np.stack([v[I, J], v[I1, J], v[I1, J1], v[I, J1]], axis=-1)
    sg = corners >= 0.0
    crossed = np.stack([sg[:, a] != sg[:, b] for a, b in _EDGE_CORNERS], axis=-1)
    ncross = crossed.sum(axis=1)

    def edge_point(cells, e):
        a, b = _EDGE_CORNERS[e]
        va = corners[cells, a]
        vb = corners[cells, b]
        t = va / (va - vb)
        i = I[cells]
        j = J[cells]
        # edges 0 and 2 run along axis 0 (rows), edges 1 and 3 along axis 1
        if e == 0:
            return to_coords(i, j, 0, 0, t, 0)
        if e == 1:
            return to_coords(i, j, 1, 0, t, 1)
        if e == 2:
            return to_coords(i, j, 0, 1, t, 0)
        return to_coords(i, j, 0, 0, t, 1)

    pieces = []
    two = np.nonzero(ncross == 2)[0]
    if len(two):
        order = np.argsort(~crossed[two], axis=1, kind="stable")[:, :2]
        for e0 in range(4):
            for e1 in range(e0 + 1, 4):
                sel = two[(order[:, 0] == e0) & (order[:, 1] == e1)]
                if len(sel):
                    pieces.append((sel, np.stack([edge_point(sel, e0), edge_point(sel, e1)], axis=1)))
    four = np.nonzero(ncross == 4)[0]
    if len(four):
        c_sign = np.asarray(centre(I[four], J[four])) >= 0.0
        joined = c_sign == sg[four, 0]
        a = four[joined]
        b = four[~joined]
        if len(a):
            # corners 0 and 2 connected through the centre: cut off corners 1 and 3
            pieces.append((a, np.stack([edge_point(a, 0), edge_point(a, 1)], axis=1)))
            pieces.append((a, np.stack([edge_point(a, 2), edge_point(a, 3)], axis=1)))
        if len(b):
            pieces.append((b, np.stack([edge_point(b, 3), edge_point(b, 0)], axis=1)))
            pieces.append((b, np.stack([edge_point(b, 1), edge_point(b, 2)], axis=1)))
    if not pieces:
        return np.zeros((0, 2, 0))
    cells = np.concatenate([p[0] for p in pieces])
    segs = np.concatenate([p[1] for p in pieces], axis=0)
    return segs[np.argsort(cells, kind="stable")]


# ---------------------------------------------------------------------------
# distance fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DistanceField:
    manifold: str
    dim: int
    values: np.ndarray
    grid_error: float


def _wrap(d):
    return d - np.round(d)


def _seg_dist_flat(nodes, p, q):
    # nodes (n, D); p, q (n, k, D) -> (n, k) periodic distances
    a = _wrap(p - nodes[:, None, :])
    b = a + (q - p)
    ab = b - a
    den = np.einsum("nkd,nkd->nk", ab, ab)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(den > 0.0, -np.einsum("nkd,nkd->nk", a, ab) / den, 0.0)
    t = np.clip(t, 0.0, 1.0)
    c = a + t[..., None] * ab
    return np.sqrt(np.einsum("nkd,nkd->nk", c, c))


def _cross(a, b):
    # np.cross is slow on small trailing axes
    return np.stack(
        (
            a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1],
            a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2],
            a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0],
        ),
        axis=-1,
    )


def _angle(a, b):
    c = _cross(a, b)
    return np.arctan2(np.sqrt(np.einsum("...d,...d->...", c, c)), np.einsum("...d,...d->...", a, b))


def _seg_dist_sphere(nodes, p, q):
    x = np.broadcast_to(nodes[:, None, :], p.shape)
    dp = _angle(x, p)
    dq = _angle(x, q)
    end = np.minimum(dp, dq)
    n = _cross(p, q)
    nn = np.sqrt(np.einsum("nkd,nkd->nk", n, n))
    ok = nn > 1e-15
    with np.errstate(invalid="ignore", divide="ignore"):
        n = n / np.where(ok, nn, 1.0)[..., None]
    xn = np.einsum("nkd,nkd->nk", x, n)
    proj = x - xn[..., None] * n
    inside = (np.einsum("nkd,nkd->nk", _cross(p, proj), n) >= 0.0) & (
        np.einsum("nkd,nkd->nk", _cross(proj, q), n) >= 0.0
    )
    perp = np.arcsin(np.clip(np.abs(xn), 0.0, 1.0))
    return np.where(ok & inside, np.minimum(perp, end), end)


class _SegmentIndex:
    def __init__(self, zs: ZeroSet):
        self.manifold = zs.manifold
        segs = np.unique(np.asarray(zs.segments, dtype=float), axis=0)
        self.p = segs[:, 0, :]
        self.q = segs[:, 1, :]
        if zs.manifold == "torus":
            mid = np.mod(0.5 * (self.p + self.q), 1.0)
            mid[mid >= 1.0] = 0.0
            self.reach = 0.5 * np.linalg.norm(self.q - self.p, axis=-1)
            self.tree = cKDTree(mid, boxsize=1.0)
        else:
            mid = 0.5 * (self.p + self.q)
            half = 0.5 * np.linalg.norm(self.q - self.p, axis=-1)
            sag = 1.0 - np.linalg.norm(mid, axis=-1)
            self.reach = half + sag
            self.tree = cKDTree(mid)
        self.rmax = float(np.max(self.reach)) if len(self.reach) else 0.0

    def _exact(self, nodes, idx):
        p = self.p[idx]
        q = self.q[idx]
        if self.manifold == "torus":
            return _seg_dist_flat(nodes, p, q)
        return _seg_dist_sphere(nodes, p, q)

    def _to_metric(self, chord):
        if self.manifold == "torus":
            return chord
        return 2.0 * np.arcsin(np.clip(chord / 2.0, 0.0, 1.0))

    def _to_chord(self, dist):
        if self.manifold == "torus":
            return dist
        return 2.0 * np.sin(np.minimum(dist, math.pi) / 2.0)

    def query(self, nodes: np.ndarray) -> np.ndarray:
        nseg = len(self.p)
        best = np.full(len(nodes), np.inf)
        todo = np.arange(len(nodes))
        for k in (16,):
            k = min(k, nseg)
            d_mid, idx = self.tree.query(nodes[todo], k=k)
            if k == 1:
                d_mid = d_mid[:, None]
                idx = idx[:, None]
            best[todo] = np.minimum(best[todo], np.min(self._exact(nodes[todo], idx), axis=1))
            if k == nseg:
                return best
            # any segment outside the k nearest midpoints is at least this far away
            bound = self._to_metric(np.maximum(d_mid[:, -1] - self.rmax, 0.0))
            todo = todo[best[todo] > bound]
            if len(todo) == 0:
                return best
        # remaining nodes (ties near degenerate geometry): every segment in reach
        radius = self._to_chord(best[todo]) + self.rmax
        cands = self.tree.query_ball_point(nodes[todo], radius * (1 + 1e-12) + 1e-15)
        order = np.argsort([len(c) for c in cands], kind="stable")
        for i in range(0, len(order), 512):
            sel = order[i : i + 512]
            width = max(len(cands[j]) for j in sel)
            if width == 0:
                continue
            idx = np.zeros((len(sel), width), dtype=int)
            for r, j in enumerate(sel):
                c = cands[j] or [0]
                idx[r, :] = c[0]
                idx[r, : len(c)] = c
            n = todo[sel]
            best[n] = np.minimum(best[n], np.min(self._exact(nodes[n], idx), axis=1))
        return best


def distance_field(field: ScalarGridField, zeroset: ZeroSet, workers: int = 1) -> DistanceField:
    """Per-node distance to the zero set in the flat periodic or great-circle metric.

    Results do not depend on ``workers``: nodes are split into fixed chunks
    and each node's minimum is computed independently.
    """
    if zeroset.empty:
        raise EmptyZeroSetError()
    shape = field.values.shape
    nodes = field.nodes.reshape(-1, field.nodes.shape[-1])
    if field.manifold == "torus" and field.dim == 1:
        zeros = zeroset.points[:, 0]
        tree = cKDTree(zeros[:, None], boxsize=1.0)
        dist, _ = tree.query(nodes)
        return DistanceField(field.manifold, field.dim, dist.reshape(shape), field.grid_error)
    index = _SegmentIndex(zeroset)
    chunks = [nodes[i : i + 4096] for i in range(0, len(nodes), 4096)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(index.query, chunks))
    else:
        parts = [index.query(c) for c in chunks]
    return DistanceField(field.manifold, field.dim, np.concatenate(parts).reshape(shape), field.grid_error)


def density_radius(df: DistanceField) -> float:
    """Largest node distance to the zero set; accurate to ``df.grid_error``."""
    return float(np.max(df.values))


def manifold_diameter(manifold: str, dim: int) -> float:
    return math.sqrt(dim) / 2.0 if manifold == "torus" else math.pi


# ---------------------------------------------------------------------------
# nodal domains
# ---------------------------------------------------------------------------

def _neighbour_pairs(field: ScalarGridField) -> np.ndarray:
    shape = field.values.shape
    idx = np.arange(field.values.size).reshape(shape)
    pairs = []
    if field.manifold == "torus":
        for ax in range(field.dim):
            pairs.append(np.stack([idx.ravel(), np.roll(idx, -1, axis=ax).ravel()], axis=1))
    else:
        pairs.append(np.stack([idx[:-1].ravel(), idx[1:].ravel()], axis=1))
        pairs.append(np.stack([idx.ravel(), np.roll(idx, -1, axis=1).ravel()], axis=1))
    return np.concatenate(pairs)


def nodal_components(field: ScalarGridField) -> tuple[int, np.ndarray]:
    """Label 4-connected same-sign node components, with periodic wrap.

    On the sphere all nodes of a pole row are one point and are connected
    through the longitude wrap.
    """
    s = _signs(field.values).ravel()
    pairs = _neighbour_pairs(field)
    keep = s[pairs[:, 0]] == s[pairs[:, 1]]
    pairs = pairs[keep]
    n = s.size
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    count, labels = connected_components(graph, directed=False)
    return count, labels.reshape(field.values.shape)


def inner_radii(field: ScalarGridField, distfield: DistanceField | None = None) -> list[tuple[int, float]]:
    """Inner radius of each nodal domain: the largest node distance to the zero set inside it."""
    count, labels = nodal_components(field)
    if distfield is None:
        zs = extract_zero_set(field)
        if zs.empty:
            return [(c, manifold_diameter(field.manifold, field.dim)) for c in range(count)]
        distfield = distance_field(field, zs)
    flat = labels.ravel()
    dist = distfield.values.ravel()
    radii = np.full(count, -np.inf)
    np.maximum.at(radii, flat, dist)
    return [(c, float(radii[c])) for c in range(count)]


def component_of(field: ScalarGridField, node_index: tuple[int, ...]) -> np.ndarray:
    """Boolean mask of the nodal component containing ``node_index``."""
    _, labels = nodal_components(field)
    return labels == labels[node_index]


# ---------------------------------------------------------------------------
# scaling experiments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingRow:
    lambda1: float
    m: int
    N: int
    density_radius: float
    grid_error: float

    @property
    def product_radius_sqrtlambda(self) -> float:
        return self.density_radius * math.sqrt(self.lambda1)

    def as_dict(self) -> dict:
        return {
            "lambda1": self.lambda1,
            "m": self.m,
            "N": self.N,
            "density_radius": self.density_radius,
            "grid_error": self.grid_error,
            "product_radius_sqrtlambda": self.product_radius_sqrtlambda,
        }


CSV_COLUMNS = ("lambda1", "m", "N", "density_radius", "grid_error", "product_radius_sqrtlambda")


def resolution_for(f: EigenSum, samples_per_period: int) -> int:
    """Grid size with ``samples_per_period`` nodes per period of the lowest mode."""
    if f.manifold == "torus":
        base = math.ceil(samples_per_period * math.sqrt(f.lambda1) / (2.0 * math.pi) - 1e-9)
    else:
        base = math.ceil(samples_per_period * math.sqrt(f.lambda1) / (2.0 * math.pi) * 0.5 - 1e-9)
    return max(base, minimum_resolution(f))


def scaling_experiment(
    family: Callable[[int], EigenSum],
    params: Iterable[int],
    samples_per_period: int = 64,
    workers: int = 1,
) -> list[ScalingRow]:
    """Density radius against ``sqrt(lambda_1)`` along a family of sums."""
    rows = []
    for n in params:
        f = family(n)
        field = sample(f, resolution_for(f, samples_per_period))
        zs = extract_zero_set(field)
        df = distance_field(field, zs, workers=workers)
        rows.append(ScalingRow(f.lambda1, f.m, field.N, density_radius(df), df.grid_error))
    return rows


def write_scaling_csv(rows: Sequence[ScalingRow], path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            d = row.as_dict()
            writer.writerow([repr(d[c]) if isinstance(d[c], float) else d[c] for c in CSV_COLUMNS])
    return path


# ---------------------------------------------------------------------------
# plots
# ---------------------------------------------------------------------------

def _colour(t: float) -> str:
    # diverging blue-white-red, t in [-1, 1]
    t = max(-1.0, min(1.0, t))
    if t >= 0:
        r, g, b = 255, int(255 * (1 - t)), int(255 * (1 - t))
    else:
        r, g, b = int(255 * (1 + t)), int(255 * (1 + t)), 255
    return f"#{r:02x}{g:02x}{b:02x}"


def write_svg(field: ScalarGridField, zeroset: ZeroSet | None, path, size: int = 512, max_cells: int = 128) -> Path:
    """Heatmap of a 2-d field (torus or lat-long sphere chart) with the zero set overlaid."""
    path = Path(path)
    v = field.values
    scale = field.sup_norm or 1.0
    parts = []
    if field.manifold == "torus" and field.dim == 1:
        width, height = size, size // 2
        xs = np.arange(len(v)) / len(v) * width
        ys = height / 2 - v / scale * height * 0.45
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
        parts.append(f'<line x1="0" y1="{height/2}" x2="{width}" y2="{height/2}" stroke="#999"/>')
        parts.append(f'<polyline fill="none" stroke="#000" points="{pts}"/>')
        if zeroset is not None:
            for z in zeroset.points[:, 0]:
                parts.append(f'<circle cx="{z*width:.2f}" cy="{height/2}" r="3" fill="#c00"/>')
    else:
        rows, cols = v.shape
        sr = max(1, math.ceil(rows / max_cells))
        sc = max(1, math.ceil(cols / max_cells))
        sub = v[::sr, ::sc]
        width = size if field.manifold == "torus" else 2 * size
        height = size
        cw = width / sub.shape[1]
        ch = height / sub.shape[0]
        for i in range(sub.shape[0]):
            for j in range(sub.shape[1]):
                parts.append(
                    f'<rect x="{j*cw:.2f}" y="{i*ch:.2f}" width="{cw+0.05:.2f}" height="{ch+0.05:.2f}" '
                    f'fill="{_colour(sub[i, j] / scale)}"/>'
                )
        if zeroset is not None and not zeroset.empty:
            for a, b in zeroset.segments:
                pa, pb = _chart(field, a, width, height), _chart(field, b, width, height)
                if abs(pa[0] - pb[0]) > width / 2 or abs(pa[1] - pb[1]) > height / 2:
                    continue
                parts.append(
                    f'<line x1="{pa[0]:.2f}" y1="{pa[1]:.2f}" x2="{pb[0]:.2f}" y2="{pb[1]:.2f}" '
                    'stroke="#000" stroke-width="1"/>'
                )
    body = "\n".join(parts)
    path.write_text(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n{body}\n</svg>\n'
    )
    return path


def _chart(field: ScalarGridField, p: np.ndarray, width: float, height: float) -> tuple[float, float]:
    if field.manifold == "torus":
        # rows are x (first index), columns y
        x, y = np.mod(p, 1.0)
        return y * width, x * height
    th = math.acos(max(-1.0, min(1.0, p[2])))
    ph = math.atan2(p[1], p[0]) % (2 * math.pi)
    return ph / (2 * math.pi) * width, th / math.pi * height
