"""Multiscale stress layout in the spirit of Harel and Koren's fast multiscale method.

Pipeline for one connected component:

1. all-pairs BFS hop distances;
2. a farthest-point ordering of the nodes, whose prefixes serve as the
   center sets of successively coarser levels (each ``coarsening_ratio``
   times smaller, down to ``min_coarse_size``);
3. the coarsest level starts from a seeded random placement;
4. every finer level places its new nodes at their nearest coarser center
   plus seeded jitter, then refines.

Refinement minimizes the localized stress

    sum over pairs with d_uv <= R of  d_uv**-2 * (|x_u - x_v| - d_uv)**2

by stress majorization. ``R`` is ``local_radius`` on the finest level and
``local_radius`` times the level's largest nearest-center distance on coarse
levels, so sparse center sets still see each other. Majorization never
increases stress; an iteration that would (round-off) is discarded.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DisconnectedInput, InvalidParams, MissingCoordinates
from .model import PatronageNetwork
from .structure import bfs_distances, weak_components

Coordinates = Mapping[str, tuple[float, float]]


@dataclass(frozen=True)
class LayoutParams:
    local_radius: int = 7
    iterations_per_level: int | None = None  # None: 4 * level size
    coarsening_ratio: float = 3.0
    min_coarse_size: int = 10
    seed: int = 0
    tolerance: float = 1e-9  # stop a level once the relative stress gain drops below this
    jitter: float = 0.5
    component_gap: float = 2.0

    def __post_init__(self) -> None:
        if self.local_radius < 1:
            raise InvalidParams("local_radius must be >= 1")
        if self.iterations_per_level is not None and self.iterations_per_level < 1:
            raise InvalidParams("iterations_per_level must be >= 1")
        if not self.coarsening_ratio > 1:
            raise InvalidParams("coarsening_ratio must be > 1")
        if self.min_coarse_size < 1:
            raise InvalidParams("min_coarse_size must be >= 1")
        if self.tolerance < 0 or self.jitter < 0 or self.component_gap < 0:
            raise InvalidParams("tolerance, jitter and component_gap must be non-negative")


@dataclass(frozen=True)
class LevelRecord:
    size: int
    radius: int
    stress_before: float
    stress_after: float
    iterations: int


@dataclass(frozen=True)
class LayoutResult:
    coordinates: Coordinates
    final_stress: float
    seed: int
    levels: tuple[LevelRecord, ...] = field(default=(), repr=False)


def hop_matrix(network: PatronageNetwork, nodes: Sequence[str]) -> np.ndarray:
    """Undirected hop distances inside the subgraph induced by ``nodes``; inf if unreachable."""
    keep = set(nodes)
    adj = {a: network.neighbors(a) & keep for a in nodes}
    pos = {a: i for i, a in enumerate(nodes)}
    D = np.full((len(nodes), len(nodes)), np.inf)
    for a in nodes:
        row = D[pos[a]]
        for b, d in bfs_distances(adj, a).items():
            row[pos[b]] = d
    return D


def _weights(D: np.ndarray, radius: float) -> np.ndarray:
    W = np.zeros_like(D)
    mask = (D > 0) & (D <= radius)
    W[mask] = D[mask] ** -2.0
    return W


def _stress(X: np.ndarray, D: np.ndarray, W: np.ndarray) -> float:
    iu = np.triu_indices(len(X), 1)
    w = W[iu]
    sel = w > 0
    if not sel.any():
        return 0.0
    diff = X[iu[0][sel]] - X[iu[1][sel]]
    dist = np.sqrt((diff**2).sum(axis=1))
    return float(np.sum(w[sel] * (dist - D[iu][sel]) ** 2))


def _weight_components(W: np.ndarray) -> list[np.ndarray]:
    n = len(W)
    label = -np.ones(n, dtype=int)
    comps = []
    for s in range(n):
        if label[s] >= 0:
            continue
        stack, members = [s], []
        label[s] = len(comps)
        while stack:
            u = stack.pop()
            members.append(u)
            for v in np.flatnonzero(W[u] > 0):
                if label[v] < 0:
                    label[v] = len(comps)
                    stack.append(v)
        comps.append(np.array(sorted(members)))
    return comps


def _majorize(X: np.ndarray, D: np.ndarray, W: np.ndarray, iterations: int, tol: float):
    """Guttman-transform iterations; returns (X, stress_before, stress_after, iterations run)."""
    before = _stress(X, D, W)
    if len(X) < 2 or before == 0.0:
        return X, before, before, 0
    L = -W.copy()
    np.fill_diagonal(L, W.sum(axis=1))
    Lp = np.linalg.pinv(L)
    comps = _weight_components(W)
    current = before
    done = 0
    for _ in range(iterations):
        diff = X[:, None, :] - X[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=2))
        with np.errstate(divide="ignore", invalid="ignore"):
            B = np.where(dist > 0, -W * D / dist, 0.0)
        B[~np.isfinite(B)] = 0.0
        np.fill_diagonal(B, 0.0)
        np.fill_diagonal(B, -B.sum(axis=1))
        Y = Lp @ (B @ X)
        # keep each weight-connected block where it was; pinv recentres it at the origin
        for c in comps:
            Y[c] += X[c].mean(axis=0) - Y[c].mean(axis=0)
        new = _stress(Y, D, W)
        if new > current:
            break
        done += 1
        gain = current - new
        X, current = Y, new
        if current == 0.0 or gain <= tol * current:
            break
    return X, before, current, done


def _level_sizes(n: int, ratio: float, min_size: int) -> list[int]:
    sizes = [n]
    while sizes[-1] > min_size:
        sizes.append(max(1, int(sizes[-1] // ratio)))
    return sizes[::-1]


def farthest_point_order(D: np.ndarray, first: int) -> list[int]:
    """Greedy k-center ordering: each next node is farthest from those already chosen."""
    n = len(D)
    order = [first]
    gap = D[first].copy()
    gap[first] = -1.0
    chosen = np.zeros(n, dtype=bool)
    chosen[first] = True
    for _ in range(n - 1):
        nxt = int(np.argmax(np.where(chosen, -1.0, gap)))
        order.append(nxt)
        chosen[nxt] = True
        gap = np.minimum(gap, D[nxt])
    return order


def layout_multiscale(
    network: PatronageNetwork,
    params: LayoutParams | None = None,
    nodes: Sequence[str] | None = None,
) -> LayoutResult:
    """Lay out one connected node set (default: the whole network)."""
    params = params or LayoutParams()
    nodes = list(network.actor_ids() if nodes is None else dict.fromkeys(nodes))
    n = len(nodes)
    if n == 0:
        return LayoutResult({}, 0.0, params.seed)
    if n == 1:
        return LayoutResult({nodes[0]: (0.0, 0.0)}, 0.0, params.seed)
    D = hop_matrix(network, nodes)
    if not np.isfinite(D).all():
        raise DisconnectedInput("layout_multiscale needs a connected input; use layout_network")

    rng = np.random.default_rng(params.seed)
    order = farthest_point_order(D, int(rng.integers(n)))
    sizes = _level_sizes(n, params.coarsening_ratio, params.min_coarse_size)

    X = np.zeros((n, 2))
    k0 = sizes[0]
    centers = order[:k0]
    span = float(D[np.ix_(centers, centers)].max()) or 1.0
    X[centers] = rng.uniform(0.0, span, size=(k0, 2))
    records = []
    placed = list(centers)
    for li, k in enumerate(sizes):
        if li > 0:
            fresh = order[len(placed):k]
            near = np.argmin(D[np.ix_(fresh, placed)], axis=1)
            X[fresh] = X[np.array(placed)[near]] + rng.uniform(
                -params.jitter, params.jitter, size=(len(fresh), 2)
            )
            placed = order[:k]
        idx = np.array(placed)
        Dl = D[np.ix_(idx, idx)]
        if k > 1:
            off = Dl + np.diag(np.full(k, np.inf))
            spread = int(off.min(axis=1).max())
        else:
            spread = 1
        radius = params.local_radius * max(1, spread)
        W = _weights(Dl, radius)
        iters = params.iterations_per_level or 4 * k
        Xl, before, after, done = _majorize(X[idx], Dl, W, iters, params.tolerance)
        X[idx] = Xl
        records.append(LevelRecord(k, radius, before, after, done))

    coords = {a: (float(X[i, 0]), float(X[i, 1])) for i, a in enumerate(nodes)}
    final = _stress(X, D, _weights(D, params.local_radius))
    return LayoutResult(coords, final, params.seed, tuple(records))


def layout_network(network: PatronageNetwork, params: LayoutParams | None = None) -> LayoutResult:
    """Lay out each weak component separately and tile them left to right, largest first.

    Rows wrap once they are wider than the largest component.
    """
    params = params or LayoutParams()
    report = weak_components(network)
    coords: dict[str, tuple[float, float]] = {}
    records: list[LevelRecord] = []
    total = 0.0
    cursor_x = cursor_y = 0.0
    row_height = 0.0
    row_limit = None
    for comp in report.components:
        members = [a for a in network.actor_ids() if a in comp]
        part = layout_multiscale(network, params, members)
        records.extend(part.levels)
        total += part.final_stress
        xs = [p[0] for p in part.coordinates.values()]
        ys = [p[1] for p in part.coordinates.values()]
        w, h = max(xs) - min(xs), max(ys) - min(ys)
        if row_limit is None:
            row_limit = max(w, 1.0)
        elif cursor_x > 0 and cursor_x + w > row_limit:
            cursor_x = 0.0
            cursor_y += row_height + params.component_gap
            row_height = 0.0
        dx, dy = cursor_x - min(xs), cursor_y - min(ys)
        for a in members:
            x, y = part.coordinates[a]
            coords[a] = (x + dx, y + dy)
        cursor_x += w + params.component_gap
        row_height = max(row_height, h)
    ordered = {a: coords[a] for a in network.actor_ids()}
    return LayoutResult(ordered, total, params.seed, tuple(records))


def stress(
    network: PatronageNetwork, coordinates: Coordinates, local_radius: int = 7
) -> float:
    """Localized stress over every pair of the network at hop distance <= ``local_radius``.

    Pairs in different components never contribute.
    """
    nodes = network.actor_ids()
    missing = [a for a in nodes if a not in coordinates]
    if missing:
        raise MissingCoordinates(f"no coordinates for {missing[0]!r}")
    if len(nodes) < 2:
        return 0.0
    D = hop_matrix(network, nodes)
    X = np.array([coordinates[a] for a in nodes], dtype=float)
    return _stress(X, D, _weights(D, local_radius))


def random_layout(network: PatronageNetwork, seed: int, scale: float | None = None):
    """Uniform placement in a square of side ``scale`` (default sqrt(n)); a baseline for stress."""
    nodes = network.actor_ids()
    side = math.sqrt(len(nodes)) if scale is None else scale
    pts = np.random.default_rng(seed).uniform(0.0, side, size=(len(nodes), 2))
    return {a: (float(p[0]), float(p[1])) for a, p in zip(nodes, pts)}
