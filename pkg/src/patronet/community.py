"""Modularity scoring and a smart local-moving / aggregation maximizer.

Quality of a clustering on the undirected view::

    Q = sum over clusters C of  l(C) / m  -  resolution * (d(C) / 2m) ** 2

where ``m`` is the number (or total weight) of undirected ties, ``l(C)``
the ties inside C and ``d(C)`` the summed degree of C's members. A pair
of actors tied in both directions forms one undirected tie; in weighted
mode it takes the larger of the two weights.
"""

from __future__ import annotations

import math
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum

from .errors import EmptyGraph, UncoveredNode, UnknownActor
from .model import Include, PatronageNetwork

MOVE_THRESHOLD = 1e-10
TIE_EPS = 1e-12


class Mode(str, Enum):
    UNWEIGHTED = "unweighted"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class SweepRecord:
    level: int
    sweep: int
    moves: int
    quality: float  # tracked incrementally from per-move gains
    assignment: Mapping[str, int]


@dataclass(frozen=True)
class Partition:
    clusters: Mapping[str, int]
    count: int
    modularity: float
    resolution: float = 1.0
    mode: Mode = Mode.UNWEIGHTED
    history: tuple[SweepRecord, ...] = field(default=(), repr=False)

    def members(self) -> list[list[str]]:
        out: list[list[str]] = [[] for _ in range(self.count)]
        for a, c in self.clusters.items():
            out[c].append(a)
        return out

    def sizes(self) -> list[int]:
        return [len(m) for m in self.members()]


def undirected_ties(network: PatronageNetwork, mode: Mode | str = Mode.UNWEIGHTED):
    """Collapse directed ties to ``{(a, b): weight}`` with ``a`` first in insertion order."""
    mode = Mode(mode)
    order = {a: i for i, a in enumerate(network.actor_ids())}
    edges: dict[tuple[str, str], float] = {}
    for t in network.ties():
        a, b = sorted((t.source, t.target), key=order.__getitem__)
        w = 1.0 if mode is Mode.UNWEIGHTED else float(t.weight)
        edges[(a, b)] = max(edges.get((a, b), 0.0), w)
    return edges


def modularity(
    network: PatronageNetwork,
    partition: Partition | Mapping[str, int],
    mode: Mode | str = Mode.UNWEIGHTED,
    resolution: float = 1.0,
    include: Include = None,
) -> float:
    clusters = partition.clusters if isinstance(partition, Partition) else partition
    net = network.induced(include)
    for a in clusters:
        if a not in net:
            raise UnknownActor(f"partition names unknown actor {a!r}")
    for a in net.actor_ids():
        if a not in clusters:
            raise UncoveredNode(f"actor {a!r} is not assigned to a cluster")
    edges = undirected_ties(net, mode)
    m = math.fsum(edges.values())
    if m == 0:
        raise EmptyGraph("modularity is undefined on a graph without ties")
    inner: dict[int, list[float]] = {}
    degree: dict[int, list[float]] = {}
    for (a, b), w in edges.items():
        ca, cb = clusters[a], clusters[b]
        if ca == cb:
            inner.setdefault(ca, []).append(w)
        degree.setdefault(ca, []).append(w)
        degree.setdefault(cb, []).append(w)
    return math.fsum(
        math.fsum(inner.get(c, ())) / m - resolution * (math.fsum(d) / (2 * m)) ** 2
        for c, d in degree.items()
    )


class _Level:
    """Weighted undirected graph on integer nodes, with self-weights for merged clusters."""

    def __init__(self, n: int) -> None:
        self.nbrs: list[dict[int, float]] = [{} for _ in range(n)]
        self.self_w = [0.0] * n

    def add(self, i: int, j: int, w: float) -> None:
        if i == j:
            self.self_w[i] += w
        else:
            self.nbrs[i][j] = self.nbrs[i].get(j, 0.0) + w
            self.nbrs[j][i] = self.nbrs[j].get(i, 0.0) + w

    def degrees(self) -> list[float]:
        return [math.fsum(nb.values()) + 2 * s for nb, s in zip(self.nbrs, self.self_w)]


def _dense(labels: list[int]) -> list[int]:
    """Renumber labels 0..k-1 by order of first appearance."""
    seen: dict[int, int] = {}
    return [seen.setdefault(c, len(seen)) for c in labels]


def _aggregate(graph: _Level, labels: list[int]) -> _Level:
    """Collapse clusters (dense ``labels``) into super-nodes carrying their internal weight."""
    coarse = _Level(max(labels) + 1)
    for i in range(len(graph.nbrs)):
        coarse.self_w[labels[i]] += graph.self_w[i]
        for j, w in graph.nbrs[i].items():
            if i < j:
                coarse.add(labels[i], labels[j], w)
    return coarse


class _Mover:
    """Local moving with incremental quality bookkeeping and a sweep log."""

    def __init__(self, ids: list[str], m: float, resolution: float, seed: int) -> None:
        self.ids = ids
        self.m = m
        self.resolution = resolution
        self.rng = random.Random(seed)
        self.history: list[SweepRecord] = []
        self.quality = 0.0

    def start(self, graph: _Level, comm: list[int]) -> None:
        """Set the tracked quality from scratch for ``comm`` on ``graph``."""
        m, k = self.m, graph.degrees()
        inner: dict[int, float] = {}
        tot: dict[int, float] = {}
        for i, c in enumerate(comm):
            inner[c] = inner.get(c, 0.0) + graph.self_w[i]
            tot[c] = tot.get(c, 0.0) + k[i]
            for j, w in graph.nbrs[i].items():
                if i < j and comm[j] == c:
                    inner[c] += w
        self.quality = math.fsum(
            inner[c] / m - self.resolution * (tot[c] / (2 * m)) ** 2 for c in tot
        )

    def split(self, graph: _Level, labels: list[int]) -> list[int]:
        """Sub-clusters of each cluster: local moving from singletons on its own subnetwork.

        Each cluster is scored with the modularity of the subnetwork it
        induces (its own tie total and degrees), which breaks it up more
        readily than the global null model would. Only the scaffolding for
        aggregation changes; the clustering being scored stays ``labels``.
        """
        n = len(graph.nbrs)
        groups: dict[int, list[int]] = {}
        for i, c in enumerate(labels):
            groups.setdefault(c, []).append(i)
        sub = list(range(n))
        for c in sorted(groups):
            nodes = groups[c]
            local = {i: {j: w for j, w in graph.nbrs[i].items() if labels[j] == c} for i in nodes}
            k = {i: math.fsum(local[i].values()) + 2 * graph.self_w[i] for i in nodes}
            m = math.fsum(k.values()) / 2
            if len(nodes) < 2 or m == 0:
                continue
            two_m_sq = 2.0 * m * m
            tot = dict(k)
            moved = True
            while moved:
                moved = False
                order = list(nodes)
                self.rng.shuffle(order)
                for i in order:
                    c_old = sub[i]
                    ki = k[i]
                    links: dict[int, float] = {}
                    for j, w in local[i].items():
                        links[sub[j]] = links.get(sub[j], 0.0) + w
                    tot[c_old] -= ki
                    stay = links.get(c_old, 0.0) / m - self.resolution * ki * tot[c_old] / two_m_sq
                    best, best_gain = c_old, -math.inf
                    for t in sorted(links):
                        g = links[t] / m - self.resolution * ki * tot[t] / two_m_sq
                        if t != c_old and g > best_gain + TIE_EPS:
                            best, best_gain = t, g
                    if best != c_old and best_gain - stay > MOVE_THRESHOLD:
                        sub[i] = best
                        moved = True
                    tot[sub[i]] += ki
        return _dense(sub)

    def vertex_moves(self, graph: _Level, comm: list[int], level: int) -> bool:
        """One Kernighan-Lin style pass over the nodes of ``graph``.

        Every node is moved exactly once, each time taking the single best
        move left even when it loses quality; the best state seen along the
        way is kept. Returns whether that state beats the starting one.
        """
        m, resolution = self.m, self.resolution
        two_m_sq = 2.0 * m * m
        k = graph.degrees()
        n = len(graph.nbrs)
        tot = [0.0] * n
        size = [0] * n
        for i, c in enumerate(comm):
            tot[c] += k[i]
            size[c] += 1
        start = list(comm)
        quality = best_quality = self.quality
        best_comm = list(comm)
        moved = [False] * n
        for _ in range(n):
            choice = None
            for i in range(n):
                if moved[i]:
                    continue
                c_old, ki = comm[i], k[i]
                links: dict[int, float] = {}
                for j, w in graph.nbrs[i].items():
                    links[comm[j]] = links.get(comm[j], 0.0) + w
                rest = tot[c_old] - ki
                stay = links.get(c_old, 0.0) / m - resolution * ki * rest / two_m_sq
                targets = [c for c in sorted(links) if c != c_old]
                if size[c_old] > 1:
                    targets.append(size.index(0))
                for c in targets:
                    delta = links.get(c, 0.0) / m - resolution * ki * tot[c] / two_m_sq - stay
                    if choice is None or delta > choice[0] + TIE_EPS:
                        choice = (delta, i, c)
            if choice is None:
                break
            delta, i, c = choice
            c_old = comm[i]
            tot[c_old] -= k[i]
            size[c_old] -= 1
            tot[c] += k[i]
            size[c] += 1
            comm[i] = c
            moved[i] = True
            quality += delta
            if quality > best_quality + MOVE_THRESHOLD:
                best_quality, best_comm = quality, list(comm)
        comm[:] = best_comm
        improved = best_quality > self.quality
        self.quality = best_quality
        changes = sum(a != b for a, b in zip(start, comm))
        self.history.append(
            SweepRecord(level, 0, changes, self.quality, dict(zip(self.ids, _dense(comm))))
        )
        return improved

    def sweep_until_stable(
        self, graph: _Level, comm: list[int], membership: list[int], level: int
    ) -> int:
        """Move nodes of ``graph`` between clusters until a full sweep changes nothing."""
        m, resolution = self.m, self.resolution
        two_m_sq = 2.0 * m * m
        k = graph.degrees()
        n = len(graph.nbrs)
        tot = [0.0] * n
        size = [0] * n
        for i, c in enumerate(comm):
            tot[c] += k[i]
            size[c] += 1
        total = 0
        sweep = 0
        while True:
            order = list(range(n))
            self.rng.shuffle(order)
            moves = 0
            for i in order:
                c_old = comm[i]
                ki = k[i]
                links: dict[int, float] = {}
                for j, w in graph.nbrs[i].items():
                    links[comm[j]] = links.get(comm[j], 0.0) + w
                tot[c_old] -= ki

                def gain(c: int) -> float:
                    return links.get(c, 0.0) / m - resolution * ki * tot[c] / two_m_sq

                stay = gain(c_old)
                best, best_gain = c_old, -math.inf
                for c in sorted(links):
                    if c == c_old:
                        continue
                    g = gain(c)
                    if g > best_gain + TIE_EPS:
                        best, best_gain = c, g
                if size[c_old] > 1 and 0.0 > max(best_gain, stay) + MOVE_THRESHOLD:
                    # striking out alone (gain 0) beats every neighbouring cluster
                    best, best_gain = size.index(0), 0.0
                if best != c_old and best_gain - stay > MOVE_THRESHOLD:
                    comm[i] = best
                    size[c_old] -= 1
                    size[best] += 1
                    self.quality += best_gain - stay
                    moves += 1
                tot[comm[i]] += ki
            total += moves
            flat = [comm[membership[o]] for o in range(len(self.ids))]
            self.history.append(
                SweepRecord(level, sweep, moves, self.quality, dict(zip(self.ids, _dense(flat))))
            )
            sweep += 1
            if moves == 0:
                return total


def detect_communities(
    network: PatronageNetwork,
    seed: int = 0,
    resolution: float = 1.0,
    mode: Mode | str = Mode.UNWEIGHTED,
    include: Include = None,
) -> Partition:
    """Maximize modularity by smart local moving with aggregation.

    Starting from singletons, each sweep visits nodes in a seeded shuffle of
    insertion order and moves a node to the neighbouring cluster with the
    largest gain, if that gain beats staying put by more than
    ``MOVE_THRESHOLD``; equal gains go to the lowest cluster id. When a sweep
    moves nothing, every cluster is split into sub-clusters by local moving
    inside it, the sub-clusters become super-nodes that start out in their
    parent cluster, and moving resumes on the smaller graph. Splitting lets
    whole groups change cluster later without ever lowering the quality.
    Once no level can be reduced further the flat partition is fed back to
    the original nodes. When a pass brings no gain, a Kernighan-Lin style
    vertex-moving pass (which may step through worse partitions, keeping the
    best one seen) tries to escape the local optimum; the run ends when that
    fails too.
    """
    mode = Mode(mode)
    net = network.induced(include)
    ids = net.actor_ids()
    index = {a: i for i, a in enumerate(ids)}
    edges = undirected_ties(net, mode)
    m = math.fsum(edges.values())
    if m == 0:
        raise EmptyGraph("community detection needs at least one tie")

    base = _Level(len(ids))
    for (a, b), w in edges.items():
        base.add(index[a], index[b], w)
    mover = _Mover(ids, m, resolution, seed)
    identity = list(range(len(ids)))
    mover.start(base, identity)

    graph = base
    membership = identity  # original node -> current-level node
    comm = list(identity)  # current-level node -> cluster
    level = 0
    pass_start = mover.quality
    while True:
        mover.sweep_until_stable(graph, comm, membership, level)
        labels = _dense(comm)
        sub = mover.split(graph, labels)
        if max(sub) + 1 < len(graph.nbrs):
            parent = [0] * (max(sub) + 1)
            for i, s_ in enumerate(sub):
                parent[s_] = labels[i]
            graph = _aggregate(graph, sub)
            membership = [sub[membership[o]] for o in range(len(ids))]
            comm = parent
            level += 1
            continue
        flat = [labels[membership[o]] for o in range(len(ids))]
        level += 1
        if graph is base or mover.quality <= pass_start + MOVE_THRESHOLD:
            # smart local moving is stuck; allow a sequence of losing moves
            if not mover.vertex_moves(base, flat, level):
                break
            level += 1
        # another pass over the original nodes, starting from the flat partition
        pass_start = mover.quality
        graph, membership, comm = base, identity, flat

    clusters = dict(zip(ids, _dense(flat)))
    q = modularity(net, clusters, mode, resolution)
    return Partition(
        clusters=clusters,
        count=len(set(clusters.values())),
        modularity=q,
        resolution=resolution,
        mode=mode,
        history=tuple(mover.history),
    )


def singleton_partition(network: PatronageNetwork) -> dict[str, int]:
    return {a: i for i, a in enumerate(network.actor_ids())}
