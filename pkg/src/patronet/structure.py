"""Weak components and hop-distance statistics on the undirected view."""

from __future__ import annotations

from collections import deque
from collections.abc import Collection, Mapping
from dataclasses import dataclass

from .errors import Disconnected, UnknownActor
from .model import Include, PatronageNetwork


@dataclass(frozen=True)
class ComponentReport:
    components: list[frozenset[str]]  # largest first, ties broken by smallest member id
    tie_counts: list[int]
    isolates: frozenset[str]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]


@dataclass(frozen=True)
class GeodesicStats:
    diameter: int
    mean_distance: float  # over unordered distinct pairs


def bfs_distances(adjacency: Mapping[str, Collection[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        d = dist[u] + 1
        for v in adjacency[u]:
            if v not in dist:
                dist[v] = d
                queue.append(v)
    return dist


def weak_components(network: PatronageNetwork, include: Include = None) -> ComponentReport:
    net = network.induced(include)
    adj = net.undirected_adjacency()
    seen: set[str] = set()
    comps: list[frozenset[str]] = []
    for a in net.actor_ids():
        if a in seen:
            continue
        comp = frozenset(bfs_distances(adj, a))
        seen |= comp
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(c)))
    where = {a: i for i, c in enumerate(comps) for a in c}
    tie_counts = [0] * len(comps)
    for t in net.ties():
        tie_counts[where[t.source]] += 1
    isolates = frozenset(a for c in comps if len(c) == 1 for a in c)
    return ComponentReport(comps, tie_counts, isolates)


def geodesic_stats(network: PatronageNetwork, component: Collection[str]) -> GeodesicStats:
    """Diameter and mean hop distance of a connected node set, ignoring direction and weight.

    Distances are measured inside the subgraph induced by ``component``.
    """
    nodes = list(dict.fromkeys(component))
    for a in nodes:
        if a not in network:
            raise UnknownActor(f"unknown actor {a!r}")
    keep = set(nodes)
    adj = {a: network.neighbors(a) & keep for a in nodes}
    n = len(nodes)
    if n <= 1:
        return GeodesicStats(0, 0.0)
    diameter = 0
    total = 0
    for a in nodes:
        dist = bfs_distances(adj, a)
        if len(dist) != n:
            raise Disconnected(f"node set is not connected (from {a!r} reached {len(dist)} of {n})")
        total += sum(dist.values())
        diameter = max(diameter, max(dist.values()))
    # every unordered pair was counted from both ends
    return GeodesicStats(diameter, total / (n * (n - 1)))
