"""Core numbers by bucket peeling on the undirected, unweighted view.

Degree here is the number of distinct neighbours in either direction, so a
reciprocated pair counts once.
"""

from __future__ import annotations

from .model import Include, PatronageNetwork


def core_numbers(network: PatronageNetwork, include: Include = None) -> dict[str, int]:
    """Map every included actor to the largest k whose k-core contains it.

    Bucket-queue peeling (Batagelj and Zaversnik), O(n + m). Nodes are
    peeled in insertion order within a bucket so the run is deterministic.
    """
    net = network.induced(include)
    adj = net.undirected_adjacency()
    degree = {v: len(ns) for v, ns in adj.items()}
    if not degree:
        return {}
    buckets: list[dict[str, None]] = [dict() for _ in range(max(degree.values()) + 1)]
    for v in net.actor_ids():
        buckets[degree[v]][v] = None
    core: dict[str, int] = {}
    k = 0
    while len(core) < len(degree):
        while not buckets[k]:
            k += 1
        v = next(iter(buckets[k]))
        del buckets[k][v]
        core[v] = k
        for u in adj[v]:
            if u in core:
                continue
            du = degree[u]
            if du > k:
                del buckets[du][u]
                degree[u] = du - 1
                buckets[du - 1][u] = None
    return {v: core[v] for v in net.actor_ids()}


def kcore_subgraph(network: PatronageNetwork, k: int = 3, include: Include = None) -> PatronageNetwork:
    """The maximal induced subnetwork where every member has at least ``k`` neighbours."""
    if k < 1:
        raise ValueError("k must be at least 1")
    net = network.induced(include)
    cores = core_numbers(net)
    return net.induced([v for v, c in cores.items() if c >= k])


def core_sizes(cores: dict[str, int]) -> dict[int, int]:
    """Size of the k-core for each k from 1 to the degeneracy."""
    if not cores:
        return {}
    top = max(cores.values())
    return {k: sum(1 for c in cores.values() if c >= k) for k in range(1, top + 1)}
