"""Ego networks and shared-subordinate queries."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

from .errors import SameActor
from .model import Direction, PatronageNetwork, Tie
from .structure import bfs_distances


@dataclass(frozen=True)
class EgoNetwork:
    ego: str
    radius: int
    members: frozenset[str]
    ties: tuple[Tie, ...]
    hops: Mapping[str, int]

    @property
    def size_with_ego(self) -> int:
        return len(self.members)

    @property
    def size_without_ego(self) -> int:
        return len(self.members) - 1

    def as_network(self, network: PatronageNetwork) -> PatronageNetwork:
        return network.induced(self.members).with_metadata(ego=self.ego, radius=str(self.radius))


def ego_network(network: PatronageNetwork, ego: str, radius: int = 2) -> EgoNetwork:
    """Everyone within ``radius`` hops of ``ego`` ignoring tie direction, plus all ties among them.

    Reachability is undirected, so a path may mix "served under" and "was
    served by" steps; ties between alters are kept.
    """
    if radius < 1:
        raise ValueError("radius must be at least 1")
    network.actor(ego)
    adj = network.undirected_adjacency()
    dist = bfs_distances(adj, ego)
    hops = {a: d for a, d in dist.items() if d <= radius}
    members = frozenset(hops)
    ties = tuple(
        sorted(t for t in network.ties() if t.source in members and t.target in members)
    )
    return EgoNetwork(ego, radius, members, ties, dict(sorted(hops.items(), key=lambda kv: (kv[1], kv[0]))))


def shared_subordinates(network: PatronageNetwork, a: str, b: str) -> set[str]:
    """Actors who served under both ``a`` and ``b``, at any level."""
    if a == b:
        raise SameActor(f"shared_subordinates needs two distinct actors, got {a!r} twice")
    return network.neighbors(a, Direction.IN) & network.neighbors(b, Direction.IN)
