from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import build, floyd_warshall, network_from_edges, random_connected, random_network

from patronet.errors import Disconnected
from patronet.model import NetworkBuilder, PatronageNetwork
from patronet.structure import GeodesicStats, geodesic_stats, weak_components


def fifty_eight_shaped() -> PatronageNetwork:
    """58 actors: a 40-actor constellation on 49 ties, pieces of 3, 2 and 2, and 11 isolates."""
    rng = random.Random(58)
    edges = set()
    for v in range(1, 40):
        edges.add((v, rng.randrange(v)))
    while len(edges) < 49:
        s, t = rng.sample(range(40), 2)
        if (s, t) not in edges and (t, s) not in edges:
            edges.add((s, t))
    edges |= {(40, 41), (42, 41), (43, 44), (45, 46)}
    return network_from_edges(58, sorted(edges))


def test_pair_plus_isolate():
    rep = weak_components(build([("a", "b")], actors=["c"]))
    assert rep.components == [frozenset("ab"), frozenset("c")]
    assert rep.isolates == frozenset("c")
    assert rep.tie_counts == [1, 0]


def test_empty_network():
    rep = weak_components(NetworkBuilder().seal())
    assert rep.components == [] and rep.isolates == frozenset()


def test_fifty_eight_shaped_report():
    rep = weak_components(fifty_eight_shaped())
    assert rep.sizes == [40, 3, 2, 2] + [1] * 11
    assert rep.tie_counts[0] == 49
    assert len(rep.isolates) == 11
    assert sum(rep.sizes[1:4]) == 7


def test_components_sorted_by_size_then_id():
    rep = weak_components(build([("d", "e"), ("a", "b")], actors=["z", "c"]))
    assert rep.components == [frozenset("ab"), frozenset("de"), frozenset("c"), frozenset("z")]


def test_path_of_three():
    stats = geodesic_stats(build([("a", "b"), ("c", "b")]), {"a", "b", "c"})
    assert stats.diameter == 2
    assert stats.mean_distance == pytest.approx(4 / 3, abs=1e-12)


def test_single_edge_and_single_node():
    net = build([("a", "b", 3)])
    assert geodesic_stats(net, {"a", "b"}) == GeodesicStats(1, 1.0)
    assert geodesic_stats(net, {"a"}) == GeodesicStats(0, 0.0)


def test_disconnected_component_rejected():
    net = build([("a", "b")], actors=["c"])
    with pytest.raises(Disconnected):
        geodesic_stats(net, {"a", "b", "c"})


def test_distances_ignore_weights_and_direction():
    net = build([("a", "b", 3), ("c", "b", 1), ("c", "d", 2)])
    assert geodesic_stats(net, set("abcd")).diameter == 3


def _oracle_stats(net):
    _, D = floyd_warshall(net)
    iu = np.triu_indices(len(D), 1)
    return int(D[iu].max()), float(D[iu].sum()) / len(iu[0])


@pytest.mark.parametrize("seed", range(10))
def test_geodesics_match_floyd_warshall(seed):
    rng = random.Random(seed)
    net = random_connected(rng, 30, rng.choice([0.0, 0.01, 0.05]))
    stats = geodesic_stats(net, set(net.actor_ids()))
    diameter, mean = _oracle_stats(net)
    assert stats.diameter == diameter
    assert stats.mean_distance == mean
    assert stats.mean_distance <= stats.diameter


nets = st.builds(
    lambda seed, n, p: random_network(random.Random(seed), n, p, attributes=False),
    st.integers(0, 10**6),
    st.integers(0, 30),
    st.floats(0.0, 0.15),
)


@settings(max_examples=60, deadline=None)
@given(nets)
def test_components_partition_nodes(net):
    rep = weak_components(net)
    seen = [a for c in rep.components for a in c]
    assert sorted(seen) == sorted(net.actor_ids())
    assert rep.isolates == {a for c in rep.components if len(c) == 1 for a in c}
    assert sum(rep.tie_counts) == net.n_ties
    assert rep.sizes == sorted(rep.sizes, reverse=True)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 20))
def test_adding_a_tie_never_lengthens_paths(seed, n):
    rng = random.Random(seed)
    base = random_connected(rng, n, 0.05)
    s, t = rng.sample(base.actor_ids(), 2)
    b = NetworkBuilder()
    for a in base.actors():
        b.add_actor(a)
    for tie in base.ties():
        b.add_tie(tie.source, tie.target, tie.weight)
    b.add_tie(s, t, 1)
    grown = b.seal()
    _, before = floyd_warshall(base)
    _, after = floyd_warshall(grown)
    assert (after <= before).all()
    whole = set(base.actor_ids())
    assert geodesic_stats(grown, whole).mean_distance <= geodesic_stats(base, whole).mean_distance


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 15))
def test_relabeling_invariance(seed, n):
    rng = random.Random(seed)
    net = random_connected(rng, n, 0.1)
    names = [f"r{i}" for i in range(n)]
    rng.shuffle(names)
    rename = dict(zip(net.actor_ids(), names))
    other = build([(rename[t.source], rename[t.target], t.weight) for t in net.ties()])
    assert geodesic_stats(net, set(net.actor_ids())) == geodesic_stats(other, set(names))


def test_geodesics_exhaustive_small_graphs():
    # every connected simple graph on 4 labelled vertices
    pairs = list(itertools.combinations(range(4), 2))
    checked = 0
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        net = network_from_edges(4, edges)
        if len(weak_components(net).components) != 1:
            continue
        stats = geodesic_stats(net, set(net.actor_ids()))
        assert (stats.diameter, stats.mean_distance) == _oracle_stats(net)
        checked += 1
    assert checked == 38
