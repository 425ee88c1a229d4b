from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_core_numbers, build, random_network

from patronet.kcore import core_numbers, core_sizes, kcore_subgraph
from patronet.model import Direction


def test_triangle(triangle):
    assert core_numbers(triangle) == {"a": 2, "b": 2, "c": 2}
    assert kcore_subgraph(triangle, 3).n_actors == 0


def test_star():
    star = build([(leaf, "c") for leaf in "pqrst"])
    assert set(core_numbers(star).values()) == {1}


def test_four_clique():
    k4 = build([(s, t) for s in "abcd" for t in "abcd" if s < t])
    core = kcore_subgraph(k4, 3)
    assert sorted(core.actor_ids()) == list("abcd")
    assert core.n_ties == 6


def test_triangle_plus_pendant():
    net = build([("a", "b"), ("b", "c"), ("c", "a"), ("p", "a")])
    core = kcore_subgraph(net, 2)
    assert sorted(core.actor_ids()) == ["a", "b", "c"]
    assert core_numbers(net)["p"] == 1


def test_reciprocated_pair_counts_once():
    net = build([("a", "b"), ("b", "a")])
    assert core_numbers(net) == {"a": 1, "b": 1}


def test_isolates_have_core_zero():
    assert core_numbers(build([], actors=["z"])) == {"z": 0}


def test_k_must_be_positive(triangle):
    with pytest.raises(ValueError):
        kcore_subgraph(triangle, 0)


def test_core_sizes():
    assert core_sizes({"a": 2, "b": 2, "c": 1, "d": 0}) == {1: 3, 2: 2}


def test_include_filter():
    k4 = build([(s, t) for s in "abcd" for t in "abcd" if s < t])
    assert set(core_numbers(k4, include=["a", "b", "c"]).values()) == {2}


nets = st.builds(
    lambda seed, n, p: random_network(random.Random(seed), n, p, attributes=False),
    st.integers(0, 10**6),
    st.integers(0, 20),
    st.floats(0.0, 0.5),
)


@settings(max_examples=80, deadline=None)
@given(nets)
def test_matches_brute_force(net):
    assert core_numbers(net) == brute_core_numbers(net)


@settings(max_examples=60, deadline=None)
@given(nets)
def test_nesting_and_min_degree(net):
    cores = core_numbers(net)
    top = max(cores.values(), default=0)
    previous = set(net.actor_ids())
    for k in range(1, top + 2):
        sub = kcore_subgraph(net, k)
        members = set(sub.actor_ids())
        assert members <= previous
        assert members == {a for a, c in cores.items() if c >= k}
        for v in members:
            assert len(sub.neighbors(v, Direction.BOTH)) >= k
        previous = members
    for v, c in cores.items():
        assert c <= len(net.neighbors(v, Direction.BOTH))


@settings(max_examples=40, deadline=None)
@given(
    st.builds(
        lambda seed, n, p: random_network(random.Random(seed), n, p, attributes=False),
        st.integers(0, 10**6),
        st.integers(1, 15),
        st.floats(0.05, 0.5),
    ),
    st.integers(1, 4),
)
def test_maximality(net, k):
    members = set(kcore_subgraph(net, k).actor_ids())
    adj = net.undirected_adjacency()
    for v in set(net.actor_ids()) - members:
        bigger = members | {v}
        assert any(len(adj[u] & bigger) < k for u in bigger)
