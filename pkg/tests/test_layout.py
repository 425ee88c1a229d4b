from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import build, random_connected

from patronet.errors import DisconnectedInput, InvalidParams, MissingCoordinates
from patronet.layout import (
    LayoutParams,
    farthest_point_order,
    hop_matrix,
    layout_multiscale,
    layout_network,
    random_layout,
    stress,
)
from patronet.synth import generate, preset

# cbcew preset seed whose living actors number exactly 58
FIFTY_EIGHT_SEED = 97


def path(n: int):
    return build([(f"p{i:02d}", f"p{i + 1:02d}") for i in range(n - 1)])


def fifty_eight():
    net, _ = generate(preset("cbcew", FIFTY_EIGHT_SEED))
    living = net.induced("living")
    assert living.n_actors == 58
    return living


def test_single_node():
    res = layout_multiscale(build([], actors=["solo"]))
    assert res.coordinates == {"solo": (0.0, 0.0)}
    assert res.final_stress == 0.0


def test_single_edge_unit_length():
    res = layout_multiscale(build([("a", "b")]), LayoutParams(seed=4))
    (x1, y1), (x2, y2) = res.coordinates["a"], res.coordinates["b"]
    assert math.hypot(x2 - x1, y2 - y1) == pytest.approx(1.0, rel=0.05)
    assert res.final_stress == pytest.approx(0.0, abs=1e-9)


def test_stress_hand_values():
    edge = build([("a", "b")])
    assert stress(edge, {"a": (0, 0), "b": (1, 0)}) == 0.0
    assert stress(edge, {"a": (0, 0), "b": (2, 0)}) == 1.0
    # path a-b-c laid flat at unit spacing is exact; pair (a, c) has d=2
    p3 = build([("a", "b"), ("b", "c")])
    assert stress(p3, {"a": (0, 0), "b": (1, 0), "c": (2, 0)}) == 0.0
    assert stress(p3, {"a": (0, 0), "b": (1, 0), "c": (1, 0)}) == pytest.approx(1 + 0.25)


def test_stress_respects_radius_and_components():
    p4 = path(4)
    flat = {a: (0.0, 0.0) for a in p4.actor_ids()}
    # radius 1 counts the three ties only
    assert stress(p4, flat, local_radius=1) == 3.0
    assert stress(p4, flat, local_radius=7) == 3.0 + 2 * 1.0 + 1.0
    apart = build([("a", "b")], actors=["z"])
    assert stress(apart, {"a": (0, 0), "b": (1, 0), "z": (0, 0)}) == 0.0


def test_missing_coordinates():
    with pytest.raises(MissingCoordinates):
        stress(build([("a", "b")]), {"a": (0, 0)})


def test_disconnected_input_rejected():
    with pytest.raises(DisconnectedInput):
        layout_multiscale(build([("a", "b")], actors=["z"]))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"local_radius": 0},
        {"coarsening_ratio": 1.0},
        {"min_coarse_size": 0},
        {"iterations_per_level": 0},
        {"jitter": -1.0},
    ],
)
def test_invalid_params(kwargs):
    with pytest.raises(InvalidParams):
        LayoutParams(**kwargs)


def test_farthest_point_prefixes_spread_out():
    net = path(9)
    D = hop_matrix(net, net.actor_ids())
    order = farthest_point_order(D, 0)
    assert order[:3] == [0, 8, 4]
    assert sorted(order) == list(range(9))


@pytest.mark.parametrize("seed", range(20))
def test_path_beats_random_placement(seed):
    net = path(10)
    res = layout_multiscale(net, LayoutParams(seed=seed))
    baseline = stress(net, random_layout(net, seed))
    assert res.final_stress <= baseline
    assert res.final_stress == pytest.approx(stress(net, res.coordinates), rel=1e-12)


def test_levels_are_monotone_and_coarsen():
    net = random_connected(random.Random(3), 60, 0.02)
    res = layout_multiscale(net, LayoutParams(seed=1))
    sizes = [lv.size for lv in res.levels]
    assert sizes == sorted(sizes) and sizes[-1] == 60 and sizes[0] <= 10
    for lv in res.levels:
        assert lv.stress_after <= lv.stress_before
        assert lv.iterations <= 4 * lv.size


def test_bit_identical_for_seed():
    net = fifty_eight()
    one = layout_network(net, LayoutParams(seed=12))
    two = layout_network(net, LayoutParams(seed=12))
    assert one.coordinates == two.coordinates
    assert one.final_stress == two.final_stress
    assert one.coordinates != layout_network(net, LayoutParams(seed=13)).coordinates


def test_generated_network_beats_random_placement():
    net = fifty_eight()
    for seed in range(20):
        res = layout_network(net, LayoutParams(seed=seed))
        assert set(res.coordinates) == set(net.actor_ids())
        assert all(np.isfinite(c).all() for c in res.coordinates.values())
        for lv in res.levels:
            assert lv.stress_after <= lv.stress_before
        assert res.final_stress <= stress(net, random_layout(net, seed))


def test_components_do_not_overlap():
    net = build([("a", "b"), ("b", "c"), ("x", "y")], actors=["q"])
    res = layout_network(net)
    boxes = []
    for comp in (["a", "b", "c"], ["x", "y"], ["q"]):
        xs = [res.coordinates[a][0] for a in comp]
        ys = [res.coordinates[a][1] for a in comp]
        boxes.append((min(xs), max(xs), min(ys), max(ys)))
    for i, one in enumerate(boxes):
        for two in boxes[i + 1 :]:
            apart_x = one[1] < two[0] or two[1] < one[0]
            apart_y = one[3] < two[2] or two[3] < one[2]
            assert apart_x or apart_y


@settings(max_examples=40, deadline=None)
@given(
    st.integers(0, 10**6),
    st.integers(2, 15),
    st.floats(0, 2 * math.pi),
    st.tuples(st.floats(-50, 50), st.floats(-50, 50)),
)
def test_stress_rigid_motion_invariance(seed, n, angle, shift):
    rng = random.Random(seed)
    net = random_connected(rng, n, 0.1)
    coords = random_layout(net, seed)
    c, s = math.cos(angle), math.sin(angle)
    moved = {
        a: (c * x - s * y + shift[0], s * x + c * y + shift[1]) for a, (x, y) in coords.items()
    }
    assert stress(net, moved) == pytest.approx(stress(net, coords), abs=1e-9, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12))
def test_stress_label_permutation_invariance(seed, n):
    rng = random.Random(seed)
    net = random_connected(rng, n, 0.15)
    coords = random_layout(net, seed)
    names = [f"w{i}" for i in range(n)]
    rng.shuffle(names)
    rename = dict(zip(net.actor_ids(), names))
    other = build(
        [(rename[t.source], rename[t.target]) for t in net.ties()],
        actors=sorted(names),
    )
    moved = {rename[a]: xy for a, xy in coords.items()}
    assert stress(other, moved) == pytest.approx(stress(net, coords), rel=1e-12, abs=1e-12)
