from __future__ import annotations

import pytest

from oracles import build

from patronet.model import Actor, NetworkBuilder, PatronageNetwork, Rank, Status


@pytest.fixture
def triangle() -> PatronageNetwork:
    return build([("a", "b"), ("b", "c"), ("c", "a")])


@pytest.fixture
def twin_triangles() -> PatronageNetwork:
    return build(
        [("a", "b"), ("b", "c"), ("c", "a"), ("x", "y"), ("y", "z"), ("z", "x")]
    )


@pytest.fixture
def active_retired_pair() -> PatronageNetwork:
    b = NetworkBuilder()
    b.add_actor(Actor("a", "Alder", Rank.BISHOP, Status.ACTIVE))
    b.add_actor(Actor("b", "Birch", Rank.BISHOP_EMERITUS, Status.RETIRED))
    b.add_tie("a", "b", 2)
    return b.seal()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from test_acceptance import ACCEPTANCE_KEY

    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: s.split("criterion", 1)[1]):
            terminalreporter.write_line(line)
