"""Degree centrality, rankings and rank-distribution tables."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum

from .errors import EmptyTable
from .model import Include, PatronageNetwork, Rank


class DegreeKey(str, Enum):
    IN_WEIGHTED = "in_w"
    IN_UNWEIGHTED = "in_u"
    OUT_WEIGHTED = "out_w"
    OUT_UNWEIGHTED = "out_u"


@dataclass(frozen=True)
class DegreeRow:
    actor: str
    in_w: int
    in_u: int
    out_w: int
    out_u: int

    def value(self, key: DegreeKey | str) -> int:
        return getattr(self, DegreeKey(key).value)


@dataclass(frozen=True)
class DegreeSummary:
    n: int
    mean: float
    sd: float | None  # sample SD (n - 1); undefined for n == 1


@dataclass(frozen=True)
class RankShare:
    rank: Rank
    count: int
    percentage: float


def degree_table(network: PatronageNetwork, include: Include = None) -> list[DegreeRow]:
    """One row per included actor, sorted by id.

    Only ties with both endpoints included are counted.
    """
    net = network.induced(include)
    rows = []
    for a in sorted(net.actor_ids()):
        ins = net.in_ties(a)
        outs = net.out_ties(a)
        rows.append(DegreeRow(a, sum(ins.values()), len(ins), sum(outs.values()), len(outs)))
    return rows


def top_k(table: list[DegreeRow], key: DegreeKey | str = DegreeKey.IN_WEIGHTED, k: int = 10):
    """Highest values first; equal values fall back to ascending actor id."""
    if k < 1:
        raise ValueError("k must be at least 1")
    key = DegreeKey(key)
    return sorted(table, key=lambda r: (-r.value(key), r.actor))[:k]


def degree_summary(table: list[DegreeRow], key: DegreeKey | str = DegreeKey.IN_UNWEIGHTED):
    if not table:
        raise EmptyTable("degree table is empty")
    values = [r.value(key) for r in table]
    n = len(values)
    mean = math.fsum(values) / n
    sd = None
    if n >= 2:
        sd = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))
    return DegreeSummary(n, mean, sd)


def _round1(x: Decimal) -> Decimal:
    return x.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)


def rank_distribution(network: PatronageNetwork, include: Include = None) -> list[RankShare]:
    """Count and percentage (one decimal, half-up) of each rank present.

    Rows follow the enum order. Per-row rounding is kept as-is while the
    total lands within 0.1 of 100; beyond that, rows with the largest
    rounding residuals are nudged by 0.1 until it does.
    """
    net = network.induced(include)
    counts = Counter(net.actor(a).rank for a in net.actor_ids())
    n = sum(counts.values())
    if n == 0:
        return []
    present = [r for r in Rank if counts[r]]
    exact = {r: Decimal(counts[r] * 100) / Decimal(n) for r in present}
    pct = {r: _round1(exact[r]) for r in present}
    drift = sum(pct.values()) - Decimal(100)
    if abs(drift) > Decimal("0.1"):
        step = Decimal("-0.1") if drift > 0 else Decimal("0.1")
        sign = 1 if drift > 0 else -1
        # rows rounded furthest in the direction of the drift go first
        order = sorted(present, key=lambda r: ((exact[r] - pct[r]) * sign, r.value))
        for r in order:
            if abs(drift) <= Decimal("0.1"):
                break
            pct[r] += step
            drift += step
    return [RankShare(r, counts[r], float(pct[r])) for r in present]
