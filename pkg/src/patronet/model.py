"""Directed, weighted patronage networks.

A tie ``A -> B`` means "A served under B" (B was A's Ordinary). Ties carry a
weight level:

* 1 -- served as a priest under the Ordinary,
* 2 -- held a high-trust senior post under him,
* 3 -- served as his auxiliary or coadjutor bishop.

When the same pair is recorded more than once, the highest level wins.

Networks are assembled with :class:`NetworkBuilder` and frozen by
:meth:`NetworkBuilder.seal`; every analysis function takes the sealed
:class:`PatronageNetwork`.
"""

from __future__ import annotations

import re
from collections.abc import Callable, Collection, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Union

from .errors import (
    DuplicateActor,
    InvalidWeight,
    InvariantViolation,
    SealedNetwork,
    SelfLoop,
    UnknownActor,
)

WEIGHTS = (1, 2, 3)
COADJUTOR_LEGACY_LEVEL = 4
MIN_ORDINATION_AGE = 25


class Rank(str, Enum):
    CARDINAL_ARCHBISHOP = "CardinalArchbishop"
    CARDINAL_ARCHBISHOP_EMERITUS = "CardinalArchbishopEmeritus"
    ARCHBISHOP = "Archbishop"
    ARCHBISHOP_EMERITUS = "ArchbishopEmeritus"
    BISHOP = "Bishop"
    BISHOP_EMERITUS = "BishopEmeritus"
    AUXILIARY = "Auxiliary"
    AUXILIARY_EMERITUS = "AuxiliaryEmeritus"
    COADJUTOR = "Coadjutor"
    OTHER = "Other"

    @property
    def label(self) -> str:
        return _RANK_LABELS[self]

    @classmethod
    def parse(cls, text: str) -> Rank:
        """Accept either the enum value or the long label, ignoring case and punctuation."""
        key = _norm(text)
        try:
            return _RANK_LOOKUP[key]
        except KeyError:
            raise ValueError(f"unknown rank {text!r}") from None


_RANK_LABELS = {
    Rank.CARDINAL_ARCHBISHOP: "Cardinal-Archbishop",
    Rank.CARDINAL_ARCHBISHOP_EMERITUS: "Cardinal-Archbishop Emeritus",
    Rank.ARCHBISHOP: "Archbishop",
    Rank.ARCHBISHOP_EMERITUS: "Archbishop Emeritus",
    Rank.BISHOP: "Bishop",
    Rank.BISHOP_EMERITUS: "Bishop Emeritus",
    Rank.AUXILIARY: "Auxiliary Bishop",
    Rank.AUXILIARY_EMERITUS: "Auxiliary Bishop Emeritus",
    Rank.COADJUTOR: "Coadjutor Bishop",
    Rank.OTHER: "Other",
}


def _norm(text: str) -> str:
    return re.sub(r"[^a-z]", "", text.lower())


_RANK_LOOKUP = {}
for _r in Rank:
    _RANK_LOOKUP[_norm(_r.value)] = _r
    _RANK_LOOKUP[_norm(_r.label)] = _r


class Status(str, Enum):
    ACTIVE = "Active"
    RETIRED = "Retired"

    @classmethod
    def parse(cls, text: str) -> Status:
        key = text.strip().lower()
        for s in cls:
            if s.value.lower() == key:
                return s
        raise ValueError(f"unknown status {text!r}")


class Direction(str, Enum):
    IN = "in"
    OUT = "out"
    BOTH = "both"


class MergeOutcome(str, Enum):
    INSERTED = "inserted"
    UPGRADED = "upgraded"
    KEPT_EXISTING = "kept_existing"


def check_weight(level: int, *, recode_coadjutor: bool = False) -> int:
    """Validate a tie level, optionally folding the legacy coadjutor code 4 into 3."""
    if isinstance(level, bool) or not isinstance(level, int):
        raise InvalidWeight(f"tie weight must be an integer, got {level!r}")
    if recode_coadjutor and level == COADJUTOR_LEGACY_LEVEL:
        return 3
    if level not in WEIGHTS:
        raise InvalidWeight(f"tie weight must be one of {WEIGHTS}, got {level}")
    return level


@dataclass(frozen=True)
class Actor:
    id: str
    display_name: str = ""
    rank: Rank = Rank.OTHER
    status: Status = Status.ACTIVE
    diocese: str | None = None
    birth_year: int | None = None
    ordination_year: int | None = None
    deceased: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id.strip():
            raise InvariantViolation(f"actor id must be a non-empty string, got {self.id!r}")
        if self.id != self.id.strip():
            raise InvariantViolation(f"actor id has surrounding whitespace: {self.id!r}")
        if not isinstance(self.rank, Rank):
            object.__setattr__(self, "rank", Rank.parse(self.rank))
        if not isinstance(self.status, Status):
            object.__setattr__(self, "status", Status.parse(self.status))
        if (
            self.birth_year is not None
            and self.ordination_year is not None
            and self.ordination_year < self.birth_year + MIN_ORDINATION_AGE
        ):
            raise InvariantViolation(
                f"actor {self.id!r}: ordination year {self.ordination_year} is earlier than "
                f"birth year {self.birth_year} + {MIN_ORDINATION_AGE}"
            )

    @property
    def name(self) -> str:
        return self.display_name or self.id

    @property
    def active(self) -> bool:
        return self.status is Status.ACTIVE and not self.deceased


@dataclass(frozen=True, order=True)
class Tie:
    """``source`` served under ``target``."""

    source: str
    target: str
    weight: int


Include = Union[None, str, Callable[[Actor], bool], Collection[str]]


class _Graph:
    """Storage and read API shared by the builder and the sealed network."""

    def __init__(self) -> None:
        self._actors: dict[str, Actor] = {}
        self._ties: dict[tuple[str, str], int] = {}
        self._in: dict[str, dict[str, int]] = {}
        self._out: dict[str, dict[str, int]] = {}

    def __len__(self) -> int:
        return len(self._actors)

    def __contains__(self, actor_id: object) -> bool:
        return actor_id in self._actors

    @property
    def n_actors(self) -> int:
        return len(self._actors)

    @property
    def n_ties(self) -> int:
        return len(self._ties)

    def actor(self, actor_id: str) -> Actor:
        try:
            return self._actors[actor_id]
        except KeyError:
            raise UnknownActor(f"unknown actor {actor_id!r}") from None

    def actor_ids(self) -> list[str]:
        """Ids in insertion order."""
        return list(self._actors)

    def actors(self) -> list[Actor]:
        return list(self._actors.values())

    def ties(self) -> list[Tie]:
        """Ties in insertion order."""
        return [Tie(s, t, w) for (s, t), w in self._ties.items()]

    def weight(self, source: str, target: str) -> int | None:
        return self._ties.get((source, target))

    def has_tie(self, source: str, target: str) -> bool:
        return (source, target) in self._ties

    def neighbors(self, actor_id: str, direction: Direction | str = Direction.BOTH) -> set[str]:
        if actor_id not in self._actors:
            raise UnknownActor(f"unknown actor {actor_id!r}")
        direction = Direction(direction)
        if direction is Direction.IN:
            return set(self._in[actor_id])
        if direction is Direction.OUT:
            return set(self._out[actor_id])
        return set(self._in[actor_id]) | set(self._out[actor_id])

    def in_ties(self, actor_id: str) -> Mapping[str, int]:
        """Subordinate id -> weight for everyone who served under ``actor_id``."""
        self.actor(actor_id)
        return MappingProxyType(self._in[actor_id])

    def out_ties(self, actor_id: str) -> Mapping[str, int]:
        self.actor(actor_id)
        return MappingProxyType(self._out[actor_id])

    def undirected_adjacency(self) -> dict[str, set[str]]:
        """Distinct neighbours ignoring direction; a reciprocated pair appears once."""
        return {a: set(self._in[a]) | set(self._out[a]) for a in self._actors}


class NetworkBuilder(_Graph):
    """Mutable, single-writer construction stage of a :class:`PatronageNetwork`."""

    def __init__(self, metadata: Mapping[str, str] | None = None) -> None:
        super().__init__()
        self.metadata: dict[str, str] = dict(metadata or {})
        self._sealed = False

    def _check_open(self) -> None:
        if self._sealed:
            raise SealedNetwork("network has already been sealed")

    def add_actor(self, actor: Actor) -> str:
        self._check_open()
        if actor.id in self._actors:
            raise DuplicateActor(f"actor {actor.id!r} already exists")
        self._actors[actor.id] = actor
        self._in[actor.id] = {}
        self._out[actor.id] = {}
        return actor.id

    def ensure_actor(self, actor_id: str) -> str:
        """Add a bare ``Rank.OTHER`` actor unless ``actor_id`` is already present."""
        if actor_id not in self._actors:
            self.add_actor(Actor(actor_id))
        return actor_id

    def add_tie(self, source: str, target: str, weight: int) -> MergeOutcome:
        """Record that ``source`` served under ``target``; keeps the highest level seen."""
        self._check_open()
        weight = check_weight(weight)
        for a in (source, target):
            if a not in self._actors:
                raise UnknownActor(f"unknown actor {a!r}")
        if source == target:
            raise SelfLoop(f"self-loop on {source!r}")
        old = self._ties.get((source, target))
        if old is None:
            outcome = MergeOutcome.INSERTED
        elif weight > old:
            outcome = MergeOutcome.UPGRADED
        else:
            return MergeOutcome.KEPT_EXISTING
        self._ties[(source, target)] = weight
        self._out[source][target] = weight
        self._in[target][source] = weight
        return outcome

    def seal(self) -> PatronageNetwork:
        self._check_open()
        net = PatronageNetwork.from_parts(self._actors.values(), self.ties(), self.metadata)
        self._sealed = True
        return net


class PatronageNetwork(_Graph):
    """Immutable network; safe to share between threads once built."""

    metadata: Mapping[str, str]

    def __init__(self) -> None:  # use from_parts or NetworkBuilder
        super().__init__()
        self.metadata = MappingProxyType({})

    @classmethod
    def from_parts(
        cls,
        actors: Iterable[Actor],
        ties: Iterable[Tie | tuple[str, str, int]],
        metadata: Mapping[str, str] | None = None,
    ) -> PatronageNetwork:
        """Build and validate a network in one step.

        Unlike :meth:`NetworkBuilder.add_tie` this does not merge duplicates:
        raw input that repeats an ordered pair, dangles an endpoint, or loops
        is rejected with :class:`InvariantViolation` naming the first offender.
        """
        net = cls()
        for actor in actors:
            if not isinstance(actor, Actor):
                raise InvariantViolation(f"not an Actor: {actor!r}")
            if actor.id in net._actors:
                raise InvariantViolation(f"duplicate actor {actor.id!r}")
            net._actors[actor.id] = actor
            net._in[actor.id] = {}
            net._out[actor.id] = {}
        for tie in ties:
            if isinstance(tie, Tie):
                s, t, w = tie.source, tie.target, tie.weight
            else:
                s, t, w = tie
            if s not in net._actors or t not in net._actors:
                missing = s if s not in net._actors else t
                raise InvariantViolation(f"tie {s!r} -> {t!r} references unknown actor {missing!r}")
            if s == t:
                raise InvariantViolation(f"self-loop on {s!r}")
            if (s, t) in net._ties:
                raise InvariantViolation(f"duplicate tie {s!r} -> {t!r}")
            try:
                w = check_weight(w)
            except InvalidWeight as exc:
                raise InvariantViolation(f"tie {s!r} -> {t!r}: {exc}") from None
            net._ties[(s, t)] = w
            net._out[s][t] = w
            net._in[t][s] = w
        net.metadata = MappingProxyType({str(k): str(v) for k, v in (metadata or {}).items()})
        return net

    def select(self, include: Include = None) -> list[str]:
        """Resolve an include filter to actor ids, in insertion order.

        ``include`` may be ``None``/``"all"``, ``"living"`` (drops deceased
        actors), ``"active"`` (living and not retired), a predicate over
        :class:`Actor`, or a collection of ids.
        """
        if include is None or include == "all":
            return list(self._actors)
        if include == "living":
            return [a.id for a in self._actors.values() if not a.deceased]
        if include == "active":
            return [a.id for a in self._actors.values() if a.active]
        if isinstance(include, str):
            raise ValueError(f"unknown include filter {include!r}")
        if callable(include):
            return [a.id for a in self._actors.values() if include(a)]
        wanted = set(include)
        unknown = wanted - self._actors.keys()
        if unknown:
            raise UnknownActor(f"unknown actor {sorted(unknown)[0]!r}")
        return [a for a in self._actors if a in wanted]

    def induced(self, include: Include) -> PatronageNetwork:
        """Subnetwork on the selected actors with every tie among them."""
        if include is None or include == "all":
            return self
        keep = set(self.select(include))
        return PatronageNetwork.from_parts(
            (self._actors[a] for a in self._actors if a in keep),
            (Tie(s, t, w) for (s, t), w in self._ties.items() if s in keep and t in keep),
            self.metadata,
        )

    def with_metadata(self, **extra: str) -> PatronageNetwork:
        return PatronageNetwork.from_parts(
            self._actors.values(), self.ties(), {**self.metadata, **extra}
        )

    def __iter__(self) -> Iterator[str]:
        return iter(self._actors)

    def __repr__(self) -> str:
        return f"PatronageNetwork(actors={self.n_actors}, ties={self.n_ties})"


def graph_equal(a: _Graph, b: _Graph, *, attributes: bool = True) -> bool:
    """Same actor ids and the same weighted ties; with ``attributes`` also equal Actor records.

    Insertion order and metadata are ignored.
    """
    if a._actors.keys() != b._actors.keys() or a._ties != b._ties:
        return False
    if attributes:
        return all(a._actors[k] == b._actors[k] for k in a._actors)
    return True
