"""Seeded generator of synthetic episcopal networks with ground-truth career logs.

Each generation has a service phase and, except after the last one, a
succession phase:

* service: every Ordinary takes on new priests, names some of his priests to
  senior posts, keeps any sitting auxiliaries, and appoints new auxiliaries
  (metropolitan sees get more of them);
* succession: every see is refilled. With ``promotion_probability`` the new
  Ordinary comes from inside the network: an auxiliary of the province
  (a priest if it has none), of another province with
  ``cross_province_probability``, the auxiliaries of the principal see
  (which trains bishops for the whole country), or for a metropolitan see
  also any sitting suffragan bishop in the country. Auxiliaries are
  preferred over priests. Otherwise he is an outsider with no prior ties.
  Each see falls vacant with ``vacancy_probability``; a coadjutor always
  succeeds. Auxiliaries retire at the same rate, though never in the
  generation they were appointed.

Only people who end up as bishops are emitted; priests who are never
promoted drop out along with their log entries. Actors who retired
``DECEASED_AFTER`` or more generations before the end are flagged deceased.
Every number here is synthetic.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParams
from .model import Actor, NetworkBuilder, PatronageNetwork, Rank, Status

ROLE_WEIGHTS = {"priest": 1, "senior": 2, "auxiliary": 3, "coadjutor": 3}

METRO_AUX_SCALE = 6.0
SUFFRAGAN_AUX_SCALE = 0.1
COADJUTOR_PROBABILITY = 0.05
AUXILIARY_PREFERENCE = 0.8
DECEASED_AFTER = 4  # generations between retirement and being flagged deceased


@dataclass(frozen=True)
class GeneratorParams:
    dioceses: int = 27
    metropolitan_fraction: float = 0.2
    mean_auxiliaries: float = 0.15
    mean_senior: float = 0.6
    mean_priests: float = 1.0
    promotion_probability: float = 0.95
    cross_province_probability: float = 0.2
    vacancy_probability: float = 0.4
    generations: int = 8
    seed: int = 0

    def __post_init__(self) -> None:
        for name in (
            "metropolitan_fraction",
            "promotion_probability",
            "cross_province_probability",
            "vacancy_probability",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidParams(f"{name} must be in [0, 1], got {value}")
        for name in ("mean_auxiliaries", "mean_senior", "mean_priests"):
            if getattr(self, name) < 0:
                raise InvalidParams(f"{name} must be non-negative")
        if self.dioceses < 1:
            raise InvalidParams("dioceses must be at least 1")
        if self.generations < 0:
            raise InvalidParams("generations must be non-negative")


PRESETS = {
    "cbcew": GeneratorParams(),
    "usccb": GeneratorParams(dioceses=178, metropolitan_fraction=0.18),
}


def preset(name: str, seed: int = 0) -> GeneratorParams:
    try:
        return replace(PRESETS[name], seed=seed)
    except KeyError:
        raise InvalidParams(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class CareerEntry:
    role: str  # priest, senior, auxiliary, coadjutor, ordinary
    under: str | None  # the Ordinary served under; None for an Ordinary's own appointment
    generation: int
    diocese: str


CareerLog = dict[str, list[CareerEntry]]

_ONSETS = ["al", "bar", "cor", "dal", "fen", "gar", "hal", "kel", "lor", "mar",
           "nor", "or", "pen", "rad", "sel", "tor", "ver", "wen"]
_CODAS = ["den", "ford", "ham", "ley", "lin", "more", "ny", "ridge", "ton", "wick", "well", "by"]
_SEES = ["Aldmoor", "Brackwell", "Caddon", "Dunmere", "Eastholt", "Farrow", "Glenby",
         "Harlow", "Ivers", "Kestle", "Lanford", "Merrow", "Northam", "Oxley", "Penhall",
         "Quarry", "Redlake", "Saltmarsh", "Thornby", "Ulverly", "Wexham", "Yarrow"]


@dataclass
class _Person:
    id: str
    name: str
    diocese: int
    bishop: bool = False
    role: str = "priest"  # priest, auxiliary, coadjutor, ordinary, emeritus, aux_emeritus
    appointed: int = 0
    retired_at: int | None = None
    metro_ordinary_of: int | None = None  # see held when last an Ordinary


@dataclass
class _State:
    rng: np.random.Generator
    params: GeneratorParams
    sees: list[str]
    province: list[int]
    metro: list[bool]
    people: dict[str, _Person] = field(default_factory=dict)
    log: CareerLog = field(default_factory=lambda: defaultdict(list))
    ordinary: list[str] = field(default_factory=list)
    priests: dict[int, list[str]] = field(default_factory=lambda: defaultdict(list))
    auxiliaries: dict[int, list[str]] = field(default_factory=lambda: defaultdict(list))
    used: set[str] = field(default_factory=set)

    def new_person(self, diocese: int) -> _Person:
        base = _ONSETS[self.rng.integers(len(_ONSETS))] + _CODAS[self.rng.integers(len(_CODAS))]
        slug, k = base, 2
        while slug in self.used:
            slug, k = f"{base}-{k}", k + 1
        self.used.add(slug)
        p = _Person(slug, base.capitalize(), diocese)
        self.people[slug] = p
        return p

    def record(self, pid: str, role: str, under: str | None, generation: int, diocese: int) -> None:
        self.log[pid].append(CareerEntry(role, under, generation, self.sees[diocese]))


def _diocese_names(n: int) -> list[str]:
    names = []
    for i in range(n):
        base = _SEES[i % len(_SEES)]
        names.append(base if i < len(_SEES) else f"{base} {i // len(_SEES) + 1}")
    return names


def _service(st: _State, g: int) -> None:
    p = st.params
    aux_norm = (
        sum(METRO_AUX_SCALE if m else SUFFRAGAN_AUX_SCALE for m in st.metro) / len(st.metro)
    )
    for d in range(len(st.sees)):
        o = st.ordinary[d]
        for _ in range(int(st.rng.poisson(p.mean_priests))):
            st.priests[d].append(st.new_person(d).id)
        for pid in st.priests[d]:
            st.record(pid, "priest", o, g, d)
        pool = st.priests[d]
        n_senior = min(len(pool), int(st.rng.poisson(p.mean_senior)))
        for i in sorted(st.rng.choice(len(pool), size=n_senior, replace=False)) if n_senior else ():
            st.record(pool[i], "senior", o, g, d)
        for aid in st.auxiliaries[d]:
            st.record(aid, st.people[aid].role, o, g, d)
        scale = (METRO_AUX_SCALE if st.metro[d] else SUFFRAGAN_AUX_SCALE) / aux_norm
        for _ in range(int(st.rng.poisson(p.mean_auxiliaries * scale))):
            if pool and st.rng.random() < p.promotion_probability:
                pid = pool.pop(int(st.rng.integers(len(pool))))
            else:
                pid = st.new_person(d).id
                st.record(pid, "priest", o, g, d)
            person = st.people[pid]
            has_coadjutor = any(st.people[a].role == "coadjutor" for a in st.auxiliaries[d])
            coadjutor = not has_coadjutor and st.rng.random() < COADJUTOR_PROBABILITY
            person.bishop = True
            person.role = "coadjutor" if coadjutor else "auxiliary"
            person.appointed = g
            person.diocese = d
            st.auxiliaries[d].append(pid)
            st.record(pid, person.role, o, g, d)


def _retire(st: _State, pid: str, g: int) -> None:
    person = st.people[pid]
    person.role = "emeritus" if person.role == "ordinary" else "aux_emeritus"
    person.retired_at = g


def _install(st: _State, pid: str, d: int, g: int) -> None:
    person = st.people[pid]
    for pool in (st.priests[person.diocese], st.auxiliaries[person.diocese]):
        if pid in pool:
            pool.remove(pid)
    person.bishop = True
    person.role = "ordinary"
    person.diocese = d
    person.appointed = g
    person.metro_ordinary_of = d
    st.ordinary[d] = pid
    st.record(pid, "ordinary", None, g, d)


def _succession(st: _State, g: int) -> None:
    p = st.params
    n = len(st.sees)
    # an auxiliary retires at the same rate a see falls vacant, never in his first generation
    for d in range(n):
        for aid in list(st.auxiliaries[d]):
            person = st.people[aid]
            if (
                person.role == "auxiliary"
                and person.appointed < g
                and st.rng.random() < p.vacancy_probability
            ):
                st.auxiliaries[d].remove(aid)
                _retire(st, aid, g)
    translated: set[int] = set()
    order = [d for d in range(n) if st.metro[d]] + [d for d in range(n) if not st.metro[d]]
    for d in order:
        if d not in translated and st.rng.random() >= p.vacancy_probability:
            continue
        outgoing = st.ordinary[d]
        if d not in translated:
            _retire(st, outgoing, g)
        coadjutors = [a for a in st.auxiliaries[d] if st.people[a].role == "coadjutor"]
        if coadjutors:
            _install(st, coadjutors[0], d, g + 1)
            continue
        successor = None
        if st.rng.random() < p.promotion_probability:
            prov = st.province[d]
            if st.rng.random() < p.cross_province_probability and max(st.province) > 0:
                others = sorted(set(st.province) - {prov})
                prov = others[int(st.rng.integers(len(others)))]
            members = [e for e in range(n) if st.province[e] == prov]
            # auxiliaries of the province first, else the see's own clergy
            candidates = [a for e in members for a in st.auxiliaries[e]]
            if d != 0:
                # the principal see trains auxiliaries for the whole country
                candidates += [a for a in st.auxiliaries[0] if a not in candidates]
            if not candidates or st.rng.random() >= AUXILIARY_PREFERENCE:
                candidates = list(st.priests[d]) if prov == st.province[d] else []
            if not candidates:
                candidates = [q for e in members for q in st.priests[e]]
            if st.metro[d]:
                # archbishops are usually translated from a suffragan see anywhere in the country
                candidates += [
                    st.ordinary[e]
                    for e in range(n)
                    if not st.metro[e] and e not in translated
                ]
            if candidates:
                successor = candidates[int(st.rng.integers(len(candidates)))]
        if successor is None:
            successor = st.new_person(d).id
        elif st.people[successor].role == "ordinary":
            translated.add(st.people[successor].diocese)
        _install(st, successor, d, g + 1)


def _rank(person: _Person, metro: list[bool]) -> tuple[Rank, Status]:
    see = person.metro_ordinary_of
    cardinal = see == 0 and metro[0]
    if person.role == "ordinary":
        if see is not None and metro[see]:
            return (Rank.CARDINAL_ARCHBISHOP if cardinal else Rank.ARCHBISHOP), Status.ACTIVE
        return Rank.BISHOP, Status.ACTIVE
    if person.role == "emeritus":
        if see is not None and metro[see]:
            return (
                Rank.CARDINAL_ARCHBISHOP_EMERITUS if cardinal else Rank.ARCHBISHOP_EMERITUS
            ), Status.RETIRED
        return Rank.BISHOP_EMERITUS, Status.RETIRED
    if person.role == "coadjutor":
        return Rank.COADJUTOR, Status.ACTIVE
    if person.role == "auxiliary":
        return Rank.AUXILIARY, Status.ACTIVE
    return Rank.AUXILIARY_EMERITUS, Status.RETIRED


def generate(params: GeneratorParams) -> tuple[PatronageNetwork, CareerLog]:
    """Simulate ``params.generations`` generations; deterministic for a given seed."""
    rng = np.random.default_rng(params.seed)
    n = params.dioceses
    n_metro = max(1, round(params.metropolitan_fraction * n))
    st = _State(
        rng=rng,
        params=params,
        sees=_diocese_names(n),
        province=[d % n_metro for d in range(n)],
        metro=[d < n_metro for d in range(n)],
    )
    st.ordinary = [""] * n
    for d in range(n):
        _install(st, st.new_person(d).id, d, 0)
    for g in range(1, params.generations + 1):
        _service(st, g)
        if g < params.generations:
            _succession(st, g)

    emitted = [pid for pid, person in st.people.items() if person.bishop]
    keep = set(emitted)
    builder = NetworkBuilder(
        {"generator": "patronet.synth", "seed": str(params.seed), "generations": str(params.generations)}
    )
    for pid in emitted:
        person = st.people[pid]
        rank, status = _rank(person, st.metro)
        retired_at = person.retired_at
        deceased = retired_at is not None and retired_at <= params.generations - DECEASED_AFTER
        builder.add_actor(
            Actor(
                id=pid,
                display_name=person.name,
                rank=rank,
                status=status,
                diocese=st.sees[person.diocese],
                deceased=deceased,
            )
        )
    log: CareerLog = {pid: list(st.log[pid]) for pid in emitted}
    for pid in emitted:
        for entry in log[pid]:
            if entry.under is not None and entry.under in keep:
                builder.add_tie(pid, entry.under, ROLE_WEIGHTS[entry.role])
    return builder.seal(), log


def network_from_log(network: PatronageNetwork, log: CareerLog) -> PatronageNetwork:
    """Rebuild ties from a career log on top of ``network``'s actors."""
    builder = NetworkBuilder(network.metadata)
    for actor in network.actors():
        builder.add_actor(actor)
    for pid, entries in log.items():
        for entry in entries:
            if entry.under is not None and entry.under in builder:
                builder.add_tie(pid, entry.under, ROLE_WEIGHTS[entry.role])
    return builder.seal()
