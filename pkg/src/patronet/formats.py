"""Readers and writers for the on-disk network formats.

CSV inputs are UTF-8 and comma separated; blank lines and lines starting
with ``#`` are skipped. Every writer is deterministic: rows are emitted in
ascending actor-id order so identical networks serialize to identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterator, Mapping
from pathlib import Path

from .errors import (
    BadCell,
    InvalidWeight,
    NonSquare,
    NonzeroDiagonal,
    ParseError,
    PatronetError,
)
from .model import Actor, NetworkBuilder, PatronageNetwork, Rank, Status, Tie, check_weight

EDGE_HEADER = ("from", "to", "weight")
ACTOR_COLUMNS = ("id", "display_name", "rank", "status", "diocese", "birth_year", "ordination_year")
OPTIONAL_ACTOR_COLUMNS = ("deceased",)


def _rows(text: str) -> Iterator[tuple[int, list[str]]]:
    """Yield (1-based line number, cells) for every data line."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        cells = next(csv.reader([raw]))
        yield lineno, [c.strip() for c in cells]


def _parse_weight(token: str, lineno: int, recode_coadjutor: bool) -> int:
    try:
        return check_weight(int(token), recode_coadjutor=recode_coadjutor)
    except ValueError:
        raise ParseError(lineno, f"invalid weight {token!r}") from None


def _optional_int(token: str, lineno: int, column: str) -> int | None:
    if token == "":
        return None
    try:
        return int(token)
    except ValueError:
        raise ParseError(lineno, f"{column} must be an integer, got {token!r}") from None


def _parse_bool(token: str, lineno: int) -> bool:
    key = token.strip().lower()
    if key in ("", "0", "false", "no", "n"):
        return False
    if key in ("1", "true", "yes", "y"):
        return True
    raise ParseError(lineno, f"invalid boolean {token!r}")


# -- actor table --------------------------------------------------------------


def parse_actor_table(text: str) -> list[Actor]:
    rows = _rows(text)
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise ParseError(None, "actor table is empty; a header row is required") from None
    header = [h.lower() for h in header]
    if "id" not in header:
        raise ParseError(lineno, "actor table header must contain an 'id' column")
    unknown = [h for h in header if h not in ACTOR_COLUMNS + OPTIONAL_ACTOR_COLUMNS]
    if unknown:
        raise ParseError(lineno, f"unknown actor table column {unknown[0]!r}")
    actors: list[Actor] = []
    seen: set[str] = set()
    for lineno, cells in rows:
        if len(cells) != len(header):
            raise ParseError(lineno, f"expected {len(header)} fields, found {len(cells)}")
        rec = dict(zip(header, cells))
        if rec["id"] in seen:
            raise ParseError(lineno, f"duplicate actor {rec['id']!r}")
        seen.add(rec["id"])
        try:
            rank = Rank.parse(rec["rank"]) if rec.get("rank") else Rank.OTHER
            status = Status.parse(rec["status"]) if rec.get("status") else Status.ACTIVE
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        try:
            actors.append(
                Actor(
                    id=rec["id"],
                    display_name=rec.get("display_name", ""),
                    rank=rank,
                    status=status,
                    diocese=rec.get("diocese") or None,
                    birth_year=_optional_int(rec.get("birth_year", ""), lineno, "birth_year"),
                    ordination_year=_optional_int(
                        rec.get("ordination_year", ""), lineno, "ordination_year"
                    ),
                    deceased=_parse_bool(rec.get("deceased", ""), lineno),
                )
            )
        except PatronetError as exc:
            raise ParseError(lineno, str(exc)) from None
    return actors


def export_actor_table(network: PatronageNetwork) -> str:
    actors = sorted(network.actors(), key=lambda a: a.id)
    columns = ACTOR_COLUMNS + (OPTIONAL_ACTOR_COLUMNS if any(a.deceased for a in actors) else ())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for a in actors:
        row = [
            a.id,
            a.display_name,
            a.rank.value,
            a.status.value,
            a.diocese or "",
            "" if a.birth_year is None else a.birth_year,
            "" if a.ordination_year is None else a.ordination_year,
        ]
        if len(columns) > len(ACTOR_COLUMNS):
            row.append("true" if a.deceased else "false")
        w.writerow(row)
    return buf.getvalue()


# -- edge list ----------------------------------------------------------------


def _builder_with_actors(actor_table: str | None, metadata: Mapping[str, str] | None):
    builder = NetworkBuilder(metadata)
    if actor_table is not None:
        for actor in parse_actor_table(actor_table):
            builder.add_actor(actor)
    return builder


def parse_edge_list(
    text: str,
    actor_table: str | None = None,
    *,
    strict: bool = False,
    recode_coadjutor: bool = False,
    metadata: Mapping[str, str] | None = None,
) -> PatronageNetwork:
    """Build a network from ``from,to,weight`` rows.

    Repeated pairs are merged by keeping the highest weight. Ids missing from
    the actor table become bare ``Rank.OTHER`` actors unless ``strict``.
    """
    builder = _builder_with_actors(actor_table, metadata)
    first = True
    for lineno, cells in _rows(text):
        if first and tuple(c.lower() for c in cells) == EDGE_HEADER:
            first = False
            continue
        first = False
        if len(cells) != 3:
            raise ParseError(lineno, f"expected 3 fields (from,to,weight), found {len(cells)}")
        src, dst, token = cells
        if not src or not dst:
            raise ParseError(lineno, "empty actor id")
        weight = _parse_weight(token, lineno, recode_coadjutor)
        if src == dst:
            raise ParseError(lineno, f"self-loop on {src!r}")
        for a in (src, dst):
            if a not in builder:
                if strict:
                    raise ParseError(lineno, f"unknown actor {a!r} (strict mode)")
                builder.ensure_actor(a)
        builder.add_tie(src, dst, weight)
    return builder.seal()


def export_edge_list(network: PatronageNetwork, *, header: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(EDGE_HEADER)
    for tie in sorted(network.ties()):
        w.writerow((tie.source, tie.target, tie.weight))
    return buf.getvalue()


# -- adjacency matrix ---------------------------------------------------------


def parse_adjacency_matrix(
    text: str,
    actor_table: str | None = None,
    *,
    recode_coadjutor: bool = False,
    metadata: Mapping[str, str] | None = None,
) -> PatronageNetwork:
    """Parse a square matrix where cell [i][j] is the level at which row i served under column j."""
    rows = list(_rows(text))
    if not rows:
        return _builder_with_actors(actor_table, metadata).seal()
    head_line, header = rows[0]
    if header[0] != "":
        raise ParseError(head_line, "matrix header must start with an empty cell")
    ids = header[1:]
    if len(set(ids)) != len(ids) or any(not i for i in ids):
        raise ParseError(head_line, "matrix header ids must be unique and non-empty")
    body = rows[1:]
    if len(body) != len(ids):
        raise NonSquare(head_line, f"{len(ids)} columns but {len(body)} rows")
    builder = _builder_with_actors(actor_table, metadata)
    for i in ids:
        builder.ensure_actor(i)
    for (lineno, cells), expected in zip(body, ids):
        if len(cells) != len(ids) + 1:
            raise NonSquare(lineno, f"row has {len(cells) - 1} cells, expected {len(ids)}")
        if cells[0] != expected:
            raise ParseError(lineno, f"row id {cells[0]!r} does not match column id {expected!r}")
        for col, token in zip(ids, cells[1:]):
            if token in ("", "0"):
                continue
            try:
                level = check_weight(int(token), recode_coadjutor=recode_coadjutor)
            except (ValueError, InvalidWeight):
                raise BadCell(lineno, expected, col, token) from None
            if col == expected:
                raise NonzeroDiagonal(lineno, expected, token)
            builder.add_tie(expected, col, level)
    return builder.seal()


def export_adjacency_matrix(network: PatronageNetwork) -> str:
    ids = sorted(network.actor_ids())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["", *ids])
    for r in ids:
        w.writerow([r, *(network.weight(r, c) or 0 for c in ids)])
    return buf.getvalue()


def sniff_csv(text: str) -> str:
    """Return ``"matrix"`` if the first data row starts with an empty cell, else ``"edges"``."""
    for _, cells in _rows(text):
        return "matrix" if cells and cells[0] == "" else "edges"
    return "edges"


# -- JSON ---------------------------------------------------------------------


def _actor_json(a: Actor) -> dict:
    return {
        "id": a.id,
        "display_name": a.display_name,
        "rank": a.rank.value,
        "status": a.status.value,
        "diocese": a.diocese,
        "birth_year": a.birth_year,
        "ordination_year": a.ordination_year,
        "deceased": a.deceased,
    }


def export_json(network: PatronageNetwork) -> str:
    doc = {
        "actors": [_actor_json(a) for a in sorted(network.actors(), key=lambda a: a.id)],
        "ties": [
            {"from": t.source, "to": t.target, "weight": t.weight} for t in sorted(network.ties())
        ],
        "metadata": dict(network.metadata),
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_json(text: str) -> PatronageNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None
    if not isinstance(doc, dict) or not {"actors", "ties"} <= doc.keys():
        raise ParseError(None, "graph JSON needs top-level 'actors' and 'ties'")
    try:
        actors = [
            Actor(
                id=a["id"],
                display_name=a.get("display_name", ""),
                rank=Rank.parse(a.get("rank") or "Other"),
                status=Status.parse(a.get("status") or "Active"),
                diocese=a.get("diocese"),
                birth_year=a.get("birth_year"),
                ordination_year=a.get("ordination_year"),
                deceased=bool(a.get("deceased", False)),
            )
            for a in doc["actors"]
        ]
        ties = [Tie(t["from"], t["to"], t["weight"]) for t in doc["ties"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(None, f"malformed graph JSON: {exc}") from None
    return PatronageNetwork.from_parts(actors, ties, doc.get("metadata") or {})


# -- Pajek --------------------------------------------------------------------


def export_pajek_net(network: PatronageNetwork) -> str:
    ids = sorted(network.actor_ids())
    index = {a: i for i, a in enumerate(ids, 1)}
    lines = [f"*Vertices {len(ids)}"]
    lines += [f'{index[a]} "{a}"' for a in ids]
    lines.append("*Arcs")
    arcs = sorted((index[t.source], index[t.target], t.weight) for t in network.ties())
    lines += [f"{s} {d} {w}" for s, d, w in arcs]
    return "\n".join(lines) + "\n"


def parse_pajek_net(text: str) -> PatronageNetwork:
    """Read the subset of Pajek NET written by :func:`export_pajek_net`."""
    builder = NetworkBuilder()
    labels: dict[int, str] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            section = line.split()[0].lower()
            if section not in ("*vertices", "*arcs"):
                raise ParseError(lineno, f"unsupported section {line.split()[0]!r}")
            continue
        parts = line.split(None, 1) if section == "*vertices" else line.split()
        try:
            if section == "*vertices":
                idx = int(parts[0])
                label = parts[1].strip().strip('"') if len(parts) > 1 else str(idx)
                labels[idx] = label
                builder.add_actor(Actor(label))
            elif section == "*arcs":
                s, d = labels[int(parts[0])], labels[int(parts[1])]
                weight = int(float(parts[2])) if len(parts) > 2 else 1
                builder.add_tie(s, d, weight)
            else:
                raise ParseError(lineno, "data before any section header")
        except (ValueError, KeyError, IndexError, PatronetError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(lineno, f"bad Pajek line {line!r}: {exc}") from None
    return builder.seal()


# -- files --------------------------------------------------------------------

FORMATS = ("auto", "edges", "matrix", "json", "net")


def detect_format(path: str | Path, text: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "json"
    if suffix == ".net":
        return "net"
    return sniff_csv(text)


def load_network(
    path: str | Path,
    *,
    fmt: str = "auto",
    actors: str | Path | None = None,
    strict: bool = False,
    recode_coadjutor: bool = False,
) -> PatronageNetwork:
    text = Path(path).read_text(encoding="utf-8")
    actor_text = Path(actors).read_text(encoding="utf-8") if actors else None
    if fmt == "auto":
        fmt = detect_format(path, text)
    meta = {"source": Path(path).name}
    if fmt == "edges":
        return parse_edge_list(
            text, actor_text, strict=strict, recode_coadjutor=recode_coadjutor, metadata=meta
        )
    if fmt == "matrix":
        return parse_adjacency_matrix(
            text, actor_text, recode_coadjutor=recode_coadjutor, metadata=meta
        )
    if fmt == "json":
        return parse_json(text)
    if fmt == "net":
        return parse_pajek_net(text)
    raise ValueError(f"unknown format {fmt!r}")
