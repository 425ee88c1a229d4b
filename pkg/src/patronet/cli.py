"""``patronet`` command line.

Exit status is 0 on success, 1 on data or validation errors and 2 on usage
errors. Every run also emits a JSON manifest (command, arguments, input
digests, seeds, tool version): next to ``-o FILE`` as ``FILE.manifest.json``,
at ``--manifest PATH``, or on stderr when writing to stdout.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import secrets
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path

from . import __version__
from .centrality import DegreeKey, degree_summary, degree_table, rank_distribution, top_k
from .community import Mode, detect_communities
from .ego import ego_network
from .errors import PatronetError
from .formats import (
    FORMATS,
    export_actor_table,
    export_adjacency_matrix,
    export_edge_list,
    export_json,
    export_pajek_net,
    load_network,
)
from .kcore import core_numbers, core_sizes, kcore_subgraph
from .layout import LayoutParams, layout_network
from .model import PatronageNetwork
from .render import RenderStyle, export_dot, render_svg
from .structure import geodesic_stats, weak_components
from .synth import PRESETS, generate, preset

RANDOMIZED = {"communities", "layout", "render", "generate", "report"}


class _Run:
    """Per-invocation bookkeeping for outputs and the manifest."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.inputs: dict[str, str] = {}
        self.outputs: list[str] = []
        self.seeds: dict[str, int] = {}

    def read(self, path: str | None) -> None:
        if path:
            self.inputs[path] = hashlib.sha256(Path(path).read_bytes()).hexdigest()

    def seed(self) -> int:
        seed = self.args.seed
        if seed is None:
            seed = secrets.randbelow(2**31)
            self.args.seed = seed
        self.seeds["seed"] = seed
        return seed

    def write(self, text: str, path: str | None = None) -> None:
        path = path if path is not None else self.args.output
        if path in (None, "-"):
            sys.stdout.write(text)
        else:
            Path(path).write_text(text, encoding="utf-8")
            self.outputs.append(path)

    def manifest(self) -> dict:
        arguments = {
            k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "manifest")
        }
        return {
            "command": self.args.command,
            "arguments": arguments,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": sorted(self.outputs),
            "seeds": self.seeds,
            "tool": "patronet",
            "tool_version": __version__,
        }

    def emit_manifest(self) -> None:
        manifest = self.manifest()
        target = self.args.manifest
        if target is None and self.args.output not in (None, "-"):
            target = self.args.output + ".manifest.json"
        if target:
            text = json.dumps(manifest, sort_keys=True, indent=2, default=str) + "\n"
            Path(target).write_text(text, encoding="utf-8")
        else:
            line = json.dumps(manifest, sort_keys=True, separators=(",", ":"), default=str)
            sys.stderr.write(f"manifest: {line}\n")


def _load(run: _Run) -> PatronageNetwork:
    a = run.args
    run.read(a.network)
    run.read(a.actors)
    net = load_network(
        a.network,
        fmt=a.format,
        actors=a.actors,
        strict=a.strict,
        recode_coadjutor=a.recode_coadjutor,
    )
    return net.induced(a.include)


def _csv(rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _fmt(x: float) -> str:
    return repr(float(x))


# -- subcommands ----------------------------------------------------------------


def cmd_ingest(run: _Run) -> None:
    net = _load(run)
    writers = {
        "json": export_json,
        "edges": export_edge_list,
        "matrix": export_adjacency_matrix,
        "net": export_pajek_net,
        "actors": export_actor_table,
    }
    run.write(writers[run.args.to](net))


def cmd_validate(run: _Run) -> None:
    net = _load(run)
    run.write(f"ok: {net.n_actors} actors, {net.n_ties} ties\n")


def _stats(net: PatronageNetwork) -> dict:
    rep = weak_components(net)
    out: dict = {
        "actors": net.n_actors,
        "ties": net.n_ties,
        "component_sizes": rep.sizes,
        "component_ties": rep.tie_counts,
        "isolates": len(rep.isolates),
    }
    if rep.components:
        geo = geodesic_stats(net, rep.components[0])
        out["largest_component"] = {
            "size": len(rep.components[0]),
            "ties": rep.tie_counts[0],
            "diameter": geo.diameter,
            "mean_distance": geo.mean_distance,
        }
    table = degree_table(net)
    if table:
        out["indegree"] = {}
        for key in (DegreeKey.IN_UNWEIGHTED, DegreeKey.IN_WEIGHTED):
            s = degree_summary(table, key)
            out["indegree"][key.value] = {"n": s.n, "mean": s.mean, "sd": s.sd}
    out["ranks"] = [
        {"rank": r.rank.label, "count": r.count, "percentage": r.percentage}
        for r in rank_distribution(net)
    ]
    return out


def cmd_stats(run: _Run) -> None:
    stats = _stats(_load(run))
    if run.args.json:
        run.write(json.dumps(stats, sort_keys=True, indent=2) + "\n")
        return
    lines = [
        f"actors: {stats['actors']}",
        f"ties: {stats['ties']}",
        f"components: {' '.join(map(str, stats['component_sizes']))}",
        f"isolates: {stats['isolates']}",
    ]
    if "largest_component" in stats:
        lc = stats["largest_component"]
        lines += [
            f"largest component: {lc['size']} actors, {lc['ties']} ties",
            f"diameter: {lc['diameter']}",
            f"mean distance: {lc['mean_distance']:.4f}",
        ]
    for key, s in stats.get("indegree", {}).items():
        sd = "n/a" if s["sd"] is None else f"{s['sd']:.4f}"
        lines.append(f"indegree {key}: mean {s['mean']:.4f} sd {sd}")
    for r in stats["ranks"]:
        lines.append(f"rank {r['rank']}: {r['count']} ({r['percentage']:.1f}%)")
    run.write("\n".join(lines) + "\n")


def cmd_degrees(run: _Run) -> None:
    net = _load(run)
    a = run.args
    if a.ranks:
        rows = [("rank", "count", "percentage")]
        rows += [(r.rank.label, r.count, f"{r.percentage:.1f}") for r in rank_distribution(net)]
        run.write(_csv(rows))
        return
    table = degree_table(net)
    if a.top is not None:
        key = DegreeKey(a.key)
        rows = [("id", "name", "rank", "diocese", key.value)]
        for r in top_k(table, key, a.top):
            actor = net.actor(r.actor)
            rows.append((r.actor, actor.name, actor.rank.label, actor.diocese or "", r.value(key)))
        run.write(_csv(rows))
        return
    rows = [("id", "in_w", "in_u", "out_w", "out_u")]
    rows += [(r.actor, r.in_w, r.in_u, r.out_w, r.out_u) for r in table]
    run.write(_csv(rows))


def cmd_kcore(run: _Run) -> None:
    net = _load(run)
    a = run.args
    if a.assign:
        cores = core_numbers(net)
        run.write(_csv([("id", "core"), *sorted(cores.items())]))
        return
    core = kcore_subgraph(net, a.k)
    if a.filter:
        run.write(export_json(core.with_metadata(kcore=str(a.k))))
    elif a.highlight:
        members = ",".join(sorted(core.actor_ids()))
        run.write(export_json(net.with_metadata(kcore=str(a.k), highlight=members)))
    else:
        lines = [f"# k={a.k} members={core.n_actors} ties={core.n_ties}"]
        lines += sorted(core.actor_ids())
        run.write("\n".join(lines) + "\n")


def cmd_communities(run: _Run) -> None:
    net = _load(run)
    a = run.args
    part = detect_communities(
        net,
        seed=run.seed(),
        resolution=a.resolution,
        mode=Mode.WEIGHTED if a.weighted else Mode.UNWEIGHTED,
    )
    rows = [("id", "cluster"), *sorted(part.clusters.items())]
    summary = f"# modularity={_fmt(part.modularity)} clusters={part.count}\n"
    run.write(_csv(rows) + summary)


def cmd_ego(run: _Run) -> None:
    net = _load(run)
    a = run.args
    ego = ego_network(net, a.actor, a.radius)
    head = (
        f"# ego={ego.ego} radius={ego.radius} members={ego.size_with_ego} "
        f"members_excluding_ego={ego.size_without_ego} ties={len(ego.ties)}\n"
    )
    run.write(head + _csv([("id", "hops"), *ego.hops.items()]))
    sub = ego.as_network(net)
    if a.ties:
        run.write(export_edge_list(sub), a.ties)
    if a.graph:
        run.write(export_json(sub), a.graph)


def _layout_params(run: _Run) -> LayoutParams:
    a = run.args
    return LayoutParams(
        local_radius=a.radius,
        coarsening_ratio=a.ratio,
        min_coarse_size=a.min_size,
        iterations_per_level=a.iterations,
        seed=run.seed(),
    )


def cmd_layout(run: _Run) -> None:
    net = _load(run)
    result = layout_network(net, _layout_params(run))
    rows = [("id", "x", "y")]
    rows += [(k, _fmt(x), _fmt(y)) for k, (x, y) in sorted(result.coordinates.items())]
    run.write(f"# seed={result.seed} stress={_fmt(result.final_stress)}\n" + _csv(rows))


def read_layout(path: str) -> dict[str, tuple[float, float]]:
    text = Path(path).read_text(encoding="utf-8")
    coords = {}
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    for row in csv.DictReader(lines):
        coords[row["id"]] = (float(row["x"]), float(row["y"]))
    return coords


def cmd_render(run: _Run) -> None:
    net = _load(run)
    a = run.args
    if a.layout:
        run.read(a.layout)
        coords = read_layout(a.layout)
    else:
        coords = layout_network(net, _layout_params(run)).coordinates
    style = RenderStyle(size_key=DegreeKey(a.size_by), labels=not a.no_labels)
    if a.to == "dot":
        run.write(export_dot(net, coords, style))
        return
    highlight = None
    if a.highlight_kcore is not None:
        highlight = kcore_subgraph(net, a.highlight_kcore).actor_ids()
    elif net.metadata.get("highlight"):
        highlight = net.metadata["highlight"].split(",")
    run.write(render_svg(net, coords, degree_table(net), style, highlight))


def cmd_generate(run: _Run) -> None:
    a = run.args
    params = preset(a.preset, run.seed())
    if a.generations is not None:
        params = replace(params, generations=a.generations)
    net, log = generate(params)
    run.write(export_edge_list(net))
    if a.actors_out:
        run.write(export_actor_table(net), a.actors_out)
    if a.log:
        doc = {
            pid: [
                {"role": e.role, "under": e.under, "generation": e.generation, "diocese": e.diocese}
                for e in entries
            ]
            for pid, entries in sorted(log.items())
        }
        run.write(json.dumps(doc, sort_keys=True, indent=2) + "\n", a.log)


def cmd_report(run: _Run) -> None:
    net = _load(run)
    a = run.args
    table = degree_table(net)
    cores = core_numbers(net)
    report: dict = {"stats": _stats(net)}
    report["top_degrees"] = [
        {"id": r.actor, "name": net.actor(r.actor).name, "rank": net.actor(r.actor).rank.label,
         "diocese": net.actor(r.actor).diocese, "in_w": r.in_w, "in_u": r.in_u}
        for r in top_k(table, DegreeKey.IN_WEIGHTED, a.top)
    ] if table else []
    report["cores"] = {
        "k": a.k,
        "kcore_size": sum(1 for c in cores.values() if c >= a.k),
        "sizes": {str(k): v for k, v in core_sizes(cores).items()},
    }
    seed = run.seed()
    if net.n_ties:
        part = detect_communities(net, seed=seed)
        report["communities"] = {
            "seed": seed,
            "modularity": part.modularity,
            "count": part.count,
            "sizes": sorted(part.sizes(), reverse=True),
        }
    else:
        report["communities"] = None
    run.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patronet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"patronet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output", help="output file (default: stdout)")
    out.add_argument("--manifest", help="where to write the run manifest")

    inp = argparse.ArgumentParser(add_help=False, parents=[out])
    inp.add_argument("network", help="edge list, adjacency matrix, graph JSON or Pajek NET")
    inp.add_argument("--format", choices=FORMATS, default="auto")
    inp.add_argument("--actors", help="actor table CSV")
    inp.add_argument("--strict", action="store_true", help="reject ids missing from the actor table")
    inp.add_argument(
        "--recode-coadjutor", action="store_true", help="accept legacy weight 4 and store it as 3"
    )
    inp.add_argument("--include", choices=("all", "living", "active"), default="all")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, help="random seed (generated and recorded if omitted)")

    lay = argparse.ArgumentParser(add_help=False)
    lay.add_argument("--radius", type=int, default=7, help="local stress radius in hops")
    lay.add_argument("--ratio", type=float, default=3.0, help="coarsening ratio between levels")
    lay.add_argument("--min-size", type=int, default=10, help="coarsest level size")
    lay.add_argument("--iterations", type=int, help="majorization iterations per level")

    def add(name, func, parents, help):
        p = sub.add_parser(name, parents=parents, help=help)
        p.set_defaults(func=func)
        return p

    p = add("ingest", cmd_ingest, [inp], "convert a network to another format")
    p.add_argument("--to", choices=("json", "edges", "matrix", "net", "actors"), default="json")
    add("validate", cmd_validate, [inp], "check a network file")
    p = add("stats", cmd_stats, [inp], "components, geodesics, degree summary, ranks")
    p.add_argument("--json", action="store_true")
    p = add("degrees", cmd_degrees, [inp], "degree table, top-k ranking or rank distribution")
    p.add_argument("--top", type=int)
    p.add_argument("--key", choices=[k.value for k in DegreeKey], default="in_w")
    p.add_argument("--ranks", action="store_true", help="emit the rank distribution instead")
    p = add("kcore", cmd_kcore, [inp], "k-core members or core numbers")
    p.add_argument("--k", type=int, default=3)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--assign", action="store_true", help="per-actor core numbers")
    mode.add_argument("--filter", action="store_true", help="graph JSON of the k-core only")
    mode.add_argument("--highlight", action="store_true", help="full graph JSON marking the k-core")
    p = add("communities", cmd_communities, [inp, seeded], "modularity-maximizing clusters")
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--weighted", action="store_true")
    p = add("ego", cmd_ego, [inp], "ego network of one actor")
    p.add_argument("--actor", required=True)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--ties", help="write the induced edge list here")
    p.add_argument("--graph", help="write the ego network as graph JSON here")
    add("layout", cmd_layout, [inp, seeded, lay], "multiscale layout coordinates")
    p = add("render", cmd_render, [inp, seeded, lay], "SVG or DOT network map")
    p.add_argument("--layout", help="coordinates CSV from 'layout' (computed if omitted)")
    p.add_argument("--to", choices=("svg", "dot"), default="svg")
    p.add_argument("--size-by", choices=("in_w", "in_u"), default="in_w")
    p.add_argument("--highlight-kcore", type=int, metavar="K")
    p.add_argument("--no-labels", action="store_true")
    p = add("generate", cmd_generate, [out, seeded], "synthetic network (edges to -o)")
    p.add_argument("--preset", choices=sorted(PRESETS), default="cbcew")
    p.add_argument("--generations", type=int)
    p.add_argument("-a", "--actors-out", help="write the actor table here")
    p.add_argument("--log", help="write the career log JSON here")
    p = add("report", cmd_report, [inp, seeded], "JSON bundle of stats, degrees, cores, communities")
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--k", type=int, default=3)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    r = _Run(args)
    try:
        args.func(r)
    except (PatronetError, OSError, ValueError) as exc:
        print(f"patronet {args.command}: error: {exc}", file=sys.stderr)
        return 1
    r.emit_manifest()
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
