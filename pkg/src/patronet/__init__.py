"""Construction, analysis and rendering of weighted, directed patronage networks."""

from .centrality import DegreeKey, DegreeRow, degree_summary, degree_table, rank_distribution, top_k
from .community import Mode, Partition, detect_communities, modularity
from .ego import EgoNetwork, ego_network, shared_subordinates
from .errors import PatronetError
from .formats import (
    export_adjacency_matrix,
    export_edge_list,
    export_json,
    export_pajek_net,
    load_network,
    parse_adjacency_matrix,
    parse_edge_list,
    parse_json,
)
from .kcore import core_numbers, kcore_subgraph
from .layout import LayoutParams, LayoutResult, layout_multiscale, layout_network, stress
from .model import (
    Actor,
    Direction,
    MergeOutcome,
    NetworkBuilder,
    PatronageNetwork,
    Rank,
    Status,
    Tie,
    graph_equal,
)
from .render import RenderStyle, export_dot, render_svg
from .structure import geodesic_stats, weak_components
from .synth import GeneratorParams, generate

__version__ = "0.1.0"

__all__ = [
    "Actor",
    "DegreeKey",
    "DegreeRow",
    "Direction",
    "EgoNetwork",
    "GeneratorParams",
    "LayoutParams",
    "LayoutResult",
    "MergeOutcome",
    "Mode",
    "NetworkBuilder",
    "Partition",
    "PatronageNetwork",
    "PatronetError",
    "Rank",
    "RenderStyle",
    "Status",
    "Tie",
    "core_numbers",
    "degree_summary",
    "degree_table",
    "detect_communities",
    "ego_network",
    "export_adjacency_matrix",
    "export_dot",
    "export_edge_list",
    "export_json",
    "export_pajek_net",
    "generate",
    "geodesic_stats",
    "graph_equal",
    "kcore_subgraph",
    "layout_multiscale",
    "layout_network",
    "load_network",
    "modularity",
    "parse_adjacency_matrix",
    "parse_edge_list",
    "parse_json",
    "rank_distribution",
    "render_svg",
    "shared_subordinates",
    "stress",
    "top_k",
    "weak_components",
]
