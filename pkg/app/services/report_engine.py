"""Builds the JSON reports of the CLI and renders decompositions as Graphviz DOT."""
import logging
from pathlib import Path

import networkx as nx
from jinja2 import Environment, FileSystemLoader

from app.models import DecompositionReport, EdgeOut, InfoReport, NodeOut, SeparationOut, TorsoOut
from app.services.connectivity import enumerate_separations, is_n_connected
from app.services.decomposition import DecompositionTree, build_tree
from app.services.localization import two_sum, virtual_label
from app.services.matroid_kernel import Matroid, ValidationLevel, from_circuits, is_connected, rank
from app.services.separation_calculus import is_good

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"

_env = Environment(
    loader=FileSystemLoader(TEMPLATES_DIR),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)
_env.filters["dot_escape"] = lambda text: str(text).replace("\\", "\\\\").replace('"', '\\"')


def info_report(M: Matroid) -> InfoReport:
    connected = is_connected(M)
    return InfoReport(
        elements=M.size,
        rank=rank(M, M.full),
        circuits=len(M.circuits),
        connected=connected,
        three_connected=connected and is_n_connected(M, 3),
    )


def separations_report(M: Matroid, k: int = 2, good_only: bool = False) -> list[SeparationOut]:
    seps = enumerate_separations(M, k)
    out = []
    for s in seps:
        good = is_good(M, s, seps)
        if good_only and not good:
            continue
        out.append(SeparationOut(side_a=list(M.labels(s.side_a)), side_b=list(M.labels(s.side_b)), order=s.order, good=good))
    return out


def decomposition_report(tree: DecompositionTree) -> DecompositionReport:
    M = tree.matroid
    nodes = []
    for v in tree.nodes:
        T = tree.torsos[v]
        nodes.append(NodeOut(
            id=v,
            key=list(M.labels(tree.keys[v])),
            part=list(M.labels(tree.parts[v])),
            torso=TorsoOut(ground=list(T.ground), circuits=[list(c) for c in T.circuit_labels()], kind=tree.kinds[v]),
        ))
    edges = [
        EdgeOut(a=edge.a, b=edge.b, label=virtual_label(j), separation=list(M.labels(edge.separation.side_a)))
        for j, edge in enumerate(tree.edges)
    ]
    return DecompositionReport(nodes=nodes, edges=edges, adhesion=2 if edges else 0, irredundant=True)


def decompose(M: Matroid) -> DecompositionReport:
    return decomposition_report(build_tree(M))


def matroid_from_report(report: DecompositionReport) -> Matroid:
    """Glue the reported torsos back together along the reported edges."""
    torsos = {
        node.id: from_circuits(node.torso.ground, node.torso.circuits, ValidationLevel.NONE)
        for node in report.nodes
    }
    graph = nx.Graph()
    graph.add_nodes_from(torsos)
    for edge in report.edges:
        graph.add_edge(edge.a, edge.b, label=edge.label)
    start = report.nodes[0].id
    result = torsos[start]
    for u, w in nx.bfs_edges(graph, start):
        result = two_sum(result, torsos[w], graph.edges[u, w]["label"])
    return result


def render_dot(report: DecompositionReport) -> str:
    template = _env.get_template("decomposition.dot.j2")
    logger.debug("rendering %d nodes as DOT", len(report.nodes))
    return template.render(report=report)
