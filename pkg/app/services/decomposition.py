"""Canonical tree-decomposition of a connected matroid along its good 2-separations.

Nodes are the classes of oriented separations under the predecessor
relation; an edge joins the classes of (A, A∁) and (A∁, A). Each node v
carries the part R_v (the meet of the A-sides in its class) and a torso on
R_v plus one virtual element ``@e<j>`` per incident edge j.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterator, Mapping, Sequence

import networkx as nx

from app.config import settings
from app.errors import (
    Disconnected,
    GroundSetTooLarge,
    LemmaFailure,
    NotAPartition,
    NotATree,
    NotNested,
    NotSymmetric,
    PreconditionViolated,
    TooSmall,
    Unclassifiable,
)
from app.services.connectivity import (
    Separation,
    enumerate_2separations,
    is_n_connected,
    phi,
    separation_of,
)
from app.services.localization import localize, two_sum, virtual_label
from app.services.matroid_kernel import (
    Matroid,
    check_cap,
    dual,
    from_circuits,
    is_connected,
    is_independent,
    is_subset,
    mask_of,
    popcount,
    same_matroid,
    subset_key,
)
from app.services.separation_calculus import are_nested, good_2separations

logger = logging.getLogger(__name__)


class TorsoKind(str, Enum):
    THREE_CONNECTED = "three-connected"
    CIRCUIT = "circuit"
    COCIRCUIT = "cocircuit"


@dataclass(frozen=True)
class TreeEdge:
    a: str
    b: str
    separation: Separation  # side_a is S(e, a)

    def far_side(self, v: str) -> int:
        return self.separation.side_b if v == self.a else self.separation.side_a


@dataclass
class DecompositionTree:
    matroid: Matroid
    nodes: tuple[str, ...]
    parts: dict[str, int]
    edges: tuple[TreeEdge, ...]
    torsos: dict[str, Matroid] = field(default_factory=dict)
    kinds: dict[str, TorsoKind] = field(default_factory=dict)
    keys: dict[str, int] = field(default_factory=dict)  # A-side of the least member of each class

    def incident(self, v: str) -> list[tuple[int, TreeEdge]]:
        return [(j, edge) for j, edge in enumerate(self.edges) if v in (edge.a, edge.b)]

    def degree(self, v: str) -> int:
        return len(self.incident(v))

    def edge_pairs(self) -> list[tuple[str, str]]:
        return [(edge.a, edge.b) for edge in self.edges]

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        for v in self.nodes:
            graph.add_node(v, part=frozenset(self.matroid.labels(self.parts[v])), kind=self.kinds.get(v))
        for j, edge in enumerate(self.edges):
            graph.add_edge(edge.a, edge.b, label=virtual_label(j))
        return graph


@dataclass
class TreeDecompositionReport:
    separations: list[tuple[str, str, int | None]]
    valid: bool
    adhesion: int
    uniform: bool
    irredundant: bool | None


@dataclass
class PrimitiveReport:
    primitive: bool
    three_connected: bool
    kind: TorsoKind | None
    clauses: list[str]


def _require_oriented_family(oriented: Sequence[Separation]) -> None:
    sides = {s.side_a for s in oriented}
    for s in oriented:
        if s.side_b not in sides:
            raise NotSymmetric("the inversion of a member is missing")
    for s, t in combinations(oriented, 2):
        if not are_nested(s, t):
            raise NotNested("two members cross")


def _strict(a: int, b: int) -> bool:
    return a != b and is_subset(a, b)


def equivalence_classes(oriented: Sequence[Separation]) -> list[list[Separation]]:
    """Classes of: equal, or A∁ ⊂ B with no member side strictly between.

    Classes and their members are listed in canonical order of A-sides.
    """
    oriented = sorted({s.side_a: s for s in oriented}.values(), key=lambda s: subset_key(s.side_a))
    _require_oriented_family(oriented)
    sides = [s.side_a for s in oriented]

    def related(x: Separation, y: Separation) -> bool:
        if x.side_a == y.side_a:
            return True
        if not _strict(x.side_b, y.side_a):
            return False
        return not any(_strict(x.side_b, c) and _strict(c, y.side_a) for c in sides)

    n = len(oriented)
    relation = [[related(oriented[i], oriented[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if relation[i][j] != relation[j][i]:
                raise LemmaFailure("equivalence relation", "the predecessor relation is not symmetric")
            if not relation[i][j]:
                continue
            for k in range(n):
                if relation[j][k] and not relation[i][k]:
                    raise LemmaFailure("equivalence relation", "the predecessor relation is not transitive")
    classes: list[list[Separation]] = []
    assigned = [False] * n
    for i in range(n):
        if assigned[i]:
            continue
        members = [j for j in range(n) if relation[i][j]]
        for j in members:
            assigned[j] = True
        classes.append([oriented[j] for j in members])
    return classes


def _side_of(graph: nx.Graph, parts: Mapping[str, int], u: str, v: str) -> int:
    """Union of the parts on u's side of the tree edge uv."""
    pruned = graph.copy()
    pruned.remove_edge(u, v)
    side = 0
    for node in nx.node_connected_component(pruned, u):
        side |= parts[node]
    return side


def _torso_by_formula(M: Matroid, part: int, far_sides: Sequence[int], names: Sequence[str]) -> Matroid:
    circuits = []
    for C in M.circuits:
        if any(is_subset(C, S) for S in far_sides):
            continue
        members = list(M.labels(C & part))
        members += [name for S, name in zip(far_sides, names) if C & S]
        circuits.append(members)
    return from_circuits(M.labels(part) + tuple(names), circuits, "antichain")


def torso(M: Matroid, tree: DecompositionTree, v: str) -> Matroid:
    incident = tree.incident(v)
    far_sides = [edge.far_side(v) for _, edge in incident]
    names = [virtual_label(j) for j, _ in incident]
    by_formula = _torso_by_formula(M, tree.parts[v], far_sides, names)
    if incident:
        localized = localize(M, far_sides, names=names).local
        if not same_matroid(by_formula, localized):
            logger.error("torso of %s differs from the localization at its star", v)
            raise LemmaFailure("torso is a localization", f"node {v}")
    return by_formula


def is_circuit_matroid(T: Matroid) -> bool:
    return T.circuits == (T.full,)


def is_cocircuit_matroid(T: Matroid) -> bool:
    return dual(T).circuits == (T.full,)


def classify_torso(T: Matroid) -> TorsoKind:
    if T.size < 3:
        raise TooSmall(f"torso has {T.size} elements")
    if not is_connected(T):
        raise Disconnected("torso is disconnected")
    circuit, cocircuit = is_circuit_matroid(T), is_cocircuit_matroid(T)
    if circuit and cocircuit:
        raise Unclassifiable("torso classification", "both a circuit and a cocircuit")
    if circuit:
        return TorsoKind.CIRCUIT
    if cocircuit:
        return TorsoKind.COCIRCUIT
    if is_n_connected(T, 3):
        return TorsoKind.THREE_CONNECTED
    logger.error("torso %s is neither 3-connected, a circuit nor a cocircuit", T)
    raise Unclassifiable("torso classification", f"{T.size} elements, {len(T.circuits)} circuits")


def tree_from_separations(M: Matroid, seps: Sequence[Separation]) -> DecompositionTree:
    """The tree of a nested set of 2-separations, with parts and torsos."""
    oriented = []
    for s in seps:
        oriented += [s, s.inverted()]
    if not oriented:
        tree = DecompositionTree(M, ("n0",), {"n0": M.full}, ())
        tree.keys["n0"] = M.full
        tree.torsos["n0"] = torso(M, tree, "n0")
        return tree

    classes = equivalence_classes(oriented)
    nodes = tuple(f"n{i}" for i in range(len(classes)))
    node_of = {}
    parts = {}
    for v, members in zip(nodes, classes):
        part = M.full
        for s in members:
            node_of[s.side_a] = v
            part &= s.side_a
        parts[v] = part

    edge_keys = sorted({s.key for s in oriented}, key=subset_key)
    edges = []
    for key in edge_keys:
        complement = M.complement(key)
        edges.append(TreeEdge(node_of[key], node_of[complement], Separation(key, complement, 2)))
    tree = DecompositionTree(M, nodes, parts, tuple(edges))
    tree.keys = {v: members[0].side_a for v, members in zip(nodes, classes)}
    _check_tree(M, tree)
    for v in nodes:
        tree.torsos[v] = torso(M, tree, v)
    return tree


def _check_tree(M: Matroid, tree: DecompositionTree) -> None:
    graph = tree.graph()
    if not nx.is_tree(graph):
        raise LemmaFailure("decomposition tree", "the class graph is not a tree")
    union = 0
    for v in tree.nodes:
        if union & tree.parts[v]:
            raise LemmaFailure("parts partition", f"part of {v} overlaps another")
        union |= tree.parts[v]
    if union != M.full:
        raise LemmaFailure("parts partition", f"parts miss {M.labels(M.full & ~union)}")
    for edge in tree.edges:
        if _side_of(graph, tree.parts, edge.a, edge.b) != edge.separation.side_a:
            raise LemmaFailure("edge separations", f"edge {edge.a}-{edge.b}")
        if phi(M, edge.separation.side_a) != 1:
            raise LemmaFailure("uniform adhesion 2", f"edge {edge.a}-{edge.b}")


def _irredundant(tree: DecompositionTree) -> bool:
    if any(T.size < 3 for T in tree.torsos.values()):
        return False
    circuit = {v: is_circuit_matroid(T) for v, T in tree.torsos.items()}
    cocircuit = {v: is_cocircuit_matroid(T) for v, T in tree.torsos.items()}
    for edge in tree.edges:
        if circuit[edge.a] and circuit[edge.b]:
            return False
        if cocircuit[edge.a] and cocircuit[edge.b]:
            return False
    return True


def _require_decomposable(M: Matroid) -> None:
    if M.size < 3:
        raise TooSmall(f"decomposition needs at least 3 elements, got {M.size}")
    check_cap(M, "decomposition")
    if not is_connected(M):
        raise Disconnected("decomposition needs a connected matroid")


def build_tree(M: Matroid) -> DecompositionTree:
    _require_decomposable(M)
    tree = tree_from_separations(M, good_2separations(M))
    for v in tree.nodes:
        tree.kinds[v] = classify_torso(tree.torsos[v])
    if not _irredundant(tree):
        raise LemmaFailure("irredundant decomposition")
    logger.info("decomposed %d elements into %d torsos", M.size, len(tree.nodes))
    return tree


def is_primitive(M: Matroid) -> bool:
    return not good_2separations(M)


def _two_separation_sides(M: Matroid) -> set[int]:
    sides = set()
    for s in enumerate_2separations(M):
        sides.update((s.side_a, s.side_b))
    return sides


def verify_primitive_structure(M: Matroid) -> PrimitiveReport:
    """Structure of primitive matroids, checked clause by clause.

    Every connected input gets the size-two side check; primitive inputs
    that are not 3-connected also get the pair, circuit-or-cocircuit,
    separating-pair and separating-triple checks.
    """
    if not is_connected(M):
        raise Disconnected("primitive structure needs a connected matroid")
    if M.size < 3:
        raise TooSmall(f"primitive structure needs at least 3 elements, got {M.size}")
    sides = _two_separation_sides(M)
    clauses = []
    r = M.rank_of(M.full)
    for S in sides:
        if popcount(S) != 2:
            continue
        coindependent_circuit = S in M.circuits and M.rank_of(M.complement(S)) == r
        independent_cocircuit = is_independent(M, S) and S in dual(M).circuits
        if not (coindependent_circuit or independent_cocircuit):
            raise LemmaFailure("size-two side", f"{M.labels(S)} is neither a coindependent circuit nor an independent cocircuit")
    clauses.append("size-two sides")

    primitive = is_primitive(M)
    three_connected = not sides
    kind = None
    if primitive and not three_connected:
        for pair in combinations(range(M.size), 2):
            if mask_of(pair) not in sides:
                raise LemmaFailure("every pair separates", f"{M.labels(mask_of(pair))}")
        clauses.append("every pair separates")
        kind = classify_torso(M)
        if kind == TorsoKind.THREE_CONNECTED:
            raise LemmaFailure("circuit or cocircuit", "a non-3-connected primitive matroid is neither")
        clauses.append("circuit or cocircuit")
        for u, v in combinations(range(M.size), 2):
            if not any((S >> u) & 1 and not (S >> v) & 1 for S in sides):
                raise LemmaFailure("separating pair", f"{M.ground[u]!r} | {M.ground[v]!r}")
        clauses.append("separating pair")
        for x, y, z in _ordered_triples(M.size):
            inside = (1 << x) | (1 << y)
            if not any(is_subset(inside, S) and not (S >> z) & 1 for S in sides):
                raise LemmaFailure("separating triple", f"{M.labels(inside)} | {M.ground[z]!r}")
        clauses.append("separating triple")
    elif primitive:
        kind = classify_torso(M)
    return PrimitiveReport(primitive, three_connected, kind, clauses)


def _ordered_triples(n: int) -> Iterator[tuple[int, int, int]]:
    for x, y in combinations(range(n), 2):
        for z in range(n):
            if z not in (x, y):
                yield x, y, z


def verify_separating_pair(M: Matroid, X: int, s: Separation) -> tuple[Separation, Separation]:
    """For X inside a 2-separation side S: crossing 2-separations S′ ⊇ X inside S and U splitting X."""
    if not is_primitive(M) or not _two_separation_sides(M):
        raise PreconditionViolated("primitive and not 3-connected")
    if popcount(X) < 2 or not is_subset(X, s.side_a):
        raise PreconditionViolated("|X| >= 2 and X ⊆ S")
    found = separation_of(M, s.side_a)
    if found is None or found.order != 2:
        raise PreconditionViolated("(S, S∁) is a 2-separation")
    seps = [t for u in enumerate_2separations(M) for t in (u, u.inverted())]
    for inner in seps:
        if not (is_subset(X, inner.side_a) and is_subset(inner.side_a, s.side_a)):
            continue
        for splitter in seps:
            if X & splitter.side_a and X & splitter.side_b and not are_nested(inner, splitter):
                return inner, splitter
    raise LemmaFailure("separating pair of separations", f"X = {M.labels(X)}")


def verify_tree_decomposition(M: Matroid, edges: Sequence[tuple[str, str]], parts: Mapping[str, int]) -> TreeDecompositionReport:
    graph = nx.Graph()
    graph.add_nodes_from(parts)
    graph.add_edges_from(edges)
    if len(graph) == 0 or not nx.is_tree(graph) or set(graph.nodes) != set(parts):
        raise NotATree("the decomposition graph is not a tree on the given nodes")
    union = 0
    for v, part in parts.items():
        if union & part:
            raise NotAPartition(f"part of {v} overlaps another")
        union |= part
    if union != M.full:
        raise NotAPartition(f"parts miss {M.labels(M.full & ~union)}")

    separations = []
    for u, v in graph.edges:
        side = _side_of(graph, parts, u, v)
        s = separation_of(M, side)
        separations.append((u, v, s.order if s else None))
    valid = all(order is not None for _, _, order in separations)
    orders = {order for _, _, order in separations}
    adhesion = max((order for order in orders if order is not None), default=0)
    uniform = valid and len(orders) <= 1
    irredundant = None
    if valid and orders == {2}:
        tree = DecompositionTree(M, tuple(parts), dict(parts), ())
        names = {frozenset(e): virtual_label(j) for j, e in enumerate(graph.edges)}
        for v in parts:
            far = [(_side_of(graph, parts, w, v), names[frozenset((v, w))]) for w in graph.neighbors(v)]
            tree.torsos[v] = _torso_by_formula(M, parts[v], [S for S, _ in far], [name for _, name in far])
        tree.edges = tuple(
            TreeEdge(u, v, Separation(_side_of(graph, parts, u, v), M.full & ~_side_of(graph, parts, u, v), 2))
            for u, v in graph.edges
        )
        irredundant = _irredundant(tree)
    return TreeDecompositionReport(separations, valid, adhesion, uniform, irredundant)


def _as_graph(td: DecompositionTree | nx.Graph) -> nx.Graph:
    return td.graph() if isinstance(td, DecompositionTree) else td


def decompositions_isomorphic(td1: DecompositionTree | nx.Graph, td2: DecompositionTree | nx.Graph) -> dict | None:
    """A node bijection preserving adjacency and parts, or ``None``."""
    return nx.algorithms.isomorphism.vf2pp_isomorphism(_as_graph(td1), _as_graph(td2), node_label="part")


def reassemble(tree: DecompositionTree) -> Matroid:
    """2-sum the torsos along the tree edges, walking outwards from the first node."""
    graph = tree.graph()
    start = tree.nodes[0]
    result = tree.torsos[start]
    for u, w in nx.bfs_edges(graph, start):
        result = two_sum(result, tree.torsos[w], graph.edges[u, w]["label"])
    return result


def max_chain_length(oriented: Sequence[Separation]) -> int:
    sides = sorted({s.side_a for s in oriented}, key=popcount)
    longest: dict[int, int] = {}
    for side in sides:
        below = [longest[other] for other in longest if _strict(other, side)]
        longest[side] = 1 + max(below, default=0)
    return max(longest.values(), default=0)


def _nested_families(seps: Sequence[Separation]) -> Iterator[list[Separation]]:
    compatible = [[are_nested(a, b) for b in seps] for a in seps]
    chosen: list[int] = []

    def extend(start: int) -> Iterator[list[Separation]]:
        yield [seps[i] for i in chosen]
        for i in range(start, len(seps)):
            if all(compatible[i][j] for j in chosen):
                chosen.append(i)
                yield from extend(i + 1)
                chosen.pop()

    yield from extend(0)


def _primitive_torso(T: Matroid) -> bool:
    return T.size >= 3 and is_connected(T) and not good_2separations(T)


def enumerate_irredundant_decompositions(M: Matroid) -> list[DecompositionTree]:
    """Every irredundant adhesion-2 decomposition with primitive torsos, by exhaustive search."""
    _require_decomposable(M)
    if M.size > settings.UNIQUENESS_CAP:
        raise GroundSetTooLarge(f"uniqueness search is capped at {settings.UNIQUENESS_CAP} elements")
    seps = enumerate_2separations(M)
    found = []
    considered = 0
    for family in _nested_families(seps):
        considered += 1
        tree = tree_from_separations(M, family)
        if not _irredundant(tree):
            continue
        if all(_primitive_torso(T) for T in tree.torsos.values()):
            found.append(tree)
    logger.debug("%d of %d nested families give irredundant decompositions", len(found), considered)
    return found


def verify_uniqueness(M: Matroid) -> int:
    """Check every irredundant decomposition matches the canonical one; returns how many were found."""
    canonical = build_tree(M)
    found = enumerate_irredundant_decompositions(M)
    if not found:
        raise LemmaFailure("unique decomposition", "the canonical decomposition was not found")
    for tree in found:
        if decompositions_isomorphic(tree, canonical) is None:
            logger.error("a second irredundant decomposition with %d nodes exists", len(tree.nodes))
            raise LemmaFailure("unique decomposition", f"an alternative with parts {sorted(map(M.labels, tree.parts.values()))}")
    return len(found)


def kind_counts(tree: DecompositionTree) -> dict[TorsoKind, int]:
    counts: dict[TorsoKind, int] = defaultdict(int)
    for kind in tree.kinds.values():
        counts[kind] += 1
    return dict(counts)
