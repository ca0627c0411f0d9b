"""
SPQR-trees of biconnected planar graphs.

The tree is rooted at the Q-node of a reference edge. Every other node
`mu` has two poles `(u, v)`, a pertinent graph (the edges below `mu`)
and a skeleton whose edges correspond one to one with the children of
`mu`; the parent is represented by one more virtual edge `(u, v)`.

  - Q: a single real edge.
  - S: the pertinent graph is a chain of blocks glued at cutvertices;
    the skeleton is a cycle `u = w_0, w_1, .., w_k = v` plus the parent
    edge.
  - P: the pertinent graph splits into `k >= 2` parts at `{u, v}`; the
    skeleton is a bundle of `k + 1` parallel edges.
  - R: none of the above; the skeleton plus the parent edge is a
    simple triconnected graph.

The decomposition follows split pairs top-down. Rigid skeletons are
found by collecting, for every other vertex pair, the maximal split
components that do not contain the parent edge; this is quadratic in the
number of vertices per node, which is plenty for the graph sizes the
dynamic program is used on.
"""

import enum
import itertools
import logging
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

import networkx as nx

from py_rique.graph import Edge, Graph, normalize_edge

log = logging.getLogger("spqr_tree")


class SpqrError(ValueError):
    """The graph is not biconnected and planar, or the tree is inconsistent."""


@enum.unique
class NodeKind(enum.Enum):
    S = "S"
    P = "P"
    Q = "Q"
    R = "R"


class SkeletonEdge(NamedTuple):
    u: int
    v: int
    child: int


class SpqrNode:
    """A node of the tree; `skeleton` excludes the parent edge."""

    def __init__(
        self,
        id: int,
        kind: NodeKind,
        poles: Tuple[int, int],
        parent: Optional[int],
        pert_edges: FrozenSet[Edge],
    ):
        self.id = id
        self.kind = kind
        self.poles = poles
        self.parent = parent
        self.pert_edges = pert_edges
        self.pert_vertices: FrozenSet[int] = frozenset(v for e in pert_edges for v in e)
        self.children: List[int] = []
        self.skeleton: List[SkeletonEdge] = []
        self.chain: Tuple[int, ...] = ()

    @property
    def edge(self) -> Edge:
        """The real edge of a Q-node."""
        assert self.kind is NodeKind.Q
        return normalize_edge(*self.poles)

    def skeleton_vertices(self) -> FrozenSet[int]:
        return frozenset(self.poles) | frozenset(x for e in self.skeleton for x in (e.u, e.v))

    def __repr__(self) -> str:
        return f"{self.kind.value}{self.id}{self.poles}"


class SpqrTree:
    def __init__(self, graph: Graph, reference: Edge, nodes: List[SpqrNode]):
        self.graph = graph
        self.reference = reference
        self.nodes = nodes
        self.root = 0

    def node(self, i: int) -> SpqrNode:
        return self.nodes[i]

    def postorder(self) -> List[int]:
        order: List[int] = []
        stack = [(self.root, False)]
        while stack:
            i, expanded = stack.pop()
            if expanded:
                order.append(i)
                continue
            stack.append((i, True))
            for c in reversed(self.nodes[i].children):
                stack.append((c, False))
        return order

    def real_edges(self) -> List[Edge]:
        return sorted(node.edge for node in self.nodes if node.kind is NodeKind.Q)

    def check_invariants(self) -> List[str]:
        """Return a description of every broken structural invariant."""
        problems: List[str] = []
        if sorted(self.graph.edges) != self.real_edges():
            problems.append("Q-nodes do not partition the edges")
        for node in self.nodes:
            if node.id == self.root:
                continue
            child_kinds = [self.nodes[c].kind for c in node.children]
            if node.kind is not NodeKind.Q and node.kind in child_kinds:
                problems.append(f"{node} has a child of the same kind")
            if node.children:
                below: Set[Edge] = set()
                for c in node.children:
                    below |= self.nodes[c].pert_edges
                if below != node.pert_edges:
                    problems.append(f"{node}: children do not cover the pertinent graph")
            if node.kind is NodeKind.S and len(node.chain) < 3:
                problems.append(f"{node}: skeleton cycle too short")
            elif node.kind is NodeKind.P and len(node.children) < 2:
                problems.append(f"{node}: fewer than three parallel edges")
            elif node.kind is NodeKind.R:
                skeleton = nx.Graph()
                skeleton.add_edges_from((e.u, e.v) for e in node.skeleton)
                skeleton.add_edge(*node.poles)
                if skeleton.number_of_edges() != len(node.skeleton) + 1:
                    problems.append(f"{node}: skeleton has parallel edges")
                if skeleton.number_of_nodes() < 4 or nx.node_connectivity(skeleton) < 3:
                    problems.append(f"{node}: skeleton is not triconnected")
        return problems

    def describe(self) -> str:
        lines = []
        for node in self.nodes:
            children = " ".join(repr(self.nodes[c]) for c in node.children)
            lines.append(f"{node!r}: {children}".rstrip())
        return "\n".join(lines)


def split_classes(edges: Iterable[Edge], a: int, b: int) -> List[FrozenSet[Edge]]:
    """Partition `edges` into the split classes of the pair `{a, b}`.

    Two edges are in the same class if a path joins them without passing
    through `a` or `b`; an edge between `a` and `b` is a class of its own.
    """
    poles = {a, b}
    h = nx.Graph()
    own: List[FrozenSet[Edge]] = []
    edges = list(edges)
    for u, v in edges:
        for x in (u, v):
            if x not in poles:
                h.add_node(x)
        if u not in poles and v not in poles:
            h.add_edge(u, v)
    component: Dict[int, int] = {}
    for i, comp in enumerate(nx.connected_components(h)):
        for x in comp:
            component[x] = i
    grouped: Dict[int, Set[Edge]] = {}
    for e in edges:
        inner = [x for x in e if x not in poles]
        if not inner:
            own.append(frozenset([e]))
        else:
            grouped.setdefault(component[inner[0]], set()).add(e)
    classes = own + [frozenset(c) for c in grouped.values()]
    return sorted(classes, key=sorted)


class _Builder:
    def __init__(self) -> None:
        self.nodes: List[SpqrNode] = []

    def new_node(
        self, kind: NodeKind, poles: Tuple[int, int], parent: Optional[int], pert: FrozenSet[Edge]
    ) -> SpqrNode:
        node = SpqrNode(len(self.nodes), kind, poles, parent, pert)
        self.nodes.append(node)
        return node

    def decompose(self, edges: FrozenSet[Edge], s: int, t: int, parent: int) -> int:
        """Build the subtree for the pertinent graph `edges` with poles `(s, t)`."""
        if len(edges) == 1:
            (e,) = edges
            assert set(e) == {s, t}, f"single edge {e} is not between the poles {s}, {t}"
            return self.new_node(NodeKind.Q, (s, t), parent, edges).id

        h = nx.Graph(list(edges))
        if not nx.is_biconnected(h):
            return self._series(edges, h, s, t, parent)
        classes = split_classes(edges, s, t)
        if len(classes) >= 2:
            node = self.new_node(NodeKind.P, (s, t), parent, edges)
            for part in classes:
                child = self.decompose(part, s, t, node.id)
                node.children.append(child)
                node.skeleton.append(SkeletonEdge(s, t, child))
            return node.id
        return self._rigid(edges, s, t, parent)

    def _series(self, edges: FrozenSet[Edge], h: nx.Graph, s: int, t: int, parent: int) -> int:
        blocks = [frozenset(normalize_edge(u, v) for u, v in b) for b in nx.biconnected_component_edges(h)]
        cuts = set(nx.articulation_points(h))
        node = self.new_node(NodeKind.S, (s, t), parent, edges)
        chain = [s]
        remaining = list(blocks)
        current = s
        while current != t:
            (block,) = [b for b in remaining if any(current in e for e in b)]
            remaining.remove(block)
            block_vertices = {x for e in block for x in e}
            exits = [x for x in block_vertices if x != current and (x in cuts or x == t)]
            assert len(exits) == 1, f"block {sorted(block)} does not continue the chain"
            nxt = exits[0]
            child = self.decompose(block, current, nxt, node.id)
            node.children.append(child)
            node.skeleton.append(SkeletonEdge(current, nxt, child))
            chain.append(nxt)
            current = nxt
        assert not remaining, "pertinent graph of a series node is not a chain"
        node.chain = tuple(chain)
        return node.id

    def _rigid(self, edges: FrozenSet[Edge], s: int, t: int, parent: int) -> int:
        ref = normalize_edge(s, t)
        assert ref not in edges
        full = set(edges) | {ref}
        vertices = sorted({x for e in edges for x in e})
        found: Dict[FrozenSet[Edge], Tuple[int, int]] = {}
        for a, b in itertools.combinations(vertices, 2):
            if {a, b} == {s, t}:
                continue
            classes = split_classes(full, a, b)
            if len(classes) < 2:
                continue
            rest = frozenset(e for c in classes if ref not in c for e in c)
            if len(rest) >= 2:
                found.setdefault(rest, (a, b))
        candidates = [(a, b, rest) for rest, (a, b) in found.items()]
        maximal = [c for c in candidates if not any(c[2] < d[2] for d in candidates)]

        node = self.new_node(NodeKind.R, (s, t), parent, edges)
        covered: Set[Edge] = set()
        parts: List[Tuple[int, int, FrozenSet[Edge]]] = []
        for a, b, rest in maximal:
            if covered & rest:
                raise SpqrError(f"overlapping split components at {{{a}, {b}}}")
            covered |= rest
            parts.append((a, b, rest))
        parts += [(u, v, frozenset([(u, v)])) for u, v in edges if (u, v) not in covered]
        parts.sort(key=lambda p: (min(p[0], p[1]), max(p[0], p[1]), sorted(p[2])))
        for a, b, part in parts:
            child = self.decompose(part, a, b, node.id)
            node.children.append(child)
            node.skeleton.append(SkeletonEdge(a, b, child))
        return node.id


def _check_biconnected_planar(g: Graph) -> None:
    h = g.to_networkx()
    if g.m == 1 and g.n == 2:
        return
    if g.n < 3 or not nx.is_biconnected(h):
        errmsg = f"{g} is not biconnected"
        log.critical(errmsg)
        raise SpqrError(errmsg)
    planar, _ = nx.check_planarity(h)
    if not planar:
        errmsg = f"{g} is not planar"
        log.critical(errmsg)
        raise SpqrError(errmsg)


def build_spqr(g: Graph, reference: Optional[Edge] = None) -> SpqrTree:
    """Build the SPQR-tree of a biconnected planar graph.

    Args:
        g: The graph.
        reference: The edge whose Q-node becomes the root; the smallest
            edge by default.

    Returns:
        The tree. Its root is a Q-node with a single child (none if `g`
        is a single edge); the child's poles are the reference edge.

    Raises:
        SpqrError: `g` is not biconnected or not planar.
        ValueError: `reference` is not an edge of `g`.
    """
    _check_biconnected_planar(g)
    ref = min(g.edges) if reference is None else normalize_edge(*reference)
    if ref not in g.edges:
        raise ValueError(f"reference edge {ref} is not in {g}")
    builder = _Builder()
    root = builder.new_node(NodeKind.Q, ref, None, frozenset([ref]))
    rest = frozenset(g.edges - {ref})
    if rest:
        child = builder.decompose(rest, ref[0], ref[1], root.id)
        root.children.append(child)
        root.skeleton.append(SkeletonEdge(ref[0], ref[1], child))
    tree = SpqrTree(g, ref, builder.nodes)
    log.debug(f"{g}: {len(tree.nodes)} nodes, reference {ref}")
    return tree
