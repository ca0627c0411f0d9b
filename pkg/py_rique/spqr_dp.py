"""
Planar strongly 1-sided Hamiltonian paths without a fixed embedding.

For a pair `(s, t)` the graph must have a block-cut tree that is a path
from the block of `s` to the block of `t`. Each block is solved on its
SPQR-tree, rooted at an edge incident to the block's exit vertex, and
the block paths are glued at the cutvertices.

Per tree node `mu` with poles `(u, v)` the program keeps a set of
sub-paths of the pertinent graph, each stored with a plane embedding of
its visited part in which the sub-path is strongly 1-sided:

  - `PairKey(x, y)`, `{x, y} = {u, v}`, when `s` is not in the
    pertinent graph: a path from `x` to `y` through every pertinent
    vertex.
  - `EndKey(x, Y)`, `Y` empty or the other pole, when `s` is: a path
    from `s` to `x` through every pertinent vertex except `Y`.

Every candidate is checked locally before it is stored: its single page,
followed by the avoided pole, must be free of the forbidden triple, and
the embedding built from it must be plane and 1-sided. A wrong
combination rule can therefore only lose paths, never report a false
one.
"""

import itertools
import logging
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from py_rique.embedding_bridge import HamPath, is_strongly_one_sided, rotation_for_order
from py_rique.graph import Edge, Graph, RotationSystem, block_cut_tree, connected, normalize_edge, rotation_from_networkx
from py_rique.plane_hamiltonian import greedy_walk
from py_rique.rique_layout import find_pattern
from py_rique.spqr_tree import NodeKind, SpqrNode, SpqrTree, build_spqr

log = logging.getLogger("spqr_dp")

Path = Tuple[int, ...]


class PairKey(NamedTuple):
    first: int
    last: int


class EndKey(NamedTuple):
    end: int
    avoid: FrozenSet[int]


LKey = Union[PairKey, EndKey]

_NONE: FrozenSet[int] = frozenset()


class LMember(NamedTuple):
    path: Path
    embedding: RotationSystem


class LSet:
    """The stored sub-paths of one tree node, by key."""

    def __init__(self, node: int):
        self.node = node
        self.members: Dict[LKey, LMember] = {}

    def __contains__(self, key: LKey) -> bool:
        return key in self.members

    def __len__(self) -> int:
        return len(self.members)

    def path(self, key: LKey) -> Optional[Path]:
        member = self.members.get(key)
        return None if member is None else member.path

    def keys(self) -> List[LKey]:
        return list(self.members)


class StPath(NamedTuple):
    path: HamPath
    embedding: RotationSystem


class PlanarResult(NamedTuple):
    s: int
    t: int
    path: HamPath
    embedding: RotationSystem


class _RAux(NamedTuple):
    rotation: RotationSystem
    mid_child: Dict[int, int]
    child_mid: Dict[int, int]
    child_by_pair: Dict[Edge, int]
    markers: FrozenSet[int]


class BlockProgram:
    """The dynamic program for one biconnected block and a fixed `(s, t)`."""

    def __init__(self, tree: SpqrTree, s: int, t: int):
        if t not in tree.reference:
            raise ValueError(f"reference edge {tree.reference} is not incident to {t}")
        self.tree = tree
        self.s = s
        self.t = t
        self.lsets: Dict[int, LSet] = {}
        self._fresh = -1

    def solve(self) -> Optional[Path]:
        root = self.tree.node(self.tree.root)
        if not root.children:
            u, v = self.tree.reference
            return (self.s, self.t) if {u, v} == {self.s, self.t} else None
        for i in self.tree.postorder():
            if i == self.tree.root:
                continue
            self.lsets[i] = self._compute(self.tree.node(i))
        child = root.children[0]
        path = self.lsets[child].path(EndKey(self.t, _NONE))
        if path is None:
            # the path may also end by crossing the reference edge into t
            (u,) = [x for x in self.tree.reference if x != self.t]
            head = self.lsets[child].path(EndKey(u, frozenset([self.t])))
            if head is not None and find_pattern(head + (self.t,), self.tree.graph.edges) is None:
                path = head + (self.t,)
        log.debug(f"s={self.s} t={self.t}: root set {self.lsets[child].keys()} -> {path}")
        return path

    def _compute(self, node: SpqrNode) -> LSet:
        lset = LSet(node.id)
        if node.kind is NodeKind.Q:
            candidates = self._q_node(node)
        elif node.kind is NodeKind.P:
            candidates = self._p_node(node)
        elif node.kind is NodeKind.S:
            candidates = self._s_node(node)
        else:
            candidates = self._r_node(node)
        for key, path in candidates:
            if key in lset:
                continue
            member = self._admit(node, key, path)
            if member is not None:
                lset.members[key] = member
        log.debug(f"{node!r}: {len(lset)} sub-paths")
        return lset

    def _admit(self, node: SpqrNode, key: LKey, path: Path) -> Optional[LMember]:
        vertices = node.pert_vertices
        edges: Set[Edge] = set(node.pert_edges)
        if node.parent == self.tree.root:
            edges.add(self.tree.reference)
        if len(set(path)) != len(path):
            return None
        if any(normalize_edge(u, v) not in edges for u, v in zip(path, path[1:])):
            return None
        avoid: Sequence[int] = ()
        if isinstance(key, PairKey):
            if self.s in vertices or path[0] != key.first or path[-1] != key.last:
                return None
            if set(path) != vertices:
                return None
        else:
            if path[0] != self.s or path[-1] != key.end or not key.avoid <= vertices:
                return None
            if set(path) != vertices - key.avoid:
                return None
            avoid = sorted(key.avoid)
        if find_pattern(tuple(path) + tuple(avoid), edges) is not None:
            return None
        inside = set(path)
        embedding = rotation_for_order(path, [e for e in edges if e[0] in inside and e[1] in inside])
        assert embedding.is_plane(), f"{node!r}: embedding of {path} is not plane"
        assert is_strongly_one_sided(embedding, path, left_only=True), f"{node!r}: {path} is not 1-sided"
        return LMember(path, embedding)

    def _lookup(self, child: int, key: LKey) -> Optional[Path]:
        """Look `key` up in a child's set; a pair key whose first vertex is
        `s` means the end key with nothing avoided."""
        node = self.tree.node(child)
        if isinstance(key, PairKey) and self.s in node.pert_vertices:
            if key.first != self.s:
                return None
            key = EndKey(key.last, _NONE)
        return self.lsets[child].path(key)

    def _chain(self, pieces: Sequence[Tuple[int, LKey]], prefix: Path = ()) -> Optional[Path]:
        path = list(prefix)
        for child, key in pieces:
            piece = self._lookup(child, key)
            if piece is None:
                return None
            path.extend(piece[1:] if path else piece)
        return tuple(path)

    def _q_node(self, node: SpqrNode) -> List[Tuple[LKey, Path]]:
        a, b = node.poles
        if self.s not in (a, b):
            return [(PairKey(a, b), (a, b)), (PairKey(b, a), (b, a))]
        other = b if self.s == a else a
        return [(EndKey(self.s, frozenset([other])), (self.s,)), (EndKey(other, _NONE), (self.s, other))]

    def _p_node(self, node: SpqrNode) -> List[Tuple[LKey, Path]]:
        p, q = node.poles
        kids = node.children
        is_q = {c: self.tree.node(c).kind is NodeKind.Q for c in kids}
        nonq = [c for c in kids if not is_q[c]]
        out: List[Tuple[LKey, Path]] = []
        if self.s not in node.pert_vertices:
            if len(kids) == 2 and len(nonq) == 1:
                for x, y in ((p, q), (q, p)):
                    path = self._lookup(nonq[0], PairKey(x, y))
                    if path is not None:
                        out.append((PairKey(x, y), path))
            return out
        if self.s in (p, q):
            if len(kids) == 2 and len(nonq) == 1:
                lset = self.lsets[nonq[0]]
                out += [(key, member.path) for key, member in lset.members.items()]
            return out

        (c1,) = [c for c in kids if self.s in self.tree.node(c).pert_vertices]
        others = [c for c in kids if c != c1]
        other_nonq = [c for c in others if not is_q[c]]
        for x, y in ((p, q), (q, p)):
            if len(kids) == 2 and is_q[others[0]]:
                path = self._lookup(c1, EndKey(x, frozenset([y])))
                if path is not None:
                    out.append((EndKey(x, frozenset([y])), path))
                path = self._lookup(c1, EndKey(x, _NONE))
                if path is not None:
                    out.append((EndKey(x, _NONE), path))
                path = self._lookup(c1, EndKey(y, frozenset([x])))
                if path is not None:
                    out.append((EndKey(x, _NONE), path + (x,)))
            elif len(other_nonq) == 1 and len(kids) <= 3:
                path = self._chain([(c1, EndKey(y, frozenset([x]))), (other_nonq[0], PairKey(y, x))])
                if path is not None:
                    out.append((EndKey(x, _NONE), path))
        return out

    def _s_node(self, node: SpqrNode) -> List[Tuple[LKey, Path]]:
        chain = node.chain
        kids = node.children
        out: List[Tuple[LKey, Path]] = []
        if self.s not in node.pert_vertices:
            for ws, ks in ((chain, kids), (chain[::-1], kids[::-1])):
                path = self._chain([(c, PairKey(ws[j], ws[j + 1])) for j, c in enumerate(ks)])
                if path is not None:
                    out.append((PairKey(ws[0], ws[-1]), path))
            return out
        for ws, ks in ((chain, kids), (chain[::-1], kids[::-1])):
            y, x = ws[0], ws[-1]
            first = next(j for j, c in enumerate(ks) if self.s in self.tree.node(c).pert_vertices)
            for avoid in (_NONE, frozenset([y])):
                if self.s in avoid:
                    continue
                tail = [(c, PairKey(ws[j], ws[j + 1])) for j, c in enumerate(ks) if j > first]
                if first == 0:
                    pieces = [(ks[0], EndKey(ws[1], avoid))] + tail
                elif first == 1 and avoid and self.tree.node(ks[0]).kind is NodeKind.Q:
                    pieces = [(ks[1], EndKey(ws[2], _NONE))] + tail
                else:
                    continue
                path = self._chain(pieces)
                if path is not None:
                    out.append((EndKey(x, avoid), path))
        return out

    def _new_vertex(self) -> int:
        v = self._fresh
        self._fresh -= 1
        return v

    def _r_aux(self, node: SpqrNode) -> _RAux:
        """The skeleton embedding with every non-Q virtual edge subdivided
        and the parent edge replaced by two pendant markers."""
        p, q = node.poles
        skeleton = nx.Graph()
        skeleton.add_edges_from((e.u, e.v) for e in node.skeleton)
        skeleton.add_edge(p, q)
        planar, embedding = nx.check_planarity(skeleton)
        assert planar, f"{node!r}: skeleton is not planar"
        rot = rotation_from_networkx(embedding)
        rotations: Dict[int, List[int]] = {v: list(rot.rotation(v)) for v in rot.vertices}

        def replace(at: int, old: int, new: int) -> None:
            rotations[at][rotations[at].index(old)] = new

        mid_child: Dict[int, int] = {}
        child_mid: Dict[int, int] = {}
        child_by_pair: Dict[Edge, int] = {}
        for e in node.skeleton:
            child_by_pair[normalize_edge(e.u, e.v)] = e.child
            if self.tree.node(e.child).kind is NodeKind.Q:
                continue
            m = self._new_vertex()
            replace(e.u, e.v, m)
            replace(e.v, e.u, m)
            rotations[m] = [e.u, e.v]
            mid_child[m] = e.child
            child_mid[e.child] = m
        marker_p, marker_q = self._new_vertex(), self._new_vertex()
        replace(p, q, marker_p)
        replace(q, p, marker_q)
        rotations[marker_p] = [p]
        rotations[marker_q] = [q]
        return _RAux(
            RotationSystem(rotations), mid_child, child_mid, child_by_pair, frozenset([marker_p, marker_q])
        )

    def _expand(self, aux: _RAux, walk: Path, start: int, prefix: Path) -> Optional[Path]:
        """Replace the skeleton steps of `walk` after index `start` with
        sub-paths of the children."""
        pieces: List[Tuple[int, LKey]] = []
        i = start
        while i < len(walk) - 1:
            a, nxt = walk[i], walk[i + 1]
            if nxt in aux.mid_child:
                child, b = aux.mid_child[nxt], walk[i + 2]
                i += 2
            else:
                b = nxt
                child = aux.child_by_pair[normalize_edge(a, b)]
                i += 1
            pieces.append((child, PairKey(a, b)))
        return self._chain(pieces, prefix)

    def _r_node(self, node: SpqrNode) -> List[Tuple[LKey, Path]]:
        if self.s not in node.pert_vertices:
            return []
        aux = self._r_aux(node)
        p, q = node.poles
        skeleton_vertices = set(aux.rotation.vertices) - aux.markers
        out: List[Tuple[LKey, Path]] = []
        if self.s in skeleton_vertices:
            for x, y in ((p, q), (q, p)):
                if x == self.s:
                    continue
                for avoid in (_NONE, frozenset([y])):
                    if self.s in avoid:
                        continue
                    needed = skeleton_vertices - avoid
                    for walk in self._walks(aux.rotation, [self.s], aux.markers | avoid, x, needed):
                        path = self._expand(aux, walk, 0, (self.s,))
                        if path is not None:
                            out.append((EndKey(x, avoid), path))
            return out

        (nu,) = [c for c in node.children if self.s in self.tree.node(c).pert_vertices]
        m = aux.child_mid[nu]
        a1, b1 = aux.rotation.rotation(m)
        for variant in self._optional_edge_variants(aux.rotation, m, a1, b1):
            for x, y in ((p, q), (q, p)):
                for avoid in (_NONE, frozenset([y])):
                    needed = skeleton_vertices - avoid
                    for walk in self._walks(variant, [m], aux.markers | avoid, x, needed):
                        start, other = walk[1], (b1 if walk[1] == a1 else a1)
                        used = len(walk) > 2 and walk[2] == other
                        if any({u, v} == {a1, b1} for u, v in zip(walk[2:], walk[3:])):
                            continue
                        if used:
                            prefix = self._lookup(nu, EndKey(other, _NONE))
                            begin = 2
                        else:
                            prefix = self._lookup(nu, EndKey(start, frozenset([other])))
                            begin = 1
                        if prefix is None:
                            continue
                        path = self._expand(aux, walk, begin, prefix)
                        if path is not None:
                            out.append((EndKey(x, avoid), path))
        return out

    @staticmethod
    def _optional_edge_variants(rot: RotationSystem, m: int, a: int, b: int) -> List[RotationSystem]:
        """The auxiliary embedding without and with an edge `(a, b)` drawn
        parallel to the subdivided path `a, m, b`, on either side."""
        variants = [rot]
        for a_after in (True, False):
            rotations = {v: list(rot.rotation(v)) for v in rot.vertices}
            ia = rotations[a].index(m)
            rotations[a].insert(ia + 1 if a_after else ia, b)
            ib = rotations[b].index(m)
            rotations[b].insert(ib if a_after else ib + 1, a)
            variants.append(RotationSystem(rotations))
        return variants

    @staticmethod
    def _walks(
        rot: RotationSystem, starts: Sequence[int], blocked: FrozenSet[int], stop: int, needed: Set[int]
    ) -> Iterator[Path]:
        for embedding in (rot, rot.mirror()):
            for u in starts:
                for w in sorted(embedding.rotation(u)):
                    walk = greedy_walk(embedding, (u, w), blocked, stop_at=stop).path
                    if walk[-1] == stop and set(walk) == needed:
                        yield walk


def _glue(paths: Sequence[Path], embeddings: Sequence[RotationSystem]) -> RotationSystem:
    """Join block embeddings at their shared cutvertices.

    At cutvertex `c` the rotation of the next block is inserted right
    after the path predecessor of `c`, starting with its path successor.
    """
    rotations: Dict[int, List[int]] = {v: list(embeddings[0].rotation(v)) for v in embeddings[0].vertices}
    for prev_path, path, emb in zip(paths, paths[1:], embeddings[1:]):
        c = path[0]
        for v in emb.vertices:
            if v != c:
                rotations[v] = list(emb.rotation(v))
        around = rotations[c]
        i = around.index(prev_path[-2]) + 1
        rotations[c] = around[:i] + list(emb.rotation(c)) + around[i:]
    return RotationSystem(rotations)


def _solve_block(edges: FrozenSet[Edge], a: int, b: int, root_choice: int) -> Optional[Path]:
    if len(edges) == 1:
        (e,) = edges
        return (a, b) if set(e) == {a, b} else None
    vertices = sorted({x for e in edges for x in e})
    index = {v: i for i, v in enumerate(vertices)}
    local = Graph(len(vertices), [(index[u], index[v]) for u, v in edges])
    t = index[b]
    incident = sorted(e for e in local.edges if t in e)
    tree = build_spqr(local, incident[root_choice % len(incident)])
    path = BlockProgram(tree, index[a], t).solve()
    return None if path is None else tuple(vertices[i] for i in path)


def st_one_sided(g: Graph, s: int, t: int, root_choice: int = 0) -> Optional[StPath]:
    """Find a strongly 1-sided Hamiltonian path from `s` to `t` in some
    planar embedding of `g`.

    Args:
        g: A connected planar graph.
        s, t: The end vertices.
        root_choice: Which edge at the exit vertex roots each block's
            tree (taken modulo the number of such edges); the answer does
            not depend on it.

    Returns:
        The path with an embedding witnessing it, or `None`.

    Raises:
        ValueError: `s == t`, or `g` is disconnected or not planar.
    """
    if s == t:
        raise ValueError(f"end vertices must differ, got {s} twice")
    if not connected(g):
        errmsg = f"{g} is not connected"
        log.critical(errmsg)
        raise ValueError(errmsg)
    if not nx.check_planarity(g.to_networkx())[0]:
        errmsg = f"{g} is not planar"
        log.critical(errmsg)
        raise ValueError(errmsg)
    chain = block_cut_tree(g).st_chain(s, t)
    if chain is None:
        return None
    paths: List[Path] = []
    embeddings: List[RotationSystem] = []
    for block, a, b in chain:
        path = _solve_block(block.edges, a, b, root_choice)
        if path is None:
            return None
        paths.append(path)
        embeddings.append(rotation_for_order(path, block.edges))
    full = paths[0] + tuple(v for path in paths[1:] for v in path[1:])
    rot = _glue(paths, embeddings)
    assert rot.is_plane(), f"glued embedding of {full} is not plane"
    assert is_strongly_one_sided(rot, full, left_only=True), f"glued path {full} is not 1-sided"
    return StPath(HamPath(full), rot)


def planar_strongly_1sided(g: Graph) -> Optional[PlanarResult]:
    """Find end vertices, an embedding and a strongly 1-sided Hamiltonian
    path of `g`, trying `(s, t)` pairs in lexicographic order.

    Returns:
        The first success, or `None`; a non-planar graph has none.

    Raises:
        ValueError: `g` is disconnected.
    """
    if g.n == 1:
        return PlanarResult(0, 0, HamPath((0,)), RotationSystem({0: ()}))
    if not connected(g):
        errmsg = f"{g} is not connected"
        log.critical(errmsg)
        raise ValueError(errmsg)
    if not nx.check_planarity(g.to_networkx())[0]:
        return None
    for s, t in itertools.permutations(g.vertices(), 2):
        result = st_one_sided(g, s, t)
        if result is not None:
            log.info(f"{g}: s={s} t={t} path {result.path.vertices}")
            return PlanarResult(s, t, result.path, result.embedding)
    return None
