"""
Graphs, rotation systems and block-cut trees.

Vertices are dense integer ids `0 .. n-1` in every file format. A
`RotationSystem` lists, for every vertex, its neighbours in
counterclockwise order; mirroring an embedding reverses every rotation.

File formats
------------
Graph file:
```
# K4
4
0 1,0 2,0 3,1 2,1 3,2 3
```
The header and the edge list may also be separated by `;` on a single
line, e.g. `4; 0 1,0 2`.

Embedding file: one line per vertex, the neighbours of vertex `i` in
counterclockwise order on line `i`.
"""

import logging
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import networkx as nx

# undirected, smaller endpoint first
Edge = Tuple[int, int]

log = logging.getLogger("graph")


class GraphFormatError(ValueError):
    """A graph file could not be parsed."""


class RotationFormatError(ValueError):
    """An embedding file does not describe a rotation system of the graph."""


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


class Graph:
    """
    A simple undirected graph on the vertices `0 .. n-1`.

    Instances are immutable and hashable; two graphs are equal when
    they have the same vertex count and the same edge set.

    Raises:
        ValueError: A self-loop, a duplicate edge or an out of range
            vertex id was given.

    Example
    -------
    ```
    k4 = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    assert k4.m == 6 and k4.degree(0) == 3
    ```
    """

    __slots__ = ("_n", "_edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"negative vertex count {n}")
        seen: Set[Edge] = set()
        adj: List[List[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has a vertex outside [0, {n})")
            e = normalize_edge(u, v)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            adj[u].append(v)
            adj[v].append(u)
        self._n = n
        self._edges: FrozenSet[Edge] = frozenset(seen)
        self._adj: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> FrozenSet[Edge]:
        return self._edges

    def sorted_edges(self) -> List[Edge]:
        return sorted(self._edges)

    def vertices(self) -> range:
        return range(self._n)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self._edges

    def is_complete(self) -> bool:
        return self.m == self._n * (self._n - 1) // 2

    def with_edges(self, extra: Iterable[Tuple[int, int]]) -> "Graph":
        """Return a supergraph with the missing edges of `extra` added."""
        edges = set(self._edges)
        edges.update(normalize_edge(u, v) for u, v in extra)
        return Graph(self._n, edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self._n))
        g.add_edges_from(self._edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """Convert a networkx graph whose nodes are `0 .. n-1`."""
        n = g.number_of_nodes()
        if set(g.nodes) != set(range(n)):
            raise ValueError("networkx graph nodes must be the integers 0 .. n-1")
        return cls(n, (normalize_edge(u, v) for u, v in g.edges))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"


def parse_graph(text: str) -> Graph:
    """Parse the edge-list graph format.

    Args:
        text: Contents of a graph file.

    Returns:
        The described graph.

    Raises:
        GraphFormatError: The header is missing or not an integer, an
            edge entry is malformed, or the edges do not form a simple
            graph on `0 .. n-1`.
    """
    lines = [(no, _strip_comment(line)) for no, line in enumerate(text.splitlines(), 1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines:
        raise GraphFormatError("empty graph file")

    header_no, header = lines[0]
    body = [(no, line) for no, line in lines[1:]]
    if ";" in header:
        header, rest = header.split(";", 1)
        body.insert(0, (header_no, rest))

    try:
        n = int(header.strip())
    except ValueError:
        raise GraphFormatError(f"line {header_no}: vertex count expected, got '{header}'")

    edges: List[Edge] = []
    for no, line in body:
        for entry in line.split(","):
            entry = entry.strip()
            if not entry:
                continue
            parts = entry.split()
            if len(parts) != 2:
                raise GraphFormatError(f"line {no}: malformed edge '{entry}'")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(f"line {no}: malformed edge '{entry}'")
            edges.append((u, v))

    try:
        return Graph(n, edges)
    except ValueError as err:
        raise GraphFormatError(str(err)) from err


def serialize_graph(g: Graph) -> str:
    body = ",".join(f"{u} {v}" for u, v in g.sorted_edges())
    return f"{g.n}\n{body}\n"


class RotationSystem:
    """
    A combinatorial embedding: for each vertex, the cyclic
    counterclockwise order of its neighbours.

    Vertex labels may be arbitrary integers, so embeddings of
    subgraphs keep the ids of the host graph.

    Raises:
        ValueError: A neighbour is listed twice, or an edge appears in
            the rotation of only one of its endpoints.
    """

    __slots__ = ("_rot", "_index")

    def __init__(self, rotations: Mapping[int, Sequence[int]]):
        rot: Dict[int, Tuple[int, ...]] = {v: tuple(nbrs) for v, nbrs in rotations.items()}
        index: Dict[int, Dict[int, int]] = {}
        for v, nbrs in rot.items():
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"vertex {v} lists a neighbour twice")
            index[v] = {w: i for i, w in enumerate(nbrs)}
        for v, nbrs in rot.items():
            for w in nbrs:
                if w == v:
                    raise ValueError(f"self-loop at vertex {v}")
                if w not in index or v not in index[w]:
                    raise ValueError(f"edge ({v}, {w}) is missing from the rotation of {w}")
        self._rot = rot
        self._index = index

    @property
    def vertices(self) -> List[int]:
        return sorted(self._rot)

    def rotation(self, v: int) -> Tuple[int, ...]:
        return self._rot[v]

    def degree(self, v: int) -> int:
        return len(self._rot[v])

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._index and v in self._index[u]

    def edges(self) -> FrozenSet[Edge]:
        return frozenset(normalize_edge(v, w) for v, nbrs in self._rot.items() for w in nbrs)

    def next_ccw(self, v: int, u: int) -> int:
        """Return the neighbour following `u` counterclockwise around `v`."""
        nbrs = self._rot[v]
        return nbrs[(self._index[v][u] + 1) % len(nbrs)]

    def next_cw(self, v: int, u: int) -> int:
        """Return the neighbour following `u` clockwise around `v`."""
        nbrs = self._rot[v]
        return nbrs[(self._index[v][u] - 1) % len(nbrs)]

    def mirror(self) -> "RotationSystem":
        return RotationSystem({v: tuple(reversed(nbrs)) for v, nbrs in self._rot.items()})

    def to_networkx(self) -> nx.PlanarEmbedding:
        """Return the embedding as a networkx one, which lists neighbours clockwise."""
        emb = nx.PlanarEmbedding()
        emb.add_nodes_from(self._rot)
        emb.set_data({v: list(reversed(nbrs)) for v, nbrs in self._rot.items()})
        return emb

    def faces(self) -> List[List[Tuple[int, int]]]:
        """Trace all faces; each face is a cyclic list of darts `(u, v)`."""
        emb = self.to_networkx()
        marked: Set[Tuple[int, int]] = set()
        faces: List[List[Tuple[int, int]]] = []
        for u, v in sorted((v, w) for v, nbrs in self._rot.items() for w in nbrs):
            if (u, v) in marked:
                continue
            nodes = emb.traverse_face(u, v, mark_half_edges=marked)
            faces.append(list(zip(nodes, nodes[1:] + nodes[:1])))
        return faces

    def is_plane(self) -> bool:
        """Euler check, per connected component with at least one edge."""
        try:
            self.to_networkx().check_structure()
        except nx.NetworkXException as err:
            log.debug(f"{err}")
            return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RotationSystem):
            return NotImplemented
        return self._rot == other._rot

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._rot.items())))

    def __repr__(self) -> str:
        return f"RotationSystem({self._rot})"


def parse_rotation(text: str, g: Graph) -> RotationSystem:
    """Parse an embedding file for the graph `g`.

    Lines starting with `#` are skipped; the remaining lines are the
    rotations of vertices `0 .. n-1` in order. An isolated vertex has an
    empty line.

    Raises:
        RotationFormatError: Wrong number of lines, a malformed id, a
            listed non-neighbour, or a missing neighbour.
    """
    rows = [line for line in text.splitlines() if not line.lstrip().startswith("#")]
    rows = [_strip_comment(line) for line in rows]
    while len(rows) > g.n and not rows[-1]:
        rows.pop()
    if len(rows) != g.n:
        raise RotationFormatError(f"expected {g.n} rotation lines, found {len(rows)}")

    rotations: Dict[int, Tuple[int, ...]] = {}
    for v, row in enumerate(rows):
        try:
            nbrs = tuple(int(tok) for tok in row.split())
        except ValueError:
            raise RotationFormatError(f"vertex {v}: malformed rotation '{row}'")
        for w in nbrs:
            if not (0 <= w < g.n) or not g.has_edge(v, w):
                raise RotationFormatError(f"vertex {v}: {w} is not a neighbour")
        if sorted(nbrs) != list(g.neighbors(v)):
            raise RotationFormatError(
                f"vertex {v}: rotation {list(nbrs)} does not list the neighbours "
                f"{list(g.neighbors(v))} exactly once"
            )
        rotations[v] = nbrs
    return RotationSystem(rotations)


def serialize_rotation(rot: RotationSystem) -> str:
    return "".join(" ".join(str(w) for w in rot.rotation(v)) + "\n" for v in rot.vertices)


def rotation_from_networkx(embedding: nx.PlanarEmbedding) -> RotationSystem:
    """Convert a networkx planar embedding (clockwise) to a counterclockwise one."""
    return RotationSystem(
        {v: tuple(reversed(list(embedding.neighbors_cw_order(v)))) for v in embedding.nodes}
    )


class Planarity(NamedTuple):
    planar: bool
    embedding: Optional[RotationSystem]


def is_planar(g: Graph) -> Planarity:
    """Test planarity; planar graphs come with a witness embedding."""
    planar, embedding = nx.check_planarity(g.to_networkx())
    if not planar:
        return Planarity(False, None)
    return Planarity(True, rotation_from_networkx(embedding))


class Block(NamedTuple):
    vertices: FrozenSet[int]
    edges: FrozenSet[Edge]


class BlockCutTree:
    """
    The block-cut tree of a connected graph.

    Tree nodes are `("B", i)` for `blocks[i]` and `("C", v)` for a
    cutvertex `v`; a block is adjacent to the cutvertices it contains.
    """

    def __init__(self, blocks: Sequence[Block], cutvertices: Iterable[int]):
        self.blocks: Tuple[Block, ...] = tuple(blocks)
        self.cutvertices: Tuple[int, ...] = tuple(sorted(cutvertices))
        self.tree = nx.Graph()
        self.tree.add_nodes_from(("B", i) for i in range(len(self.blocks)))
        for c in self.cutvertices:
            for i, block in enumerate(self.blocks):
                if c in block.vertices:
                    self.tree.add_edge(("C", c), ("B", i))

    def is_path(self) -> bool:
        return all(d <= 2 for _, d in self.tree.degree)

    def blocks_of(self, v: int) -> List[int]:
        return [i for i, block in enumerate(self.blocks) if v in block.vertices]

    def st_chain(self, s: int, t: int) -> Optional[List[Tuple[Block, int, int]]]:
        """Return the blocks `B_1 .. B_{k+1}` with their entry and exit
        vertices `(c_{i-1}, c_i)`, where `c_0 = s` and `c_{k+1} = t`.

        Returns `None` unless the tree is a path whose end blocks contain
        `s` and `t`, neither of which is a cutvertex.
        """
        if not self.is_path() or s in self.cutvertices or t in self.cutvertices:
            return None
        (bs,) = self.blocks_of(s)
        (bt,) = self.blocks_of(t)
        if len(self.blocks) > 1 and (
            self.tree.degree(("B", bs)) != 1 or self.tree.degree(("B", bt)) != 1
        ):
            return None
        nodes = nx.shortest_path(self.tree, ("B", bs), ("B", bt))
        if len(nodes) != self.tree.number_of_nodes():
            return None
        chain: List[Tuple[Block, int, int]] = []
        entry = s
        for pos in range(0, len(nodes), 2):
            exit_ = nodes[pos + 1][1] if pos + 1 < len(nodes) else t
            chain.append((self.blocks[nodes[pos][1]], entry, exit_))
            entry = exit_
        return chain


def block_cut_tree(g: Graph) -> BlockCutTree:
    """Compute the block-cut tree of a connected graph.

    Raises:
        ValueError: `g` is empty or disconnected.
    """
    nxg = g.to_networkx()
    if g.n == 0 or not nx.is_connected(nxg):
        errmsg = "block-cut tree needs a connected, non-empty graph"
        log.critical(errmsg)
        raise ValueError(errmsg)
    if g.m == 0:
        return BlockCutTree([Block(frozenset([0]), frozenset())], [])

    blocks = []
    for comp_edges in nx.biconnected_component_edges(nxg):
        edges = frozenset(normalize_edge(u, v) for u, v in comp_edges)
        vertices = frozenset(v for e in edges for v in e)
        blocks.append(Block(vertices, edges))
    blocks.sort(key=lambda b: (min(b.vertices), sorted(b.edges)))
    return BlockCutTree(blocks, nx.articulation_points(nxg))


def connected(g: Graph) -> bool:
    return g.n > 0 and nx.is_connected(g.to_networkx())
