"""
Graph collections and brute-force oracles for cross-checking the
algorithms.

Small graphs come from the networkx atlas (every graph up to seven
vertices, one per isomorphism class) or from exhaustive enumeration of
labelled graphs; larger ones are sampled with a seeded generator so every
run sees the same corpus.
"""

import itertools
import logging
import random
from typing import Iterator, List, Optional, Tuple

import networkx as nx

from py_rique.embedding_bridge import is_strongly_one_sided
from py_rique.graph import Graph, RotationSystem, is_planar
from py_rique.rique_layout import find_pattern

log = logging.getLogger("corpus")

ATLAS_MAX_N = 7


def atlas_graphs(max_n: int = ATLAS_MAX_N, min_n: int = 1) -> Iterator[Graph]:
    """Yield one graph per isomorphism class with `min_n .. max_n` vertices.

    Raises:
        ValueError: `max_n` exceeds the atlas.
    """
    if max_n > ATLAS_MAX_N:
        raise ValueError(f"the graph atlas stops at {ATLAS_MAX_N} vertices")
    for h in nx.graph_atlas_g():
        if min_n <= h.number_of_nodes() <= max_n:
            yield Graph.from_networkx(h)


def connected_planar_graphs(max_n: int = ATLAS_MAX_N, min_n: int = 1) -> Iterator[Graph]:
    for g in atlas_graphs(max_n, min_n):
        if nx.is_connected(g.to_networkx()) and is_planar(g).planar:
            yield g


def all_labelled_graphs(n: int) -> Iterator[Graph]:
    """Yield all `2^(n choose 2)` graphs on the vertices `0 .. n-1`."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [pair for bit, pair in enumerate(pairs) if mask >> bit & 1])


def random_graph(n: int, rng: random.Random, m: Optional[int] = None) -> Graph:
    total = n * (n - 1) // 2
    if m is None:
        m = rng.randint(0, total)
    return Graph.from_networkx(nx.gnm_random_graph(n, min(m, total), seed=rng.randrange(2**32)))


def random_planar_graphs(n: int, count: int, seed: int, connected: bool = True) -> List[Graph]:
    """Sample `count` planar graphs on `n` vertices with `n-1 .. 3n-6` edges."""
    rng = random.Random(seed)
    graphs: List[Graph] = []
    high = max(n - 1, 3 * n - 6)
    while len(graphs) < count:
        g = random_graph(n, rng, rng.randint(n - 1, high))
        if connected and not nx.is_connected(g.to_networkx()):
            continue
        if is_planar(g).planar:
            graphs.append(g)
    log.debug(f"{count} planar graphs on {n} vertices, seed {seed}")
    return graphs


def random_order(n: int, rng: random.Random) -> List[int]:
    order = list(range(n))
    rng.shuffle(order)
    return order


def hamiltonian_paths(g: Graph) -> Iterator[Tuple[int, ...]]:
    """Yield every Hamiltonian path of `g`, once per direction."""
    if g.n == 0:
        return
    visited = [False] * g.n
    path: List[int] = []

    def extend(v: int) -> Iterator[Tuple[int, ...]]:
        visited[v] = True
        path.append(v)
        if len(path) == g.n:
            yield tuple(path)
        else:
            for w in g.neighbors(v):
                if not visited[w]:
                    yield from extend(w)
        path.pop()
        visited[v] = False

    for s in g.vertices():
        yield from extend(s)


def one_sided_order(g: Graph) -> Optional[Tuple[int, ...]]:
    """The first Hamiltonian path whose single page is free of the
    forbidden triple, by brute force."""
    for path in hamiltonian_paths(g):
        if find_pattern(path, g.edges) is None:
            return path
    return None


def one_sided_paths(rot: RotationSystem, left_only: bool = False) -> Iterator[Tuple[int, ...]]:
    """Yield every strongly 1-sided Hamiltonian path of a fixed embedding
    on the vertices `0 .. n-1`."""
    g = Graph(len(rot.vertices), rot.edges())
    for path in hamiltonian_paths(g):
        if is_strongly_one_sided(rot, path, left_only):
            yield path


def spine_complete(g: Graph) -> Optional[Tuple[int, ...]]:
    """An order under which `g` plus its missing spine edges is still a
    single pattern-free page, by trying all orders."""
    for order in itertools.permutations(g.vertices()):
        if find_pattern(order, g.edges) is None:
            return order
    return None
