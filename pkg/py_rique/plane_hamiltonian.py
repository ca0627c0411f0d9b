"""
Strongly 1-sided Hamiltonian paths in a fixed plane embedding.

Once the first edge of such a path is fixed, every further vertex is
forced: at `v_i`, scan the rotation counterclockwise starting after
`(v_{i-1}, v_i)` and move to the first unvisited neighbour. Trying every
directed start edge under both chiralities decides the question in
quadratic time.
"""

import logging
from typing import AbstractSet, NamedTuple, Optional, Tuple

import networkx as nx

from py_rique.embedding_bridge import Chirality, HamPath, is_strongly_one_sided
from py_rique.graph import Graph, RotationSystem, is_planar
from py_rique.rique_layout import LinearLayout

log = logging.getLogger("plane_hamiltonian")


class Walk(NamedTuple):
    path: Tuple[int, ...]
    steps: int


def greedy_walk(
    rot: RotationSystem,
    start: Tuple[int, int],
    blocked: AbstractSet[int] = frozenset(),
    stop_at: Optional[int] = None,
) -> Walk:
    """Extend the start edge greedily until no unvisited neighbour is left.

    Args:
        rot: The embedding, in the chirality to walk.
        start: The directed first edge `(v_1, v_2)`.
        blocked: Vertices that may never be entered; meeting one as the
            first unvisited neighbour ends the walk.
        stop_at: End the walk on arriving at this vertex.

    Returns:
        The vertices visited and the number of rotation entries scanned.
    """
    u, w = start
    if w in blocked:
        return Walk((u,), 0)
    path = [u, w]
    visited = {u, w}
    steps = 0
    prev, cur = u, w
    while cur != stop_at:
        nxt = None
        candidate = prev
        for _ in range(rot.degree(cur) - 1):
            candidate = rot.next_ccw(cur, candidate)
            steps += 1
            if candidate in visited:
                continue
            if candidate not in blocked:
                nxt = candidate
            break
        if nxt is None:
            break
        path.append(nxt)
        visited.add(nxt)
        prev, cur = cur, nxt
    return Walk(tuple(path), steps)


def _check_plane(rot: RotationSystem) -> None:
    if not rot.is_plane():
        errmsg = "rotation system is not plane"
        log.critical(errmsg)
        raise ValueError(errmsg)
    vertices = rot.vertices
    if not vertices:
        raise ValueError("empty embedding")
    h = nx.Graph()
    h.add_nodes_from(vertices)
    h.add_edges_from(rot.edges())
    if not nx.is_connected(h):
        errmsg = "embedded graph is not connected"
        log.critical(errmsg)
        raise ValueError(errmsg)


def plane_strongly_1sided(rot: RotationSystem, left_only: bool = False) -> Optional[HamPath]:
    """Find a strongly 1-sided Hamiltonian path of a connected plane graph.

    Directed start edges are tried in lexicographic order, each under the
    given chirality and then its mirror (unless `left_only` is set).

    Raises:
        ValueError: `rot` is not plane or not connected.
    """
    _check_plane(rot)
    vertices = rot.vertices
    if len(vertices) == 1:
        return HamPath((vertices[0],))
    embeddings = [(Chirality.ORIGINAL, rot)]
    if not left_only:
        embeddings.append((Chirality.MIRRORED, rot.mirror()))
    starts = sorted((u, w) for u in vertices for w in rot.rotation(u))
    for start in starts:
        for chirality, embedding in embeddings:
            walk = greedy_walk(embedding, start)
            if len(walk.path) < len(vertices):
                continue
            if is_strongly_one_sided(embedding, walk.path, left_only=True):
                log.debug(f"start {start}, {chirality.value}: {walk.path} in {walk.steps} steps")
                return HamPath(walk.path)
    return None


class MaximalPlanarResult(NamedTuple):
    rique1: bool
    layout: Optional[LinearLayout]


def maximal_planar_rique1(g: Graph) -> MaximalPlanarResult:
    """Decide whether a maximal planar graph has rique-number 1.

    Its embedding is unique up to mirroring, so a single plane test
    (covering both chiralities) decides the question.

    Raises:
        ValueError: `g` is not maximal planar.
    """
    planar, embedding = is_planar(g)
    if g.n < 3 or not planar or g.m != 3 * g.n - 6:
        errmsg = f"{g} is not maximal planar"
        log.critical(errmsg)
        raise ValueError(errmsg)
    assert embedding is not None
    path = plane_strongly_1sided(embedding)
    if path is None:
        return MaximalPlanarResult(False, None)
    return MaximalPlanarResult(True, LinearLayout(path.vertices, [g.edges]))
