"""
From single-page rique orders to plane embeddings and back.

A Hamiltonian path `v_1 .. v_n` of a plane graph is strongly 1-sided
when every non-path edge `(v_i, v_j)`, `1 < i < j`, leaves `v_i` on the
same side of the path: between `(v_{i-1}, v_i)` and `(v_i, v_{i+1})` in
clockwise order. An order whose single page is free of the forbidden
triple, and which has all spine edges, yields such an embedding; the
converse holds as well.
"""

import enum
import logging
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from py_rique.graph import Edge, Graph, RotationSystem, normalize_edge
from py_rique.rique_layout import EdgeKind, PatternError, classify_page, find_pattern, positions

log = logging.getLogger("embedding_bridge")


class PathError(ValueError):
    """A path is not Hamiltonian, or a spine edge is missing."""


@enum.unique
class Chirality(enum.Enum):
    ORIGINAL = "original"
    MIRRORED = "mirrored"


class HamPath(NamedTuple):
    vertices: Tuple[int, ...]

    def spine_edges(self) -> List[Edge]:
        return [normalize_edge(u, v) for u, v in zip(self.vertices, self.vertices[1:])]


def spine_edges(order: Sequence[int]) -> List[Edge]:
    return [normalize_edge(u, v) for u, v in zip(order, order[1:])]


def rotation_for_order(order: Sequence[int], edges: Iterable[Tuple[int, int]]) -> RotationSystem:
    """Build the counterclockwise rotation at every vertex of `order`.

    Around `v_i`: the spine edge to `v_{i+1}`, outgoing head-edges by
    increasing target, outgoing tail-edges by decreasing target, incoming
    head-edges by increasing source, the spine edge to `v_{i-1}`, and
    incoming tail-edges by increasing source.

    Vertex ids may be arbitrary; the edges must include every spine edge.

    Raises:
        PatternError: The single page contains the forbidden triple.
    """
    edges = [normalize_edge(u, v) for u, v in edges]
    labels = classify_page(order, edges)
    pos = positions(order)
    spine = set(spine_edges(order))
    out_head: Dict[int, List[int]] = {v: [] for v in order}
    out_tail: Dict[int, List[int]] = {v: [] for v in order}
    in_head: Dict[int, List[int]] = {v: [] for v in order}
    in_tail: Dict[int, List[int]] = {v: [] for v in order}
    for e in edges:
        if e in spine:
            continue
        left, right = sorted(e, key=pos.__getitem__)
        if labels[e] is EdgeKind.HEAD:
            out_head[left].append(right)
            in_head[right].append(left)
        else:
            out_tail[left].append(right)
            in_tail[right].append(left)

    rotations: Dict[int, List[int]] = {}
    last = len(order) - 1
    for i, v in enumerate(order):
        rot: List[int] = []
        if i < last:
            rot.append(order[i + 1])
        rot += sorted(out_head[v], key=pos.__getitem__)
        rot += sorted(out_tail[v], key=pos.__getitem__, reverse=True)
        rot += sorted(in_head[v], key=pos.__getitem__)
        if i > 0:
            rot.append(order[i - 1])
        rot += sorted(in_tail[v], key=pos.__getitem__)
        rotations[v] = rot
    return RotationSystem(rotations)


def order_to_embedding(g: Graph, order: Sequence[int]) -> RotationSystem:
    """Embed `g` so that `order` is a strongly 1-sided Hamiltonian path.

    Raises:
        PathError: `order` is not a permutation of the vertices, or a
            spine edge is missing from `g`.
        PatternError: The single page `(order, E)` contains the
            forbidden triple.
    """
    if sorted(order) != list(g.vertices()):
        raise PathError(f"order {list(order)} is not a permutation of the vertices")
    for u, v in spine_edges(order):
        if not g.has_edge(u, v):
            raise PathError(f"spine edge ({u}, {v}) is missing")
    return rotation_for_order(order, g.edges)


def _check_path(rot: RotationSystem, path: Sequence[int]) -> None:
    if sorted(path) != rot.vertices:
        raise PathError(f"path {list(path)} does not visit every vertex exactly once")
    for u, v in zip(path, path[1:]):
        if not rot.has_edge(u, v):
            raise PathError(f"spine edge ({u}, {v}) is not in the embedding")


def _left_side_holds(rot: RotationSystem, path: Sequence[int]) -> bool:
    pos = positions(path)
    for i in range(1, len(path) - 1):
        v, prev, nxt = path[i], path[i - 1], path[i + 1]
        interval = set()
        w = rot.next_cw(v, prev)
        while w != nxt:
            interval.add(w)
            w = rot.next_cw(v, w)
        for w in rot.rotation(v):
            if pos[w] > i + 1 and w not in interval:
                return False
    return True


def one_sided_chirality(
    rot: RotationSystem, path: Sequence[int], left_only: bool = False
) -> Optional[Chirality]:
    """Return the chirality under which `path` is strongly 1-sided.

    The original rotation is tried first, then its mirror unless
    `left_only` is set.

    Raises:
        PathError: `path` is not a Hamiltonian path of the embedding.
    """
    _check_path(rot, path)
    if _left_side_holds(rot, path):
        return Chirality.ORIGINAL
    if not left_only and _left_side_holds(rot.mirror(), path):
        return Chirality.MIRRORED
    return None


def is_strongly_one_sided(rot: RotationSystem, path: Sequence[int], left_only: bool = False) -> bool:
    return one_sided_chirality(rot, path, left_only) is not None


def subhamiltonian_completion(g: Graph, order: Sequence[int]) -> Graph:
    """Add the missing spine edges of `order` to `g`.

    Raises:
        PatternError: The single page `(order, E)` contains the
            forbidden triple.
    """
    witness = find_pattern(order, g.edges)
    if witness is not None:
        raise PatternError(0, witness)
    h = g.with_edges(spine_edges(order))
    assert find_pattern(order, h.edges) is None, "spine edges introduced the forbidden triple"
    log.debug(f"{g}: added {h.m - g.m} spine edges")
    return h
