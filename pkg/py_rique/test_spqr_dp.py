import os
from typing import Tuple

import networkx as nx
import pytest
from py_rique.corpus import (
    connected_planar_graphs,
    hamiltonian_paths,
    one_sided_order,
    random_planar_graphs,
)
from py_rique.embedding_bridge import is_strongly_one_sided
from py_rique.graph import Graph, parse_graph
from py_rique.rique_layout import find_pattern
from py_rique.spqr_dp import planar_strongly_1sided, st_one_sided


FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def read_fixture(name: str) -> str:
    with open(os.path.join(FIXTURES, name), "r") as fin:
        return fin.read()


def _check_planar(g: Graph) -> Tuple[bool, str]:
    """Compare the decomposition search with brute force over Hamiltonian
    paths, and re-verify any witness it returns.

    Returns:
        Tuple[bool, str]
        The bool indicates whether this check passed.
        The str is a comment for an assertion failure
    """
    result = planar_strongly_1sided(g)
    expected = one_sided_order(g)
    if (result is None) != (expected is None):
        return (False, f"{g}: search gave {result}, brute force gave {expected}")
    if result is None:
        return (True, "")
    path = result.path.vertices
    if sorted(path) != list(g.vertices()) or (path[0], path[-1]) != (result.s, result.t):
        return (False, f"{g}: {path} is not a Hamiltonian path from {result.s} to {result.t}")
    if find_pattern(path, g.edges) is not None:
        return (False, f"{g}: the single page along {path} has the forbidden triple")
    if g.n > 1:
        if result.embedding.edges() != g.edges or not result.embedding.is_plane():
            return (False, f"{g}: witness embedding is wrong")
        if not is_strongly_one_sided(result.embedding, path, left_only=True):
            return (False, f"{g}: {path} is not strongly 1-sided in the witness")
    return (True, "")


def _check_pairs(g: Graph, root_choices: int = 1) -> Tuple[bool, str]:
    """Every `(s, t)` pair against brute force.

    Returns:
        Tuple[bool, str]
        The bool indicates whether this check passed.
        The str is a comment for an assertion failure
    """
    ends = {(p[0], p[-1]) for p in hamiltonian_paths(g) if find_pattern(p, g.edges) is None}
    for s in g.vertices():
        for t in g.vertices():
            if s == t:
                continue
            for choice in range(root_choices):
                found = st_one_sided(g, s, t, root_choice=choice) is not None
                if found != ((s, t) in ends):
                    return (False, f"{g}: s={s} t={t} root choice {choice} found={found}")
    return (True, "")


@pytest.mark.depends(on=["spqr_shapes", "spqr_atlas"])
def test_small_graphs():
    for g in connected_planar_graphs(6):
        result = _check_planar(g)
        assert result[0], result[1]


@pytest.mark.depends(on=["spqr_shapes", "spqr_atlas"])
def test_every_end_pair():
    for g in connected_planar_graphs(5, 2):
        result = _check_pairs(g, root_choices=3)
        assert result[0], result[1]


@pytest.mark.depends(on=["spqr_shapes", "spqr_atlas"])
def test_seven_vertices():
    for g in connected_planar_graphs(7, 7):
        result = _check_planar(g)
        assert result[0], result[1]


@pytest.mark.depends(on=["spqr_shapes", "spqr_atlas"])
def test_random_planar_graphs():
    for g in random_planar_graphs(8, 100, seed=8) + random_planar_graphs(9, 100, seed=9):
        result = _check_planar(g)
        assert result[0], result[1]


def test_block_chains():
    two_triangles = parse_graph(read_fixture("two_triangles.graph"))
    # both ends in the same end block
    assert st_one_sided(two_triangles, 0, 1) is None
    result = st_one_sided(two_triangles, 0, 4)
    assert result is not None
    assert result.path.vertices[0] == 0 and result.path.vertices[-1] == 4
    assert result.embedding.is_plane()

    star = parse_graph(read_fixture("star.graph"))
    assert planar_strongly_1sided(star) is None
    assert st_one_sided(star, 1, 2) is None

    edge = st_one_sided(Graph(2, [(0, 1)]), 1, 0)
    assert edge is not None and edge.path.vertices == (1, 0)


def test_trivial_and_invalid_inputs():
    single = planar_strongly_1sided(Graph(1))
    assert single is not None and single.path.vertices == (0,)
    with pytest.raises(ValueError):
        planar_strongly_1sided(Graph(3, [(0, 1)]))
    assert planar_strongly_1sided(Graph.from_networkx(nx.complete_graph(5))) is None

    k4 = Graph.from_networkx(nx.complete_graph(4))
    with pytest.raises(ValueError):
        st_one_sided(k4, 2, 2)
    with pytest.raises(ValueError):
        st_one_sided(Graph(3, [(0, 1)]), 0, 1)
    with pytest.raises(ValueError):
        st_one_sided(Graph.from_networkx(nx.complete_graph(5)), 0, 1)


def test_path_through_reference_edge():
    # the root edge of the decomposition may be the last spine edge
    k3 = Graph(3, [(0, 1), (0, 2), (1, 2)])
    for choice in range(3):
        result = st_one_sided(k3, 0, 1, root_choice=choice)
        assert result is not None, f"root choice {choice}"
        assert result.path.vertices == (0, 2, 1)
        assert result.embedding.is_plane()

    g = Graph(7, [(0, 1), (0, 4), (1, 2), (1, 4), (2, 3), (3, 6), (4, 5)])
    assert find_pattern((5, 4, 0, 1, 2, 3, 6), g.edges) is None
    result = _check_planar(g)
    assert result[0], result[1]
    found = st_one_sided(g, 5, 6)
    assert found is not None and found.path.vertices == (5, 4, 0, 1, 2, 3, 6)
