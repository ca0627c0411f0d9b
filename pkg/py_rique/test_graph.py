import os
import random
from typing import Tuple

import networkx as nx
import pytest
from py_rique.corpus import random_graph
from py_rique.graph import (
    Graph,
    GraphFormatError,
    RotationFormatError,
    RotationSystem,
    block_cut_tree,
    is_planar,
    parse_graph,
    parse_rotation,
    rotation_from_networkx,
    serialize_graph,
    serialize_rotation,
)


FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def read_fixture(name: str) -> str:
    with open(os.path.join(FIXTURES, name), "r") as fin:
        return fin.read()


k4 = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])

# counterclockwise rotations of a plane K4
k4_plane = RotationSystem({0: [1, 2, 3], 1: [0, 3, 2], 2: [0, 1, 3], 3: [0, 2, 1]})

# every rotation sorted: only two faces
k4_twisted = RotationSystem({0: [1, 2, 3], 1: [0, 2, 3], 2: [0, 1, 3], 3: [0, 1, 2]})


def test_parse_graph():
    g = parse_graph(read_fixture("k4.graph"))
    assert g == k4
    assert g.is_complete()
    assert g.degree(0) == 3

    star = parse_graph(read_fixture("star.graph"))
    assert star.n == 4 and star.m == 3
    assert star.neighbors(0) == (1, 2, 3)


def test_parse_graph_single_line():
    g = parse_graph("4; 0 1,0 2")
    assert g.n == 4
    assert g.sorted_edges() == [(0, 1), (0, 2)]
    assert parse_graph(serialize_graph(k4)) == k4
    assert parse_graph("4; 0 1,0 2,0 3,1 2,1 3,2 3") == k4
    single = parse_graph("1;")
    assert single.n == 1 and single.m == 0


@pytest.mark.parametrize(
    "text",
    [
        "",
        "# only a comment\n",
        "four\n0 1",
        "3\n0 0",
        "3\n0 1,1 0",
        "3; 0 1,0 1",
        "3\n0 5",
        "3\n0 1 2",
        "3\n0 x",
    ],
)
def test_parse_graph_errors(text: str):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_graph_contract():
    with pytest.raises(ValueError):
        Graph(-1)
    with pytest.raises(ValueError):
        Graph(2, [(0, 1), (1, 0)])
    assert Graph(3, [(2, 0)]).edges == frozenset([(0, 2)])
    assert k4.with_edges([(0, 1)]) == k4
    assert Graph.from_networkx(nx.complete_graph(4)) == k4


def test_faces():
    assert len(k4_plane.faces()) == 4
    assert k4_plane.is_plane()
    assert k4_plane.mirror().is_plane()
    assert k4_plane.mirror().mirror() == k4_plane

    assert len(k4_twisted.faces()) == 2
    assert not k4_twisted.is_plane()

    c4 = RotationSystem({0: [1, 3], 1: [0, 2], 2: [1, 3], 3: [0, 2]})
    assert len(c4.faces()) == 2 and c4.is_plane()

    # one face per tree, and components are checked separately
    forest = RotationSystem({0: [1, 2], 1: [0], 2: [0], 3: [4], 4: [3], 5: []})
    assert forest.faces() == [[(0, 1), (1, 0), (0, 2), (2, 0)], [(3, 4), (4, 3)]]
    assert forest.is_plane()
    rotations = {v: k4_plane.rotation(v) for v in k4_plane.vertices}
    twice = RotationSystem({**rotations, 4: (5,), 5: (4,)})
    assert twice.is_plane() and len(twice.faces()) == 5
    assert rotation_from_networkx(k4_plane.to_networkx()) == k4_plane


def _check_face_walk(rot: RotationSystem) -> Tuple[bool, str]:
    """Faces partition the darts, and each dart `(u, v)` is followed by
    `(v, w)` with `w` next counterclockwise from `u` around `v`.

    Returns:
        Tuple[bool, str]
        The bool indicates whether this check passed.
        The str is a comment for an assertion failure
    """
    faces = rot.faces()
    darts = [dart for face in faces for dart in face]
    expected = sorted((v, w) for v in rot.vertices for w in rot.rotation(v))
    if sorted(darts) != expected:
        return (False, f"{rot}: faces do not partition the darts")
    for face in faces:
        for (u, v), following in zip(face, face[1:] + face[:1]):
            if following != (v, rot.next_ccw(v, u)):
                return (False, f"{rot}: {following} does not follow {(u, v)}")
    g = nx.Graph(list(rot.edges()))
    g.add_nodes_from(rot.vertices)
    euler = True
    for comp in nx.connected_components(g):
        face_count = sum(face[0][0] in comp for face in faces)
        if len(comp) > 1 and len(comp) - g.subgraph(comp).number_of_edges() + face_count != 2:
            euler = False
    if euler != rot.is_plane():
        return (False, f"{rot}: is_plane disagrees with the face count")
    return (True, "")


def test_face_walk_random_rotations():
    rng = random.Random(280)
    for _ in range(200):
        n = rng.randint(1, 7)
        g = random_graph(n, rng)
        rotations = {v: list(g.neighbors(v)) for v in g.vertices()}
        for nbrs in rotations.values():
            rng.shuffle(nbrs)
        result = _check_face_walk(RotationSystem(rotations))
        assert result[0], result[1]


def test_next_ccw_and_cw():
    assert k4_plane.next_ccw(0, 1) == 2
    assert k4_plane.next_ccw(0, 3) == 1
    assert k4_plane.next_cw(0, 1) == 3
    for v in k4_plane.vertices:
        for u in k4_plane.rotation(v):
            assert k4_plane.next_cw(v, k4_plane.next_ccw(v, u)) == u


def test_rotation_system_contract():
    with pytest.raises(ValueError):
        RotationSystem({0: [1, 1], 1: [0]})
    with pytest.raises(ValueError):
        RotationSystem({0: [1], 1: []})
    # a single vertex is a plane embedding
    assert RotationSystem({0: ()}).is_plane()


def test_parse_rotation():
    rot = parse_rotation(read_fixture("k4_plane.emb"), k4)
    assert rot == k4_plane
    assert parse_rotation(serialize_rotation(rot), k4) == rot

    with pytest.raises(RotationFormatError):
        parse_rotation("1 2 3\n0 3 2\n0 1 3\n", k4)
    with pytest.raises(RotationFormatError):
        parse_rotation("1 2\n0 3 2\n0 1 3\n0 2 1\n", k4)
    with pytest.raises(RotationFormatError):
        parse_rotation("1 2 3\n0 3 2\n0 1 3\n0 2 a\n", k4)

    path = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(RotationFormatError):
        parse_rotation("1 2\n0 2\n1\n", path)


def test_planarity():
    planar, embedding = is_planar(k4)
    assert planar
    assert embedding is not None and embedding.is_plane()
    assert embedding.edges() == k4.edges

    planar, embedding = is_planar(Graph.from_networkx(nx.complete_graph(5)))
    assert not planar and embedding is None

    octahedron = nx.octahedral_graph()
    _, emb = nx.check_planarity(octahedron)
    rot = rotation_from_networkx(emb)
    assert rot.is_plane()
    assert len(rot.faces()) == 8


def test_block_cut_tree():
    two_triangles = parse_graph(read_fixture("two_triangles.graph"))
    bct = block_cut_tree(two_triangles)
    assert len(bct.blocks) == 2
    assert bct.cutvertices == (2,)
    assert bct.is_path()
    assert bct.blocks[0].vertices == frozenset([0, 1, 2])
    assert bct.blocks_of(2) == [0, 1]

    chain = bct.st_chain(0, 4)
    assert chain is not None
    assert [(entry, exit_) for _, entry, exit_ in chain] == [(0, 2), (2, 4)]
    # both ends in one end block, or an end on the cutvertex
    assert bct.st_chain(0, 1) is None
    assert bct.st_chain(2, 4) is None


def test_block_cut_tree_shapes():
    star = parse_graph(read_fixture("star.graph"))
    bct = block_cut_tree(star)
    assert len(bct.blocks) == 3
    assert not bct.is_path()
    assert bct.st_chain(1, 2) is None

    bct = block_cut_tree(k4)
    assert len(bct.blocks) == 1 and bct.cutvertices == ()
    chain = bct.st_chain(0, 3)
    assert chain is not None and len(chain) == 1

    single = block_cut_tree(Graph(1))
    assert len(single.blocks) == 1

    with pytest.raises(ValueError):
        block_cut_tree(Graph(2))
    with pytest.raises(ValueError):
        block_cut_tree(Graph(0))
