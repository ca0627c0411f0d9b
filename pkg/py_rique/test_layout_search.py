import itertools
import random

import networkx as nx
import pytest
from py_rique.bounds import density_bound
from py_rique.corpus import random_graph
from py_rique.graph import Graph
from py_rique.layout_search import (
    ExactSolver,
    SearchLimitError,
    assign_pages,
    exact_rique_number,
    greedy_layout,
)
from py_rique.rique_layout import validate_layout
from py_rique.rique_solver import RiqueSolver, Symmetry


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def test_greedy_layout():
    for n in range(2, 9):
        g = complete(n)
        layout = greedy_layout(g)
        assert layout.covers(g)
        assert validate_layout(g, layout).valid


def test_assign_pages():
    k5 = complete(5)
    assert assign_pages(range(5), k5.sorted_edges(), 1) is None
    pages = assign_pages(range(5), k5.sorted_edges(), 2)
    assert pages is not None and len(pages) == 2


@pytest.mark.parametrize(
    "n, expected, symmetry",
    [
        (3, 1, Symmetry.NONE),
        (4, 1, Symmetry.NONE),
        (5, 2, Symmetry.NONE),
        (6, 2, Symmetry.FIRST_VERTEX),
        (7, 2, Symmetry.FIRST_VERTEX),
    ],
)
def test_complete_graphs(n: int, expected: int, symmetry: Symmetry):
    g = complete(n)
    k, layout = exact_rique_number(g, symmetry=symmetry)
    assert k == expected
    assert layout.page_count == k
    assert validate_layout(g, layout).valid


def test_small_families():
    cycle = Graph.from_networkx(nx.cycle_graph(5))
    assert exact_rique_number(cycle)[0] == 1
    star = Graph.from_networkx(nx.star_graph(3))
    assert exact_rique_number(star)[0] == 1
    assert exact_rique_number(Graph(3))[0] == 0
    assert exact_rique_number(Graph(1))[0] == 0


def test_random_graphs():
    rng = random.Random(2023)
    for _ in range(40):
        n = rng.randint(3, 6)
        g = random_graph(n, rng)
        k, layout = exact_rique_number(g)
        assert validate_layout(g, layout).valid
        if g.m:
            assert g.m <= density_bound(n, k)
        assert k <= greedy_layout(g).page_count


def test_jobs_agree():
    g = complete(5)
    assert exact_rique_number(g, jobs=2)[0] == exact_rique_number(g, jobs=1)[0]


def test_limits():
    with pytest.raises(SearchLimitError):
        exact_rique_number(complete(6), limit=5)
    with pytest.raises(ValueError):
        exact_rique_number(Graph(4, [(0, 1)]), symmetry=Symmetry.FIRST_VERTEX)


def test_solver_interface():
    solver = RiqueSolver.create(RiqueSolver.SearchTactic.EXACT)
    assert isinstance(solver, ExactSolver)
    result = solver.rique_number(complete(5))
    assert result.exact
    assert result.describe() == "2"
    assert RiqueSolver.SEARCH_DEFAULT is RiqueSolver.SearchTactic.EXACT


def test_subgraphs_need_no_more_pages():
    rng = random.Random(31)
    for _ in range(40):
        n = rng.randint(3, 7)
        g = random_graph(n, rng)
        kept = [e for e in g.sorted_edges() if rng.random() < 0.6]
        h = Graph(n, kept)
        assert exact_rique_number(h)[0] <= exact_rique_number(g)[0], f"{h} inside {g}"
    k6 = complete(6)
    for e in k6.sorted_edges():
        h = Graph(6, [f for f in k6.sorted_edges() if f != e])
        assert exact_rique_number(h)[0] <= 2
