import itertools
import random
from typing import Tuple

import networkx as nx
import pytest
from py_rique.corpus import atlas_graphs, random_graph
from py_rique.graph import Graph
from py_rique.layout_search import exact_rique_number
from py_rique.rique_layout import validate_layout
from py_rique.rique_solver import RiqueSolver, Symmetry
from py_rique.sat_encoding import (
    SOLVER_ENV,
    CommandBackend,
    ModelError,
    PysatBackend,
    SatSolver,
    SatStatus,
    SolverError,
    decode_model,
    encode_sat,
    make_backend,
    parse_solver_output,
    rique_number_sat,
)


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


k4 = complete(4)
k5 = complete(5)


def test_variable_counts():
    cnf = encode_sat(k4, 1)
    assert (cnf.sigma_count, cnf.phi_count, cnf.chi_count) == (6, 6, 15)
    assert cnf.nv == 27
    # sigma occupies the first indices, then phi, then chi
    assert cnf.sigma(0, 1) == 1
    assert cnf.sigma(1, 0) == -1
    assert cnf.phi(0, (0, 1)) == 7
    assert cnf.chi((2, 3), (0, 1)) == cnf.chi((0, 1), (2, 3))

    names = [name for name, _ in cnf.variable_map()]
    assert names[0] == "sigma(0,1)"
    assert names[6] == "phi_1(0,1)"
    assert names[-1] == "chi(1,3;2,3)"

    cnf = encode_sat(k5, 3)
    assert cnf.nv == 10 + 30 + 45


def test_dimacs():
    cnf = encode_sat(k4, 2)
    text = cnf.to_dimacs()
    header = [line for line in text.splitlines() if line.startswith("p ")]
    assert header == [f"p cnf {cnf.nv} {len(cnf.clauses)}"]


def test_encode_contract():
    with pytest.raises(ValueError):
        encode_sat(k4, 0)
    with pytest.raises(ValueError):
        encode_sat(Graph(3, [(0, 1)]), 1, Symmetry.FIRST_VERTEX)


def test_pysat_backend():
    backend = PysatBackend()
    cnf = encode_sat(k4, 1)
    outcome = backend.solve(cnf)
    assert outcome.status is SatStatus.SAT
    assert outcome.model is not None
    layout = decode_model(k4, 1, cnf, outcome.model)
    assert validate_layout(k4, layout).valid

    assert backend.solve(encode_sat(k5, 1)).status is SatStatus.UNSAT

    with pytest.raises(SolverError):
        PysatBackend("no-such-solver").solve(cnf)


def test_decode_errors():
    cnf = encode_sat(k4, 1)
    with pytest.raises(ModelError):
        decode_model(k4, 1, cnf, [])
    with pytest.raises(ModelError):
        decode_model(k4, 1, cnf, [-v for v in range(1, cnf.nv + 1)])
    with pytest.raises(ModelError):
        decode_model(k5, 1, cnf, [v for v in range(1, cnf.nv + 1)])


@pytest.mark.parametrize(
    "n, expected, symmetry",
    [(4, 1, Symmetry.NONE), (5, 2, Symmetry.NONE), (6, 2, Symmetry.FIRST_VERTEX), (7, 2, Symmetry.FIRST_VERTEX)],
)
def test_rique_number_sat(n: int, expected: int, symmetry: Symmetry):
    g = complete(n)
    result = rique_number_sat(g, symmetry=symmetry)
    assert result.exact
    assert result.high == expected
    assert result.layout is not None and validate_layout(g, result.layout).valid


def test_rique_number_sat_ranges():
    result = rique_number_sat(k5, kmax=1)
    assert (result.low, result.high, result.layout) == (2, None, None)
    assert result.describe() == ">=2"

    assert rique_number_sat(Graph(3)).high == 0

    cycle = Graph.from_networkx(nx.cycle_graph(6))
    assert rique_number_sat(cycle, jobs=2).high == 1


def test_parse_solver_output():
    outcome = parse_solver_output("c comment\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 10)
    assert outcome.status is SatStatus.SAT
    assert outcome.model == [1, -2, 3]

    assert parse_solver_output("s UNSATISFIABLE\n", 20).status is SatStatus.UNSAT
    assert parse_solver_output("", 20).status is SatStatus.UNSAT
    assert parse_solver_output("s UNKNOWN\n", 0).status is SatStatus.TIMEOUT
    outcome = parse_solver_output("SAT\n1 -2 0\n", 0)
    assert outcome.status is SatStatus.SAT and outcome.model == [1, -2]
    assert parse_solver_output("UNSAT\n", 0).status is SatStatus.UNSAT

    with pytest.raises(SolverError):
        parse_solver_output("", 1)
    with pytest.raises(SolverError):
        parse_solver_output("s SATISFIABLE\n", 10)
    with pytest.raises(SolverError):
        parse_solver_output("s SATISFIABLE\nv 1 x 0\n", 10)


def test_make_backend(monkeypatch):
    backend = make_backend("cmd:kissat -q $FILE")
    assert isinstance(backend, CommandBackend)
    assert backend.command == "kissat -q $FILE"
    assert isinstance(make_backend("cd19"), PysatBackend)

    monkeypatch.setenv(SOLVER_ENV, "m22")
    backend = make_backend()
    assert isinstance(backend, PysatBackend) and backend.name == "m22"
    monkeypatch.delenv(SOLVER_ENV)
    assert make_backend().name == "g3"


def test_command_backend_failure():
    with pytest.raises(SolverError):
        CommandBackend("/nonexistent/solver $FILE").solve(encode_sat(k4, 1))
    with pytest.raises(SolverError):
        CommandBackend("").solve(encode_sat(k4, 1))


def test_solver_interface():
    solver = RiqueSolver.create(RiqueSolver.SearchTactic.SAT, kmin=2)
    assert isinstance(solver, SatSolver)
    result = solver.rique_number(k5)
    assert result.low == 2 and result.high == 2


def _check_agrees_with_exact(g: Graph) -> Tuple[bool, str]:
    """The SAT search and the exhaustive search find the same page count.

    Returns:
        Tuple[bool, str]
        The bool indicates whether this check passed.
        The str is a comment for an assertion failure
    """
    k, _ = exact_rique_number(g)
    result = rique_number_sat(g)
    if not result.exact or result.high != k:
        return (False, f"{g}: sat gave {result.describe()}, exact search gave {k}")
    if result.layout is None or not validate_layout(g, result.layout).valid:
        return (False, f"{g}: sat layout is not a rique layout")
    return (True, "")


def test_agrees_with_exact_small():
    for g in atlas_graphs(6):
        result = _check_agrees_with_exact(g)
        assert result[0], result[1]


def test_agrees_with_exact_random():
    rng = random.Random(2024)
    for _ in range(20):
        g = random_graph(rng.randint(7, 8), rng)
        result = _check_agrees_with_exact(g)
        assert result[0], result[1]


def test_more_pages_stay_satisfiable():
    backend = PysatBackend()
    for g in atlas_graphs(5, 3):
        if g.m == 0:
            continue
        statuses = [backend.solve(encode_sat(g, p)).status for p in range(1, 4)]
        for fewer, more in zip(statuses, statuses[1:]):
            assert not (fewer is SatStatus.SAT and more is SatStatus.UNSAT), f"{g}: {statuses}"
        assert statuses[-1] is SatStatus.SAT


def test_k8():
    k8 = complete(8)
    backend = PysatBackend()
    assert backend.solve(encode_sat(k8, 2, Symmetry.FIRST_VERTEX)).status is SatStatus.UNSAT
    cnf = encode_sat(k8, 3, Symmetry.FIRST_VERTEX)
    outcome = backend.solve(cnf)
    assert outcome.status is SatStatus.SAT and outcome.model is not None
    layout = decode_model(k8, 3, cnf, outcome.model)
    assert layout.order[0] == 0
    assert validate_layout(k8, layout).valid
