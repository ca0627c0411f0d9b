"""
SAT formulation of "g has a rique layout with p pages".

Variables:
  - sigma(u,v), u < v: u is left of v. sigma(v,u) is the negated literal.
  - phi_i(e): edge e is on page i.
  - chi(e,f): e and f share a page.

Clauses:
  - transitivity of sigma over all ordered vertex triples,
  - every edge is on at least one page,
  - phi_i(e) and phi_i(f) imply chi(e,f),
  - for every ordered edge triple and orientation that could form the
    forbidden triple a < b < c < b' < {a', c'}, the clause excluding it.

Solvers are either in-process pysat solvers or an external command that
reads DIMACS (from stdin, or from a file named by a `$FILE` argument)
and answers with `s SATISFIABLE` / `s UNSATISFIABLE` and `v` lines.
"""

import enum
import io
import itertools
import logging
import os
import shlex
import subprocess
import tempfile
import threading
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

from pysat.formula import CNF, IDPool
from pysat.solvers import Solver

from py_rique.graph import Edge, Graph
from py_rique.layout_search import greedy_layout
from py_rique.rique_layout import LinearLayout, validate_layout
from py_rique.rique_solver import RiqueNumber, RiqueSolver, Symmetry, check_symmetry

log = logging.getLogger("sat_encoding")

SOLVER_ENV = "RIQUE_SOLVER"
DEFAULT_SOLVER = "g3"

"""A model as returned by a solver: signed variable indices."""
SatModel = Sequence[int]


class ModelError(ValueError):
    """A model does not satisfy the formula it is decoded against."""


class SolverError(RuntimeError):
    """A SAT solver could not be launched or its answer not understood."""


class RiqueCnf:
    """
    The CNF for a `pages`-page rique layout of `graph`.

    Variables are numbered sigma first, then phi, then chi, so that each
    group occupies a contiguous index range.
    """

    def __init__(self, graph: Graph, pages: int, symmetry: Symmetry = Symmetry.NONE):
        if pages < 1:
            raise ValueError(f"page count must be at least 1, got {pages}")
        check_symmetry(graph, symmetry)
        self.graph = graph
        self.pages = pages
        self.pool = IDPool()
        self.formula = CNF()
        self._edges = graph.sorted_edges()

        for u, v in itertools.combinations(range(graph.n), 2):
            self.pool.id(("sigma", u, v))
        for i in range(pages):
            for e in self._edges:
                self.pool.id(("phi", i, e))
        for e, f in itertools.combinations(self._edges, 2):
            self.pool.id(("chi", e, f))

        self._add_transitivity()
        self._add_page_cover()
        self._add_page_links()
        self._add_pattern_exclusion()
        if symmetry is Symmetry.FIRST_VERTEX:
            for v in range(1, graph.n):
                self.formula.append([self.sigma(0, v)])
        self.formula.nv = self.pool.top
        log.debug(
            f"{graph}, {pages} pages: {self.formula.nv} variables, "
            f"{len(self.formula.clauses)} clauses"
        )

    def sigma(self, u: int, v: int) -> int:
        if u < v:
            return self.pool.obj2id[("sigma", u, v)]
        return -self.pool.obj2id[("sigma", v, u)]

    def phi(self, page: int, e: Edge) -> int:
        return self.pool.obj2id[("phi", page, e)]

    def chi(self, e: Edge, f: Edge) -> int:
        key = ("chi", e, f) if e < f else ("chi", f, e)
        return self.pool.obj2id[key]

    @property
    def sigma_count(self) -> int:
        return self.graph.n * (self.graph.n - 1) // 2

    @property
    def phi_count(self) -> int:
        return self.pages * self.graph.m

    @property
    def chi_count(self) -> int:
        return self.graph.m * (self.graph.m - 1) // 2

    @property
    def nv(self) -> int:
        return self.formula.nv

    @property
    def clauses(self) -> List[List[int]]:
        return self.formula.clauses

    def _add_transitivity(self) -> None:
        for u, v, w in itertools.permutations(range(self.graph.n), 3):
            self.formula.append([-self.sigma(u, v), -self.sigma(v, w), self.sigma(u, w)])

    def _add_page_cover(self) -> None:
        for e in self._edges:
            self.formula.append([self.phi(i, e) for i in range(self.pages)])

    def _add_page_links(self) -> None:
        for i in range(self.pages):
            for e, f in itertools.combinations(self._edges, 2):
                self.formula.append([-self.phi(i, e), -self.phi(i, f), self.chi(e, f)])

    def _add_pattern_exclusion(self) -> None:
        for ea, eb, ec in itertools.permutations(self._edges, 3):
            for a, a2 in (ea, ea[::-1]):
                for b, b2 in (eb, eb[::-1]):
                    for c, c2 in (ec, ec[::-1]):
                        inner = {a, b, c, b2}
                        if len(inner) < 4 or a2 in inner or c2 in inner:
                            continue
                        clause = [
                            -self.sigma(a, b),
                            -self.sigma(b, c),
                            -self.sigma(c, b2),
                            -self.sigma(b2, a2),
                            -self.sigma(b2, c2),
                            -self.chi(ea, eb),
                            -self.chi(eb, ec),
                            -self.chi(ea, ec),
                        ]
                        self.formula.append(list(dict.fromkeys(clause)))

    def variable_map(self) -> List[Tuple[str, int]]:
        """Names and indices of all variables, by index."""
        names = []
        for obj, index in self.pool.obj2id.items():
            if obj[0] == "sigma":
                name = f"sigma({obj[1]},{obj[2]})"
            elif obj[0] == "phi":
                name = f"phi_{obj[1] + 1}({obj[2][0]},{obj[2][1]})"
            else:
                e, f = obj[1], obj[2]
                name = f"chi({e[0]},{e[1]};{f[0]},{f[1]})"
            names.append((name, index))
        names.sort(key=lambda item: item[1])
        return names

    def to_dimacs(self) -> str:
        buffer = io.StringIO()
        self.formula.to_fp(buffer)
        return buffer.getvalue()

    def write(self, path: str, map_path: Optional[str] = None) -> None:
        """Write the DIMACS file and, optionally, the variable-map sidecar.

        Raises:
            OSError: A file cannot be written.
        """
        with open(path, "w") as fout:
            fout.write(self.to_dimacs())
        if map_path is not None:
            with open(map_path, "w") as fout:
                for name, index in self.variable_map():
                    fout.write(f"{name} {index}\n")


def encode_sat(g: Graph, p: int, symmetry: Symmetry = Symmetry.NONE) -> RiqueCnf:
    return RiqueCnf(g, p, symmetry)


def decode_model(g: Graph, p: int, cnf: RiqueCnf, model: SatModel) -> LinearLayout:
    """Turn a satisfying assignment into a validated layout.

    The position of a vertex is the number of vertices left of it; every
    edge goes to the lowest page whose phi variable is true.

    Raises:
        ModelError: The model misses a variable, falsifies a clause, does
            not describe a total order, or decodes to an invalid layout.
    """
    if cnf.graph != g or cnf.pages != p:
        raise ModelError("the formula was not built for this graph and page count")
    truth: Dict[int, bool] = {abs(lit): lit > 0 for lit in model}
    missing = [v for v in range(1, cnf.nv + 1) if v not in truth]
    if missing:
        raise ModelError(f"model misses {len(missing)} variables, first {missing[0]}")
    for clause in cnf.clauses:
        if not any(truth[abs(lit)] == (lit > 0) for lit in clause):
            raise ModelError(f"model falsifies clause {clause}")

    def holds(lit: int) -> bool:
        return truth[abs(lit)] == (lit > 0)

    rank = {v: sum(1 for w in g.vertices() if w != v and holds(cnf.sigma(w, v))) for v in g.vertices()}
    order = sorted(g.vertices(), key=rank.__getitem__)
    if sorted(rank.values()) != list(range(g.n)):
        raise ModelError("sigma does not describe a total order")

    pages: List[List[Edge]] = [[] for _ in range(p)]
    for e in g.sorted_edges():
        page = next(i for i in range(p) if holds(cnf.phi(i, e)))
        pages[page].append(e)
    layout = LinearLayout(order, pages)
    report = validate_layout(g, layout)
    if not report.valid:
        raise ModelError(f"decoded layout is invalid: {report.witnesses}")
    return layout


@enum.unique
class SatStatus(enum.Enum):
    SAT = enum.auto()
    UNSAT = enum.auto()
    TIMEOUT = enum.auto()


class SatOutcome(NamedTuple):
    status: SatStatus
    model: Optional[List[int]]


class SatBackend(ABC):
    """
    This abstract class defines how a formula is handed to a SAT solver.
    """

    @abstractmethod
    def solve(self, cnf: RiqueCnf, timeout: Optional[float] = None) -> SatOutcome:
        """Decide satisfiability of `cnf`.

        Args:
            cnf: The formula.
            timeout: Seconds before giving up, or `None` to wait.

        Returns:
            The outcome; a model accompanies `SatStatus.SAT`.

        Raises:
            SolverError: The solver failed to run or answered unreadably.
        """
        raise NotImplementedError("abstract method `solve`")


class PysatBackend(SatBackend):
    """An in-process pysat solver, e.g. `g3`, `cd19` or `m22`."""

    def __init__(self, name: str = DEFAULT_SOLVER):
        self.name = name

    def solve(self, cnf: RiqueCnf, timeout: Optional[float] = None) -> SatOutcome:
        try:
            solver = Solver(name=self.name, bootstrap_with=cnf.clauses)
        except (NotImplementedError, ValueError, AssertionError) as err:
            raise SolverError(f"pysat solver '{self.name}' is not available") from err
        with solver:
            if timeout is None:
                sat: Optional[bool] = solver.solve()
            else:
                timer = threading.Timer(timeout, solver.interrupt)
                timer.start()
                try:
                    sat = solver.solve_limited(expect_interrupt=True)
                finally:
                    timer.cancel()
            if sat is None:
                return SatOutcome(SatStatus.TIMEOUT, None)
            if sat:
                model = list(solver.get_model())
                # variables in no clause are absent from pysat models
                known = {abs(lit) for lit in model}
                model += [-v for v in range(1, cnf.nv + 1) if v not in known]
                return SatOutcome(SatStatus.SAT, model)
            return SatOutcome(SatStatus.UNSAT, None)


def parse_solver_output(stdout: str, returncode: int) -> SatOutcome:
    """Read a solver's answer.

    Understands competition output (`s ...` status and `v ...` model
    lines), a bare `SAT`/`UNSAT` first token followed by the model, and
    the exit codes 10 (satisfiable) and 20 (unsatisfiable).

    Raises:
        SolverError: Neither output nor exit code gives a status, or a
            satisfiable answer carries no model.
    """
    status: Optional[SatStatus] = None
    model: List[int] = []
    for line in stdout.splitlines():
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        head = tokens[0]
        try:
            if head == "s" and len(tokens) > 1:
                word = tokens[1]
                if word == "SATISFIABLE":
                    status = SatStatus.SAT
                elif word == "UNSATISFIABLE":
                    status = SatStatus.UNSAT
                else:
                    status = SatStatus.TIMEOUT
            elif head == "v":
                model.extend(int(tok) for tok in tokens[1:])
            elif head in ("SAT", "SATISFIABLE") and status is None:
                status = SatStatus.SAT
                model.extend(int(tok) for tok in tokens[1:])
            elif head in ("UNSAT", "UNSATISFIABLE") and status is None:
                status = SatStatus.UNSAT
            elif status is SatStatus.SAT:
                model.extend(int(tok) for tok in tokens)
        except ValueError:
            raise SolverError(f"unreadable solver output line '{line}'")

    if status is None:
        if returncode == 10:
            status = SatStatus.SAT
        elif returncode == 20:
            status = SatStatus.UNSAT
        else:
            raise SolverError(f"solver gave no status (exit code {returncode})")
    if model and model[-1] == 0:
        model.pop()
    if status is SatStatus.SAT and not model:
        raise SolverError("solver reported SAT without a model")
    return SatOutcome(status, model if status is SatStatus.SAT else None)


class CommandBackend(SatBackend):
    """An external solver command; `$FILE` stands for the DIMACS file,
    otherwise the formula is piped to stdin."""

    def __init__(self, command: str):
        self.command = command

    def solve(self, cnf: RiqueCnf, timeout: Optional[float] = None) -> SatOutcome:
        pieces = shlex.split(self.command)
        if not pieces:
            raise SolverError("empty solver command")
        dimacs = cnf.to_dimacs()
        try:
            if "$FILE" in pieces:
                with tempfile.NamedTemporaryFile("w", suffix=".cnf") as file:
                    file.write(dimacs)
                    file.flush()
                    pieces = [file.name if piece == "$FILE" else piece for piece in pieces]
                    process = subprocess.run(
                        pieces, capture_output=True, text=True, timeout=timeout
                    )
            else:
                process = subprocess.run(
                    pieces, input=dimacs, capture_output=True, text=True, timeout=timeout
                )
        except subprocess.TimeoutExpired:
            log.info(f"'{self.command}' timed out after {timeout}s")
            return SatOutcome(SatStatus.TIMEOUT, None)
        except OSError as err:
            errmsg = f"could not launch solver '{self.command}': {err}"
            log.critical(errmsg)
            raise SolverError(errmsg) from err
        return parse_solver_output(process.stdout, process.returncode)


def default_solver() -> str:
    return os.environ.get(SOLVER_ENV, DEFAULT_SOLVER)


def make_backend(name: Optional[str] = None) -> SatBackend:
    """`cmd:<command>` selects an external command, anything else names
    a pysat solver. `None` falls back to `$RIQUE_SOLVER`, then `g3`."""
    if name is None:
        name = default_solver()
    if name.startswith("cmd:"):
        return CommandBackend(name[4:])
    return PysatBackend(name)


def rique_number_sat(
    g: Graph,
    solver: Union[str, SatBackend, None] = None,
    kmin: int = 1,
    kmax: Optional[int] = None,
    timeout: Optional[float] = None,
    jobs: int = 1,
    symmetry: Symmetry = Symmetry.NONE,
) -> RiqueNumber:
    """Find the smallest satisfiable page count in `kmin .. kmax`.

    Args:
        g: The graph.
        solver: A backend or a backend name for `make_backend`.
        kmin: The first page count tried.
        kmax: The last page count tried; defaults to the page count of
            the greedy layout on the identity order.
        timeout: Seconds per page count.
        jobs: Page counts solved concurrently.
        symmetry: Symmetry breaking for the encoding.

    Returns:
        `low .. high` where every page count below `low` (from `kmin`)
        was refuted and `high` is the first satisfiable one. Timeouts
        keep `low` at the first page count that timed out. `high` is
        `None` if no page count up to `kmax` was satisfiable.

    Raises:
        SolverError: The solver failed.
    """
    check_symmetry(g, symmetry)
    if g.m == 0:
        return RiqueNumber(0, 0, LinearLayout(g.vertices(), []))
    backend = solver if isinstance(solver, SatBackend) else make_backend(solver)
    kmin = max(kmin, 1)
    if kmax is None:
        kmax = max(kmin, greedy_layout(g).page_count)

    def attempt(p: int) -> Tuple[int, RiqueCnf, SatOutcome]:
        cnf = encode_sat(g, p, symmetry)
        outcome = backend.solve(cnf, timeout)
        log.info(f"{g}: {p} pages -> {outcome.status.name}")
        return p, cnf, outcome

    low = kmin
    timed_out = False
    counts = list(range(kmin, kmax + 1))
    step = max(jobs, 1)
    for start in range(0, len(counts), step):
        window = counts[start : start + step]
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(attempt, window))
        else:
            results = []
            for p in window:
                results.append(attempt(p))
                if results[-1][2].status is SatStatus.SAT:
                    break
        for p, cnf, outcome in results:
            if outcome.status is SatStatus.UNSAT:
                if not timed_out:
                    low = p + 1
            elif outcome.status is SatStatus.TIMEOUT:
                timed_out = True
            else:
                assert outcome.model is not None
                return RiqueNumber(low, p, decode_model(g, p, cnf, outcome.model))
    return RiqueNumber(low, None, None)


class SatSolver(RiqueSolver):
    """Increasing page counts, each decided by a SAT solver."""

    def __init__(
        self,
        solver: Union[str, SatBackend, None] = None,
        kmin: int = 1,
        kmax: Optional[int] = None,
        timeout: Optional[float] = None,
        jobs: int = 1,
        symmetry: Symmetry = Symmetry.NONE,
    ):
        self.solver = solver
        self.kmin = kmin
        self.kmax = kmax
        self.timeout = timeout
        self.jobs = jobs
        self.symmetry = symmetry

    def rique_number(self, g: Graph) -> RiqueNumber:
        return rique_number_sat(
            g, self.solver, self.kmin, self.kmax, self.timeout, self.jobs, self.symmetry
        )
