"""
This module contains the definition of an abstract rique-number solver.

Concrete solvers inherit from the abstract class: `ExactSolver` in
`py_rique.layout_search` and `SatSolver` in `py_rique.sat_encoding`.

Example
-------
```
from py_rique.rique_solver import RiqueSolver

solver = RiqueSolver.create(RiqueSolver.SearchTactic.EXACT)
result = solver.rique_number(graph)
print(result.describe())
```
"""

import enum
from abc import ABC, abstractmethod
from typing import Any, NamedTuple, Optional

from py_rique.graph import Graph
from py_rique.rique_layout import LinearLayout


@enum.unique
class Symmetry(enum.Enum):
    """Symmetry breaking applied to the vertex order."""

    NONE = "none"

    # Vertex 0 is leftmost. Only sound for vertex-transitive graphs,
    # so it is restricted to complete graphs.
    FIRST_VERTEX = "first-vertex"


def check_symmetry(g: Graph, symmetry: Symmetry) -> None:
    """Raises:
    ValueError: `FIRST_VERTEX` was requested for a non-complete graph.
    """
    if symmetry is Symmetry.FIRST_VERTEX and not g.is_complete():
        raise ValueError("first-vertex symmetry breaking needs a complete graph")


class RiqueNumber(NamedTuple):
    """The rique-number of a graph, or the range it is known to lie in.

    `high` is `None` when no layout was found within the page range
    searched; `layout` is a witness with `high` pages otherwise.
    """

    low: int
    high: Optional[int]
    layout: Optional[LinearLayout]

    @property
    def exact(self) -> bool:
        return self.high is not None and self.low == self.high

    def describe(self) -> str:
        if self.high is None:
            return f">={self.low}"
        if self.exact:
            return str(self.high)
        return f"{self.low}-{self.high}"


class RiqueSolver(ABC):
    """
    This abstract class defines how the rique-number of a graph is
    computed: the minimum number of pages over all vertex orders such
    that no page contains the forbidden edge triple.
    """

    @enum.unique
    class SearchTactic(enum.Enum):
        """An enum for the possible tactics when computing rique-numbers."""

        # Enumerate vertex orders and backtrack over page assignments.
        EXACT = enum.auto()

        # Encode "p pages suffice" as CNF for increasing p.
        SAT = enum.auto()

    # The default tactic to use if none is provided.
    SEARCH_DEFAULT = SearchTactic.EXACT

    @abstractmethod
    def rique_number(self, g: Graph) -> RiqueNumber:
        """Compute the rique-number of `g`.

        Args:
            g: The graph to lay out.

        Returns:
            The rique-number with a witness layout. Solvers that may time
            out return a range `low .. high` instead of a single value.

        Raises:
            ValueError: The input violates a limit of the solver.
        """
        raise NotImplementedError("abstract method `rique_number`")

    @staticmethod
    def create(tactic: "RiqueSolver.SearchTactic", **options: Any) -> "RiqueSolver":
        """Construct the concrete solver for `tactic`.

        Args:
            tactic: Which solver to build.
            options: Keyword arguments for the solver's constructor.
        """
        if tactic is RiqueSolver.SearchTactic.EXACT:
            from py_rique.layout_search import ExactSolver

            return ExactSolver(**options)
        from py_rique.sat_encoding import SatSolver

        return SatSolver(**options)
