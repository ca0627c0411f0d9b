"""
Exact rique-number computation.

Vertex orders are enumerated grouped by their first vertex. For every
order, edges are assigned to pages by backtracking (a new edge is only
tried on the pages in use plus one fresh page) and the search keeps the
best page count found so far, asking each further order for one page
less. A graph with more than 3n-6 edges is not planar and needs at least
two pages; this is the only lower bound used to stop early, so the
search result stays independent of the density bounds.
"""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from py_rique.graph import Edge, Graph
from py_rique.rique_layout import LinearLayout, creates_pattern, positions
from py_rique.rique_solver import RiqueNumber, RiqueSolver, Symmetry, check_symmetry

log = logging.getLogger("layout_search")

DEFAULT_LIMIT = 9

_Best = Tuple[int, Tuple[int, ...], List[List[Edge]]]


class SearchLimitError(ValueError):
    """The graph has more vertices than the search allows."""


def greedy_layout(g: Graph, order: Optional[Sequence[int]] = None) -> LinearLayout:
    """Put every edge on the first page where it creates no forbidden triple.

    Edges are taken by increasing left endpoint, longest first.
    """
    if order is None:
        order = list(g.vertices())
    pos = positions(order)
    page_spans: List[List[Tuple[int, int]]] = []
    pages: List[List[Edge]] = []
    for span, e in _sorted_spans(pos, g.edges):
        for spans, page in zip(page_spans, pages):
            if not creates_pattern(spans, span):
                spans.append(span)
                page.append(e)
                break
        else:
            page_spans.append([span])
            pages.append([e])
    return LinearLayout(order, pages)


def _sorted_spans(pos: Mapping[int, int], edges: Iterable[Edge]) -> List[Tuple[Tuple[int, int], Edge]]:
    spans = []
    for e in edges:
        l, r = sorted((pos[e[0]], pos[e[1]]))
        spans.append(((l, r), e))
    spans.sort(key=lambda item: (item[0][0], -item[0][1]))
    return spans


def assign_pages(order: Sequence[int], edges: Sequence[Edge], k: int) -> Optional[List[List[Edge]]]:
    """Partition `edges` into at most `k` pattern-free pages under `order`.

    Returns:
        The pages, or `None` if `k` pages do not suffice for this order.
    """
    spans = _sorted_spans(positions(order), edges)
    page_spans: List[List[Tuple[int, int]]] = [[] for _ in range(k)]
    placement: List[int] = []

    def place(i: int, used: int) -> bool:
        if i == len(spans):
            return True
        span = spans[i][0]
        for p in range(min(used + 1, k)):
            if creates_pattern(page_spans[p], span):
                continue
            page_spans[p].append(span)
            placement.append(p)
            if place(i + 1, max(used, p + 1)):
                return True
            placement.pop()
            page_spans[p].pop()
        return False

    if not place(0, 0):
        return None
    pages: List[List[Edge]] = [[] for _ in range(max(placement, default=-1) + 1)]
    for (_, e), p in zip(spans, placement):
        pages[p].append(e)
    return pages


def _search_from(
    n: int, edges: List[Edge], first: int, lower: int, best: _Best
) -> Optional[_Best]:
    """Search all orders starting with `first`; return an improvement on `best`."""
    best_k = best[0]
    improved: Optional[_Best] = None
    others = [v for v in range(n) if v != first]
    tried = 0
    for rest in itertools.permutations(others):
        order = (first,) + rest
        tried += 1
        while best_k > lower:
            pages = assign_pages(order, edges, best_k - 1)
            if pages is None:
                break
            best_k = len(pages)
            improved = (best_k, order, pages)
            log.debug(f"order {order}: {best_k} pages")
        if best_k == lower:
            break
    log.debug(f"first vertex {first}: {tried} orders tried, best {best_k}")
    return improved


def exact_rique_number(
    g: Graph,
    limit: int = DEFAULT_LIMIT,
    symmetry: Symmetry = Symmetry.NONE,
    jobs: int = 1,
) -> Tuple[int, LinearLayout]:
    """Compute the rique-number of `g` exactly.

    Args:
        g: The graph.
        limit: The largest vertex count accepted.
        symmetry: `Symmetry.FIRST_VERTEX` only tries orders starting
            with vertex 0 (complete graphs only).
        jobs: Worker processes; orders are split by first vertex.

    Returns:
        The rique-number and a witness layout with that many pages.

    Raises:
        SearchLimitError: `g` has more than `limit` vertices.
        ValueError: The symmetry option does not apply to `g`.
    """
    if g.n > limit:
        errmsg = f"exact search is capped at {limit} vertices, graph has {g.n}"
        log.critical(errmsg)
        raise SearchLimitError(errmsg)
    check_symmetry(g, symmetry)
    if g.m == 0:
        return 0, LinearLayout(g.vertices(), [])

    lower = 1 if g.n < 3 or g.m <= 3 * g.n - 6 else 2
    start = greedy_layout(g)
    best: _Best = (start.page_count, start.order, [sorted(p) for p in start.pages])
    log.info(f"{g}: lower bound {lower}, greedy upper bound {best[0]}")

    firsts = [0] if symmetry is Symmetry.FIRST_VERTEX else list(g.vertices())
    edges = g.sorted_edges()
    if best[0] > lower:
        if jobs > 1 and len(firsts) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_search_from, g.n, edges, f, lower, best) for f in firsts]
                results = [future.result() for future in futures]
            for result in results:
                if result is not None and result[0] < best[0]:
                    best = result
        else:
            for first in firsts:
                result = _search_from(g.n, edges, first, lower, best)
                if result is not None:
                    best = result
                if best[0] == lower:
                    break

    k, order, pages = best
    log.info(f"{g}: rique-number {k}")
    return k, LinearLayout(order, pages)


class ExactSolver(RiqueSolver):
    """Backtracking search over all vertex orders."""

    def __init__(
        self, limit: int = DEFAULT_LIMIT, symmetry: Symmetry = Symmetry.NONE, jobs: int = 1
    ):
        self.limit = limit
        self.symmetry = symmetry
        self.jobs = jobs

    def rique_number(self, g: Graph) -> RiqueNumber:
        k, layout = exact_rique_number(g, self.limit, self.symmetry, self.jobs)
        return RiqueNumber(k, k, layout)
