"""
Edge-density bounds for rique layouts, bounds for complete graphs and
the ceil(n/3)-page layout of K_n.
"""

import logging
import math
from typing import Dict, List, NamedTuple, Sequence, Tuple

from py_rique.graph import Edge, normalize_edge
from py_rique.rique_layout import LinearLayout

log = logging.getLogger("bounds")


def density_bound(n: int, k: int, as_stated: bool = False) -> int:
    """The maximum edge count of an `n`-vertex graph with a `k`-page
    rique layout.

    The canonical form is `(2n-4)k - k^2 + (n-1)`, which equals `3n-6`
    for a single page. `as_stated=True` evaluates the alternative form
    `(2n+2)k - k^2 + (n-3)` instead; it overshoots `3n-6` at `k = 1` and
    is kept for comparison only.

    Raises:
        ValueError: `n < 3` or `k < 1`.
    """
    if n < 3 or k < 1:
        raise ValueError(f"density bound needs n >= 3 and k >= 1, got n={n}, k={k}")
    if as_stated:
        return (2 * n + 2) * k - k * k + (n - 3)
    return (2 * n - 4) * k - k * k + (n - 1)


def density_lower_bound(n: int, m: int) -> int:
    """The smallest page count the density bound allows for `m` edges."""
    if m == 0:
        return 0
    if n < 3:
        return 1
    k = 1
    while k < n - 2 and density_bound(n, k) < m:
        k += 1
    return k


class KnLowerBound(NamedTuple):
    tight: float
    simplified: float
    ceiling: int


def kn_lower_bound(n: int) -> KnLowerBound:
    """Lower bounds on the rique-number of K_n.

    `tight` is `n - 2 - sqrt((n-2)(n-3)/2)`, the smaller root of the
    density inequality for `n(n-1)/2` edges; `simplified` is
    `(1 - 1/sqrt(2))(n - 2)`. `ceiling` is the exact integer ceiling of
    `tight`, computed without floating point.

    Raises:
        ValueError: `n < 4`.
    """
    if n < 4:
        raise ValueError(f"K_n bounds need n >= 4, got {n}")
    tight = n - 2 - math.sqrt((n - 2) * (n - 3) / 2)
    simplified = (1 - 1 / math.sqrt(2)) * (n - 2)
    # smallest k with n-2-k <= sqrt((n-2)(n-3)/2)
    k = 0
    while n - 2 - k > 0 and 2 * (n - 2 - k) ** 2 > (n - 2) * (n - 3):
        k += 1
    return KnLowerBound(tight, simplified, k)


def zigzag_book(vertices: Sequence[int]) -> List[List[Edge]]:
    """A ceil(m/2)-page stack layout of the clique on `vertices`, in the
    order given.

    Page `p` is the zig-zag path `p, p+1, p-1, p+2, p-2, ...` (indices
    modulo the clique size). Odd cliques get a dummy vertex whose edges
    are dropped afterwards.
    """
    m = len(vertices)
    if m < 2:
        return []
    size = m + (m % 2)
    pages = []
    for p in range(size // 2):
        walk = [p]
        i = 1
        while len(walk) < size:
            walk.append((p + i) % size)
            if len(walk) < size:
                walk.append((p - i) % size)
            i += 1
        page = [
            normalize_edge(vertices[a], vertices[b])
            for a, b in zip(walk, walk[1:])
            if a < m and b < m
        ]
        pages.append(page)
    return pages


def construct_kn_layout(n: int) -> LinearLayout:
    """Lay out K_n on ceil(n/3) pages.

    With `q = ceil(n/3)` and the natural order, page `i < q` holds every
    edge `(i, j)` with `j > i`; the clique on the remaining `n - q`
    vertices is added with its zig-zag stack layout, page by page.

    Raises:
        ValueError: `n < 3`.
    """
    if n < 3:
        raise ValueError(f"K_n construction needs n >= 3, got {n}")
    q = -(-n // 3)
    pages: List[List[Edge]] = [[(i, j) for j in range(i + 1, n)] for i in range(q)]
    rest = zigzag_book(range(q, n))
    assert len(rest) <= q, f"clique on {n - q} vertices needs {len(rest)} > {q} stack pages"
    for p, page in enumerate(rest):
        pages[p].extend(page)
    log.debug(f"K_{n}: {q} pages, clique remainder uses {len(rest)}")
    return LinearLayout(range(n), pages)


class TableEntry(NamedTuple):
    low: int
    high: int

    @property
    def exact(self) -> bool:
        return self.low == self.high

    def describe(self) -> str:
        return str(self.low) if self.exact else f"{self.low} or {self.high}"


def _table() -> Dict[int, TableEntry]:
    rows: List[Tuple[range, TableEntry]] = [
        (range(4, 5), TableEntry(1, 1)),
        (range(5, 8), TableEntry(2, 2)),
        (range(8, 12), TableEntry(3, 3)),
        (range(12, 15), TableEntry(4, 4)),
        (range(15, 18), TableEntry(5, 5)),
        (range(18, 22), TableEntry(6, 6)),
        (range(22, 23), TableEntry(6, 7)),
        (range(23, 25), TableEntry(7, 7)),
        (range(25, 26), TableEntry(7, 8)),
        (range(26, 29), TableEntry(8, 8)),
    ]
    return {n: entry for span, entry in rows for n in span}


# known rique-numbers of K_n for 4 <= n <= 28
KN_TABLE = _table()


def table_kn(n: int) -> TableEntry:
    """Raises:
    ValueError: `n` is outside 4 .. 28.
    """
    if n not in KN_TABLE:
        raise ValueError(f"K_n table covers 4 <= n <= 28, got {n}")
    return KN_TABLE[n]


def kn_upper_bound(n: int) -> int:
    return -(-n // 3)
