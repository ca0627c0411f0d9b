"""
Rique layouts: a vertex order plus a partition of the edges into pages,
where every page is processed by one restricted-input queue.

A rique inserts only at its head and removes at both ends. Under a
fixed order, a page can be processed by a rique if and only if it
contains no triple of edges

    (a, a'), (b, b'), (c, c')  with  a < b < c < b' < {a', c'}

(positions in the order; `a'` and `c'` may coincide). `find_pattern`
detects such a triple, `classify_page` decides where each edge leaves
the rique, and `build_schedule` produces an explicit, replayable
sequence of rique operations.

Layout file format:
```
order: 0 1 2 3
page 1: 0 1, 0 2, 0 3, 1 2, 1 3, 2 3
```
"""

import enum
import logging
from collections import deque
from typing import (
    Any,
    Deque,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

from py_rique.graph import Edge, Graph, normalize_edge

log = logging.getLogger("rique_layout")

"""A vertex order, listed from left to right."""
Order = Sequence[int]

"""An edge `(l, r)` oriented so that `l` precedes `r`, with their positions."""
_Span = Tuple[int, int, Edge]


class LayoutError(ValueError):
    """A layout is not a valid partition of a graph's edges."""


class LayoutFormatError(ValueError):
    """A layout file could not be parsed."""


class ScheduleError(RuntimeError):
    """A rique schedule could not be built or does not replay."""


class PatternError(ValueError):
    """A page contains the forbidden edge triple."""

    def __init__(self, page: int, witness: "PatternWitness"):
        super().__init__(f"page {page + 1} contains the forbidden triple {witness.describe()}")
        self.page = page
        self.witness = witness


@enum.unique
class EdgeKind(enum.Enum):
    """Where an edge leaves the rique at its right endpoint."""

    TAIL = enum.auto()
    HEAD = enum.auto()


@enum.unique
class Action(enum.Enum):
    INSERT = "insert"
    REMOVE_HEAD = "remove-head"
    REMOVE_TAIL = "remove-tail"


class ScheduleEvent(NamedTuple):
    vertex: int
    action: Action
    edge: Edge


class PatternWitness(NamedTuple):
    """Edges `e_a`, `e_b`, `e_c` forming the forbidden triple, and the
    positions of `a, b, c, b', a', c'` in the order."""

    e_a: Edge
    e_b: Edge
    e_c: Edge
    positions: Tuple[int, int, int, int, int, int]

    def describe(self) -> str:
        return f"e_a={self.e_a} e_b={self.e_b} e_c={self.e_c}"

    def as_dict(self) -> Dict[str, Any]:
        return {
            "e_a": list(self.e_a),
            "e_b": list(self.e_b),
            "e_c": list(self.e_c),
            "positions": list(self.positions),
        }


def positions(order: Order) -> Dict[int, int]:
    return {v: i for i, v in enumerate(order)}


def _spans(pos: Mapping[int, int], page: Iterable[Tuple[int, int]]) -> List[_Span]:
    spans = []
    for u, v in page:
        l, r = (pos[u], pos[v]) if pos[u] < pos[v] else (pos[v], pos[u])
        spans.append((l, r, normalize_edge(u, v)))
    spans.sort()
    return spans


def _has_pattern(spans: List[_Span]) -> bool:
    # an edge plays e_b iff it is strictly enclosed by one page edge and
    # crossed from inside by another
    for bl, br, _ in spans:
        enclosed = any(al < bl and br < ar for al, ar, _ in spans)
        if enclosed and any(bl < cl < br < cr for cl, cr, _ in spans):
            return True
    return False


def find_pattern(order: Order, page: Iterable[Tuple[int, int]]) -> Optional[PatternWitness]:
    """Find the forbidden triple on one page.

    Args:
        order: The vertex order.
        page: The edges of the page; every endpoint must occur in `order`.

    Returns:
        The witness whose positions `(a, b, c)` are lexicographically
        smallest, ties broken by `(b', a', c')`; `None` if the page is
        free of the pattern.
    """
    spans = _spans(positions(order), page)
    if not _has_pattern(spans):
        return None
    witnesses = (
        PatternWitness(ea, eb, ec, (al, bl, cl, br, ar, cr))
        for al, ar, ea in spans
        for bl, br, eb in spans
        if al < bl and br < ar
        for cl, cr, ec in spans
        if bl < cl < br < cr
    )
    return min(witnesses, key=lambda w: w.positions)


def creates_pattern(page_spans: Sequence[Tuple[int, int]], span: Tuple[int, int]) -> bool:
    """Return whether adding `span` to a pattern-free page creates the
    forbidden triple. Spans are `(left, right)` position pairs."""
    l, r = span
    for bl, br in page_spans:
        # new edge as e_a
        if l < bl and br < r and any(bl < cl < br < cr for cl, cr in page_spans):
            return True
        # new edge as e_c
        if bl < l < br < r and any(al < bl and br < ar for al, ar in page_spans):
            return True
    # new edge as e_b
    if any(al < l and r < ar for al, ar in page_spans):
        return any(l < cl < r < cr for cl, cr in page_spans)
    return False


def _labels(pos: Mapping[int, int], page: Iterable[Tuple[int, int]]) -> Dict[Edge, EdgeKind]:
    spans = _spans(pos, page)
    labels = {}
    for l, r, e in spans:
        enclosed = any(al < l and r < ar for al, ar, _ in spans)
        labels[e] = EdgeKind.HEAD if enclosed else EdgeKind.TAIL
    return labels


def classify_page(order: Order, page: Iterable[Tuple[int, int]]) -> Dict[Edge, EdgeKind]:
    """Label every edge of a pattern-free page as a tail-edge or a head-edge.

    An edge is a tail-edge when no page edge strictly encloses it;
    otherwise it is a head-edge.

    Raises:
        PatternError: The page contains the forbidden triple.
    """
    page = list(page)
    witness = find_pattern(order, page)
    if witness is not None:
        raise PatternError(0, witness)
    return _labels(positions(order), page)


class ScheduleTrace:
    """
    The rique operations of every page, grouped by vertex in order.

    The rique state is a sequence of edges with the tail at the left
    end and the head at the right end.
    """

    def __init__(
        self,
        order: Order,
        events: Sequence[Sequence[ScheduleEvent]],
        labels: Sequence[Mapping[Edge, EdgeKind]],
    ):
        self.order: Tuple[int, ...] = tuple(order)
        self.events: Tuple[Tuple[ScheduleEvent, ...], ...] = tuple(tuple(p) for p in events)
        self.labels: Tuple[Dict[Edge, EdgeKind], ...] = tuple(dict(lab) for lab in labels)

    @property
    def page_count(self) -> int:
        return len(self.events)

    def replay(self) -> List[int]:
        """Replay every page against an explicit rique.

        Returns:
            The maximum rique size reached on each page.

        Raises:
            ScheduleError: An insertion is not at the left endpoint, a
                removal is not at the right endpoint or does not target
                the current head or tail, an edge is handled twice, or
                the rique is not empty at the end.
        """
        pos = positions(self.order)
        sizes = []
        for index, page_events in enumerate(self.events):
            state: Deque[Edge] = deque()
            inserted = set()
            removed = set()
            last = -1
            largest = 0
            for vertex, action, edge in page_events:
                where = f"page {index + 1}, vertex {vertex}, edge {edge}"
                if pos[vertex] < last:
                    raise ScheduleError(f"{where}: events out of order")
                last = pos[vertex]
                left, right = sorted(edge, key=pos.__getitem__)
                if action is Action.INSERT:
                    if vertex != left or edge in inserted:
                        raise ScheduleError(f"{where}: invalid insertion")
                    inserted.add(edge)
                    state.append(edge)
                    largest = max(largest, len(state))
                    continue
                if vertex != right or edge in removed:
                    raise ScheduleError(f"{where}: invalid removal")
                if action is Action.REMOVE_HEAD and state and state[-1] == edge:
                    state.pop()
                elif action is Action.REMOVE_TAIL and state and state[0] == edge:
                    state.popleft()
                else:
                    raise ScheduleError(f"{where}: edge is not at the {action.value[7:]}")
                removed.add(edge)
            if state:
                raise ScheduleError(f"page {index + 1}: rique not empty at the end")
            sizes.append(largest)
        return sizes

    def as_dict(self) -> Dict[str, Any]:
        return {
            str(i + 1): [[ev.vertex, ev.action.value, list(ev.edge)] for ev in page]
            for i, page in enumerate(self.events)
        }

    def page_lines(self) -> List[str]:
        lines = []
        for i, page in enumerate(self.events):
            steps = " ".join(f"{ev.vertex}:{ev.action.value}({ev.edge[0]},{ev.edge[1]})" for ev in page)
            lines.append(f"page {i + 1} {steps}".rstrip())
        return lines


def _simulate(order: Order, page: Sequence[Edge], labels: Mapping[Edge, EdgeKind]) -> List[ScheduleEvent]:
    pos = positions(order)
    incoming: Dict[int, set] = {v: set() for v in order}
    tails: Dict[int, List[Edge]] = {v: [] for v in order}
    heads: Dict[int, List[Edge]] = {v: [] for v in order}
    target: Dict[Edge, int] = {}
    for e in page:
        left, right = sorted(e, key=pos.__getitem__)
        incoming[right].add(e)
        target[e] = pos[right]
        (tails if labels[e] is EdgeKind.TAIL else heads)[left].append(e)

    state: Deque[Edge] = deque()
    events: List[ScheduleEvent] = []
    for v in order:
        pending = set(incoming[v])
        while pending:
            if state and state[0] in pending and labels[state[0]] is EdgeKind.TAIL:
                e = state.popleft()
                events.append(ScheduleEvent(v, Action.REMOVE_TAIL, e))
            elif state and state[-1] in pending and labels[state[-1]] is EdgeKind.HEAD:
                e = state.pop()
                events.append(ScheduleEvent(v, Action.REMOVE_HEAD, e))
            else:
                raise ScheduleError(f"vertex {v}: incoming edges {sorted(pending)} are blocked")
            pending.remove(e)
        outgoing = sorted(tails[v], key=target.__getitem__)
        outgoing += sorted(heads[v], key=target.__getitem__, reverse=True)
        for e in outgoing:
            state.append(e)
            events.append(ScheduleEvent(v, Action.INSERT, e))
    return events


def build_schedule(
    order: Order, pages: Sequence[Iterable[Tuple[int, int]]], check: bool = True
) -> ScheduleTrace:
    """Build the rique schedule of every page.

    At each vertex, incoming edges are removed first: tail-edges from the
    tail and head-edges from the head, in whatever interleaving the
    current state forces. Outgoing edges are then inserted at the head:
    tail-edges by increasing target position, followed by head-edges by
    decreasing target position.

    Args:
        order: The vertex order.
        pages: The edge sets of the pages.
        check: When set, a page containing the forbidden triple raises
            `PatternError` before any simulation. When cleared, the
            simulation runs anyway and fails with `ScheduleError`.

    Raises:
        PatternError: `check` is set and some page contains the triple.
        ScheduleError: The simulation got stuck.
    """
    pos = positions(order)
    events = []
    labels = []
    for index, page in enumerate(pages):
        page = [normalize_edge(u, v) for u, v in page]
        if check:
            witness = find_pattern(order, page)
            if witness is not None:
                raise PatternError(index, witness)
        page_labels = _labels(pos, page)
        try:
            events.append(_simulate(order, page, page_labels))
        except ScheduleError as err:
            raise ScheduleError(f"page {index + 1}: {err}") from err
        labels.append(page_labels)
    return ScheduleTrace(order, events, labels)


class LinearLayout:
    """
    A vertex order of `0 .. n-1` and a list of disjoint edge sets (pages).

    Raises:
        LayoutError: The order is not a permutation of `0 .. n-1`, a
            page edge has an endpoint outside it, or two pages share
            an edge.
    """

    __slots__ = ("order", "pages", "_pos")

    def __init__(self, order: Iterable[int], pages: Iterable[Iterable[Tuple[int, int]]]):
        self.order: Tuple[int, ...] = tuple(order)
        if sorted(self.order) != list(range(len(self.order))):
            raise LayoutError(f"order {list(self.order)} is not a permutation of 0 .. n-1")
        self._pos = positions(self.order)
        normalized = []
        seen: Dict[Edge, int] = {}
        for index, page in enumerate(pages):
            edges = frozenset(normalize_edge(u, v) for u, v in page)
            for e in edges:
                if e[0] not in self._pos or e[1] not in self._pos or e[0] == e[1]:
                    raise LayoutError(f"page {index + 1}: edge {e} is not on the order's vertices")
                if e in seen:
                    raise LayoutError(f"edge {e} is on pages {seen[e] + 1} and {index + 1}")
                seen[e] = index
            normalized.append(edges)
        self.pages: Tuple[FrozenSet[Edge], ...] = tuple(normalized)

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def page_count(self) -> int:
        return len(self.pages)

    def position(self, v: int) -> int:
        return self._pos[v]

    def edges(self) -> FrozenSet[Edge]:
        return frozenset().union(*self.pages)

    def covers(self, g: Graph) -> bool:
        return self.n == g.n and self.edges() == g.edges

    def relabeled(self, mapping: Mapping[int, int]) -> "LinearLayout":
        return LinearLayout(
            (mapping[v] for v in self.order),
            ([(mapping[u], mapping[v]) for u, v in page] for page in self.pages),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearLayout):
            return NotImplemented
        return self.order == other.order and self.pages == other.pages

    def __hash__(self) -> int:
        return hash((self.order, self.pages))

    def __repr__(self) -> str:
        return f"LinearLayout(order={list(self.order)}, pages={self.page_count})"


class ValidationReport(NamedTuple):
    valid: bool
    page_count: int
    witnesses: Dict[int, PatternWitness]
    trace: Optional[ScheduleTrace]

    def as_dict(self) -> Dict[str, Any]:
        pages = []
        sizes = self.trace.replay() if self.trace is not None else []
        for i in range(self.page_count):
            entry: Dict[str, Any] = {"index": i + 1, "valid": i not in self.witnesses}
            if sizes:
                entry["max_size"] = sizes[i]
            pages.append(entry)
        return {
            "valid": self.valid,
            "page": pages,
            "witness": {str(i + 1): w.as_dict() for i, w in sorted(self.witnesses.items())},
            "trace": self.trace.as_dict() if self.trace is not None else None,
        }

    def to_text(self) -> str:
        lines = [f"valid: {str(self.valid).lower()}"]
        for entry in self.as_dict()["page"]:
            status = "ok" if entry["valid"] else "pattern"
            size = f" max-size {entry['max_size']}" if "max_size" in entry else ""
            lines.append(f"page: {entry['index']} {status}{size}")
        for i, w in sorted(self.witnesses.items()):
            lines.append(f"witness: page {i + 1} {w.describe()}")
        if self.trace is not None:
            lines.extend(f"trace: {line}" for line in self.trace.page_lines())
        return "\n".join(lines) + "\n"


def validate_layout(g: Graph, layout: LinearLayout) -> ValidationReport:
    """Check every page of `layout` for the forbidden triple.

    Returns:
        A report; valid layouts carry a replayed `ScheduleTrace`,
        invalid ones a witness for every failing page.

    Raises:
        LayoutError: The layout's order or pages do not match `g`.
    """
    if layout.n != g.n:
        raise LayoutError(f"layout orders {layout.n} vertices, graph has {g.n}")
    if layout.edges() != g.edges:
        missing = sorted(g.edges - layout.edges())
        extra = sorted(layout.edges() - g.edges)
        raise LayoutError(f"pages do not partition the edges (missing {missing}, extra {extra})")

    witnesses = {}
    for index, page in enumerate(layout.pages):
        witness = find_pattern(layout.order, page)
        if witness is not None:
            log.info(f"page {index + 1}: {witness.describe()}")
            witnesses[index] = witness
    if witnesses:
        return ValidationReport(False, layout.page_count, witnesses, None)

    trace = build_schedule(layout.order, layout.pages)
    trace.replay()
    return ValidationReport(True, layout.page_count, {}, trace)


def page_is_stack(order: Order, page: Iterable[Tuple[int, int]]) -> bool:
    """No two page edges cross."""
    spans = _spans(positions(order), page)
    return not any(al < bl < ar < br for al, ar, _ in spans for bl, br, _ in spans)


def page_is_queue(order: Order, page: Iterable[Tuple[int, int]]) -> bool:
    """No two page edges nest."""
    spans = _spans(positions(order), page)
    return not any(al < bl and br < ar for al, ar, _ in spans for bl, br, _ in spans)


def parse_layout(text: str) -> LinearLayout:
    """Parse a layout file.

    Raises:
        LayoutFormatError: A line is malformed, the order line is
            missing or repeated, or pages are not numbered `1 .. k`.
        LayoutError: The parsed layout is inconsistent.
    """
    order: Optional[List[int]] = None
    pages: List[List[Edge]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise LayoutFormatError(f"line {no}: expected 'order:' or 'page i:'")
        key = key.strip()
        try:
            if key == "order":
                if order is not None:
                    raise LayoutFormatError(f"line {no}: repeated order line")
                order = [int(tok) for tok in value.split()]
            elif key.startswith("page"):
                index = int(key[4:])
                if index != len(pages) + 1:
                    raise LayoutFormatError(f"line {no}: expected page {len(pages) + 1}")
                page = []
                for entry in value.split(","):
                    if not entry.strip():
                        continue
                    u, v = (int(tok) for tok in entry.split())
                    page.append((u, v))
                pages.append(page)
            else:
                raise LayoutFormatError(f"line {no}: unknown key '{key}'")
        except ValueError as err:
            if isinstance(err, LayoutFormatError):
                raise
            raise LayoutFormatError(f"line {no}: malformed entry '{line}'") from err
    if order is None:
        raise LayoutFormatError("missing 'order:' line")
    return LinearLayout(order, pages)


def serialize_layout(layout: LinearLayout) -> str:
    lines = ["order: " + " ".join(str(v) for v in layout.order)]
    for i, page in enumerate(layout.pages):
        edges = sorted(page, key=lambda e: (layout.position(e[0]), layout.position(e[1])))
        lines.append(f"page {i + 1}: " + ", ".join(f"{u} {v}" for u, v in edges))
    return "\n".join(lines) + "\n"
