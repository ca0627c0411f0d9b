"""
Command-line interface for rique layouts.

Subcommands:
  validate      check a layout of a graph, page by page
  riquenumber   compute the rique-number, exactly or with a SAT solver
  onesided      look for a strongly 1-sided Hamiltonian path
  bounds        density and complete-graph bounds
  construct-kn  the ceil(n/3)-page layout of K_n
  encode        write the CNF for a page count
  table         the known rique-numbers of K_n
  reproduce     rerun the table rows and the oracle suites

Exit status is 0 on success or a positive answer, 1 on a well-formed
negative answer (invalid layout, no path, no layout found) and 2 on bad
usage or unreadable input.

The default SAT solver is read from `$RIQUE_SOLVER`: a pysat solver name
such as `g3` or `cd19`, or `cmd:<command>` for an external DIMACS solver
(`$FILE` in the command is replaced by the CNF path).
"""

import argparse
import json
import logging
import os
import random
import sys
from typing import Any, Dict, List, Optional, Sequence

import networkx as nx

from py_rique import corpus
from py_rique.bounds import (
    KN_TABLE,
    construct_kn_layout,
    density_bound,
    density_lower_bound,
    kn_lower_bound,
    kn_upper_bound,
    table_kn,
)
from py_rique.embedding_bridge import Chirality, one_sided_chirality
from py_rique.graph import Graph, connected, is_planar, parse_graph, parse_rotation, serialize_rotation
from py_rique.plane_hamiltonian import plane_strongly_1sided
from py_rique.rique_layout import (
    ScheduleError,
    build_schedule,
    find_pattern,
    parse_layout,
    serialize_layout,
    validate_layout,
)
from py_rique.rique_solver import RiqueSolver, Symmetry
from py_rique.sat_encoding import SolverError, encode_sat
from py_rique.spqr_dp import planar_strongly_1sided, st_one_sided
from py_rique.ui.arc_diagram import save_arc_diagram

log = logging.getLogger("cli")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

LOGFILE = "rique.log"


def timeout_seconds(text: str) -> float:
    """Parse `60`, `60s`, `2m` or `1h` into seconds."""
    units = {"s": 1, "m": 60, "h": 3600}
    scale = 1
    if text and text[-1] in units:
        scale = units[text[-1]]
        text = text[:-1]
    try:
        value = float(text) * scale
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid timeout '{text}'")
    if value <= 0:
        raise argparse.ArgumentTypeError("timeout must be positive")
    return value


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="rique", description="Restricted-input queue layouts.")
    parser.add_argument("-l", "--log", action="store_true", help=f"Enable logging to {LOGFILE}.")
    parser.add_argument("--json", action="store_true", help="Print reports as JSON.")
    parser.add_argument("--jobs", type=int, default=1, help="Parallel workers (default 1).")
    parser.add_argument("--seed", type=int, default=0, help="Seed for random corpora.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="Validate a layout.")
    p.add_argument("graph", help="Graph file.")
    p.add_argument("layout", help="Layout file.")
    p.add_argument("--svg", help="Draw the layout to this SVG file.")

    p = sub.add_parser("riquenumber", help="Compute the rique-number.")
    p.add_argument("graph", help="Graph file.")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="Backtracking search (default).")
    mode.add_argument(
        "--sat", nargs="?", const="", default=None, metavar="SOLVER",
        help="Use a SAT solver; defaults to $RIQUE_SOLVER or g3.",
    )
    p.add_argument("--kmin", type=int, default=1, help="First page count tried by --sat.")
    p.add_argument("--kmax", type=int, help="Last page count tried by --sat.")
    p.add_argument("--timeout", type=timeout_seconds, help="Per page count, e.g. 60s.")
    p.add_argument("--limit", type=int, default=9, help="Vertex cap of --exact.")
    p.add_argument("--symmetry", choices=[s.value for s in Symmetry], default=Symmetry.NONE.value)
    p.add_argument("--output", help="Write the witness layout to this file.")
    p.add_argument("--svg", help="Draw the witness layout to this SVG file.")

    p = sub.add_parser("onesided", help="Find a strongly 1-sided Hamiltonian path.")
    p.add_argument("graph", help="Graph file.")
    p.add_argument("--embedding", help="Keep this embedding fixed.")
    p.add_argument("--st", nargs=2, type=int, metavar=("S", "T"), help="Fix the end vertices.")
    p.add_argument(
        "--left-only", action="store_true", help="With --embedding, do not try the mirror image."
    )
    p.add_argument("--output", help="Write the witness embedding to this file.")

    p = sub.add_parser("bounds", help="Bounds for K_n and the density bound.")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int, nargs="?", help="Page count for the density bound.")
    p.add_argument("--as-stated", action="store_true", help="Use the alternative density form.")

    p = sub.add_parser("construct-kn", help="Lay out K_n on ceil(n/3) pages.")
    p.add_argument("n", type=int)
    p.add_argument("--output", help="Write the layout to this file.")
    p.add_argument("--svg", help="Draw the layout to this SVG file.")

    p = sub.add_parser("encode", help="Write the CNF for a page count.")
    p.add_argument("graph", help="Graph file.")
    p.add_argument("pages", type=int)
    p.add_argument("--output", help="DIMACS file (default: stdout).")
    p.add_argument("--map", help="Variable-map sidecar file.")
    p.add_argument("--symmetry", choices=[s.value for s in Symmetry], default=Symmetry.NONE.value)

    sub.add_parser("table", help="Print the known rique-numbers of K_n.")

    p = sub.add_parser("reproduce", help="Rerun the small table rows and the oracle suites.")
    p.add_argument("--max-n", type=int, default=7, help="Largest K_n searched exactly.")
    p.add_argument("--count", type=int, default=50, help="Random graphs per suite.")
    p.add_argument("--sat", action="store_true", help="Also solve K_8 with the SAT solver.")

    return parser.parse_args(argv)


def _read(path: str) -> str:
    with open(path, "r") as fin:
        return fin.read()


def _write(path: str, text: str) -> None:
    with open(path, "w") as fout:
        fout.write(text)


def _emit(cfg: argparse.Namespace, report: Dict[str, Any], text: str) -> None:
    if cfg.json:
        print(json.dumps(report, indent=2))
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def cmd_validate(cfg: argparse.Namespace) -> int:
    g = parse_graph(_read(cfg.graph))
    layout = parse_layout(_read(cfg.layout))
    report = validate_layout(g, layout)
    if cfg.svg:
        save_arc_diagram(layout, cfg.svg)
    _emit(cfg, report.as_dict(), report.to_text())
    return EXIT_OK if report.valid else EXIT_NEGATIVE


def cmd_riquenumber(cfg: argparse.Namespace) -> int:
    g = parse_graph(_read(cfg.graph))
    symmetry = Symmetry(cfg.symmetry)
    if cfg.sat is not None:
        solver = RiqueSolver.create(
            RiqueSolver.SearchTactic.SAT,
            solver=cfg.sat or None,
            kmin=cfg.kmin,
            kmax=cfg.kmax,
            timeout=cfg.timeout,
            jobs=cfg.jobs,
            symmetry=symmetry,
        )
    else:
        solver = RiqueSolver.create(
            RiqueSolver.SearchTactic.EXACT, limit=cfg.limit, symmetry=symmetry, jobs=cfg.jobs
        )
    result = solver.rique_number(g)
    layout_text = serialize_layout(result.layout) if result.layout is not None else None
    if result.layout is not None:
        if cfg.output:
            _write(cfg.output, layout_text or "")
        if cfg.svg:
            save_arc_diagram(result.layout, cfg.svg)
    report = {
        "low": result.low,
        "high": result.high,
        "exact": result.exact,
        "layout": layout_text,
    }
    text = f"rique-number: {result.describe()}\n"
    if layout_text is not None and not cfg.output:
        text += layout_text
    _emit(cfg, report, text)
    return EXIT_OK if result.high is not None else EXIT_NEGATIVE


def _none(cfg: argparse.Namespace) -> int:
    _emit(cfg, {"path": None, "embedding": None}, "none\n")
    return EXIT_NEGATIVE


def cmd_onesided(cfg: argparse.Namespace) -> int:
    g = parse_graph(_read(cfg.graph))
    if cfg.embedding:
        rot = parse_rotation(_read(cfg.embedding), g)
        if not rot.is_plane():
            raise ValueError(f"embedding '{cfg.embedding}' is not plane")
        if not connected(g):
            return _none(cfg)
        ham = plane_strongly_1sided(rot, cfg.left_only)
        if ham is None:
            return _none(cfg)
        path = ham.vertices
        chirality = one_sided_chirality(rot, path, cfg.left_only)
        embedding = rot.mirror() if chirality is Chirality.MIRRORED else rot
    elif cfg.st:
        s, t = cfg.st
        if not (0 <= s < g.n and 0 <= t < g.n):
            raise ValueError(f"end vertices {s}, {t} are not vertices of the graph")
        if s == t:
            raise ValueError("end vertices must differ")
        if not connected(g) or not is_planar(g).planar:
            return _none(cfg)
        found = st_one_sided(g, s, t)
        if found is None:
            return _none(cfg)
        path, embedding = found.path.vertices, found.embedding
    else:
        if not connected(g):
            return _none(cfg)
        result = planar_strongly_1sided(g)
        if result is None:
            return _none(cfg)
        path, embedding = result.path.vertices, result.embedding

    rotation_text = serialize_rotation(embedding)
    if cfg.output:
        _write(cfg.output, rotation_text)
    text = "path: " + " ".join(str(v) for v in path) + "\n"
    if not cfg.output:
        text += "embedding:\n" + rotation_text
    _emit(cfg, {"path": list(path), "embedding": rotation_text.splitlines()}, text)
    return EXIT_OK


def cmd_bounds(cfg: argparse.Namespace) -> int:
    n = cfg.n
    m = n * (n - 1) // 2
    ks = [cfg.k] if cfg.k is not None else list(range(1, kn_upper_bound(n) + 1))
    report: Dict[str, Any] = {
        "n": n,
        "edges": m,
        "density": {str(k): density_bound(n, k, cfg.as_stated) for k in ks},
        "density_lower": density_lower_bound(n, m),
        "upper": kn_upper_bound(n),
    }
    lines = [f"n: {n}", f"edges: {m}"]
    lines += [f"density k={k}: {bound}" for k, bound in report["density"].items()]
    lines.append(f"density-lower: {report['density_lower']}")
    if n >= 4:
        lower = kn_lower_bound(n)
        report["lower"] = lower.ceiling
        report["lower_tight"] = lower.tight
        report["lower_simplified"] = lower.simplified
        lines.append(f"lower: {lower.ceiling}")
        lines.append(f"lower-tight: {lower.tight:.3f}")
        lines.append(f"lower-simplified: {lower.simplified:.3f}")
    if n in KN_TABLE:
        entry = table_kn(n)
        report["table"] = [entry.low, entry.high]
        lines.append(f"table: {entry.describe()}")
    lines.append(f"upper: {report['upper']}")
    _emit(cfg, report, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_construct_kn(cfg: argparse.Namespace) -> int:
    layout = construct_kn_layout(cfg.n)
    report = validate_layout(Graph.from_networkx(nx.complete_graph(cfg.n)), layout)
    assert report.valid, f"K_{cfg.n} construction failed validation"
    text = serialize_layout(layout)
    if cfg.output:
        _write(cfg.output, text)
    if cfg.svg:
        save_arc_diagram(layout, cfg.svg)
    summary = f"pages: {layout.page_count}\n"
    _emit(cfg, {"pages": layout.page_count, "layout": text}, summary if cfg.output else summary + text)
    return EXIT_OK


def cmd_encode(cfg: argparse.Namespace) -> int:
    g = parse_graph(_read(cfg.graph))
    cnf = encode_sat(g, cfg.pages, Symmetry(cfg.symmetry))
    if cfg.output:
        cnf.write(cfg.output, cfg.map)
    else:
        if cfg.map:
            _write(cfg.map, "".join(f"{name} {index}\n" for name, index in cnf.variable_map()))
        sys.stdout.write(cnf.to_dimacs())
    log.info(f"{g}, {cfg.pages} pages: {cnf.nv} variables, {len(cnf.clauses)} clauses")
    return EXIT_OK


def cmd_table(cfg: argparse.Namespace) -> int:
    rows = {str(n): [entry.low, entry.high] for n, entry in sorted(KN_TABLE.items())}
    text = "".join(f"K_{n}: {entry.describe()}\n" for n, entry in sorted(KN_TABLE.items()))
    _emit(cfg, rows, text)
    return EXIT_OK


def _reproduce_table(cfg: argparse.Namespace, lines: List[str]) -> int:
    failures = 0
    for n in range(4, cfg.max_n + 1):
        kn = Graph.from_networkx(nx.complete_graph(n))
        solver = RiqueSolver.create(
            RiqueSolver.SearchTactic.EXACT, limit=cfg.max_n, symmetry=Symmetry.FIRST_VERTEX, jobs=cfg.jobs
        )
        k = solver.rique_number(kn).high
        ok = k == table_kn(n).low
        failures += not ok
        lines.append(f"table K_{n}: exact {k} {'ok' if ok else 'MISMATCH'}")
    if cfg.sat:
        k8 = Graph.from_networkx(nx.complete_graph(8))
        solver = RiqueSolver.create(RiqueSolver.SearchTactic.SAT, symmetry=Symmetry.FIRST_VERTEX)
        result = solver.rique_number(k8)
        ok = result.exact and result.high == table_kn(8).low
        failures += not ok
        lines.append(f"table K_8: sat {result.describe()} {'ok' if ok else 'MISMATCH'}")
    return failures


def _reproduce_schedules(cfg: argparse.Namespace, lines: List[str]) -> int:
    rng = random.Random(cfg.seed)
    failures = 0
    for _ in range(cfg.count):
        n = rng.randint(3, 6)
        g = corpus.random_graph(n, rng)
        order = corpus.random_order(n, rng)
        free = find_pattern(order, g.edges) is None
        try:
            build_schedule(order, [g.edges], check=False).replay()
            feasible = True
        except ScheduleError:
            feasible = False
        if free != feasible:
            failures += 1
            log.error(f"{g} order {order}: pattern-free {free}, schedule {feasible}")
    lines.append(f"schedules: {cfg.count} random pages, {failures} discrepancies")
    return failures


def _reproduce_plane(cfg: argparse.Namespace, lines: List[str]) -> int:
    rng = random.Random(cfg.seed)
    failures = 0
    for _ in range(cfg.count):
        g = corpus.random_planar_graphs(rng.randint(2, 7), 1, rng.randrange(2**32))[0]
        _, rot = is_planar(g)
        assert rot is not None
        found = plane_strongly_1sided(rot) is not None
        expected = next(corpus.one_sided_paths(rot), None) is not None
        if found != expected:
            failures += 1
            log.error(f"{g}: plane test {found}, oracle {expected}")
    lines.append(f"plane: {cfg.count} random embeddings, {failures} discrepancies")
    return failures


def _reproduce_planar(cfg: argparse.Namespace, lines: List[str]) -> int:
    rng = random.Random(cfg.seed)
    failures = 0
    for _ in range(cfg.count):
        g = corpus.random_planar_graphs(rng.randint(2, 8), 1, rng.randrange(2**32))[0]
        found = planar_strongly_1sided(g) is not None
        expected = corpus.one_sided_order(g) is not None
        if found != expected:
            failures += 1
            log.error(f"{g}: SPQR program {found}, oracle {expected}")
    lines.append(f"planar: {cfg.count} random graphs, {failures} discrepancies")
    return failures


def cmd_reproduce(cfg: argparse.Namespace) -> int:
    lines: List[str] = []
    failures = _reproduce_table(cfg, lines)
    failures += _reproduce_schedules(cfg, lines)
    failures += _reproduce_plane(cfg, lines)
    failures += _reproduce_planar(cfg, lines)
    lines.append(f"discrepancies: {failures}")
    _emit(cfg, {"lines": lines, "discrepancies": failures}, "\n".join(lines) + "\n")
    return EXIT_OK if failures == 0 else EXIT_NEGATIVE


COMMANDS = {
    "validate": cmd_validate,
    "riquenumber": cmd_riquenumber,
    "onesided": cmd_onesided,
    "bounds": cmd_bounds,
    "construct-kn": cmd_construct_kn,
    "encode": cmd_encode,
    "table": cmd_table,
    "reproduce": cmd_reproduce,
}


def setup_logging(enabled: bool) -> None:
    logfile = LOGFILE if enabled else os.devnull
    logfmt = "[%(name)s::%(funcName)s]: %(levelname)s: %(message)s"
    logging.basicConfig(filename=logfile, level=logging.DEBUG, format=logfmt)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE
    setup_logging(cfg.log)
    log.info(f"command {cfg.command}")
    try:
        return COMMANDS[cfg.command](cfg)
    except (OSError, ValueError, SolverError) as err:
        log.error(f"{cfg.command}: {err}")
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
