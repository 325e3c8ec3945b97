"""Command-line interface and file formats.

Matrix files come in two shapes, both with exact values only (integers or
"p/q" rationals; "." or "-inf" for the bottom element):

  dense    first line "n", then n whitespace-separated rows
  sparse   first line "n m", then m lines "i j w" with 1-based indices

Expansions serialize to a JSON document with every number carried as an
exact decimal string, so a dump/load round trip evaluates identically.

Exit codes: 0 success (or verified match), 1 verified mismatch, 2 usage,
parse, or domain errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .charpoly import characteristic_roots
from .csr import CsrExpansion, CsrTerm, expand
from .digraph import (
    CircuitRecord,
    build_graph,
    critical_graph,
    karp_max_cycle_mean,
    principal_eigenvectors,
)
from .oracle import brute_power_check
from .partition import partition_nodes
from .tropical import DiagonalScaling, TropicalMatrix, as_value, matrix_power
from .visualize import visualize_all


class MatrixFormatError(ValueError):
    """A matrix or expansion file does not follow the documented grammar."""


_INT_RE = re.compile(r"[+-]?\d+\Z")


def parse_value_token(token: str):
    """One value token: integer, "p/q", or the bottom element ("." / "-inf")."""
    if token in (".", "-inf"):
        return None
    if _INT_RE.match(token):
        return int(token)
    num, sep, den = token.partition("/")
    if sep and _INT_RE.match(num) and den.isdigit() and int(den) > 0:
        return as_value(Fraction(int(num), int(den)))
    raise MatrixFormatError(f"bad value token {token!r}")


def format_value(v) -> str:
    return "." if v is None else str(v)


def parse_matrix(text: str) -> TropicalMatrix:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    header = lines[0].split()
    if len(header) == 1:
        return _parse_dense(header, lines[1:])
    if len(header) == 2:
        return _parse_sparse(header, lines[1:])
    raise MatrixFormatError("header must be 'n' (dense) or 'n m' (sparse)")


def _parse_count(token: str, what: str) -> int:
    if not token.isdigit():
        raise MatrixFormatError(f"{what} must be a nonnegative integer, got {token!r}")
    return int(token)


def _parse_dense(header, body) -> TropicalMatrix:
    n = _parse_count(header[0], "dimension")
    if n == 0:
        raise MatrixFormatError("dimension must be positive")
    if len(body) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(body)}")
    rows = []
    for ln in body:
        tokens = ln.split()
        if len(tokens) != n:
            raise MatrixFormatError(f"expected {n} entries per row, found {len(tokens)}")
        rows.append([parse_value_token(tok) for tok in tokens])
    return TropicalMatrix.from_rows(rows)


def _parse_sparse(header, body) -> TropicalMatrix:
    n = _parse_count(header[0], "dimension")
    m = _parse_count(header[1], "entry count")
    if n == 0:
        raise MatrixFormatError("dimension must be positive")
    if len(body) != m:
        raise MatrixFormatError(f"expected {m} entry lines, found {len(body)}")
    entries = {}
    for ln in body:
        tokens = ln.split()
        if len(tokens) != 3:
            raise MatrixFormatError(f"entry line needs 'i j w', got {ln!r}")
        i = _parse_count(tokens[0], "row index")
        j = _parse_count(tokens[1], "col index")
        if not (1 <= i <= n and 1 <= j <= n):
            raise MatrixFormatError(f"index ({i}, {j}) outside 1..{n}")
        v = parse_value_token(tokens[2])
        if v is None:
            raise MatrixFormatError("sparse entries must be finite")
        if (i - 1, j - 1) in entries:
            raise MatrixFormatError(f"duplicate entry ({i}, {j})")
        entries[(i - 1, j - 1)] = v
    return TropicalMatrix(n, n, entries)


def serialize_matrix(a: TropicalMatrix, sparse: bool = False) -> str:
    if sparse:
        lines = [f"{a.rows} {a.finite_count}"]
        for (i, j), v in sorted(a.entries.items()):
            lines.append(f"{i + 1} {j + 1} {format_value(v)}")
        return "\n".join(lines) + "\n"
    lines = [str(a.rows)]
    grid = a.to_rows()
    for row in grid:
        lines.append(" ".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def matrix_grid(a: TropicalMatrix) -> str:
    """Aligned dense rendering (no header line)."""
    cells = [[format_value(v) for v in row] for row in a.to_rows()]
    widths = [max(len(cells[i][j]) for i in range(a.rows)) for j in range(a.cols)]
    return "\n".join(
        " ".join(cell.rjust(widths[j]) for j, cell in enumerate(row)) for row in cells
    )


def matrix_digest(a: TropicalMatrix) -> str:
    return "sha256:" + hashlib.sha256(serialize_matrix(a).encode()).hexdigest()


def _matrix_block(m: TropicalMatrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [
            [i + 1, j + 1, format_value(v)] for (i, j), v in sorted(m.entries.items())
        ],
    }


def _matrix_from_block(block, rows=None, cols=None) -> TropicalMatrix:
    try:
        r, c = int(block["rows"]), int(block["cols"])
        raw = block["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"bad matrix block: {exc}")
    if (rows is not None and r != rows) or (cols is not None and c != cols):
        raise MatrixFormatError("matrix block dimensions are inconsistent")
    entries = {}
    for item in raw:
        if len(item) != 3:
            raise MatrixFormatError("matrix block entries must be [i, j, w] triples")
        i, j, w = item
        entries[(int(i) - 1, int(j) - 1)] = parse_value_token(str(w))
    return TropicalMatrix(r, c, entries)


def dump_expansion(x: CsrExpansion, input_digest: str | None = None) -> dict:
    terms = []
    for term in x.terms:
        terms.append(
            {
                "group": term.group,
                "rate": format_value(term.rate),
                "reduced": term.reduced,
                "circuit": {
                    "nodes": [v + 1 for v in term.circuit.nodes],
                    "weight": format_value(term.circuit.weight),
                },
                "nodes": [v + 1 for v in term.nodes],
                "scaling": [format_value(v) for v in term.scaling.values],
                "classes": None
                if term.classes is None
                else [[v + 1 for v in cls] for cls in term.classes],
                "C": _matrix_block(term.C),
                "S": _matrix_block(term.S),
                "R": _matrix_block(term.R),
            }
        )
    return {
        "format": "maxplus-expansion/1",
        "tool": f"maxplus {__version__}",
        "n": x.n,
        "threshold": x.threshold,
        "input_digest": input_digest,
        "terms": terms,
    }


def load_expansion(doc: dict) -> CsrExpansion:
    if not isinstance(doc, dict) or doc.get("format") != "maxplus-expansion/1":
        raise MatrixFormatError("not a maxplus-expansion/1 document")
    try:
        n = int(doc["n"])
        threshold = int(doc["threshold"])
        raw_terms = doc["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"bad expansion document: {exc}")
    terms = []
    for raw in raw_terms:
        try:
            nodes = tuple(int(v) - 1 for v in raw["nodes"])
            circuit_nodes = tuple(int(v) - 1 for v in raw["circuit"]["nodes"])
            circuit = CircuitRecord(
                circuit_nodes, parse_value_token(str(raw["circuit"]["weight"]))
            )
            scaling = DiagonalScaling(
                tuple(parse_value_token(str(v)) for v in raw["scaling"])
            )
            classes = raw.get("classes")
            if classes is not None:
                classes = tuple(tuple(int(v) - 1 for v in cls) for cls in classes)
            ell = int(raw["S"]["rows"])
            term = CsrTerm(
                rate=parse_value_token(str(raw["rate"])),
                C=_matrix_from_block(raw["C"], rows=n, cols=ell),
                S=_matrix_from_block(raw["S"], rows=ell, cols=ell),
                R=_matrix_from_block(raw["R"], rows=ell, cols=n),
                circuit=circuit,
                group=int(raw["group"]),
                nodes=nodes,
                scaling=scaling,
                reduced=bool(raw.get("reduced", False)),
                classes=classes,
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MatrixFormatError):
                raise
            raise MatrixFormatError(f"bad expansion term: {exc}")
        terms.append(term)
    return CsrExpansion(n=n, terms=tuple(terms), threshold=threshold)


def _read_matrix(path: str) -> TropicalMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def _fmt_circuit(circuit: CircuitRecord) -> str:
    return str(circuit)


def _cmd_roots(args) -> int:
    a = _read_matrix(args.file)
    mmcs = characteristic_roots(a)
    for root, mult in zip(mmcs.roots, mmcs.multiplicities):
        print(f"{format_value(root)} (x{mult})")
    if mmcs.epsilon_multiplicity:
        print(f"-inf (x{mmcs.epsilon_multiplicity})")
    print("mmcs:")
    for k, mc in enumerate(mmcs.multicircuits):
        print(f"  M_{k} = {mc}  (length {mc.total_length}, weight {format_value(mc.total_weight)})")
    return 0


def _cmd_expand(args) -> int:
    a = _read_matrix(args.file)
    x = expand(a, reduce_by_cyclicity=args.reduce)
    if args.json:
        doc = dump_expansion(x, input_digest=matrix_digest(a))
        print(json.dumps(doc, indent=2))
        return 0
    print(f"n = {x.n}")
    print(f"threshold = {x.threshold}")
    for term in x.terms:
        print(
            f"term {term.group}: rate = {format_value(term.rate)}, "
            f"circuit = {_fmt_circuit(term.circuit)}"
            + (", reduced" if term.reduced else "")
        )
        print("C =")
        print(matrix_grid(term.C))
        print("S =")
        print(matrix_grid(term.S))
        print("R =")
        print(matrix_grid(term.R))
    if not x.terms:
        print("no terms: the matrix is acyclic, powers from n on are all '-inf'")
    return 0


def _parse_t_range(spec: str):
    lo, sep, hi = spec.partition("..")
    if not sep or not lo.isdigit() or not hi.isdigit() or int(lo) > int(hi):
        raise MatrixFormatError(f"bad t-range {spec!r}, expected 'a..b'")
    return range(int(lo), int(hi) + 1)


def _cmd_power(args) -> int:
    a = _read_matrix(args.file)
    try:
        t = int(args.t)
    except ValueError:
        raise MatrixFormatError(f"bad exponent {args.t!r}")
    if t < 0:
        raise MatrixFormatError("exponent must be nonnegative")
    mode = "naive" if args.naive else "csr" if args.csr else None
    if mode is None:
        mode = "csr" if t >= 2 * a.rows * a.rows else "naive"
    if mode == "naive":
        result = matrix_power(a, t)
    else:
        result = expand(a).evaluate(t)
    sys.stdout.write(serialize_matrix(result))
    return 0


def _cmd_verify(args) -> int:
    a = _read_matrix(args.file)
    x = expand(a)
    if args.t_range:
        ts = _parse_t_range(args.t_range)
    else:
        ts = range(x.threshold, x.threshold + 21)
    try:
        workers = int(os.environ.get("THREADS", "1"))
    except ValueError:
        workers = 1
    if workers > 1:
        chunks = [list(ts)[k::workers] for k in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(
                pool.map(lambda chunk: brute_power_check(a, x, chunk, seed=args.seed),
                         [c for c in chunks if c])
            )
        bad = [r for r in reports if not r.match]
        report = min(bad, key=lambda r: r.counterexample[2]) if bad else reports[0]
    else:
        report = brute_power_check(a, x, ts, seed=args.seed)
    if report.match:
        print(f"verify: OK ({report.instance})")
        return 0
    i, j, t, expected, got = report.counterexample
    print(
        f"verify: MISMATCH at entry ({i + 1}, {j + 1}), t = {t}: "
        f"expected {format_value(expected)}, expansion gives {format_value(got)}"
        + (f" [seed {report.seed}]" if report.seed is not None else "")
    )
    return 1


def _cmd_visualize(args) -> int:
    a = _read_matrix(args.file)
    mmcs = characteristic_roots(a)
    part = partition_nodes(mmcs, a.rows)
    vis = visualize_all(a, part)
    if not vis.groups:
        print("acyclic matrix: nothing to visualize")
        return 0
    for gv in vis.groups:
        nodes = ",".join(str(v + 1) for v in gv.nodes)
        print(
            f"group {gv.group}: nodes ({nodes}), rate = "
            f"{format_value(part.growth_rates[gv.group - 1])}, "
            f"circuit = {_fmt_circuit(part.quasi_critical[gv.group - 1])}"
        )
        print("d = (" + ", ".join(format_value(v) for v in gv.scaling.values) + ")")
        print(matrix_grid(gv.matrix))
    return 0


def _cmd_eigen(args) -> int:
    a = _read_matrix(args.file)
    lam = karp_max_cycle_mean(build_graph(a))
    if lam.is_epsilon:
        raise ValueError("matrix has no finite eigenvalue (acyclic graph)")
    print(f"eigenvalue = {format_value(lam.value)}")
    critical = critical_graph(build_graph(a), lam.value)
    print("critical nodes: " + ", ".join(str(v + 1) for v in sorted(critical.nodes)))
    print(
        "critical arcs: "
        + ", ".join(f"({u + 1},{v + 1})" for u, v in sorted(critical.arcs))
    )
    for node, column in principal_eigenvectors(a):
        vec = ", ".join(format_value(column.get(i, 0)) for i in range(a.rows))
        print(f"x_{node + 1} = ({vec})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxplus",
        description="Exact max-plus matrix powers via CSR expansions.",
    )
    parser.add_argument("--version", action="version", version=f"maxplus {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("roots", help="roots of the characteristic polynomial and the MMCS")
    p.add_argument("file")
    p.set_defaults(func=_cmd_roots)

    p = sub.add_parser("expand", help="compute the CSR expansion")
    p.add_argument("file")
    p.add_argument("--reduce", action="store_true", help="reduce terms by cyclicity classes")
    p.add_argument("--json", action="store_true", help="emit the expansion as JSON")
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("power", help="t-th max-plus power of the matrix")
    p.add_argument("file")
    p.add_argument("t")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--naive", action="store_true", help="repeated multiplication")
    mode.add_argument("--csr", action="store_true", help="evaluate the CSR expansion")
    p.set_defaults(func=_cmd_power)

    p = sub.add_parser("verify", help="check the expansion against naive powers")
    p.add_argument("file")
    p.add_argument("--t-range", help="inclusive range 'a..b' (default: threshold..threshold+20)")
    p.add_argument("--seed", type=int, help="seed recorded in the report")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("visualize", help="per-group visualized submatrices and scalings")
    p.add_argument("file")
    p.set_defaults(func=_cmd_visualize)

    p = sub.add_parser("eigen", help="maximum eigenvalue, critical graph, eigenvectors")
    p.add_argument("file")
    p.set_defaults(func=_cmd_eigen)
    return parser


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except OSError as exc:
        print(f"maxplus: cannot read input: {exc}", file=sys.stderr)
        return 2
    except MatrixFormatError as exc:
        print(f"maxplus: bad input: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"maxplus: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
