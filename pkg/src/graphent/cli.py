"""Command-line front end.

Tables go to CSV, reports to JSON (both on stdout unless ``--output`` is
given). Floats are written with 12 significant digits so output is
byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .entanglement import (
    entropy_curve,
    graph_entanglement_report,
    max_entropy,
    ratio_curve,
    vertex_distribution,
)
from .fock import (
    BasisTooLargeError,
    basis_state,
    build_hamiltonian,
    condensate_state,
    entropy_timeseries,
    enumerate_basis,
    vertex_marginal,
)
from .graph_core import NAMED_KINDS, Graph, GraphError, generate_named, read_edge_list
from .search import MODES, search
from .spectral import eigendecompose

log = logging.getLogger("graphent")

ORACLE_FAIL_TOL = 1e-8
EXIT_USAGE = 2
EXIT_ORACLE = 3


def fmt(x: float) -> float:
    return float(f"{x:.12g}")


def parse_graph_spec(spec: str) -> Graph:
    """``star:L | ring:L | path:L | complete:L | file:PATH`` (a bare path also works)."""
    kind, sep, arg = spec.partition(":")
    if sep and kind == "file":
        return read_edge_list(arg)
    if sep and kind in NAMED_KINDS:
        try:
            L = int(arg)
        except ValueError:
            raise GraphError(f"bad vertex count in graph spec {spec!r}") from None
        return generate_named(kind, L)
    if os.path.exists(spec):
        return read_edge_list(spec)
    raise GraphError(f"bad graph spec {spec!r}; expected kind:L with kind in {'|'.join(NAMED_KINDS)} or file:PATH")


def _graph_doc(g: Graph) -> dict:
    return {"L": g.L, "edges": [list(e) for e in g.edges]}


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _positive(name):
    def check(text):
        value = int(text)
        if value < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1, got {value}")
        return value

    return check


def cmd_entropy(args) -> tuple[str, int]:
    g = parse_graph_spec(args.graph)
    sd = eigendecompose(g)
    report = graph_entanglement_report(g, args.particles, args.eigenspace_max, sd=sd)
    if args.format == "csv":
        rows = [
            (k, float(report.eigenvalues[k]), i, float(report.square_amplitudes[k, i]), report.entropy(k, i), int(report.degenerate[k]))
            for k in range(g.L)
            for i in range(g.L)
        ]
        return _rows_to_csv(["eigenstate", "eigenvalue", "vertex", "p", "entropy_bits", "degenerate"], rows), 0
    doc = {
        "schema": "graphent.entropy/1",
        "graph": _graph_doc(g),
        "N": args.particles,
        "eigenspace_max": args.eigenspace_max,
        "max_entropy_bits": fmt(max_entropy(args.particles)),
        "eigenvalues": [fmt(w) for w in report.eigenvalues],
        "degeneracy_classes": [list(c) for c in sd.degeneracy_classes],
        "states": [
            {
                "eigenstate": k,
                "eigenvalue": fmt(report.eigenvalues[k]),
                "degenerate": report.degenerate[k],
                "vertices": [
                    {"vertex": i, "p": fmt(report.square_amplitudes[k, i]), "entropy_bits": fmt(report.entropy(k, i))}
                    for i in range(g.L)
                ],
            }
            for k in range(g.L)
        ],
    }
    if any(report.degenerate) and not args.eigenspace_max:
        doc["warning"] = "degenerate levels present; values for those levels depend on the eigenbasis chosen"
    return json.dumps(doc, indent=2) + "\n", 0


def cmd_curve(args) -> tuple[str, int]:
    Ns = [int(tok) for tok in args.particles_list.split(",") if tok.strip()]
    rows = entropy_curve(Ns, args.grid)
    return _rows_to_csv(["p", "N", "normalized_entropy"], rows), 0


def cmd_ratio(args) -> tuple[str, int]:
    rows = [(N, r, max_entropy(N)) for N, r in ratio_curve(args.max_n, args.samples)]
    return _rows_to_csv(["N", "ratio", "max_entropy_bits"], rows), 0


def cmd_search(args) -> tuple[str, int]:
    mode = "ground_state" if args.mode == "ground" else "any_eigenstate"
    results = search(args.L, [args.particles], mode, eigenspace_max=args.eigenspace_max, jobs=args.jobs)
    doc = results[args.particles].to_json()
    doc["best_value"] = fmt(doc["best_value"])
    doc["max_entropy_bits"] = fmt(max_entropy(args.particles))
    for w in doc["witnesses"]:
        w["p"] = fmt(w["p"])
    return json.dumps(doc, indent=2) + "\n", 0


def cmd_oracle(args) -> tuple[str, int]:
    g = parse_graph_spec(args.graph)
    basis = enumerate_basis(g.L, args.particles)
    sd = eigendecompose(g)
    checks = []
    worst = 0.0
    for k in range(g.L):
        psi = condensate_state(sd.eigenvectors[k], basis)
        for i in range(g.L):
            brute = vertex_marginal(psi, i).probabilities
            p = min(float(sd.eigenvectors[k, i] ** 2), 1.0)
            closed = vertex_distribution(p, args.particles, i).probabilities
            dev = float(np.max(np.abs(brute - closed)))
            worst = max(worst, dev)
            checks.append({"eigenstate": k, "vertex": i, "degenerate": sd.is_degenerate(k), "p": fmt(p), "max_abs_deviation": float(f"{dev:.3e}")})
    passed = worst <= ORACLE_FAIL_TOL
    doc = {
        "schema": "graphent.oracle/1",
        "graph": _graph_doc(g),
        "N": args.particles,
        "basis_size": basis.size,
        "tolerance": ORACLE_FAIL_TOL,
        "max_deviation": float(f"{worst:.3e}"),
        "passed": passed,
        "checks": checks,
    }
    return json.dumps(doc, indent=2) + "\n", 0 if passed else EXIT_ORACLE


def _initial_state(spec: str, g: Graph, basis):
    kind, _, arg = spec.partition(":")
    if kind == "vertex":
        j = int(arg or 0)
        if not 0 <= j < g.L:
            raise ValueError(f"initial vertex {j} out of range")
        occ = [0] * g.L
        occ[j] = basis.particles
        return basis_state(basis, occ)
    if kind == "occ":
        occ = [int(tok) for tok in arg.split(",")]
        if len(occ) != g.L or sum(occ) != basis.particles or min(occ) < 0:
            raise ValueError(f"occupation {occ} does not fit L={g.L}, N={basis.particles}")
        return basis_state(basis, occ)
    if kind == "eigen":
        sd = eigendecompose(g)
        k = int(arg or 0)
        return condensate_state(sd.eigenvectors[k], basis)
    raise ValueError(f"bad initial state {spec!r}; expected vertex:J, occ:n1,...,nL or eigen:K")


def cmd_dynamics(args) -> tuple[str, int]:
    g = parse_graph_spec(args.graph)
    if not 0 <= args.vertex < g.L:
        raise ValueError(f"vertex {args.vertex} out of range for L={g.L}")
    if args.steps < 1:
        raise ValueError("steps must be >= 1")
    t_min = -args.t_max if args.t_min is None else args.t_min
    if not (math.isfinite(t_min) and math.isfinite(args.t_max)) or t_min > args.t_max:
        raise ValueError(f"invalid time range [{t_min}, {args.t_max}]")
    basis = enumerate_basis(g.L, args.particles)
    psi0 = _initial_state(args.initial, g, basis)
    H = build_hamiltonian(g, basis, args.hubbard_u)
    times = np.linspace(t_min, args.t_max, args.steps + 1)
    rows = entropy_timeseries(psi0, H, args.vertex, times)
    return _rows_to_csv(["t", "entropy_bits"], rows), 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphent", description="Vertex mode entanglement of boson condensates on graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("-o", "--output", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="per-eigenstate, per-vertex entropies of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--particles", "-N", type=_positive("particles"), required=True)
    p.add_argument("--eigenspace-max", action="store_true", help="use spectral-projector diagonals on degenerate levels")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("curve", help="normalized entropy versus p")
    p.add_argument("--particles-list", default="1,2,10,100")
    p.add_argument("--grid", type=int, default=101)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("ratio", help="max entropy over log2(N+1) versus N")
    p.add_argument("--max-n", type=_positive("max-n"), required=True)
    p.add_argument("--samples", type=_positive("samples"), default=50)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("search", help="exhaustive topology search")
    p.add_argument("--L", type=_positive("L"), required=True)
    p.add_argument("--particles", "-N", type=_positive("particles"), required=True)
    p.add_argument("--mode", choices=("ground", "any"), default="ground")
    p.add_argument("--eigenspace-max", action="store_true")
    p.add_argument("--jobs", type=_positive("jobs"), default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("oracle", help="closed form versus brute-force Fock marginals")
    p.add_argument("--graph", required=True)
    p.add_argument("--particles", "-N", type=_positive("particles"), required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("dynamics", help="vertex entropy time series")
    p.add_argument("--graph", required=True)
    p.add_argument("--particles", "-N", type=_positive("particles"), required=True)
    p.add_argument("--vertex", type=int, default=0)
    p.add_argument("--initial", default="vertex:0", help="vertex:J | occ:n1,...,nL | eigen:K")
    p.add_argument("--t-min", type=float, default=None, help="defaults to -t-max")
    p.add_argument("--t-max", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--hubbard-u", type=float, default=0.0)
    p.set_defaults(func=cmd_dynamics)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        text, status = args.func(args)
    except BasisTooLargeError as exc:
        print(f"graphent: basis cap exceeded: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphError as exc:
        print(f"graphent: graph error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"graphent: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())
