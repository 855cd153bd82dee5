"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import decomp, graphs
from .generators import controlled
from .numerics import (
    VERIFY_TOL,
    format_pi,
    gp_distance,
    is_unitary,
    matrix_from_json,
    rational_pi,
)
from .pattern import PatternError, compile_circuit, controlled_u_pattern, parse_pattern, serialize_pattern
from .simulate import SimulationError, verify_pattern

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_matrix(path: str):
    try:
        return matrix_from_json(_read(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_pattern(path: str):
    try:
        return parse_pattern(_read(path))
    except PatternError as exc:
        raise InputError(f"{path}: {exc}") from None


def _angle(x: float) -> str:
    frac = rational_pi(x)
    return f"{x!r} ({format_pi(frac)})" if frac is not None else repr(x)


def _residual(a, b) -> float:
    return float(np.max(np.abs(a - b)))


def _small(x: float) -> str:
    # quantised to 1e-12 so reports do not depend on last-bit rounding
    return f"{round(x, 12) + 0.0:.3e}"


def cmd_decompose(args, out) -> int:
    u = _load_matrix(args.matrix)
    if u.shape != (2, 2):
        raise InputError(f"expected a 2x2 matrix, got dimension {u.shape[0]}")
    if not is_unitary(u, args.tol):
        res = float(np.max(np.abs(u.conj().T @ u - np.eye(2))))
        raise InputError(f"matrix is not unitary\nunitarity_residual: {res:.3e}")
    print(f"kind: {args.kind}", file=out)
    if args.kind == "cu":
        word = decomp.controlled_u_decompose(u)
        res = _residual(decomp.evaluate_word(word), controlled(u))
        print(f"residual: {_small(res)}", file=out)
        print("word:", file=out)
        print(word.to_json(), file=out)
        return EXIT_OK
    d = decomp.zx_decompose(u) if args.kind == "zx" else decomp.j_decompose(u)
    for name, value in zip(d._fields, d):
        print(f"{name}: {_angle(value)}", file=out)
    print(f"residual: {_small(_residual(d.matrix(), u))}", file=out)
    return EXIT_OK


def cmd_compile(args, out) -> int:
    if args.cu:
        u = _load_matrix(args.cu)
        if u.shape != (2, 2) or not is_unitary(u, VERIFY_TOL):
            raise InputError(f"{args.cu}: expected a 2x2 unitary")
        p = controlled_u_pattern(u)
    else:
        try:
            word = decomp.GateWord.from_json(_read(args.circuit))
        except (ValueError, IndexError, KeyError, TypeError) as exc:
            raise InputError(f"{args.circuit}: {exc}") from None
        p = compile_circuit(word, name=Path(args.circuit).stem)
    text = serialize_pattern(p)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def _parse_branches(text: str):
    if text == "all":
        return "all"
    if text.startswith("random:"):
        try:
            n = int(text[len("random:"):])
        except ValueError:
            n = -1
        if n >= 0:
            return n
    raise InputError(f"bad --branches value {text!r} (use all or random:N)")


def cmd_verify(args, out) -> int:
    p = _load_pattern(args.pattern)
    target = _load_matrix(args.matrix)
    branches = _parse_branches(args.branches)
    n_in, n_out = len(p.inputs), len(p.outputs)
    if target.shape != (1 << n_out, 1 << n_in):
        raise InputError(
            f"target has dimension {target.shape[0]}, pattern maps {n_in} qubits to {n_out}"
        )
    try:
        report = verify_pattern(p, branches, seed=args.seed, tol=args.tol)
    except SimulationError as exc:
        raise InputError(str(exc)) from None
    dist = gp_distance(report.reference_map, target)
    ok = report.deterministic and dist <= args.tol
    norms = [b.norm for b in report.branches]
    print(f"pattern: {p.name}", file=out)
    print(f"qubits: {len(p.qubits)}", file=out)
    print(f"measurements: {report.num_measurements}", file=out)
    print(f"branches: {report.branch_count}", file=out)
    print(f"deterministic: {str(report.deterministic).lower()}", file=out)
    print(f"strictly_deterministic: {str(report.strictly_deterministic).lower()}", file=out)
    print(f"uniform: {str(report.uniform).lower()}", file=out)
    print(f"max_branch_deviation: {_small(report.max_branch_deviation)}", file=out)
    print(f"branch_norm_min: {min(norms):.6e}", file=out)
    print(f"branch_norm_max: {max(norms):.6e}", file=out)
    print(f"distance: {_small(dist)}", file=out)
    print(f"verdict: {'pass' if ok else 'fail'}", file=out)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_graph(args, out) -> int:
    p = _load_pattern(args.pattern)
    g = graphs.build_graph(p)
    print(f"vertices: {len(g.vertices)}", file=out)
    print(f"edges: {len(g.edges)}", file=out)
    check = args.check
    if check == "cycles":
        print(f"fundamental cycles: {graphs.cycle_lengths(g)}", file=out)
    elif check == "bipartite":
        col = graphs.two_colour(g)
        print(f"bipartite: {str(col.bipartite).lower()}", file=out)
        if col.bipartite:
            for c in (0, 1):
                side = [v for v in g.vertices if col.colours[v] == c]
                print(f"colour {c}: {' '.join(side)}", file=out)
        else:
            print(f"odd cycle: {' '.join(col.odd_cycle)}", file=out)
    elif check == "paths":
        try:
            lengths = sorted(graphs.extreme_path_lengths(g))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        print(f"extreme path lengths: {lengths}", file=out)
        print(f"all even: {str(all(n % 2 == 0 for n in lengths)).lower()}", file=out)
    elif check == "even":
        rep = graphs.is_even(g)
        print(f"even: {str(rep.even).lower()}", file=out)
        for k, d in enumerate(rep.components):
            line = f"component {k}: {d.note}"
            if d.witness:
                line += f" [{' '.join(d.witness)}]"
            print(line, file=out)
    else:
        out.write(graphs.export_edge_list(g))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oneway", description="J/CZ decomposition and one-way pattern tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="decompose a 2x2 unitary")
    p.add_argument("--matrix", required=True)
    p.add_argument("--kind", choices=["zx", "j", "cu"], default="j")
    p.add_argument("--tol", type=float, default=VERIFY_TOL)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compile", help="compile a circuit or controlled-U to a pattern")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--circuit")
    src.add_argument("--cu")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify", help="check a pattern against a target unitary")
    p.add_argument("--pattern", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--branches", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=VERIFY_TOL)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("graph", help="analyse a pattern's entanglement graph")
    p.add_argument("--pattern", required=True)
    p.add_argument("--check", choices=["even", "bipartite", "cycles", "paths", "edges"], default="even")
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT_ERROR
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
