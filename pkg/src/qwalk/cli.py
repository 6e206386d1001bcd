"""Batch command-line surface.

Exit codes: 0 success, 1 validation error, 2 cross-check disagreement
(criteria verdicts or closure dimension), 3 I/O failure.  All reports go to
standard output as JSON except `demo`, which prints a fixed-width table.
The environment variable QWALK_THREADS caps internal parallelism
(0 means serial); it must be set before the package is imported.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import json_io
from .controllability import analyze, k_of, reachable_sets
from .errors import QwalkError
from .graph_model import (
    complete,
    cycle_exchange,
    cycle_shift,
    figure1,
    torus,
)
from .lie_closure import DEFAULT_DIM_CAP, DEFAULT_TOL, verify_structure
from .sampling import random_walk_state
from .synthesis import TargetSpread, arbitrary_transfer, spread_from_node
from .walk_core import (
    apply_sequence,
    basis_state,
    position_probabilities,
    shift_order,
    state_fidelity,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MISMATCH = 2
EXIT_IO = 3

FIDELITY_TOL = 1e-9


def _emit(doc: dict, out_path: str | None) -> None:
    text = json_io.dumps(doc)
    print(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _load_spec(path: str):
    return json_io.spec_from_dict(json_io.read_json(path))


def cmd_validate(args) -> int:
    try:
        spec = _load_spec(args.spec)
    except QwalkError as exc:
        _emit(
            {
                "schema": json_io.SCHEMA_VERSION,
                "valid": False,
                "error": type(exc).__name__,
                "detail": str(exc),
            },
            args.out,
        )
        return EXIT_INVALID
    _emit(
        {
            "schema": json_io.SCHEMA_VERSION,
            "valid": True,
            "n": spec.n,
            "d": spec.d,
            "shift_order": shift_order(spec),
        },
        args.out,
    )
    return EXIT_OK


def cmd_analyze(args) -> int:
    report = analyze(_load_spec(args.spec))
    _emit(json_io.report_to_dict(report), args.out)
    return EXIT_OK if report.verdicts_agree else EXIT_MISMATCH


def cmd_reach(args) -> int:
    spec = _load_spec(args.spec)
    sets = reachable_sets(spec, args.node, args.k)
    _emit(
        {
            "schema": json_io.SCHEMA_VERSION,
            "node": args.node,
            "sets": [sorted(s) for s in sets],
        },
        args.out,
    )
    return EXIT_OK


def cmd_lie_check(args) -> int:
    result = verify_structure(_load_spec(args.spec), cap=args.cap, tol=args.tol)
    _emit(
        {
            "schema": json_io.SCHEMA_VERSION,
            "dim": result.dim,
            "predicted": result.predicted,
            "match": result.match,
            "iterations": result.iterations,
            "block_diagonal_ok": result.block_diagonal_ok,
        },
        args.out,
    )
    ok = result.match and result.block_diagonal_ok
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_synthesize(args) -> int:
    spec = _load_spec(args.spec)
    psi1 = json_io.state_from_dict(json_io.read_json(args.state))
    psi2 = json_io.state_from_dict(json_io.read_json(args.target))
    seq = arbitrary_transfer(spec, psi1, psi2, shortcut=args.shortcut)
    report = analyze(spec)
    bound = 2 * report.kappa + (2 if args.shortcut else shift_order(spec))
    fidelity = state_fidelity(psi2, apply_sequence(psi1, seq, spec))
    _emit(
        json_io.sequence_to_dict(
            seq,
            bound=bound,
            achieved_fidelity=json_io._f(fidelity),
        ),
        args.out,
    )
    return EXIT_OK if fidelity >= 1.0 - args.tol else EXIT_MISMATCH


def cmd_simulate(args) -> int:
    spec = _load_spec(args.spec)
    state = json_io.state_from_dict(json_io.read_json(args.state))
    seq = json_io.sequence_from_dict(json_io.read_json(args.seq))
    final = apply_sequence(state, seq, spec)
    doc = {
        "schema": json_io.SCHEMA_VERSION,
        "steps": len(seq),
        "state": json_io.state_to_dict(final),
        "probabilities": [json_io._f(p) for p in position_probabilities(final)],
    }
    _emit(doc, args.out)
    return EXIT_OK


def _demo_gallery():
    walks = []
    for n in range(3, 9):
        walks.append((f"cycle_shift({n})", cycle_shift(n)))
        if n % 2 == 0:
            walks.append((f"cycle_exchange({n})", cycle_exchange(n)))
    walks.append(("figure1", figure1()))
    walks.append(("complete(4)", complete(4)))
    walks.append(("torus(3,3)", torus(3, 3)))
    return walks


def cmd_demo(args) -> int:
    rng = np.random.default_rng(args.seed)
    rows = []
    failures = []
    for name, spec in _demo_gallery():
        report = analyze(spec)
        side = spec.d * spec.n
        if side <= DEFAULT_DIM_CAP:
            closure = verify_structure(spec, tol=args.tol)
            dim = str(closure.dim)
            if not (closure.match and closure.block_diagonal_ok):
                failures.append(f"{name}: closure dim {closure.dim} != predicted "
                                f"{closure.predicted} or block structure broken")
        else:
            dim = "-"
        if not report.verdicts_agree:
            failures.append(f"{name}: criteria disagree")
        rows.append(
            (
                name,
                spec.n,
                spec.d,
                shift_order(spec),
                report.m,
                "yes" if report.controllable else "no",
                report.predicted_lie_dim,
                dim,
                "-" if report.kappa is None else str(report.kappa),
                "-" if report.step_bound is None else str(report.step_bound),
                "yes" if report.verdicts_agree else "no",
            )
        )

    hdr = ("walk", "n", "d", "r", "m", "ctrl", "dim_pred", "dim", "kappa", "bound", "agree")
    widths = [max(len(str(row[i])) for row in rows + [hdr]) for i in range(len(hdr))]
    for row in [hdr] + rows:
        print("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip())

    fig = figure1()
    sets = reachable_sets(fig, 0, 3)
    print()
    for k, s in enumerate(sets[1:], start=1):
        print(f"figure1 reachable from 0 in exactly {k} steps: {sorted(s)}")
    if sets[1] != {1, 3, 5} or sets[2] != {0, 1, 2, 4, 5} or sets[3] != set(range(6)):
        failures.append("figure1: reachable sets differ from the expected table")
    if k_of(fig, 0) != 3:
        failures.append("figure1: covering step count at vertex 0 is not 3")

    # three-step uniform spread on figure1: every node probability must be 1/6
    target = TargetSpread(tuple(range(6)), np.full(6, 1 / np.sqrt(6)))
    seq, _ = spread_from_node(fig, 0, 0, target, 3)
    probs = position_probabilities(apply_sequence(basis_state(fig, 0, 0), seq, fig))
    print(f"figure1 uniform 3-step spread node probabilities: "
          f"{[format(p, '.6f') for p in probs]}")
    if np.abs(probs - 1 / 6).max() > 1e-9:
        failures.append("figure1: uniform spread probabilities deviate from 1/6")

    # seeded round-trip transfer on the 5-cycle
    c5 = cycle_shift(5)
    psi_a = random_walk_state(rng, c5)
    psi_b = random_walk_state(rng, c5)
    there = arbitrary_transfer(c5, psi_a, psi_b)
    back = arbitrary_transfer(c5, psi_b, psi_a)
    rt = state_fidelity(psi_a, apply_sequence(apply_sequence(psi_a, there, c5), back, c5))
    print(f"cycle_shift(5) random round trip: {len(there)}+{len(back)} steps, "
          f"fidelity {rt:.12f}")
    if rt < 1.0 - 1e-8:
        failures.append("cycle_shift(5): round-trip fidelity below threshold")

    if failures:
        print()
        for f in failures:
            print(f"CROSS-CHECK FAILED: {f}")
        return EXIT_MISMATCH
    print("\nall cross-checks passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Coined quantum walks: validation, controllability, synthesis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, spec=True):
        if spec:
            p.add_argument("--spec", required=True, help="walk spec JSON path")
        p.add_argument("--out", help="also write the JSON report to this path")

    p = sub.add_parser("validate", help="check a walk spec file")
    add_common(p)

    p = sub.add_parser("analyze", help="controllability report")
    add_common(p)

    p = sub.add_parser("reach", help="exact reachable sets from a node")
    add_common(p)
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("lie-check", help="closure dimension vs structure prediction")
    add_common(p)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--cap", type=int, default=DEFAULT_DIM_CAP)

    p = sub.add_parser("synthesize", help="coin sequence steering one state to another")
    add_common(p)
    p.add_argument("--state", required=True, help="initial state JSON path")
    p.add_argument("--target", required=True, help="target state JSON path")
    p.add_argument("--shortcut", action="store_true")
    p.add_argument("--tol", type=float, default=FIDELITY_TOL)

    p = sub.add_parser("simulate", help="replay a coin sequence")
    add_common(p)
    p.add_argument("--state", required=True)
    p.add_argument("--seq", required=True)

    p = sub.add_parser("demo", help="built-in gallery with cross-checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    return parser


_HANDLERS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "reach": cmd_reach,
    "lie-check": cmd_lie_check,
    "synthesize": cmd_synthesize,
    "simulate": cmd_simulate,
    "demo": cmd_demo,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = _HANDLERS[args.command](args)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        code = EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"i/o error: cannot parse JSON: {exc}", file=sys.stderr)
        code = EXIT_IO
    except QwalkError as exc:
        print(
            json_io.dumps(
                {
                    "schema": json_io.SCHEMA_VERSION,
                    "error": type(exc).__name__,
                    "detail": str(exc),
                }
            )
        )
        code = EXIT_INVALID
    return code


if __name__ == "__main__":
    sys.exit(main())
