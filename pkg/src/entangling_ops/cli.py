"""Command-line front end.

Examples::

    entangling-ops constants
    entangling-ops analyze-channel --input channel.json
    entangling-ops simulate --n 4 --trials 100000 --seed 7 --format csv
    entangling-ops expected-cost --n 3
    entangling-ops decompose --input hamiltonian.json --t 0.5
    entangling-ops approx-phase --alpha 0.3 --eps 1e-6

Exit codes: 0 ok, 2 usage, 3 input parse, 4 input validation, 5 numeric domain.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .channels import QuantumChannel, choi_of_channel, classify
from .errors import DimensionError, NotHermitianError, NumericDomainError, ParseError, ValidationError
from .gates import binary_phase_approx, canonicalize, gate_cost, pauli_decompose
from .operator import operator_from_json, operator_to_json
from .protocol import capability_constant, expected_cost, f_infinity, f_series, monte_carlo

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_DOMAIN = 5

SIG_DIGITS = 12
F_TABLE_MAX = 20


def _round(obj):
    """Round every float to ``SIG_DIGITS`` significant digits, recursively."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.{SIG_DIGITS}g}") + 0.0  # + 0.0 drops the sign of -0.0
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_round(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(report: dict, fmt: str) -> str:
    report = _round(report)
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    for key, value in _flatten(report):
        w.writerow([key, json.dumps(value)])
    return buf.getvalue()


def _load_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# -- commands ---------------------------------------------------------------

def cmd_constants(args) -> dict:
    finf = f_infinity(1e-12)
    beta = capability_constant()
    return {
        "f_infinity": finf,
        "capability_constant": beta,
        "capability_ratio": finf / beta,
        "f_n": [{"n": n, "f_n": f_series(n)} for n in range(1, F_TABLE_MAX + 1)],
    }


def cmd_analyze_channel(args) -> dict:
    ch = QuantumChannel.from_json(_load_json(args.input))
    choi = choi_of_channel(ch)
    return {
        "d": ch.d,
        "trace_flag": ch.trace_flag.value,
        "verdict": classify(choi).to_dict(),
        "choi": operator_to_json(choi.op),
    }


def cmd_simulate(args) -> dict:
    return monte_carlo(args.n, args.trials, args.seed).to_dict()


def cmd_expected_cost(args) -> dict:
    return expected_cost(args.n).to_dict()


def cmd_decompose(args) -> dict:
    obj = _load_json(args.input)
    if not isinstance(obj, dict):
        raise ParseError("Hamiltonian JSON must be an object with 'matrix' and 'dims'")
    h = operator_from_json(obj)
    pd = pauli_decompose(h)
    cf = canonicalize(h)
    return {
        "pauli": {
            "identity_coefficient": pd.identity_coefficient,
            "local_a": pd.local_a.tolist(),
            "local_b": pd.local_b.tolist(),
            "gamma": pd.gamma.tolist(),
        },
        "canonical_form": cf.to_dict(),
        "t": args.t,
        "gate_cost": gate_cost(h, args.t),
    }


def cmd_approx_phase(args) -> dict:
    approx = binary_phase_approx(args.alpha, args.eps)
    return {
        "alpha": args.alpha,
        "eps": args.eps,
        "exponents": approx.exponents,
        "phases": approx.phases,
        "residual": approx.residual,
        "cost_bound": approx.cost_bound,
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="entangling-ops", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None, help="Write here instead of stdout.")
        p.set_defaults(func=func)
        return p

    add("constants", cmd_constants, "f_infinity, capability constant and ratio, f_N table")

    p = add("analyze-channel", cmd_analyze_channel, "Choi operator and entangling verdict of a channel file")
    p.add_argument("--input", required=True, help="Channel JSON: {d, trace_flag, kraus}.")

    p = add("simulate", cmd_simulate, "Monte Carlo run of the escalating protocol")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = add("expected-cost", cmd_expected_cost, "exact average ebits and classical bits for U(pi/2**n)")
    p.add_argument("--n", type=int, required=True)

    p = add("decompose", cmd_decompose, "canonical form and entanglement cost of a two-qubit Hamiltonian")
    p.add_argument("--input", required=True, help="Operator JSON: {dims, matrix}.")
    p.add_argument("--t", type=float, default=1.0, help="Evolution time (default 1).")

    p = add("approx-phase", cmd_approx_phase, "dyadic expansion of a phase into binary-phase gates")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = render(args.func(args), args.format)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DimensionError, NotHermitianError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
