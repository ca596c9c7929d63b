"""``qsim`` command line: run the algorithms and circuit files with a seed."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import Counter

import numpy as np

from .algorithms import (
    deutsch,
    deutsch_jozsa,
    grover_known,
    grover_unknown,
    quantum_count,
    shor_factor,
    simon,
)
from .circuitlang import CircuitError, ExecutionError, execute, parse_file
from .errors import DomainError
from .measure import RngStream, histogram_json, sample_counts
from .statevec import probabilities
from .transforms import OracleLoadError, load_oracle

STATE_LIMIT = 16


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=0, help="RNG seed (default 0)")
    common.add_argument("--shots", type=_positive, help="repeat the run and print a histogram")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--state", action="store_true", help="include the final amplitudes")
    common.add_argument("--force", action="store_true", help=f"allow --state above {STATE_LIMIT} qubits")
    common.add_argument("--quiet", action="store_true", help="print only the result")
    common.add_argument("--dump-distribution", metavar="PATH", help="write index,probability CSV")

    p = argparse.ArgumentParser(prog="qsim", description="Seeded state-vector quantum algorithm simulator.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, helptext in (("deutsch", "Deutsch's algorithm"), ("dj", "Deutsch-Jozsa")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--oracle", required=True)

    sp = sub.add_parser("simon", parents=[common], help="Simon's algorithm")
    sp.add_argument("--oracle", required=True)
    sp.add_argument("--max-rounds", type=_positive)

    sp = sub.add_parser("shor", parents=[common], help="factor N with Shor's algorithm")
    sp.add_argument("--n", dest="N", type=int, required=True)
    sp.add_argument("--x", type=int)
    sp.add_argument("--attempts", type=_positive, default=8)

    sp = sub.add_parser("grover", parents=[common], help="Grover search")
    sp.add_argument("--oracle", required=True)
    sp.add_argument("--solutions", type=_positive, default=1, help="known number of solutions")
    sp.add_argument("--multi", action="store_true", help="unknown number of solutions")
    sp.add_argument("--lambda", dest="lam", type=float, default=6 / 5)

    sp = sub.add_parser("count", parents=[common], help="quantum counting")
    sp.add_argument("--oracle", required=True)
    sp.add_argument("--p", type=int)

    sp = sub.add_parser("run", parents=[common], help="execute a .qc circuit file")
    sp.add_argument("circuit")
    sp.add_argument("--table", action="append", default=[], metavar="NAME=PATH")
    return p


def _oracle(path: str):
    try:
        return load_oracle(path)
    except OSError as exc:
        raise UsageError(f"cannot read oracle {path}: {exc.strerror}") from None
    except OracleLoadError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _runner(args):
    """A ``rng -> RunRecord`` closure plus the histogram key for ``--shots``."""
    trace = not args.json and not args.quiet
    cmd = args.command
    if cmd == "deutsch":
        f = _oracle(args.oracle)
        return (lambda rng, tr=trace: deutsch(f, rng, trace=tr)), lambda r: r.result["delta"]
    if cmd == "dj":
        f = _oracle(args.oracle)
        return (lambda rng, tr=trace: deutsch_jozsa(f, rng, trace=tr)), lambda r: r.result["k"]
    if cmd == "simon":
        f = _oracle(args.oracle)
        return (lambda rng, tr=trace: simon(f, rng, max_rounds=args.max_rounds, trace=tr)), lambda r: r.result["s"]
    if cmd == "shor":
        def run(rng, tr=trace):
            return shor_factor(args.N, rng, max_attempts=args.attempts, x=args.x, trace=tr)

        def key(r):
            fac = r.result.get("factors")
            return "x".join(map(str, fac)) if fac else "none"

        return run, key
    if cmd == "grover":
        f = _oracle(args.oracle)
        if args.multi:
            return (lambda rng, tr=trace: grover_unknown(f, rng, lam=args.lam, trace=tr)), lambda r: r.result["found"]
        return (lambda rng, tr=trace: grover_known(f, rng, t=args.solutions, trace=tr)), lambda r: r.result["found"]
    if cmd == "count":
        f = _oracle(args.oracle)
        return (lambda rng, tr=trace: quantum_count(f, rng, p=args.p, trace=tr)), lambda r: r.result["l_measured"]
    # run
    try:
        circuit = parse_file(args.circuit)
    except OSError as exc:
        raise UsageError(f"cannot read circuit {args.circuit}: {exc.strerror}") from None
    except CircuitError as exc:
        raise UsageError(f"{args.circuit}: {exc}") from None
    tables = {}
    for spec in args.table:
        name, sep, path = spec.partition("=")
        if not sep or not name:
            raise UsageError(f"--table expects NAME=PATH, got {spec!r}")
        tables[name] = _oracle(path)

    def run(rng, tr=trace):
        return execute(circuit, rng, tables, trace=tr)

    def key(r):
        outs = r.result["outputs"]
        return ",".join(str(v) for v in outs.values()) if outs else None

    return run, key


def _fmt_amp(z: complex) -> str:
    return f"{z.real:+.6f}{z.imag:+.6f}i"


def _print_human(rec, quiet: bool, out) -> None:
    if not quiet:
        for label, n, amps in rec.steps:
            print(f"[{label}]", file=out)
            for j, z in amps:
                ket = format(j, f"0{n}b")
                print(f"  |{ket}>  {_fmt_amp(z)}  p={abs(z) ** 2:.6f}", file=out)
        for lab, v in rec.measurements:
            print(f"measured {lab} = {v}", file=out)
        for k, v in rec.iterations.items():
            print(f"{k}: {v}", file=out)
        print(f"oracle calls: {rec.oracle_calls}", file=out)
    shown = {k: v for k, v in rec.result.items() if k not in ("analytic_amplitudes", "omegas")}
    print(f"{rec.algorithm}: " + ", ".join(f"{k}={v}" for k, v in shown.items()), file=out)


def _distribution(rec) -> np.ndarray | None:
    if rec.distribution is not None:
        return np.asarray(rec.distribution)
    s = rec.states.get("pre_measurement", rec.final_state)
    return None if s is None else probabilities(s)


def _dump(path: str, probs: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "probability"])
        for j, p in enumerate(probs):
            w.writerow([j, repr(float(p))])


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = sys.stdout
    try:
        run, key = _runner(args)
        if args.dump_distribution and args.command == "shor":
            run_once = lambda rng: run(rng, tr=True)  # noqa: E731
        else:
            run_once = run
        root = RngStream(args.seed)
        if args.shots:
            counts: Counter = Counter()
            for i in range(args.shots):
                rec = run(root.derive(i), tr=False)
                k = key(rec)
                if k is None:
                    # Circuit without measurements: sample the final state instead.
                    counts = Counter(sample_counts(rec.final_state, args.shots, root.derive(args.shots)))
                    break
                counts[k] += 1
            hist = histogram_json(counts, args.shots)
            if args.json:
                print(json.dumps(hist, sort_keys=True), file=out)
            else:
                for k, v in hist["counts"].items():
                    print(f"{k}: {v}", file=out)
            return 0
        rec = run_once(root)
    except UsageError as exc:
        print(f"qsim: error: {exc}", file=sys.stderr)
        return 2
    except (CircuitError, ExecutionError, DomainError) as exc:
        print(f"qsim: error: {exc}", file=sys.stderr)
        return 2

    if args.state and rec.final_state is not None and rec.final_state.n_qubits > STATE_LIMIT and not args.force:
        print(
            f"qsim: error: refusing to dump {rec.final_state.n_qubits}-qubit state without --force",
            file=sys.stderr,
        )
        return 2
    if args.dump_distribution:
        probs = _distribution(rec)
        if probs is None:
            print("qsim: error: no distribution recorded for this run", file=sys.stderr)
            return 2
        _dump(args.dump_distribution, probs)

    if args.json:
        print(json.dumps(rec.to_json(include_state=args.state), sort_keys=True), file=out)
    else:
        _print_human(rec, args.quiet, out)
        if args.state and rec.final_state is not None:
            print(json.dumps(rec.final_state.to_json()), file=out)
    return 0 if rec.success else 1


if __name__ == "__main__":
    sys.exit(main())
