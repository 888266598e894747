"""Command-line interface: ``tandemsim {simulate,model,bench,verify}``.

Exit codes: 0 ok, 1 I/O error, 2 usage or validation error, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bench, perf_model
from .engines import BACKENDS, ENGINES, parallel_wavefront, run_engine, serial_full, serial_inplace
from .metrics import compute_metrics
from .oracle import simulate_event_driven
from .workload_gen import generate, parse_dist, parse_seed, random_integer_workload, read_workload, write_workload

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2, 3

DIST_HELP = """\
distribution grammar:
  constant:C         every value equals C (an integer C gives an exact integer workload)
  uniform:A:B        uniform on [A, B), 0 <= A <= B
  exponential:RATE   exponential with the given rate (mean 1/RATE)
  --dist-row I SPEC overrides the global --dist for row I (row 0 = interarrival times)
"""


class UsageError(Exception):
    pass


def _positive(name: str):
    def conv(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}") from None
        if value < 1:
            raise argparse.ArgumentTypeError(f"{name} must be ≥ 1")
        return value

    return conv


def _int_list(text: str) -> list[int]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("workers list must not be empty")
    conv = _positive("every worker count")
    return [conv(p) for p in parts]


def _default_workers() -> int:
    env = os.environ.get("TANDEMSIM_THREADS")
    if env is None:
        return 1
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"TANDEMSIM_THREADS must be an integer, got {env!r}") from None
    if value < 1:
        raise UsageError("TANDEMSIM_THREADS: workers must be ≥ 1")
    return value


def _add_workload_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--servers", type=_positive("--servers"), help="number of servers M")
    p.add_argument("--customers", type=_positive("--customers"), help="number of customers N")
    p.add_argument("--workload", type=Path, help="workload CSV file")
    p.add_argument("--dist", help="global distribution, e.g. exponential:1")
    p.add_argument("--dist-row", nargs=2, action="append", metavar=("I", "SPEC"), default=[], help="per-row override")
    p.add_argument("--seed", default="0", help="decimal or 0x-hex seed (default 0)")


def _load_workload(args):
    if args.workload is not None:
        if args.dist or args.dist_row:
            raise UsageError("--workload cannot be combined with --dist/--dist-row")
        w = read_workload(args.workload)
        if args.servers is not None and args.servers != w.num_servers:
            raise UsageError(f"--servers {args.servers} does not match workload file M={w.num_servers}")
        if args.customers is not None and args.customers != w.num_customers:
            raise UsageError(f"--customers {args.customers} does not match workload file N={w.num_customers}")
        return w
    if args.dist is None and not args.dist_row:
        raise UsageError("one of --workload or --dist is required")
    if args.servers is None or args.customers is None:
        raise UsageError("--servers and --customers are required with --dist")
    try:
        seed = parse_seed(args.seed)
        spec = parse_dist(args.dist) if args.dist else None
        rows = {}
        for idx, text in args.dist_row:
            try:
                i = int(idx)
            except ValueError:
                raise UsageError(f"--dist-row: row index must be an integer, got {idx!r}") from None
            rows[i] = parse_dist(text)
        if spec is None:
            missing = [i for i in range(args.servers + 1) if i not in rows]
            if missing:
                raise UsageError(f"--dist is required unless --dist-row covers every row (missing {missing})")
            spec = rows[0]
        return generate(spec, args.servers, args.customers, seed, rows)
    except ValueError as exc:
        raise UsageError(f"--dist: {exc}") from None


def _write(args, data: str) -> None:
    if args.out is None:
        sys.stdout.write(data)
    else:
        Path(args.out).write_text(data)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_simulate(args) -> int:
    w = _load_workload(args)
    workers = args.workers if args.workers is not None else _default_workers()
    if workers < 1:
        raise UsageError("--workers: workers must be ≥ 1")
    if args.engine == "inplace" and args.emit != "final":
        raise UsageError("--emit: the inplace engine only keeps final departures; use --emit final")
    report = run_engine(args.engine, w, workers, backend=args.backend)
    m = w.num_servers
    if args.format == "json":
        out = {
            "num_servers": m,
            "num_customers": w.num_customers,
            "numeric": w.numeric,
            "final_departures": list(report.final_departures),
            "instrumentation": report.instrumentation.to_dict(),
        }
        if args.emit == "table":
            out["table"] = [list(r) for r in report.table.d]
        elif args.emit == "metrics":
            out["metrics"] = [
                {"customer": c.customer, "arrival": c.arrival, "departure": c.departure,
                 "sojourn": c.sojourn, "waits": list(c.waits)}
                for c in compute_metrics(w, report.table)
            ]
        _write(args, json.dumps(out, indent=2) + "\n")
    elif args.emit == "final":
        _write(args, _csv([("server", "departure"), *enumerate(report.final_departures)]))
    elif args.emit == "table":
        header = ["server", *(f"j{j}" for j in range(w.num_customers + 1))]
        _write(args, _csv([header, *([i, *r] for i, r in enumerate(report.table.d))]))
    else:
        header = ["customer", "arrival", "departure", "sojourn", *(f"wait_{i}" for i in range(1, m + 1))]
        rows = [[c.customer, c.arrival, c.departure, c.sojourn, *c.waits] for c in compute_metrics(w, report.table)]
        _write(args, _csv([header, *rows]))
    inst = report.instrumentation
    print(f"engine={inst.engine} workers={inst.workers} scalar_ops={inst.scalar_ops} "
          f"parallel_steps={inst.parallel_steps} wall_ns={inst.wall_ns}", file=sys.stderr)
    return EXIT_OK


def cmd_model(args) -> int:
    m, n = args.servers, args.customers
    cols = ("P", "T_P", "T_P_asymptotic", "S_P", "S_P_asymptotic", "T_1")
    rows = []
    for p in args.workers_list:
        pred = perf_model.predict(m, n, p)
        rows.append((p, pred.t_exact, pred.t_asymptotic, pred.speedup, pred.speedup_asymptotic, pred.t_serial))
    if args.format == "json":
        data = json.dumps({"num_servers": m, "num_customers": n, "rows": [dict(zip(cols, r)) for r in rows]}, indent=2) + "\n"
    else:
        data = _csv([cols, *rows])
    _write(args, data)
    return EXIT_OK


def cmd_bench(args) -> int:
    w = _load_workload(args)
    ps = args.workers_list or bench.default_workers(w.num_servers, w.num_customers)
    table = bench.run_sweep(w, ps, repeats=args.repeats, warmup=args.warmup, backend=args.backend)
    _write(args, bench.emit_report(table, args.format).decode())
    if not table.all_match:
        bad = [r.P for r in table.rows if r.delta != 0]
        print(f"step count mismatch for P={bad}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _verify_one(w, backend: str) -> Optional[str]:
    ref, inst = serial_full(w)
    if inst.scalar_ops != perf_model.serial_time(w.num_servers, w.num_customers):
        return f"serial scalar_ops {inst.scalar_ops}"
    final, _ = serial_inplace(w)
    if final != ref.final_departures:
        return "inplace final departures differ"
    l1, _ = perf_model.diagonal_bounds(w.num_servers, w.num_customers)
    for p in range(1, l1 + 2):
        table, pinst = parallel_wavefront(w, p, backend=backend)
        if table != ref:
            return f"parallel P={p} table differs"
        if pinst.parallel_steps != perf_model.exact_parallel_time(w.num_servers, w.num_customers, p):
            return f"parallel P={p} steps {pinst.parallel_steps}"
    if simulate_event_driven(w) != ref:
        return "event-driven oracle table differs"
    return None


def cmd_verify(args) -> int:
    seed = parse_seed(args.seed)
    digest = hashlib.sha256()
    cells = 0
    for trial in range(args.trials):
        w = random_integer_workload(seed, trial, args.max_servers, args.max_customers, args.max_tau)
        problem = _verify_one(w, args.backend)
        if problem is not None:
            write_workload(w, args.replay_out)
            print(f"trial {trial} (M={w.num_servers} N={w.num_customers}): {problem}; "
                  f"workload written to {args.replay_out}")
            return EXIT_VERIFY
        final, _ = serial_inplace(w)
        digest.update(repr((w.tau, final)).encode())
        cells += (w.num_servers + 1) * w.num_customers
    print(f"trials={args.trials} seed={seed} cells={cells} digest={digest.hexdigest()[:16]}")
    print("ok: serial, inplace, parallel (all P) and event-driven oracle agree")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tandemsim", description=__doc__.splitlines()[0],
                                     formatter_class=argparse.RawDescriptionHelpFormatter, epilog=DIST_HELP)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one engine on a workload", epilog=DIST_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_workload_args(p)
    p.add_argument("--engine", choices=ENGINES, default="serial")
    p.add_argument("--workers", type=int, default=None, help="parallel workers (default $TANDEMSIM_THREADS or 1)")
    p.add_argument("--backend", choices=BACKENDS, default="threads")
    p.add_argument("--emit", choices=("final", "table", "metrics"), default="final")
    p.add_argument("--format", choices=bench.FORMATS, default="csv")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("model", help="predicted parallel time and speedup")
    p.add_argument("--servers", type=_positive("--servers"), required=True)
    p.add_argument("--customers", type=_positive("--customers"), required=True)
    p.add_argument("--workers-list", type=_int_list, required=True, help="comma-separated worker counts")
    p.add_argument("--format", choices=bench.FORMATS, default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("bench", help="sweep worker counts and compare with the model", epilog=DIST_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    _add_workload_args(p)
    p.add_argument("--workers-list", type=_int_list, default=None, help="default 1..min(M+1,N)+1")
    p.add_argument("--repeats", type=_positive("--repeats"), default=5)
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--backend", choices=BACKENDS, default="threads")
    p.add_argument("--format", choices=bench.FORMATS, default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="randomized equivalence check of all engines and the oracle")
    p.add_argument("--trials", type=_positive("--trials"), default=100)
    p.add_argument("--seed", default="0")
    p.add_argument("--max-servers", type=_positive("--max-servers"), default=8)
    p.add_argument("--max-customers", type=_positive("--max-customers"), default=32)
    p.add_argument("--max-tau", type=int, default=9)
    p.add_argument("--backend", choices=BACKENDS, default="threads")
    p.add_argument("--replay-out", type=Path, default=Path("verify_failure.csv"))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "max_tau", 0) < 0:
            raise UsageError("--max-tau must be ≥ 0")
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"tandemsim {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"tandemsim {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
