"""Sweep worker counts and compare measured step counts with the model."""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence

from . import perf_model
from .core_types import Workload, validate_workload
from .engines import parallel_wavefront, serial_full

COLUMNS = ("P", "steps_measured", "steps_predicted", "delta", "speedup_steps", "wall_ns", "speedup_wall")
WALL_COLUMNS = ("wall_ns", "speedup_wall")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class BenchRow:
    P: int
    steps_measured: int
    steps_predicted: int
    delta: int
    speedup_steps: float
    wall_ns: int
    speedup_wall: float


@dataclass(frozen=True)
class BenchTable:
    rows: tuple[BenchRow, ...]

    @property
    def all_match(self) -> bool:
        return all(r.delta == 0 for r in self.rows)


def default_workers(num_servers: int, num_customers: int) -> list[int]:
    """``1..L1+1`` so both closed-form boundary regimes are covered."""
    l1, _ = perf_model.diagonal_bounds(num_servers, num_customers)
    return list(range(1, l1 + 2))


def _median_wall(fn, repeats: int, warmup: int):
    for _ in range(warmup):
        fn()
    walls, last = [], None
    for _ in range(repeats):
        last = fn()
        walls.append(last[1].wall_ns)
    return int(statistics.median(walls)), last


def run_sweep(
    w: Workload,
    p_values: Iterable[int],
    repeats: int = 5,
    warmup: int = 1,
    backend: str = "threads",
) -> BenchTable:
    validate_workload(w)
    ps = sorted(set(p_values))
    if not ps:
        raise ValueError("p_values must not be empty")
    if any(isinstance(p, bool) or not isinstance(p, int) or p < 1 for p in ps):
        raise ValueError(f"every P must be an integer >= 1, got {ps}")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    m, n = w.num_servers, w.num_customers
    serial_wall, (_, serial_inst) = _median_wall(lambda: serial_full(w), repeats, warmup)
    t1 = serial_inst.scalar_ops
    rows = []
    for p in ps:
        wall, (_, inst) = _median_wall(lambda: parallel_wavefront(w, p, backend=backend), repeats, warmup)
        measured = inst.parallel_steps
        predicted = perf_model.exact_parallel_time(m, n, p)
        rows.append(
            BenchRow(
                P=p,
                steps_measured=measured,
                steps_predicted=predicted,
                delta=measured - predicted,
                speedup_steps=t1 / measured,
                wall_ns=wall,
                speedup_wall=serial_wall / wall if wall else float("nan"),
            )
        )
    return BenchTable(tuple(rows))


def emit_report(table: BenchTable, format: str = "csv") -> bytes:
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in table.rows:
            writer.writerow([getattr(r, c) for c in COLUMNS])
        return buf.getvalue().encode()
    if format == "json":
        rows = [{c: asdict(r)[c] for c in COLUMNS} for r in table.rows]
        return (json.dumps({"columns": list(COLUMNS), "rows": rows}, indent=2) + "\n").encode()
    raise ValueError(f"unknown report format {format!r}; expected one of {', '.join(FORMATS)}")


def load_report(data: bytes, format: str = "csv") -> BenchTable:
    types = {f.name: f.type for f in fields(BenchRow)}
    if format == "json":
        rows = json.loads(data)["rows"]
    elif format == "csv":
        rows = list(csv.DictReader(io.StringIO(data.decode())))
    else:
        raise ValueError(f"unknown report format {format!r}")
    out = []
    for r in rows:
        out.append(BenchRow(**{c: (int if types[c] == "int" else float)(r[c]) for c in COLUMNS}))
    return BenchTable(tuple(out))


def strip_wall(rows: Sequence[dict]) -> list[dict]:
    return [{k: v for k, v in r.items() if k not in WALL_COLUMNS} for r in rows]
