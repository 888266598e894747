"""Shared domain types for tandem queue simulation.

Index conventions used throughout the package:

* Rows ``i = 0..M``. Row 0 is the arrival process, rows ``1..M`` are the
  service stations.
* Customers ``j = 1..N``. ``Workload.tau[i][j - 1]`` holds the time of
  customer ``j`` at row ``i``.
* ``DepartureTable.d[i][j]`` holds the departure epoch with an explicit
  zero column ``j = 0``. The row above row 0 is never stored; engines read
  a constant zero for it.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

INT = "int"
FLOAT = "float"

Matrix = tuple[tuple, ...]


class WorkloadError(ValueError):
    """Raised when a workload violates its invariants.

    ``index`` is the offending ``(i, j)`` pair (``j`` one-based) when the
    error is attached to a single entry, else ``None``.
    """

    def __init__(self, message: str, index: Optional[tuple[int, int]] = None):
        super().__init__(message)
        self.index = index


def _is_int(x) -> bool:
    return isinstance(x, numbers.Integral) and not isinstance(x, bool)


@dataclass(frozen=True)
class Workload:
    """Interarrival (row 0) and service (rows 1..M) times of N customers.

    ``numeric`` is ``"int"`` when every entry is an integer, in which case
    all engines run in exact integer arithmetic, otherwise ``"float"``.
    Construction only normalizes storage; call :func:`validate_workload`
    (or use :meth:`from_rows`) to check invariants.
    """

    num_servers: int
    num_customers: int
    tau: Matrix
    numeric: str = field(default=INT)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], numeric: Optional[str] = None) -> "Workload":
        """Build and validate a workload from ``M + 1`` rows of ``N`` values."""
        raw = [list(r) for r in rows]
        if not raw:
            raise WorkloadError("workload needs at least 2 rows (arrivals + one server), got 0")
        flat_ok = all(_is_int(x) for r in raw for x in r)
        if numeric is None:
            numeric = INT if flat_ok else FLOAT
        if numeric == INT:
            if not flat_ok:
                for i, r in enumerate(raw):
                    for j, x in enumerate(r, start=1):
                        if not _is_int(x):
                            raise WorkloadError(f"non-integer value {x!r} at ({i},{j}) in integer mode", (i, j))
            tau = tuple(tuple(int(x) for x in r) for r in raw)
        elif numeric == FLOAT:
            tau = tuple(tuple(_as_float(x, i, j) for j, x in enumerate(r, start=1)) for i, r in enumerate(raw))
        else:
            raise WorkloadError(f"unknown numeric mode {numeric!r}")
        w = cls(len(raw) - 1, len(raw[0]), tau, numeric)
        return validate_workload(w)

    @property
    def shape(self) -> tuple[int, int]:
        return self.num_servers + 1, self.num_customers

    def row(self, i: int) -> tuple:
        return self.tau[i]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.tau]


def _as_float(x, i: int, j: int) -> float:
    if isinstance(x, bool):
        raise WorkloadError(f"boolean value at ({i},{j})", (i, j))
    try:
        return float(x) + 0.0  # folds -0.0 into 0.0
    except (TypeError, ValueError):
        raise WorkloadError(f"non-numeric value {x!r} at ({i},{j})", (i, j)) from None


def validate_workload(w: Workload) -> Workload:
    """Return ``w`` unchanged if it is a valid workload, else raise WorkloadError."""
    if not _is_int(w.num_servers) or w.num_servers < 1:
        raise WorkloadError(f"number of servers must be >= 1, got {w.num_servers!r}")
    if not _is_int(w.num_customers) or w.num_customers < 1:
        raise WorkloadError(f"number of customers must be >= 1, got {w.num_customers!r}")
    if w.numeric not in (INT, FLOAT):
        raise WorkloadError(f"unknown numeric mode {w.numeric!r}")
    if len(w.tau) != w.num_servers + 1:
        raise WorkloadError(f"expected {w.num_servers + 1} rows, got {len(w.tau)}")
    exact = int if w.numeric == INT else float
    for i, r in enumerate(w.tau):
        # NaN fails the range test, so this one pass covers the common case
        if len(r) == w.num_customers and all(type(x) is exact and 0 <= x < math.inf for x in r):
            continue
        if len(r) != w.num_customers:
            raise WorkloadError(
                f"ragged matrix: row {i} has {len(r)} values, expected {w.num_customers}", (i, min(len(r), w.num_customers))
            )
        for j, x in enumerate(r, start=1):
            if isinstance(x, bool) or not isinstance(x, numbers.Real):
                raise WorkloadError(f"non-numeric value {x!r} at ({i},{j})", (i, j))
            if w.numeric == INT and not _is_int(x):
                raise WorkloadError(f"non-integer value {x!r} at ({i},{j}) in integer mode", (i, j))
            if isinstance(x, float) and math.isnan(x):
                raise WorkloadError(f"NaN at ({i},{j})", (i, j))
            if isinstance(x, float) and math.isinf(x):
                raise WorkloadError(f"infinite value at ({i},{j})", (i, j))
            if x < 0:
                raise WorkloadError(f"negative time {x!r} at ({i},{j})", (i, j))
    return w


@dataclass(frozen=True)
class DepartureTable:
    """Departure epochs ``d[i][j]`` for ``i = 0..M``, ``j = 0..N``.

    ``b``, when present, holds service initiation epochs with ``b[i][j - 1]``
    for customer ``j`` (no zero column).
    """

    d: Matrix
    b: Optional[Matrix] = None

    @property
    def num_servers(self) -> int:
        return len(self.d) - 1

    @property
    def num_customers(self) -> int:
        return len(self.d[0]) - 1

    @property
    def final_departures(self) -> tuple:
        return tuple(r[-1] for r in self.d)

    def departure(self, i: int, j: int):
        return self.d[i][j]

    def check(self, w: Optional[Workload] = None) -> None:
        """Assert the boundary, monotonicity and (if stored) B/D relations.

        Raises AssertionError naming the first failing cell.
        """
        d = self.d
        for i, r in enumerate(d):
            if r[0] != 0:
                raise AssertionError(f"D[{i}][0] = {r[0]!r}, expected 0")
            for j in range(1, len(r)):
                if r[j] < r[j - 1]:
                    raise AssertionError(f"D[{i}][{j}] < D[{i}][{j - 1}]")
                if i > 0 and r[j] < d[i - 1][j]:
                    raise AssertionError(f"D[{i}][{j}] < D[{i - 1}][{j}]")
        if self.b is not None:
            for i, r in enumerate(self.b):
                for j in range(1, len(r) + 1):
                    north = d[i - 1][j] if i > 0 else 0
                    if r[j - 1] != max(north, d[i][j - 1]):
                        raise AssertionError(f"B[{i}][{j}] != max(D[{i - 1}][{j}], D[{i}][{j - 1}])")
                    if w is not None and d[i][j] != r[j - 1] + w.tau[i][j - 1]:
                        raise AssertionError(f"D[{i}][{j}] != B[{i}][{j}] + tau[{i}][{j}]")


@dataclass(frozen=True)
class WavefrontProfile:
    """Diagonal widths ``l_k`` for ``k = 1..M+N`` with ``L1 = min(M+1, N)``
    and ``L2 = max(M+1, N)``."""

    widths: tuple[int, ...]
    l1: int
    l2: int


@dataclass(frozen=True)
class PerfPrediction:
    processors: int
    t_exact: int
    t_serial: int
    t_asymptotic: float
    speedup: float
    speedup_asymptotic: float


@dataclass(frozen=True)
class EngineInstrumentation:
    """Counters reported by an engine run.

    ``scalar_ops`` counts one max and one add per cell. ``parallel_steps`` is
    only set by the parallel engine: the number of barrier-delimited rounds
    in which each worker performs at most one operation. ``memory_slots`` is
    the length of the working storage the engine allocated besides its
    output, and ``peak_live`` the largest number of row values one diagonal
    needed at once.
    """

    engine: str
    scalar_ops: int
    workers: int = 1
    parallel_steps: Optional[int] = None
    memory_slots: Optional[int] = None
    peak_live: Optional[int] = None
    wall_ns: int = 0

    def to_dict(self, wall_time: bool = True) -> dict:
        out = {
            "engine": self.engine,
            "workers": self.workers,
            "scalar_ops": self.scalar_ops,
            "parallel_steps": self.parallel_steps,
            "memory_slots": self.memory_slots,
            "peak_live": self.peak_live,
        }
        if wall_time:
            out["wall_ns"] = self.wall_ns
        return out


@dataclass(frozen=True)
class SimReport:
    final_departures: tuple
    instrumentation: EngineInstrumentation
    table: Optional[DepartureTable] = None
    metrics: Optional[tuple] = None
