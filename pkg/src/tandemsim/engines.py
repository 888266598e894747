"""Recurrence engines: full serial sweep, in-place sweep, parallel wavefront.

Every engine walks the anti-diagonals ``k = i + j = 1..M+N`` and, within a
diagonal, customers ``j = max(1, k-M)..min(k, N)`` in ascending order. Each
cell is computed as ``max(north, west) + tau`` with the same operand order
in every engine, so results are bit-identical in both numeric modes. The max
is written as ``west if west > north else north``, which keeps the tie rule
of ``max(north, west)``.
"""

from __future__ import annotations

import threading
import time
from typing import Optional

from .core_types import FLOAT, DepartureTable, EngineInstrumentation, SimReport, Workload, validate_workload

BACKENDS = ("threads", "lockstep")


def _zero(w: Workload):
    return 0.0 if w.numeric == FLOAT else 0


def _empty_table(w: Workload) -> list[list]:
    z = _zero(w)
    return [[z] * (w.num_customers + 1) for _ in range(w.num_servers + 1)]


def serial_full(w: Workload) -> tuple[DepartureTable, EngineInstrumentation]:
    """Fill the whole departure table diagonal by diagonal."""
    validate_workload(w)
    m, n, tau = w.num_servers, w.num_customers, w.tau
    zero = _zero(w)
    d = _empty_table(w)
    ops = 0
    t0 = time.perf_counter_ns()
    for k in range(1, m + n + 1):
        for j in range(max(1, k - m), min(k, n) + 1):
            i = k - j
            north = d[i - 1][j] if i else zero
            west = d[i][j - 1]
            d[i][j] = (west if west > north else north) + tau[i][j - 1]
            ops += 2
    wall = time.perf_counter_ns() - t0
    table = DepartureTable(tuple(map(tuple, d)))
    return table, EngineInstrumentation("serial", ops, wall_ns=wall)


def serial_inplace(w: Workload, ring: bool = False) -> tuple[tuple, EngineInstrumentation]:
    """Sweep the diagonals keeping one working value per row.

    ``d[0]`` is the constant-zero row above the arrivals and ``d[i + 1]``
    the latest departure of row ``i``. Returns ``D[i][N]`` for every row.

    With ``ring=True`` rows share ``min(M+1, N) + 1`` slots by modular
    indexing, and only the final departures of the last rows still resident
    at the end are returned (always including the last server).
    """
    validate_workload(w)
    m, n, tau = w.num_servers, w.num_customers, w.tau
    zero = _zero(w)
    ops = 0
    peak_live = 0
    t0 = time.perf_counter_ns()
    if not ring:
        d = [zero] * (m + 2)
        for k in range(1, m + n + 1):
            lo, hi = max(1, k - m), min(k, n)
            for j in range(lo, hi + 1):
                i = k - j
                north, west = d[i], d[i + 1]
                d[i + 1] = (west if west > north else north) + tau[i][j - 1]
                ops += 2
            # rows written this diagonal plus the row (or sentinel) read above them
            peak_live = max(peak_live, hi - lo + 2)
        final = tuple(d[1:])
        slots = len(d)
    else:
        r = min(m + 1, n) + 1
        d = [zero] * r
        for k in range(1, m + n + 1):
            lo, hi = max(1, k - m), min(k, n)
            for j in range(lo, hi + 1):
                i = k - j
                north = d[(i - 1) % r] if i else zero
                west = d[i % r] if j > 1 else zero
                d[i % r] = (west if west > north else north) + tau[i][j - 1]
                ops += 2
            peak_live = max(peak_live, hi - lo + 2)
        first = max(0, m + 1 - r)
        final = tuple(d[i % r] for i in range(first, m + 1))
        slots = r + 1
    wall = time.perf_counter_ns() - t0
    inst = EngineInstrumentation("inplace", ops, memory_slots=slots, peak_live=peak_live, wall_ns=wall)
    return final, inst


class _Wavefront:
    """State shared by the workers of one parallel run.

    Worker ``r`` owns diagonal cells ``c = r, r + P, r + 2P, ...`` so parallel
    step ``s`` of a phase covers the contiguous cells ``sP..sP+P-1``.
    """

    def __init__(self, w: Workload, workers: int, keep_b: bool):
        self.m, self.n, self.tau = w.num_servers, w.num_customers, w.tau
        self.zero = _zero(w)
        self.workers = workers
        self.d = _empty_table(w)
        self.bbuf = [self.zero] * min(self.m + 1, self.n)
        self.b = [[self.zero] * self.n for _ in range(self.m + 1)] if keep_b else None
        self.num_phases = 2 * (self.m + self.n)

    def diagonal(self, k: int) -> tuple[int, int]:
        jlo = max(1, k - self.m)
        return jlo, min(k, self.n) - jlo + 1

    def phase_b(self, k: int, r: int) -> int:
        d, bbuf, zero = self.d, self.bbuf, self.zero
        jlo, width = self.diagonal(k)
        done = 0
        for c in range(r, width, self.workers):
            j = jlo + c
            i = k - j
            north = d[i - 1][j] if i else zero
            west = d[i][j - 1]
            bbuf[c] = west if west > north else north
            done += 1
        return done

    def phase_d(self, k: int, r: int) -> int:
        d, bbuf, tau, b = self.d, self.bbuf, self.tau, self.b
        jlo, width = self.diagonal(k)
        done = 0
        for c in range(r, width, self.workers):
            j = jlo + c
            i = k - j
            d[i][j] = bbuf[c] + tau[i][j - 1]
            if b is not None:
                b[i][j - 1] = bbuf[c]
            done += 1
        return done

    def run_worker(self, r: int, counts: list[int], barrier: Optional[threading.Barrier]) -> None:
        idx = 0
        for k in range(1, self.m + self.n + 1):
            counts[idx] = self.phase_b(k, r)
            if barrier is not None:
                barrier.wait()
            counts[idx + 1] = self.phase_d(k, r)
            if barrier is not None:
                barrier.wait()
            idx += 2


def _run_threads(state: _Wavefront) -> list[list[int]]:
    # workers with rank >= L1 never own a cell, so they are not spawned
    nthreads = min(state.workers, len(state.bbuf))
    counts = [[0] * state.num_phases for _ in range(nthreads)]
    if nthreads == 1:
        state.run_worker(0, counts[0], None)
        return counts
    barrier = threading.Barrier(nthreads)
    errors: list[BaseException] = []

    def target(r: int) -> None:
        try:
            state.run_worker(r, counts[r], barrier)
        except threading.BrokenBarrierError:
            pass
        except BaseException as exc:
            errors.append(exc)
            barrier.abort()

    threads = [threading.Thread(target=target, args=(r,), daemon=True) for r in range(1, nthreads)]
    for t in threads:
        t.start()
    target(0)
    for t in threads:
        t.join()
    if errors:
        raise errors[0]
    return counts


def _run_lockstep(state: _Wavefront) -> list[list[int]]:
    """Execute the same schedule on one thread, one parallel step at a time."""
    p = state.workers
    nranks = min(p, len(state.bbuf))
    counts = [[0] * state.num_phases for _ in range(nranks)]
    d, bbuf, tau, b, zero = state.d, state.bbuf, state.tau, state.b, state.zero
    idx = 0
    for k in range(1, state.m + state.n + 1):
        jlo, width = state.diagonal(k)
        for phase in (0, 1):
            for s in range(0, width, p):
                for r in range(min(p, width - s)):
                    c = s + r
                    j = jlo + c
                    i = k - j
                    if phase == 0:
                        north = d[i - 1][j] if i else zero
                        west = d[i][j - 1]
                        bbuf[c] = west if west > north else north
                    else:
                        d[i][j] = bbuf[c] + tau[i][j - 1]
                        if b is not None:
                            b[i][j - 1] = bbuf[c]
                    counts[r][idx] += 1
            idx += 1
    return counts


def parallel_wavefront(
    w: Workload, workers: int, backend: str = "threads", keep_b: bool = False
) -> tuple[DepartureTable, EngineInstrumentation]:
    """Two-phase wavefront: all B cells of a diagonal, barrier, all D cells, barrier.

    ``backend="threads"`` runs ``min(workers, L1)`` threads synchronized by a
    barrier; ``backend="lockstep"`` executes the identical schedule on the
    calling thread. ``parallel_steps`` is measured from per-worker operation
    counts: a phase lasts as long as its busiest worker.
    """
    validate_workload(w)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers!r}")
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {', '.join(BACKENDS)}")
    state = _Wavefront(w, workers, keep_b)
    t0 = time.perf_counter_ns()
    counts = _run_threads(state) if backend == "threads" else _run_lockstep(state)
    wall = time.perf_counter_ns() - t0
    steps = sum(max(c[idx] for c in counts) for idx in range(state.num_phases))
    ops = sum(map(sum, counts))
    b = tuple(map(tuple, state.b)) if state.b is not None else None
    table = DepartureTable(tuple(map(tuple, state.d)), b)
    inst = EngineInstrumentation(
        "parallel",
        ops,
        workers=workers,
        parallel_steps=steps,
        memory_slots=len(state.bbuf),
        peak_live=len(state.bbuf),
        wall_ns=wall,
    )
    return table, inst


ENGINES = ("serial", "inplace", "parallel")


def run_engine(name: str, w: Workload, workers: int = 1, backend: str = "threads") -> SimReport:
    """Run an engine by CLI name and wrap its result in a SimReport."""
    if name == "serial":
        table, inst = serial_full(w)
        return SimReport(table.final_departures, inst, table)
    if name == "inplace":
        final, inst = serial_inplace(w)
        return SimReport(final, inst)
    if name == "parallel":
        table, inst = parallel_wavefront(w, workers, backend=backend)
        return SimReport(table.final_departures, inst, table)
    raise ValueError(f"unknown engine {name!r}; expected one of {', '.join(ENGINES)}")
