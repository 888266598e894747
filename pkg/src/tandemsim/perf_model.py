"""Closed-form parallel time and speedup of the wavefront algorithm.

Times are counts of unit operations (one max or one add) and ignore
indexing, data movement and synchronization cost. All counts are Python
ints so large grids never overflow.
"""

from __future__ import annotations

from .core_types import PerfPrediction, WavefrontProfile


def _check_positive(**kwargs) -> None:
    for name, value in kwargs.items():
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")


def diagonal_bounds(num_servers: int, num_customers: int) -> tuple[int, int]:
    """Return ``(L1, L2) = (min(M+1, N), max(M+1, N))``."""
    return min(num_servers + 1, num_customers), max(num_servers + 1, num_customers)


def width_runs(num_servers: int, num_customers: int) -> list[tuple[int, int]]:
    """Run-length form of the width sequence as ``(width, count)`` pairs.

    Lets long plateaus be summed without materializing ``M + N`` entries.
    """
    _check_positive(M=num_servers, N=num_customers)
    l1, l2 = diagonal_bounds(num_servers, num_customers)
    ramp = [(w, 1) for w in range(1, l1)]
    return ramp + [(l1, l2 - l1 + 1)] + ramp[::-1]


def wavefront_widths(num_servers: int, num_customers: int) -> WavefrontProfile:
    """Number of cells on each anti-diagonal ``i + j = k``, ``k = 1..M+N``."""
    widths: list[int] = []
    for w, count in width_runs(num_servers, num_customers):
        widths.extend([w] * count)
    l1, l2 = diagonal_bounds(num_servers, num_customers)
    return WavefrontProfile(tuple(widths), l1, l2)


def steps_for_width(width: int, processors: int) -> int:
    """Parallel steps needed for ``width`` independent operations."""
    return (width - 1) // processors + 1


def parallel_time_by_sum(widths, processors: int) -> int:
    """Two phases per diagonal, each taking ``steps_for_width`` steps."""
    _check_positive(P=processors)
    return 2 * sum(steps_for_width(w, processors) for w in widths)


def _parallel_time_runs(num_servers: int, num_customers: int, processors: int) -> int:
    return 2 * sum(count * steps_for_width(w, processors) for w, count in width_runs(num_servers, num_customers))


def parallel_time_split(num_servers: int, num_customers: int, processors: int) -> int:
    """Ramp-plus-plateau decomposition of the total time.

    The ``4 * sum`` term covers both ramps and counts the ``k = L1`` diagonal
    twice, so the plateau term carries ``L2 - L1 - 1`` further diagonals.
    """
    _check_positive(M=num_servers, N=num_customers, P=processors)
    l1, l2 = diagonal_bounds(num_servers, num_customers)
    ramp = sum(steps_for_width(k, processors) for k in range(1, l1 + 1))
    return 4 * ramp + 2 * (l2 - l1 - 1) * steps_for_width(l1, processors)


def floor_sum(l1: int, processors: int) -> int:
    """``sum_{k=1}^{L1} floor((k-1)/P)`` by direct summation."""
    return sum((k - 1) // processors for k in range(1, l1 + 1))


def floor_sum_closed(l1: int, processors: int) -> int:
    """Closed form of :func:`floor_sum`: ``(P/2) q (q-1) + (L1 - P q) q``."""
    q = (l1 - 1) // processors
    # q(q-1) is even, so the division is exact
    return processors * q * (q - 1) // 2 + (l1 - processors * q) * q


def closed_form_parallel_time(num_servers: int, num_customers: int, processors: int) -> int:
    _check_positive(M=num_servers, N=num_customers, P=processors)
    l1, l2 = diagonal_bounds(num_servers, num_customers)
    q = (l1 - 1) // processors
    span = l1 + l2 - 1
    return 2 * span + 2 * q * (span - processors - processors * q)


def exact_parallel_time(num_servers: int, num_customers: int, processors: int) -> int:
    """Exact step count ``T_P`` of the two-phase wavefront with P processors.

    The closed form is cross-checked against the direct sum over diagonal
    widths on every call.
    """
    closed = closed_form_parallel_time(num_servers, num_customers, processors)
    direct = _parallel_time_runs(num_servers, num_customers, processors)
    if closed != direct:
        raise AssertionError(
            f"closed form {closed} != direct sum {direct} for M={num_servers} N={num_customers} P={processors}"
        )
    return closed


def serial_time(num_servers: int, num_customers: int) -> int:
    _check_positive(M=num_servers, N=num_customers)
    return 2 * (num_servers + 1) * num_customers


def asymptotic_parallel_time(num_servers: int, num_customers: int, processors: int) -> float:
    """The order expression ``2M + 2N + 2 floor((L1-1)/P) (L2 - P)`` as a number.

    Exact at ``P = 1`` and ``P >= L1``; only an approximation in between.
    """
    _check_positive(M=num_servers, N=num_customers, P=processors)
    l1, l2 = diagonal_bounds(num_servers, num_customers)
    q = (l1 - 1) // processors
    return float(2 * num_servers + 2 * num_customers + 2 * q * (l2 - processors))


def speedup(num_servers: int, num_customers: int, processors: int) -> float:
    t1 = exact_parallel_time(num_servers, num_customers, 1)
    if t1 != serial_time(num_servers, num_customers):
        raise AssertionError(f"T_1 = {t1} differs from 2(M+1)N")
    return t1 / exact_parallel_time(num_servers, num_customers, processors)


def asymptotic_speedup(num_servers: int, processors: int) -> float:
    """Limit of the speedup as N grows: ``(M+1) / (1 + floor(M/P))``."""
    _check_positive(M=num_servers, P=processors)
    return (num_servers + 1) / (1 + num_servers // processors)


def predict(num_servers: int, num_customers: int, processors: int) -> PerfPrediction:
    t_p = exact_parallel_time(num_servers, num_customers, processors)
    t_1 = serial_time(num_servers, num_customers)
    return PerfPrediction(
        processors=processors,
        t_exact=t_p,
        t_serial=t_1,
        t_asymptotic=asymptotic_parallel_time(num_servers, num_customers, processors),
        speedup=speedup(num_servers, num_customers, processors),
        speedup_asymptotic=asymptotic_speedup(num_servers, processors),
    )
