"""Per-customer waiting and sojourn times derived from a departure table."""

from __future__ import annotations

from dataclasses import dataclass

from .core_types import DepartureTable, Workload


@dataclass(frozen=True)
class CustomerMetrics:
    """``waits[i - 1]`` is the queueing delay of the customer at server ``i``."""

    customer: int
    arrival: float
    departure: float
    sojourn: float
    waits: tuple

    @property
    def total_wait(self):
        return sum(self.waits)


def service_starts(t: DepartureTable) -> tuple:
    """Service initiation epochs ``B[i][j - 1] = max(D[i-1][j], D[i][j-1])``."""
    if t.b is not None:
        return t.b
    d = t.d
    zero = d[0][0]
    return tuple(
        tuple(max(d[i - 1][j] if i else zero, d[i][j - 1]) for j in range(1, len(d[i])))
        for i in range(len(d))
    )


def compute_metrics(w: Workload, t: DepartureTable) -> tuple[CustomerMetrics, ...]:
    if (t.num_servers, t.num_customers) != (w.num_servers, w.num_customers):
        raise ValueError(
            f"table shape M={t.num_servers} N={t.num_customers} does not match "
            f"workload M={w.num_servers} N={w.num_customers}"
        )
    d = t.d
    b = service_starts(t)
    m = w.num_servers
    out = []
    for j in range(1, w.num_customers + 1):
        waits = tuple(b[i][j - 1] - d[i - 1][j] for i in range(1, m + 1))
        out.append(CustomerMetrics(j, d[0][j], d[m][j], d[m][j] - d[0][j], waits))
    return tuple(out)


def summarize(metrics) -> dict:
    n = len(metrics)
    if n == 0:
        return {"customers": 0}
    return {
        "customers": n,
        "mean_sojourn": sum(c.sojourn for c in metrics) / n,
        "max_sojourn": max(c.sojourn for c in metrics),
        "mean_wait": sum(c.total_wait for c in metrics) / n,
        "max_wait": max(c.total_wait for c in metrics),
    }
