"""Event-driven simulator of the tandem line, independent of the recurrence.

Stations keep explicit FIFO queues and busy flags; the departure table is
read off the completion events.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .core_types import FLOAT, DepartureTable, Workload, validate_workload

# completions sort before arrivals at equal times
COMPLETION = 0
ARRIVAL = 1


@dataclass(order=True, frozen=True)
class Event:
    time: float
    kind: int
    server: int
    customer: int


@dataclass
class _Station:
    queue: deque = field(default_factory=deque)
    busy: bool = False


def simulate_event_driven(w: Workload) -> DepartureTable:
    validate_workload(w)
    m, n, tau = w.num_servers, w.num_customers, w.tau
    zero = 0.0 if w.numeric == FLOAT else 0
    d = [[zero] * (n + 1) for _ in range(m + 1)]
    stations = [_Station() for _ in range(m + 1)]  # index 0 unused
    events: list[Event] = []

    def start_service(i: int, j: int, now) -> None:
        stations[i].busy = True
        heapq.heappush(events, Event(now + tau[i][j - 1], COMPLETION, i, j))

    def join(i: int, j: int, now) -> None:
        st = stations[i]
        if st.busy:
            st.queue.append(j)
        else:
            start_service(i, j, now)

    # first arrival epoch is tau_01 after time zero
    heapq.heappush(events, Event(zero + tau[0][0], ARRIVAL, 0, 1))
    last = zero
    while events:
        ev = heapq.heappop(events)
        assert ev.time >= last, "event times went backwards"
        last = ev.time
        if ev.kind == ARRIVAL:
            j = ev.customer
            d[0][j] = ev.time
            if j < n:
                heapq.heappush(events, Event(ev.time + tau[0][j], ARRIVAL, 0, j + 1))
            join(1, j, ev.time)
        else:
            i, j = ev.server, ev.customer
            d[i][j] = ev.time
            st = stations[i]
            st.busy = False
            if i < m:
                join(i + 1, j, ev.time)
            if st.queue:
                start_service(i, st.queue.popleft(), ev.time)
    return DepartureTable(tuple(map(tuple, d)))
