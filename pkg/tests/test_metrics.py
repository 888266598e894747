import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tandemsim import DepartureTable, Workload, compute_metrics, parallel_wavefront, serial_full, simulate_event_driven
from tandemsim.metrics import service_starts, summarize


def test_unit_time_no_queueing(unit_workload):
    ms = compute_metrics(unit_workload, serial_full(unit_workload)[0])
    assert len(ms) == 5
    assert all(c.waits == (0, 0) and c.sojourn == 2 for c in ms)


def test_small_case_waits(small_workload):
    ms = compute_metrics(small_workload, serial_full(small_workload)[0])
    assert [c.waits[0] for c in ms] == [0, 1, 2]
    assert [c.sojourn for c in ms] == [2, 3, 4]


def test_zero_first_service_never_waits():
    rng = random.Random(4)
    rows = [[rng.randint(0, 5) for _ in range(15)], [0] * 15, [rng.randint(0, 5) for _ in range(15)]]
    w = Workload.from_rows(rows)
    assert all(c.waits[0] == 0 for c in compute_metrics(w, serial_full(w)[0]))


def test_shape_mismatch(unit_workload, small_workload):
    with pytest.raises(ValueError, match="shape"):
        compute_metrics(small_workload, serial_full(unit_workload)[0])


def test_stored_b_matches_recomputed():
    w = Workload.from_rows([[3, 1, 4, 1, 5], [9, 2, 6, 5, 3], [5, 8, 9, 7, 9]])
    with_b, _ = parallel_wavefront(w, 2, keep_b=True)
    assert service_starts(with_b) == service_starts(DepartureTable(with_b.d))
    assert compute_metrics(w, with_b) == compute_metrics(w, simulate_event_driven(w))


@settings(max_examples=100, deadline=None)
@given(
    st.integers(1, 5).flatmap(
        lambda m: st.integers(1, 12).flatmap(
            lambda n: st.lists(st.lists(st.integers(0, 9), min_size=n, max_size=n), min_size=m + 1, max_size=m + 1)
        )
    )
)
def test_decomposition_integer(rows):
    w = Workload.from_rows(rows)
    for c in compute_metrics(w, serial_full(w)[0]):
        service = sum(w.tau[i][c.customer - 1] for i in range(1, w.num_servers + 1))
        assert all(x >= 0 for x in c.waits)
        assert c.sojourn >= service
        assert c.sojourn == sum(c.waits) + service


@settings(max_examples=100, deadline=None)
@given(
    st.integers(1, 5).flatmap(
        lambda m: st.integers(1, 12).flatmap(
            lambda n: st.lists(st.lists(st.floats(0, 100), min_size=n, max_size=n), min_size=m + 1, max_size=m + 1)
        )
    )
)
def test_decomposition_float(rows):
    w = Workload.from_rows(rows, numeric="float")
    for c in compute_metrics(w, serial_full(w)[0]):
        service = sum(w.tau[i][c.customer - 1] for i in range(1, w.num_servers + 1))
        assert all(x >= 0 for x in c.waits)
        assert c.sojourn == pytest.approx(sum(c.waits) + service, abs=1e-9)


def test_summary(small_workload):
    s = summarize(compute_metrics(small_workload, serial_full(small_workload)[0]))
    assert s == {"customers": 3, "mean_sojourn": 3.0, "max_sojourn": 4, "mean_wait": 1.0, "max_wait": 2}
