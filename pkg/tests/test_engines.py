import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tandemsim import Workload, parallel_wavefront, run_engine, serial_full, serial_inplace
from tandemsim.perf_model import exact_parallel_time

from conftest import brute_parallel_steps, naive_departures

BACKENDS = ["threads", "lockstep"]


def _random_workload(rng, m, n, floating=False):
    if floating:
        rows = [[rng.expovariate(1.0) for _ in range(n)] for _ in range(m + 1)]
    else:
        rows = [[rng.randint(0, 9) for _ in range(n)] for _ in range(m + 1)]
    return Workload.from_rows(rows)


def _same_bits(a, b):
    return a == b and all(type(x) is type(y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def test_unit_times_give_i_plus_j(unit_workload):
    table, inst = serial_full(unit_workload)
    for i in range(3):
        for j in range(1, 6):
            assert table.d[i][j] == i + j
    assert inst.scalar_ops == 30
    assert inst.parallel_steps is None


def test_hand_unrolled_small_case(small_workload):
    table, _ = serial_full(small_workload)
    assert table.d == ((0, 1, 2, 3), (0, 3, 5, 7))


def test_inplace_examples(unit_workload, small_workload):
    assert serial_inplace(unit_workload)[0] == (5, 6, 7)
    assert serial_inplace(small_workload)[0] == (3, 7)


def test_inplace_buffer_size():
    w = Workload.from_rows([[1] * 100 for _ in range(4)])
    _, inst = serial_inplace(w)
    assert inst.memory_slots == 5
    assert inst.peak_live == 5
    assert inst.scalar_ops == 2 * 4 * 100


@pytest.mark.parametrize("m,n", [(1, 1), (3, 2), (8, 3), (5, 5), (2, 40), (12, 1)])
def test_ring_mode_tail_and_footprint(m, n):
    rng = random.Random(m * 100 + n)
    w = _random_workload(rng, m, n)
    table, _ = serial_full(w)
    tail, inst = serial_inplace(w, ring=True)
    assert tail == table.final_departures[-len(tail):]
    assert tail[-1] == table.d[m][n]
    assert inst.memory_slots == min(m + 1, n) + 2
    assert len(tail) == min(m + 1, min(m + 1, n) + 1)


@pytest.mark.parametrize("p,steps", [(3, 14), (2, 20), (1, 30)])
@pytest.mark.parametrize("backend", BACKENDS)
def test_parallel_step_examples(unit_workload, p, steps, backend):
    table, inst = parallel_wavefront(unit_workload, p, backend=backend)
    assert inst.parallel_steps == steps
    assert inst.scalar_ops == 30
    assert inst.workers == p
    assert table == serial_full(unit_workload)[0]


@pytest.mark.parametrize("backend", BACKENDS)
def test_oversubscribed_workers_idle(unit_workload, backend):
    _, inst = parallel_wavefront(unit_workload, 50, backend=backend)
    assert inst.parallel_steps == 14


@pytest.mark.parametrize("bad", [0, -1, 1.5, True])
def test_parallel_rejects_bad_workers(unit_workload, bad):
    with pytest.raises(ValueError, match="workers must be >= 1"):
        parallel_wavefront(unit_workload, bad)


def test_parallel_rejects_unknown_backend(unit_workload):
    with pytest.raises(ValueError, match="backend"):
        parallel_wavefront(unit_workload, 2, backend="gpu")


@pytest.mark.parametrize("backend", BACKENDS)
def test_parallel_keeps_service_starts(backend):
    w = _random_workload(random.Random(5), 4, 9)
    table, _ = parallel_wavefront(w, 3, backend=backend, keep_b=True)
    assert table.b is not None
    table.check(w)


@pytest.mark.parametrize("floating", [False, True])
def test_engines_bit_identical(floating):
    rng = random.Random(11)
    for _ in range(30):
        m, n = rng.randint(1, 7), rng.randint(1, 20)
        w = _random_workload(rng, m, n, floating)
        ref = naive_departures(w)
        table, _ = serial_full(w)
        assert _same_bits(table.d, ref)
        final, _ = serial_inplace(w)
        assert final == tuple(r[-1] for r in ref)
        for p in range(1, min(m + 1, n) + 3):
            for backend in BACKENDS:
                ptable, inst = parallel_wavefront(w, p, backend=backend)
                assert _same_bits(ptable.d, ref)
                assert inst.parallel_steps == exact_parallel_time(m, n, p) == brute_parallel_steps(m, n, p)
                assert inst.scalar_ops == 2 * (m + 1) * n


def test_thread_runs_are_deterministic():
    w = _random_workload(random.Random(3), 6, 25, floating=True)
    runs = [parallel_wavefront(w, 4) for _ in range(10)]
    assert all(t == runs[0][0] for t, _ in runs)
    assert len({i.parallel_steps for _, i in runs}) == 1


def test_worker_errors_propagate(monkeypatch, unit_workload):
    from tandemsim import engines

    original = engines._Wavefront.phase_d

    def flaky(self, k, r):
        if r == 1 and k == 4:
            raise RuntimeError("worker 1 failed")
        return original(self, k, r)

    monkeypatch.setattr(engines._Wavefront, "phase_d", flaky)
    with pytest.raises(RuntimeError, match="worker 1 failed"):
        parallel_wavefront(unit_workload, 3)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 5).flatmap(
        lambda m: st.integers(1, 10).flatmap(
            lambda n: st.tuples(
                st.lists(st.lists(st.floats(0, 1e6), min_size=n, max_size=n), min_size=m + 1, max_size=m + 1),
                st.integers(1, min(m + 1, n) + 2),
            )
        )
    )
)
def test_parallel_matches_naive_property(args):
    rows, p = args
    w = Workload.from_rows(rows, numeric="float")
    table, _ = parallel_wavefront(w, p)
    assert table.d == naive_departures(w)
    table.check()


def test_run_engine_dispatch(unit_workload):
    assert run_engine("serial", unit_workload).final_departures == (5, 6, 7)
    assert run_engine("inplace", unit_workload).table is None
    rep = run_engine("parallel", unit_workload, 3)
    assert rep.instrumentation.parallel_steps == 14
    with pytest.raises(ValueError):
        run_engine("bogus", unit_workload)
