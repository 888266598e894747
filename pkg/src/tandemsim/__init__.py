"""Wavefront simulation of tandem queues with infinite buffers."""

from .core_types import (
    DepartureTable,
    EngineInstrumentation,
    PerfPrediction,
    SimReport,
    WavefrontProfile,
    Workload,
    WorkloadError,
    validate_workload,
)
from .engines import parallel_wavefront, run_engine, serial_full, serial_inplace
from .metrics import CustomerMetrics, compute_metrics
from .oracle import simulate_event_driven
from .perf_model import (
    asymptotic_parallel_time,
    asymptotic_speedup,
    exact_parallel_time,
    predict,
    speedup,
    wavefront_widths,
)
from .workload_gen import DistributionSpec, generate, parse_dist, read_workload, write_workload

__all__ = [
    "CustomerMetrics",
    "DepartureTable",
    "DistributionSpec",
    "EngineInstrumentation",
    "PerfPrediction",
    "SimReport",
    "WavefrontProfile",
    "Workload",
    "WorkloadError",
    "asymptotic_parallel_time",
    "asymptotic_speedup",
    "compute_metrics",
    "exact_parallel_time",
    "generate",
    "parallel_wavefront",
    "parse_dist",
    "predict",
    "read_workload",
    "run_engine",
    "serial_full",
    "serial_inplace",
    "simulate_event_driven",
    "speedup",
    "validate_workload",
    "wavefront_widths",
    "write_workload",
]

__version__ = "0.1.0"
