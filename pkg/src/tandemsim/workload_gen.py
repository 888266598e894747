"""Seeded workload generation and the workload CSV format.

Random streams
--------------
Row ``i`` of a workload generated with seed ``s`` draws from
``PCG64(SeedSequence(entropy=s, spawn_key=(i,)))``. Each 64-bit output
``x`` becomes a unit draw ``u = (x >> 11) * 2**-53`` in ``[0, 1)``, and

* ``constant(c)``: ``c`` (no draws consumed),
* ``uniform(a, b)``: ``a + (b - a) * u``,
* ``exponential(rate)``: ``-log1p(-u) / rate``.

Verification trials use the same generator with ``spawn_key=(trial,)``.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Union

import numpy as np

from .core_types import FLOAT, INT, Workload, WorkloadError

SEED_MAX = 2**64 - 1
HEADER_RE = re.compile(r"^#\s*tandem-workload\s+M=(\d+)\s+N=(\d+)\s*$")

KINDS = {"constant": 1, "uniform": 2, "exponential": 1}


@dataclass(frozen=True)
class DistributionSpec:
    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution {self.kind!r}; expected one of {', '.join(KINDS)}")
        if len(self.params) != KINDS[self.kind]:
            raise ValueError(f"{self.kind} takes {KINDS[self.kind]} parameter(s), got {len(self.params)}")
        for p in self.params:
            if isinstance(p, bool) or not isinstance(p, (int, float)) or not math.isfinite(p):
                raise ValueError(f"{self.kind} parameters must be finite numbers, got {p!r}")
        if self.kind == "constant" and self.params[0] < 0:
            raise ValueError(f"constant must be >= 0, got {self.params[0]!r}")
        if self.kind == "uniform":
            a, b = self.params
            if not 0 <= a <= b:
                raise ValueError(f"uniform needs 0 <= a <= b, got a={a!r} b={b!r}")
        if self.kind == "exponential" and self.params[0] <= 0:
            raise ValueError(f"exponential rate must be > 0, got {self.params[0]!r}")

    @property
    def is_integer(self) -> bool:
        return self.kind == "constant" and isinstance(self.params[0], int)

    def __str__(self) -> str:
        return ":".join([self.kind, *map(str, self.params)])


def _number(text: str) -> Union[int, float]:
    try:
        return int(text, 10)
    except ValueError:
        return float(text)


def parse_dist(text: str) -> DistributionSpec:
    """Parse ``constant:C``, ``uniform:A:B`` or ``exponential:RATE``."""
    kind, *rest = text.strip().split(":")
    try:
        params = tuple(_number(p) for p in rest)
    except ValueError:
        raise ValueError(f"bad distribution parameters in {text!r}") from None
    return DistributionSpec(kind, params)


def parse_seed(text: Union[str, int]) -> int:
    """Accept a decimal or ``0x`` hexadecimal 64-bit seed."""
    if isinstance(text, int):
        value = text
    else:
        s = text.strip().lower()
        try:
            value = int(s, 16) if s.startswith("0x") else int(s, 10)
        except ValueError:
            raise ValueError(f"seed must be a decimal or 0x-hex integer, got {text!r}") from None
    if not 0 <= value <= SEED_MAX:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {value}")
    return value


def _stream(seed: int, key: int) -> np.random.PCG64:
    return np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(key,)))


def unit_draws(seed: int, key: int, size: int) -> np.ndarray:
    raw = _stream(seed, key).random_raw(size)
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _sample_row(spec: DistributionSpec, seed: int, row: int, n: int) -> list:
    if spec.kind == "constant":
        return [spec.params[0]] * n
    u = unit_draws(seed, row, n)
    if spec.kind == "uniform":
        a, b = map(float, spec.params)
        x = a + (b - a) * u
    else:
        x = -np.log1p(-u) / float(spec.params[0])
    return x.tolist()


def generate(
    spec: DistributionSpec,
    num_servers: int,
    num_customers: int,
    seed: int = 0,
    row_specs: Optional[Mapping[int, DistributionSpec]] = None,
) -> Workload:
    """Draw a workload; ``row_specs`` overrides ``spec`` for individual rows."""
    if num_servers < 1 or num_customers < 1:
        raise ValueError(f"need M >= 1 and N >= 1, got M={num_servers} N={num_customers}")
    seed = parse_seed(seed)
    row_specs = dict(row_specs or {})
    for i in row_specs:
        if not 0 <= i <= num_servers:
            raise ValueError(f"row override {i} outside 0..{num_servers}")
    specs = [row_specs.get(i, spec) for i in range(num_servers + 1)]
    numeric = INT if all(s.is_integer for s in specs) else FLOAT
    rows = [_sample_row(s, seed, i, num_customers) for i, s in enumerate(specs)]
    return Workload.from_rows(rows, numeric=numeric)


def random_integer_workload(seed: int, trial: int, max_servers: int, max_customers: int, max_tau: int = 9) -> Workload:
    """Small integer workload for equivalence trials; tau uniform on ``0..max_tau``."""
    head = unit_draws(seed, trial, 2)
    m = 1 + int(head[0] * max_servers)
    n = 1 + int(head[1] * max_customers)
    u = unit_draws(seed, trial, 2 + (m + 1) * n)[2:]
    vals = np.floor(u * (max_tau + 1)).astype(np.int64).tolist()
    rows = [vals[i * n:(i + 1) * n] for i in range(m + 1)]
    return Workload.from_rows(rows, numeric=INT)


def _format_value(x) -> str:
    return str(x) if isinstance(x, int) else repr(float(x))


def dumps_workload(w: Workload) -> str:
    buf = io.StringIO()
    buf.write(f"# tandem-workload M={w.num_servers} N={w.num_customers}\n")
    writer = csv.writer(buf, lineterminator="\n")
    for r in w.tau:
        writer.writerow([_format_value(x) for x in r])
    return buf.getvalue()


def loads_workload(text: str) -> Workload:
    header = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            match = HEADER_RE.match(stripped)
            if match is None or rows or header is not None:
                raise WorkloadError(f"line {lineno}: unexpected comment {stripped!r}")
            header = int(match.group(1)), int(match.group(2))
            continue
        cells = next(csv.reader([stripped]))
        try:
            rows.append([_number(c.strip()) for c in cells])
        except ValueError:
            raise WorkloadError(f"line {lineno}: non-numeric value in {stripped!r}") from None
    if len(rows) < 2:
        raise WorkloadError(f"workload needs at least 2 rows, got {len(rows)}")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise WorkloadError(f"ragged matrix: row {i} has {len(r)} values, row 0 has {width}", (i, min(len(r), width)))
    if header is not None and header != (len(rows) - 1, width):
        raise WorkloadError(f"header says M={header[0]} N={header[1]} but data is M={len(rows) - 1} N={width}")
    return Workload.from_rows(rows)


def read_workload(path) -> Workload:
    return loads_workload(Path(path).read_text())


def write_workload(w: Workload, path) -> None:
    Path(path).write_text(dumps_workload(w))
