"""Coverage study for the triangular model.

A cell is one ``(method, n, theta0)`` combination. Each replicate draws a
sample through the data-generating algorithm, builds the method's
distribution on the unit grid, takes the equal-tailed interval and records
whether it contains ``theta0`` and how long it is. Replicates use the
per-replicate streams of :mod:`gfibvm.streams`, so every record is a pure
function of the configuration.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels, reference, streams, triangular
from .bvm import bvm_tv, gaussian_limit
from .errors import ConfigError, UnknownCell
from .gfd_core import unit_grid

METHODS = reference.METHODS
METHOD_CODES = {
    "GF": kernels.GF,
    "ModGF": kernels.MODGF,
    "FlatBayes": kernels.FLAT,
    "JeffreysBayes": kernels.JEFFREYS,
}
# stream tag for the TV-decay study, distinct from the method indices
BVM_TAG = len(METHODS)
CHUNK = 2500
FIELDS = ("method", "n", "theta0", "coverage", "mean_length", "mc_se", "replicates")


@dataclass(frozen=True)
class ExperimentConfig:
    methods: tuple = METHODS
    n_values: tuple = reference.N_VALUES
    theta_values: tuple = reference.THETA_VALUES
    replicates: int = 10_000
    level: float = 0.95
    grid_size: int = 4096
    seed: int = 20240101
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "theta_values", tuple(float(t) for t in self.theta_values))
        if not self.methods:
            raise ConfigError("methods must be non-empty")
        bad = [m for m in self.methods if m not in METHOD_CODES]
        if bad:
            raise ConfigError(f"unknown methods {bad}; choose from {list(METHODS)}")
        if not self.n_values or min(self.n_values) < 1:
            raise ConfigError("n_values must be a non-empty list of integers >= 1")
        if not self.theta_values or not all(0.0 < t < 1.0 for t in self.theta_values):
            raise ConfigError("theta_values must be a non-empty list of reals in (0, 1)")
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise ConfigError(f"replicates must be an integer >= 1, got {self.replicates}")
        if not 0.0 < self.level < 1.0:
            raise ConfigError(f"level must lie in (0, 1), got {self.level}")
        if int(self.grid_size) != self.grid_size or self.grid_size < 2:
            raise ConfigError(f"grid_size must be an integer >= 2, got {self.grid_size}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= streams.SEED_MASK:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ConfigError(f"workers must be an integer >= 1, got {self.workers}")

    def cells(self):
        return [(m, n, t) for m in self.methods for n in self.n_values for t in self.theta_values]


@dataclass(frozen=True)
class CoverageRecord:
    method: str
    n: int
    theta0: float
    coverage: float
    mean_length: float
    mc_se: float
    replicates: int

    @classmethod
    def from_outcomes(cls, method, n, theta0, covered, lengths) -> "CoverageRecord":
        r = len(covered)
        c = int(np.count_nonzero(covered)) / r
        # fsum is exact, so the mean does not depend on summation order
        mean_len = math.fsum(lengths) / r
        return cls(method, int(n), float(theta0), c, mean_len, mc_se(c, r), r)


def mc_se(coverage: float, replicates: int) -> float:
    return math.sqrt(coverage * (1.0 - coverage) / replicates)


def cell_samples(seed: int, method: str, n: int, theta0: float, start: int, stop: int) -> np.ndarray:
    """Sorted samples for replicates ``start .. stop-1`` of a cell, one per row."""
    key = streams.cell_key(seed, METHODS.index(method), n, theta0)
    u = streams.uniforms(key, start, stop, n)
    u[u == 0.0] = 2.0 ** -54
    y = triangular.dga(u, theta0)
    y = np.atleast_2d(y)
    y.sort(axis=1)
    return y


def cell_outcomes(method, n, theta0, level, grid_size, seed, start, stop):
    """``(covered, lengths)`` for a block of replicates."""
    y = cell_samples(seed, method, n, theta0, start, stop)
    iv = kernels.tri_intervals(y, grid_size, METHOD_CODES[method], level)
    covered = (iv[:, 0] <= theta0) & (theta0 <= iv[:, 1])
    return covered, iv[:, 1] - iv[:, 0]


def _blocks(replicates: int):
    return [(s, min(s + CHUNK, replicates)) for s in range(0, replicates, CHUNK)]


def _run_task(task):
    cell, start, stop, level, grid_size, seed = task
    method, n, theta0 = cell
    return (cell, start), cell_outcomes(method, n, theta0, level, grid_size, seed, start, stop)


def _collect(cells, replicates, level, grid_size, seed, workers):
    tasks = [(cell, s, e, level, grid_size, seed) for cell in cells for s, e in _blocks(replicates)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = dict(pool.map(_run_task, tasks, chunksize=1))
    else:
        done = dict(map(_run_task, tasks))
    records = []
    for cell in cells:
        parts = [done[(cell, s)] for s, _ in _blocks(replicates)]
        covered = np.concatenate([p[0] for p in parts])
        lengths = np.concatenate([p[1] for p in parts])
        records.append(CoverageRecord.from_outcomes(*cell, covered, lengths))
    return records


def run_cell(method: str, n: int, theta0: float, replicates: int, level: float = 0.95,
             seed: int = 20240101, grid_size: int = 4096, workers: int = 1) -> CoverageRecord:
    cfg = ExperimentConfig((method,), (n,), (theta0,), replicates, level, grid_size, seed, workers)
    return _collect(cfg.cells(), cfg.replicates, cfg.level, cfg.grid_size, cfg.seed, cfg.workers)[0]


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> list[CoverageRecord]:
    """One record per cell, in config order (methods, then n, then theta)."""
    w = config.workers if workers is None else workers
    return _collect(config.cells(), config.replicates, config.level, config.grid_size, config.seed, w)


# ---------------------------------------------------------------- reference


@dataclass(frozen=True)
class CellComparison:
    method: str
    n: int
    theta0: float
    coverage: float
    ref_coverage: float
    mean_length: float
    ref_length: float
    coverage_ok: bool
    length_ok: bool

    @property
    def passed(self) -> bool:
        return self.coverage_ok and self.length_ok


@dataclass(frozen=True)
class ComparisonReport:
    cells: tuple = field(default_factory=tuple)
    required_fraction: float = 0.95

    @property
    def n_passed(self) -> int:
        return sum(c.passed for c in self.cells)

    @property
    def pass_fraction(self) -> float:
        return self.n_passed / len(self.cells) if self.cells else 0.0

    @property
    def passed(self) -> bool:
        return bool(self.cells) and self.pass_fraction >= self.required_fraction

    def failures(self):
        return [c for c in self.cells if not c.passed]

    def summary(self) -> str:
        lines = [f"{self.n_passed}/{len(self.cells)} cells within tolerance "
                 f"({100 * self.pass_fraction:.1f}%, need {100 * self.required_fraction:.0f}%)"]
        for c in self.failures():
            lines.append(f"  FAIL {c.method} n={c.n} theta0={c.theta0:g}: coverage {c.coverage:.4f} "
                         f"vs {c.ref_coverage:.3f}, length {c.mean_length:.4f} vs {c.ref_length:.3f}")
        return "\n".join(lines)


def compare_to_reference(records: Iterable[CoverageRecord], tolerance_coverage: float = 0.015,
                         tolerance_length: float = 0.02) -> ComparisonReport:
    """Check each record against the published value for its cell.

    Coverage passes within ``tolerance_coverage + 3 mc_se``; length within
    ``tolerance_length`` absolute.
    """
    out = []
    for r in records:
        ref = reference.lookup(r.method, r.n, r.theta0)
        if ref is None:
            raise UnknownCell(f"no reference value for {r.method}, n={r.n}, theta0={r.theta0}")
        ref_cov, ref_len = ref
        cov_ok = abs(r.coverage - ref_cov) <= tolerance_coverage + 3.0 * r.mc_se
        len_ok = abs(r.mean_length - ref_len) <= tolerance_length
        out.append(CellComparison(r.method, r.n, r.theta0, r.coverage, ref_cov,
                                  r.mean_length, ref_len, cov_ok, len_ok))
    return ComparisonReport(tuple(out))


def reference_records(cells: Sequence[tuple] | None = None) -> list[CoverageRecord]:
    """Published cells as records with zero Monte Carlo error."""
    if cells is None:
        cells = [(m, n, t) for m in METHODS for n in reference.N_VALUES for t in reference.THETA_VALUES]
    out = []
    for m, n, t in cells:
        c, length = reference.lookup(m, n, t)
        out.append(CoverageRecord(m, n, t, c, length, 0.0, 1))
    return out


# ---------------------------------------------------------------- TV decay


@dataclass(frozen=True)
class DecayRecord:
    theta0: float
    n: int
    mean_tv: float
    replicates: int


def bvm_tv_replicates(theta0: float, n: int, replicates: int, seed: int,
                      grid_size: int = 4096) -> np.ndarray:
    """L1 distance between the fiducial density and its Gaussian limit, per replicate."""
    grid = unit_grid(grid_size)
    key = streams.cell_key(seed, BVM_TAG, n, theta0)
    info = np.array([[triangular.fisher_info(theta0)]])
    out = np.empty(replicates)
    for r in range(replicates):
        y = triangular.simulate(n, theta0, streams.replicate_generator(key, r))
        lim = gaussian_limit(triangular.score(y, theta0)[:, None], info, theta0)
        out[r] = bvm_tv(triangular.gfd(y, grid), lim)
    return out


def bvm_decay(theta_values: Sequence[float], n_values: Sequence[int], replicates: int = 50,
              seed: int = 20240101, grid_size: int = 4096) -> list[DecayRecord]:
    out = []
    for t in theta_values:
        for n in n_values:
            tv = bvm_tv_replicates(t, n, replicates, seed, grid_size)
            out.append(DecayRecord(float(t), int(n), math.fsum(tv) / replicates, replicates))
    return out


# ---------------------------------------------------------------- persistence


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def format_csv(records: Iterable[CoverageRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in records:
        writer.writerow([_fmt(getattr(r, f)) for f in FIELDS])
    return buf.getvalue()


def format_json(records: Iterable[CoverageRecord]) -> str:
    rows = [asdict(r) for r in records]
    return json.dumps(rows, indent=2) + "\n"


def _record_from_row(row: dict) -> CoverageRecord:
    try:
        return CoverageRecord(str(row["method"]), int(row["n"]), float(row["theta0"]),
                              float(row["coverage"]), float(row["mean_length"]),
                              float(row["mc_se"]), int(row["replicates"]))
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"malformed record {row!r}: {e}") from None


def parse_csv(text: str) -> list[CoverageRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != FIELDS:
        raise ValueError(f"expected columns {','.join(FIELDS)}, got {reader.fieldnames}")
    return [_record_from_row(row) for row in reader]


def parse_json(text: str) -> list[CoverageRecord]:
    rows = json.loads(text)
    if not isinstance(rows, list):
        raise ValueError("expected a JSON array of records")
    return [_record_from_row(row) for row in rows]


def _format_of(path, fmt):
    if fmt is None:
        fmt = "json" if str(path).lower().endswith(".json") else "csv"
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}; use csv or json")
    return fmt


def emit(records: Iterable[CoverageRecord], fmt: str | None, path) -> None:
    """Write records as CSV or JSON (UTF-8, LF line endings)."""
    fmt = _format_of(path, fmt)
    text = format_csv(records) if fmt == "csv" else format_json(records)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(e.errno, f"cannot write results to {os.fspath(path)}: {e.strerror}") from e


def load(path, fmt: str | None = None) -> list[CoverageRecord]:
    fmt = _format_of(path, fmt)
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as e:
        raise OSError(e.errno, f"cannot read results from {os.fspath(path)}: {e.strerror}") from e
    return parse_csv(text) if fmt == "csv" else parse_json(text)

