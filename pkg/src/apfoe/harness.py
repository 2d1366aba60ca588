"""Monte-Carlo MSE sweeps over frequency offset and OSNR.

Each trial draws its own RNG stream from
``SeedSequence([master_seed, offset_index, osnr_index, trial_index])``, so
results do not depend on how work is scheduled across threads.

Errors are normalized by the symbol duration and, because the fourth power
makes the offset identifiable only modulo ``symbol_rate/4``, wrapped into
``[-1/8, 1/8)`` before squaring. This only matters at the exact edges of the
``+-symbol_rate/8`` range, where ``+Rs/8`` and ``-Rs/8`` are the same tone.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import channel, foe, qam


@dataclass
class SweepConfig:
    format: int = 16
    symbol_rate: float = 28e9
    linewidth_per_laser: float = 100e3
    algorithms: list[str] = field(default_factory=lambda: ["fft", "apfft", "czt", "zoomfft"])
    n1: int = 512
    n2: int = 256
    # explicit list of Hz, or {"min": ..., "max": ..., "step": ...}
    offsets: list[float] | dict = field(
        default_factory=lambda: {"min": -3.5e9, "max": 3.5e9, "step": 200e6}
    )
    # None means no AWGN
    osnr_values: list[float | None] = field(default_factory=lambda: [30.0])
    trials_per_point: int = 100
    master_seed: int = 0
    reference_bandwidth: float = channel.DEFAULT_REFERENCE_BANDWIDTH
    # send a constant symbol so the fourth power is a clean tone
    unmodulated: bool = False

    def __post_init__(self):
        if self.format not in qam.SUPPORTED_FORMATS:
            raise ValueError(f"unsupported QAM format {self.format}")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")
        for name in self.algorithms:
            if name not in foe.ESTIMATORS:
                raise ValueError(f"unknown algorithm {name!r}")
        limit = self.symbol_rate / 8 * (1 + 1e-9)
        bad = [f for f in self.offset_grid() if abs(f) > limit]
        if bad:
            raise ValueError(f"offsets outside +-symbol_rate/8: {bad}")
        # validates sizes
        self.estimator_params()

    @property
    def t_s(self) -> float:
        return 1.0 / self.symbol_rate

    @property
    def combined_linewidth(self) -> float:
        return 2 * self.linewidth_per_laser

    @property
    def n_symbols(self) -> int:
        return 3 * self.n1 - 1

    def offset_grid(self) -> list[float]:
        if isinstance(self.offsets, dict):
            lo, hi, step = self.offsets["min"], self.offsets["max"], self.offsets["step"]
            count = int(round((hi - lo) / step)) + 1
            return [lo + i * step for i in range(count)]
        return [float(f) for f in self.offsets]

    def estimator_params(self) -> foe.EstimatorParams:
        return foe.EstimatorParams(self.n1, self.n2, self.t_s)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> "SweepConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TrialRecord:
    algorithm: str
    f_d_true: float
    osnr_db: float | None
    f_hat: float
    normalized_sq_error: float
    failed: bool = False


def normalized_error(f_hat: float, f_d: float, t_s: float) -> float:
    """``(f_hat - f_d) * t_s`` wrapped modulo 1/4 into [-1/8, 1/8)."""
    e = (f_hat - f_d) * t_s
    return (e + 0.125) % 0.25 - 0.125


def trial_seed(master_seed: int, offset_index: int, osnr_index: int, trial_index: int):
    return np.random.SeedSequence([master_seed, offset_index, osnr_index, trial_index])


def simulate_received(
    config: SweepConfig,
    f_d: float,
    osnr_db: float | None,
    rng: np.random.Generator,
) -> qam.SymbolSequence:
    """Random symbols (or a constant one) through carrier offset, Wiener phase noise and AWGN."""
    if config.unmodulated:
        tx = qam.SymbolSequence(np.ones(config.n_symbols, dtype=np.complex128), config.t_s)
    else:
        const = qam.build_constellation(config.format)
        tx = qam.generate_symbols(const, config.n_symbols, rng, t_s=config.t_s)
    rx = channel.apply_carrier(tx, f_d, rng.uniform(-math.pi, math.pi))
    rx = channel.apply_phase_noise(rx, config.combined_linewidth, rng)
    if osnr_db is not None:
        snr = channel.osnr_to_snr(osnr_db, config.symbol_rate, config.reference_bandwidth)
        rx = channel.add_awgn(rx, snr, rng)
    return rx


def run_trial(
    config: SweepConfig,
    f_d: float,
    osnr_db: float | None,
    trial_index: int,
    offset_index: int = 0,
    osnr_index: int = 0,
) -> list[TrialRecord]:
    """Run every configured estimator on one shared received sequence."""
    rng = np.random.default_rng(trial_seed(config.master_seed, offset_index, osnr_index, trial_index))
    rx = simulate_received(config, f_d, osnr_db, rng)
    params = config.estimator_params()
    records = []
    for name in config.algorithms:
        try:
            f_hat = foe.estimate(rx, name, params).f_hat
        except foe.DegenerateInputError:
            records.append(TrialRecord(name, f_d, osnr_db, math.nan, math.nan, failed=True))
            continue
        err = normalized_error(f_hat, f_d, config.t_s)
        records.append(TrialRecord(name, f_d, osnr_db, f_hat, err * err))
    return records


@dataclass(frozen=True)
class PointSummary:
    algorithm: str
    f_d_hz: float | None
    osnr_db: float | None
    trials: int
    failures: int
    mse_normalized: float


def _run_point(config: SweepConfig, offset_index: int, osnr_index: int) -> dict[str, tuple[float, int, int]]:
    # per algorithm: (sum of squared errors, successful trials, failures)
    f_d = config.offset_grid()[offset_index]
    osnr = config.osnr_values[osnr_index]
    acc = {name: [0.0, 0, 0] for name in config.algorithms}
    for t in range(config.trials_per_point):
        for rec in run_trial(config, f_d, osnr, t, offset_index, osnr_index):
            slot = acc[rec.algorithm]
            if rec.failed:
                slot[2] += 1
            else:
                slot[0] += rec.normalized_sq_error
                slot[1] += 1
    return {k: tuple(v) for k, v in acc.items()}


def _run_grid(config: SweepConfig, points: list[tuple[int, int]], threads: int):
    if threads <= 1:
        return [_run_point(config, i, j) for i, j in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: _run_point(config, *p), points))


def _mse(total: float, ok: int) -> float:
    return total / ok if ok else math.nan


def sweep_offsets(config: SweepConfig, threads: int = 1) -> list[PointSummary]:
    """Mean normalized squared error per (offset, algorithm) at a single OSNR."""
    if len(config.osnr_values) != 1:
        raise ValueError("an offset sweep takes exactly one OSNR value")
    grid = config.offset_grid()
    results = _run_grid(config, [(i, 0) for i in range(len(grid))], threads)
    osnr = config.osnr_values[0]
    rows = []
    for f_d, point in zip(grid, results):
        for name in config.algorithms:
            total, ok, failed = point[name]
            rows.append(PointSummary(name, f_d, osnr, ok + failed, failed, _mse(total, ok)))
    return rows


def sweep_osnr(config: SweepConfig, threads: int = 1) -> list[PointSummary]:
    """Mean normalized squared error per (OSNR, algorithm), pooled over the offset grid."""
    n_off = len(config.offset_grid())
    points = [(i, j) for j in range(len(config.osnr_values)) for i in range(n_off)]
    results = _run_grid(config, points, threads)
    rows = []
    for j, osnr in enumerate(config.osnr_values):
        block = results[j * n_off : (j + 1) * n_off]
        for name in config.algorithms:
            total = sum(p[name][0] for p in block)
            ok = sum(p[name][1] for p in block)
            failed = sum(p[name][2] for p in block)
            rows.append(PointSummary(name, None, osnr, ok + failed, failed, _mse(total, ok)))
    return rows


OFFSET_COLUMNS = ["algorithm", "f_d_hz", "osnr_db", "trials", "failures", "mse_normalized"]
OSNR_COLUMNS = ["algorithm", "osnr_db", "trials", "failures", "mse_normalized"]


def _fmt(value) -> str:
    if value is None:
        return "inf"
    return f"{value:.17e}"


def to_csv(rows: list[PointSummary], columns: list[str] = OFFSET_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        out = []
        for col in columns:
            value = getattr(row, col)
            out.append(value if isinstance(value, (str, int)) else _fmt(value))
        writer.writerow(out)
    return buf.getvalue()


def mse_table(rows: list[PointSummary]) -> dict[str, list[float]]:
    """Group ``mse_normalized`` by algorithm in row order."""
    table: dict[str, list[float]] = {}
    for row in rows:
        table.setdefault(row.algorithm, []).append(row.mse_normalized)
    return table


# ---------------------------------------------------------------------------
# IQ files
# ---------------------------------------------------------------------------


class IQFormatError(ValueError):
    pass


TEXT_SUFFIXES = (".csv", ".txt")


def read_iq(path: str | Path) -> np.ndarray:
    """Read complex samples.

    ``.csv``/``.txt`` files hold ``real,imag`` rows; anything else is raw
    little-endian float64 ``(real, imag)`` pairs with no header.
    """
    path = Path(path)
    raw = path.read_bytes()
    if not raw.strip():
        raise IQFormatError(f"{path}: file is empty")
    if path.suffix.lower() in TEXT_SUFFIXES:
        try:
            data = np.loadtxt(io.StringIO(raw.decode()), delimiter=",", ndmin=2, dtype=np.float64)
        except ValueError as exc:
            raise IQFormatError(f"{path}: cannot parse CSV IQ data ({exc})") from None
        if data.shape[1] != 2:
            raise IQFormatError(f"{path}: expected 2 columns (real,imag), got {data.shape[1]}")
        return data[:, 0] + 1j * data[:, 1]
    if len(raw) % 16:
        raise IQFormatError(f"{path}: size {len(raw)} bytes is not a whole number of float64 IQ pairs")
    return np.frombuffer(raw, dtype="<f8").view(np.complex128).copy()


def write_iq(path: str | Path, samples, fmt: str | None = None) -> None:
    path = Path(path)
    samples = np.asarray(samples, dtype=np.complex128)
    fmt = fmt or ("csv" if path.suffix.lower() in TEXT_SUFFIXES else "iq")
    if fmt == "csv":
        np.savetxt(path, np.column_stack([samples.real, samples.imag]), delimiter=",", fmt="%.17e")
    elif fmt == "iq":
        path.write_bytes(samples.astype("<c16").tobytes())
    else:
        raise ValueError(f"unknown IQ format {fmt!r}")


def estimate_from_file(path: str | Path, algorithm: str, params: foe.EstimatorParams) -> foe.FoeResult:
    """Run ``algorithm`` on the samples stored at ``path``; ``params.t_s`` must be set."""
    if params.t_s is None:
        raise ValueError("estimating from a file needs the symbol duration (params.t_s)")
    samples = read_iq(path)
    return foe.estimate(qam.SymbolSequence(samples, params.t_s), algorithm, params)
