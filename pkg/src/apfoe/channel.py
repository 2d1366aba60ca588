"""Back-to-back channel impairments: carrier offset, laser phase noise, AWGN.

The harness always applies them in the order carrier -> phase noise -> AWGN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qam import SymbolSequence

# 0.1 nm at 1550 nm
DEFAULT_REFERENCE_BANDWIDTH = 12.5e9


@dataclass(frozen=True)
class ChannelParams:
    f_d: float
    symbol_rate: float
    combined_linewidth: float = 0.0
    osnr_db: float | None = None
    reference_bandwidth: float = DEFAULT_REFERENCE_BANDWIDTH

    def __post_init__(self):
        if not self.symbol_rate > 0:
            raise ValueError(f"symbol_rate must be positive, got {self.symbol_rate}")
        if self.combined_linewidth < 0:
            raise ValueError(f"linewidth must be >= 0, got {self.combined_linewidth}")
        if not self.reference_bandwidth > 0:
            raise ValueError("reference_bandwidth must be positive")
        if not abs(self.f_d) < self.symbol_rate / 2:
            raise ValueError(f"|f_d| must be below symbol_rate/2, got {self.f_d}")

    @property
    def t_s(self) -> float:
        return 1.0 / self.symbol_rate

    @property
    def snr_linear(self) -> float:
        """Per-symbol SNR, or ``inf`` when ``osnr_db`` is None (no AWGN)."""
        if self.osnr_db is None:
            return math.inf
        return osnr_to_snr(self.osnr_db, self.symbol_rate, self.reference_bandwidth)


def apply_carrier(seq: SymbolSequence, f_d: float, initial_phase: float = 0.0) -> SymbolSequence:
    """Rotate sample ``n`` by ``2*pi*f_d*n*T_s + initial_phase``."""
    n = np.arange(len(seq))
    phase = 2 * np.pi * f_d * seq.t_s * n + initial_phase
    return seq.with_samples(seq.samples * np.exp(1j * phase))


def apply_phase_noise(
    seq: SymbolSequence,
    combined_linewidth: float,
    seed: int | np.random.Generator | None = None,
) -> SymbolSequence:
    """Multiply by a Wiener phase process with increment variance ``2*pi*linewidth*T_s``.

    The walk starts at zero on the first sample.
    """
    if combined_linewidth < 0:
        raise ValueError(f"linewidth must be >= 0, got {combined_linewidth}")
    if combined_linewidth == 0:
        return seq
    rng = np.random.default_rng(seed)
    sigma = math.sqrt(2 * math.pi * combined_linewidth * seq.t_s)
    steps = rng.normal(0.0, sigma, size=len(seq) - 1)
    phi = np.concatenate(([0.0], np.cumsum(steps)))
    return seq.with_samples(seq.samples * np.exp(1j * phi))


def osnr_to_snr(
    osnr_db: float,
    symbol_rate: float,
    reference_bandwidth: float = DEFAULT_REFERENCE_BANDWIDTH,
) -> float:
    """Convert OSNR over ``reference_bandwidth`` to linear per-symbol SNR (single polarization)."""
    if not symbol_rate > 0:
        raise ValueError(f"symbol_rate must be positive, got {symbol_rate}")
    return 10 ** (osnr_db / 10) * reference_bandwidth / symbol_rate


def add_awgn(
    seq: SymbolSequence,
    snr_linear: float,
    seed: int | np.random.Generator | None = None,
) -> SymbolSequence:
    """Add circular Gaussian noise of variance ``1/snr_linear`` (unit signal power assumed).

    ``snr_linear = inf`` returns the input unchanged.
    """
    if not snr_linear > 0:
        raise ValueError(f"snr_linear must be positive, got {snr_linear}")
    if math.isinf(snr_linear):
        return seq
    rng = np.random.default_rng(seed)
    sigma = math.sqrt(0.5 / snr_linear)
    noise = rng.normal(0.0, sigma, size=(len(seq), 2))
    return seq.with_samples(seq.samples + noise[:, 0] + 1j * noise[:, 1])
