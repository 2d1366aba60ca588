"""Frequency offset estimation for M-QAM coherent receivers.

The proposed estimator is the two-block all-phase FFT (apFFT) method in
:func:`apfoe.foe.apfft_foe`; FFT, FFT+CZT, FFT+ZoomFFT and differential
baselines live alongside it for comparison.
"""

from .qam import Constellation, SymbolSequence, build_constellation, fourth_power, generate_symbols
from .channel import ChannelParams, add_awgn, apply_carrier, apply_phase_noise, osnr_to_snr
from .foe import (
    DegenerateInputError,
    EstimatorParams,
    FoeResult,
    InsufficientSamplesError,
    apfft_foe,
    czt_foe,
    diff_foe,
    fft_foe,
    zoomfft_foe,
)
from .complexity import ComplexityReport, build_report

__all__ = [
    "ChannelParams",
    "ComplexityReport",
    "Constellation",
    "DegenerateInputError",
    "EstimatorParams",
    "FoeResult",
    "InsufficientSamplesError",
    "SymbolSequence",
    "add_awgn",
    "apfft_foe",
    "apply_carrier",
    "apply_phase_noise",
    "build_constellation",
    "build_report",
    "czt_foe",
    "diff_foe",
    "fft_foe",
    "fourth_power",
    "generate_symbols",
    "osnr_to_snr",
    "zoomfft_foe",
]
