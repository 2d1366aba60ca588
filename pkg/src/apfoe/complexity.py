"""Real-multiplication (MUL) budgets for the FFT+CZT, FFT+ZoomFFT and apFFT estimators.

Every total includes the shared first stage (fourth power plus ``N1``-point
FFT). The CZT expression has fractional coefficients and is rounded to the
nearest integer, which reproduces both standard rows exactly:

>>> build_report(512, 256).as_row()
(52353, 20480, 14334)
>>> build_report(1024, 512).as_row()
(113563, 44032, 30718)
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import spectral

STANDARD_SETTINGS = ((512, 256), (1024, 512))


def _log2(n: int) -> int:
    if not spectral.is_power_of_two(n):
        raise ValueError(f"size must be a power of two, got {n}")
    return n.bit_length() - 1


def mul_first_stage(n1: int) -> int:
    """Fourth power (6 MUL/sample) plus radix-2 FFT (``2*N*log2 N``)."""
    return 6 * n1 + 2 * n1 * _log2(n1)


def czt_length(n1: int, n2: int) -> int:
    return spectral.bluestein_length(n1, n2)


def mul_czt_stage(n1: int, n2: int) -> Fraction:
    """Unrounded second-stage CZT cost."""
    _log2(n1)
    log_n2 = _log2(n2)
    length = czt_length(n1, n2)
    log_l = _log2(length)
    coeff = Fraction(106, 9) + Fraction(4, 3) * log_l + 2 * log_n2
    return coeff * length + 14 + (-1) ** log_l - 8 * n2


def mul_czt_total(n1: int, n2: int) -> int:
    return mul_first_stage(n1) + int(math.floor(mul_czt_stage(n1, n2) + Fraction(1, 2)))


def mul_zoomfft_total(n1: int, n2: int) -> int:
    return mul_first_stage(n1) + 2 * n2 * _log2(n2) + 8 * n1


def mul_apfft_window(n1: int) -> int:
    """Real window times complex sample over ``2*N1 - 1`` samples."""
    return 2 * (2 * n1 - 1)


def mul_apfft_total(n1: int) -> int:
    return mul_first_stage(n1) + mul_apfft_window(n1)


@dataclass(frozen=True)
class ComplexityReport:
    n1: int
    n2: int
    mul_czt: int
    mul_zoomfft: int
    mul_apfft: int
    reduction_vs_czt: float
    reduction_vs_zoomfft: float

    def as_row(self) -> tuple[int, int, int]:
        return self.mul_czt, self.mul_zoomfft, self.mul_apfft

    def to_dict(self) -> dict:
        return asdict(self)


def build_report(n1: int, n2: int) -> ComplexityReport:
    czt = mul_czt_total(n1, n2)
    zoom = mul_zoomfft_total(n1, n2)
    ap = mul_apfft_total(n1)
    return ComplexityReport(n1, n2, czt, zoom, ap, 1 - ap / czt, 1 - ap / zoom)


def count_apfft_muls(n: int, seed: int = 0) -> dict[str, int]:
    """Count real multiplications actually executed by one instrumented apFFT.

    Returns the windowing and FFT counts separately. The window count equals
    :func:`mul_apfft_window`; the FFT count is below the ``2*N*log2 N`` model
    because unit twiddles are skipped (see :func:`spectral.radix2_executed_muls`).
    """
    rng = np.random.default_rng(seed)
    x = rng.normal(size=2 * n - 1) + 1j * rng.normal(size=2 * n - 1)
    window = spectral.build_allphase_window(n)
    counter = spectral.MulCounter()
    spectral.apfft(x, window, counter=counter)
    return {**counter.by_stage, "total": counter.muls}
