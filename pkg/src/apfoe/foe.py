"""Frequency offset estimators for M-QAM.

All estimators strip the modulation with the fourth power, so the
unambiguous range is ``+-symbol_rate/8``. Frequencies reported in
``FoeResult.f_coarse`` refer to the fourth-power tone (``4*f_d``);
``f_hat`` is the offset itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .qam import SymbolSequence

ALGORITHMS = ("fft", "apfft", "czt", "zoomfft", "diff")


class InsufficientSamplesError(ValueError):
    pass


class DegenerateInputError(ValueError):
    pass


@dataclass(frozen=True)
class EstimatorParams:
    """Block sizes for the estimators.

    ``t_s`` overrides the symbol duration carried by the input sequence.
    """

    n1: int = 512
    n2: int = 256
    t_s: float | None = None

    def __post_init__(self):
        if not spectral.is_power_of_two(self.n1) or self.n1 < 2:
            raise ValueError(f"n1 must be a power of two >= 2, got {self.n1}")
        if not spectral.is_power_of_two(self.n2):
            raise ValueError(f"n2 must be a power of two, got {self.n2}")
        if self.t_s is not None and not self.t_s > 0:
            raise ValueError("t_s must be positive")

    @classmethod
    def for_format(cls, format: int, t_s: float | None = None) -> "EstimatorParams":
        """Sizes used for 16-QAM (512/256) and 64-QAM (1024/512)."""
        n1 = {16: 512, 64: 1024}[format]
        return cls(n1, n1 // 2, t_s)


@dataclass(frozen=True)
class FoeResult:
    """Estimate plus its coarse/fine decomposition.

    ``k_hat`` is the signed coarse peak bin and ``delta`` the fine correction
    in coarse bins. For ``apfft`` the identity ``f_hat*4*N*T_s = k_hat + delta``
    holds exactly; for the two-stage methods ``delta`` is the refinement
    measured from the coarse peak (before aliasing back into range).
    """

    f_hat: float
    f_coarse: float
    k_hat: int
    delta: float
    algorithm: str

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "f_hat": self.f_hat,
            "f_coarse": self.f_coarse,
            "k_hat": self.k_hat,
            "delta": self.delta,
        }


def _symbol_duration(rx: SymbolSequence, params: EstimatorParams | None) -> float:
    if params is not None and params.t_s is not None:
        return params.t_s
    return rx.t_s


def _require(rx: SymbolSequence, needed: int, algorithm: str) -> None:
    if len(rx) < needed:
        raise InsufficientSamplesError(
            f"{algorithm} needs at least {needed} samples, got {len(rx)}"
        )


def _coarse(rx: SymbolSequence, n1: int) -> tuple[np.ndarray, np.ndarray, int]:
    x4 = rx.samples[:n1] ** 4
    spectrum = spectral.dft(x4, n1)
    if not np.any(spectrum):
        raise DegenerateInputError("fourth-power spectrum is identically zero")
    return x4, spectrum, spectral.peak_bin(spectrum)


def fft_foe(rx: SymbolSequence, params: EstimatorParams = EstimatorParams()) -> FoeResult:
    """Single-stage estimate: peak of the ``n1``-point FFT of the fourth power."""
    _require(rx, params.n1, "fft")
    t_s = _symbol_duration(rx, params)
    _, _, k = _coarse(rx, params.n1)
    f_coarse = k / (params.n1 * t_s)
    return FoeResult(f_coarse / 4, f_coarse, k, 0.0, "fft")


def apfft_foe(
    rx: SymbolSequence,
    params: EstimatorParams = EstimatorParams(),
    resolve_ambiguity: bool = True,
    combine_blocks: bool = True,
) -> FoeResult:
    """Two-block all-phase FFT estimate.

    Block 1 covers fourth-power samples ``[0, 2N-2]`` (centre ``N-1``) and
    block 2 the same span delayed by ``N``. Both are read at one common peak
    bin; their phase difference, wrapped to (-pi, pi], gives the fractional
    bin ``delta`` and ``f_hat = (k_hat + delta) / (4*N*T_s)``.

    The peak is taken from ``|Y1| + |Y2|`` when ``combine_blocks`` is set
    (no extra multiplications). The squared all-phase kernel has deep
    half-bin scalloping, and a single block's peak is then easily captured
    by a data-noise spur; the second block's magnitudes halve that risk.
    With ``combine_blocks=False`` block 1 alone picks the bin.

    The phase difference fixes the tone only modulo one bin. When the tone
    sits near a half bin, noise can move the magnitude peak to the far
    neighbour and ``peak + delta`` then lands a whole bin off. With
    ``resolve_ambiguity`` the integer part is picked between the two
    candidates ``peak + delta`` and ``peak + delta - sign(delta)`` by which
    lies nearer a rough sub-bin position read from the balance of the two
    neighbouring bins (magnitudes summed over both blocks). Noise-free,
    both variants agree.
    """
    n = params.n1
    _require(rx, 3 * n - 1, "apfft")
    t_s = _symbol_duration(rx, params)
    x4 = rx.samples[: 3 * n - 1] ** 4
    window = spectral.build_allphase_window(n)
    first = spectral.apfft(x4[: 2 * n - 1], window, t_s).bins
    second = spectral.apfft(x4[n:], window, t_s).bins
    if not np.any(first):
        raise DegenerateInputError("apFFT spectrum is identically zero")
    combined = np.abs(first) + np.abs(second)
    peak = spectral.peak_bin(combined if combine_blocks else first)
    dphi = np.angle(second[peak % n]) - np.angle(first[peak % n])
    # wrap into (-pi, pi]
    dphi = math.pi - (math.pi - dphi) % (2 * math.pi)
    delta = dphi / (2 * math.pi)
    k = peak
    if resolve_ambiguity and delta != 0:
        rough = _neighbour_balance(combined, peak)
        alt = delta - math.copysign(1.0, delta)
        if abs(alt - rough) < abs(delta - rough):
            k = peak - int(math.copysign(1.0, delta))
    # next to Nyquist, k + delta can step outside [-N/2, N/2); it is the same tone
    if k + delta < -n / 2:
        k += n
    elif k + delta >= n / 2:
        k -= n
    f_coarse = peak / (n * t_s)
    f_hat = (k + delta) / (4 * n * t_s)
    return FoeResult(f_hat, f_coarse, k, delta, "apfft")


def _neighbour_balance(mag: np.ndarray, peak: int) -> float:
    # Signed, shrunk-toward-zero guess of the tone position relative to the
    # peak. sqrt undoes the squared kernel; only the sign and rough size matter.
    n = mag.size
    left, mid, right = np.sqrt(mag[[(peak - 1) % n, peak % n, (peak + 1) % n]])
    return float((right - left) / (left + mid + right))


def czt_foe(rx: SymbolSequence, params: EstimatorParams = EstimatorParams()) -> FoeResult:
    """FFT coarse peak, then an ``n2``-point CZT spanning two coarse bins around it."""
    n1, n2 = params.n1, params.n2
    _require(rx, n1, "czt")
    t_s = _symbol_duration(rx, params)
    x4, _, k = _coarse(rx, n1)
    bin_hz = 1.0 / (n1 * t_s)
    f_coarse = k * bin_hz
    f_step = 2 * bin_hz / n2
    f_start = f_coarse - (n2 // 2) * f_step
    fine = spectral.czt(x4, f_start, f_step, n2, t_s)
    m = int(np.argmax(np.abs(fine)))
    f4 = f_start + m * f_step
    return FoeResult(_wrap_tone(f4, t_s) / 4, f_coarse, k, (f4 - f_coarse) / bin_hz, "czt")


def zoomfft_foe(rx: SymbolSequence, params: EstimatorParams = EstimatorParams()) -> FoeResult:
    """FFT coarse peak, then :func:`spectral.zoom_refine` around it."""
    n1, n2 = params.n1, params.n2
    if n1 != 2 * n2:
        raise ValueError(f"zoomfft requires n1 = 2*n2, got n1={n1}, n2={n2}")
    _require(rx, n1, "zoomfft")
    t_s = _symbol_duration(rx, params)
    x4, _, k = _coarse(rx, n1)
    bin_hz = 1.0 / (n1 * t_s)
    f_coarse = k * bin_hz
    f4 = spectral.zoom_refine(x4, f_coarse, n2, t_s)
    return FoeResult(_wrap_tone(f4, t_s) / 4, f_coarse, k, (f4 - f_coarse) / bin_hz, "zoomfft")


def diff_foe(rx: SymbolSequence, params: EstimatorParams | None = None) -> FoeResult:
    """Differential baseline: ``arg(sum (rx[n+1] conj(rx[n]))**4) / (8*pi*T_s)``."""
    _require(rx, 2, "diff")
    t_s = _symbol_duration(rx, params)
    d = rx.samples[1:] * np.conj(rx.samples[:-1])
    acc = np.sum(d**4)
    if acc == 0:
        raise DegenerateInputError("differential statistic is zero")
    f4 = float(np.angle(acc)) / (2 * math.pi * t_s)
    return FoeResult(f4 / 4, f4, 0, 0.0, "diff")


def _wrap_tone(f4: float, t_s: float) -> float:
    # fourth-power tone frequencies alias modulo the symbol rate
    rate = 1.0 / t_s
    return (f4 + rate / 2) % rate - rate / 2


ESTIMATORS = {
    "fft": fft_foe,
    "apfft": apfft_foe,
    "czt": czt_foe,
    "zoomfft": zoomfft_foe,
    "diff": diff_foe,
}


def estimate(rx: SymbolSequence, algorithm: str, params: EstimatorParams = EstimatorParams()) -> FoeResult:
    try:
        fn = ESTIMATORS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}") from None
    return fn(rx, params)
