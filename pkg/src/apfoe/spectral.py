"""Transform kernels shared by the estimators.

``dft``
    Power-of-two FFT (numpy backed), with an instrumented radix-2 path that
    counts real multiplications.
``apfft``
    All-phase FFT: window 2N-1 samples with the triangular (rectangular
    self-convolution) window, fold into N samples and take an N-point DFT.
    For a pure tone, every non-zero bin carries the phase of the central
    sample regardless of the fractional bin offset.
``czt``
    Chirp-Z transform on a line of frequencies via Bluestein's algorithm.
``zoom_refine``
    Mix down, 2-tap average, decimate by 2, N/2-point DFT and three-point
    peak interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


@dataclass
class MulCounter:
    """Tally of real multiplications executed by instrumented code paths."""

    muls: int = 0
    by_stage: dict = field(default_factory=dict)

    def add(self, count: int, stage: str) -> None:
        self.muls += int(count)
        self.by_stage[stage] = self.by_stage.get(stage, 0) + int(count)


# ---------------------------------------------------------------------------
# DFT
# ---------------------------------------------------------------------------


def _check_size(x: np.ndarray, size: int | None) -> int:
    size = x.size if size is None else size
    if not is_power_of_two(size):
        raise ValueError(f"DFT size must be a power of two, got {size}")
    if x.size != size:
        raise ValueError(f"input length {x.size} does not match DFT size {size}")
    return size


def dft(x, size: int | None = None, counter: MulCounter | None = None) -> np.ndarray:
    """Unnormalized forward DFT, ``X[k] = sum_n x[n] exp(-2j*pi*k*n/N)``.

    With a ``counter`` the transform runs through a pure-python radix-2
    decimation-in-time FFT that records every real multiplication it does.
    """
    x = np.asarray(x, dtype=np.complex128).ravel()
    _check_size(x, size)
    if counter is not None:
        return _radix2_counted(x, counter)
    return np.fft.fft(x)


def idft(x, size: int | None = None) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128).ravel()
    _check_size(x, size)
    return np.fft.ifft(x)


def _radix2_counted(x: np.ndarray, counter: MulCounter) -> np.ndarray:
    # Twiddle tables are precomputed (not counted). Butterflies with twiddle
    # W^0 = 1 skip the multiplication; every other twiddle product is a full
    # complex multiply costing 4 real multiplications.
    n = x.size
    bits = n.bit_length() - 1
    rev = [int(format(i, f"0{bits}b")[::-1], 2) if bits else 0 for i in range(n)]
    a = [complex(x[r]) for r in rev]
    span = 1
    while span < n:
        tw = [complex(np.exp(-1j * np.pi * k / span)) for k in range(span)]
        for start in range(0, n, 2 * span):
            for k in range(span):
                u = a[start + k]
                v = a[start + k + span]
                if k:
                    v = v * tw[k]
                    counter.add(4, "fft")
                a[start + k] = u + v
                a[start + k + span] = u - v
        span *= 2
    return np.array(a, dtype=np.complex128)


def radix2_executed_muls(n: int) -> int:
    """Real multiplications executed by the instrumented radix-2 FFT of size ``n``.

    Equals the ``2*n*log2(n)`` model minus the ``n - 1`` skipped unit twiddles.
    """
    if not is_power_of_two(n):
        raise ValueError(f"size must be a power of two, got {n}")
    return 2 * n * int(math.log2(n)) - 4 * (n - 1)


# ---------------------------------------------------------------------------
# All-phase FFT
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AllPhaseWindow:
    """Length 2N-1 all-phase window; ``weights[N-1]`` is the centre tap w(0)."""

    n: int
    weights: np.ndarray

    def __post_init__(self):
        if self.weights.shape != (2 * self.n - 1,):
            raise ValueError("window must have 2n-1 weights")

    def w(self, i: int) -> float:
        """Weight at signed offset ``i`` from the centre."""
        return float(self.weights[i + self.n - 1])


def build_allphase_window(n: int, kind: str = "triangular") -> AllPhaseWindow:
    """Normalized self-convolution of a length-``n`` rectangular window.

    ``w(i) = (n - |i|) / n**2`` for ``|i| < n``. Its DTFT is the squared
    Dirichlet kernel, which is what gives the apFFT its squared sidelobes.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"block size must be an integer >= 2, got {n}")
    if not is_power_of_two(n):
        raise ValueError(f"block size must be a power of two, got {n}")
    if kind != "triangular":
        raise ValueError(f"unknown all-phase window kind {kind!r}")
    i = np.arange(-(n - 1), n)
    weights = (n - np.abs(i)) / float(n * n)
    weights.setflags(write=False)
    return AllPhaseWindow(int(n), weights)


@dataclass(frozen=True)
class ApFftSpectrum:
    bins: np.ndarray
    n: int
    bin_resolution: float

    def __post_init__(self):
        if self.bins.size != self.n:
            raise ValueError("bins length must equal n")


def apfft(
    x,
    window: AllPhaseWindow,
    t_s: float = 1.0,
    counter: MulCounter | None = None,
) -> ApFftSpectrum:
    """All-phase FFT of ``2N-1`` samples centred on ``x[N-1]``.

    Computes ``v(i) = w(i) x(i)``, folds ``z(m) = v(m) + v(m-N)`` for
    ``m >= 1`` (``z(0) = v(0)``) and returns the N-point DFT of ``z``.
    """
    n = window.n
    x = np.asarray(x, dtype=np.complex128).ravel()
    if x.size != 2 * n - 1:
        raise ValueError(f"apfft expects {2 * n - 1} samples for N={n}, got {x.size}")
    v = window.weights * x
    if counter is not None:
        # real weight times complex sample
        counter.add(2 * v.size, "window")
    z = v[n - 1 :].copy()
    z[1:] += v[: n - 1]
    return ApFftSpectrum(dft(z, n, counter=counter), n, 1.0 / (n * t_s))


# ---------------------------------------------------------------------------
# Chirp-Z transform
# ---------------------------------------------------------------------------


def bluestein_length(n_in: int, n_out: int) -> int:
    """Circular convolution length ``2**ceil(log2(n_in + n_out - 1))``."""
    return 1 << max(0, math.ceil(math.log2(n_in + n_out - 1)))


@lru_cache(maxsize=64)
def _chirp_tables(n_in: int, n_out: int, step: float):
    # step is the normalized frequency increment f_step * t_s
    length = bluestein_length(n_in, n_out)
    k_in = np.arange(n_in, dtype=np.float64)
    k_out = np.arange(n_out, dtype=np.float64)
    pre = np.exp(-1j * np.pi * step * k_in**2)
    post = np.exp(-1j * np.pi * step * k_out**2)
    kernel = np.zeros(length, dtype=np.complex128)
    kernel[:n_out] = np.exp(1j * np.pi * step * k_out**2)
    if n_in > 1:
        kernel[length - n_in + 1 :] = np.exp(1j * np.pi * step * k_in[n_in - 1 : 0 : -1] ** 2)
    kernel_f = np.fft.fft(kernel)
    for arr in (pre, post, kernel_f):
        arr.setflags(write=False)
    return length, pre, post, kernel_f


def czt(x, f_start: float, f_step: float, n_out: int, t_s: float) -> np.ndarray:
    """Evaluate ``X[m] = sum_n x[n] exp(-2j*pi*(f_start + m*f_step)*n*t_s)``.

    Uses Bluestein's algorithm with a circular convolution of length
    :func:`bluestein_length`. Chirp tables are cached per size and step.
    """
    x = np.asarray(x, dtype=np.complex128).ravel()
    if x.size == 0:
        raise ValueError("czt needs at least one input sample")
    if n_out < 1:
        raise ValueError(f"n_out must be >= 1, got {n_out}")
    if not f_step > 0:
        raise ValueError(f"f_step must be positive, got {f_step}")
    if not t_s > 0:
        raise ValueError(f"t_s must be positive, got {t_s}")
    length, pre, post, kernel_f = _chirp_tables(x.size, int(n_out), float(f_step * t_s))
    shift = np.exp(-2j * np.pi * f_start * t_s * np.arange(x.size))
    y = np.zeros(length, dtype=np.complex128)
    y[: x.size] = x * shift * pre
    conv = np.fft.ifft(np.fft.fft(y) * kernel_f)
    return conv[:n_out] * post


# ---------------------------------------------------------------------------
# Zoom refinement
# ---------------------------------------------------------------------------


def signed_bin(k: int, n: int) -> int:
    """Map a DFT index in [0, n) to the signed range [-n/2, n/2)."""
    return k - n if k >= n // 2 else k


def peak_bin(spectrum: np.ndarray, rtol: float = 1e-12) -> int:
    """Signed index of the magnitude peak.

    Bins within ``rtol`` of the maximum count as tied; ties go to the
    smallest ``|k|`` (then the negative one).
    """
    mag = np.abs(spectrum)
    top = mag.max()
    n = mag.size
    candidates = np.flatnonzero(mag >= top * (1 - rtol))
    signed = [signed_bin(int(k), n) for k in candidates]
    return min(signed, key=lambda k: (abs(k), k))


def interpolate_peak(spectrum: np.ndarray, k: int, method: str = "macleod") -> float:
    """Fractional offset of the true peak from signed bin ``k`` using bins ``k-1, k, k+1``.

    ``"macleod"``
        Macleod's three-point estimator on the complex bins; near the
        periodogram maximum in noise, bias below 2e-5 bins for a clean tone.
    ``"jacobsen"``
        Jacobsen's complex estimator with the ``tan(pi/N)/(pi/N)``
        correction; exact for a clean tone, noisier than ``"macleod"``.
    ``"log-parabolic"``
        Parabola through log-magnitudes. Suited to Gaussian-like windows;
        on a rectangular window it is biased by up to ~0.16 bins.
    """
    n = spectrum.size
    left, mid, right = spectrum[(k - 1) % n], spectrum[k % n], spectrum[(k + 1) % n]
    if method == "macleod":
        r_left = float(np.real(left * np.conj(mid)))
        r_right = float(np.real(right * np.conj(mid)))
        denom = 2 * abs(mid) ** 2 + r_left + r_right
        if denom == 0:
            return 0.0
        g = (r_left - r_right) / denom
        if g == 0:
            return 0.0
        return (math.sqrt(1 + 8 * g * g) - 1) / (4 * g)
    if method == "jacobsen":
        denom = 2 * mid - left - right
        if denom == 0:
            return 0.0
        raw = float(np.real((left - right) / denom))
        return float(n / np.pi * np.arctan(np.tan(np.pi / n) * raw))
    if method == "log-parabolic":
        a, b, c = np.log(np.abs([left, mid, right]) + np.finfo(float).tiny)
        denom = a - 2 * b + c
        if denom == 0:
            return 0.0
        return float(0.5 * (a - c) / denom)
    raise ValueError(f"unknown interpolation method {method!r}")


def zoom_refine(
    x,
    f_center: float,
    n_out: int,
    t_s: float,
    interpolation: str = "macleod",
) -> float:
    """Refine a tone frequency around ``f_center`` from ``2*n_out`` samples.

    The zoom bin spacing is ``1/(N1*t_s)``, the same as the coarse FFT;
    sub-bin accuracy comes from the three-point interpolation.
    """
    x = np.asarray(x, dtype=np.complex128).ravel()
    if x.size != 2 * n_out:
        raise ValueError(f"zoom_refine needs N1 = 2*N2 samples, got N1={x.size}, N2={n_out}")
    if not is_power_of_two(n_out):
        raise ValueError(f"N2 must be a power of two, got {n_out}")
    mixed = x * np.exp(-2j * np.pi * f_center * t_s * np.arange(x.size))
    decimated = 0.5 * (mixed[0::2] + mixed[1::2])
    spectrum = dft(decimated, n_out)
    k = peak_bin(spectrum)
    frac = interpolate_peak(spectrum, k, interpolation)
    return f_center + (k + frac) / (x.size * t_s)
