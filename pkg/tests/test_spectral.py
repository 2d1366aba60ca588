import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apfoe import spectral
from oracles import direct_apfft, direct_czt, direct_dft, rel_err, tone


def cvec(size, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=size) + 1j * rng.normal(size=size)


# --- dft -------------------------------------------------------------------


def test_dft_small_examples():
    np.testing.assert_allclose(spectral.dft([1, 0, 0, 0]), [1, 1, 1, 1])
    np.testing.assert_allclose(spectral.dft([1, 1, 1, 1]), [4, 0, 0, 0], atol=1e-15)


def test_dft_matches_oracle_64():
    x = cvec(64, 0)
    assert rel_err(spectral.dft(x, 64), direct_dft(x)) < 1e-10


def test_dft_rejects_bad_sizes():
    with pytest.raises(ValueError):
        spectral.dft(np.ones(6))
    with pytest.raises(ValueError):
        spectral.dft(np.ones(4), 8)


@given(st.integers(0, 6), st.integers(0, 2**32 - 1))
def test_dft_roundtrip_and_oracle(log_n, seed):
    x = cvec(1 << log_n, seed)
    y = spectral.dft(x)
    assert rel_err(y, direct_dft(x)) < 1e-10
    assert rel_err(spectral.idft(y), x) < 1e-10


@pytest.mark.parametrize("n", [2, 8, 64])
def test_counted_dft_agrees_and_counts(n):
    x = cvec(n, n)
    counter = spectral.MulCounter()
    y = spectral.dft(x, counter=counter)
    assert rel_err(y, direct_dft(x)) < 1e-12
    assert counter.muls == counter.by_stage.get("fft", 0) == spectral.radix2_executed_muls(n)
    # never more than the 2 N log2 N model
    assert counter.muls <= 2 * n * int(math.log2(n))


# --- all-phase window ------------------------------------------------------


def test_window_examples():
    np.testing.assert_allclose(spectral.build_allphase_window(2).weights, [0.25, 0.5, 0.25])
    w4 = spectral.build_allphase_window(4)
    np.testing.assert_allclose(w4.weights, np.array([1, 2, 3, 4, 3, 2, 1]) / 16)
    assert w4.w(0) == 0.25 and w4.w(-3) == w4.w(3) == 1 / 16


@pytest.mark.parametrize("n", [2, 4, 8, 64, 512, 1024])
def test_window_symmetry_and_sum(n):
    w = spectral.build_allphase_window(n).weights
    assert np.array_equal(w, w[::-1])
    assert abs(w.sum() - 1) < 1e-12


@pytest.mark.parametrize("n", [1, 0, -4, 6, 3])
def test_window_rejects(n):
    with pytest.raises(ValueError):
        spectral.build_allphase_window(n)


# --- apfft -----------------------------------------------------------------


def test_apfft_matches_literal_construction():
    n = 8
    x = cvec(2 * n - 1, 4)
    got = spectral.apfft(x, spectral.build_allphase_window(n)).bins
    assert rel_err(got, direct_apfft(x, n)) < 1e-12


def test_apfft_length_check():
    with pytest.raises(ValueError):
        spectral.apfft(np.ones(7), spectral.build_allphase_window(8))


def test_apfft_metadata():
    spec = spectral.apfft(np.ones(15), spectral.build_allphase_window(8), t_s=1e-3)
    assert spec.n == 8 and spec.bins.size == 8
    assert spec.bin_resolution == pytest.approx(1 / 8e-3)


def test_apfft_on_bin_tone():
    n, k, theta, amp = 64, 5, 0.7, 2.5
    x = tone(2 * n - 1, k / n, phase=theta, amplitude=amp, start=-(n - 1))
    bins = spectral.apfft(x, spectral.build_allphase_window(n)).bins
    assert abs(bins[k] - amp * np.exp(1j * theta)) < 1e-10
    others = np.delete(bins, k)
    assert np.max(np.abs(others)) < 1e-10


def wrap(a):
    return (a + np.pi) % (2 * np.pi) - np.pi


@given(st.floats(-0.499, 0.499), st.floats(-np.pi, np.pi), st.integers(-20, 20))
def test_apfft_phase_invariance(delta, theta, k):
    n = 64
    # sample index N-1 is the centre, so build the tone with time 0 there
    x = tone(2 * n - 1, (k + delta) / n, phase=theta, start=-(n - 1))
    bins = spectral.apfft(x, spectral.build_allphase_window(n)).bins
    assert abs(wrap(np.angle(bins[k % n]) - theta)) < 1e-9


def dirichlet(delta, n):
    return abs(math.sin(math.pi * delta) / (n * math.sin(math.pi * delta / n)))


def test_apfft_peak_is_squared_dirichlet():
    n, delta = 64, 0.3
    x = tone(2 * n - 1, (3 + delta) / n, start=-(n - 1))
    ap = abs(spectral.apfft(x, spectral.build_allphase_window(n)).bins[3])
    plain = abs(spectral.dft(tone(n, (3 + delta) / n))[3]) / n
    assert ap == pytest.approx(dirichlet(delta, n) ** 2, rel=1e-9)
    assert ap / plain == pytest.approx(dirichlet(delta, n), rel=1e-9)


def test_apfft_sidelobes_are_squared():
    n = 256
    freq = (10.5) / n
    ap = np.abs(spectral.apfft(tone(2 * n - 1, freq, start=-(n - 1)), spectral.build_allphase_window(n)).bins)
    plain = np.abs(spectral.dft(tone(n, freq)))
    # bins 10/11 are the two main-lobe samples, 12 the first sidelobe sample
    ratio_ap = ap[11] / ap[12]
    ratio_plain = plain[11] / plain[12]
    assert ratio_ap == pytest.approx(ratio_plain**2, rel=0.01)


@given(
    st.integers(0, 2**32 - 1),
    st.complex_numbers(max_magnitude=100, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=100, allow_nan=False, allow_infinity=False),
)
def test_apfft_linearity(seed, a, b):
    n = 16
    w = spectral.build_allphase_window(n)
    x, y = cvec(2 * n - 1, seed), cvec(2 * n - 1, seed + 1)
    lhs = spectral.apfft(a * x + b * y, w).bins
    rhs = a * spectral.apfft(x, w).bins + b * spectral.apfft(y, w).bins
    assert np.max(np.abs(lhs - rhs)) < 1e-10 * max(1.0, abs(a) + abs(b))


def test_apfft_counts_window_muls():
    counter = spectral.MulCounter()
    n = 32
    spectral.apfft(cvec(2 * n - 1, 1), spectral.build_allphase_window(n), counter=counter)
    assert counter.by_stage["window"] == 2 * (2 * n - 1)


# --- czt -------------------------------------------------------------------


def test_bluestein_length():
    assert spectral.bluestein_length(512, 256) == 1024
    assert spectral.bluestein_length(1024, 512) == 2048
    assert spectral.bluestein_length(1, 1) == 1


def test_czt_on_dft_grid():
    n = 32
    x = tone(n, 5 / n) + 0.1 * cvec(n, 2)
    got = spectral.czt(x, 0.0, 1.0 / n, n, 1.0)
    assert rel_err(got, spectral.dft(x)) < 1e-9


def test_czt_random_32_16():
    x = cvec(32, 8)
    got = spectral.czt(x, -0.137, 0.0123, 16, 1.0)
    assert rel_err(got, direct_czt(x, -0.137, 0.0123, 16, 1.0)) < 1e-9


@settings(max_examples=200)
@given(
    st.integers(1, 64),
    st.integers(1, 64),
    st.floats(-0.5, 0.5),
    st.floats(1e-4, 0.05),
    st.integers(0, 2**32 - 1),
)
def test_czt_property(n_in, n_out, f_start, f_step, seed):
    x = cvec(n_in, seed)
    t_s = 1e-9
    got = spectral.czt(x, f_start / t_s, f_step / t_s, n_out, t_s)
    assert rel_err(got, direct_czt(x, f_start / t_s, f_step / t_s, n_out, t_s)) < 1e-9


def test_czt_validation():
    with pytest.raises(ValueError):
        spectral.czt([], 0, 1, 4, 1)
    with pytest.raises(ValueError):
        spectral.czt([1], 0, 1, 0, 1)
    with pytest.raises(ValueError):
        spectral.czt([1], 0, 0, 4, 1)


def test_czt_tables_are_read_only():
    spectral.czt(np.ones(8), 0.0, 0.01, 4, 1.0)
    _, pre, _, _ = spectral._chirp_tables(8, 4, 0.01)
    with pytest.raises(ValueError):
        pre[0] = 0


# --- peak picking and zoom --------------------------------------------------


def test_signed_bin():
    assert [spectral.signed_bin(k, 8) for k in range(8)] == [0, 1, 2, 3, -4, -3, -2, -1]


def test_peak_bin_tie_breaking():
    assert spectral.peak_bin(np.array([0, 1, 0, 0, 0, 0, 0, 1.0])) == -1
    assert spectral.peak_bin(np.array([0, 0, 1, 0, 0, 0, 1.0, 0])) == -2
    assert spectral.peak_bin(np.array([1.0, 0, 0, 0, 0, 0, 0, 1.0])) == 0
    assert spectral.peak_bin(np.array([0, 0, 0, 0, 2.0, 0, 0, 0])) == -4


@pytest.mark.parametrize("method", ["macleod", "jacobsen"])
@pytest.mark.parametrize("frac", [-0.4, -0.1, 0.0, 0.25, 0.45])
def test_interpolators_on_clean_tone(method, frac):
    n = 256
    spec = spectral.dft(tone(n, (17 + frac) / n))
    est = spectral.interpolate_peak(spec, 17, method)
    assert abs(est - frac) < 1e-3


def test_log_parabolic_is_biased_on_rect_window():
    n = 256
    spec = spectral.dft(tone(n, (17 + 0.25) / n))
    assert abs(spectral.interpolate_peak(spec, 17, "log-parabolic") - 0.25) > 0.05


def test_interpolator_unknown():
    with pytest.raises(ValueError):
        spectral.interpolate_peak(np.ones(8), 0, "sinc")


def test_zoom_on_centre():
    n1, t_s = 512, 1 / 28e9
    f0 = 37 / (n1 * t_s)
    got = spectral.zoom_refine(tone(n1, f0, t_s), f0, n1 // 2, t_s)
    assert abs(got - f0) < 1e-6 / (n1 * t_s)


def test_zoom_quarter_bin():
    n1, t_s = 512, 1 / 28e9
    bin_hz = 1 / (n1 * t_s)
    f0 = 37 * bin_hz
    got = spectral.zoom_refine(tone(n1, f0 + 0.25 * bin_hz, t_s), f0, n1 // 2, t_s)
    assert abs(got - (f0 + 0.25 * bin_hz)) < 0.02 * bin_hz


def test_zoom_size_check():
    with pytest.raises(ValueError):
        spectral.zoom_refine(np.ones(100), 0.0, 64, 1.0)
