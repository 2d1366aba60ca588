import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from apfoe import qam


@pytest.mark.parametrize("m", [16, 64])
def test_unit_power_and_real_negative_moment(m):
    c = qam.build_constellation(m)
    assert len(c) == m
    assert np.mean(np.abs(c.points) ** 2) == pytest.approx(1.0, abs=1e-12)
    assert c.fourth_moment == pytest.approx(np.mean(c.points**4), abs=1e-15)
    assert abs(c.fourth_moment.imag) < 1e-12
    assert c.fourth_moment.real < 0


def test_16qam_moment():
    c = qam.build_constellation(16)
    assert c.fourth_moment.real == pytest.approx(-0.68, abs=1e-12)
    # back on the {+-1,+-3} grid, mean power 10
    assert c.fourth_moment.real * 10**2 == pytest.approx(-68, abs=1e-9)


def test_64qam_moment():
    c = qam.build_constellation(64)
    assert c.fourth_moment.real == pytest.approx(-1092 / 1764, abs=1e-12)


def test_grid_levels():
    c = qam.build_constellation(64)
    levels = np.unique(np.round(c.points.real * np.sqrt(42), 9))
    assert levels.tolist() == [-7, -5, -3, -1, 1, 3, 5, 7]


@pytest.mark.parametrize("m", [4, 32, 256, 0])
def test_unsupported_format(m):
    with pytest.raises(ValueError):
        qam.build_constellation(m)


def test_generate_is_reproducible():
    c = qam.build_constellation(16)
    a = qam.generate_symbols(c, 4, seed=1)
    b = qam.generate_symbols(c, 4, seed=1)
    assert np.array_equal(a.samples, b.samples)


def test_generated_power():
    c = qam.build_constellation(16)
    s = qam.generate_symbols(c, 100_000, seed=7)
    assert np.mean(np.abs(s.samples) ** 2) == pytest.approx(1.0, rel=0.02)


def test_single_64qam_symbol_is_a_point():
    c = qam.build_constellation(64)
    s = qam.generate_symbols(c, 1, seed=3)
    assert np.min(np.abs(c.points - s.samples[0])) == 0


def test_generate_rejects_zero_count():
    with pytest.raises(ValueError):
        qam.generate_symbols(qam.build_constellation(16), 0)


def test_sequence_validation():
    with pytest.raises(ValueError):
        qam.SymbolSequence(np.array([], dtype=complex), 1.0)
    with pytest.raises(ValueError):
        qam.SymbolSequence(np.ones(3), 0.0)
    with pytest.raises(ValueError):
        qam.SymbolSequence(np.ones((2, 2)), 1.0)
    assert qam.SymbolSequence(np.ones(3), 0.5).symbol_rate == 2.0


def test_fourth_power_basic():
    out = qam.fourth_power(qam.SymbolSequence(np.array([1 + 0j, 1j]), 2e-3))
    assert np.allclose(out.samples, [1, 1], atol=0)
    assert out.t_s == 2e-3
    zeros = qam.fourth_power(qam.SymbolSequence(np.zeros(5), 1.0))
    assert not np.any(zeros.samples)


def test_fourth_power_mean_is_moment():
    c = qam.build_constellation(16)
    s = qam.generate_symbols(c, 100_000, seed=11)
    mean = np.mean(qam.fourth_power(s).samples)
    assert mean.real == pytest.approx(-0.68, rel=0.02)


def test_fourth_power_envelope_with_offset():
    # dividing out the rotation recovers the constellation mean
    c = qam.build_constellation(16)
    s = qam.generate_symbols(c, 100_000, seed=12)
    n = np.arange(len(s))
    rotated = s.samples * np.exp(2j * np.pi * 0.01 * n)
    x4 = qam.fourth_power(s.with_samples(rotated)).samples
    derotated = np.mean(x4 * np.exp(-4j * 2 * np.pi * 0.01 * n))
    assert derotated.real == pytest.approx(-0.68, rel=0.02)


complex_arrays = st.lists(
    st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=50,
).map(lambda v: np.array(v, dtype=complex))


@given(complex_arrays)
def test_fourth_power_properties(x):
    seq = qam.SymbolSequence(x, 1.0)
    y = qam.fourth_power(seq).samples
    assert y.shape == x.shape
    np.testing.assert_allclose(np.abs(y), np.abs(x) ** 4, rtol=1e-12, atol=1e-300)
    conj = qam.fourth_power(seq.with_samples(np.conj(x))).samples
    np.testing.assert_array_equal(conj, np.conj(y))


@settings(max_examples=20)
@given(st.sampled_from([16, 64]))
def test_constellation_is_pure(m):
    a, b = qam.build_constellation(m), qam.build_constellation(m)
    assert np.array_equal(a.points, b.points) and a.fourth_moment == b.fourth_moment
