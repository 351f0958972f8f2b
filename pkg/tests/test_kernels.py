"""DSP primitive tests with independent frequency-domain oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import RATE, dft_magnitude, tone
from ultraband import (
    BadAlpha,
    BadCutoff,
    BadRate,
    BadTaps,
    EmptySignal,
    FirFilter,
    RateMismatch,
    SampleBuffer,
    WindowSpec,
    apply_filter,
    design_lowpass,
    hilbert,
    peak_normalize,
    resample,
    tukey_window,
)


def _freq_response(filt: FirFilter, freq_hz: float) -> float:
    # Direct evaluation of |H(f)|, no FFT involved.
    k = np.arange(filt.taps.size)
    w = 2.0 * np.pi * freq_hz / filt.design_rate_hz
    return float(abs(np.sum(filt.taps * np.exp(-1j * w * k))))


# --- design_lowpass ---


def test_lowpass_unit_dc_gain():
    filt = design_lowpass(6000.0, RATE, 255)
    assert filt.taps.sum() == pytest.approx(1.0, abs=1e-12)
    assert _freq_response(filt, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_lowpass_exact_symmetry():
    filt = design_lowpass(6000.0, RATE, 255)
    assert np.array_equal(filt.taps, filt.taps[::-1])
    assert filt.group_delay == 127


def test_lowpass_minus_6db_at_cutoff():
    filt = design_lowpass(6000.0, RATE, 255)
    assert _freq_response(filt, 6000.0) == pytest.approx(0.5, abs=0.01)


def test_lowpass_passband_flat():
    filt = design_lowpass(6000.0, RATE, 255)
    for f in (500.0, 1000.0, 3000.0, 5000.0):
        gain_db = 20.0 * np.log10(_freq_response(filt, f))
        assert abs(gain_db) < 0.2


def test_lowpass_stopband_rejection():
    filt = design_lowpass(6000.0, RATE, 255)
    for f in np.arange(7000.0, 24000.0, 500.0):
        assert 20.0 * np.log10(_freq_response(filt, f)) <= -40.0


@pytest.mark.parametrize("cutoff", [0.0, -100.0, 24000.0, 30000.0])
def test_lowpass_bad_cutoff(cutoff):
    with pytest.raises(BadCutoff):
        design_lowpass(cutoff, RATE, 255)


@pytest.mark.parametrize("taps", [2, 4, 1, -5, 6.5])
def test_lowpass_bad_taps(taps):
    with pytest.raises(BadTaps):
        design_lowpass(6000.0, RATE, taps)


def test_lowpass_bad_rate():
    with pytest.raises(BadRate):
        design_lowpass(6000.0, 0.0, 255)


def test_lowpass_short_filter_warns(caplog):
    with caplog.at_level("WARNING", logger="ultraband.kernels"):
        design_lowpass(6000.0, RATE, 5)
    assert any("stopband" in r.message for r in caplog.records)


def test_firfilter_validates_construction():
    with pytest.raises(BadTaps):
        FirFilter(np.ones(4) / 4.0, 1000.0, RATE)  # even length
    with pytest.raises(BadTaps):
        FirFilter(np.ones(5), 1000.0, RATE)  # sum is 5, not 1


# --- apply_filter ---


def test_filter_preserves_length_and_alignment():
    filt = design_lowpass(6000.0, RATE, 255)
    x = np.zeros(4096)
    x[2000] = 1.0
    out = apply_filter(filt, SampleBuffer(x, RATE))
    assert len(out) == 4096
    assert int(np.argmax(np.abs(out.samples))) == 2000


def test_filter_passes_low_tone_rejects_high_tone():
    filt = design_lowpass(6000.0, RATE, 255)
    low = apply_filter(filt, tone(1000.0))
    high = apply_filter(filt, tone(15000.0))
    core = slice(4800, -4800)
    a_low = dft_magnitude(low.samples[core], 1000.0, RATE)
    a_high = dft_magnitude(high.samples[core], 15000.0, RATE)
    assert 20.0 * np.log10(a_high / a_low) <= -40.0


def test_filter_rate_mismatch():
    filt = design_lowpass(6000.0, RATE, 255)
    with pytest.raises(RateMismatch):
        apply_filter(filt, SampleBuffer(np.zeros(100), 44100.0))


def test_filter_empty_passthrough():
    filt = design_lowpass(6000.0, RATE, 255)
    out = apply_filter(filt, SampleBuffer(np.zeros(0), RATE))
    assert len(out) == 0


# --- hilbert ---


def test_hilbert_cosine_to_sine():
    # integer number of periods keeps the DFT exact
    n = 48000
    t = np.arange(n) / RATE
    out = hilbert(SampleBuffer(np.cos(2.0 * np.pi * 1000.0 * t), RATE))
    assert np.max(np.abs(out.samples - np.sin(2.0 * np.pi * 1000.0 * t))) < 1e-6


def test_hilbert_of_constant_is_zero():
    out = hilbert(SampleBuffer(np.full(1024, 0.7), RATE))
    assert np.max(np.abs(out.samples)) < 1e-9


def test_hilbert_involution():
    rng = np.random.default_rng(11)
    x = rng.standard_normal(4097)  # odd length: no Nyquist bin
    x -= x.mean()
    twice = hilbert(hilbert(SampleBuffer(x, RATE)))
    assert np.max(np.abs(twice.samples + x)) < 1e-6


def test_hilbert_preserves_energy_of_zero_mean():
    rng = np.random.default_rng(12)
    x = rng.standard_normal(4097)
    x -= x.mean()
    out = hilbert(SampleBuffer(x, RATE))
    e_in = float(np.dot(x, x))
    e_out = float(np.dot(out.samples, out.samples))
    assert abs(e_out - e_in) / e_in < 1e-6


def test_hilbert_empty():
    with pytest.raises(EmptySignal):
        hilbert(SampleBuffer(np.zeros(0), RATE))


@settings(max_examples=25, deadline=None)
@given(
    arrays(
        np.float64,
        st.integers(33, 257).filter(lambda n: n % 2 == 1),
        elements=st.floats(-1.0, 1.0, allow_nan=False),
    )
)
def test_hilbert_involution_property(x):
    x = x - x.mean()
    if np.max(np.abs(x)) < 1e-3:
        return
    twice = hilbert(hilbert(SampleBuffer(x, RATE)))
    assert np.max(np.abs(twice.samples + x)) < 1e-6


# --- tukey_window ---


def test_tukey_alpha_zero_is_rectangular():
    assert tukey_window(WindowSpec("tukey", 0.0, 8)).tolist() == [1.0] * 8


def test_tukey_alpha_one_is_hann():
    w = tukey_window(WindowSpec("tukey", 1.0, 512))
    assert np.max(np.abs(w - np.hanning(512))) < 1e-12


def test_tukey_long_window_shape():
    w = tukey_window(WindowSpec("tukey", 0.05, 48000))
    assert w[0] == 0.0
    assert w[-1] == 0.0
    assert w[24000] == 1.0


@pytest.mark.parametrize("alpha", [0.0, 0.01, 0.05, 0.3, 0.9, 1.0])
def test_tukey_values_bounded(alpha):
    w = tukey_window(WindowSpec("tukey", alpha, 1001))
    assert w.min() >= 0.0
    assert w.max() <= 1.0


def test_tukey_bad_alpha():
    with pytest.raises(BadAlpha):
        tukey_window(WindowSpec("tukey", 1.5, 64))
    with pytest.raises(BadAlpha):
        tukey_window(WindowSpec("tukey", -0.1, 64))


def test_tukey_bad_length_and_kind():
    with pytest.raises(ValueError):
        tukey_window(WindowSpec("tukey", 0.5, 1))
    with pytest.raises(ValueError):
        tukey_window(WindowSpec("kaiser", 0.5, 64))


# --- peak_normalize ---


def test_normalize_simple():
    out = peak_normalize(SampleBuffer(np.array([0.5, -0.25]), RATE), 1.0)
    assert out.samples.tolist() == [1.0, -0.5]


def test_normalize_zero_unchanged():
    out = peak_normalize(SampleBuffer(np.zeros(16), RATE), 1.0)
    assert np.max(np.abs(out.samples)) == 0.0


def test_normalize_arbitrary_target():
    rng = np.random.default_rng(13)
    out = peak_normalize(SampleBuffer(rng.standard_normal(500), RATE), 0.891)
    assert np.max(np.abs(out.samples)) == pytest.approx(0.891, abs=1e-9)


@pytest.mark.parametrize("target", [0.0, -0.5, 1.5])
def test_normalize_bad_target(target):
    with pytest.raises(ValueError):
        peak_normalize(SampleBuffer(np.ones(4), RATE), target)


@settings(max_examples=25, deadline=None)
@given(
    arrays(np.float64, st.integers(1, 200), elements=st.floats(-100.0, 100.0, allow_nan=False)),
    st.floats(0.01, 1.0),
)
def test_normalize_property(x, target):
    out = peak_normalize(SampleBuffer(x, RATE), target)
    if np.max(np.abs(x)) == 0.0:
        assert np.max(np.abs(out.samples)) == 0.0
    else:
        assert np.max(np.abs(out.samples)) == pytest.approx(target, rel=1e-9)


# --- resample ---


def test_resample_same_rate_identity():
    x = SampleBuffer(np.arange(100, dtype=float), RATE)
    out = resample(x, RATE)
    assert np.array_equal(out.samples, x.samples)


def test_resample_tone_amplitude_preserved():
    t = np.arange(int(2 * 44100)) / 44100.0
    x = SampleBuffer(0.8 * np.sin(2.0 * np.pi * 1000.0 * t), 44100.0)
    out = resample(x, 48000.0)
    assert out.sample_rate_hz == 48000.0
    core = out.samples[4800:-4800]
    amp = dft_magnitude(core, 1000.0, 48000.0) / (core.size / 2.0)
    assert abs(20.0 * np.log10(amp / 0.8)) < 0.5


def test_resample_silence_upsample():
    out = resample(SampleBuffer(np.zeros(8000), 8000.0), 48000.0)
    assert out.sample_rate_hz == 48000.0
    assert np.max(np.abs(out.samples)) == 0.0


def test_resample_bad_rate():
    with pytest.raises(BadRate):
        resample(SampleBuffer(np.zeros(10), RATE), 0.0)
