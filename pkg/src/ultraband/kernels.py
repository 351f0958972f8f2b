"""Reusable DSP primitives: FIR design, Hilbert transform, windows, resampling.

Everything here is a pure function over :class:`~ultraband.wavio.SampleBuffer`
values. The heavy lifting (FFTs, convolution, polyphase resampling) rides on
numpy/scipy; the numerically relevant choices -- tap formulas, spectral bin
weighting, window shapes -- are all explicit in this file.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.signal import fftconvolve, resample_poly

from .errors import BadAlpha, BadCutoff, BadRate, BadTaps, EmptySignal, RateMismatch
from .wavio import SampleBuffer

log = logging.getLogger(__name__)

# Below this the Hamming-windowed sinc cannot reach useful stopband rejection.
_LOW_QUALITY_TAPS = 31


@dataclass(frozen=True)
class FirFilter:
    """Designed FIR filter: coefficient vector plus the rate it assumes."""

    taps: np.ndarray
    cutoff_hz: float
    design_rate_hz: float

    def __post_init__(self):
        arr = np.array(self.taps, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "taps", arr)
        if arr.size % 2 == 0:
            raise BadTaps("FIR length must be odd for integer group delay")
        if abs(arr.sum() - 1.0) > 1e-6:
            raise BadTaps("FIR coefficients must sum to 1 (unit DC gain)")

    @property
    def group_delay(self) -> int:
        return (self.taps.size - 1) // 2


@dataclass(frozen=True)
class WindowSpec:
    """Window request: family name, taper fraction, length in samples."""

    kind: str = "tukey"
    alpha: float = 0.05
    length: int = 0


def design_lowpass(cutoff_hz: float, rate_hz: float, n_taps: int = 255) -> FirFilter:
    """Design a linear-phase low-pass FIR (windowed sinc, Hamming window).

    The -6 dB point lands on ``cutoff_hz``. Coefficients are normalized to
    unit sum and symmetrized exactly, so DC gain is 1 and group delay is
    ``(n_taps - 1) / 2`` samples at every frequency.

    Parameters
    ----------
    cutoff_hz : float
        Edge frequency, 0 < cutoff < rate/2.
    rate_hz : float
        Sample rate the filter will run at.
    n_taps : int
        Odd number of coefficients, >= 3. Short filters are legal but give
        weak stopband rejection; 255 taps reaches better than -40 dB.
    """
    if not rate_hz > 0:
        raise BadRate(f"rate {rate_hz} Hz must be positive")
    if not 0 < cutoff_hz < rate_hz / 2:
        raise BadCutoff(f"cutoff {cutoff_hz} Hz must lie inside (0, {rate_hz / 2})")
    if int(n_taps) != n_taps or n_taps < 3 or n_taps % 2 == 0:
        raise BadTaps(f"n_taps {n_taps} must be an odd integer >= 3")
    n_taps = int(n_taps)
    if n_taps < _LOW_QUALITY_TAPS:
        log.warning(
            "design_lowpass: %d taps gives poor stopband attenuation; consider >= %d",
            n_taps,
            _LOW_QUALITY_TAPS,
        )

    half = (n_taps - 1) // 2
    k = np.arange(-half, half + 1)
    fn = cutoff_hz / rate_hz
    h = 2.0 * fn * np.sinc(2.0 * fn * k) * np.hamming(n_taps)
    h = 0.5 * (h + h[::-1])  # force exact symmetry
    h /= h.sum()
    return FirFilter(taps=h, cutoff_hz=float(cutoff_hz), design_rate_hz=float(rate_hz))


def apply_filter(filt: FirFilter, signal: SampleBuffer) -> SampleBuffer:
    """Filter a signal, compensating group delay so output aligns with input.

    Edges are computed against implicit zero padding; output length equals
    input length. Raises RateMismatch if the signal's rate is not the rate
    the filter was designed for.
    """
    if not math.isclose(signal.sample_rate_hz, filt.design_rate_hz, rel_tol=1e-9):
        raise RateMismatch(
            f"signal at {signal.sample_rate_hz} Hz, filter designed for {filt.design_rate_hz} Hz"
        )
    if len(signal) == 0:
        return signal
    full = fftconvolve(signal.samples, filt.taps, mode="full")
    d = filt.group_delay
    return SampleBuffer(full[d : d + len(signal)], signal.sample_rate_hz)


def hilbert(signal: SampleBuffer) -> SampleBuffer:
    """Return the Hilbert transform (imaginary part of the analytic signal).

    Computed in the frequency domain: negative-frequency bins are zeroed,
    positive bins doubled, DC and Nyquist left at unit weight. A pure cosine
    maps to the same-frequency sine; DC maps to zero.
    """
    n = len(signal)
    if n == 0:
        raise EmptySignal("hilbert of an empty signal")
    spectrum = np.fft.fft(signal.samples)
    weights = np.zeros(n)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[n // 2] = 1.0
        weights[1 : n // 2] = 2.0
    else:
        weights[1 : (n + 1) // 2] = 2.0
    analytic = np.fft.ifft(spectrum * weights)
    return SampleBuffer(analytic.imag, signal.sample_rate_hz)


def tukey_window(spec: WindowSpec) -> np.ndarray:
    """Evaluate a Tukey (tapered cosine) window.

    ``alpha`` is the total fraction of the window spent in the two cosine
    ramps: alpha=0 degenerates to rectangular, alpha=1 to a Hann window.
    For alpha > 0 the endpoints are exactly zero.
    """
    if spec.kind != "tukey":
        raise ValueError(f"unknown window kind {spec.kind!r}")
    if not 0.0 <= spec.alpha <= 1.0:
        raise BadAlpha(f"alpha {spec.alpha} outside [0, 1]")
    n = spec.length
    if n < 2:
        raise ValueError("window length must be >= 2")
    if spec.alpha == 0.0:
        return np.ones(n)

    alpha = spec.alpha
    x = np.linspace(0.0, 1.0, n)
    w = np.ones(n)
    rising = x < alpha / 2
    falling = x > 1.0 - alpha / 2
    w[rising] = 0.5 * (1.0 + np.cos(np.pi * (2.0 * x[rising] / alpha - 1.0)))
    w[falling] = 0.5 * (1.0 + np.cos(np.pi * (2.0 * x[falling] / alpha - 2.0 / alpha + 1.0)))
    return w


def peak_normalize(signal: SampleBuffer, target: float = 1.0) -> SampleBuffer:
    """Scale so the maximum absolute sample equals ``target``.

    All-zero (or empty) input is returned unchanged; there is no peak to move.
    """
    if not 0.0 < target <= 1.0:
        raise ValueError(f"target {target} outside (0, 1]")
    if len(signal) == 0:
        return signal
    peak = float(np.max(np.abs(signal.samples)))
    if peak == 0.0:
        return signal
    return SampleBuffer(signal.samples * (target / peak), signal.sample_rate_hz)


def resample(signal: SampleBuffer, new_rate_hz: float) -> SampleBuffer:
    """Band-limited rational resampling (polyphase windowed-sinc).

    Content below 0.45 * min(old, new) rate survives within 0.5 dB. A
    same-rate request returns the samples untouched.
    """
    if not new_rate_hz > 0:
        raise BadRate(f"target rate {new_rate_hz} Hz must be positive")
    if math.isclose(signal.sample_rate_hz, new_rate_hz, rel_tol=1e-9):
        return SampleBuffer(signal.samples, new_rate_hz)
    if len(signal) == 0:
        return SampleBuffer(signal.samples, new_rate_hz)
    ratio = Fraction(new_rate_hz / signal.sample_rate_hz).limit_denominator(1000)
    out = resample_poly(signal.samples, ratio.numerator, ratio.denominator)
    return SampleBuffer(out, new_rate_hz)
