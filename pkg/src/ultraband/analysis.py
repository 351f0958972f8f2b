"""Spectral measurement, high-band detection, and spectrogram rendering.

Band energies are Parseval-consistent: the per-bin values of one full-band
query sum to the time-domain energy, and any disjoint partition of
[0, Nyquist] sums to the same total. Bands are half-open [lo, hi) except
that a band reaching Nyquist also claims the Nyquist bin, which is what
makes partitions exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import BadBand, EmptySignal, IoFailure, SignalTooShort
from .kernels import WindowSpec, tukey_window
from .wavio import SampleBuffer

if TYPE_CHECKING:  # pragma: no cover
    from .modulator import ModulationConfig

DB_FLOOR = -120.0

#: Reference band used by the detector: where ordinary speech content lives.
SPEECH_BAND = (300.0, 8000.0)

_EPS = 1e-30


@dataclass(frozen=True)
class Spectrogram:
    """STFT magnitudes in dB relative to full scale, floored at -120 dB."""

    frame_times: np.ndarray  # seconds, frame centers
    bin_freqs: np.ndarray  # Hz
    magnitudes_db: np.ndarray  # shape (n_frames, n_bins)
    sample_rate_hz: float


@dataclass(frozen=True)
class BandMetrics:
    """One-line spectral summary of a (presumably modulated) signal.

    Relative quantities (leakage, suppression) are nonpositive by
    construction; suppression is None when no dominant tone pair exists to
    measure.
    """

    inband_energy_db: float
    leakage_below_carrier_db: float
    sideband_suppression_db: Optional[float]
    occupancy_lo_hz: float
    occupancy_hi_hz: float


@dataclass(frozen=True)
class DetectionVerdict:
    """Per-frame flags plus the overall call on a clip."""

    flagged: bool
    score: float  # fraction of frames over threshold
    sustained_ms: float  # longest consecutive run of flagged frames
    frame_flags: np.ndarray


def _frame_starts(n: int, frame_len: int, hop: int) -> int:
    return (n - frame_len) // hop + 1


def _weighted_power(samples: np.ndarray) -> np.ndarray:
    """Per-bin energies of an rfft such that their sum equals sum(x**2)."""
    spectrum = np.fft.rfft(samples)
    power = np.abs(spectrum) ** 2
    weights = np.full(power.shape[-1], 2.0)
    weights[0] = 1.0
    if samples.shape[-1] % 2 == 0:
        weights[-1] = 1.0
    return weights * power / samples.shape[-1]


def _band_mask(freqs: np.ndarray, lo: float, hi: float, nyquist: float) -> np.ndarray:
    mask = (freqs >= lo) & (freqs < hi)
    if hi >= nyquist * (1.0 - 1e-12):
        mask |= freqs >= hi
    return mask


def stft(
    signal: SampleBuffer,
    frame_len: int,
    hop: int,
    window: WindowSpec = WindowSpec(kind="tukey", alpha=1.0, length=0),
) -> Spectrogram:
    """Short-time spectrum in dB full scale.

    Frame count is ``floor((len - frame_len) / hop) + 1``; a trailing
    remainder shorter than one frame is dropped. A full-scale sine lands at
    about 0 dB in its bin; silence sits exactly on the -120 dB floor.
    """
    if frame_len < 16:
        raise ValueError(f"frame_len {frame_len} must be >= 16")
    if not 0 < hop <= frame_len:
        raise ValueError(f"hop {hop} must be in (0, frame_len]")
    if len(signal) < frame_len:
        raise SignalTooShort(f"{len(signal)} samples, need at least {frame_len}")
    if window.length not in (0, frame_len):
        raise ValueError("window length does not match frame_len")
    w = tukey_window(WindowSpec(kind=window.kind, alpha=window.alpha, length=frame_len))

    n_frames = _frame_starts(len(signal), frame_len, hop)
    frames = sliding_window_view(signal.samples, frame_len)[:: hop][:n_frames]
    spectra = np.abs(np.fft.rfft(frames * w, axis=1))
    full_scale = w.sum() / 2.0
    floor_mag = full_scale * 10.0 ** (DB_FLOOR / 20.0)
    mags_db = 20.0 * np.log10(np.maximum(spectra, floor_mag) / full_scale)

    starts = np.arange(n_frames) * hop
    return Spectrogram(
        frame_times=(starts + frame_len / 2.0) / signal.sample_rate_hz,
        bin_freqs=np.fft.rfftfreq(frame_len, d=1.0 / signal.sample_rate_hz),
        magnitudes_db=mags_db,
        sample_rate_hz=signal.sample_rate_hz,
    )


def band_energy(signal: SampleBuffer, lo_hz: float, hi_hz: float) -> float:
    """Signal energy (sum of squares) inside [lo_hz, hi_hz).

    A band whose upper edge reaches Nyquist includes the Nyquist bin, so a
    disjoint partition of [0, rate/2] sums exactly to the total energy.
    """
    if len(signal) == 0:
        raise EmptySignal("no energy in an empty signal")
    nyquist = signal.sample_rate_hz / 2.0
    if not (0.0 <= lo_hz < hi_hz and hi_hz <= nyquist * (1.0 + 1e-12)):
        raise BadBand(f"band [{lo_hz}, {hi_hz}] Hz invalid for rate {signal.sample_rate_hz} Hz")
    freqs = np.fft.rfftfreq(len(signal), d=1.0 / signal.sample_rate_hz)
    energy = _weighted_power(signal.samples)
    return float(energy[_band_mask(freqs, lo_hz, hi_hz, nyquist)].sum())


def _occupancy(freqs: np.ndarray, energy: np.ndarray, q_lo: float, q_hi: float):
    total = energy.sum()
    if total <= 0.0:
        return 0.0, 0.0
    cum = np.cumsum(energy)
    lo = freqs[min(int(np.searchsorted(cum, q_lo * total)), freqs.size - 1)]
    hi = freqs[min(int(np.searchsorted(cum, q_hi * total)), freqs.size - 1)]
    return float(lo), float(hi)


def measure(signal: SampleBuffer, config: "ModulationConfig") -> BandMetrics:
    """Summarize how well a signal stays inside its intended high band.

    Metrics are computed over the central taper-free region (the Tukey
    ramps are excluded) so they describe steady-state behavior:

    * leakage: energy below carrier - 500 Hz relative to total energy.
    * occupancy: 5% and 95% spectral-energy quantile frequencies.
    * suppression: image-line level relative to the dominant tone line,
      when a single dominant line exists; None otherwise.
    """
    config.validate()
    if len(signal) == 0:
        raise EmptySignal("cannot measure an empty signal")

    n = len(signal)
    edge = int(round(n * config.tukey_alpha / 2.0))
    core = signal.samples[edge : n - edge] if n - 2 * edge >= 16 else signal.samples
    rate = signal.sample_rate_hz
    nyquist = rate / 2.0

    freqs = np.fft.rfftfreq(core.size, d=1.0 / rate)
    energy = _weighted_power(core)
    total = float(energy.sum())

    carrier = config.carrier_hz
    band_top = min(carrier + config.cutoff_hz, nyquist)
    below_edge = carrier - 500.0
    e_below = float(energy[_band_mask(freqs, 0.0, below_edge, nyquist)].sum()) if below_edge > 0 else 0.0
    e_inband = float(energy[_band_mask(freqs, carrier, band_top, nyquist)].sum())

    leakage_db = 10.0 * np.log10((e_below + _EPS) / (total + _EPS))
    inband_db = 10.0 * np.log10(e_inband + _EPS)
    occ_lo, occ_hi = _occupancy(freqs, energy, 0.05, 0.95)

    suppression_db = _tone_pair_suppression(freqs, energy, total, carrier, band_top)

    return BandMetrics(
        inband_energy_db=float(inband_db),
        leakage_below_carrier_db=float(leakage_db),
        sideband_suppression_db=suppression_db,
        occupancy_lo_hz=occ_lo,
        occupancy_hi_hz=occ_hi,
    )


def _tone_pair_suppression(
    freqs: np.ndarray,
    energy: np.ndarray,
    total: float,
    carrier: float,
    band_top: float,
    half_width: float = 50.0,
) -> Optional[float]:
    """Image-to-line level in dB for a dominant upper-band tone, else None.

    "Dominant" means at least half the signal energy sits within +/-50 Hz
    of the strongest bin above the carrier. The image is looked for at the
    mirror position below the carrier.
    """
    if total <= 0.0:
        return None
    search = (freqs > carrier + half_width) & (freqs <= band_top)
    if not search.any():
        return None
    peak_idx = int(np.flatnonzero(search)[np.argmax(energy[search])])
    f_line = float(freqs[peak_idx])
    near_line = np.abs(freqs - f_line) <= half_width
    if energy[near_line].sum() < 0.5 * total:
        return None
    offset = f_line - carrier
    f_image = carrier - offset
    if f_image <= 0.0:
        return None
    near_image = np.abs(freqs - f_image) <= half_width
    if not near_image.any():
        return None
    line_e = float(energy[near_line].max())
    image_e = float(energy[near_image].max())
    value = 10.0 * np.log10((image_e + _EPS) / (line_e + _EPS))
    return float(value) if value <= 0.0 else None


def detect(
    signal: SampleBuffer,
    carrier_hz: float = 16000.0,
    band_hz: float = 6000.0,
    ratio_threshold: float = 4.0,
    sustain_ms: float = 200.0,
    frame_ms: float = 50.0,
) -> DetectionVerdict:
    """Flag sustained energy concentrated in [carrier, carrier + band].

    Each 50 ms frame (50% hop) is flagged when its energy in the attack
    band exceeds ``ratio_threshold`` times its energy in the 300-8000 Hz
    speech band. The clip is flagged when some consecutive run of flagged
    frames spans at least ``sustain_ms``. The score (flagged-frame
    fraction) is monotone in the embedded signal's gain.
    """
    if ratio_threshold <= 0:
        raise ValueError(f"ratio_threshold {ratio_threshold} must be positive")
    if sustain_ms <= 0:
        raise ValueError(f"sustain_ms {sustain_ms} must be positive")
    if frame_ms <= 0:
        raise ValueError(f"frame_ms {frame_ms} must be positive")
    nyquist = signal.sample_rate_hz / 2.0
    if carrier_hz <= 0 or band_hz <= 0 or carrier_hz + band_hz > nyquist * (1.0 + 1e-12):
        raise BadBand(
            f"attack band [{carrier_hz}, {carrier_hz + band_hz}] Hz invalid "
            f"for rate {signal.sample_rate_hz} Hz"
        )

    rate = signal.sample_rate_hz
    frame_len = max(2, int(round(frame_ms * rate / 1000.0)))
    hop = max(1, frame_len // 2)
    n = len(signal)
    if n < frame_len:
        return DetectionVerdict(False, 0.0, 0.0, np.zeros(0, dtype=bool))

    n_frames = _frame_starts(n, frame_len, hop)
    frames = sliding_window_view(signal.samples, frame_len)[::hop][:n_frames]
    freqs = np.fft.rfftfreq(frame_len, d=1.0 / rate)
    energy = _weighted_power(frames)

    attack = _band_mask(freqs, carrier_hz, min(carrier_hz + band_hz, nyquist), nyquist)
    speech = _band_mask(freqs, SPEECH_BAND[0], min(SPEECH_BAND[1], nyquist), nyquist)
    e_attack = energy[:, attack].sum(axis=1)
    e_speech = energy[:, speech].sum(axis=1)
    flags = e_attack > ratio_threshold * e_speech

    sustained = _longest_run_ms(flags, frame_len, hop, rate)
    return DetectionVerdict(
        flagged=bool(sustained >= sustain_ms),
        score=float(flags.mean()) if flags.size else 0.0,
        sustained_ms=float(sustained),
        frame_flags=flags,
    )


def _longest_run_ms(flags: np.ndarray, frame_len: int, hop: int, rate: float) -> float:
    best = 0
    current = 0
    for f in flags:
        current = current + 1 if f else 0
        best = max(best, current)
    if best == 0:
        return 0.0
    return ((best - 1) * hop + frame_len) / rate * 1000.0


def render_spectrogram(spec: Spectrogram, out_path) -> None:
    """Write the spectrogram as a binary PGM image.

    Columns are frames (time left to right), rows are frequency bins with
    the highest frequency at the top. dB values map linearly from
    [-120, 0] onto [0, 255].
    """
    db = np.clip(spec.magnitudes_db, DB_FLOOR, 0.0)
    img = np.flipud(db.T)
    pixels = np.round((img - DB_FLOOR) / -DB_FLOOR * 255.0).astype(np.uint8)
    height, width = pixels.shape
    try:
        with open(out_path, "wb") as fh:
            fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
            fh.write(pixels.tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write {out_path}: {exc}") from exc
