"""Coherent recovery of speech from the near-ultrasound band.

Demodulation is the product detector: multiply by twice the carrier, then
low-pass. The factor of two puts a unit-amplitude component back at unit
amplitude. For digital loopback the carrier phase is already aligned; for
external recordings an exhaustive 16-candidate phase search is available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigInvalid, EmptySignal
from .kernels import apply_filter, design_lowpass, peak_normalize
from .wavio import SampleBuffer, read_wav, to_float, to_pcm, write_wav

#: Candidate carrier phases tried when ``phase_search`` is requested.
PHASE_CANDIDATES = 16

#: Recovered peaks below this fraction of the input peak are treated as
#: "nothing there": the residue is returned unscaled instead of being
#: amplified to full scale.
_RECOVERY_FLOOR = 0.01


@dataclass(frozen=True)
class DemodulationConfig:
    """Carrier and recovery filter settings; defaults mirror the modulator."""

    carrier_hz: float = 16000.0
    recovery_cutoff_hz: float = 6000.0
    filter_taps: int = 255

    def validate(self, rate_hz: float) -> None:
        if not self.carrier_hz > 0:
            raise ConfigInvalid(f"carrier_hz {self.carrier_hz} must be positive")
        if not self.recovery_cutoff_hz > 0:
            raise ConfigInvalid(f"recovery_cutoff_hz {self.recovery_cutoff_hz} must be positive")
        taps = self.filter_taps
        if int(taps) != taps or taps < 3 or int(taps) % 2 == 0:
            raise ConfigInvalid(f"filter_taps {taps} must be an odd integer >= 3")
        if self.carrier_hz + self.recovery_cutoff_hz > rate_hz / 2:
            raise ConfigInvalid(
                f"carrier {self.carrier_hz} Hz + cutoff {self.recovery_cutoff_hz} Hz "
                f"does not fit under Nyquist ({rate_hz / 2} Hz)"
            )


def demodulate(
    signal: SampleBuffer,
    config: DemodulationConfig = DemodulationConfig(),
    phase_search: bool = False,
) -> SampleBuffer:
    """Recover baseband audio from a high-band signal.

    With ``phase_search`` the detector tries 16 evenly spaced carrier
    phases and keeps the one with the most output energy; useful when the
    input is a recording whose first sample does not line up with the
    transmitter's carrier. Output is peak normalized unless the recovered
    level is negligible next to the input (then the residue is returned
    as-is, so silence stays silent and out-of-band input stays tiny).
    """
    if len(signal) == 0:
        raise EmptySignal("cannot demodulate an empty signal")
    config.validate(signal.sample_rate_hz)

    lpf = design_lowpass(config.recovery_cutoff_hz, signal.sample_rate_hz, config.filter_taps)
    n = np.arange(len(signal))
    base_phase = 2.0 * np.pi * config.carrier_hz * n / signal.sample_rate_hz

    def run(offset: float) -> SampleBuffer:
        product = 2.0 * signal.samples * np.cos(base_phase + offset)
        return apply_filter(lpf, SampleBuffer(product, signal.sample_rate_hz))

    if phase_search:
        candidates = [run(2.0 * np.pi * k / PHASE_CANDIDATES) for k in range(PHASE_CANDIDATES)]
        energies = [float(np.dot(c.samples, c.samples)) for c in candidates]
        recovered = candidates[int(np.argmax(energies))]
    else:
        recovered = run(0.0)

    in_peak = float(np.max(np.abs(signal.samples)))
    # Judge the recovered level away from the filter's zero-padding
    # warm-up: the leading/trailing group-delay spans hold onset
    # transients that would trip the gate when there is nothing to
    # recover.
    d = lpf.group_delay
    core = recovered.samples[d:-d] if len(recovered) > 2 * d else recovered.samples
    out_peak = float(np.max(np.abs(core))) if core.size else 0.0
    if out_peak > _RECOVERY_FLOOR * in_peak and out_peak > 0.0:
        return peak_normalize(recovered, 1.0)
    return recovered


def recovered_bandwidth(signal: SampleBuffer) -> float:
    """Smallest frequency below which 95% of the signal's energy lies.

    Useful as a one-number judgment of how much of the original band
    survived a modulate/transmit/demodulate trip.
    """
    if len(signal) == 0:
        raise EmptySignal("no bandwidth for an empty signal")
    spectrum = np.fft.rfft(signal.samples)
    power = np.abs(spectrum) ** 2
    weights = np.full(power.size, 2.0)
    weights[0] = 1.0
    if len(signal) % 2 == 0:
        weights[-1] = 1.0
    energy = weights * power
    total = energy.sum()
    if total == 0.0:
        return 0.0
    freqs = np.fft.rfftfreq(len(signal), d=1.0 / signal.sample_rate_hz)
    cum = np.cumsum(energy)
    idx = int(np.searchsorted(cum, 0.95 * total))
    return float(freqs[min(idx, freqs.size - 1)])


def demodulate_file(
    in_path,
    out_path,
    config: DemodulationConfig = DemodulationConfig(),
    phase_search: bool = False,
) -> float:
    """Demodulate channel 0 of a WAV file, write the result, and report
    the recovered bandwidth in Hz (measured on the samples written)."""
    clip = read_wav(in_path)
    recovered = demodulate(to_float(clip, channel=0), config, phase_search=phase_search)
    write_wav(out_path, to_pcm(recovered))
    verify = to_float(read_wav(out_path), channel=0)
    return recovered_bandwidth(verify)
