"""Hiding a high-band payload inside the silent stretches of a host clip.

The host is scanned in short frames for regions whose RMS sits under a
threshold; the payload is mixed into the start of the longest such region.
Because the payload lives above 16 kHz and the host is quiet there anyway,
the audible band of the host barely moves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .demodulator import recovered_bandwidth
from .errors import EmptySignal, NoRoom, RateTooLow
from .kernels import resample
from .wavio import SampleBuffer, read_wav, to_float, to_pcm, write_wav


@dataclass(frozen=True)
class SilenceMap:
    """Silent regions of a host signal as [start, end) sample spans."""

    regions: Tuple[Tuple[int, int], ...]
    rms_threshold: float
    min_region_ms: float

    def longest(self) -> Tuple[int, int]:
        """Longest region; earliest wins a tie. Raises NoRoom when empty."""
        if not self.regions:
            raise NoRoom("no silent region found")
        return max(self.regions, key=lambda span: (span[1] - span[0], -span[0]))


def find_silence(
    host: SampleBuffer,
    rms_threshold: float = 0.01,
    frame_ms: float = 20.0,
    min_region_ms: float = 500.0,
) -> SilenceMap:
    """Locate stretches of the host quieter than ``rms_threshold``.

    The host is cut into ``frame_ms`` blocks (a trailing partial block
    counts too, so an all-silent file yields one region spanning every
    sample); consecutive quiet blocks merge into regions, and regions
    shorter than ``min_region_ms`` are dropped.
    """
    if len(host) == 0:
        raise EmptySignal("cannot scan an empty host")
    if rms_threshold <= 0:
        raise ValueError(f"rms_threshold {rms_threshold} must be positive")
    if frame_ms <= 0 or min_region_ms <= 0:
        raise ValueError("frame_ms and min_region_ms must be positive")

    rate = host.sample_rate_hz
    frame_len = max(1, int(round(frame_ms * rate / 1000.0)))
    n = len(host)

    regions: List[Tuple[int, int]] = []
    run_start = None
    for start in range(0, n, frame_len):
        block = host.samples[start : start + frame_len]
        quiet = float(np.sqrt(np.mean(block**2))) < rms_threshold
        if quiet and run_start is None:
            run_start = start
        elif not quiet and run_start is not None:
            regions.append((run_start, start))
            run_start = None
    if run_start is not None:
        regions.append((run_start, n))

    min_samples = min_region_ms * rate / 1000.0
    kept = tuple(r for r in regions if r[1] - r[0] >= min_samples)
    return SilenceMap(regions=kept, rms_threshold=rms_threshold, min_region_ms=min_region_ms)


def embed(
    host: SampleBuffer,
    payload: SampleBuffer,
    silence: SilenceMap,
    gain: float = 0.5,
) -> SampleBuffer:
    """Mix ``gain * payload`` into the start of the longest silent region.

    The payload is resampled to the host rate first. Samples outside the
    insertion span are returned bit-identical; the mixed span is clamped to
    [-1, 1]. Raises RateTooLow when the host rate cannot represent the
    payload's band and NoRoom when no region is long enough.
    """
    if len(host) == 0 or len(payload) == 0:
        raise EmptySignal("host and payload must be nonempty")
    if not 0.0 < gain <= 1.0:
        raise ValueError(f"gain {gain} outside (0, 1]")

    payload_top = recovered_bandwidth(payload)
    if host.sample_rate_hz < 2.0 * payload_top:
        raise RateTooLow(
            f"host rate {host.sample_rate_hz} Hz cannot carry content up to "
            f"{payload_top:.0f} Hz"
        )
    fitted = resample(payload, host.sample_rate_hz)

    start, end = silence.longest()
    if end - start < len(fitted):
        raise NoRoom(
            f"longest silent region holds {end - start} samples, payload needs {len(fitted)}"
        )

    out = host.samples.copy()
    span = slice(start, start + len(fitted))
    out[span] = np.clip(out[span] + gain * fitted.samples, -1.0, 1.0)
    return SampleBuffer(out, host.sample_rate_hz)


def embed_file(
    host_path,
    payload_path,
    out_path,
    gain: float = 0.5,
    rms_threshold: float = 0.01,
    frame_ms: float = 20.0,
    min_region_ms: float = 500.0,
) -> dict:
    """File-level embed: returns a report dict describing what went where."""
    host = to_float(read_wav(host_path), channel=0)
    payload = to_float(read_wav(payload_path), channel=0)
    silence = find_silence(host, rms_threshold, frame_ms, min_region_ms)
    mixed = embed(host, payload, silence, gain)
    write_wav(out_path, to_pcm(mixed))

    start, _ = silence.longest()
    payload_len = len(resample(payload, host.sample_rate_hz))
    rate = host.sample_rate_hz
    return {
        "host_rate_hz": rate,
        "gain": gain,
        "rms_threshold": rms_threshold,
        "min_region_ms": min_region_ms,
        "silent_regions": [
            {
                "start_sample": int(s),
                "end_sample": int(e),
                "start_s": s / rate,
                "duration_s": (e - s) / rate,
            }
            for s, e in silence.regions
        ],
        "insertion": {
            "start_sample": int(start),
            "end_sample": int(start + payload_len),
            "start_s": start / rate,
            "duration_s": payload_len / rate,
        },
    }
