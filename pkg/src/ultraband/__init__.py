"""Near-ultrasound audio toolkit.

Shift speech-band audio into 16-22 kHz as a single upper sideband, recover
it coherently, measure and detect the high-band energy, hide it in the
silent stretches of ordinary audio, and query a catalog of the matching
attack and defense techniques.
"""

from .analysis import (
    BandMetrics,
    DetectionVerdict,
    Spectrogram,
    band_energy,
    detect,
    measure,
    render_spectrogram,
    stft,
)
from .catalog import (
    ArmTotals,
    CatalogEntry,
    CommandRecord,
    SurveyTotals,
    aggregate_survey,
    load_catalog,
    load_survey,
    pair_defense,
    save_catalog,
    save_survey,
)
from .demodulator import (
    DemodulationConfig,
    demodulate,
    demodulate_file,
    recovered_bandwidth,
)
from .errors import (
    BadAlpha,
    BadBand,
    BadChannel,
    BadCutoff,
    BadRate,
    BadTaps,
    ConfigInvalid,
    EmptyInput,
    EmptySignal,
    IoFailure,
    NoRoom,
    NotWav,
    ParseError,
    RateMismatch,
    RateTooLow,
    SignalTooShort,
    TruncatedFile,
    UltrabandError,
    UnsupportedFormat,
)
from .kernels import (
    FirFilter,
    WindowSpec,
    apply_filter,
    design_lowpass,
    hilbert,
    peak_normalize,
    resample,
    tukey_window,
)
from .modulator import ModulationConfig, load_config, modulate, modulate_file
from .stego import SilenceMap, embed, embed_file, find_silence
from .wavio import PcmClip, SampleBuffer, read_wav, to_float, to_pcm, write_wav

__version__ = "0.1.0"

__all__ = [
    "ArmTotals",
    "BadAlpha",
    "BadBand",
    "BadChannel",
    "BadCutoff",
    "BadRate",
    "BadTaps",
    "BandMetrics",
    "CatalogEntry",
    "CommandRecord",
    "ConfigInvalid",
    "DemodulationConfig",
    "DetectionVerdict",
    "EmptyInput",
    "EmptySignal",
    "FirFilter",
    "IoFailure",
    "ModulationConfig",
    "NoRoom",
    "NotWav",
    "ParseError",
    "PcmClip",
    "RateMismatch",
    "RateTooLow",
    "SampleBuffer",
    "SignalTooShort",
    "SilenceMap",
    "Spectrogram",
    "SurveyTotals",
    "TruncatedFile",
    "UltrabandError",
    "UnsupportedFormat",
    "WindowSpec",
    "aggregate_survey",
    "apply_filter",
    "band_energy",
    "demodulate",
    "demodulate_file",
    "design_lowpass",
    "detect",
    "embed",
    "embed_file",
    "find_silence",
    "hilbert",
    "load_catalog",
    "load_config",
    "load_survey",
    "measure",
    "modulate",
    "modulate_file",
    "pair_defense",
    "peak_normalize",
    "read_wav",
    "render_spectrogram",
    "resample",
    "save_catalog",
    "save_survey",
    "stft",
    "to_float",
    "to_pcm",
    "tukey_window",
    "write_wav",
    "__version__",
]
