"""End-to-end extraction: audio -> power spectrogram -> SSCF / MFCC features."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, replace

from . import frontend, mfcc, sscf, trajectory
from .errors import ConfigurationError
from .features import FeatureMatrix
from .frontend import AudioBuffer, PowerSpectrogram
from .sscf import SscfTrack

FEATURES = ("sscf", "angle", "polar", "mfcc6", "mfcc13")
_MFCC_CEPS = {"mfcc6": 6, "mfcc13": 13}

_COMMON = ("frame_ms", "hop_ms", "pre_emphasis", "window", "fft_size", "deltas")
_SSCF = ("num_subbands", "f_low", "f_high", "filter_shape", "gamma", "smooth_window")
_RELEVANT = {
    "sscf": _COMMON + _SSCF,
    "angle": _COMMON + _SSCF + ("angle_window", "exclude_sscf0"),
    "polar": _COMMON + _SSCF + ("exclude_sscf0",),
    "mfcc6": _COMMON + ("f_low", "f_high", "lifter", "mfcc_filters"),
    "mfcc13": _COMMON + ("f_low", "f_high", "lifter", "mfcc_filters"),
}


@dataclass(frozen=True)
class ExtractionConfig:
    """Every parameter that influences extracted features.

    ``f_high=None`` means Nyquist, ``fft_size=None`` the next power of two
    above the frame length, ``mfcc_filters=None`` one mel filter per
    cepstral coefficient. ``smooth_window=1`` disables smoothing.
    """

    frame_ms: float = frontend.DEFAULT_FRAME_MS
    hop_ms: float = frontend.DEFAULT_HOP_MS
    pre_emphasis: float = frontend.DEFAULT_PRE_EMPHASIS
    window: str = frontend.DEFAULT_WINDOW
    fft_size: int | None = None
    num_subbands: int = sscf.DEFAULT_NUM_SUBBANDS
    f_low: float = 0.0
    f_high: float | None = None
    filter_shape: str = sscf.DEFAULT_SHAPE
    gamma: float = sscf.DEFAULT_GAMMA
    smooth_window: int = sscf.DEFAULT_SMOOTH_WINDOW
    angle_window: int = trajectory.DEFAULT_ANGLE_WINDOW
    exclude_sscf0: bool = False
    deltas: bool = False
    delta_window: int = trajectory.DEFAULT_DELTA_WINDOW
    lifter: float = mfcc.DEFAULT_LIFTER
    mfcc_filters: int | None = None

    def with_(self, **changes) -> "ExtractionConfig":
        return replace(self, **changes)


def fingerprint(feature: str, config: ExtractionConfig) -> bytes:
    """16-byte digest over the parameters that affect ``feature``."""
    if feature not in _RELEVANT:
        raise ConfigurationError(f"unknown feature {feature!r}")
    params = asdict(config)
    keys = _RELEVANT[feature] + (("delta_window",) if config.deltas else ())
    payload = {"feature": feature, **{k: params[k] for k in keys}}
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.blake2b(blob, digest_size=16).digest()


def spectrogram(audio: AudioBuffer, config: ExtractionConfig) -> PowerSpectrogram:
    emphasized = frontend.pre_emphasize(audio, config.pre_emphasis)
    frames = frontend.frame_signal(emphasized, config.frame_ms, config.hop_ms)
    frames = frontend.apply_window(frames, config.window)
    return frontend.power_spectrum(frames, config.fft_size)


def subbands_for(sample_rate: int, config: ExtractionConfig) -> list[sscf.SubbandSpec]:
    nyquist = sample_rate / 2.0
    f_high = nyquist if config.f_high is None else config.f_high
    return sscf.build_subbands(
        config.num_subbands, config.f_low, f_high, config.filter_shape, config.gamma, nyquist
    )


def track_from_spectrogram(spec: PowerSpectrogram, config: ExtractionConfig) -> SscfTrack:
    track = sscf.compute_sscf(spec, subbands_for(spec.sample_rate, config))
    return sscf.smooth_track(track, config.smooth_window)


def sscf_track(audio: AudioBuffer, config: ExtractionConfig = ExtractionConfig()) -> SscfTrack:
    return track_from_spectrogram(spectrogram(audio, config), config)


def features_from_spectrogram(
    spec: PowerSpectrogram, feature: str, config: ExtractionConfig
) -> FeatureMatrix:
    if feature in _MFCC_CEPS:
        if config.exclude_sscf0:
            raise ConfigurationError("exclude_sscf0 applies to SSCF-based features only")
        ceps = _MFCC_CEPS[feature]
        bank = mfcc.build_mel_filterbank(
            config.mfcc_filters or ceps,
            spec.fft_size,
            spec.sample_rate,
            config.f_low,
            config.f_high,
        )
        out = mfcc.compute_mfcc(spec, bank, ceps, config.lifter)
    else:
        track = track_from_spectrogram(spec, config)
        if feature == "sscf":
            if config.exclude_sscf0:
                raise ConfigurationError("exclude_sscf0 does not apply to raw SSCF output")
            out = FeatureMatrix(
                track.values,
                "sscf",
                frame_hop_ms=track.frame_hop_ms,
                sample_rate=track.sample_rate,
                silent=track.silent,
            )
        elif feature == "angle":
            out = trajectory.transition_angles(track, config.angle_window, config.exclude_sscf0)
        elif feature == "polar":
            out = trajectory.polar_coordinates(track, config.exclude_sscf0)
        else:
            raise ConfigurationError(f"unknown feature {feature!r}; choose from {FEATURES}")
    if config.deltas:
        out = trajectory.append_deltas(out, config.delta_window)
    out.fingerprint = fingerprint(feature, config)
    return out


def extract(
    audio: AudioBuffer, feature: str, config: ExtractionConfig = ExtractionConfig()
) -> FeatureMatrix:
    if feature not in FEATURES:
        raise ConfigurationError(f"unknown feature {feature!r}; choose from {FEATURES}")
    return features_from_spectrogram(spectrogram(audio, config), feature, config)
