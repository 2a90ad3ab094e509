"""Source-filter vowel synthesis: impulse train through cascaded two-pole
resonators, with optional linear formant/f0 glides between two vowels."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import lfilter, lfilter_zi

from .errors import ConfigurationError
from .frontend import AudioBuffer

PEAK_LEVEL = 0.5
# formant parameters are refreshed once per block during glides
BLOCK = 16
GLIDE_START, GLIDE_END = 0.2, 0.8


@dataclass(frozen=True)
class VowelSpec:
    label: str
    formants: tuple[tuple[float, float], ...]
    f0: float
    amplitude: float = 1.0

    def __post_init__(self):
        object.__setattr__(
            self, "formants", tuple((float(c), float(b)) for c, b in self.formants)
        )
        centers = [c for c, _ in self.formants]
        if not centers:
            raise ValueError(f"vowel {self.label!r} has no formants")
        if any(b <= a for a, b in zip(centers, centers[1:])):
            raise ValueError(f"vowel {self.label!r}: formant centers must increase")
        if self.f0 <= 0:
            raise ValueError(f"vowel {self.label!r}: f0 must be positive")

    @property
    def centers(self) -> np.ndarray:
        return np.array([c for c, _ in self.formants])

    @property
    def bandwidths(self) -> np.ndarray:
        return np.array([b for _, b in self.formants])

    @classmethod
    def from_dict(cls, d: dict) -> "VowelSpec":
        return cls(d["label"], tuple(tuple(f) for f in d["formants"]), d["f0"], d.get("amplitude", 1.0))


@dataclass(frozen=True)
class SpeakerProfile:
    name: str
    formant_scale: float = 1.0
    f0_scale: float = 1.0

    def __post_init__(self):
        if self.formant_scale <= 0 or self.f0_scale <= 0:
            raise ValueError(f"profile {self.name!r}: scales must be positive")


def scale_speaker(spec: VowelSpec, profile: SpeakerProfile) -> VowelSpec:
    """Scale formant centers and f0; bandwidths are left as they are."""
    return replace(
        spec,
        formants=tuple((c * profile.formant_scale, b) for c, b in spec.formants),
        f0=spec.f0 * profile.f0_scale,
    )


def resonator_coefficients(freq: float, bandwidth: float, sample_rate: int):
    """Unity-DC-gain two-pole resonator ``y = A x + B y[-1] + C y[-2]``."""
    T = 1.0 / sample_rate
    C = -np.exp(-2.0 * np.pi * bandwidth * T)
    B = 2.0 * np.exp(-np.pi * bandwidth * T) * np.cos(2.0 * np.pi * freq * T)
    A = 1.0 - B - C
    return A, B, C


def impulse_train(f0: np.ndarray, sample_rate: int) -> np.ndarray:
    """One unit impulse per pitch period; ``f0`` may vary per sample."""
    phase = np.cumsum(f0 / sample_rate)
    periods = np.floor(phase - phase[0])
    src = np.zeros(f0.size)
    src[0] = 1.0
    src[1:][np.diff(periods) > 0] = 1.0
    return src


def _check_nyquist(spec: VowelSpec, sample_rate: int) -> None:
    nyquist = sample_rate / 2.0
    if spec.centers.max() >= nyquist:
        raise ConfigurationError(
            f"vowel {spec.label!r}: formant at {spec.centers.max():.1f} Hz is not below "
            f"Nyquist ({nyquist:.0f} Hz)"
        )


def _glide_weight(n: int) -> np.ndarray:
    t = np.arange(n) / max(n - 1, 1)
    return np.clip((t - GLIDE_START) / (GLIDE_END - GLIDE_START), 0.0, 1.0)


def _render(src, centers, bandwidths, sample_rate) -> np.ndarray:
    """Cascade of resonators whose parameters are ``(samples, formants)`` arrays."""
    out = src
    for k in range(centers.shape[1]):
        state = None
        y = np.empty_like(out)
        for start in range(0, out.size, BLOCK):
            stop = min(start + BLOCK, out.size)
            mid = (start + stop - 1) // 2
            A, B, C = resonator_coefficients(centers[mid, k], bandwidths[mid, k], sample_rate)
            b, a = [A, 0.0, 0.0], [1.0, -B, -C]
            if state is None:
                state = lfilter_zi(b, a) * 0.0
            y[start:stop], state = lfilter(b, a, out[start:stop], zi=state)
        out = y
    return out


def synthesize_transition(
    v1: VowelSpec,
    v2: VowelSpec,
    profile: SpeakerProfile,
    duration_s: float,
    sample_rate: int = 16000,
) -> AudioBuffer:
    """Glide from ``v1`` to ``v2`` over the middle 60% of ``duration_s``."""
    s1, s2 = scale_speaker(v1, profile), scale_speaker(v2, profile)
    _check_nyquist(s1, sample_rate)
    _check_nyquist(s2, sample_rate)
    if len(s1.formants) != len(s2.formants):
        raise ConfigurationError("both vowels need the same number of formants")
    n = int(round(duration_s * sample_rate))
    if n < 1:
        raise ConfigurationError("duration too short")
    w = _glide_weight(n)[:, None]
    centers = (1 - w) * s1.centers[None, :] + w * s2.centers[None, :]
    bandwidths = (1 - w) * s1.bandwidths[None, :] + w * s2.bandwidths[None, :]
    f0 = (1 - w[:, 0]) * s1.f0 + w[:, 0] * s2.f0
    amp = (1 - w[:, 0]) * s1.amplitude + w[:, 0] * s2.amplitude
    y = _render(impulse_train(f0, sample_rate) * amp, centers, bandwidths, sample_rate)
    peak = np.max(np.abs(y))
    if peak > 0:
        y = y * (PEAK_LEVEL / peak)
    return AudioBuffer(y, sample_rate)


def synthesize_vowel(
    spec: VowelSpec, profile: SpeakerProfile, duration_s: float, sample_rate: int = 16000
) -> AudioBuffer:
    return synthesize_transition(spec, spec, profile, duration_s, sample_rate)


def glide_interval(duration_s: float) -> tuple[float, float]:
    """Start and end (s) of the formant glide inside a synthesized transition."""
    return GLIDE_START * duration_s, GLIDE_END * duration_s
