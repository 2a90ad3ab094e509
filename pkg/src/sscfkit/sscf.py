"""Spectral subband centroid frequencies over mel-equal subbands."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError
from .frontend import PowerSpectrogram

DEFAULT_NUM_SUBBANDS = 6
DEFAULT_GAMMA = 1.0
DEFAULT_SHAPE = "rectangular"
DEFAULT_SMOOTH_WINDOW = 3

FILTER_SHAPES = ("rectangular", "triangular")


def hz_to_mel(f):
    """``2595 * log10(1 + f / 700)``; accepts scalars or arrays."""
    f_arr = np.asarray(f, dtype=np.float64)
    if np.any(f_arr < 0):
        raise ValueError("frequency must be non-negative")
    mel = 2595.0 * np.log10(1.0 + f_arr / 700.0)
    return float(mel) if mel.ndim == 0 else mel


def mel_to_hz(m):
    m_arr = np.asarray(m, dtype=np.float64)
    if np.any(m_arr < 0):
        raise ValueError("mel value must be non-negative")
    hz = 700.0 * (10.0 ** (m_arr / 2595.0) - 1.0)
    return float(hz) if hz.ndim == 0 else hz


@dataclass(frozen=True)
class SubbandSpec:
    index: int
    low_hz: float
    high_hz: float
    shape: str = DEFAULT_SHAPE
    gamma: float = DEFAULT_GAMMA

    @property
    def mel_center_hz(self) -> float:
        """Frequency of the band's mel midpoint."""
        return mel_to_hz(0.5 * (hz_to_mel(self.low_hz) + hz_to_mel(self.high_hz)))


@dataclass
class SscfTrack:
    """Per-frame centroid frequencies, shape ``(frames, M)`` in Hz.

    ``silent[t]`` marks frames where at least one subband had zero power;
    those entries hold the band's mel midpoint instead of a centroid.
    """

    values: np.ndarray
    subbands: list[SubbandSpec]
    frame_hop_ms: float
    frame_ms: float = 0.0
    sample_rate: int = 0
    silent: np.ndarray = field(default=None)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("SSCF values must be a frames x subbands matrix")
        if self.silent is None:
            self.silent = np.zeros(self.values.shape[0], dtype=bool)
        else:
            self.silent = np.asarray(self.silent, dtype=bool)

    @property
    def num_frames(self) -> int:
        return self.values.shape[0]

    @property
    def num_subbands(self) -> int:
        return self.values.shape[1]

    def frame_times(self) -> np.ndarray:
        """Frame center times in seconds."""
        return (np.arange(self.num_frames) * self.frame_hop_ms + 0.5 * self.frame_ms) / 1000.0

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        low = np.array([b.low_hz for b in self.subbands])
        high = np.array([b.high_hz for b in self.subbands])
        return low, high

    def reversed(self) -> "SscfTrack":
        return replace(self, values=self.values[::-1].copy(), silent=self.silent[::-1].copy())

    def scaled(self, c: float) -> "SscfTrack":
        """Track with every centroid multiplied by ``c`` (band metadata unchanged)."""
        return replace(self, values=self.values * c, silent=self.silent.copy())


def build_subbands(
    num: int = DEFAULT_NUM_SUBBANDS,
    f_low: float = 0.0,
    f_high: float = 8000.0,
    shape: str = DEFAULT_SHAPE,
    gamma: float = DEFAULT_GAMMA,
    nyquist: float | None = None,
) -> list[SubbandSpec]:
    """Split ``[f_low, f_high]`` into ``num`` bands of equal mel width."""
    if num < 1:
        raise ConfigurationError("need at least one subband")
    if not 0.0 <= f_low < f_high:
        raise ConfigurationError(f"invalid band range [{f_low}, {f_high}]")
    if nyquist is not None and f_high > nyquist:
        raise ConfigurationError(f"upper band edge {f_high} Hz exceeds Nyquist {nyquist} Hz")
    if shape not in FILTER_SHAPES:
        raise ConfigurationError(f"filter shape must be one of {FILTER_SHAPES}")
    if gamma < 0:
        raise ConfigurationError("gamma must be non-negative")
    mel_low, mel_high = hz_to_mel(f_low), hz_to_mel(f_high)
    step = (mel_high - mel_low) / num
    edges = mel_to_hz(mel_low + step * np.arange(num + 1))
    # pin the outer edges so they are not perturbed by the mel round trip
    edges[0], edges[-1] = f_low, f_high
    return [
        SubbandSpec(m, float(edges[m]), float(edges[m + 1]), shape, float(gamma))
        for m in range(num)
    ]


def subband_weights(subbands: list[SubbandSpec], freqs: np.ndarray) -> np.ndarray:
    """Filter weights ``w_m(f)`` sampled at the bin center frequencies.

    Rectangular bands partition the bins: lower edge inclusive, upper edge
    exclusive, except the last band which also takes its upper edge.
    """
    weights = np.zeros((len(subbands), freqs.size))
    last = len(subbands) - 1
    for m, band in enumerate(subbands):
        lo, hi = band.low_hz, band.high_hz
        if band.shape == "rectangular":
            inside = (freqs >= lo) & ((freqs < hi) | ((m == last) & (freqs <= hi)))
            weights[m, inside] = 1.0
        elif band.shape == "triangular":
            center = band.mel_center_hz
            rising = (freqs >= lo) & (freqs <= center)
            falling = (freqs > center) & (freqs <= hi)
            weights[m, rising] = (freqs[rising] - lo) / (center - lo)
            weights[m, falling] = (hi - freqs[falling]) / (hi - center)
        else:
            raise ConfigurationError(f"unknown filter shape {band.shape!r}")
        if not weights[m].any():
            raise ConfigurationError(
                f"subband {m} [{lo:.1f}, {hi:.1f}] Hz contains no FFT bin; "
                "use fewer subbands or a larger FFT"
            )
    return weights


def compute_sscf(spectrum: PowerSpectrogram, subbands: list[SubbandSpec]) -> SscfTrack:
    """Centroid ``sum f w P^g / sum w P^g`` of every subband in every frame."""
    nyquist = spectrum.sample_rate / 2.0
    if any(b.high_hz > nyquist + 1e-9 for b in subbands):
        raise ConfigurationError("subband extends beyond the Nyquist frequency")
    gammas = {b.gamma for b in subbands}
    if len(gammas) != 1:
        raise ConfigurationError("all subbands must share one gamma")
    gamma = gammas.pop()

    freqs = spectrum.bin_frequencies()
    weights = subband_weights(subbands, freqs)
    compressed = spectrum.power**gamma if gamma != 1.0 else spectrum.power

    num = compressed @ (weights * freqs[None, :]).T
    den = compressed @ weights.T
    zero = den <= 0.0
    low = np.array([b.low_hz for b in subbands])
    high = np.array([b.high_hz for b in subbands])
    with np.errstate(invalid="ignore", divide="ignore"):
        values = num / den
    midpoints = np.broadcast_to([b.mel_center_hz for b in subbands], values.shape)
    values = np.where(zero, midpoints, values)
    values = np.clip(values, low, high)

    hop_ms = 1000.0 * spectrum.hop / spectrum.sample_rate if spectrum.hop else 0.0
    frame_ms = 1000.0 * spectrum.frame_length / spectrum.sample_rate if spectrum.frame_length else 0.0
    return SscfTrack(
        values,
        list(subbands),
        frame_hop_ms=hop_ms,
        frame_ms=frame_ms,
        sample_rate=spectrum.sample_rate,
        silent=zero.any(axis=1),
    )


def smooth_track(track: SscfTrack, window: int = DEFAULT_SMOOTH_WINDOW) -> SscfTrack:
    """Centered moving average per subband; the window shrinks at the edges.

    A smoothed frame is flagged silent when any frame it averages was.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"smoothing window must be a positive odd integer, got {window}")
    if window == 1:
        return replace(track, values=track.values.copy(), silent=track.silent.copy())
    half = window // 2
    T = track.num_frames
    total = np.zeros_like(track.values)
    count = np.zeros((T, 1))
    silent = np.zeros(T, dtype=bool)
    for k in range(-half, half + 1):
        lo, hi = max(0, -k), min(T, T - k)
        total[lo:hi] += track.values[lo + k : hi + k]
        count[lo:hi] += 1
        silent[lo:hi] |= track.silent[lo + k : hi + k]
    values = total / count
    if track.subbands:
        low, high = track.bounds()
        values = np.clip(values, low, high)
    return replace(track, values=values, silent=silent)
