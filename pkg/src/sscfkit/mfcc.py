"""Baseline MFCCs: triangular mel filterbank, log, orthonormal DCT-II, lifter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

from .errors import ConfigurationError
from .features import FeatureMatrix
from .frontend import PowerSpectrogram
from .sscf import hz_to_mel, mel_to_hz

DEFAULT_LIFTER = 22.0
LOG_FLOOR = 1e-10
# conventional bank size, only for sanity comparisons against the n-filter reading
CONVENTIONAL_NUM_FILTERS = 23


@dataclass
class MelFilterBank:
    weights: np.ndarray
    f_low: float
    f_high: float
    centers_hz: np.ndarray

    @property
    def num_filters(self) -> int:
        return self.weights.shape[0]


def build_mel_filterbank(
    num_filters: int,
    fft_size: int,
    sample_rate: int,
    f_low: float = 0.0,
    f_high: float | None = None,
) -> MelFilterBank:
    """Triangles between ``num_filters + 2`` mel-equidistant points."""
    if num_filters < 1:
        raise ConfigurationError("need at least one mel filter")
    if f_high is None:
        f_high = sample_rate / 2.0
    if not 0.0 <= f_low < f_high <= sample_rate / 2.0:
        raise ConfigurationError(f"invalid filterbank range [{f_low}, {f_high}]")
    points = mel_to_hz(
        np.linspace(hz_to_mel(f_low), hz_to_mel(f_high), num_filters + 2)
    )
    points[0], points[-1] = f_low, f_high
    freqs = np.arange(fft_size // 2 + 1) * sample_rate / fft_size
    weights = np.zeros((num_filters, freqs.size))
    for m in range(num_filters):
        lo, mid, hi = points[m], points[m + 1], points[m + 2]
        rising = (freqs >= lo) & (freqs <= mid)
        falling = (freqs > mid) & (freqs <= hi)
        weights[m, rising] = (freqs[rising] - lo) / (mid - lo)
        weights[m, falling] = (hi - freqs[falling]) / (hi - mid)
        if weights[m].sum() <= 0:
            raise ConfigurationError(
                f"mel filter {m} ({lo:.1f}-{hi:.1f} Hz) covers no FFT bin"
            )
    return MelFilterBank(weights, float(f_low), float(f_high), points[1:-1].copy())


def lifter_weights(num_ceps: int, lifter: float = DEFAULT_LIFTER) -> np.ndarray:
    """``1 + (L/2) sin(pi n / L)``; all ones when ``lifter == 0``."""
    n = np.arange(num_ceps)
    if lifter == 0:
        return np.ones(num_ceps)
    return 1.0 + (lifter / 2.0) * np.sin(np.pi * n / lifter)


def log_filterbank_energies(spectrum: PowerSpectrogram, bank: MelFilterBank) -> np.ndarray:
    if bank.weights.shape[1] != spectrum.power.shape[1]:
        raise ConfigurationError("filterbank and spectrum disagree on the number of bins")
    energies = spectrum.power @ bank.weights.T
    return np.log(np.maximum(energies, LOG_FLOOR))


def cepstra(log_energies: np.ndarray, num_ceps: int, lifter: float = DEFAULT_LIFTER) -> np.ndarray:
    """Orthonormal DCT-II of each row, truncated to ``num_ceps`` and liftered."""
    ceps = dct(log_energies, type=2, norm="ortho", axis=-1)[..., :num_ceps]
    return ceps * lifter_weights(num_ceps, lifter)


def compute_mfcc(
    spectrum: PowerSpectrogram,
    bank: MelFilterBank,
    num_ceps: int,
    lifter: float = DEFAULT_LIFTER,
) -> FeatureMatrix:
    if not 1 <= num_ceps <= bank.num_filters:
        raise ConfigurationError(
            f"num_ceps={num_ceps} must be between 1 and the {bank.num_filters} filters"
        )
    if lifter < 0:
        raise ConfigurationError("lifter must be non-negative")
    ceps = cepstra(log_filterbank_energies(spectrum, bank), num_ceps, lifter)
    hop_ms = 1000.0 * spectrum.hop / spectrum.sample_rate if spectrum.hop else 0.0
    return FeatureMatrix(ceps, "mfcc", frame_hop_ms=hop_ms, sample_rate=spectrum.sample_rate)
