"""Signal front end: WAV ingestion, pre-emphasis, framing, windowing and
short-time power spectra."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import (
    AudioFileError,
    ConfigurationError,
    EmptyAudioError,
    SignalTooShortError,
    UnsupportedEncodingError,
)

DEFAULT_SAMPLE_RATE = 16000
DEFAULT_FRAME_MS = 25.0
DEFAULT_HOP_MS = 10.0
DEFAULT_PRE_EMPHASIS = 0.97
DEFAULT_WINDOW = "hamming"

WINDOW_KINDS = ("hamming", "rectangular")


@dataclass
class AudioBuffer:
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("AudioBuffer holds mono samples only")
        if int(self.sample_rate) <= 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate}")
        self.sample_rate = int(self.sample_rate)

    def __len__(self):
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass
class FrameSequence:
    """Frames stacked row-wise: ``frames[t]`` starts at sample ``t * hop``."""

    frames: np.ndarray
    frame_length: int
    hop: int
    sample_rate: int

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    def start_indices(self) -> np.ndarray:
        return np.arange(self.num_frames) * self.hop


@dataclass
class PowerSpectrogram:
    """Squared DFT magnitudes, shape ``(frames, fft_size // 2 + 1)``."""

    power: np.ndarray
    fft_size: int
    sample_rate: int
    hop: int = 0
    frame_length: int = 0

    @property
    def bin_hz(self) -> float:
        return self.sample_rate / self.fft_size

    @property
    def num_frames(self) -> int:
        return self.power.shape[0]

    def bin_frequencies(self) -> np.ndarray:
        return np.arange(self.fft_size // 2 + 1) * self.bin_hz


def load_wav(path) -> AudioBuffer:
    """Read a 16-bit PCM or 32-bit float WAV file as a normalized mono buffer.

    16-bit samples are divided by 32768; multi-channel audio is averaged
    across channels.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            head = fh.read(12)
    except OSError as exc:
        raise AudioFileError(f"cannot open {path}: {exc.strerror or exc}") from exc
    if len(head) < 12 or head[:4] not in (b"RIFF", b"RIFX") or head[8:12] != b"WAVE":
        raise AudioFileError(f"{path} is not a RIFF/WAVE file")

    try:
        sample_rate, data = wavfile.read(path)
    except ValueError as exc:
        raise UnsupportedEncodingError(f"{path}: {exc}") from exc
    except (OSError, EOFError) as exc:
        raise AudioFileError(f"cannot read {path}: {exc}") from exc

    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise UnsupportedEncodingError(
            f"{path}: unsupported sample type {data.dtype} (need 16-bit PCM or 32-bit float)"
        )
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    if samples.size == 0:
        raise EmptyAudioError(f"{path} contains no samples")
    return AudioBuffer(samples, int(sample_rate))


def write_wav(path, audio: AudioBuffer, encoding: str = "pcm16") -> None:
    """Write a mono buffer as 16-bit PCM (clipped to [-1, 1)) or 32-bit float."""
    if encoding == "pcm16":
        data = np.clip(np.round(audio.samples * 32768.0), -32768, 32767).astype(np.int16)
    elif encoding == "float32":
        data = audio.samples.astype(np.float32)
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    wavfile.write(path, audio.sample_rate, data)


def pre_emphasize(audio: AudioBuffer, coeff: float = DEFAULT_PRE_EMPHASIS) -> AudioBuffer:
    """First-order high-pass ``y[n] = x[n] - coeff * x[n-1]`` with ``y[0] = x[0]``."""
    if not 0.0 <= coeff < 1.0:
        raise ValueError(f"pre-emphasis coefficient must lie in [0, 1), got {coeff}")
    if len(audio) == 0:
        raise EmptyAudioError("cannot pre-emphasize an empty buffer")
    x = audio.samples
    y = x.copy()
    if coeff != 0.0:
        y[1:] = x[1:] - coeff * x[:-1]
    return AudioBuffer(y, audio.sample_rate)


def ms_to_samples(ms: float, sample_rate: int) -> int:
    return int(round(ms * sample_rate / 1000.0))


def frame_signal(
    audio: AudioBuffer,
    frame_ms: float = DEFAULT_FRAME_MS,
    hop_ms: float = DEFAULT_HOP_MS,
) -> FrameSequence:
    """Cut the signal into overlapping frames, dropping the incomplete tail."""
    if frame_ms <= 0 or hop_ms <= 0:
        raise ValueError("frame_ms and hop_ms must be positive")
    frame_length = ms_to_samples(frame_ms, audio.sample_rate)
    hop = ms_to_samples(hop_ms, audio.sample_rate)
    if frame_length < 1 or hop < 1:
        raise ValueError("frame or hop rounds to zero samples at this sample rate")
    if hop > frame_length:
        raise ValueError(f"hop ({hop}) larger than frame length ({frame_length})")
    n = len(audio)
    if n < frame_length:
        raise SignalTooShortError(
            f"signal has {n} samples, need at least {frame_length} for one frame"
        )
    count = (n - frame_length) // hop + 1
    idx = np.arange(frame_length)[None, :] + hop * np.arange(count)[:, None]
    return FrameSequence(audio.samples[idx], frame_length, hop, audio.sample_rate)


def hamming(length: int) -> np.ndarray:
    """Symmetric Hamming window ``0.54 - 0.46 cos(2 pi n / (L - 1))``."""
    if length == 1:
        return np.ones(1)
    n = np.arange(length)
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * n / (length - 1))


def apply_window(frames: FrameSequence, kind: str = DEFAULT_WINDOW) -> FrameSequence:
    if kind == "rectangular":
        windowed = frames.frames.copy()
    elif kind == "hamming":
        windowed = frames.frames * hamming(frames.frame_length)[None, :]
    else:
        raise ValueError(f"window kind must be one of {WINDOW_KINDS}, got {kind!r}")
    return FrameSequence(windowed, frames.frame_length, frames.hop, frames.sample_rate)


def next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def power_spectrum(frames: FrameSequence, fft_size: int | None = None) -> PowerSpectrogram:
    """Zero-padded real DFT per frame; returns ``|X[k]|**2`` for k = 0..fft_size/2.

    ``fft_size=None`` picks the next power of two not below the frame length.
    """
    if fft_size is None:
        fft_size = next_pow2(frames.frame_length)
    fft_size = int(fft_size)
    if fft_size < frames.frame_length:
        raise ConfigurationError(
            f"fft_size {fft_size} is smaller than the frame length {frames.frame_length}"
        )
    spec = np.fft.rfft(frames.frames, n=fft_size, axis=1)
    power = spec.real**2 + spec.imag**2
    return PowerSpectrogram(
        power, fft_size, frames.sample_rate, hop=frames.hop, frame_length=frames.frame_length
    )
