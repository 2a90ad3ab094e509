import numpy as np
import pytest
from scipy.io import wavfile

from sscfkit.frontend import AudioBuffer
from sscfkit.sscf import SscfTrack, SubbandSpec


def make_track(values, hop_ms=10.0, frame_ms=25.0, bounds=None):
    """SscfTrack around raw values; bands default to a wide [0, 1e6] range."""
    values = np.asarray(values, dtype=np.float64)
    M = values.shape[1]
    if bounds is None:
        bounds = [(0.0, 1e6)] * M
    bands = [SubbandSpec(m, lo, hi) for m, (lo, hi) in enumerate(bounds)]
    return SscfTrack(values, bands, frame_hop_ms=hop_ms, frame_ms=frame_ms, sample_rate=16000)


def linear_track(start, direction_deg, steps, frames, M=6, plane=1, base=None):
    """Track whose ``plane`` moves in a straight line; other SSCFs are constant."""
    if base is None:
        base = np.array([150.0, 600.0, 1400.0, 2400.0, 3800.0, 6000.0])[:M]
    vals = np.tile(base, (frames, 1)).astype(float)
    th = np.radians(direction_deg)
    t = np.arange(frames) * steps
    vals[:, plane] = start[0] + t * np.cos(th)
    vals[:, plane + 1] = start[1] + t * np.sin(th)
    return make_track(vals)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tone_1k():
    sr = 16000
    t = np.arange(sr) / sr
    return AudioBuffer(0.5 * np.sin(2 * np.pi * 1000 * t), sr)


@pytest.fixture
def wav_path(tmp_path):
    def _write(data, sr=16000, name="x.wav"):
        p = tmp_path / name
        wavfile.write(p, sr, data)
        return p

    return _write
