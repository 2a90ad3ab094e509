import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sscfkit.errors import (
    AudioFileError,
    ConfigurationError,
    EmptyAudioError,
    SignalTooShortError,
    UnsupportedEncodingError,
)
from sscfkit.frontend import (
    AudioBuffer,
    FrameSequence,
    apply_window,
    frame_signal,
    hamming,
    load_wav,
    power_spectrum,
    pre_emphasize,
    write_wav,
)

finite = st.floats(-1.0, 1.0, allow_nan=False)


def brute_force_dft_power(x, n_fft):
    """|sum_n x[n] exp(-2 pi i k n / N)|^2 for k = 0..N/2, by direct summation."""
    x = np.concatenate([x, np.zeros(n_fft - len(x))])
    n = np.arange(n_fft)
    out = []
    for k in range(n_fft // 2 + 1):
        re = np.sum(x * np.cos(2 * np.pi * k * n / n_fft))
        im = -np.sum(x * np.sin(2 * np.pi * k * n / n_fft))
        out.append(re * re + im * im)
    return np.array(out)


class TestLoadWav:
    def test_int16_normalization(self, wav_path):
        buf = load_wav(wav_path(np.array([16384, -16384], dtype=np.int16)))
        np.testing.assert_array_equal(buf.samples, [0.5, -0.5])

    def test_stereo_averaged(self, wav_path):
        buf = load_wav(wav_path(np.array([[1.0, 0.0]], dtype=np.float32)))
        np.testing.assert_array_equal(buf.samples, [0.5])

    def test_header_passthrough(self, wav_path):
        buf = load_wav(wav_path(np.zeros(8000, dtype=np.int16), sr=8000))
        assert buf.sample_rate == 8000
        assert len(buf) == 8000

    def test_float32(self, wav_path):
        data = np.array([0.25, -0.75, 1.0], dtype=np.float32)
        np.testing.assert_array_equal(load_wav(wav_path(data)).samples, data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(AudioFileError):
            load_wav(tmp_path / "nope.wav")

    def test_not_riff(self, tmp_path):
        p = tmp_path / "junk.wav"
        p.write_bytes(b"hello world, not a wav file")
        with pytest.raises(AudioFileError):
            load_wav(p)

    def test_compressed_rejected(self, tmp_path):
        # RIFF/WAVE with an IMA ADPCM (format tag 0x11) fmt chunk
        import struct

        fmt = struct.pack("<HHIIHH", 0x11, 1, 8000, 4055, 256, 4) + b"\x02\x00\xf9\x01"
        data = b"\x00" * 256
        body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + b"data" + struct.pack("<I", len(data)) + data
        p = tmp_path / "adpcm.wav"
        p.write_bytes(b"RIFF" + struct.pack("<I", len(body)) + body)
        with pytest.raises(UnsupportedEncodingError):
            load_wav(p)

    def test_int32_rejected(self, wav_path):
        with pytest.raises(UnsupportedEncodingError):
            load_wav(wav_path(np.zeros(10, dtype=np.int32)))

    def test_empty(self, wav_path):
        with pytest.raises(EmptyAudioError):
            load_wav(wav_path(np.zeros(0, dtype=np.int16)))

    def test_write_read_pcm16(self, tmp_path):
        audio = AudioBuffer(np.array([0.5, -0.5, 0.25]), 16000)
        write_wav(tmp_path / "o.wav", audio)
        np.testing.assert_array_equal(load_wav(tmp_path / "o.wav").samples, audio.samples)


class TestPreEmphasis:
    def test_constant(self):
        y = pre_emphasize(AudioBuffer([1.0, 1.0, 1.0], 16000), 0.97).samples
        np.testing.assert_allclose(y, [1.0, 0.03, 0.03], rtol=0, atol=1e-15)

    def test_impulse(self):
        y = pre_emphasize(AudioBuffer([1.0, 0.0, 0.0], 16000), 0.97).samples
        np.testing.assert_array_equal(y, [1.0, -0.97, 0.0])

    @given(arrays(np.float64, st.integers(1, 200), elements=finite))
    def test_zero_coeff_identity(self, x):
        np.testing.assert_array_equal(pre_emphasize(AudioBuffer(x, 8000), 0.0).samples, x)

    @pytest.mark.parametrize("coeff", [-0.1, 1.0, 1.5])
    def test_coeff_range(self, coeff):
        with pytest.raises(ValueError):
            pre_emphasize(AudioBuffer([1.0], 16000), coeff)


class TestFraming:
    def test_one_second(self):
        frames = frame_signal(AudioBuffer(np.zeros(16000), 16000), 25, 10)
        assert (frames.frame_length, frames.hop, frames.num_frames) == (400, 160, 98)

    def test_exact_one_frame(self):
        assert frame_signal(AudioBuffer(np.zeros(400), 16000)).num_frames == 1

    def test_too_short(self):
        with pytest.raises(SignalTooShortError):
            frame_signal(AudioBuffer(np.zeros(399), 16000))

    @settings(max_examples=50)
    @given(st.integers(400, 5000), st.sampled_from([5.0, 10.0, 15.0, 25.0]))
    def test_tiling(self, n, hop_ms):
        x = np.arange(n, dtype=float)
        fs = frame_signal(AudioBuffer(x, 16000), 25.0, hop_ms)
        starts = fs.start_indices()
        for s, row in zip(starts, fs.frames):
            np.testing.assert_array_equal(row, x[s : s + fs.frame_length])
        consumed = starts[-1] + fs.frame_length
        assert consumed <= n < consumed + fs.hop
        assert fs.num_frames == (n - 400) // fs.hop + 1


class TestWindow:
    def test_rectangular_identity(self, rng):
        fs = FrameSequence(rng.standard_normal((3, 400)), 400, 160, 16000)
        np.testing.assert_array_equal(apply_window(fs, "rectangular").frames, fs.frames)

    def test_hamming_endpoints(self):
        w = hamming(400)
        assert w[0] == pytest.approx(0.08, abs=1e-15)
        assert w[399] == pytest.approx(0.08, abs=1e-15)

    def test_hamming_midpoint(self):
        assert hamming(401)[200] == pytest.approx(1.0, abs=1e-15)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            apply_window(FrameSequence(np.ones((1, 4)), 4, 2, 16000), "hann")


class TestPowerSpectrum:
    def test_zeros(self):
        fs = FrameSequence(np.zeros((2, 400)), 400, 160, 16000)
        ps = power_spectrum(fs)
        assert ps.fft_size == 512 and ps.power.shape == (2, 257)
        assert not ps.power.any()

    def test_dc(self):
        fs = FrameSequence(np.ones((1, 64)), 64, 32, 16000)
        p = power_spectrum(fs, 64).power[0]
        assert p[0] == pytest.approx(64.0**2)
        np.testing.assert_allclose(p[1:], 0.0, atol=1e-20)

    def test_cosine_against_brute_force(self):
        L, k = 128, 9
        x = np.cos(2 * np.pi * k * np.arange(L) / L)
        p = power_spectrum(FrameSequence(x[None, :], L, L, 16000), L).power[0]
        oracle = brute_force_dft_power(x, L)
        np.testing.assert_allclose(p, oracle, rtol=1e-9, atol=1e-9)
        assert np.argmax(p) == k
        assert p[k] == pytest.approx((L / 2) ** 2)
        assert p.sum() - p[k] < 1e-9

    def test_zero_padded_against_brute_force(self, rng):
        x = rng.standard_normal(100)
        p = power_spectrum(FrameSequence(x[None, :], 100, 50, 16000), 128).power[0]
        np.testing.assert_allclose(p, brute_force_dft_power(x, 128), rtol=1e-9, atol=1e-9)

    def test_fft_too_small(self):
        with pytest.raises(ConfigurationError):
            power_spectrum(FrameSequence(np.ones((1, 400)), 400, 160, 16000), 256)

    def test_bin_hz(self):
        ps = power_spectrum(FrameSequence(np.ones((1, 400)), 400, 160, 16000))
        assert ps.bin_hz == 31.25

    @settings(max_examples=50)
    @given(arrays(np.float64, st.tuples(st.integers(1, 4), st.integers(2, 300)), elements=finite))
    def test_parseval_and_nonnegative(self, x):
        T, L = x.shape
        ps = power_spectrum(FrameSequence(x, L, 1, 16000), L)
        assert (ps.power >= 0).all()
        # rebuild the two-sided spectrum from the one-sided bins
        interior = ps.power[:, 1 : (L + 1) // 2]
        two_sided = ps.power[:, 0] + 2 * interior.sum(axis=1)
        if L % 2 == 0:
            two_sided = two_sided + ps.power[:, L // 2]
        energy = L * (x**2).sum(axis=1)
        np.testing.assert_allclose(two_sided, energy, rtol=1e-9, atol=1e-12)
