import numpy as np
import pytest
from dataclasses import replace
from scipy.signal import find_peaks

from sscfkit import pipeline, trajectory
from sscfkit.errors import ConfigurationError
from sscfkit.synthesis import (
    SpeakerProfile,
    VowelSpec,
    glide_interval,
    scale_speaker,
    synthesize_transition,
    synthesize_vowel,
)

A = VowelSpec("a", ((700, 60), (1200, 80), (2600, 100), (3500, 120)), 100.0)
I = VowelSpec("i", ((270, 60), (2290, 90), (3010, 120), (3700, 150)), 100.0)
U = VowelSpec("u", ((300, 60), (870, 90), (2240, 120), (3400, 150)), 100.0)
NEUTRAL = SpeakerProfile("ref")


def average_spectrum(audio, n_fft=4096):
    x = audio.samples
    hop = n_fft // 4
    win = np.hanning(n_fft)
    frames = [x[s : s + n_fft] * win for s in range(0, len(x) - n_fft + 1, hop)]
    power = np.mean([np.abs(np.fft.rfft(f)) ** 2 for f in frames], axis=0)
    return np.fft.rfftfreq(n_fft, 1 / audio.sample_rate), power


def envelope_peaks(freqs, power, f0, prominence_db=3.0):
    """Formant estimates: prominent maxima of the harmonic amplitude envelope."""
    df = freqs[1] - freqs[0]
    harmonics = np.arange(f0, freqs[-1] - f0, f0)
    amps = []
    for h in harmonics:
        lo, hi = int((h - f0 / 4) / df), int((h + f0 / 4) / df) + 1
        amps.append(power[lo:hi].max())
    env_db = 10 * np.log10(np.array(amps))
    idx, _ = find_peaks(env_db, prominence=prominence_db)
    return harmonics[idx]


class TestScaleSpeaker:
    def test_identity(self):
        assert scale_speaker(A, NEUTRAL) == A

    def test_formant_scale(self):
        out = scale_speaker(replace(A, formants=((500, 60), (1500, 80))), SpeakerProfile("f", 1.2))
        assert out.formants[0] == pytest.approx((600.0, 60.0))

    def test_f0_scale(self):
        out = scale_speaker(replace(A, f0=120.0), SpeakerProfile("f", 1.0, 11 / 6))
        assert out.f0 == pytest.approx(220.0)
        assert out.bandwidths.tolist() == A.bandwidths.tolist()

    def test_invalid_specs(self):
        with pytest.raises(ValueError):
            VowelSpec("x", ((1000, 50), (900, 50)), 100.0)
        with pytest.raises(ValueError):
            VowelSpec("x", ((1000, 50),), 0.0)
        with pytest.raises(ValueError):
            SpeakerProfile("x", 0.0)


class TestSynthesizeVowel:
    @pytest.mark.parametrize("profile", [NEUTRAL, SpeakerProfile("f", 1.2, 0.6)])
    def test_formant_peaks(self, profile):
        audio = synthesize_vowel(A, profile, 1.0)
        scaled = scale_speaker(A, profile)
        peaks = envelope_peaks(*average_spectrum(audio), scaled.f0)
        assert len(peaks) <= len(scaled.formants) + 1
        for center in scaled.centers:
            assert np.min(np.abs(peaks - center)) <= 50.0

    def test_peak_normalized(self):
        audio = synthesize_vowel(A, NEUTRAL, 0.3)
        assert np.max(np.abs(audio.samples)) == pytest.approx(0.5)
        assert len(audio) == 4800

    def test_unit_scale_bit_exact(self):
        a = synthesize_vowel(A, NEUTRAL, 0.3)
        b = synthesize_vowel(scale_speaker(A, NEUTRAL), SpeakerProfile("other"), 0.3)
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_amplitude_normalized_away(self):
        a = synthesize_vowel(A, NEUTRAL, 0.3)
        b = synthesize_vowel(replace(A, amplitude=2.0), NEUTRAL, 0.3)
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_formant_above_nyquist(self):
        with pytest.raises(ConfigurationError):
            synthesize_vowel(A, SpeakerProfile("big", 3.0), 0.1, 8000)


class TestSynthesizeTransition:
    def test_same_vowel_matches_steady(self):
        a = synthesize_transition(A, A, NEUTRAL, 0.5)
        b = synthesize_vowel(A, NEUTRAL, 0.5)
        _, pa = average_spectrum(a, 1024)
        _, pb = average_spectrum(b, 1024)
        assert np.corrcoef(pa, pb)[0, 1] > 0.99

    def test_a_to_i_directions(self):
        audio = synthesize_transition(A, I, NEUTRAL, 0.6)
        track = pipeline.sscf_track(audio)
        n = track.num_frames
        head = track.values[2 : n // 6].mean(axis=0)
        tail = track.values[-n // 6 : -2].mean(axis=0)
        assert tail[1] < head[1]  # SSCF1 falls with F1 700 -> 270
        assert tail[2] > head[2]  # SSCF2 rises with F2 1200 -> 2290

    @pytest.mark.parametrize("pair", [(A, I), (I, U)])
    def test_reversal_complementary_in_sscf1_sscf2(self, pair):
        # 0.495 s tiles exactly into 25 ms frames at a 10 ms hop, so the
        # frames of the reversed utterance mirror the forward ones
        v1, v2 = pair
        duration = 0.495
        fwd = pipeline.sscf_track(synthesize_transition(v1, v2, NEUTRAL, duration))
        rev = pipeline.sscf_track(synthesize_transition(v2, v1, NEUTRAL, duration))
        seg = trajectory.TransitionSegment(*glide_interval(duration))
        a = trajectory.analyze_transition(fwd, seg)
        b = trajectory.analyze_transition(rev, seg.reversed(duration))
        assert trajectory.pair_complementarity(a, b)[1] < 2.0

    def test_glide_interval(self):
        assert glide_interval(0.5) == pytest.approx((0.1, 0.4))

    def test_formant_count_mismatch(self):
        short = VowelSpec("x", ((500, 60), (1500, 80)), 100.0)
        with pytest.raises(ConfigurationError):
            synthesize_transition(A, short, NEUTRAL, 0.2)
