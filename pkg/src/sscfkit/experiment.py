"""Synthetic matched vs. cross-speaker frame classification benchmark.

Vowel tokens are synthesized for two speaker profiles, every feature kind
is extracted, and a nearest-class-centroid classifier is trained on one
population and tested on another.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

import numpy as np

from . import pipeline, trajectory
from .errors import ConfigurationError
from .features import FeatureMatrix
from .pipeline import ExtractionConfig
from .synthesis import SpeakerProfile, VowelSpec, synthesize_transition, synthesize_vowel

# harness feature name -> (extractor feature, deltas appended)
FEATURE_KINDS = {
    "angle": ("angle", False),
    "polar": ("polar", False),
    "polar_d": ("polar", True),
    "mfcc6": ("mfcc6", False),
    "mfcc6_d": ("mfcc6", True),
    "mfcc13": ("mfcc13", False),
    "mfcc13_d": ("mfcc13", True),
}
CONDITIONS = ("matched", "cross_male", "cross_female")
CROSS_CONDITIONS = ("cross_male", "cross_female")


@dataclass
class EvalConfig:
    vowels: list[VowelSpec]
    male: SpeakerProfile = SpeakerProfile("male", 1.0, 1.0)
    female: SpeakerProfile = SpeakerProfile("female", 1.18, 1.8)
    features: tuple[str, ...] = tuple(FEATURE_KINDS)
    sample_rate: int = 16000
    duration_s: float = 0.4
    tokens_per_vowel: int = 6
    seed: int = 0
    formant_jitter: float = 0.0
    f0_jitter: float = 0.0
    f0_declination: float = 0.0
    transitions: list[tuple[str, str]] = field(default_factory=list)
    extraction: ExtractionConfig = field(default_factory=ExtractionConfig)

    def __post_init__(self):
        if len(self.vowels) < 3:
            raise ConfigurationError("the experiment needs at least three vowels")
        if self.tokens_per_vowel < 2 or self.tokens_per_vowel % 2:
            raise ConfigurationError("tokens_per_vowel must be an even number >= 2")
        unknown = set(self.features) - set(FEATURE_KINDS)
        if unknown:
            raise ConfigurationError(f"unknown feature kinds: {sorted(unknown)}")
        labels = [v.label for v in self.vowels]
        if len(set(labels)) != len(labels):
            raise ConfigurationError("vowel labels must be unique")
        for a, b in self.transitions:
            if a not in labels or b not in labels:
                raise ConfigurationError(f"transition {a}{b} names an unknown vowel")

    def vowel(self, label: str) -> VowelSpec:
        return next(v for v in self.vowels if v.label == label)

    @classmethod
    def from_dict(cls, d: dict) -> "EvalConfig":
        d = dict(d)
        profiles = d.pop("profiles", {})
        kwargs = {"vowels": [VowelSpec.from_dict(v) for v in d.pop("vowels")]}
        for role in ("male", "female"):
            if role in profiles:
                kwargs[role] = SpeakerProfile(name=role, **profiles[role])
        jitter = d.pop("jitter", {})
        for key in ("formant", "f0"):
            if key in jitter:
                kwargs[f"{key}_jitter"] = float(jitter[key])
        if "extraction" in d:
            kwargs["extraction"] = ExtractionConfig(**d.pop("extraction"))
        if "transitions" in d:
            kwargs["transitions"] = [tuple(t) for t in d.pop("transitions")]
        if "features" in d:
            kwargs["features"] = tuple(d.pop("features"))
        allowed = {f.name for f in fields(cls)}
        extra = set(d) - allowed
        if extra:
            raise ConfigurationError(f"unknown config keys: {sorted(extra)}")
        kwargs.update(d)
        return cls(**kwargs)


def load_config(path=None) -> EvalConfig:
    """Read a JSON experiment config; ``None`` loads the shipped default."""
    if path is None:
        text = resources.files("sscfkit").joinpath("data/default_eval.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from None
    try:
        return EvalConfig.from_dict(raw)
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"invalid config: {exc}") from None


class NearestCentroid:
    """Euclidean nearest-class-centroid on train-standardized dimensions."""

    def fit(self, X: np.ndarray, y: np.ndarray) -> "NearestCentroid":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        self.classes_ = np.unique(y)
        if self.classes_.size < 2:
            raise ConfigurationError("need at least two classes to classify")
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std > 0, std, 1.0)
        Z = (X - self.mean_) / self.scale_
        self.centroids_ = np.stack([Z[y == c].mean(axis=0) for c in self.classes_])
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        Z = (np.asarray(X, dtype=np.float64) - self.mean_) / self.scale_
        d2 = ((Z[:, None, :] - self.centroids_[None, :, :]) ** 2).sum(axis=2)
        return self.classes_[np.argmin(d2, axis=1)]


@dataclass
class ClassificationResult:
    accuracy: float
    correct: int
    total: int
    train_frames: int
    classes: list[str]


def _stack(collection) -> tuple[np.ndarray, np.ndarray]:
    xs, ys = [], []
    for label, fm in collection:
        vals = fm.voiced_values() if isinstance(fm, FeatureMatrix) else np.asarray(fm)
        xs.append(vals)
        ys.extend([label] * len(vals))
    if not xs:
        return np.zeros((0, 0)), np.array([])
    return np.vstack(xs), np.array(ys)


def classify_frames(train, test, expected_classes=None) -> ClassificationResult:
    """Frame accuracy of a centroid classifier.

    ``train`` and ``test`` are iterables of ``(label, FeatureMatrix)``; silent
    frames are skipped. ``expected_classes`` lets the caller insist that every
    listed class has training frames.
    """
    Xtr, ytr = _stack(train)
    Xte, yte = _stack(test)
    present = set(ytr.tolist())
    if expected_classes is not None:
        missing = sorted(set(expected_classes) - present)
        if missing:
            raise ConfigurationError(f"no training frames for class(es) {missing}")
    missing_test = sorted(set(yte.tolist()) - present)
    if missing_test:
        raise ConfigurationError(f"no training frames for class(es) {missing_test}")
    clf = NearestCentroid().fit(Xtr, ytr)
    if Xte.shape[0] == 0:
        raise ConfigurationError("test collection has no frames")
    correct = int((clf.predict(Xte) == yte).sum())
    return ClassificationResult(
        correct / yte.size, correct, int(yte.size), int(ytr.size), clf.classes_.tolist()
    )


@dataclass
class ExperimentReport:
    accuracy: dict[str, dict[str, float]]
    counts: dict[str, dict[str, dict[str, int]]]
    seed: int
    config_summary: dict

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "config": self.config_summary,
            "accuracy": self.accuracy,
            "counts": self.counts,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def token_specs(config: EvalConfig, rng: np.random.Generator) -> list[tuple[VowelSpec, int]]:
    """Jittered copies of every vowel, ``tokens_per_vowel`` each, in a fixed order."""
    out = []
    for vowel in config.vowels:
        for k in range(config.tokens_per_vowel):
            fj = 1.0 + config.formant_jitter * rng.standard_normal(len(vowel.formants))
            pj = 1.0 + config.f0_jitter * rng.standard_normal()
            centers = np.sort(vowel.centers * fj)
            spec = VowelSpec(
                vowel.label,
                tuple(zip(centers, vowel.bandwidths)),
                vowel.f0 * pj,
                vowel.amplitude,
            )
            out.append((spec, k))
    return out


def _token_audio(spec: VowelSpec, profile: SpeakerProfile, config: EvalConfig):
    if config.f0_declination:
        end = VowelSpec(spec.label, spec.formants, spec.f0 * (1 - config.f0_declination), spec.amplitude)
        return synthesize_transition(spec, end, profile, config.duration_s, config.sample_rate)
    return synthesize_vowel(spec, profile, config.duration_s, config.sample_rate)


def extract_population(config: EvalConfig, profile: SpeakerProfile, rng) -> dict:
    """``{feature kind: [(label, token index, FeatureMatrix), ...]}`` for one speaker."""
    out: dict[str, list] = {kind: [] for kind in config.features}
    static_cfg = config.extraction.with_(deltas=False)
    for spec, k in token_specs(config, rng):
        audio = _token_audio(spec, profile, config)
        spec_gram = pipeline.spectrogram(audio, static_cfg)
        cache: dict[str, FeatureMatrix] = {}
        for kind in config.features:
            base, deltas = FEATURE_KINDS[kind]
            if base not in cache:
                cache[base] = pipeline.features_from_spectrogram(spec_gram, base, static_cfg)
            fm = cache[base]
            if deltas:
                fm = trajectory.append_deltas(fm, config.extraction.delta_window)
            out[kind].append((spec.label, k, fm))
    return out


def cross_speaker_experiment(config: EvalConfig) -> ExperimentReport:
    """Matched (pooled) vs. cross-speaker accuracy for every feature kind.

    Tokens ``0 .. n/2-1`` of each speaker form its training half and the rest
    its test half. ``matched`` trains on both training halves and tests on
    both test halves; ``cross_male`` trains on every male token and tests on
    the female test half; ``cross_female`` is the mirror image. All training
    sets therefore hold the same number of tokens.
    """
    rng = np.random.default_rng(config.seed)
    male = extract_population(config, config.male, rng)
    female = extract_population(config, config.female, rng)
    half = config.tokens_per_vowel // 2
    labels = [v.label for v in config.vowels]

    def part(pop, kind, train):
        return [(lab, fm) for lab, k, fm in pop[kind] if (k < half) == train]

    def every(pop, kind):
        return [(lab, fm) for lab, _, fm in pop[kind]]

    accuracy: dict[str, dict[str, float]] = {}
    counts: dict[str, dict[str, dict[str, int]]] = {}
    for kind in config.features:
        splits = {
            "matched": (
                part(male, kind, True) + part(female, kind, True),
                part(male, kind, False) + part(female, kind, False),
            ),
            "cross_male": (every(male, kind), part(female, kind, False)),
            "cross_female": (every(female, kind), part(male, kind, False)),
        }
        accuracy[kind], counts[kind] = {}, {}
        for cond in CONDITIONS:
            res = classify_frames(*splits[cond], expected_classes=labels)
            accuracy[kind][cond] = res.accuracy
            counts[kind][cond] = {
                "train_frames": res.train_frames,
                "test_frames": res.total,
                "correct": res.correct,
            }
    summary = {
        "vowels": labels,
        "male": vars(config.male),
        "female": vars(config.female),
        "tokens_per_vowel": config.tokens_per_vowel,
        "duration_s": config.duration_s,
        "sample_rate": config.sample_rate,
        "formant_jitter": config.formant_jitter,
        "f0_jitter": config.f0_jitter,
        "f0_declination": config.f0_declination,
    }
    return ExperimentReport(accuracy, counts, config.seed, summary)
