"""Trajectory features on SSCF planes: transition angles, polar coordinates,
regression deltas, and vowel-to-vowel transition analysis.

Plane ``i`` is the (SSCF_i, SSCF_{i+1}) plane. All angles are in degrees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidTrackError
from .features import FeatureMatrix
from .sscf import SscfTrack

DEFAULT_ANGLE_WINDOW = 1
DEFAULT_DELTA_WINDOW = 2
DEFAULT_TRIM_FRACTION = 0.1


@dataclass(frozen=True)
class TransitionSegment:
    start_s: float
    end_s: float
    label_from: str = ""
    label_to: str = ""

    def __post_init__(self):
        if not 0.0 <= self.start_s < self.end_s:
            raise ValueError(f"invalid segment [{self.start_s}, {self.end_s}]")

    @property
    def label(self) -> str:
        return f"{self.label_from}{self.label_to}"

    def reversed(self, duration_s: float) -> "TransitionSegment":
        """The same interval on the time-reversed utterance."""
        return TransitionSegment(
            max(0.0, duration_s - self.end_s),
            duration_s - self.start_s,
            self.label_to,
            self.label_from,
        )


@dataclass
class TransitionAngleReport:
    angles: np.ndarray
    frames_used: int
    trim_fraction: float
    label: str = ""


def _planes(num_subbands: int, exclude_sscf0: bool) -> range:
    first = 1 if exclude_sscf0 else 0
    if num_subbands - 1 - first < 1:
        raise InvalidTrackError(
            f"{num_subbands} subbands leave no SSCF plane"
            + (" once SSCF0 is excluded" if exclude_sscf0 else "")
        )
    return range(first, num_subbands - 1)


def _direction(dx: np.ndarray, dy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full-quadrant direction in (-180, 180]; zero motion maps to 0 and is flagged."""
    still = (dx == 0) & (dy == 0)
    ang = np.degrees(np.arctan2(dy, dx))
    ang = np.where(ang <= -180.0, 180.0, ang)
    return np.where(still, 0.0, ang), still


def transition_angles(
    track: SscfTrack, window_n: int = DEFAULT_ANGLE_WINDOW, exclude_sscf0: bool = False
) -> FeatureMatrix:
    """Direction of SSCF movement over ``window_n`` frames in every plane.

    The first ``window_n`` frames repeat the first computed frame so the
    output has one row per input frame.
    """
    if window_n < 1:
        raise ValueError("window_n must be a positive integer")
    planes = _planes(track.num_subbands, exclude_sscf0)
    T = track.num_frames
    if T < window_n + 1:
        raise InvalidTrackError(f"need at least {window_n + 1} frames, track has {T}")
    v = track.values
    d = v[window_n:] - v[:-window_n]
    idx = np.array(planes)
    ang, still = _direction(d[:, idx], d[:, idx + 1])
    ang = np.concatenate([np.repeat(ang[:1], window_n, axis=0), ang])
    still = np.concatenate([np.repeat(still[:1], window_n, axis=0), still])
    silent = track.silent.copy()
    silent[window_n:] |= track.silent[:-window_n]
    silent[:window_n] = silent[window_n]
    return FeatureMatrix(
        ang,
        "angle",
        frame_hop_ms=track.frame_hop_ms,
        sample_rate=track.sample_rate,
        silent=silent,
        degenerate=still,
    )


def polar_coordinates(track: SscfTrack, exclude_sscf0: bool = False) -> FeatureMatrix:
    """Per-frame position in each plane: angle ``atan(SSCF_{i+1} / SSCF_i)`` and
    radius ``hypot(SSCF_i, SSCF_{i+1})``. Layout: all angles, then all radii."""
    planes = _planes(track.num_subbands, exclude_sscf0)
    v = track.values
    if not np.all(v > 0):
        raise InvalidTrackError("polar coordinates need strictly positive SSCF values")
    idx = np.array(planes)
    x, y = v[:, idx], v[:, idx + 1]
    angle = np.degrees(np.arctan(y / x))
    radius = np.hypot(x, y)
    return FeatureMatrix(
        np.hstack([angle, radius]),
        "polar",
        frame_hop_ms=track.frame_hop_ms,
        sample_rate=track.sample_rate,
        silent=track.silent.copy(),
    )


def polar_inverse(angle_deg, radius) -> tuple[np.ndarray, np.ndarray]:
    """Recover ``(SSCF_i, SSCF_{i+1})`` from a plane's polar pair."""
    theta = np.radians(np.asarray(angle_deg, dtype=np.float64))
    r = np.asarray(radius, dtype=np.float64)
    return r * np.cos(theta), r * np.sin(theta)


def regression_delta(values: np.ndarray, window: int = DEFAULT_DELTA_WINDOW) -> np.ndarray:
    """``sum_n n (c[t+n] - c[t-n]) / (2 sum_n n^2)`` with clamped edges."""
    if window < 1:
        raise ValueError("regression window must be a positive integer")
    values = np.asarray(values, dtype=np.float64)
    T = values.shape[0]
    padded = np.concatenate(
        [np.repeat(values[:1], window, axis=0), values, np.repeat(values[-1:], window, axis=0)]
    )
    acc = np.zeros_like(values)
    for n in range(1, window + 1):
        acc += n * (padded[window + n : window + n + T] - padded[window - n : window - n + T])
    return acc / (2.0 * sum(n * n for n in range(1, window + 1)))


def append_deltas(features: FeatureMatrix, reg_window: int = DEFAULT_DELTA_WINDOW) -> FeatureMatrix:
    """Stack ``[static, delta, delta-delta]`` along the feature axis."""
    if features.delta_order != 0:
        raise InvalidTrackError("deltas already appended")
    if features.num_frames < 1:
        raise InvalidTrackError("cannot take deltas of an empty feature matrix")
    d1 = regression_delta(features.values, reg_window)
    d2 = regression_delta(d1, reg_window)
    degenerate = features.degenerate
    return FeatureMatrix(
        np.hstack([features.values, d1, d2]),
        features.kind,
        delta_order=2,
        frame_hop_ms=features.frame_hop_ms,
        sample_rate=features.sample_rate,
        fingerprint=features.fingerprint,
        silent=None if features.silent is None else features.silent.copy(),
        degenerate=degenerate,
    )


def analyze_transition(
    track: SscfTrack,
    seg: TransitionSegment,
    trim_fraction: float = DEFAULT_TRIM_FRACTION,
) -> TransitionAngleReport:
    """Net displacement angle per plane over the central part of a segment.

    ``trim_fraction`` is removed from each end, so the default 0.1 keeps the
    middle 80% of the transition.
    """
    if not 0.0 <= trim_fraction < 0.5:
        raise ValueError("trim_fraction must lie in [0, 0.5)")
    if track.num_subbands < 2:
        raise InvalidTrackError("need at least two subbands")
    times = track.frame_times()
    duration = ((track.num_frames - 1) * track.frame_hop_ms + track.frame_ms) / 1000.0
    if seg.end_s > duration + 1e-9:
        raise InvalidTrackError(
            f"segment ends at {seg.end_s:.3f} s beyond the track's {duration:.3f} s"
        )
    span = seg.end_s - seg.start_s
    lo, hi = seg.start_s + trim_fraction * span, seg.end_s - trim_fraction * span
    eps = 1e-9
    inside = np.flatnonzero((times >= lo - eps) & (times <= hi + eps))
    if inside.size < 2:
        raise InvalidTrackError(
            f"segment {seg.label or ''} [{seg.start_s:.3f}, {seg.end_s:.3f}] s covers "
            f"{inside.size} frame(s) after trimming, need 2"
        )
    first, last = inside[0], inside[-1]
    disp = track.values[last] - track.values[first]
    angles, _ = _direction(disp[:-1], disp[1:])
    return TransitionAngleReport(angles, int(inside.size), trim_fraction, seg.label)


def _angle_array(a) -> np.ndarray:
    return np.asarray(a.angles if isinstance(a, TransitionAngleReport) else a, dtype=np.float64)


def pair_complementarity(a, b) -> np.ndarray:
    """Per-plane deviation from 180 degrees of the angle sum of a transition pair.

    Signed directions are first reduced to their inclination from the
    SSCF_i axis, ``|angle|`` in [0, 180], which is how the angle of a
    transition and of its reversal are drawn against the same axis.
    """
    a, b = _angle_array(a), _angle_array(b)
    if a.shape != b.shape:
        raise ValueError(f"plane count mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    total = np.abs(a) + np.abs(b)
    total = np.mod(total, 360.0)
    total = np.where(total == 0.0, 360.0, total)
    return np.abs(total - 180.0)


def continuity_profile(features: FeatureMatrix) -> np.ndarray:
    """Largest absolute frame-to-frame jump in each dimension."""
    if features.num_frames < 2:
        raise InvalidTrackError("continuity needs at least two frames")
    return np.abs(np.diff(features.values, axis=0)).max(axis=0)
