"""The feature matrix container shared by every feature kind."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FEATURE_KINDS = ("sscf", "angle", "polar", "mfcc")
EMPTY_FINGERPRINT = bytes(16)


@dataclass
class FeatureMatrix:
    """Frames x dims feature values plus the metadata written to feature files.

    ``silent`` (per frame) and ``degenerate`` (per frame and plane) are
    in-memory diagnostics only; they are not serialized.
    """

    values: np.ndarray
    kind: str
    delta_order: int = 0
    frame_hop_ms: float = 10.0
    sample_rate: int = 0
    fingerprint: bytes = EMPTY_FINGERPRINT
    silent: np.ndarray | None = field(default=None, repr=False)
    degenerate: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("feature values must be a frames x dims matrix")
        if self.kind not in FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}")
        if self.delta_order not in (0, 2):
            raise ValueError("delta_order must be 0 or 2")
        if len(self.fingerprint) != 16:
            raise ValueError("fingerprint must be 16 bytes")

    @property
    def num_frames(self) -> int:
        return self.values.shape[0]

    @property
    def dims(self) -> int:
        return self.values.shape[1]

    def voiced_values(self) -> np.ndarray:
        """Rows not flagged silent."""
        if self.silent is None:
            return self.values
        return self.values[~self.silent]
