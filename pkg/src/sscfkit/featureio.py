"""Feature file formats.

``bin``: magic ``SSCF1`` followed by a little-endian header
(kind id u8, dims u32, frames u32, hop_ms f64, sample_rate u32,
fingerprint 16 bytes) and frames x dims float64 values, row-major.
Bit 7 of the kind id marks appended deltas.

``csv``: ``# key: value`` header lines, then one frame per row.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FeatureFormatError, HeaderMismatchError, TruncatedFeatureFileError
from .features import FeatureMatrix

MAGIC = b"SSCF1"
HEADER = struct.Struct("<BIIdI16s")
HEADER_SIZE = len(MAGIC) + HEADER.size
KIND_IDS = {"sscf": 0, "angle": 1, "polar": 2, "mfcc": 3}
_KIND_NAMES = {v: k for k, v in KIND_IDS.items()}
DELTA_BIT = 0x80
_U32_MAX = 2**32 - 1

CSV_KEYS = ("kind", "dims", "frames", "delta_order", "hop_ms", "sample_rate", "fingerprint")


def _check_sizes(features: FeatureMatrix) -> None:
    if features.dims > _U32_MAX or features.num_frames > _U32_MAX:
        raise OverflowError("dims or frame count does not fit in 32 bits")
    if not 0 <= features.sample_rate <= _U32_MAX:
        raise OverflowError("sample rate does not fit in 32 bits")


def encode_bin(features: FeatureMatrix) -> bytes:
    _check_sizes(features)
    kind_id = KIND_IDS[features.kind] | (DELTA_BIT if features.delta_order else 0)
    header = HEADER.pack(
        kind_id,
        features.dims,
        features.num_frames,
        float(features.frame_hop_ms),
        int(features.sample_rate),
        bytes(features.fingerprint),
    )
    payload = np.ascontiguousarray(features.values, dtype="<f8").tobytes()
    return MAGIC + header + payload


def decode_bin(blob: bytes) -> FeatureMatrix:
    if not blob.startswith(MAGIC):
        raise FeatureFormatError("bad magic bytes: not an SSCF1 feature file")
    if len(blob) < HEADER_SIZE:
        raise TruncatedFeatureFileError(
            f"truncated header: expected {HEADER_SIZE} bytes, got {len(blob)}"
        )
    kind_id, dims, frames, hop_ms, sample_rate, fp = HEADER.unpack_from(blob, len(MAGIC))
    base = kind_id & ~DELTA_BIT
    if base not in _KIND_NAMES:
        raise FeatureFormatError(f"unknown feature kind id {kind_id}")
    expected = HEADER_SIZE + 8 * dims * frames
    if len(blob) < expected:
        raise TruncatedFeatureFileError(
            f"truncated payload: expected {expected} bytes, got {len(blob)}"
        )
    if len(blob) > expected:
        raise HeaderMismatchError(
            f"header announces {frames} x {dims} values ({expected} bytes) "
            f"but file has {len(blob)} bytes"
        )
    values = np.frombuffer(blob, dtype="<f8", offset=HEADER_SIZE, count=dims * frames)
    return FeatureMatrix(
        values.reshape(frames, dims).astype(np.float64),
        _KIND_NAMES[base],
        delta_order=2 if kind_id & DELTA_BIT else 0,
        frame_hop_ms=hop_ms,
        sample_rate=sample_rate,
        fingerprint=fp,
    )


def encode_csv(features: FeatureMatrix) -> str:
    _check_sizes(features)
    head = {
        "kind": features.kind,
        "dims": features.dims,
        "frames": features.num_frames,
        "delta_order": features.delta_order,
        "hop_ms": repr(float(features.frame_hop_ms)),
        "sample_rate": features.sample_rate,
        "fingerprint": bytes(features.fingerprint).hex(),
    }
    lines = [f"# {k}: {head[k]}" for k in CSV_KEYS]
    lines += [",".join(f"{v:.17g}" for v in row) for row in features.values]
    return "\n".join(lines) + "\n"


def decode_csv(text: str) -> FeatureMatrix:
    head: dict[str, str] = {}
    rows: list[list[float]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if not sep:
                raise FeatureFormatError(f"line {lineno}: header line without ':'")
            head[key.strip()] = value.strip()
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise FeatureFormatError(f"line {lineno}: {exc}") from None

    missing = [k for k in CSV_KEYS if k not in head]
    if missing:
        raise FeatureFormatError(f"csv header missing keys: {', '.join(missing)}")
    try:
        dims, frames = int(head["dims"]), int(head["frames"])
        delta_order = int(head["delta_order"])
        hop_ms, sample_rate = float(head["hop_ms"]), int(head["sample_rate"])
        fp = bytes.fromhex(head["fingerprint"])
    except ValueError as exc:
        raise FeatureFormatError(f"bad csv header value: {exc}") from None
    if head["kind"] not in KIND_IDS:
        raise FeatureFormatError(f"unknown feature kind {head['kind']!r}")
    if len(rows) < frames:
        raise TruncatedFeatureFileError(f"expected {frames} rows, got {len(rows)}")
    if len(rows) > frames:
        raise HeaderMismatchError(f"header announces {frames} rows, file has {len(rows)}")
    bad = [i for i, r in enumerate(rows) if len(r) != dims]
    if bad:
        raise HeaderMismatchError(
            f"row {bad[0] + 1} has {len(rows[bad[0]])} values, header announces {dims}"
        )
    if len(fp) != 16:
        raise FeatureFormatError("fingerprint must be 16 bytes")
    values = np.array(rows, dtype=np.float64).reshape(frames, dims)
    try:
        return FeatureMatrix(
            values, head["kind"], delta_order=delta_order, frame_hop_ms=hop_ms,
            sample_rate=sample_rate, fingerprint=fp,
        )
    except ValueError as exc:
        raise FeatureFormatError(str(exc)) from None


def write_features(features: FeatureMatrix, path, format: str = "bin") -> None:
    path = Path(path)
    if format == "bin":
        path.write_bytes(encode_bin(features))
    elif format == "csv":
        path.write_text(encode_csv(features))
    else:
        raise ValueError(f"unknown feature file format {format!r}")


def read_features(path) -> FeatureMatrix:
    """Read either format, sniffed from the first bytes."""
    blob = Path(path).read_bytes()
    if blob.startswith(MAGIC):
        return decode_bin(blob)
    if blob.startswith(b"#"):
        try:
            text = blob.decode("utf-8")
        except UnicodeDecodeError:
            raise FeatureFormatError("csv feature file is not valid UTF-8") from None
        return decode_csv(text)
    raise FeatureFormatError("unrecognized feature file: neither SSCF1 magic nor csv header")
