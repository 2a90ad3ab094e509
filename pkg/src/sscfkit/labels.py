"""Tab-separated segment labels: ``start_s<TAB>end_s<TAB>label`` per line."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import LabelFileError
from .trajectory import TransitionSegment


@dataclass(frozen=True)
class LabelRow:
    start_s: float
    end_s: float
    label: str
    lineno: int = 0

    def to_segment(self) -> TransitionSegment:
        """Two-character labels such as ``ai`` split into from/to vowels."""
        if len(self.label) == 2:
            return TransitionSegment(self.start_s, self.end_s, self.label[0], self.label[1])
        src, _, dst = self.label.partition("-")
        return TransitionSegment(self.start_s, self.end_s, src, dst)


@dataclass
class LabelFile:
    rows: list[LabelRow] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


def parse_labels(text: str) -> LabelFile:
    rows: list[LabelRow] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3 or not parts[2].strip():
            raise LabelFileError(f"line {lineno}: expected start<TAB>end<TAB>label, got {line!r}")
        try:
            start, end = float(parts[0]), float(parts[1])
        except ValueError:
            raise LabelFileError(f"line {lineno}: times must be numbers, got {line!r}") from None
        if start < 0 or end <= start:
            raise LabelFileError(f"line {lineno}: non-monotone times {start} >= {end}")
        row = LabelRow(start, end, parts[2].strip(), lineno)
        if rows:
            prev = rows[-1]
            if start < prev.start_s:
                raise LabelFileError(
                    f"line {lineno}: rows not time-ordered (starts at {start} before "
                    f"line {prev.lineno} at {prev.start_s})"
                )
            if start < prev.end_s:
                raise LabelFileError(
                    f"lines {prev.lineno} and {lineno} overlap: "
                    f"[{prev.start_s}, {prev.end_s}] and [{start}, {end}]"
                )
        rows.append(row)
    return LabelFile(rows)


def read_labels(path) -> LabelFile:
    return parse_labels(Path(path).read_text())


def format_labels(labels: LabelFile) -> str:
    return "".join(f"{r.start_s:.6f}\t{r.end_s:.6f}\t{r.label}\n" for r in labels)


def write_labels(labels: LabelFile, path) -> None:
    Path(path).write_text(format_labels(labels))
