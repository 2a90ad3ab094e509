"""Command-line entry point: ``sscfkit {extract,analyze,synth,eval,plot-data}``.

Exit codes: 0 success, 2 usage error, 3 IO error, 4 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import experiment, featureio, frontend, labels, pipeline, synthesis, trajectory
from .errors import AudioFileError, SscfError
from .pipeline import ExtractionConfig
from .sscf import SscfTrack

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DATA = 0, 2, 3, 4

SSCF_FEATURES = ("sscf", "angle", "polar")
PLOT_COLUMNS = (
    "frame_index",
    "time_s",
    "plane",
    "sscf_i",
    "sscf_ip1",
    "transition_angle_deg",
    "polar_angle_deg",
    "polar_radius_hz",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sscfkit", description="SSCF trajectory feature toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="extract one feature kind from a WAV file")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--feature", required=True, choices=pipeline.FEATURES)
    p.add_argument("--deltas", action="store_true", help="append delta and delta-delta")
    p.add_argument("--exclude-sscf0", action="store_true", help="drop the SSCF0-SSCF1 plane")
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--subbands", type=int, default=None)
    p.add_argument("--hop-ms", type=float, default=None)
    p.add_argument("--no-smooth", action="store_true", help="skip the 3-frame moving average")
    p.add_argument("--output", required=True, type=Path)
    p.add_argument("--format", choices=("csv", "bin"), default=None,
                   help="default: csv for a .csv output path, bin otherwise")

    p = sub.add_parser("analyze", help="transition angles of labeled vowel-to-vowel segments")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--labels", required=True, type=Path)
    p.add_argument("--trim", type=float, default=trajectory.DEFAULT_TRIM_FRACTION,
                   help="fraction trimmed from each end of a segment (default 0.1)")
    p.add_argument("--report", required=True, type=Path)

    p = sub.add_parser("synth", help="synthesize the configured vowels and transitions")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--output-dir", required=True, type=Path)

    p = sub.add_parser("eval", help="run the matched vs. cross-speaker experiment")
    p.add_argument("--config", type=Path, default=None, help="default: shipped config")
    p.add_argument("--report", required=True, type=Path)

    p = sub.add_parser("plot-data", help="per-frame SSCF plane coordinates as csv")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--planes", default="1,2", help="semicolon-separated index pairs, e.g. '0,1;1,2'")
    p.add_argument("--output", required=True, type=Path)
    return parser


def extraction_config(args) -> ExtractionConfig:
    """Map ``extract`` flags onto an :class:`ExtractionConfig`."""
    is_sscf = args.feature in SSCF_FEATURES
    if not is_sscf:
        used = [flag for flag, on in (
            ("--exclude-sscf0", args.exclude_sscf0),
            ("--gamma", args.gamma is not None),
            ("--subbands", args.subbands is not None),
            ("--no-smooth", args.no_smooth),
        ) if on]
        if used:
            raise UsageError(f"{', '.join(used)} cannot be combined with --feature {args.feature}")
    if args.exclude_sscf0 and args.feature == "sscf":
        raise UsageError("--exclude-sscf0 requires --feature angle or polar")
    changes = {"deltas": args.deltas, "exclude_sscf0": args.exclude_sscf0}
    if args.gamma is not None:
        if args.gamma < 0:
            raise UsageError("--gamma must be non-negative")
        changes["gamma"] = args.gamma
    if args.subbands is not None:
        if args.subbands < 2:
            raise UsageError("--subbands must be at least 2")
        changes["num_subbands"] = args.subbands
    if args.hop_ms is not None:
        if args.hop_ms <= 0:
            raise UsageError("--hop-ms must be positive")
        changes["hop_ms"] = args.hop_ms
    if args.no_smooth:
        changes["smooth_window"] = 1
    return ExtractionConfig().with_(**changes)


def _cmd_extract(args) -> int:
    config = extraction_config(args)
    fmt = args.format or ("csv" if args.output.suffix.lower() == ".csv" else "bin")
    audio = frontend.load_wav(args.input)
    features = pipeline.extract(audio, args.feature, config)
    featureio.write_features(features, args.output, fmt)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    if not 0.0 <= args.trim < 0.5:
        raise UsageError("--trim must lie in [0, 0.5)")
    audio = frontend.load_wav(args.input)
    rows = labels.read_labels(args.labels)
    track = pipeline.sscf_track(audio)
    segments = []
    by_label = {}
    for row in rows:
        rep = trajectory.analyze_transition(track, row.to_segment(), args.trim)
        by_label[row.label] = rep
        segments.append({
            "label": row.label,
            "start_s": row.start_s,
            "end_s": row.end_s,
            "frames_used": rep.frames_used,
            "angles_deg": rep.angles.tolist(),
        })
    pairs = []
    for lab, rep in by_label.items():
        rev = lab[::-1]
        if len(lab) == 2 and lab < rev and rev in by_label:
            dev = trajectory.pair_complementarity(rep, by_label[rev])
            pairs.append({"pair": [lab, rev], "deviation_from_180_deg": dev.tolist()})
    report = {"trim_fraction": args.trim, "segments": segments, "complementary_pairs": pairs}
    args.report.write_text(json.dumps(report, indent=2))
    return EXIT_OK


def _cmd_synth(args) -> int:
    config = experiment.load_config(args.config)
    out = args.output_dir
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for profile in (config.male, config.female):
        for vowel in config.vowels:
            audio = synthesis.synthesize_vowel(vowel, profile, config.duration_s, config.sample_rate)
            name = f"{profile.name}_{vowel.label}.wav"
            frontend.write_wav(out / name, audio)
            manifest.append({"file": name, "profile": profile.name, "vowel": vowel.label})
        for a, b in config.transitions:
            audio = synthesis.synthesize_transition(
                config.vowel(a), config.vowel(b), profile, config.duration_s, config.sample_rate
            )
            stem = f"{profile.name}_{a}{b}"
            frontend.write_wav(out / f"{stem}.wav", audio)
            start, end = synthesis.glide_interval(config.duration_s)
            labels.write_labels(
                labels.LabelFile([labels.LabelRow(start, end, f"{a}{b}")]), out / f"{stem}.lab"
            )
            manifest.append({"file": f"{stem}.wav", "labels": f"{stem}.lab",
                             "profile": profile.name, "transition": f"{a}{b}"})
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    return EXIT_OK


def _cmd_eval(args) -> int:
    config = experiment.load_config(args.config)
    report = experiment.cross_speaker_experiment(config)
    args.report.write_text(report.to_json())
    return EXIT_OK


def parse_planes(text: str) -> list[tuple[int, int]]:
    planes = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        try:
            i, j = (int(tok) for tok in chunk.split(","))
        except ValueError:
            raise UsageError(f"--planes: cannot parse {chunk!r}, expected 'i,j'") from None
        if i < 0 or j < 0 or i == j:
            raise UsageError(f"--planes: invalid pair {i},{j}")
        planes.append((i, j))
    if not planes:
        raise UsageError("--planes: no plane given")
    return planes


def plot_rows(track: SscfTrack, planes):
    """Yield one csv row per frame and plane."""
    times = track.frame_times()
    for i, j in planes:
        if max(i, j) >= track.num_subbands:
            raise UsageError(f"--planes: track has only {track.num_subbands} SSCFs")
        pair = SscfTrack(
            track.values[:, [i, j]],
            [track.subbands[i], track.subbands[j]],
            track.frame_hop_ms,
            track.frame_ms,
            track.sample_rate,
            track.silent,
        )
        trans = trajectory.transition_angles(pair).values[:, 0]
        polar = trajectory.polar_coordinates(pair).values
        for t in range(track.num_frames):
            yield (t, f"{times[t]:.6f}", f"{i}-{j}", pair.values[t, 0], pair.values[t, 1],
                   trans[t], polar[t, 0], polar[t, 1])


def _cmd_plot_data(args) -> int:
    planes = parse_planes(args.planes)
    audio = frontend.load_wav(args.input)
    track = pipeline.sscf_track(audio)
    rows = list(plot_rows(track, planes))
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PLOT_COLUMNS)
        for t, time_s, plane, *values in rows:
            writer.writerow([t, time_s, plane, *(f"{float(v):.10g}" for v in values)])
    return EXIT_OK


_COMMANDS = {
    "extract": _cmd_extract,
    "analyze": _cmd_analyze,
    "synth": _cmd_synth,
    "eval": _cmd_eval,
    "plot-data": _cmd_plot_data,
}


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AudioFileError, OSError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SscfError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run_cli())
