"""Command-line front end: transcode, validate, corpus, bench, difftest.

Files are raw byte streams.  There is no BOM detection or generation;
endianness is always an explicit flag, and big-endian UTF-16 is handled
by byte-swapping around the little-endian engines, which preserves code
unit offsets in diagnostics.

Exit codes: 0 success, 1 malformed input (or a failed campaign or a
benchmark output mismatch), 2 usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from pathlib import Path

from laneutf.bench import compare_engines
from laneutf.corpus import SCRIPT_CLASSES, CorpusSpec, generate
from laneutf.difftest import run_campaign
from laneutf.engine import (
    DIRECTIONS,
    UTF8_TO_UTF16,
    UTF16_TO_UTF8,
    parse_engine,
    swap_utf16_byte_order,
    transcode_to_bytes,
    validate,
)

__all__ = ["main", "build_parser"]

FORMATS = ("utf8", "utf16le", "utf16be")


class CliUsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must not be negative")
    return value


def _engine_argument(name: str | None):
    if name is None:
        return None
    try:
        return parse_engine(name)
    except ValueError as exc:
        raise CliUsageError(str(exc)) from None


def _direction_for(source: str, target: str) -> str:
    supported = ({"utf8", "utf16le"}, {"utf8", "utf16be"})
    if source == target or {source, target} not in supported:
        raise CliUsageError(
            f"unsupported conversion {source} -> {target}; "
            "supported pairs are utf8<->utf16le and utf8<->utf16be"
        )
    return UTF8_TO_UTF16 if source == "utf8" else UTF16_TO_UTF8


def _unit_name(direction: str) -> str:
    return "byte" if direction == UTF8_TO_UTF16 else "word"


def cmd_transcode(args) -> int:
    direction = _direction_for(args.source_format, args.target_format)
    engine = _engine_argument(args.engine)
    data = Path(args.infile).read_bytes()
    if direction == UTF16_TO_UTF8 and len(data) % 2:
        print(
            f"{args.infile}: malformed input: odd byte length ({len(data)})",
            file=sys.stderr,
        )
        Path(args.outfile).write_bytes(b"")
        return 1
    if args.source_format == "utf16be":
        data = swap_utf16_byte_order(data)
    outcome, payload = transcode_to_bytes(direction, data, engine=engine)
    if args.target_format == "utf16be":
        payload = swap_utf16_byte_order(payload)
    Path(args.outfile).write_bytes(payload)
    if not outcome.ok:
        print(
            f"{args.infile}: malformed input at {_unit_name(direction)} "
            f"offset {outcome.error_offset}",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_validate(args) -> int:
    direction = UTF8_TO_UTF16 if args.format == "utf8" else UTF16_TO_UTF8
    engine = _engine_argument(args.engine)
    data = Path(args.infile).read_bytes()
    if direction == UTF16_TO_UTF8 and len(data) % 2:
        print(f"{args.infile}: malformed: odd byte length ({len(data)})")
        return 1
    if args.format == "utf16be":
        data = swap_utf16_byte_order(data)
    outcome = validate(direction, data, engine=engine)
    if outcome.ok:
        print(f"{args.infile}: OK ({outcome.consumed} code units)")
        return 0
    print(
        f"{args.infile}: malformed at {_unit_name(direction)} "
        f"offset {outcome.error_offset}"
    )
    return 1


def cmd_corpus(args) -> int:
    spec = CorpusSpec(args.script_class, args.size_bytes, seed=args.seed)
    utf8, utf16 = generate(spec)
    payload = utf8 if args.encoding == "utf8" else utf16
    Path(args.out).write_bytes(payload)
    print(
        f"{args.out}: {len(payload)} bytes "
        f"({args.encoding}, {args.script_class}, seed {args.seed})"
    )
    return 0


def _parse_corpus_argument(text: str):
    parts = text.split(":")
    if len(parts) not in (2, 3) or parts[0] not in SCRIPT_CLASSES:
        return None
    try:
        size = int(parts[1])
        seed = int(parts[2]) if len(parts) == 3 else 0
    except ValueError:
        return None
    return CorpusSpec(parts[0], size, seed=seed)


def _bench_input(source: str, direction: str) -> tuple[bytes, str]:
    path = Path(source)
    if path.exists():
        return path.read_bytes(), source
    spec = _parse_corpus_argument(source)
    if spec is None:
        raise CliUsageError(
            f"--in {source!r} is neither a file nor CLASS:SIZE[:SEED] "
            f"with CLASS in {', '.join(SCRIPT_CLASSES)}"
        )
    utf8, utf16 = generate(spec)
    return (utf8 if direction == UTF8_TO_UTF16 else utf16), source


def _human_bench_line(report) -> str:
    noisy = "" if report.gap_is_small else " (noisy)"
    return (
        f"{report.label} [{report.engine}] {report.direction}: "
        f"min {report.min_seconds * 1e3:.3f} ms, "
        f"mean {report.mean_seconds * 1e3:.3f} ms, "
        f"{report.bytes_per_second / 1e6:.1f} MB/s, "
        f"{report.chars_per_second / 1e6:.1f} Mchars/s, "
        f"gap {report.gap_fraction * 100:.1f}%{noisy}"
    )


def cmd_bench(args) -> int:
    engines = [_engine_argument(name) for name in (args.engine or [None])]
    status = 0
    for source in args.infile:
        data, label = _bench_input(source, args.direction)
        reports, outputs_match = compare_engines(
            args.direction,
            data,
            engines,
            repetitions=args.iterations,
            warmup=args.warmup,
            label=label,
        )
        for report in reports:
            print(_human_bench_line(report))
        record = {
            "label": label,
            "direction": args.direction,
            "outputs_match": outputs_match,
            "reports": [report.to_json_dict() for report in reports],
        }
        print(json.dumps(record))
        if not outputs_match:
            print(f"{label}: engine outputs differ", file=sys.stderr)
            status = 1
    return status


def cmd_difftest(args) -> int:
    report = run_campaign(
        seed=args.seed,
        cases_per_direction=args.cases,
        max_len=args.max_len,
        stop_on_first=not args.keep_going,
    )
    print(report.summary())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laneutf",
        description="UTF-8/UTF-16 transcoding tools built on lane-width "
        "parameterized vector engines checked against a scalar reference.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transcode", help="convert a file between formats")
    t.add_argument("--from", dest="source_format", required=True, choices=FORMATS)
    t.add_argument("--to", dest="target_format", required=True, choices=FORMATS)
    t.add_argument("--engine", default=None, help="scalar, emulated-N, or native")
    t.add_argument("--in", dest="infile", required=True, help="input file")
    t.add_argument("--out", dest="outfile", required=True, help="output file")
    t.set_defaults(func=cmd_transcode)

    v = sub.add_parser("validate", help="check a file without writing output")
    v.add_argument("--format", required=True, choices=FORMATS)
    v.add_argument("--engine", default=None)
    v.add_argument("--in", dest="infile", required=True)
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("corpus", help="generate a deterministic test corpus")
    c.add_argument("--class", dest="script_class", required=True, choices=SCRIPT_CLASSES)
    c.add_argument("--size-bytes", type=_nonnegative_int, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--encoding", choices=("utf8", "utf16le"), default="utf8")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_corpus)

    b = sub.add_parser("bench", help="time engines on files or generated corpora")
    b.add_argument("--direction", choices=DIRECTIONS, default=UTF8_TO_UTF16)
    b.add_argument(
        "--engine", action="append", help="repeatable; outputs are cross-checked"
    )
    b.add_argument(
        "--in",
        dest="infile",
        action="append",
        required=True,
        help="file path or CLASS:SIZE[:SEED] corpus spec; repeatable",
    )
    b.add_argument("--iterations", type=_positive_int, default=10)
    b.add_argument("--warmup", type=_nonnegative_int, default=2)
    b.set_defaults(func=cmd_bench)

    d = sub.add_parser("difftest", help="differential fuzz campaign vs scalar")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--cases", type=_positive_int, required=True, help="per direction")
    d.add_argument("--max-len", type=_positive_int, default=4096)
    d.add_argument("--keep-going", action="store_true", help="collect all failures")
    d.set_defaults(func=cmd_difftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
