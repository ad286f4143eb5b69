"""Single-threaded benchmark harness.

Methodology: pin to one logical CPU when the platform allows, run W
warm-up passes, then K timed passes on a monotonic nanosecond clock, and
report both the minimum and the mean.  Throughput figures use the
minimum, which is the least noise-contaminated sample; the min-vs-mean
gap fraction is reported so a reader can judge run stability.  Character
counts are format-independent, so chars/sec is comparable across the two
directions in a way bytes/sec is not.

When several engines are compared on the same input the harness pauses
one millisecond between engines and checks that every engine produced
identical output bytes.
"""

from __future__ import annotations

import os
import time
from dataclasses import asdict, dataclass

from laneutf import scalar
from laneutf.engine import (
    UTF8_TO_UTF16,
    EngineKind,
    resolve_engine,
    transcode,
    worst_case_output_bytes,
)

__all__ = ["GAP_THRESHOLD", "BenchReport", "run_bench", "compare_engines"]

# min and mean should agree this closely on a quiet machine
GAP_THRESHOLD = 0.01

INTER_ENGINE_PAUSE_SECONDS = 0.001


@dataclass(frozen=True)
class BenchReport:
    label: str
    engine: str
    direction: str
    input_bytes: int
    chars: int
    repetitions: int
    warmup: int
    min_seconds: float
    mean_seconds: float
    bytes_per_second: float
    chars_per_second: float
    gap_fraction: float
    gap_is_small: bool
    clock_resolution_seconds: float

    def to_json_dict(self) -> dict:
        return asdict(self)


def _pin_to_one_cpu():
    """Restrict to the lowest currently-allowed CPU; returns the old set."""
    try:
        allowed = os.sched_getaffinity(0)
        os.sched_setaffinity(0, {min(allowed)})
        return allowed
    except (AttributeError, OSError):
        return None


def _restore_cpus(saved) -> None:
    if saved is not None:
        try:
            os.sched_setaffinity(0, saved)
        except OSError:
            pass


def run_bench(
    direction: str,
    data: bytes,
    *,
    engine: EngineKind | str | None = None,
    repetitions: int = 10,
    warmup: int = 2,
    label: str = "",
) -> tuple[BenchReport, bytes]:
    """Time one engine on one input; returns the report and the output bytes."""
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    if warmup < 0:
        raise ValueError("warmup must not be negative")
    kind = resolve_engine(engine)
    if direction == UTF8_TO_UTF16:
        chars = scalar.utf8_char_count(data)
    else:
        chars = scalar.utf16le_char_count(data)
    out = bytearray(worst_case_output_bytes(direction, len(data)))
    samples: list[int] = []
    saved = _pin_to_one_cpu()
    try:
        for _ in range(warmup):
            transcode(direction, data, out, engine=kind)
        for _ in range(repetitions):
            started = time.perf_counter_ns()
            outcome = transcode(direction, data, out, engine=kind)
            samples.append(time.perf_counter_ns() - started)
    finally:
        _restore_cpus(saved)
    min_seconds = min(samples) / 1e9
    mean_seconds = sum(samples) / len(samples) / 1e9
    gap = (mean_seconds - min_seconds) / min_seconds if min_seconds else 0.0
    report = BenchReport(
        label=label,
        engine=kind.describe(),
        direction=direction,
        input_bytes=len(data),
        chars=chars,
        repetitions=repetitions,
        warmup=warmup,
        min_seconds=min_seconds,
        mean_seconds=mean_seconds,
        bytes_per_second=len(data) / min_seconds if min_seconds else 0.0,
        chars_per_second=chars / min_seconds if min_seconds else 0.0,
        gap_fraction=gap,
        gap_is_small=gap <= GAP_THRESHOLD,
        clock_resolution_seconds=time.get_clock_info("perf_counter").resolution,
    )
    unit = 2 if direction == UTF8_TO_UTF16 else 1
    return report, bytes(out[: unit * outcome.written])


def compare_engines(
    direction: str,
    data: bytes,
    engines,
    *,
    repetitions: int = 10,
    warmup: int = 2,
    label: str = "",
) -> tuple[list[BenchReport], bool]:
    """Bench each engine on the same input; also checks outputs are identical."""
    reports = []
    payloads = []
    for index, engine in enumerate(engines):
        if index:
            time.sleep(INTER_ENGINE_PAUSE_SECONDS)
        report, payload = run_bench(
            direction,
            data,
            engine=engine,
            repetitions=repetitions,
            warmup=warmup,
            label=label,
        )
        reports.append(report)
        payloads.append(payload)
    outputs_match = all(p == payloads[0] for p in payloads[1:])
    return reports, outputs_match
