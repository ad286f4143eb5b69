"""Differential fuzz campaigns: vector engines against the scalar reference.

A campaign derives every case from one 64-bit seed: text windows are cut
from deterministic base corpora (one per script class), about half the
cases get one seeded error recipe applied, and lengths are drawn
short-biased with a slice snapped near chunk-size multiples so window
boundaries get constant pressure.  Each case runs through the scalar
transcoder and each requested emulated lane count; any difference in
(status, consumed, written) or payload bytes is a discrepancy.

Discrepancies carry both the original input and a greedy-minimized
reproducer that still fails, so a report is actionable on its own.
"""

from __future__ import annotations

import time
from bisect import bisect_left
from dataclasses import dataclass

from laneutf.corpus import (
    POSITION_STRATEGIES,
    SCRIPT_CLASSES,
    UTF8_ERROR_CLASSES,
    UTF16_ERROR_CLASSES,
    CorpusSpec,
    ErrorRecipe,
    RecipeNotApplicable,
    SplitMix64,
    generate,
    mutate,
)
from laneutf.engine import (
    DIRECTIONS,
    UTF8_TO_UTF16,
    EngineKind,
    transcode_to_bytes,
)
from laneutf.outcome import TranscodeOutcome

__all__ = ["Discrepancy", "CampaignReport", "check_case", "run_campaign"]

_BASE_TARGET_BYTES = 4600  # big enough to cut full-length windows from


@dataclass(frozen=True)
class Discrepancy:
    direction: str
    engine: str
    case_index: int
    data: bytes
    shrunk: bytes
    expected: tuple[TranscodeOutcome, bytes]
    actual: tuple[TranscodeOutcome, bytes]

    def summary(self) -> str:
        return (
            f"{self.direction} {self.engine} case {self.case_index}: "
            f"expected {self.expected[0]}, got {self.actual[0]}; "
            f"input {self.data.hex()} shrunk {self.shrunk.hex()}"
        )


@dataclass(frozen=True)
class CampaignReport:
    seed: int
    cases_per_direction: int
    valid_cases: int
    mutated_cases: int
    lane_counts: tuple[int, ...]
    discrepancies: tuple[Discrepancy, ...]
    elapsed_seconds: float

    @property
    def passed(self) -> bool:
        return not self.discrepancies

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lines = [
            f"{verdict}: {2 * self.cases_per_direction} cases "
            f"({self.valid_cases} valid, {self.mutated_cases} mutated), "
            f"seed {self.seed}, lanes {list(self.lane_counts)}, "
            f"{self.elapsed_seconds:.1f}s"
        ]
        lines += [d.summary() for d in self.discrepancies]
        return "\n".join(lines)


def check_case(
    direction: str, data: bytes, lane_counts: tuple[int, ...] = (64,)
) -> tuple[str, tuple, tuple] | None:
    """Compare scalar vs each emulated engine on one input.

    Returns (engine name, expected, actual) for the first mismatch, or
    None when all engines agree.
    """
    expected = transcode_to_bytes(direction, data, engine="scalar")
    for n in lane_counts:
        kind = EngineKind.emulated(n)
        actual = transcode_to_bytes(direction, data, engine=kind)
        if actual != expected:
            return kind.describe(), expected, actual
    return None


def _build_bases(seed: int):
    bases = []
    for i, script in enumerate(SCRIPT_CLASSES):
        utf8, utf16 = generate(
            CorpusSpec(script, _BASE_TARGET_BYTES, seed=(seed + 0x5EED0 + i) & ((1 << 64) - 1))
        )
        c8 = [0]
        c16 = [0]
        for ch in utf8.decode():
            c8.append(c8[-1] + len(ch.encode()))
            c16.append(c16[-1] + len(ch.encode("utf-16-le")) // 2)
        bases.append((utf8, utf16, c8, c16))
    return bases


def _draw_target_units(rng: SplitMix64, max_len: int) -> int:
    if rng.next_below(4) == 0:
        # snap near a multiple of 32 so loads straddle window boundaries
        length = 32 * (1 + rng.next_below(8)) + rng.next_below(3) - 1
        return min(length, max_len)
    bucket = rng.next_below(100)
    if bucket < 70:
        ceiling = 96
    elif bucket < 90:
        ceiling = 320
    elif bucket < 98:
        ceiling = 1024
    else:
        ceiling = max_len
    return rng.next_below(min(ceiling, max_len) + 1)


def _make_case(
    rng: SplitMix64, bases, direction: str, max_len: int
) -> tuple[bytes, bool]:
    utf8, utf16, c8, c16 = bases[rng.next_below(len(bases))]
    forward = direction == UTF8_TO_UTF16
    cumulative = c8 if forward else c16
    target = _draw_target_units(rng, max_len)
    if not forward:
        target //= 2  # units are words; keep byte lengths comparable
    nchars = len(cumulative) - 1
    start = rng.next_below(nchars + 1)
    end = bisect_left(cumulative, cumulative[start] + target)
    end = max(start, min(end, nchars))
    if forward:
        data = utf8[c8[start] : c8[end]]
    else:
        data = utf16[2 * c16[start] : 2 * c16[end]]
    if rng.next_below(2) == 0:
        classes = UTF8_ERROR_CLASSES if forward else UTF16_ERROR_CLASSES
        recipe = ErrorRecipe(
            classes[rng.next_below(len(classes))],
            POSITION_STRATEGIES[rng.next_below(len(POSITION_STRATEGIES))],
        )
        try:
            data, _offset = mutate(
                data,
                recipe,
                seed=rng.next_u64(),
                chunk_size=64 if forward else 31,
            )
            return data, True
        except RecipeNotApplicable:
            pass
    return data, False


def _shrink(direction: str, data: bytes, lane_counts: tuple[int, ...]) -> bytes:
    unit = 1 if direction == UTF8_TO_UTF16 else 2
    current = data
    improved = True
    while improved and len(current) > unit:
        improved = False
        size = max(unit, len(current) // 2 // unit * unit)
        while size >= unit:
            start = 0
            while start < len(current):
                candidate = current[:start] + current[start + size :]
                if len(candidate) < len(current) and check_case(
                    direction, candidate, lane_counts
                ):
                    current = candidate
                    improved = True
                else:
                    start += size
            size = size // 2 // unit * unit
    return current


def run_campaign(
    *,
    seed: int,
    cases_per_direction: int,
    max_len: int = 4096,
    lane_counts: tuple[int, ...] = (64,),
    stop_on_first: bool = True,
) -> CampaignReport:
    started = time.perf_counter()
    bases = _build_bases(seed)
    valid = 0
    mutated = 0
    discrepancies: list[Discrepancy] = []
    for dir_index, direction in enumerate(DIRECTIONS):
        rng = SplitMix64((seed + dir_index) & ((1 << 64) - 1))
        for index in range(cases_per_direction):
            data, was_mutated = _make_case(rng, bases, direction, max_len)
            mutated += was_mutated
            valid += not was_mutated
            found = check_case(direction, data, lane_counts)
            if found is not None:
                engine_name, expected, actual = found
                discrepancies.append(
                    Discrepancy(
                        direction=direction,
                        engine=engine_name,
                        case_index=index,
                        data=data,
                        shrunk=_shrink(direction, data, lane_counts),
                        expected=expected,
                        actual=actual,
                    )
                )
                if stop_on_first:
                    return _report(
                        seed, cases_per_direction, valid, mutated,
                        lane_counts, discrepancies, started,
                    )
    return _report(
        seed, cases_per_direction, valid, mutated, lane_counts, discrepancies, started
    )


def _report(seed, cases, valid, mutated, lane_counts, discrepancies, started):
    return CampaignReport(
        seed=seed,
        cases_per_direction=cases,
        valid_cases=valid,
        mutated_cases=mutated,
        lane_counts=tuple(lane_counts),
        discrepancies=tuple(discrepancies),
        elapsed_seconds=time.perf_counter() - started,
    )
