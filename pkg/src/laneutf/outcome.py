"""Shared result types and code-point constants for the transcoders."""

from __future__ import annotations

import enum
from dataclasses import dataclass

__all__ = [
    "TranscodeStatus",
    "TranscodeOutcome",
    "MAX_CODE_POINT",
    "SURROGATE_MIN",
    "SURROGATE_MAX",
    "HIGH_SURROGATE_MIN",
    "HIGH_SURROGATE_MAX",
    "LOW_SURROGATE_MIN",
    "LOW_SURROGATE_MAX",
    "is_surrogate",
    "is_high_surrogate",
    "is_low_surrogate",
    "is_scalar_value",
]

MAX_CODE_POINT = 0x10FFFF

SURROGATE_MIN = 0xD800
SURROGATE_MAX = 0xDFFF
HIGH_SURROGATE_MIN = 0xD800
HIGH_SURROGATE_MAX = 0xDBFF
LOW_SURROGATE_MIN = 0xDC00
LOW_SURROGATE_MAX = 0xDFFF


def is_surrogate(cp: int) -> bool:
    return SURROGATE_MIN <= cp <= SURROGATE_MAX


def is_high_surrogate(unit: int) -> bool:
    return HIGH_SURROGATE_MIN <= unit <= HIGH_SURROGATE_MAX


def is_low_surrogate(unit: int) -> bool:
    return LOW_SURROGATE_MIN <= unit <= LOW_SURROGATE_MAX


def is_scalar_value(cp: int) -> bool:
    """True for code points encodable in both UTF-8 and UTF-16."""
    return 0 <= cp <= MAX_CODE_POINT and not is_surrogate(cp)


class TranscodeStatus(enum.Enum):
    OK = "ok"
    MALFORMED_INPUT = "malformed-input"
    OUTPUT_TOO_SMALL = "output-too-small"


@dataclass(frozen=True)
class TranscodeOutcome:
    """What a transcoding call did.

    ``consumed`` and ``written`` count code units of the input and output
    encodings (bytes for UTF-8, 16-bit words for UTF-16).  On malformed
    input, ``consumed`` is the number of units strictly before the first
    invalid unit, so it doubles as the error offset.
    """

    status: TranscodeStatus
    consumed: int
    written: int

    @property
    def ok(self) -> bool:
        return self.status is TranscodeStatus.OK

    @property
    def error_offset(self) -> int:
        """Offset of the first rejected input unit.

        Only meaningful when ``status`` is MALFORMED_INPUT.
        """
        if self.status is not TranscodeStatus.MALFORMED_INPUT:
            raise ValueError(f"no error offset for status {self.status.value!r}")
        return self.consumed
