"""UTF-8 / UTF-16 transcoding over portable lane vectors.

Two vectorized engines (one per direction) run the same mask-driven
algorithm at any supported lane count; a scalar transcoder serves as the
reference the engines are checked against.  The facade in
``laneutf.engine`` routes calls to a chosen backend and is the usual
entry point:

    outcome, words = transcode_to_bytes(UTF8_TO_UTF16, b"data")
"""

from laneutf.engine import (
    DIRECTIONS,
    UTF8_TO_UTF16,
    UTF16_TO_UTF8,
    EngineInventory,
    EngineKind,
    detect,
    parse_engine,
    swap_utf16_byte_order,
    transcode,
    transcode_to_bytes,
    validate,
    worst_case_output_bytes,
)
from laneutf.outcome import TranscodeOutcome, TranscodeStatus

__all__ = [
    "DIRECTIONS",
    "UTF8_TO_UTF16",
    "UTF16_TO_UTF8",
    "EngineInventory",
    "EngineKind",
    "TranscodeOutcome",
    "TranscodeStatus",
    "detect",
    "parse_engine",
    "swap_utf16_byte_order",
    "transcode",
    "transcode_to_bytes",
    "validate",
    "worst_case_output_bytes",
]

__version__ = "0.1.0"
