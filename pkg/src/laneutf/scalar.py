"""Scalar reference transcoders, one code point at a time.

This is the behavioral baseline the vectorized engines are checked against.
Error localization follows one rule set in both directions:

* a byte/word that can never begin a sequence is reported at its own index
  (stray continuation bytes, 0xC0/0xC1, 0xF5-0xFF leads, lone low
  surrogates);
* a sequence that starts legally but goes wrong (bad or missing
  continuation, truncation at end of input, overlong, surrogate or
  out-of-range value, high surrogate without a low) is reported at the
  index of its first unit.

``consumed`` in the returned outcome therefore counts the code units
strictly before the first invalid unit, and the output holds exactly the
units transcoded from that valid prefix.
"""

from __future__ import annotations

import struct

from laneutf.outcome import TranscodeOutcome, TranscodeStatus

__all__ = [
    "transcode_utf8_to_utf16le",
    "transcode_utf16le_to_utf8",
    "validate_utf8",
    "validate_utf16le",
    "utf16_length_from_utf8",
    "utf8_length_from_utf16le",
    "utf16_worst_case_words",
    "utf8_worst_case_bytes",
    "utf8_char_count",
    "utf16le_char_count",
]

_OK = TranscodeStatus.OK
_BAD = TranscodeStatus.MALFORMED_INPUT


def _pack_words(words: list[int]) -> bytes:
    return struct.pack("<%dH" % len(words), *words)


def transcode_utf8_to_utf16le(data: bytes) -> tuple[TranscodeOutcome, bytes]:
    """Decode UTF-8, returning an outcome and UTF-16LE bytes.

    ``written`` counts 16-bit words, not bytes.
    """
    words: list[int] = []
    append = words.append
    i = 0
    n = len(data)
    while i < n:
        b = data[i]
        if b < 0x80:
            append(b)
            i += 1
            continue
        if b < 0xC2:
            # stray continuation (80-BF) or overlong 2-byte lead (C0/C1)
            break
        if b < 0xE0:
            if i + 1 >= n or not 0x80 <= data[i + 1] < 0xC0:
                break
            append((b & 0x1F) << 6 | data[i + 1] & 0x3F)
            i += 2
            continue
        if b < 0xF0:
            if (
                i + 2 >= n
                or not 0x80 <= data[i + 1] < 0xC0
                or not 0x80 <= data[i + 2] < 0xC0
            ):
                break
            cp = (b & 0x0F) << 12 | (data[i + 1] & 0x3F) << 6 | data[i + 2] & 0x3F
            if cp < 0x800 or 0xD800 <= cp < 0xE000:
                break
            append(cp)
            i += 3
            continue
        if b > 0xF4:
            break
        if (
            i + 3 >= n
            or not 0x80 <= data[i + 1] < 0xC0
            or not 0x80 <= data[i + 2] < 0xC0
            or not 0x80 <= data[i + 3] < 0xC0
        ):
            break
        cp = (
            (b & 0x07) << 18
            | (data[i + 1] & 0x3F) << 12
            | (data[i + 2] & 0x3F) << 6
            | data[i + 3] & 0x3F
        )
        if not 0x10000 <= cp <= 0x10FFFF:
            break
        cp -= 0x10000
        append(0xD800 | cp >> 10)
        append(0xDC00 | cp & 0x3FF)
        i += 4
    status = _OK if i == n else _BAD
    return TranscodeOutcome(status, i, len(words)), _pack_words(words)


def transcode_utf16le_to_utf8(data: bytes) -> tuple[TranscodeOutcome, bytes]:
    """Decode UTF-16LE, returning an outcome and UTF-8 bytes.

    ``consumed`` counts 16-bit words.  Raises ValueError on odd input
    length; a truncated word is a framing error, not a transcoding result.
    """
    if len(data) % 2:
        raise ValueError("UTF-16 input must be an even number of bytes")
    n = len(data) // 2
    words = struct.unpack("<%dH" % n, data)
    out = bytearray()
    i = 0
    while i < n:
        w = words[i]
        if w < 0x80:
            out.append(w)
            i += 1
        elif w < 0x800:
            out.append(0xC0 | w >> 6)
            out.append(0x80 | w & 0x3F)
            i += 1
        elif not 0xD800 <= w < 0xE000:
            out.append(0xE0 | w >> 12)
            out.append(0x80 | w >> 6 & 0x3F)
            out.append(0x80 | w & 0x3F)
            i += 1
        elif w < 0xDC00:
            if i + 1 >= n or not 0xDC00 <= words[i + 1] < 0xE000:
                break
            cp = 0x10000 + ((w - 0xD800) << 10 | words[i + 1] - 0xDC00)
            out.append(0xF0 | cp >> 18)
            out.append(0x80 | cp >> 12 & 0x3F)
            out.append(0x80 | cp >> 6 & 0x3F)
            out.append(0x80 | cp & 0x3F)
            i += 2
        else:
            # lone low surrogate
            break
    status = _OK if i == n else _BAD
    return TranscodeOutcome(status, i, len(out)), bytes(out)


def validate_utf8(data: bytes) -> TranscodeOutcome:
    """Validation-only pass; ``written`` is always zero."""
    i = 0
    n = len(data)
    while i < n:
        b = data[i]
        if b < 0x80:
            i += 1
            continue
        if b < 0xC2:
            break
        if b < 0xE0:
            if i + 1 >= n or not 0x80 <= data[i + 1] < 0xC0:
                break
            i += 2
            continue
        if b < 0xF0:
            if (
                i + 2 >= n
                or not 0x80 <= data[i + 1] < 0xC0
                or not 0x80 <= data[i + 2] < 0xC0
            ):
                break
            cp = (b & 0x0F) << 12 | (data[i + 1] & 0x3F) << 6 | data[i + 2] & 0x3F
            if cp < 0x800 or 0xD800 <= cp < 0xE000:
                break
            i += 3
            continue
        if b > 0xF4:
            break
        if (
            i + 3 >= n
            or not 0x80 <= data[i + 1] < 0xC0
            or not 0x80 <= data[i + 2] < 0xC0
            or not 0x80 <= data[i + 3] < 0xC0
        ):
            break
        cp = (
            (b & 0x07) << 18
            | (data[i + 1] & 0x3F) << 12
            | (data[i + 2] & 0x3F) << 6
            | data[i + 3] & 0x3F
        )
        if not 0x10000 <= cp <= 0x10FFFF:
            break
        i += 4
    status = _OK if i == n else _BAD
    return TranscodeOutcome(status, i, 0)


def validate_utf16le(data: bytes) -> TranscodeOutcome:
    if len(data) % 2:
        raise ValueError("UTF-16 input must be an even number of bytes")
    n = len(data) // 2
    words = struct.unpack("<%dH" % n, data)
    i = 0
    while i < n:
        w = words[i]
        if not 0xD800 <= w < 0xE000:
            i += 1
        elif w < 0xDC00:
            if i + 1 >= n or not 0xDC00 <= words[i + 1] < 0xE000:
                break
            i += 2
        else:
            break
    status = _OK if i == n else _BAD
    return TranscodeOutcome(status, i, 0)


def utf16_length_from_utf8(data: bytes) -> int:
    """Exact output length in words; ValueError if the input is invalid."""
    outcome, payload = transcode_utf8_to_utf16le(data)
    if not outcome.ok:
        raise ValueError(f"invalid UTF-8 at byte {outcome.consumed}")
    return len(payload) // 2


def utf8_length_from_utf16le(data: bytes) -> int:
    """Exact output length in bytes; ValueError if the input is invalid."""
    outcome, payload = transcode_utf16le_to_utf8(data)
    if not outcome.ok:
        raise ValueError(f"invalid UTF-16 at word {outcome.consumed}")
    return len(payload)


def utf16_worst_case_words(n_bytes: int) -> int:
    """Upper bound: no UTF-8 byte yields more than one UTF-16 word."""
    return n_bytes


def utf8_worst_case_bytes(n_words: int) -> int:
    """Upper bound: 3 bytes per BMP word; pairs need 4 bytes per 2 words."""
    return 3 * n_words


def utf8_char_count(data: bytes) -> int:
    """Number of encoded characters, counting lead and ASCII bytes."""
    return sum(1 for b in data if b < 0x80 or b >= 0xC0)


def utf16le_char_count(data: bytes) -> int:
    """Number of encoded characters; surrogate pairs count once."""
    if len(data) % 2:
        raise ValueError("UTF-16 input must be an even number of bytes")
    n = len(data) // 2
    words = struct.unpack("<%dH" % n, data)
    return n - sum(1 for w in words if 0xDC00 <= w < 0xE000)
