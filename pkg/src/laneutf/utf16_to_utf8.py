"""Vectorized UTF-16LE to UTF-8 transcoding.

Each iteration loads ``lane_count / 2`` words; the last loaded word is a
lookahead that never commits, so a surrogate pair straddling the window
boundary always has its low half visible.  Words are classified, surrogate
sequencing is checked, pairs are joined into code points at the high
surrogate's lane, and every lane is expanded to a 4-byte field holding its
UTF-8 encoding right-aligned.  A per-byte threshold compare then keeps
exactly the meaningful bytes: all four for a pair, a suffix for shorter
sequences, nothing for a low surrogate lane (its pair was emitted by the
high lane).  The kept bytes are compressed to the front and stored.

A one-bit carry links iterations: it records that the previous window
committed a high surrogate in its last slot, meaning the current word 0 is
the matching low half, already emitted.  Invalid sequencing clamps the
input length to the offending word and reprocesses, like the forward
direction; phantom zero words past the clamp read as ASCII NULs and never
mask a real error.
"""

from __future__ import annotations

from laneutf.outcome import TranscodeOutcome, TranscodeStatus
from laneutf.substrate import (
    ByteVec,
    DwordVec,
    LaneMask,
    WordVec,
    compress_bytes,
    ctz,
    masked_load,
    multishift,
    pdep,
)

__all__ = ["SUPPORTED_LANE_COUNTS", "run"]

# output lanes are dwords viewed as bytes, so byte-register width caps the
# word count at 32 per iteration
SUPPORTED_LANE_COUNTS = (8, 16, 32, 64)

# (high - 0xD800) << 10 becomes high << 10 plus this, folded together with
# -0xDC00 for the low half and +0x10000 for the plane offset, mod 2^32
_PAIR_BIAS = (0x10000 - (0xD800 << 10) - 0xDC00) % (1 << 32)

_SHIFT_OFFSETS = (18, 12, 6, 0)  # lead byte first, low payload last
_TAG_PAIR = 0x808080F0
_TAG_THREE = 0x8080E000
_TAG_TWO = 0x80C00000


def _ascii_payload(W: WordVec, k: int) -> bytes:
    return W.truncate_to_bytes().tobytes()[:k]


def _short_payload(W: WordVec, M_234: LaneMask, k: int) -> bytes:
    """Emit 1- and 2-byte sequences, two output bytes per lane max.

    Packs lead and continuation into the two bytes of each word lane, then
    keeps the even byte always and the odd byte only for 2-byte lanes.
    """
    n = 2 * W.count
    packed = ((W << 8) | (W >> 6)) & 0x3F3F | 0x80C0
    W_out = WordVec.select(M_234, packed, W)
    B = ByteVec.from_bytes(W_out.to_utf16le_bytes())
    even = ((1 << n) - 1) // 3
    keep = LaneMask(even | pdep(even << 1, M_234.bits), n)
    keep = keep & LaneMask.prefix(2 * k, n)
    count = keep.popcount()
    return compress_bytes(keep, B).tobytes()[:count]


def _encode_payload(
    W: WordVec, M_234: LaneMask, M_hi: LaneMask, M_lo: LaneMask, k: int
) -> bytes:
    h = W.count
    W32 = W.zero_extend()
    W_next = W.rotate(1).zero_extend()
    W_joined = DwordVec.select(M_hi, (W32 << 10) + W_next + _PAIR_BIAS, W32)
    W_shifted = multishift(W_joined, _SHIFT_OFFSETS)
    tag = DwordVec.select(W_joined.lt(0x800), _TAG_TWO, _TAG_THREE)
    tag = DwordVec.select(M_hi, _TAG_PAIR, tag)
    W_out = DwordVec.select(M_234, (W_shifted & 0x3F3F3F3F) | tag, W32 << 24)
    B = W_out.as_bytes()
    # threshold per byte: a low-surrogate lane emits nothing (its bytes sit
    # below 0xFF), other lanes emit their nonzero tail plus the last byte
    threshold = DwordVec.select(M_lo, 0xFFFFFFFF, 0x00010101).as_bytes()
    keep = B.ge(threshold) & LaneMask.prefix(4 * k, 4 * h)
    count = keep.popcount()
    return compress_bytes(keep, B).tobytes()[:count]


def run(
    data: bytes,
    out,
    *,
    lane_count: int = 64,
    fast_paths: bool = True,
    checked: bool = False,
) -> TranscodeOutcome:
    """Transcode UTF-16LE ``data``, writing UTF-8 bytes into ``out``.

    ``consumed`` counts 16-bit words, ``written`` counts bytes.  Unchecked
    callers guarantee worst-case capacity (3 bytes per input word);
    checked mode stops with OUTPUT_TOO_SMALL before an iteration that
    would overflow.  Odd input length raises ValueError.
    """
    if lane_count not in SUPPORTED_LANE_COUNTS:
        raise ValueError(f"lane count must be one of {SUPPORTED_LANE_COUNTS}")
    if len(data) % 2:
        raise ValueError("UTF-16 input must have even byte length")
    h = lane_count // 2
    view = memoryview(out)
    lookahead = ~LaneMask.single(h - 1, h)
    pos = 0
    limit = len(data) // 2
    written = 0
    carry = 0
    invalid = False
    while pos < limit:
        remaining = limit - pos
        if remaining >= h:
            W = WordVec.from_utf16le_bytes(data[2 * pos : 2 * (pos + h)])
            k = h - 1
            final = False
        else:
            loaded = masked_load(
                data[2 * pos : 2 * limit], LaneMask.prefix(2 * remaining, 2 * h)
            )
            W = WordVec.from_utf16le_bytes(loaded.tobytes())
            k = remaining
            final = True
        M_234 = W.ge(0x80) & lookahead
        if fast_paths and not final:
            if not M_234:
                payload = _ascii_payload(W, k)
            elif (W.lt(0x800) | ~lookahead) == LaneMask.ones(h):
                payload = _short_payload(W, M_234, k)
            else:
                payload = None
            if payload is not None:
                if checked and written + len(payload) > len(view):
                    return TranscodeOutcome(TranscodeStatus.OUTPUT_TOO_SMALL, pos, written)
                view[written : written + len(payload)] = payload
                written += len(payload)
                pos += k
                continue
        tagged = W & 0xFC00
        M_hi = tagged.eq_lanes(0xD800) & lookahead
        M_lo = tagged.eq_lanes(0xDC00)
        expected_lo = (M_hi << 1) | LaneMask(carry, h)
        if expected_lo != M_lo:
            stray = (M_hi & ~(M_lo >> 1)) | (M_lo & ~expected_lo)
            limit = pos + ctz(stray.bits)
            invalid = True
            continue
        payload = _encode_payload(W, M_234, M_hi, M_lo, k)
        if checked and written + len(payload) > len(view):
            return TranscodeOutcome(TranscodeStatus.OUTPUT_TOO_SMALL, pos, written)
        view[written : written + len(payload)] = payload
        written += len(payload)
        pos += k
        if not final:
            carry = 1 if M_hi.test(h - 2) else 0
    status = (
        TranscodeStatus.MALFORMED_INPUT
        if invalid or pos < len(data) // 2
        else TranscodeStatus.OK
    )
    return TranscodeOutcome(status, pos, written)
