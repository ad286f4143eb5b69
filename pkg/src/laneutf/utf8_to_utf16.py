"""Vectorized UTF-8 to UTF-16LE transcoding.

The input is processed in chunks of ``lane_count`` bytes.  Each chunk is
classified into per-byte masks (ASCII, lead, continuation), the last byte
of every sequence is located, and the payload bits of each sequence are
gathered and merged into 16-bit words.  Four-byte sequences are handled as
an overlapping 3-byte + 2-byte pair whose two words are then fixed up into
a surrogate pair.  At most ``lane_count / 2`` words are produced per
iteration; input only ever advances by whole sequences, so every chunk
starts at a sequence boundary.

Validation happens inline.  On an invalid byte at chunk offset ``l``, the
remaining input length is clamped to just before that byte and the chunk is
reprocessed under a prefix load mask, exactly like the final partial chunk
of input.  Re-validation of the shortened chunk may reveal an earlier
error (a sequence whose continuation bytes were cut off), in which case the
clamp repeats; the clamp position shrinks strictly, and its final value is
the number of code units before the first invalid byte, matching the
scalar reference.

Two implementations are provided: a lane-vector pipeline used for
``lane_count >= 16``, and a packed-integer kernel for ``lane_count == 8``
that keeps the whole chunk in one 64-bit word and every mask in 8 bits.
Both produce identical outcomes; the tests hold them to that.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from laneutf.outcome import TranscodeOutcome, TranscodeStatus
from laneutf.substrate import (
    ByteVec,
    LaneMask,
    WordVec,
    _PEXT8,
    bit_width,
    compress_bytes,
    ctz,
    masked_load,
    pdep,
    permute_bytes,
    pext,
)

__all__ = [
    "SUPPORTED_LANE_COUNTS",
    "Utf8ClassMasks",
    "AssembledWords",
    "classify",
    "check_lead_bytes",
    "check_continuations",
    "assemble",
    "fixup_surrogates",
    "check_decoded_ranges",
    "commit",
    "run",
]

SUPPORTED_LANE_COUNTS = (8, 16, 32, 64, 128)


@dataclass(frozen=True)
class Utf8ClassMasks:
    """Byte classification of one input chunk.

    ``m1``/``m2``/``m3``/``m4`` partition sequence-starting bytes by length;
    ``m_plus k`` marks the k-th continuation position implied by each lead;
    ``m_c`` is where continuations must be, ``m_end`` where sequences end
    (with the third byte of 4-byte sequences doubling as an end).
    """

    m1: LaneMask
    m234: LaneMask
    m34: LaneMask
    m4: LaneMask
    m2: LaneMask
    m3: LaneMask
    m1234: LaneMask
    m_plus1: LaneMask
    m_plus2: LaneMask
    m_plus3: LaneMask
    m_c: LaneMask
    m_end: LaneMask


def classify(w: ByteVec) -> Utf8ClassMasks:
    m1 = w.lt(0x80)
    m234 = w.ge(0xC0)
    m34 = w.ge(0xE0)
    m4 = w.ge(0xF0)
    m1234 = m1 | m234
    m_plus1 = m234 << 1
    m_plus2 = m34 << 2
    m_plus3 = m4 << 3
    return Utf8ClassMasks(
        m1=m1,
        m234=m234,
        m34=m34,
        m4=m4,
        m2=m234 & ~m34,
        m3=m34 & ~m4,
        m1234=m1234,
        m_plus1=m_plus1,
        m_plus2=m_plus2,
        m_plus3=m_plus3,
        m_c=m_plus1 | m_plus2 | m_plus3,
        m_end=((m_plus3 | m1234) >> 1) | m_plus3,
    )


def check_lead_bytes(w: ByteVec, masks: Utf8ClassMasks) -> int | None:
    """Offset of the first 0xC0/0xC1 byte, or None.

    Those two lead values can only start encodings of code points below
    U+0080, which have a shorter form.
    """
    bad = masks.m234 & w.lt(0xC2)
    return ctz(bad.bits) if bad else None


def check_continuations(masks: Utf8ClassMasks) -> int | None:
    """Offset of the first lead/continuation mismatch, or None.

    A continuation byte where none is expected faults at its own
    position; an expected continuation that is missing faults at the
    lead byte whose sequence is cut short.
    """
    diff = masks.m_c ^ ~masks.m1234
    if not diff:
        return None
    q = ctz(diff.bits)
    if (~masks.m1234).test(q):
        return q
    return bit_width(masks.m1234.bits & ((1 << q) - 1)) - 1


@dataclass(frozen=True)
class AssembledWords:
    """Gathered sequence bytes, one output word per end position."""

    P: ByteVec
    W_end: WordVec
    W_minus1: WordVec
    W_minus2: WordVec
    W_sum: WordVec


def assemble(w: ByteVec, masks: Utf8ClassMasks) -> AssembledWords:
    n = w.count
    w_stripped = ByteVec.select(masks.m1, w, w & 0x3F)
    # the byte before an ASCII char, or two before anything shorter than a
    # 3-byte sequence, belongs to a different character and must read as 0
    before1 = ByteVec.select(~masks.m1 >> 1, w_stripped, 0)
    before2 = ByteVec.select(masks.m34 & (LaneMask.ones(n) >> 2), w_stripped, 0)
    P = compress_bytes(masks.m_end, ByteVec.iota(n))
    W_end = permute_bytes(w_stripped, P).zero_extend_low()
    W_minus1 = permute_bytes(before1, P - 1).zero_extend_low()
    W_minus2 = permute_bytes(before2, P - 2).zero_extend_low()
    W_sum = (W_minus2 << 12) | (W_minus1 << 6) | W_end
    return AssembledWords(P, W_end, W_minus1, W_minus2, W_sum)


def fixup_surrogates(
    masks: Utf8ClassMasks, W_sum: WordVec
) -> tuple[WordVec, LaneMask, LaneMask]:
    """Rewrite the two words of each 4-byte sequence into a surrogate pair.

    Returns (W_out, M_lo, M_hi) with the masks in output-word space.  The
    low-surrogate positions are found by extracting fourth-byte locations
    through the end mask; the shift to high positions happens before
    truncation so that a pair straddling the word capacity still marks its
    high half.
    """
    n = masks.m_end.width
    half = n // 2
    lo_full = LaneMask(pext(masks.m_end.bits, masks.m_plus3.bits), n)
    M_lo = lo_full.truncate(half)
    M_hi = (lo_full >> 1).truncate(half)
    # adding 0xD7C0 = 0xD800 - (0x10000 >> 10) tags and plane-shifts at once
    high = (W_sum >> 4) + 0xD7C0
    low = W_sum | 0xDC00
    W_out = WordVec.select(M_hi, high, WordVec.select(M_lo, low, W_sum))
    return W_out, M_lo, M_hi


def check_decoded_ranges(
    masks: Utf8ClassMasks, W_out: WordVec, M_hi: LaneMask
) -> int | None:
    """Offset of the first sequence decoding an illegal value, or None.

    Catches overlong 3-byte forms, 3-byte-encoded surrogates, and 4-byte
    forms outside U+10000..U+10FFFF.  Leads of 0xF5 and above land here
    too: their surplus tag bits survive into the high-surrogate word and
    push it out of range.
    """
    half = masks.m_end.width // 2
    M_3 = LaneMask(pext(masks.m_end.bits, (masks.m3 << 2).bits), masks.m_end.width)
    M_3 = M_3.truncate(half)
    bad = M_3 & W_out.lt(0x800)
    bad = bad | (M_3 & (W_out - 0xD800).lt(0x800))
    bad = bad | (M_hi & (W_out - 0xD800).ge(0x400))
    if not bad:
        return None
    anchors = (masks.m_plus3 | masks.m1234).bits
    return ctz(pdep(anchors, bad.bits))


def commit(
    masks: Utf8ClassMasks, M_hi: LaneMask, b: LaneMask
) -> tuple[int, int, int]:
    """Select which words leave this iteration.

    Drops the last word slot when it holds a high surrogate whose low half
    did not fit, then projects the kept words back onto their sequences'
    end bytes within the load mask ``b``.  Returns (m_processed, n_in,
    n_out); committed words are always a prefix of the output vector.
    """
    half = masks.m_end.width // 2
    M_out = ~(M_hi & LaneMask.single(half - 1, half))
    m_processed = pdep((b & masks.m_end).bits, M_out.bits)
    if not m_processed:
        return 0, 0, 0
    return m_processed, bit_width(m_processed), m_processed.bit_count()


def _general_step(
    w: ByteVec, masks: Utf8ClassMasks, b: LaneMask, n: int
) -> tuple[int | None, int, int, bytes]:
    err = check_lead_bytes(w, masks)
    if err is None:
        err = check_continuations(masks)
    if err is not None:
        return err, 0, 0, b""
    asm = assemble(w, masks)
    W_out, _M_lo, M_hi = fixup_surrogates(masks, asm.W_sum)
    err = check_decoded_ranges(masks, W_out, M_hi)
    if err is not None:
        return err, 0, 0, b""
    _mp, n_in, n_out = commit(masks, M_hi, b)
    return None, n_in, n_out, W_out.to_utf16le_bytes()[: 2 * n_out]


def _ascii_step(w: ByteVec, masks: Utf8ClassMasks, n: int) -> tuple[int, int, bytes] | None:
    """Zero-extend the first half chunk when it is pure ASCII."""
    half = n // 2
    head = LaneMask.prefix(half, n)
    if masks.m1 & head != head:
        return None
    return half, half, w.zero_extend_low().to_utf16le_bytes()


def _two_byte_step(w: ByteVec, masks: Utf8ClassMasks, n: int) -> tuple[int, int, bytes] | None:
    """Shortcut for chunks of only 1- and 2-byte sequences.

    Instead of stripping tag bits, 0xC2 is subtracted from each lead so
    that merging lead and continuation by addition cancels both tags.
    Always advances half a chunk, plus one byte when a sequence straddles
    the middle.  Any validation trouble defers to the general path, which
    localizes the error.
    """
    if masks.m34:
        return None
    if masks.m234 & w.lt(0xC2):
        return None
    if (masks.m2 << 1) != ~masks.m1234:
        return None
    minus_c2 = ByteVec.select(masks.m1, 0, w - 0xC2)
    W_end = compress_bytes(~masks.m2, w).zero_extend_low()
    W_minus1 = compress_bytes(masks.m1234, minus_c2).zero_extend_low()
    W_out = (W_minus1 << 6) + W_end
    half = n // 2
    n_in = half + 1 if 0x80 <= w[half] < 0xC0 else half
    n_out = (masks.m1234.bits & ((1 << half) - 1)).bit_count()
    return n_in, n_out, W_out.to_utf16le_bytes()[: 2 * n_out]


def run(
    data: bytes,
    out,
    *,
    lane_count: int = 64,
    fast_paths: bool = True,
    checked: bool = False,
) -> TranscodeOutcome:
    """Transcode UTF-8 ``data``, writing UTF-16LE bytes into ``out``.

    ``written`` in the outcome counts 16-bit words.  In unchecked mode the
    caller guarantees capacity for the worst case (2 bytes per input
    byte); checked mode instead stops with OUTPUT_TOO_SMALL before the
    first iteration that would not fit.
    """
    if lane_count not in SUPPORTED_LANE_COUNTS:
        raise ValueError(f"lane count must be one of {SUPPORTED_LANE_COUNTS}")
    if lane_count == 8:
        return _run_fused8(data, out, checked=checked)
    return _run_granular(data, out, lane_count, fast_paths=fast_paths, checked=checked)


def _run_granular(
    data: bytes,
    out,
    lane_count: int,
    *,
    fast_paths: bool = True,
    checked: bool = False,
) -> TranscodeOutcome:
    n = lane_count
    view = memoryview(out)
    pos = 0
    limit = len(data)
    words_written = 0
    invalid = False
    while pos < limit:
        remaining = limit - pos
        if remaining >= n:
            b = LaneMask.ones(n)
            w = ByteVec.from_bytes(data[pos : pos + n])
            final = False
        else:
            b = LaneMask.prefix(remaining, n)
            w = masked_load(data[pos:limit], b)
            final = True
        masks = classify(w)
        if fast_paths and not final:
            fast = _ascii_step(w, masks, n) or _two_byte_step(w, masks, n)
            if fast is not None:
                n_in, n_out, payload = fast
                if checked and 2 * (words_written + n_out) > len(view):
                    return TranscodeOutcome(
                        TranscodeStatus.OUTPUT_TOO_SMALL, pos, words_written
                    )
                view[2 * words_written : 2 * (words_written + n_out)] = payload
                pos += n_in
                words_written += n_out
                continue
        err, n_in, n_out, payload = _general_step(w, masks, b, n)
        if err is not None:
            limit = pos + err
            invalid = True
            continue
        if checked and 2 * (words_written + n_out) > len(view):
            return TranscodeOutcome(TranscodeStatus.OUTPUT_TOO_SMALL, pos, words_written)
        if n_out:
            view[2 * words_written : 2 * (words_written + n_out)] = payload
        pos += n_in
        words_written += n_out
        if n_in == 0:
            break
    status = TranscodeStatus.MALFORMED_INPUT if invalid or pos < len(data) else TranscodeStatus.OK
    return TranscodeOutcome(status, pos, words_written)


# ---------------------------------------------------------------------------
# packed-integer kernel: the whole 8-byte chunk lives in one 64-bit word,
# masks in 8 bits, lane gathers via shift-and-mask

_REP8 = 0x0101010101010101
_MSB8 = 0x8080808080808080
_GATHER_MAGIC = 0x0002040810204081  # moves the 8 lane MSBs into the top byte

_SMEAR = tuple(
    sum(0xFF << (8 * i) for i in range(8) if m >> i & 1) for m in range(256)
)
_BITS = tuple(
    tuple(i for i in range(8) if m >> i & 1) for m in range(256)
)


def _fused8_step(x: int, b: int) -> tuple[int | None, int, int, tuple[int, ...]]:
    not_ascii = (x & _MSB8) * _GATHER_MAGIC >> 56 & 0xFF
    x1 = x & x << 1
    x12 = x1 & x << 2
    m234 = (x1 & _MSB8) * _GATHER_MAGIC >> 56 & 0xFF
    m34 = (x12 & _MSB8) * _GATHER_MAGIC >> 56 & 0xFF
    m4 = (x12 & x << 3 & _MSB8) * _GATHER_MAGIC >> 56 & 0xFF
    m1 = ~not_ascii & 0xFF
    m1234 = m1 | m234

    # 0xC0/0xC1 detection: (byte & 0xFE) == 0xC0, via zero-lane test
    v = (x ^ 0xC0C0C0C0C0C0C0C0) & 0xFEFEFEFEFEFEFEFE
    zeroed = (v - _REP8) & ~v & _MSB8
    if zeroed:
        fail1 = zeroed * _GATHER_MAGIC >> 56 & 0xFF
        return (fail1 & -fail1).bit_length() - 1, 0, 0, ()

    m_plus3 = m4 << 3 & 0xFF
    m_c = (m234 << 1 | m34 << 2 | m_plus3) & 0xFF
    not_lead = ~m1234 & 0xFF
    diff = m_c ^ not_lead
    if diff:
        q = (diff & -diff).bit_length() - 1
        if not_lead >> q & 1:
            return q, 0, 0, ()
        return (m1234 & (1 << q) - 1).bit_length() - 1, 0, 0, ()

    m_end = ((m_plus3 | m1234) >> 1 | m_plus3) & 0xFF
    smear1 = _SMEAR[m1]
    w_stripped = x & smear1 | x & ~smear1 & 0x3F3F3F3F3F3F3F3F
    before1 = w_stripped & _SMEAR[not_ascii >> 1]
    before2 = w_stripped & _SMEAR[m34 & 0x3F]

    lo_full = _PEXT8[m_end][m_plus3]
    M_lo = lo_full & 0xF
    M_hi = lo_full >> 1 & 0xF

    ends = _BITS[m_end]
    count = min(4, len(ends))
    words = []
    for j in range(count):
        e = ends[j]
        w_sum = (
            (before2 >> ((e - 2 & 7) * 8) & 0xFF) << 12
            | (before1 >> ((e - 1 & 7) * 8) & 0xFF) << 6
            | w_stripped >> (e * 8) & 0xFF
        ) & 0xFFFF
        if M_hi >> j & 1:
            w_sum = (w_sum >> 4) + 0xD7C0 & 0xFFFF
        elif M_lo >> j & 1:
            w_sum |= 0xDC00
        words.append(w_sum)

    m3 = m34 & ~m4 & 0xFF
    bad = 0
    for j in _BITS[_PEXT8[m_end][m3 << 2 & 0xFF] & (1 << count) - 1]:
        w_j = words[j]
        if w_j < 0x800 or 0xD800 <= w_j < 0xE000:
            bad |= 1 << j
    for j in _BITS[M_hi & (1 << count) - 1]:
        if not 0xD800 <= words[j] < 0xDC00:
            bad |= 1 << j
    if bad:
        anchors = m_plus3 | m1234
        scattered = pdep(anchors, bad)
        return (scattered & -scattered).bit_length() - 1, 0, 0, ()

    m_processed = pdep(b & m_end, ~(M_hi & 0x8) & 0xF)
    if not m_processed:
        return None, 0, 0, ()
    n_out = m_processed.bit_count()
    return None, m_processed.bit_length(), n_out, tuple(words[:n_out])


def _run_fused8(data: bytes, out, *, checked: bool = False) -> TranscodeOutcome:
    view = memoryview(out)
    capacity = len(view)
    pos = 0
    limit = len(data)
    words_written = 0
    invalid = False
    while pos < limit:
        remaining = limit - pos
        if remaining >= 8:
            x = int.from_bytes(data[pos : pos + 8], "little")
            b = 0xFF
        else:
            x = int.from_bytes(data[pos:limit], "little")
            b = (1 << remaining) - 1
        err, n_in, n_out, words = _fused8_step(x, b)
        if err is not None:
            limit = pos + err
            invalid = True
            continue
        if checked and 2 * (words_written + n_out) > capacity:
            return TranscodeOutcome(TranscodeStatus.OUTPUT_TOO_SMALL, pos, words_written)
        if n_out:
            view[2 * words_written : 2 * (words_written + n_out)] = struct.pack(
                "<%dH" % n_out, *words
            )
        pos += n_in
        words_written += n_out
        if n_in == 0:
            break
    status = TranscodeStatus.MALFORMED_INPUT if invalid or pos < len(data) else TranscodeStatus.OK
    return TranscodeOutcome(status, pos, words_written)
