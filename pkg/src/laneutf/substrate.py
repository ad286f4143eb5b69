"""Fixed-width lane vectors and mask algebra for the transcoding engines.

The model mirrors a SIMD register file with an attached mask unit:

* A :class:`LaneMask` is an unsigned integer of a fixed width where bit ``i``
  describes element ``i``.  Bits at positions >= width are always zero, and
  shifts discard bits pushed past the width.  Printed forms list element 0
  first, so ``LaneMask.from_lanes([1, 0, 0, 1])`` prints as ``1001`` even
  though its integer value is ``0b1001`` read the other way around.
* :class:`ByteVec`, :class:`WordVec` and :class:`DwordVec` hold 8/16/32-bit
  unsigned lanes.  All lane arithmetic wraps modulo the lane width; lane-wise
  comparisons produce a :class:`LaneMask`.
* The "horizontal" operations (``pext``, ``pdep``, ``compress_bytes``,
  ``permute_bytes``, ``multishift``, masked load/store) follow the usual
  BMI2 / AVX-512 semantics and are documented on each function.

Lane counts and mask widths are powers of two between 4 and 128.  The upper
half of that range exists because the word-to-byte encoder views n/2 dword
lanes as 2n bytes, and the lower half because an 8-byte vector has 4-lane
word views.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "LaneMask",
    "ByteVec",
    "WordVec",
    "DwordVec",
    "BufferOverflowError",
    "ctz",
    "bit_width",
    "popcount",
    "pext",
    "pdep",
    "compress_bytes",
    "permute_bytes",
    "multishift",
    "masked_load",
    "masked_store",
]

_VALID_WIDTHS = (4, 8, 16, 32, 64, 128)


class BufferOverflowError(ValueError):
    """A masked store needs more capacity than the target buffer offers."""


def _check_width(width: int) -> None:
    if width not in _VALID_WIDTHS:
        raise ValueError(f"lane width must be one of {_VALID_WIDTHS}, got {width!r}")


# ---------------------------------------------------------------------------
# scalar bit operations


def ctz(a: int) -> int:
    """Index of the lowest set bit.  Requires ``a != 0``."""
    if a <= 0:
        raise ValueError("ctz requires a nonzero value")
    return (a & -a).bit_length() - 1


def bit_width(a: int) -> int:
    """Index of the highest set bit, plus one.  Requires ``a != 0``."""
    if a <= 0:
        raise ValueError("bit_width requires a nonzero value")
    return a.bit_length()


def popcount(a: int) -> int:
    if a < 0:
        raise ValueError("popcount requires a nonnegative value")
    return a.bit_count()


# pext/pdep work one source byte at a time against precomputed tables: for a
# selector byte s, _PEXT8[s][b] is the packed extraction of b's bits at s's
# set positions, and _PDEP8[s][c] scatters the low popcount(s) bits of c back
# to those positions.  Built eagerly; ~70k small ints.

_POP8 = tuple(bin(i).count("1") for i in range(256))


def _build_pext8() -> tuple[tuple[int, ...], ...]:
    table = []
    for sel in range(256):
        positions = [i for i in range(8) if sel >> i & 1]
        row = []
        for src in range(256):
            packed = 0
            for j, p in enumerate(positions):
                packed |= (src >> p & 1) << j
            row.append(packed)
        table.append(tuple(row))
    return tuple(table)


def _build_pdep8() -> tuple[tuple[int, ...], ...]:
    table = []
    for sel in range(256):
        positions = [i for i in range(8) if sel >> i & 1]
        row = []
        for chunk in range(1 << len(positions)):
            spread = 0
            for j, p in enumerate(positions):
                spread |= (chunk >> j & 1) << p
            row.append(spread)
        table.append(tuple(row))
    return tuple(table)


_PEXT8 = _build_pext8()
_PDEP8 = _build_pdep8()


def pext(a: int, b: int) -> int:
    """Pack the bits of ``b`` found at the set positions of ``a``.

    Bit ``j`` of the result is bit ``p_j`` of ``b``, where ``p_j`` is the
    position of the j-th lowest set bit of the selector ``a``.
    """
    if a < 0 or b < 0:
        raise ValueError("pext operands must be nonnegative")
    out = 0
    shift = 0
    while a:
        sel = a & 0xFF
        out |= _PEXT8[sel][b & 0xFF] << shift
        shift += _POP8[sel]
        a >>= 8
        b >>= 8
    return out


def pdep(a: int, b: int) -> int:
    """Scatter the low bits of ``b`` to the set positions of ``a``.

    The inverse of :func:`pext` over the selected positions: bit ``p_j`` of
    the result is bit ``j`` of ``b``; unselected positions are zero.
    """
    if a < 0 or b < 0:
        raise ValueError("pdep operands must be nonnegative")
    out = 0
    offset = 0
    while a:
        sel = a & 0xFF
        take = _POP8[sel]
        out |= _PDEP8[sel][b & ((1 << take) - 1)] << offset
        b >>= take
        offset += 8
        a >>= 8
    return out


# ---------------------------------------------------------------------------
# masks


class LaneMask:
    """Per-element predicate bits with a fixed width.

    Supports ``& | ^ ~ << >>``; shifts stay inside the width (``~`` and
    ``<<`` never set bits at positions >= width).  Equality is structural.
    """

    __slots__ = ("bits", "width")

    def __init__(self, bits: int, width: int):
        _check_width(width)
        if bits < 0 or bits >> width:
            raise ValueError(f"mask bits 0x{bits:x} do not fit a width-{width} mask")
        self.bits = bits
        self.width = width

    @classmethod
    def zeros(cls, width: int) -> "LaneMask":
        return cls(0, width)

    @classmethod
    def ones(cls, width: int) -> "LaneMask":
        return cls((1 << width) - 1, width)

    @classmethod
    def single(cls, index: int, width: int) -> "LaneMask":
        if not 0 <= index < width:
            raise ValueError(f"bit index {index} out of range for width {width}")
        return cls(1 << index, width)

    @classmethod
    def prefix(cls, count: int, width: int) -> "LaneMask":
        """Mask selecting the first ``count`` elements."""
        if not 0 <= count <= width:
            raise ValueError(f"prefix length {count} out of range for width {width}")
        return cls((1 << count) - 1, width)

    @classmethod
    def from_lanes(cls, flags: Iterable[int]) -> "LaneMask":
        """Build from element-order truth values (element 0 first)."""
        flags = list(flags)
        bits = 0
        for i, f in enumerate(flags):
            if f:
                bits |= 1 << i
        return cls(bits, len(flags))

    def to_lanes(self) -> tuple[int, ...]:
        return tuple(self.bits >> i & 1 for i in range(self.width))

    def test(self, index: int) -> bool:
        if not 0 <= index < self.width:
            raise ValueError(f"bit index {index} out of range for width {self.width}")
        return bool(self.bits >> index & 1)

    def popcount(self) -> int:
        return self.bits.bit_count()

    def truncate(self, width: int) -> "LaneMask":
        """Keep the low ``width`` bits as a narrower mask."""
        _check_width(width)
        return LaneMask(self.bits & ((1 << width) - 1), width)

    def _check_same(self, other: "LaneMask") -> None:
        if self.width != other.width:
            raise ValueError(f"mask width mismatch: {self.width} vs {other.width}")

    def __and__(self, other: "LaneMask") -> "LaneMask":
        self._check_same(other)
        return LaneMask(self.bits & other.bits, self.width)

    def __or__(self, other: "LaneMask") -> "LaneMask":
        self._check_same(other)
        return LaneMask(self.bits | other.bits, self.width)

    def __xor__(self, other: "LaneMask") -> "LaneMask":
        self._check_same(other)
        return LaneMask(self.bits ^ other.bits, self.width)

    def __invert__(self) -> "LaneMask":
        return LaneMask(self.bits ^ ((1 << self.width) - 1), self.width)

    def __lshift__(self, count: int) -> "LaneMask":
        if count < 0:
            raise ValueError("negative shift")
        return LaneMask((self.bits << count) & ((1 << self.width) - 1), self.width)

    def __rshift__(self, count: int) -> "LaneMask":
        if count < 0:
            raise ValueError("negative shift")
        return LaneMask(self.bits >> count, self.width)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaneMask):
            return NotImplemented
        return self.bits == other.bits and self.width == other.width

    def __hash__(self) -> int:
        return hash((self.bits, self.width))

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        lanes = "".join("1" if self.bits >> i & 1 else "0" for i in range(self.width))
        return f"LaneMask({lanes!r})"


def _mask_to_bools(mask: LaneMask) -> np.ndarray:
    raw = mask.bits.to_bytes((mask.width + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, np.uint8), bitorder="little", count=mask.width)


def _bools_to_mask(flags: np.ndarray, width: int) -> LaneMask:
    packed = np.packbits(flags, bitorder="little").tobytes()
    return LaneMask(int.from_bytes(packed, "little"), width)


# ---------------------------------------------------------------------------
# vectors


class _LaneVector:
    __slots__ = ("lanes",)

    _dtype: np.dtype
    _lane_bits: int

    def __init__(self, lanes):
        arr = np.asarray(lanes, dtype=self._dtype)
        if arr.ndim != 1:
            raise ValueError("lanes must be one-dimensional")
        _check_width(len(arr))
        self.lanes = arr

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, count: int):
        _check_width(count)
        return cls(np.zeros(count, cls._dtype))

    @classmethod
    def splat(cls, value: int, count: int):
        _check_width(count)
        return cls(np.full(count, value, cls._dtype))

    @classmethod
    def from_lanes(cls, values: Sequence[int]):
        return cls(np.asarray(values, cls._dtype))

    # views ----------------------------------------------------------------

    @property
    def count(self) -> int:
        return len(self.lanes)

    def to_lanes(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.lanes)

    def __getitem__(self, index: int) -> int:
        return int(self.lanes[index])

    # lane-wise comparisons ------------------------------------------------

    def _rhs(self, other):
        if isinstance(other, _LaneVector):
            if type(other) is not type(self) or other.count != self.count:
                raise ValueError("vector shape mismatch")
            return other.lanes
        return self._dtype.type(other)

    def lt(self, other) -> LaneMask:
        return _bools_to_mask(self.lanes < self._rhs(other), self.count)

    def le(self, other) -> LaneMask:
        return _bools_to_mask(self.lanes <= self._rhs(other), self.count)

    def ge(self, other) -> LaneMask:
        return _bools_to_mask(self.lanes >= self._rhs(other), self.count)

    def gt(self, other) -> LaneMask:
        return _bools_to_mask(self.lanes > self._rhs(other), self.count)

    def eq_lanes(self, other) -> LaneMask:
        return _bools_to_mask(self.lanes == self._rhs(other), self.count)

    # lane-wise arithmetic/bitwise (wrapping) ------------------------------

    def __and__(self, other):
        return type(self)(self.lanes & self._rhs(other))

    def __or__(self, other):
        return type(self)(self.lanes | self._rhs(other))

    def __xor__(self, other):
        return type(self)(self.lanes ^ self._rhs(other))

    def __add__(self, other):
        return type(self)(self.lanes + self._rhs(other))

    def __sub__(self, other):
        return type(self)(self.lanes - self._rhs(other))

    def __lshift__(self, count: int):
        if not 0 <= count < self._lane_bits:
            raise ValueError(f"lane shift must be in [0, {self._lane_bits})")
        return type(self)(self.lanes << count)

    def __rshift__(self, count: int):
        if not 0 <= count < self._lane_bits:
            raise ValueError(f"lane shift must be in [0, {self._lane_bits})")
        return type(self)(self.lanes >> count)

    # selection ------------------------------------------------------------

    @classmethod
    def select(cls, mask: LaneMask, when_set, when_clear):
        """Lane-wise ``mask ? when_set : when_clear``; operands may be ints."""
        sides = [when_set, when_clear]
        for i, side in enumerate(sides):
            if isinstance(side, _LaneVector):
                if type(side) is not cls or side.count != mask.width:
                    raise ValueError("select operand shape mismatch")
                sides[i] = side.lanes
            else:
                sides[i] = cls._dtype.type(side)
        return cls(np.where(_mask_to_bools(mask), sides[0], sides[1]))

    # structural equality --------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.count == other.count and bool(np.array_equal(self.lanes, other.lanes))

    def __hash__(self):
        return hash((type(self).__name__, self.to_lanes()))

    def __repr__(self) -> str:
        digits = self._lane_bits // 4
        body = " ".join(f"{int(v):0{digits}x}" for v in self.lanes)
        return f"{type(self).__name__}[{body}]"


class ByteVec(_LaneVector):
    """Vector of unsigned 8-bit lanes."""

    _dtype = np.dtype(np.uint8)
    _lane_bits = 8

    @classmethod
    def from_bytes(cls, data: bytes) -> "ByteVec":
        return cls(np.frombuffer(data, np.uint8))

    @classmethod
    def iota(cls, count: int) -> "ByteVec":
        """Identity index vector: lane i holds i."""
        _check_width(count)
        return cls(np.arange(count, dtype=np.uint8))

    def tobytes(self) -> bytes:
        return self.lanes.tobytes()

    def zero_extend_low(self) -> "WordVec":
        """Zero-extend the first count/2 byte lanes into word lanes."""
        return WordVec(self.lanes[: self.count // 2].astype(np.uint16))


class WordVec(_LaneVector):
    """Vector of unsigned 16-bit lanes."""

    _dtype = np.dtype(np.uint16)
    _lane_bits = 16

    @classmethod
    def from_utf16le_bytes(cls, data: bytes) -> "WordVec":
        return cls(np.frombuffer(data, "<u2").astype(np.uint16))

    def to_utf16le_bytes(self) -> bytes:
        return self.lanes.astype("<u2").tobytes()

    def zero_extend(self) -> "DwordVec":
        """Zero-extend every word lane into a dword lane (same lane count)."""
        return DwordVec(self.lanes.astype(np.uint32))

    def truncate_to_bytes(self) -> ByteVec:
        """Keep the low byte of every word lane (same lane count)."""
        return ByteVec((self.lanes & 0xFF).astype(np.uint8))

    def rotate(self, count: int) -> "WordVec":
        """Element rotation: out[i] = in[(i + count) mod lane_count]."""
        return WordVec(np.roll(self.lanes, -count))


class DwordVec(_LaneVector):
    """Vector of unsigned 32-bit lanes."""

    _dtype = np.dtype(np.uint32)
    _lane_bits = 32

    def as_bytes(self) -> ByteVec:
        """Little-endian byte view: lane i occupies bytes 4i..4i+3."""
        return ByteVec(self.lanes.astype("<u4").view(np.uint8))


# ---------------------------------------------------------------------------
# horizontal operations


def compress_bytes(mask: LaneMask, v: ByteVec) -> ByteVec:
    """Pack lanes selected by ``mask`` to the front; zero-fill the rest."""
    if mask.width != v.count:
        raise ValueError("compress mask width must equal the lane count")
    flags = _mask_to_bools(mask).astype(bool)
    out = np.zeros(v.count, np.uint8)
    picked = v.lanes[flags]
    out[: len(picked)] = picked
    return ByteVec(out)


def permute_bytes(v: ByteVec, indices: ByteVec) -> ByteVec:
    """Gather lanes: out[i] = v[indices[i] mod lane_count]."""
    if indices.count != v.count:
        raise ValueError("permute index vector must match the lane count")
    return ByteVec(v.lanes[indices.lanes % v.count])


def multishift(v: DwordVec, offsets: tuple[int, int, int, int]) -> DwordVec:
    """Per-lane 8-bit field extraction.

    Output byte k of every dword lane is bits [offsets[k], offsets[k] + 8) of
    that lane, where byte 0 is the least significant.  Offsets must lie in
    [0, 32); fields never wrap, bits past the top read as zero.
    ``(0, 8, 16, 24)`` is the identity.
    """
    if len(offsets) != 4 or any(not 0 <= o < 32 for o in offsets):
        raise ValueError("multishift needs four offsets in [0, 32)")
    out = np.zeros(v.count, np.uint32)
    for k, off in enumerate(offsets):
        out |= ((v.lanes >> np.uint32(off)) & np.uint32(0xFF)) << np.uint32(8 * k)
    return DwordVec(out)


def masked_load(buffer, mask: LaneMask) -> ByteVec:
    """Load bytes for the set lanes of ``mask``; cleared lanes read as zero.

    No byte of ``buffer`` at or past the highest set bit + 1 is touched, and
    the buffer must cover every set lane.
    """
    need = mask.bits.bit_length()
    view = memoryview(buffer)
    if len(view) < need:
        raise ValueError(f"masked load needs {need} bytes, buffer has {len(view)}")
    out = np.zeros(mask.width, np.uint8)
    if need:
        out[:need] = np.frombuffer(view[:need], np.uint8)
        out *= _mask_to_bools(mask)
    return ByteVec(out)


def masked_store(buffer, mask: LaneMask, v: ByteVec) -> None:
    """Store the set lanes of ``v`` into ``buffer``; other bytes untouched."""
    if mask.width != v.count:
        raise ValueError("store mask width must equal the lane count")
    need = mask.bits.bit_length()
    view = memoryview(buffer)
    if len(view) < need:
        raise BufferOverflowError(
            f"masked store needs {need} bytes, buffer has {len(view)}"
        )
    if need == 0:
        return
    bits = mask.bits
    if bits & (bits + 1) == 0:
        # contiguous prefix: bulk copy
        view[:need] = v.lanes[:need].tobytes()
        return
    lanes = v.lanes
    for i in range(need):
        if bits >> i & 1:
            view[i] = int(lanes[i])
