"""Deterministic text corpora and error-injection recipes.

Generation is a pure function of (spec, seed): the same spec always yields
the same text, in both encodings.  Script classes control the byte-length
profile of the output; the heavy classes keep at least 80% of their bytes
in the named sequence length.

Mutation takes valid input and plants exactly one violation of a chosen
rule at a position picked by strategy (start of input, near a chunk
boundary, at the tail, or seeded-random).  Corruptions preserve length so
chunk alignment downstream of the edit is unchanged.  The expected error
offset is computed by running the scalar validator on the result, never
assumed.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from laneutf import scalar
from laneutf.outcome import is_high_surrogate, is_surrogate

__all__ = [
    "SCRIPT_CLASSES",
    "UTF8_ERROR_CLASSES",
    "UTF16_ERROR_CLASSES",
    "POSITION_STRATEGIES",
    "SplitMix64",
    "CorpusSpec",
    "ErrorRecipe",
    "RecipeNotApplicable",
    "generate",
    "mutate",
]

_MASK64 = (1 << 64) - 1

SCRIPT_CLASSES = (
    "ascii-latin",
    "twobyte-heavy",
    "threebyte-heavy",
    "fourbyte-emoji",
    "mixed",
)

UTF8_ERROR_CLASSES = (
    "lead-c0c1",
    "stray-continuation",
    "truncated-sequence",
    "overlong-threebyte",
    "surrogate-in-utf8",
    "out-of-range",
)

UTF16_ERROR_CLASSES = (
    "lone-high",
    "lone-low",
    "swapped-pair",
)

POSITION_STRATEGIES = ("start", "chunk-boundary", "tail", "random")


class SplitMix64:
    """Standard splitmix64 sequence; documented so seeds are portable."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
        return z ^ (z >> 31)

    def next_below(self, bound: int) -> int:
        """Uniform-ish draw in [0, bound) via fixed-point multiply."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() * bound >> 64


@dataclass(frozen=True)
class CorpusSpec:
    script_class: str
    size_bytes: int
    seed: int = 0

    def __post_init__(self):
        if self.script_class not in SCRIPT_CLASSES:
            raise ValueError(f"unknown script class {self.script_class!r}")
        if self.size_bytes < 0:
            raise ValueError("size_bytes must be >= 0")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class ErrorRecipe:
    error_class: str
    position_strategy: str = "random"

    def __post_init__(self):
        if self.error_class not in UTF8_ERROR_CLASSES + UTF16_ERROR_CLASSES:
            raise ValueError(f"unknown error class {self.error_class!r}")
        if self.position_strategy not in POSITION_STRATEGIES:
            raise ValueError(f"unknown position strategy {self.position_strategy!r}")

    @property
    def targets_utf8(self) -> bool:
        return self.error_class in UTF8_ERROR_CLASSES


class RecipeNotApplicable(ValueError):
    """The input has no site where this recipe can plant its error."""


_ASCII_POOL = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    "     .,;:!?'\"()-\n"
)


def _sample_code_point(script_class: str, rng: SplitMix64) -> int:
    if script_class == "mixed":
        script_class = SCRIPT_CLASSES[rng.next_below(4)]
    if script_class == "ascii-latin":
        return ord(_ASCII_POOL[rng.next_below(len(_ASCII_POOL))])
    # heavy classes: one filler ASCII char in ten keeps the text word-like
    # while staying far above the 80% byte-fraction floor
    if rng.next_below(10) == 0:
        return ord(_ASCII_POOL[rng.next_below(len(_ASCII_POOL))])
    if script_class == "twobyte-heavy":
        return 0xA0 + rng.next_below(0x800 - 0xA0)
    if script_class == "threebyte-heavy":
        return 0x4E00 + rng.next_below(0x9FFF + 1 - 0x4E00)
    return 0x1F300 + rng.next_below(0x1FAFF + 1 - 0x1F300)


def _utf8_length(cp: int) -> int:
    if cp < 0x80:
        return 1
    if cp < 0x800:
        return 2
    if cp < 0x10000:
        return 3
    return 4


def generate(spec: CorpusSpec) -> tuple[bytes, bytes]:
    """Text of roughly ``size_bytes`` UTF-8 bytes, as (UTF-8, UTF-16LE).

    Characters are appended until the UTF-8 length reaches the target, so
    the output may overshoot by up to 3 bytes; single-byte classes hit the
    target exactly.
    """
    rng = SplitMix64(spec.seed)
    chars = []
    length = 0
    while length < spec.size_bytes:
        cp = _sample_code_point(spec.script_class, rng)
        chars.append(chr(cp))
        length += _utf8_length(cp)
    text = "".join(chars)
    return text.encode(), text.encode("utf-16-le")


def _utf8_spans(data: bytes) -> list[tuple[int, int]]:
    """(start, length) per character of valid UTF-8."""
    spans = []
    i = 0
    while i < len(data):
        b = data[i]
        length = 1 if b < 0x80 else 2 if b < 0xE0 else 3 if b < 0xF0 else 4
        spans.append((i, length))
        i += length
    return spans


def _pick_span(
    spans: list[tuple[int, int]],
    strategy: str,
    rng: SplitMix64,
    chunk_size: int,
    total_units: int,
) -> tuple[int, int]:
    if not spans:
        raise RecipeNotApplicable("no eligible site for this error class")
    if strategy == "start":
        return spans[0]
    if strategy == "tail":
        return spans[-1]
    if strategy == "random":
        return spans[rng.next_below(len(spans))]
    boundaries = range(chunk_size, total_units, chunk_size)
    if not boundaries:
        raise RecipeNotApplicable("input shorter than one chunk")
    target = boundaries[rng.next_below(len(boundaries))]
    straddling = [s for s in spans if s[0] < target < s[0] + s[1]]
    if straddling:
        return straddling[0]
    return min(spans, key=lambda s: (abs(s[0] - target), s[0]))


_REQUIRED_SPAN_LENGTH = {
    "overlong-threebyte": 3,
    "surrogate-in-utf8": 3,
    "out-of-range": 4,
}


def _mutate_utf8(
    data: bytes, recipe: ErrorRecipe, rng: SplitMix64, chunk_size: int
) -> bytes:
    spans = _utf8_spans(data)
    need = _REQUIRED_SPAN_LENGTH.get(recipe.error_class)
    if need is not None:
        spans = [s for s in spans if s[1] == need]
    start, length = _pick_span(spans, recipe.position_strategy, rng, chunk_size, len(data))
    buf = bytearray(data)
    cls = recipe.error_class
    if cls == "lead-c0c1":
        buf[start] = 0xC0 + rng.next_below(2)
    elif cls == "stray-continuation":
        buf[start] = 0x80
    elif cls == "truncated-sequence":
        if length == 1:
            buf[start] = 0xE2
        else:
            buf[start + length - 1] = 0x23
    elif cls == "overlong-threebyte":
        buf[start : start + 3] = b"\xe0\x80\x80"
    elif cls == "surrogate-in-utf8":
        buf[start : start + 3] = b"\xed\xa0\x80"
    else:
        buf[start : start + 4] = (b"\xf4\x90\x80\x80", b"\xf5\x90\x80\x80")[
            rng.next_below(2)
        ]
    return bytes(buf)


def _mutate_utf16(
    data: bytes, recipe: ErrorRecipe, rng: SplitMix64, chunk_size: int
) -> bytes:
    words = list(struct.unpack("<%dH" % (len(data) // 2), data))
    cls = recipe.error_class
    if cls == "swapped-pair":
        spans = [(i, 2) for i, w in enumerate(words) if is_high_surrogate(w)]
    else:
        spans = [(i, 1) for i, w in enumerate(words) if not is_surrogate(w)]
    index, _length = _pick_span(
        spans, recipe.position_strategy, rng, chunk_size, len(words)
    )
    if cls == "lone-high":
        words[index] = 0xD800 + rng.next_below(0x400)
    elif cls == "lone-low":
        words[index] = 0xDC00 + rng.next_below(0x400)
    else:
        words[index], words[index + 1] = words[index + 1], words[index]
    return struct.pack("<%dH" % len(words), *words)


def mutate(
    data: bytes, recipe: ErrorRecipe, *, seed: int = 0, chunk_size: int = 64
) -> tuple[bytes, int]:
    """Plant the recipe's error in valid ``data``.

    Returns (mutated, expected_offset); the offset is in code units and
    comes from the scalar validator run on the mutated result.  Raises
    RecipeNotApplicable when the input offers no suitable site.
    """
    rng = SplitMix64(seed)
    if recipe.targets_utf8:
        mutated = _mutate_utf8(data, recipe, rng, chunk_size)
        outcome = scalar.validate_utf8(mutated)
    else:
        mutated = _mutate_utf16(data, recipe, rng, chunk_size)
        outcome = scalar.validate_utf16le(mutated)
    if outcome.ok:
        raise RecipeNotApplicable(
            f"{recipe.error_class} mutation left the input valid"
        )
    return mutated, outcome.error_offset
