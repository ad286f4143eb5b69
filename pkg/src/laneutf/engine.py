"""Unified transcode/validate entry points with backend selection.

Three backend families exist: the scalar reference, the emulated vector
engines parameterized by lane count, and a native kernel that would
require both a capable CPU (the five AVX-512 extensions checked below)
and a compiled extension module.  This build ships no compiled extension,
so ``native`` is reported as unavailable even on capable hosts; the
detection logic still runs so capability is visible in the inventory.

Backend choice never changes results: every engine returns the same
(status, consumed, written) and the same payload bytes for the same
input.  The differential tests enforce this; the facade only routes.

The LANEUTF_ENGINE environment variable supplies a default engine name
(e.g. ``scalar``, ``emulated-16``) for calls that do not pass one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

from laneutf import scalar, utf8_to_utf16, utf16_to_utf8
from laneutf.outcome import TranscodeOutcome

__all__ = [
    "UTF8_TO_UTF16",
    "UTF16_TO_UTF8",
    "DIRECTIONS",
    "ENGINE_ENV_VAR",
    "EngineKind",
    "EngineInventory",
    "parse_engine",
    "resolve_engine",
    "detect",
    "transcode",
    "transcode_to_bytes",
    "validate",
    "swap_utf16_byte_order",
    "worst_case_output_bytes",
]

UTF8_TO_UTF16 = "utf8-to-utf16"
UTF16_TO_UTF8 = "utf16-to-utf8"
DIRECTIONS = (UTF8_TO_UTF16, UTF16_TO_UTF8)

ENGINE_ENV_VAR = "LANEUTF_ENGINE"

_NATIVE_FEATURES = frozenset(
    {"avx512f", "avx512bw", "avx512dq", "avx512vbmi", "avx512_vbmi2"}
)
# cpuinfo spells vbmi2 with an underscore on some kernels and without on
# others; accept either
_NATIVE_FEATURE_ALIASES = {"avx512_vbmi2": {"avx512_vbmi2", "avx512vbmi2"}}


@dataclass(frozen=True)
class EngineKind:
    """A selectable backend: ``scalar``, ``emulated(n)``, or ``native``."""

    family: str
    lane_count: int | None = None

    def __post_init__(self):
        if self.family not in ("scalar", "emulated", "native"):
            raise ValueError(f"unknown engine family {self.family!r}")
        if (self.family == "emulated") != (self.lane_count is not None):
            raise ValueError("lane_count is for emulated engines only")

    @classmethod
    def scalar_kind(cls) -> "EngineKind":
        return cls("scalar")

    @classmethod
    def emulated(cls, lane_count: int) -> "EngineKind":
        return cls("emulated", lane_count)

    @classmethod
    def native(cls) -> "EngineKind":
        return cls("native")

    def describe(self) -> str:
        if self.family == "emulated":
            return f"emulated({self.lane_count})"
        return self.family


def parse_engine(text: str) -> EngineKind:
    """Accepts ``scalar``, ``native``, ``emulated``, ``emulated-N``, ``emulated(N)``."""
    name = text.strip().lower()
    if name == "scalar":
        return EngineKind.scalar_kind()
    if name == "native":
        return EngineKind.native()
    if name == "emulated":
        return EngineKind.emulated(64)
    for prefix, suffix in (("emulated-", ""), ("emulated(", ")")):
        if name.startswith(prefix) and name.endswith(suffix) and len(name) > len(prefix) + len(suffix):
            body = name[len(prefix) : len(name) - len(suffix)]
            if body.isdigit():
                return EngineKind.emulated(int(body))
    raise ValueError(f"cannot parse engine name {text!r}")


def _parse_cpu_features(cpuinfo_text: str) -> frozenset[str]:
    features: set[str] = set()
    for line in cpuinfo_text.splitlines():
        key, _, value = line.partition(":")
        if key.strip().lower() in ("flags", "features"):
            features.update(value.split())
    return frozenset(features)


def _host_features() -> frozenset[str]:
    try:
        with open("/proc/cpuinfo", encoding="ascii", errors="replace") as fh:
            return _parse_cpu_features(fh.read())
    except OSError:
        return frozenset()


def _has_native_features(features: frozenset[str]) -> bool:
    for needed in _NATIVE_FEATURES:
        accepted = _NATIVE_FEATURE_ALIASES.get(needed, {needed})
        if not accepted & features:
            return False
    return True


@dataclass(frozen=True)
class EngineInventory:
    kinds: tuple[EngineKind, ...]
    cpu_features: frozenset[str]
    native_capable_host: bool

    def available(self, kind: EngineKind) -> bool:
        return kind in self.kinds


@lru_cache(maxsize=1)
def detect() -> EngineInventory:
    """Enumerate usable engines; stable for the life of the process."""
    features = _host_features()
    kinds = [EngineKind.scalar_kind()]
    kinds += [EngineKind.emulated(n) for n in utf8_to_utf16.SUPPORTED_LANE_COUNTS]
    # a native kernel needs the CPU features and a compiled backend; the
    # pure-Python build never provides the latter
    return EngineInventory(
        kinds=tuple(kinds),
        cpu_features=features,
        native_capable_host=_has_native_features(features),
    )


def resolve_engine(engine: EngineKind | str | None = None) -> EngineKind:
    """Engine named by the argument, else the environment, else emulated(64)."""
    if engine is None:
        named = os.environ.get(ENGINE_ENV_VAR)
        return parse_engine(named) if named else EngineKind.emulated(64)
    if isinstance(engine, str):
        return parse_engine(engine)
    return engine


def _check_direction(direction: str) -> None:
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")


def worst_case_output_bytes(direction: str, input_length: int) -> int:
    _check_direction(direction)
    if direction == UTF8_TO_UTF16:
        return 2 * input_length
    return 3 * (input_length // 2)


def transcode(
    direction: str,
    data: bytes,
    out,
    *,
    engine: EngineKind | str | None = None,
) -> TranscodeOutcome:
    """Route one transcode call to the chosen backend.

    ``consumed`` and ``written`` count code units of the source and
    destination formats.  ``out`` must hold the worst case (see
    worst_case_output_bytes).  The emulated lane count 128 exists only
    for UTF-8 to UTF-16.
    """
    _check_direction(direction)
    kind = resolve_engine(engine)
    if kind.family == "native":
        inventory = detect()
        if not inventory.available(kind):
            raise ValueError(
                "native engine unavailable: no compiled backend in this build"
                + ("" if inventory.native_capable_host else " and the CPU lacks the feature set")
            )
    if kind.family == "scalar":
        if direction == UTF8_TO_UTF16:
            outcome, payload = scalar.transcode_utf8_to_utf16le(data)
        else:
            outcome, payload = scalar.transcode_utf16le_to_utf8(data)
        memoryview(out)[: len(payload)] = payload
        return outcome
    runner = utf8_to_utf16.run if direction == UTF8_TO_UTF16 else utf16_to_utf8.run
    return runner(data, out, lane_count=kind.lane_count)


def transcode_to_bytes(
    direction: str,
    data: bytes,
    *,
    engine: EngineKind | str | None = None,
) -> tuple[TranscodeOutcome, bytes]:
    """Transcode into a fresh worst-case buffer; returns outcome + payload."""
    _check_direction(direction)
    out = bytearray(worst_case_output_bytes(direction, len(data)))
    outcome = transcode(direction, data, out, engine=engine)
    unit = 2 if direction == UTF8_TO_UTF16 else 1
    return outcome, bytes(out[: unit * outcome.written])


def validate(
    direction: str,
    data: bytes,
    *,
    engine: EngineKind | str | None = None,
) -> TranscodeOutcome:
    """Validation via the chosen engine; written is always 0."""
    _check_direction(direction)
    kind = resolve_engine(engine)
    if kind.family == "scalar":
        if direction == UTF8_TO_UTF16:
            return scalar.validate_utf8(data)
        return scalar.validate_utf16le(data)
    outcome, _payload = transcode_to_bytes(direction, data, engine=kind)
    return TranscodeOutcome(outcome.status, outcome.consumed, 0)


def swap_utf16_byte_order(data: bytes) -> bytes:
    """Byte-swap every 16-bit unit (LE <-> BE)."""
    if len(data) % 2:
        raise ValueError("UTF-16 input must have even byte length")
    swapped = bytearray(len(data))
    swapped[0::2] = data[1::2]
    swapped[1::2] = data[0::2]
    return bytes(swapped)
