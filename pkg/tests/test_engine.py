"""Facade tests: routing, detection, overrides, byte-order helpers."""

import pytest

from hypothesis import given, settings, strategies as st

from laneutf import scalar
from laneutf.engine import (
    DIRECTIONS,
    ENGINE_ENV_VAR,
    UTF8_TO_UTF16,
    UTF16_TO_UTF8,
    EngineKind,
    _parse_cpu_features,
    detect,
    parse_engine,
    swap_utf16_byte_order,
    transcode,
    transcode_to_bytes,
    validate,
    worst_case_output_bytes,
)
from laneutf.outcome import TranscodeStatus

from tests.test_scalar import SAMPLE_UTF8, SAMPLE_WORDS, words_to_bytes

ALL_FEATURES = "flags\t\t: fpu sse avx2 avx512f avx512bw avx512dq avx512vbmi avx512_vbmi2"


class TestEngineKind:
    def test_describe(self):
        assert EngineKind.scalar_kind().describe() == "scalar"
        assert EngineKind.emulated(64).describe() == "emulated(64)"
        assert EngineKind.native().describe() == "native"

    @pytest.mark.parametrize(
        "name,expected",
        [
            ("scalar", EngineKind.scalar_kind()),
            ("native", EngineKind.native()),
            ("emulated", EngineKind.emulated(64)),
            ("emulated-8", EngineKind.emulated(8)),
            ("emulated(32)", EngineKind.emulated(32)),
            ("  Emulated-16 ", EngineKind.emulated(16)),
        ],
    )
    def test_parse(self, name, expected):
        assert parse_engine(name) == expected

    @pytest.mark.parametrize("name", ["", "turbo", "emulated-", "emulated()", "emulated-x8"])
    def test_parse_rejects(self, name):
        with pytest.raises(ValueError):
            parse_engine(name)

    def test_kind_invariants(self):
        with pytest.raises(ValueError):
            EngineKind("scalar", 8)
        with pytest.raises(ValueError):
            EngineKind("emulated")


class TestDetect:
    def test_scalar_and_emulated_always_present(self):
        inventory = detect()
        assert EngineKind.scalar_kind() in inventory.kinds
        for n in (8, 16, 32, 64, 128):
            assert EngineKind.emulated(n) in inventory.kinds

    def test_native_never_available_without_compiled_backend(self):
        inventory = detect()
        assert EngineKind.native() not in inventory.kinds

    def test_detection_stable_across_calls(self):
        assert detect() is detect()

    def test_feature_parsing(self):
        features = _parse_cpu_features(ALL_FEATURES)
        assert "avx512f" in features
        assert "avx512_vbmi2" in features
        assert _parse_cpu_features("model name: imaginary cpu") == frozenset()

    def test_feature_parsing_arm_spelling(self):
        features = _parse_cpu_features("Features\t: fp asimd evtstrm aes")
        assert "asimd" in features


class TestTranscodeRouting:
    @pytest.mark.parametrize(
        "engine",
        ["scalar", "emulated-8", "emulated-16", "emulated-64", None],
    )
    def test_forward_sample(self, engine):
        outcome, payload = transcode_to_bytes(UTF8_TO_UTF16, SAMPLE_UTF8, engine=engine)
        assert outcome.status is TranscodeStatus.OK
        assert payload == words_to_bytes(SAMPLE_WORDS)

    @pytest.mark.parametrize("engine", ["scalar", "emulated-8", "emulated-64", None])
    def test_backward_sample(self, engine):
        outcome, payload = transcode_to_bytes(
            UTF16_TO_UTF8, words_to_bytes(SAMPLE_WORDS), engine=engine
        )
        assert outcome.status is TranscodeStatus.OK
        assert payload == SAMPLE_UTF8

    @pytest.mark.parametrize("direction", DIRECTIONS)
    def test_empty_input(self, direction):
        for engine in ("scalar", "emulated-64"):
            outcome, payload = transcode_to_bytes(direction, b"", engine=engine)
            assert outcome.status is TranscodeStatus.OK
            assert payload == b""

    def test_caller_buffer_used(self):
        out = bytearray(worst_case_output_bytes(UTF8_TO_UTF16, len(SAMPLE_UTF8)))
        outcome = transcode(UTF8_TO_UTF16, SAMPLE_UTF8, out, engine="scalar")
        assert bytes(out[: 2 * outcome.written]) == words_to_bytes(SAMPLE_WORDS)

    def test_native_request_fails_clearly(self):
        with pytest.raises(ValueError, match="native engine unavailable"):
            transcode_to_bytes(UTF8_TO_UTF16, b"abc", engine="native")

    def test_unknown_direction_rejected(self):
        with pytest.raises(ValueError):
            transcode_to_bytes("utf8-to-utf32", b"")

    def test_env_var_override(self, monkeypatch):
        monkeypatch.setenv(ENGINE_ENV_VAR, "scalar")
        outcome, payload = transcode_to_bytes(UTF8_TO_UTF16, SAMPLE_UTF8)
        assert payload == words_to_bytes(SAMPLE_WORDS)
        monkeypatch.setenv(ENGINE_ENV_VAR, "turbo")
        with pytest.raises(ValueError):
            transcode_to_bytes(UTF8_TO_UTF16, SAMPLE_UTF8)

    @given(data=st.binary(max_size=150))
    @settings(max_examples=50, deadline=None)
    def test_engines_pairwise_equal_utf8(self, data):
        results = [
            transcode_to_bytes(UTF8_TO_UTF16, data, engine=e)
            for e in ("scalar", "emulated-8", "emulated-64")
        ]
        assert results[0] == results[1] == results[2]

    @given(words=st.lists(st.integers(0, 0xFFFF), max_size=80))
    @settings(max_examples=50, deadline=None)
    def test_engines_pairwise_equal_utf16(self, words):
        data = words_to_bytes(words)
        results = [
            transcode_to_bytes(UTF16_TO_UTF8, data, engine=e)
            for e in ("scalar", "emulated-8", "emulated-64")
        ]
        assert results[0] == results[1] == results[2]


class TestValidate:
    @pytest.mark.parametrize("engine", ["scalar", "emulated-64"])
    def test_validate_reports_no_output(self, engine):
        outcome = validate(UTF8_TO_UTF16, SAMPLE_UTF8, engine=engine)
        assert outcome.status is TranscodeStatus.OK
        assert outcome.written == 0
        bad = validate(UTF8_TO_UTF16, b"ab\x80cd", engine=engine)
        assert bad.status is TranscodeStatus.MALFORMED_INPUT
        assert bad.error_offset == 2

    @pytest.mark.parametrize("engine", ["scalar", "emulated-64"])
    def test_validate_utf16(self, engine):
        data = words_to_bytes([0x41, 0xD835, 0xDCAA])
        assert validate(UTF16_TO_UTF8, data, engine=engine).ok
        bad = validate(UTF16_TO_UTF8, words_to_bytes([0x41, 0xD835, 0x42]), engine=engine)
        assert bad.error_offset == 1


class TestByteOrderSwap:
    def test_swap_round_trip(self):
        le = words_to_bytes(SAMPLE_WORDS)
        be = swap_utf16_byte_order(le)
        assert be == "@§∈𝒪".encode("utf-16-be")
        assert swap_utf16_byte_order(be) == le

    def test_swap_rejects_odd_length(self):
        with pytest.raises(ValueError):
            swap_utf16_byte_order(b"\x00\x41\x00")

    @given(words=st.lists(st.integers(0, 0xFFFF), max_size=40))
    def test_swap_is_involution(self, words):
        data = words_to_bytes(words)
        assert swap_utf16_byte_order(swap_utf16_byte_order(data)) == data


class TestWorstCase:
    def test_bounds_cover_scalar_output(self):
        for text in ("", "a", "µ∇𝒪" * 20, "plain ascii"):
            utf8 = text.encode()
            utf16 = text.encode("utf-16-le")
            _, words = scalar.transcode_utf8_to_utf16le(utf8)
            assert len(words) <= worst_case_output_bytes(UTF8_TO_UTF16, len(utf8))
            _, payload = scalar.transcode_utf16le_to_utf8(utf16)
            assert len(payload) <= worst_case_output_bytes(UTF16_TO_UTF8, len(utf16))
