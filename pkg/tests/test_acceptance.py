"""Release acceptance gates.

One test per numbered criterion, so ``pytest -v tests/test_acceptance.py``
prints exactly one pass/fail line for each.  Every criterion carries a
wall-clock budget asserted inside the test; a budget violation fails the
criterion even when the checked values are correct.  Run order puts the
sub-second checks first and the exhaustive sweeps last.
"""

import time
from contextlib import contextmanager

import pytest

from laneutf import scalar
from laneutf.bench import run_bench
from laneutf.corpus import CorpusSpec, generate
from laneutf.difftest import run_campaign
from laneutf.engine import (
    UTF8_TO_UTF16,
    UTF16_TO_UTF8,
    EngineKind,
    detect,
    transcode_to_bytes,
)
from laneutf.substrate import ByteVec, LaneMask, compress_bytes, pdep, pext
from laneutf.utf8_to_utf16 import assemble, classify, commit, fixup_surrogates
from laneutf.utf8_to_utf16 import run as run_utf8_to_utf16
from laneutf.utf16_to_utf8 import run as run_utf16_to_utf8

from .test_scalar import BOUNDARY_ROWS, SAMPLE_UTF8, SAMPLE_WORDS, words_to_bytes

# scalar reference plus the widest emulated engine
ENGINES = ("scalar", "emulated-64")


@contextmanager
def budget(seconds: float, label: str):
    started = time.perf_counter()
    yield
    elapsed = time.perf_counter() - started
    assert elapsed < seconds, f"{label}: {elapsed:.2f}s exceeds budget {seconds:g}s"
    print(f"{label}: PASS in {elapsed:.2f}s (budget {seconds:g}s)")


def mask8(pattern: str) -> LaneMask:
    """Eight-lane mask written in element order, element 0 leftmost."""
    return LaneMask.from_lanes(int(c) for c in pattern)


def test_criterion_1_boundary_code_point_table():
    with budget(1.0, "criterion 1, boundary code point table"):
        for engine in ENGINES:
            for _cp, utf8_hex, utf16_words in BOUNDARY_ROWS:
                utf8 = bytes.fromhex(utf8_hex)
                utf16 = words_to_bytes(utf16_words)
                outcome, payload = transcode_to_bytes(
                    UTF8_TO_UTF16, utf8, engine=engine
                )
                assert outcome.ok and payload == utf16, (engine, utf8_hex)
                outcome, payload = transcode_to_bytes(
                    UTF16_TO_UTF8, utf16, engine=engine
                )
                assert outcome.ok and payload == utf8, (engine, utf8_hex)


def test_criterion_2_worked_sample_string():
    with budget(1.0, "criterion 2, worked sample string"):
        utf16 = words_to_bytes(SAMPLE_WORDS)
        for engine in ENGINES:
            outcome, payload = transcode_to_bytes(
                UTF8_TO_UTF16, SAMPLE_UTF8, engine=engine
            )
            assert outcome.ok and payload == utf16, engine
            outcome, payload = transcode_to_bytes(
                UTF16_TO_UTF8, utf16, engine=engine
            )
            assert outcome.ok and payload == SAMPLE_UTF8, engine


def test_criterion_3_mask_tables_and_commit_example():
    with budget(1.0, "criterion 3, eight-lane mask tables and commit"):
        masks = classify(ByteVec.from_bytes(bytes.fromhex("78e28887f09d9493")))
        assert masks.m1 == mask8("10000000")
        assert masks.m234 == mask8("01001000")
        assert masks.m34 == mask8("01001000")
        assert masks.m4 == mask8("00001000")
        assert masks.m1234 == mask8("11001000")
        assert masks.m_plus3 == mask8("00000001")
        assert masks.m_end == mask8("10010011")

        masks = classify(ByteVec.from_bytes(bytes.fromhex("ceb5e289a4c2b131")))
        assert masks.m_end == mask8("01001010")

        w = ByteVec.from_bytes(bytes.fromhex("c2b1313df09d92aa"))
        masks = classify(w)
        assert masks.m_end == mask8("01110011")
        assembled = assemble(w, masks)
        _W_out, _M_lo, M_hi = fixup_surrogates(masks, assembled.W_sum)
        m_processed, n_in, n_out = commit(masks, M_hi, LaneMask.ones(8))
        assert m_processed == mask8("01110000").bits
        assert (n_in, n_out) == (4, 3)


def test_criterion_4_bit_manipulation_diagrams():
    with budget(1.0, "criterion 4, pext/pdep/compress diagrams"):
        assert pext(0b1010111011000100, 0b1000101011110001) == 0b10101110
        assert pdep(0b1010111011000100, 0b1011010010101110) == 0b1000101011000000
        packed = compress_bytes(
            LaneMask(0xCD, 8),
            ByteVec.from_bytes(bytes((0x12, 0x34, 0x56, 0x78, 0x9A, 0xBC, 0xDE, 0xF0))),
        )
        assert packed.tobytes() == bytes((0x12, 0x56, 0x78, 0xDE, 0xF0, 0, 0, 0))


def test_criterion_8_masked_store_canary():
    with budget(60.0, "criterion 8, no write past reported output"):
        base = "aµ∇𝒪" * 8
        data_full = base.encode("utf-16-le")
        for lane_count in (8, 16, 32, 64):
            for tail_words in range(32):
                for extra in (b"", b"\x35\xd8"):  # also a dangling high surrogate
                    data = data_full[: 2 * tail_words] + extra
                    expected, payload = scalar.transcode_utf16le_to_utf8(data)
                    out = bytearray(b"\xa5" * (3 * (len(data) // 2) + 16))
                    outcome = run_utf16_to_utf8(data, out, lane_count=lane_count)
                    assert outcome == expected, (lane_count, tail_words, extra)
                    assert bytes(out[: outcome.written]) == payload
                    tail = out[outcome.written :]
                    assert all(b == 0xA5 for b in tail), (lane_count, tail_words, extra)


def test_criterion_5_exhaustive_code_point_round_trip():
    with budget(120.0, "criterion 5, all scalar values round-trip"):
        points = [cp for cp in range(0x110000) if not (0xD800 <= cp < 0xE000)]
        assert len(points) == 1_112_064
        text = "".join(map(chr, points))
        utf8 = text.encode()
        utf16 = text.encode("utf-16-le")
        for engine in ENGINES:
            outcome, words = transcode_to_bytes(UTF8_TO_UTF16, utf8, engine=engine)
            assert outcome.ok and words == utf16, engine
            outcome, back = transcode_to_bytes(UTF16_TO_UTF8, words, engine=engine)
            assert outcome.ok and back == utf8, engine
            outcome, encoded = transcode_to_bytes(UTF16_TO_UTF8, utf16, engine=engine)
            assert outcome.ok and encoded == utf8, engine
            outcome, back16 = transcode_to_bytes(UTF8_TO_UTF16, encoded, engine=engine)
            assert outcome.ok and back16 == utf16, engine


def test_criterion_6_exhaustive_byte_triple_sweep():
    with budget(600.0, "criterion 6, all 2^24 byte triples"):
        validate = scalar.validate_utf8
        run = run_utf8_to_utf16
        out = bytearray(16)
        mismatches = []
        for i in range(1 << 24):
            triple = i.to_bytes(3, "little")
            expected = validate(triple)
            actual = run(triple, out, lane_count=8)
            if (expected.status, expected.consumed) != (actual.status, actual.consumed):
                mismatches.append(
                    (triple.hex(), expected.status, expected.consumed,
                     actual.status, actual.consumed)
                )
                if len(mismatches) >= 5:
                    break
        assert not mismatches, mismatches


def test_criterion_7_differential_fuzz_campaign():
    with budget(900.0, "criterion 7, million-case differential fuzz"):
        report = run_campaign(seed=0x5EEDED, cases_per_direction=1_000_000)
        assert report.valid_cases > 0
        assert report.mutated_cases > 0
        assert report.passed, report.summary()


def test_criterion_9_native_throughput_floors():
    inventory = detect()
    native = EngineKind.native()
    if not inventory.available(native):
        capable = "capable" if inventory.native_capable_host else "not capable"
        pytest.skip(
            "criterion 9 is hardware-conditional: no compiled native backend "
            f"in this build (host CPU {capable})"
        )
    # enforced once a compiled backend ships on a capable host
    with budget(120.0, "criterion 9, native throughput floors"):
        utf8, utf16 = generate(CorpusSpec("twobyte-heavy", 1 << 20, seed=1))
        forward, _ = run_bench(
            UTF8_TO_UTF16, utf8, engine=native, repetitions=10, warmup=3
        )
        assert forward.bytes_per_second >= 1e9
        backward, _ = run_bench(
            UTF16_TO_UTF8, utf16, engine=native, repetitions=10, warmup=3
        )
        assert backward.bytes_per_second >= 2e9
