"""Exit codes, diagnostics, and file behavior of the command-line tool."""

import json

import pytest

from laneutf import scalar
from laneutf.cli import main
from laneutf.corpus import CorpusSpec, generate
from laneutf.engine import UTF8_TO_UTF16, swap_utf16_byte_order, transcode_to_bytes

SAMPLE_TEXT = "@§∈𝒪 plus ascii tail"


def run_cli(*argv):
    return main(list(argv))


class TestTranscode:
    def test_valid_utf8_to_utf16le(self, tmp_path):
        src = tmp_path / "in.u8"
        dst = tmp_path / "out.u16"
        src.write_bytes(SAMPLE_TEXT.encode())
        assert run_cli(
            "transcode", "--from", "utf8", "--to", "utf16le",
            "--in", str(src), "--out", str(dst),
        ) == 0
        assert dst.read_bytes() == SAMPLE_TEXT.encode("utf-16-le")

    def test_valid_utf16le_to_utf8(self, tmp_path):
        src = tmp_path / "in.u16"
        dst = tmp_path / "out.u8"
        src.write_bytes(SAMPLE_TEXT.encode("utf-16-le"))
        assert run_cli(
            "transcode", "--from", "utf16le", "--to", "utf8",
            "--in", str(src), "--out", str(dst),
        ) == 0
        assert dst.read_bytes() == SAMPLE_TEXT.encode()

    def test_injected_f5_reports_offset_and_writes_prefix(self, tmp_path, capsys):
        data = b"clean run\xf5trailing"
        expected_outcome, expected_payload = transcode_to_bytes(
            UTF8_TO_UTF16, data, engine="scalar"
        )
        src = tmp_path / "bad.u8"
        dst = tmp_path / "out.u16"
        src.write_bytes(data)
        assert run_cli(
            "transcode", "--from", "utf8", "--to", "utf16le",
            "--in", str(src), "--out", str(dst),
        ) == 1
        err = capsys.readouterr().err
        assert f"byte offset {expected_outcome.error_offset}" in err
        assert dst.read_bytes() == expected_payload

    def test_utf16be_round_trip_equals_swapped_le(self, tmp_path):
        src = tmp_path / "in.u8"
        be = tmp_path / "out.be"
        le = tmp_path / "out.le"
        src.write_bytes(SAMPLE_TEXT.encode())
        assert run_cli(
            "transcode", "--from", "utf8", "--to", "utf16be",
            "--in", str(src), "--out", str(be),
        ) == 0
        assert run_cli(
            "transcode", "--from", "utf8", "--to", "utf16le",
            "--in", str(src), "--out", str(le),
        ) == 0
        assert swap_utf16_byte_order(be.read_bytes()) == le.read_bytes()
        assert be.read_bytes() == SAMPLE_TEXT.encode("utf-16-be")

    def test_utf16be_input(self, tmp_path):
        src = tmp_path / "in.be"
        dst = tmp_path / "out.u8"
        src.write_bytes(SAMPLE_TEXT.encode("utf-16-be"))
        assert run_cli(
            "transcode", "--from", "utf16be", "--to", "utf8",
            "--in", str(src), "--out", str(dst),
        ) == 0
        assert dst.read_bytes() == SAMPLE_TEXT.encode()

    def test_unsupported_pairs_are_usage_errors(self, tmp_path):
        src = tmp_path / "in"
        src.write_bytes(b"x")
        for source, target in [("utf8", "utf8"), ("utf16le", "utf16be")]:
            assert run_cli(
                "transcode", "--from", source, "--to", target,
                "--in", str(src), "--out", str(tmp_path / "o"),
            ) == 2

    def test_missing_input_file(self, tmp_path):
        assert run_cli(
            "transcode", "--from", "utf8", "--to", "utf16le",
            "--in", str(tmp_path / "nope"), "--out", str(tmp_path / "o"),
        ) == 2

    def test_bad_engine_name(self, tmp_path):
        src = tmp_path / "in"
        src.write_bytes(b"x")
        assert run_cli(
            "transcode", "--from", "utf8", "--to", "utf16le",
            "--engine", "turbo", "--in", str(src), "--out", str(tmp_path / "o"),
        ) == 2

    def test_native_engine_unavailable(self, tmp_path):
        src = tmp_path / "in"
        src.write_bytes(b"x")
        assert run_cli(
            "transcode", "--from", "utf8", "--to", "utf16le",
            "--engine", "native", "--in", str(src), "--out", str(tmp_path / "o"),
        ) == 2

    def test_odd_length_utf16_input(self, tmp_path, capsys):
        src = tmp_path / "in.u16"
        dst = tmp_path / "out.u8"
        src.write_bytes(b"a\x00b")
        assert run_cli(
            "transcode", "--from", "utf16le", "--to", "utf8",
            "--in", str(src), "--out", str(dst),
        ) == 1
        assert "odd byte length" in capsys.readouterr().err
        assert dst.read_bytes() == b""

    def test_engine_choice_does_not_change_bytes(self, tmp_path):
        src = tmp_path / "in.u8"
        src.write_bytes(SAMPLE_TEXT.encode())
        outputs = []
        for engine in ["scalar", "emulated-8", "emulated-64"]:
            dst = tmp_path / f"out-{engine}"
            assert run_cli(
                "transcode", "--from", "utf8", "--to", "utf16le",
                "--engine", engine, "--in", str(src), "--out", str(dst),
            ) == 0
            outputs.append(dst.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]


class TestValidate:
    def test_valid_file(self, tmp_path, capsys):
        src = tmp_path / "ok.u8"
        src.write_bytes(SAMPLE_TEXT.encode())
        assert run_cli("validate", "--format", "utf8", "--in", str(src)) == 0
        out = capsys.readouterr().out
        assert "OK" in out
        assert str(len(SAMPLE_TEXT.encode())) in out

    def test_invalid_byte_offset_matches_reference(self, tmp_path, capsys):
        data = "prefix∇".encode() + b"\xf5" + b"tail"
        expected = scalar.validate_utf8(data)
        src = tmp_path / "bad.u8"
        src.write_bytes(data)
        assert run_cli("validate", "--format", "utf8", "--in", str(src)) == 1
        assert f"byte offset {expected.error_offset}" in capsys.readouterr().out

    def test_utf16be_lone_high(self, tmp_path, capsys):
        words_be = "ab".encode("utf-16-be") + b"\xd8\x35" + "cd".encode("utf-16-be")
        src = tmp_path / "bad.be"
        src.write_bytes(words_be)
        assert run_cli("validate", "--format", "utf16be", "--in", str(src)) == 1
        assert "word offset 2" in capsys.readouterr().out

    def test_utf16be_valid(self, tmp_path):
        src = tmp_path / "ok.be"
        src.write_bytes(SAMPLE_TEXT.encode("utf-16-be"))
        assert run_cli("validate", "--format", "utf16be", "--in", str(src)) == 0

    def test_odd_length(self, tmp_path, capsys):
        src = tmp_path / "odd.u16"
        src.write_bytes(b"\x41\x00\x42")
        assert run_cli("validate", "--format", "utf16le", "--in", str(src)) == 1
        assert "odd byte length" in capsys.readouterr().out


class TestCorpus:
    def test_deterministic_output_files(self, tmp_path):
        args = [
            "corpus", "--class", "threebyte-heavy", "--size-bytes", "512",
            "--seed", "42", "--out", str(tmp_path / "a.bin"),
        ]
        assert run_cli(*args) == 0
        first = (tmp_path / "a.bin").read_bytes()
        assert run_cli(*args) == 0
        assert (tmp_path / "a.bin").read_bytes() == first
        expected_utf8, _ = generate(CorpusSpec("threebyte-heavy", 512, seed=42))
        assert first == expected_utf8

    def test_utf16le_encoding_option(self, tmp_path):
        out = tmp_path / "b.bin"
        assert run_cli(
            "corpus", "--class", "mixed", "--size-bytes", "256",
            "--seed", "7", "--encoding", "utf16le", "--out", str(out),
        ) == 0
        _, expected_utf16 = generate(CorpusSpec("mixed", 256, seed=7))
        assert out.read_bytes() == expected_utf16

    def test_unknown_class_rejected_by_parser(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            run_cli(
                "corpus", "--class", "klingon", "--size-bytes", "64",
                "--out", str(tmp_path / "c.bin"),
            )
        assert excinfo.value.code == 2


class TestBench:
    def test_file_input_with_engine_comparison(self, tmp_path, capsys):
        src = tmp_path / "bench.u8"
        utf8, _ = generate(CorpusSpec("twobyte-heavy", 2048, seed=1))
        src.write_bytes(utf8)
        assert run_cli(
            "bench", "--in", str(src), "--engine", "scalar",
            "--engine", "emulated-64", "--iterations", "2", "--warmup", "1",
        ) == 0
        out_lines = capsys.readouterr().out.strip().splitlines()
        record = json.loads(out_lines[-1])
        assert record["outputs_match"] is True
        assert [r["engine"] for r in record["reports"]] == ["scalar", "emulated(64)"]
        assert all(r["repetitions"] == 2 for r in record["reports"])
        assert any("[scalar]" in line for line in out_lines)

    def test_corpus_spec_input(self, capsys):
        assert run_cli(
            "bench", "--direction", "utf16-to-utf8",
            "--in", "fourbyte-emoji:512:9", "--iterations", "1", "--warmup", "0",
        ) == 0
        record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert record["label"] == "fourbyte-emoji:512:9"
        assert record["direction"] == "utf16-to-utf8"
        _, utf16 = generate(CorpusSpec("fourbyte-emoji", 512, seed=9))
        assert record["reports"][0]["input_bytes"] == len(utf16)

    def test_unresolvable_input(self):
        assert run_cli("bench", "--in", "no-such-file-or-spec") == 2

    def test_zero_iterations_rejected(self):
        with pytest.raises(SystemExit) as excinfo:
            run_cli("bench", "--in", "mixed:64", "--iterations", "0")
        assert excinfo.value.code == 2


class TestDifftest:
    def test_small_campaign_passes(self, capsys):
        assert run_cli(
            "difftest", "--seed", "5", "--cases", "40", "--max-len", "128"
        ) == 0
        assert capsys.readouterr().out.startswith("PASS")

    def test_cases_required(self):
        with pytest.raises(SystemExit) as excinfo:
            run_cli("difftest", "--seed", "5")
        assert excinfo.value.code == 2


class TestParserPlumbing:
    def test_no_command_is_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            run_cli()
        assert excinfo.value.code == 2

    def test_module_entry_point_exists(self):
        import laneutf.__main__  # noqa: F401
