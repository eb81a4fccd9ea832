import json

import pytest

from earsim.cli import main
from earsim.utils.codec import parse_rules

GEN_ARGS = ["gen", "--n-attrs", "4", "--n-rules", "3", "--min-len", "1", "--max-len", "2", "--n-values", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestGen:
    def test_deterministic(self, capsys):
        first = run(capsys, "--seed", "3", *GEN_ARGS)
        second = run(capsys, "--seed", "3", *GEN_ARGS)
        assert first[0] == 0
        assert first[1] == second[1]
        assert len(parse_rules(first[1])) == 3

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "rules.txt"
        code, out, _ = run(capsys, *GEN_ARGS, "--output", str(target))
        assert code == 0
        assert out == ""
        assert len(parse_rules(target.read_text(encoding="utf-8"))) == 3

    def test_invalid_params(self, capsys):
        code, _, err = run(capsys, "gen", "--n-attrs", "2", "--max-len", "3")
        assert code == 1
        assert "error:" in err


class TestCover:
    def test_greedy(self, capsys, rule_file):
        code, out, _ = run(capsys, "cover", "--input", rule_file())
        assert code == 0
        assert out.splitlines() == ["greedy cover: a1", "size: 1"]

    def test_rule_json(self, capsys, rule_file):
        code, out, _ = run(capsys, "--json", "cover", "--input", rule_file(), "--method", "rule")
        assert code == 0
        assert json.loads(out) == {"method": "rule", "smax": False, "cover": [1, 2], "size": 2}

    def test_dump_hypergraph(self, capsys, rule_file):
        _, out, _ = run(capsys, "cover", "--input", rule_file(), "--dump-hypergraph", "--smax")
        assert out.splitlines()[:2] == ["nodes: a1 a2", "r0: a1 a2"]

    def test_exact_budget(self, capsys, rule_file):
        huge = "\n".join(f"a{i}=0 -> 0" for i in range(1, 30))
        code, _, err = run(capsys, "cover", "--input", rule_file(huge), "--method", "exact")
        assert code == 1
        assert "budget exceeded: attributes=29 > limit 20" in err


class TestSimulate:
    def test_text_output(self, capsys, rule_file):
        code, out, _ = run(capsys, "simulate", "--input", rule_file(), "--tuple", "a1=0,a2=1")
        assert code == 0
        assert out.splitlines() == ["answer: r0", "depth: 2", "rounds: 1 1", "trace: a1=0 a2=1"]

    def test_golden_json(self, capsys, rule_file, golden_result):
        code, out, _ = run(capsys, "--json", "simulate", "--input", rule_file(), "--tuple", "a1=0,a2=1")
        assert code == 0
        assert json.loads(out) == golden_result

    def test_unknown_value_treated_as_star(self, capsys, rule_file):
        code, out, _ = run(capsys, "--json", "simulate", "--input", rule_file(), "--tuple", "a1=9,a2=1")
        assert code == 0
        data = json.loads(out)
        assert data["trace"] == [{"attribute": 1, "value": "*"}]
        assert data["answer"] == []

    def test_missing_input_is_usage_error(self, capsys):
        code, _, err = run(capsys, "simulate", "--tuple", "a1=0")
        assert code == 2
        assert "rule file grammar" in err

    def test_parse_error_position(self, capsys, rule_file):
        code, _, err = run(capsys, "simulate", "--input", rule_file("a1=0 & a1=1 -> 2\n"), "--tuple", "a1=0")
        assert code == 1
        assert "line 1, column 8: repeated attribute a1" in err

    def test_invalid_utf8_is_located(self, capsys, tmp_path):
        path = tmp_path / "latin1.txt"
        path.write_bytes(b"a1=0 -> \xff\n")
        code, _, err = run(capsys, "cover", "--input", str(path))
        assert code == 1
        assert "line 1, column 9: invalid UTF-8 byte 0xff" in err


class TestExactAndVerify:
    def test_exact_depth(self, capsys, rule_file):
        code, out, _ = run(capsys, "exact-depth", "--input", rule_file())
        assert code == 0
        assert out.strip() == "h_EAR: 2"

    def test_exact_depth_budget(self, capsys, rule_file):
        code, _, err = run(capsys, "exact-depth", "--input", rule_file(), "--max-rules", "1")
        assert code == 1
        assert "rules=2" in err

    def test_verify_single(self, capsys, rule_file):
        code, out, _ = run(capsys, "verify", "--input", rule_file())
        assert code == 0
        assert "h_EAR=2 beta=1 d=2" in out
        assert "FAIL" not in out

    def test_verify_exhaustive(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--exhaustive", "--max-n", "2", "--max-rules", "2", "--max-len", "2", "--values", "2"
        )
        assert code == 0
        assert out.splitlines()[0] == "systems: 171"
        assert "FAIL" not in out


class TestBench:
    ARGS = ["bench", "--cell", "4:4:1:2:2", "--cell", "6:4:3:4:2", "--seeds", "2", "--tuples", "3", "--workers", "2"]

    def test_csv_on_stdout(self, capsys):
        code, out, err = run(capsys, "--seed", "1", *self.ARGS)
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("seed,n,d,k,rules,tuple_id,strategy")
        assert len(lines) == 1 + 2 * 2 * 3 * 2
        assert "depth by d(S) and strategy" in err

    def test_byte_identical(self, capsys):
        assert run(capsys, "--seed", "1", *self.ARGS)[1] == run(capsys, "--seed", "1", *self.ARGS)[1]

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "bench.csv"
        code, out, _ = run(capsys, *self.ARGS, "--output", str(target))
        assert code == 0
        assert "depth by d(S) and strategy" in out
        assert len(target.read_text(encoding="utf-8").splitlines()) == 1 + 2 * 2 * 3 * 2

    def test_exact_on_oversized_cell(self, capsys):
        code, _, err = run(capsys, "bench", "--cell", "12:8:6:8:2", "--exact")
        assert code == 1
        assert "budget exceeded" in err

    def test_unknown_strategy(self, capsys):
        code, _, _ = run(capsys, "bench", "--strategies", "greedy,random")
        assert code == 2


class TestPresets:
    def test_config_file_presets_flags(self, capsys, tmp_path):
        preset = tmp_path / "gen.conf"
        preset.write_text("seed=3\nn-attrs=4\nN_RULES=3\nmax_len=2\n", encoding="utf-8")
        from_file = run(capsys, "--config", str(preset), "gen")
        explicit = run(capsys, "--seed", "3", "gen", "--n-attrs", "4", "--n-rules", "3", "--max-len", "2")
        assert from_file == explicit

    def test_command_line_wins(self, capsys, tmp_path):
        preset = tmp_path / "gen.conf"
        preset.write_text("n_rules=5\n", encoding="utf-8")
        code, out, _ = run(capsys, "--config", str(preset), "gen", "--n-rules", "2")
        assert code == 0
        assert len(parse_rules(out)) == 2

    def test_boolean_and_list_presets(self, capsys, tmp_path):
        preset = tmp_path / "bench.conf"
        preset.write_text("cell=4:4:1:2:2\nseeds=1\ntuples=2\ncover_full=yes\n", encoding="utf-8")
        code, out, _ = run(capsys, "--config", str(preset), "bench")
        assert code == 0
        assert len(out.splitlines()) == 1 + 2 * 4

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "--config", str(tmp_path / "nope.conf"), "gen")
        assert code == 1
        assert "config file not found" in err


class TestGlobalFlagsAfterCommand:
    def test_json_after_command(self, capsys, rule_file, golden_result):
        code, out, _ = run(capsys, "simulate", "--input", rule_file(), "--tuple", "a1=0,a2=1", "--json")
        assert code == 0
        assert json.loads(out) == golden_result

    def test_seed_after_command(self, capsys):
        after = run(capsys, *GEN_ARGS, "--seed", "5")
        before = run(capsys, "--seed", "5", *GEN_ARGS)
        assert after[0] == 0
        assert after == before

    def test_global_seed_kept_when_command_omits_it(self, capsys):
        global_only = run(capsys, "--seed", "5", *GEN_ARGS)
        default = run(capsys, *GEN_ARGS)
        assert global_only != default

    def test_seed_preset_applies(self, capsys, tmp_path):
        preset = tmp_path / "gen.conf"
        preset.write_text("seed=5\n", encoding="utf-8")
        assert run(capsys, "--config", str(preset), *GEN_ARGS) == run(capsys, "--seed", "5", *GEN_ARGS)

    def test_command_seed_wins_over_preset(self, capsys, tmp_path):
        preset = tmp_path / "gen.conf"
        preset.write_text("seed=5\n", encoding="utf-8")
        assert run(capsys, "--config", str(preset), *GEN_ARGS, "--seed", "7") == run(capsys, "--seed", "7", *GEN_ARGS)


def test_no_command_is_usage_error(capsys):
    code, _, err = run(capsys)
    assert code == 2
    assert "usage:" in err


def test_help_exits_cleanly(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "exact-depth" in out
