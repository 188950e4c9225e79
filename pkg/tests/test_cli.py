import json
import subprocess
import sys

import pytest

from isingforms import virasoro
from isingforms.cli import main


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestExitCodes:
    def test_passing_code_check(self):
        assert main(["codes", "check", "--code", "even:4", "--out", "/dev/null"]) == 0

    def test_failing_code_check(self):
        assert main(["codes", "check", "--code", "trivial:4", "--out", "/dev/null"]) == 1

    def test_unknown_code_is_usage_error(self, capsys):
        assert main(["codes", "check", "--code", "nosuch:4"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_weight_vector(self, capsys):
        code = main(["form", "verify", "--code", "even:4", "--H", "1/3,0,0,0"])
        assert code == 2

    def test_power_weight_mismatch(self, capsys):
        code = main(["form", "verify", "--code", "even:4", "--H", "0,0,0,0",
                     "--power", "3"])
        assert code == 2

    def test_bad_worker_env(self, capsys, monkeypatch):
        monkeypatch.setenv("ISINGFORMS_WORKERS", "many")
        assert main(["e8", "weight1"]) == 2

    def test_worker_env_accepted(self, capsys, monkeypatch):
        monkeypatch.setenv("ISINGFORMS_WORKERS", "3")
        assert main(["e8", "weight1", "--out", "/dev/null"]) == 0

    def test_missing_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["codes"])
        assert exc.value.code == 2

    def test_bad_h_for_dims(self, capsys):
        assert main(["vir", "dims", "--h", "1/3"]) == 2


class TestDeterminism:
    def test_json_twice_byte_identical(self, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            code = main(["dual", "--power", "4", "--code", "even:4",
                         "--H", "1/2,1/2,0,0", "--level", "1",
                         "--format", "json", "--out", str(p)])
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_out_writes_silently(self, capsys, tmp_path):
        target = tmp_path / "report.txt"
        main(["e8", "weight1", "--out", str(target)])
        assert capsys.readouterr().out == ""
        assert "total" in target.read_text()


class TestReports:
    def test_vir_dims_match_library(self, capsys):
        code, data = run_json(capsys, ["vir", "dims", "--h", "1/16",
                                       "--max-level", "8"])
        assert code == 0
        oracle = virasoro.graded_dimensions(virasoro.ising_params("1/16"), 8)
        assert data["dims"] == oracle
        assert data["central"] == {"n": 1, "d": 2}

    def test_codes_check_report(self, capsys):
        code, data = run_json(capsys, ["codes", "check", "--code", "hamming8"])
        assert code == 0
        assert data["type_ii"] is True
        assert data["self_dual"] is True
        assert data["code"]["words"] == 16
        dist = {row["weight"]: row["count"] for row in data["weight_distribution"]}
        assert dist == {0: 1, 4: 14, 8: 1}

    def test_codes_build_round_trip(self, capsys, tmp_path):
        assert main(["codes", "build", "--code", "even:4", "--full"]) == 0
        text = capsys.readouterr().out
        target = tmp_path / "even4.txt"
        target.write_text(text)
        from isingforms.codes import even_code, resolve_code
        rebuilt = resolve_code(str(target))
        assert set(rebuilt.words()) == set(even_code(4).words())

    def test_dual_worked_example(self, capsys):
        code, data = run_json(capsys, ["dual", "--power", "4", "--code", "even:4",
                                       "--H", "1/2,1/2,0,0", "--level", "1",
                                       "--compare"])
        assert code == 0
        assert data["index"] == {"n": 4, "d": 1}
        assert data["conformal_weight"] == {"n": 2, "d": 1}
        assert data["dual_contains_lattice"] is True
        assert data["self_dual"] is False
        assert data["compare"]["lattice_in_dual"] is True
        assert data["compare"]["dual_in_lattice"] is False
        gram = data["gram"]
        assert gram[0][0] == {"n": 2, "d": 1}

    def test_form_verify_vacuum(self, capsys):
        code, data = run_json(capsys, ["form", "verify", "--power", "4",
                                       "--code", "even:4", "--H", "0,0,0,0",
                                       "--max-level", "4"])
        assert code == 0
        assert data["omega_contained"] is True
        assert all(row["contained"] for row in data["scaled_components"])
        assert all(row["full_rank"] for row in data["levels"])
        by_level = {row["level"]: row["ambient"] for row in data["levels"]}
        assert by_level == {0: 1, 1: 0, 2: 4, 3: 4, 4: 14}

    def test_form_verify_module_eigenvalues(self, capsys):
        code, data = run_json(capsys, ["form", "verify", "--code", "even:4",
                                       "--H", "1/2,1/2,0,0", "--max-level", "2"])
        assert code == 0
        assert all(row["integral"] for row in data["eigenvalues"])
        values = {row["word"]: row["value"] for row in data["eigenvalues"]}
        assert values["0000"] == {"n": 1, "d": 1}
        assert values["1100"] == {"n": -1, "d": 1}

    def test_form_verify_inadmissible(self, capsys):
        code, data = run_json(capsys, ["form", "verify", "--code", "trivial:8",
                                       "--H", "0,0,0,0,0,0,0,0"])
        assert code == 1
        assert data["goodform"] is False
        assert "reason" in data

    def test_generated_doubled_form_stabilizes(self, capsys):
        code, data = run_json(capsys, ["form", "generated", "--gen", "2omega",
                                       "--max-level", "6"])
        assert code == 0
        assert data["stabilized"] is True
        assert data["omega_at_level_2"] is False

    def test_generated_plain_form_diverges(self, capsys):
        code, data = run_json(capsys, ["form", "generated", "--gen", "omega",
                                       "--max-level", "4"])
        assert code == 1
        assert data["stabilized"] is False

    def test_generated_bad_spec(self, capsys):
        assert main(["form", "generated", "--gen", "2sigma"]) == 2

    def test_corr_verdicts(self, capsys):
        code, data = run_json(capsys, ["corr", "--H1", "1/2,1/2,0,0",
                                       "--H2", "1/2,1/2,0,0", "--H3", "0,0,0,0",
                                       "--code", "even:4", "--c", "1",
                                       "--max-level", "4"])
        assert code == 0
        assert data["well_defined"]["passed"] is True
        assert data["verdict"]["integral"] is True
        assert data["base_exponent"] == {"n": -2, "d": 1}

        code, data = run_json(capsys, ["corr", "--H1", "1/2,1/2,0,0",
                                       "--H2", "1/2,1/2,0,0", "--H3", "0,0,0,0",
                                       "--code", "even:4", "--c", "1/2",
                                       "--max-level", "2"])
        assert code == 1
        assert data["verdict"]["integral"] is False
        assert data["verdict"]["witness"] == "v"
        assert data["verdict"]["witness_value"] == {"n": 1, "d": 2}

    def test_e8_breakdown(self, capsys):
        code, data = run_json(capsys, ["e8", "weight1"])
        assert code == 0
        assert data["total"] == 248
        assert data["two_half_dimension"] == 120
        assert data["sixteenth_copies"] == 128


class TestFormats:
    def test_tsv_has_tab_separated_rows(self, capsys):
        main(["e8", "weight1", "--format", "tsv"])
        out = capsys.readouterr().out
        rows = dict(line.split("\t") for line in out.strip().splitlines())
        assert rows["total"] == "248"

    def test_pretty_renders_fractions_plainly(self, capsys):
        main(["vir", "dims", "--h", "1/16", "--max-level", "2"])
        out = capsys.readouterr().out
        assert "1/16" in out
        assert "Fraction" not in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "isingforms", "e8", "weight1"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "248" in proc.stdout
