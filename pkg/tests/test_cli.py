"""Command-line interface: every documented invocation parses and runs."""

import json
import math

import numpy as np
import pytest

from qfoundry import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    payload = json.loads(out)
    assert payload["schema"] == "qfoundry/1"
    return payload


def test_help_exits_zero():
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["--help"])
    assert excinfo.value.code == 0


def test_ks_check_peres(capsys):
    payload = run_json(capsys, "ks", "check", "--set", "peres33")
    assert payload["colorable"] is False
    assert payload["bases"] == 16
    assert payload["pairs"] == 24
    assert payload["colorings"] is None


def test_ks_check_cabello_with_count(capsys):
    payload = run_json(capsys, "ks", "check", "--set", "cabello18", "--count")
    assert payload["colorable"] is False
    assert payload["colorings"] == 0


def test_ks_check_completed_variant(capsys):
    payload = run_json(capsys, "ks", "check", "--set", "peres33", "--complete-pairs")
    assert payload["vectors"] == 57
    assert payload["colorable"] is False
    assert payload["pairs"] == 0


def test_ks_check_unknown_set(capsys):
    code, _, err = run_cli(capsys, "ks", "check", "--set", "nonsense")
    assert code == 2
    assert "unknown dataset" in err


def test_ks_check_custom_file(capsys, tmp_path):
    from qfoundry.exact import ExactVector, VectorSet

    path = tmp_path / "triad.json"
    VectorSet(
        3, [ExactVector([1, 0, 0], "x"), ExactVector([0, 1, 0], "y"), ExactVector([0, 0, 1], "z")]
    ).dump(path)
    payload = run_json(capsys, "ks", "check", "--set", str(path), "--count")
    assert payload["colorable"] is True
    assert payload["colorings"] == 3


def test_ks_check_malformed_file(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{oops")
    code, _, err = run_cli(capsys, "ks", "check", "--set", str(path))
    assert code == 2
    assert "malformed" in err


def test_ks_parity(capsys):
    payload = run_json(capsys, "ks", "parity", "--set", "cabello18")
    assert payload["bases"] == 9
    assert payload["membership_counts"] == [2]
    assert payload["uncolorable"] is True


def test_ks_parity_not_applicable(capsys):
    code, out, _ = run_cli(capsys, "ks", "parity", "--set", "peres33")
    assert code == 1
    assert json.loads(out)["applicable"] is False


def test_meyer_verify(capsys):
    payload = run_json(capsys, "meyer", "verify", "--max-n", "10")
    assert payload["violations"] == 0
    assert payload["rays"] > 0


def test_quantum_reconstruct(capsys):
    payload = run_json(capsys, "quantum", "reconstruct", "--dim", "3", "--seed", "11")
    assert payload["max_entry_error"] < 1e-10
    assert payload["passed"] is True


def test_quantum_generator(capsys):
    payload = run_json(capsys, "quantum", "generator", "--n", "4")
    assert payload["max_residual"] < 1e-8
    assert len(payload["alpha"]) == 4


def test_bell_chsh_paper_angles(capsys):
    payload = run_json(
        capsys, "bell", "chsh", "--angles", "0,1.5707963,5.4977871,3.9269908"
    )
    assert payload["value"] == pytest.approx(2.8284271, abs=1e-6)


def test_bell_chsh_bad_angles(capsys):
    code, _, err = run_cli(capsys, "bell", "chsh", "--angles", "1,2,3")
    assert code == 2
    assert "needs 4" in err


def test_bell_logical_default_angles(capsys):
    payload = run_json(capsys, "bell", "logical")
    assert payload["lhs"] == pytest.approx(0.5, abs=1e-12)
    assert payload["rhs_sum"] == pytest.approx(0.375, abs=1e-12)
    assert payload["violated"] is True


def test_bell_logical_sequential(capsys):
    payload = run_json(capsys, "bell", "logical", "--sequential")
    seq = payload["sequential"]
    assert seq["terms"][2] == pytest.approx(5 / 16, abs=1e-12)
    assert seq["violated"] is False


def test_fwt_bounds(capsys):
    payload = run_json(capsys, "fwt", "bounds", "--eps-s", "0", "--eps-t", "0")
    assert payload["satisfied"] is True


def test_fwt_counts(capsys):
    payload = run_json(capsys, "fwt", "counts")
    assert payload["triads_total"] == 40
    assert payload["coefficient"] == "4/55"


def test_logic_heyting(capsys):
    payload = run_json(
        capsys, "logic", "heyting", "--dim", "2", "--bases", "2",
        "--variant", "l3", "--exhaustive",
    )
    assert payload["passed"] is True


def test_logic_heyting_dim3_sampled(capsys):
    payload = run_json(
        capsys, "logic", "heyting", "--dim", "3", "--bases", "2", "--variant", "l3",
    )
    assert payload["passed"] is True
    assert payload["contexts"] >= 8  # trivial + 2 maximal + block contexts


def test_logic_heyting_l2_variant(capsys):
    payload = run_json(
        capsys, "logic", "heyting", "--dim", "2", "--bases", "3",
        "--variant", "l2", "--exhaustive",
    )
    assert payload["passed"] is True


def test_logic_popper(capsys):
    payload = run_json(capsys, "logic", "popper")
    assert payload["p_undistributed"] == pytest.approx(0.5, abs=1e-12)
    assert payload["p_distributed"] == pytest.approx(0.0, abs=1e-12)


def test_data_export(capsys, tmp_path):
    out_path = tmp_path / "peres.json"
    payload = run_json(capsys, "data", "export", "--set", "peres33", "--out", str(out_path))
    assert payload["vectors"] == 33
    exported = json.loads(out_path.read_text())
    assert exported["dimension"] == 3
    assert len(exported["vectors"]) == 33


def test_mkc_simulate_program(capsys, tmp_path):
    e1 = np.ones(3) / math.sqrt(3)
    e2 = np.array([1.0, 1.0, -1.0]) / math.sqrt(3)

    def as_pairs(mat):
        return [[[float(z.real), float(z.imag)] for z in row] for row in mat]

    program = {
        "state": {"pure": [[float(x), 0.0] for x in e1]},
        "include": [[[float(x), 0.0] for x in e1], [[float(x), 0.0] for x in e2]],
        "observables": [
            as_pairs(np.outer(e1, e1.conj())),
            as_pairs(np.outer(e2, e2.conj())),
        ],
    }
    path = tmp_path / "program.json"
    path.write_text(json.dumps(program))
    payload = run_json(
        capsys, "mkc", "simulate", "--dim", "3", "--bases", "16",
        "--program", str(path), "--shots", "20000",
    )
    assert payload["total_variation_distance"] < 0.02
    assert payload["exact"]["(1.0, 1.0)"] == pytest.approx(1 / 9, abs=1e-9)


def test_mkc_simulate_missing_program(capsys):
    code, _, err = run_cli(capsys, "mkc", "simulate", "--program", "/no/such/file.json")
    assert code == 2
    assert "not found" in err


def test_mkc_simulate_malformed_program(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    code, _, err = run_cli(capsys, "mkc", "simulate", "--program", str(path))
    assert code == 2
    assert "malformed" in err


def test_csv_output(capsys):
    code, out, _ = run_cli(capsys, "fwt", "counts", "--csv")
    assert code == 0
    rows = dict(line.split(",", 1) for line in out.strip().splitlines())
    assert rows["triads_total"] == "40"
    assert rows["coefficient"] == "4/55"


def test_verify_all_human_output(capsys):
    code, out, _ = run_cli(capsys, "verify-all", "--shots", "20000")
    assert code == 0
    assert out.count("[PASS]") == 9
    assert "all checks passed" in out


def test_verify_all_json_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "verify-all", "--json", "--shots", "20000")
    code2, out2, _ = run_cli(capsys, "verify-all", "--json", "--shots", "20000")
    assert code1 == code2 == 0
    assert out1 == out2


def test_verify_all_corrupted_dataset(capsys, monkeypatch):
    from qfoundry.datasets import load_builtin
    from qfoundry.exact import ExactVector, VectorSet

    def corrupted(name):
        if name == "peres33":
            # a lone triad is trivially colorable, so the check must fail
            return VectorSet(
                3,
                [ExactVector([1, 0, 0], "e_1"), ExactVector([0, 1, 0], "e_2"),
                 ExactVector([0, 0, 1], "e_3")],
            )
        return load_builtin(name)

    monkeypatch.setattr(cli, "load_builtin", corrupted)
    code, out, _ = run_cli(capsys, "verify-all", "--shots", "20000")
    assert code == 1
    assert "[FAIL] ks-uncolorability" in out


def test_bad_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("QFOUNDRY_THREADS", "many")
    code, _, err = run_cli(capsys, "fwt", "counts")
    assert code == 2
    assert "QFOUNDRY_THREADS" in err


def test_seed_accepts_hex(capsys):
    payload = run_json(capsys, "quantum", "reconstruct", "--dim", "2", "--seed", "0xC0FFEE")
    assert payload["seed"] == 0xC0FFEE
