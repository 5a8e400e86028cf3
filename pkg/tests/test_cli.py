"""The forge command line: exit codes, output formats, determinism."""

import json

import numpy as np
import pytest

import lindforge.cli as cli
from lindforge.errors import ConvergenceError
from lindforge.scenarios import two_qubit_reference_config


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def small_config():
    # one qubit keeps the perturbative subcommands fast
    return {
        "n_qubits": 1,
        "gate": {"preset": "x", "theta": 0.8},
        "coherent": {"z": 0.01},
        "dissipators": [{"type": "amplitude_damping", "qubit": 0, "rate": 0.01}],
    }


def test_synth_exact_json_output(tmp_path, capsys):
    path = write_config(tmp_path, small_config())
    code, out, err = run_cli(capsys, ["synth", path])
    assert code == 0
    assert err == ""
    rep = json.loads(out)
    assert rep["method"] == "exact"
    assert rep["pl_sum"] > 0
    assert "fidelities" in rep and "pl" in rep
    assert "ptm" not in rep and "total_channel" not in rep


def test_synth_optional_sections_and_output_file(tmp_path, capsys):
    path = write_config(tmp_path, two_qubit_reference_config())
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys,
        ["synth", path, "--ptm", "--channel", "--breakdown", "--output", str(out_path)],
    )
    assert code == 0
    assert out == ""  # everything went to the file
    rep = json.loads(out_path.read_text())
    assert np.asarray(rep["ptm"]).shape == (16, 16)
    assert "total_channel" in rep and "noise_channel" in rep
    assert rep["breakdown"]["defect_max"] < 1e-4


def test_synth_perturbative_methods(tmp_path, capsys):
    path = write_config(tmp_path, small_config())
    code, out, _ = run_cli(capsys, ["synth", path, "--method", "magnus", "--order", "2"])
    assert code == 0
    rep = json.loads(out)
    assert rep["method"] == "magnus"
    assert rep["order"] == 2
    assert rep["grid_steps"] >= 32
    code, out, _ = run_cli(capsys, ["synth", path, "--method", "dyson", "--order", "1"])
    assert code == 0
    assert json.loads(out)["method"] == "dyson"


def test_synth_is_deterministic(tmp_path, capsys):
    path = write_config(tmp_path, small_config())
    _, out1, _ = run_cli(capsys, ["synth", path])
    _, out2, _ = run_cli(capsys, ["synth", path])
    assert out1 == out2


def test_exit_2_on_config_problems(tmp_path, capsys):
    code, _, err = run_cli(capsys, ["synth", str(tmp_path / "missing.json")])
    assert code == 2
    assert "error:" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run_cli(capsys, ["synth", str(bad)])
    assert code == 2
    path = write_config(tmp_path, {"n_qubits": 1, "gate": {"preset": "warp", "theta": 1.0}})
    code, _, err = run_cli(capsys, ["synth", path])
    assert code == 2
    assert "error:" in err


def test_exit_3_on_numerical_failure(tmp_path, capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise ConvergenceError("stalled")

    monkeypatch.setattr(cli, "run_scenario", boom)
    path = write_config(tmp_path, small_config())
    code, _, err = run_cli(capsys, ["synth", path])
    assert code == 3
    assert "numerical error" in err


def test_bad_flags_raise_system_exit(capsys):
    with pytest.raises(SystemExit):
        cli.main(["synth"])  # missing config path
    with pytest.raises(SystemExit):
        cli.main(["sweep"])  # missing required --axis
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])
    capsys.readouterr()  # swallow argparse noise


def test_compare_subcommand(tmp_path, capsys):
    path = write_config(tmp_path, small_config())
    code, out, _ = run_cli(capsys, ["compare", path, "--method", "dyson", "--order", "2"])
    assert code == 0
    rep = json.loads(out)
    assert rep["method"] == "dyson"
    assert rep["order"] == 2
    assert rep["channel_distance"] >= 0
    assert rep["pl_deviation_max"] < 1e-3


def test_sweep_theta_with_explicit_grid(tmp_path, capsys):
    # sweeps compare against the closed-form tables, which for the x family
    # cover damping and dephasing only
    cfg = small_config()
    del cfg["coherent"]
    path = write_config(tmp_path, cfg)
    code, out, _ = run_cli(
        capsys, ["sweep", "--axis", "theta", "--grid", "0.0,0.785", "--config", path]
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["axis"] == "theta"
    assert len(rep["rows"]) == 2


def test_sweep_strength_default_base_csv(capsys):
    code, out, _ = run_cli(
        capsys, ["sweep", "--axis", "strength", "--grid", "0.001,0.002", "--csv"]
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "strength,label,numerical,analytic"
    assert len(lines) > 2
    assert "np.float" not in out


def test_sweep_rejects_bad_grid(capsys):
    code, _, err = run_cli(capsys, ["sweep", "--axis", "theta", "--grid", "0.3,oops"])
    assert code == 2
    code, _, err = run_cli(capsys, ["sweep", "--axis", "theta", "--grid", "0.3,0.1"])
    assert code == 2


def test_converge_subcommand_csv(tmp_path, capsys):
    out_path = tmp_path / "conv.csv"
    code, out, _ = run_cli(
        capsys,
        ["converge", "--strengths", "0.001,0.01", "--csv", "--output", str(out_path)],
    )
    assert code == 0
    lines = out_path.read_text().strip().split("\n")
    assert lines[0] == "strength,method,order,distance"
    assert len(lines) == 1 + 2 * 4 * 2  # strengths x orders x methods
    assert "np.float" not in out_path.read_text()


def test_converge_json_structure(capsys):
    code, out, _ = run_cli(capsys, ["converge", "--strengths", "0.001", "--preset", "cx"])
    assert code == 0
    rep = json.loads(out)
    assert rep["seed"] == 7
    assert rep["gate"]["preset"] == "cx"
    assert all(r["distance"] >= 0 for r in rep["rows"])


def test_tables_all_scenarios(capsys):
    base = ["tables", "--theta", "0.785"]
    cases = [
        base + ["ad"],
        base + ["pd", "--gate", "cz"],
        base + ["phase"],
        base + ["spectator", "--layout", "target_spectator"],
        base + ["mirror", "--layout", "cx_xc"],
        base + ["identity"],
        base + ["xtheta"],
    ]
    for argv in cases:
        argv = [argv[0]] + argv[3:] + argv[1:3]  # scenario is positional
        code, out, err = run_cli(capsys, argv)
        assert code == 0, (argv, err)
        json.loads(out)


def test_tables_values_match_library(capsys):
    from lindforge.analytic import ad_lambdas

    code, out, _ = run_cli(
        capsys,
        [
            "tables",
            "ad",
            "--theta",
            "0.5",
            "--gate",
            "cz",
            "--beta-down-l",
            "0.002",
            "--beta-down-r",
            "0.003",
        ],
    )
    assert code == 0
    got = json.loads(out)
    want = ad_lambdas("cz", 0.5, 0.002, 0.003)
    assert set(got) == set(want)
    for lab in want:
        assert abs(got[lab] - want[lab]) < 1e-15


def test_tables_layout_required_for_spectator_and_mirror(capsys):
    code, _, err = run_cli(capsys, ["tables", "spectator", "--theta", "0.5"])
    assert code == 2
    assert "layout" in err
    code, _, err = run_cli(capsys, ["tables", "mirror", "--theta", "0.5", "--layout", "nope"])
    assert code == 2


def test_tables_csv_output(capsys):
    code, out, _ = run_cli(capsys, ["tables", "identity", "--theta", "0.5", "--csv"])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "label,value"
    labels = [line.split(",")[0] for line in lines[1:]]
    assert "w_i" in labels and "x" in labels
    assert "np.float" not in out
