"""End-to-end scenario plumbing: configs, reports, sweeps, convergence."""

import json

import numpy as np
import pytest

from lindforge import analytic
from lindforge.errors import ValidationError
from lindforge.frame import FramedLindbladian, exact_noise
from lindforge.magnus import magnus, magnus_channel
from lindforge.model import (
    amplitude_damping_beta,
    build_model,
    gate_preset,
    pure_dephasing_beta,
    random_dense_beta,
)
from lindforge.pauli import PauliString, pauli_basis
from lindforge.scenarios import (
    Scenario,
    SweepSpec,
    amplitude_damping_sweep_config,
    analytic_prediction,
    angle_sweep,
    compare_methods,
    config_hash,
    convergence_study,
    convergence_to_csv,
    four_qubit_mirror_config,
    model_from_config,
    normalize_config,
    precision_sweep,
    run_scenario,
    scenario_from_config,
    sweep_to_csv,
    synthesize_noise,
    three_qubit_spectator_config,
    two_qubit_reference_config,
)
from lindforge.superop import channel_from_unitary, frobenius_distance


def decode_matrix(pairs):
    data = np.asarray(pairs, dtype=float)
    return data[..., 0] + 1j * data[..., 1]


def minimal_config(**overrides):
    cfg = {"n_qubits": 2, "gate": {"preset": "cx", "theta": np.pi / 4}}
    cfg.update(overrides)
    return cfg


# -- config handling ---------------------------------------------------------


def test_normalize_config_defaults_and_canonical_form():
    out = normalize_config(minimal_config())
    assert out["coherent"] == {}
    assert out["dissipators"] == []
    assert out["seed"] == 0
    assert out["gate"]["omega_g"] == 1.0
    # normalization is idempotent
    assert normalize_config(out) == out


def test_normalize_config_lowercases_coherent_labels():
    out = normalize_config(minimal_config(coherent={"IZ": 0.01}))
    assert out["coherent"] == {"iz": 0.01}


def test_normalize_config_rejects_bad_inputs():
    bad_configs = [
        "not a dict",
        {"n_qubits": 2},  # missing gate
        {"gate": {"preset": "cx", "theta": 1.0}},  # missing n_qubits
        minimal_config(extra=1),
        minimal_config(n_qubits=0),
        minimal_config(n_qubits=2.0),
        {"n_qubits": 2, "gate": "cx"},
        {"n_qubits": 2, "gate": {"theta": 1.0}},
        {"n_qubits": 2, "gate": {"preset": "cx", "theta": 1.0, "angle": 2}},
        minimal_config(coherent=[["iz", 0.1]]),
        minimal_config(coherent={"izz": 0.1}),  # wrong label length
        minimal_config(dissipators=[{"qubit": 0, "rate": 0.1}]),
        minimal_config(dissipators=[{"type": "thermal", "qubit": 0, "rate": 0.1}]),
        minimal_config(dissipators=[{"type": "amplitude_damping", "qubit": 0}]),
        minimal_config(
            dissipators=[{"type": "amplitude_damping", "qubit": 0, "rate": 1, "x": 2}]
        ),
        minimal_config(dissipators=[{"type": "dense"}]),
        minimal_config(dissipators=[{"type": "dense", "strength": 0.1, "matrix": []}]),
    ]
    for cfg in bad_configs:
        with pytest.raises(ValidationError):
            normalize_config(cfg)


def test_qubit_cap_env_override(monkeypatch):
    monkeypatch.setenv("FORGE_MAX_QUBITS", "2")
    with pytest.raises(ValidationError):
        normalize_config(three_qubit_spectator_config())
    monkeypatch.setenv("FORGE_MAX_QUBITS", "3")
    normalize_config(three_qubit_spectator_config())


def test_config_hash_canonical_and_sensitive():
    a = normalize_config(two_qubit_reference_config())
    b = normalize_config(two_qubit_reference_config())
    assert config_hash(a) == config_hash(b)
    # insensitive to python dict insertion order
    shuffled = dict(reversed(list(a.items())))
    assert config_hash(shuffled) == config_hash(a)
    c = two_qubit_reference_config()
    c["dissipators"][0]["rate"] *= 2
    assert config_hash(normalize_config(c)) != config_hash(a)


def test_model_from_config_matches_direct_build():
    cfg = two_qubit_reference_config()
    model, gate = model_from_config(cfg)
    g = gate_preset("cx", theta=np.pi / 4)
    want = build_model(
        2,
        gate=g,
        noise_coeffs={
            PauliString.from_label("iz"): 0.0125,
            PauliString.from_label("zi"): 0.0115,
            PauliString.from_label("zz"): 0.016,
        },
        dissipators=[
            amplitude_damping_beta(0.012, 0, 2),
            amplitude_damping_beta(0.010, 1, 2),
            pure_dephasing_beta(0.011, 0, 2),
            pure_dephasing_beta(0.013, 1, 2),
        ],
    )
    from lindforge.model import assemble

    assert gate.name == "cx"
    assert abs(gate.theta - np.pi / 4) < 1e-15
    assert np.abs(assemble(model) - assemble(want)).max() < 1e-15


def test_model_from_config_drops_zero_coherent_terms():
    model, _ = model_from_config(minimal_config(coherent={"iz": 0.0, "zi": 0.01}))
    assert [p.label for p in model.noise] == ["zi"]


def test_model_from_config_dense_matrix_round_trip():
    paulis, B = random_dense_beta(1, 0.05, seed=3)
    entry = np.stack([B.real, B.imag], axis=-1).tolist()
    cfg = {
        "n_qubits": 1,
        "gate": {"preset": "x", "theta": 0.5},
        "dissipators": [{"type": "dense", "matrix": entry}],
    }
    model, _ = model_from_config(cfg)
    assert [p.label for p in model.beta_index] == [p.label for p in paulis]
    assert np.abs(model.beta - B).max() < 1e-15


def test_model_from_config_dense_strength_uses_seed_and_omega():
    cfg = {
        "n_qubits": 2,
        "gate": {"preset": "cx", "theta": 0.5, "omega_g": 2.0},
        "dissipators": [{"type": "dense", "strength": 0.03}],
        "seed": 11,
    }
    model, _ = model_from_config(cfg)
    _, want = random_dense_beta(2, 0.03, seed=11, omega_g=2.0)
    assert np.abs(model.beta - want).max() < 1e-15


def test_model_from_config_rejects_bad_dense_matrices():
    with pytest.raises(ValidationError):
        model_from_config(
            {
                "n_qubits": 1,
                "gate": {"preset": "x", "theta": 0.5},
                "dissipators": [{"type": "dense", "matrix": [[0.0]]}],
            }
        )
    # a well-shaped but non-PSD matrix fails model validation
    B = np.diag([-0.1, 0.0, 0.0])
    entry = np.stack([B, np.zeros_like(B)], axis=-1).tolist()
    with pytest.raises(ValidationError):
        model_from_config(
            {
                "n_qubits": 1,
                "gate": {"preset": "x", "theta": 0.5},
                "dissipators": [{"type": "dense", "matrix": entry}],
            }
        )


# -- analytic prediction -----------------------------------------------------


def test_analytic_prediction_two_qubit_reference():
    theta = np.pi / 4
    parts = analytic_prediction(two_qubit_reference_config(theta=theta))
    assert set(parts) == {"amplitude_damping", "dephasing", "phase_noise"}
    want_ad = analytic.ad_lambdas("cx", theta, 0.012, 0.010)
    for lab, v in want_ad.items():
        assert abs(parts["amplitude_damping"][lab] - v) < 1e-15
    want_ph = analytic.phase_lambdas("cx", theta, 0.025, 0.023, 0.032)
    for lab, v in want_ph.items():
        assert abs(parts["phase_noise"][lab] - v) < 1e-15


def test_analytic_prediction_embeds_idle_qubit_exactly():
    theta = np.pi / 4
    cfg = three_qubit_spectator_config(theta=theta)
    parts = analytic_prediction(cfg)
    assert set(parts) == {"amplitude_damping", "dephasing", "phase_noise", "crosstalk"}
    tau = theta / 1.0
    idle = analytic.identity_lambdas(0.011, 0.0, tau)
    assert abs(parts["amplitude_damping"]["iix"] - idle["x"]) < 1e-15
    assert abs(parts["amplitude_damping"]["iiy"] - idle["y"]) < 1e-15
    spec = analytic.spectator_lambdas("target_spectator", "cx", theta, 0.12)
    assert parts["crosstalk"] == spec


def test_analytic_prediction_x_gate_per_qubit():
    cfg = {
        "n_qubits": 1,
        "gate": {"preset": "x", "theta": 0.9},
        "dissipators": [{"type": "amplitude_damping", "qubit": 0, "rate": 1e-3}],
    }
    parts = analytic_prediction(cfg)
    assert parts["amplitude_damping"] == analytic.xtheta_lambdas(0.9, 1e-3, 0.0)


def test_analytic_prediction_idle_coherent_terms():
    cfg = {
        "n_qubits": 2,
        "gate": {"preset": "identity", "theta": 0.8},
        "coherent": {"xy": 0.01},
    }
    parts = analytic_prediction(cfg)
    # delta = 2 * coefficient; lambda = (delta tau)^2 / 4 for an idle rotation
    assert abs(parts["phase_noise"]["xy"] - (0.02 * 0.8) ** 2 / 4) < 1e-18


def test_analytic_prediction_rejections():
    with pytest.raises(ValidationError):
        analytic_prediction(
            minimal_config(dissipators=[{"type": "dense", "strength": 0.01}])
        )
    with pytest.raises(ValidationError):
        analytic_prediction(minimal_config(coherent={"xy": 0.01}))


def test_crosstalk_labels_unique_to_mechanism():
    # the mirror coupling produces exactly the labels straddling the two gate
    # pairs, which no single-pair mechanism can reach
    cfg = four_qubit_mirror_config()
    parts = analytic_prediction(cfg)
    xtalk = set(parts["crosstalk"])
    assert xtalk == set(analytic.mirror_lambdas("cx_xc", np.pi / 4, 0.12))
    others = set()
    for tag, m in parts.items():
        if tag != "crosstalk":
            others |= set(m)
    assert xtalk.isdisjoint(others)


# -- scenario runs -----------------------------------------------------------


def test_scenario_validation():
    cfg = minimal_config()
    with pytest.raises(ValidationError):
        scenario_from_config(cfg, method="euler")
    with pytest.raises(ValidationError):
        scenario_from_config(cfg, order=5)
    with pytest.raises(ValidationError):
        scenario_from_config(cfg, outputs=("pl", "bloch"))
    s = scenario_from_config(cfg)
    assert isinstance(s, Scenario)


def test_zero_noise_scenario_is_trivial():
    rep = run_scenario(scenario_from_config(minimal_config()))
    assert rep["pl_sum"] == 0.0
    assert rep["pl"]["lambdas"] == {}
    assert all(abs(v - 1.0) < 1e-12 for v in rep["fidelities"].values())


def test_run_scenario_report_shape_and_determinism():
    cfg = two_qubit_reference_config()
    s = scenario_from_config(cfg, outputs=("fidelities", "pl", "channel", "ptm"))
    rep1 = run_scenario(s)
    rep2 = run_scenario(scenario_from_config(cfg, outputs=("fidelities", "pl", "channel", "ptm")))
    assert json.dumps(rep1, sort_keys=True) == json.dumps(rep2, sort_keys=True)
    assert rep1["method"] == "exact"
    assert "order" not in rep1 and "grid_steps" not in rep1
    assert rep1["config_sha256"] == config_hash(rep1["config"])
    assert rep1["gate"]["preset"] == "cx"
    assert set(rep1["fidelities"]) == {p.label for p in pauli_basis(2)}
    # every displayed rate clears the display threshold
    assert all(abs(v) > 1e-5 for v in rep1["pl_display"].values())
    assert np.asarray(rep1["ptm"]).shape == (16, 16)


def test_run_scenario_channel_factorization():
    cfg = two_qubit_reference_config()
    s = scenario_from_config(cfg, outputs=("channel",))
    rep = run_scenario(s)
    total = decode_matrix(rep["total_channel"])
    noise = decode_matrix(rep["noise_channel"])
    F = FramedLindbladian(*model_from_config(cfg))
    Vg = channel_from_unitary(F.gate_unitary(F.gate.tau_g))
    assert np.abs(Vg @ noise - total).max() < 1e-12


def test_run_scenario_magnus_records_grid():
    rep = run_scenario(scenario_from_config(two_qubit_reference_config(), method="magnus", order=3))
    assert rep["order"] == 3
    assert rep["grid_steps"] >= 1024
    assert rep["pl_sum"] > 0


def test_breakdown_additivity_on_reference_config():
    s = scenario_from_config(two_qubit_reference_config(), outputs=("pl", "breakdown"))
    rep = run_scenario(s)
    br = rep["breakdown"]
    assert set(br["mechanisms"]) == {"amplitude_damping", "dephasing", "phase_noise"}
    # mechanisms sum to the analytic total exactly
    summed = analytic.aggregate(*br["mechanisms"].values())
    for lab, v in br["analytic_total"].items():
        assert abs(summed[lab] - v) < 1e-15
    # and the analytic total tracks the fitted rates to leading order
    assert br["defect_max"] < 1e-4
    assert br["defects"][max(br["defects"], key=br["defects"].get)] == br["defect_max"]


def test_compare_methods_improves_with_order():
    cfg = two_qubit_reference_config()
    low = compare_methods(cfg, method="magnus", order=1)
    high = compare_methods(cfg, method="magnus", order=3)
    assert high["channel_distance"] < low["channel_distance"]
    assert high["pl_deviation_max"] < low["pl_deviation_max"]
    assert set(low) >= {
        "config",
        "config_sha256",
        "method",
        "order",
        "grid_steps",
        "channel_distance",
        "pl_exact",
        "pl_approx",
        "pl_deviation_max",
    }


# -- convergence study -------------------------------------------------------


def test_convergence_study_validation():
    with pytest.raises(ValidationError):
        convergence_study(strengths=[1e-3, 1e-3])
    with pytest.raises(ValidationError):
        convergence_study(strengths=[1e-2, 1e-3])
    with pytest.raises(ValidationError):
        convergence_study(strengths=[0.0, 1e-3])
    with pytest.raises(ValidationError):
        convergence_study(strengths=[1e-3], orders=(2, 2))
    with pytest.raises(ValidationError):
        convergence_study(strengths=[1e-3], orders=(5,))


def test_convergence_study_rows_and_ordering():
    rep = convergence_study(strengths=[1e-3, 1e-2], orders=(1, 2))
    assert rep["seed"] == 7
    assert len(rep["rows"]) == 2 * 2 * 2  # strengths x orders x methods
    by_key = {(r["strength"], r["method"], r["order"]): r["distance"] for r in rep["rows"]}
    for s in (1e-3, 1e-2):
        assert by_key[(s, "magnus", 2)] < by_key[(s, "magnus", 1)]
        assert by_key[(s, "dyson", 2)] < by_key[(s, "dyson", 1)]
        assert by_key[(s, "magnus", 2)] <= by_key[(s, "dyson", 2)]


def test_convergence_study_rescaling_matches_direct_integration():
    # the study integrates Magnus once at the top strength and rescales
    # Omega_k by scale^k; a direct integration at the lower strength must agree
    rep = convergence_study(strengths=[2e-3, 2e-2], orders=(2,))
    row = next(
        r for r in rep["rows"] if r["strength"] == 2e-3 and r["method"] == "magnus"
    )
    gate = gate_preset("cx", theta=np.pi / 2)
    paulis, B = random_dense_beta(2, 2e-3, seed=7)
    model = build_model(2, gate=gate, dissipators=[(paulis, B)])
    F = FramedLindbladian(model, gate)
    direct = magnus_channel(magnus(F, order=2))
    exact = exact_noise(F, "left")
    assert abs(frobenius_distance(direct, exact) - row["distance"]) < 1e-12


def test_convergence_csv_format():
    rep = convergence_study(strengths=[1e-3], orders=(1,))
    text = convergence_to_csv(rep)
    lines = text.strip().split("\n")
    assert lines[0] == "strength,method,order,distance"
    assert len(lines) == 3  # header + magnus + dyson
    assert "np.float" not in text
    strength, method, order, distance = lines[1].split(",")
    assert float(strength) == 1e-3
    assert method in ("magnus", "dyson")
    assert int(order) == 1
    assert float(distance) >= 0.0


# -- sweeps -------------------------------------------------------------------


def test_sweep_spec_validation():
    with pytest.raises(ValidationError):
        SweepSpec(axis="rate", grid=[0.1])
    with pytest.raises(ValidationError):
        SweepSpec(axis="theta", grid=[0.2, 0.1])
    with pytest.raises(ValidationError):
        SweepSpec(axis="theta", grid=[0.1, 0.1])


def test_angle_sweep_rows():
    spec = SweepSpec(
        axis="theta", grid=[0.0, np.pi / 4], base=two_qubit_reference_config()
    )
    rep = angle_sweep(spec)
    assert rep["axis"] == "theta"
    assert [r["theta"] for r in rep["rows"]] == [0.0, np.pi / 4]
    assert rep["rows"][0]["numerical"] == {}
    assert all(abs(v) < 1e-15 for v in rep["rows"][0]["analytic"].values())
    row = rep["rows"][1]
    union = set(row["numerical"]) | set(row["analytic"])
    assert set(rep["labels"]) >= union - {""}
    for lab in row["analytic"]:
        dev = abs(row["numerical"].get(lab, 0.0) - row["analytic"][lab])
        assert dev < 1e-4, lab


def test_angle_sweep_axis_and_range_checks():
    with pytest.raises(ValidationError):
        angle_sweep(SweepSpec(axis="strength", grid=[0.01], base=minimal_config()))
    with pytest.raises(ValidationError):
        angle_sweep(
            SweepSpec(axis="theta", grid=[0.1, 4.0], base=minimal_config())
        )


def test_precision_sweep_rows():
    spec = SweepSpec(
        axis="strength", grid=[0.0, 0.012], base=amplitude_damping_sweep_config()
    )
    rep = precision_sweep(spec)
    assert rep["rows"][0] == {"strength": 0.0, "max_deviation": 0.0, "deviations": {}}
    row = rep["rows"][1]
    # grid point 0.012 equals the base rate, so this is the unscaled config
    assert row["max_deviation"] < 1e-5
    assert row["max_deviation"] == max(row["deviations"].values())
    assert set(row["numerical"])  # nonempty fitted support


def test_precision_sweep_checks():
    with pytest.raises(ValidationError):
        precision_sweep(SweepSpec(axis="theta", grid=[0.3], base=minimal_config()))
    with pytest.raises(ValidationError):
        precision_sweep(
            SweepSpec(axis="strength", grid=[0.2], base=amplitude_damping_sweep_config())
        )
    no_ad = minimal_config(
        dissipators=[{"type": "pure_dephasing", "qubit": 0, "rate": 0.01}]
    )
    with pytest.raises(ValidationError):
        precision_sweep(SweepSpec(axis="strength", grid=[0.01], base=no_ad))


def test_sweep_csv_format():
    spec = SweepSpec(
        axis="strength", grid=[0.012], base=amplitude_damping_sweep_config()
    )
    text = sweep_to_csv(precision_sweep(spec))
    lines = text.strip().split("\n")
    assert lines[0] == "strength,label,numerical,analytic"
    assert len(lines) > 1
    assert "np.float" not in text
    first = lines[1].split(",")
    assert float(first[0]) == 0.012
    float(first[2]), float(first[3])  # parse cleanly


# -- reference configs --------------------------------------------------------


def test_reference_configs_normalize():
    for cfg in (
        two_qubit_reference_config(),
        amplitude_damping_sweep_config(),
        three_qubit_spectator_config(),
        four_qubit_mirror_config(),
        four_qubit_mirror_config(preset="cz_cz"),
    ):
        out = normalize_config(cfg)
        assert out["n_qubits"] in (2, 3, 4)
    with pytest.raises(ValidationError):
        four_qubit_mirror_config(preset="xc_cx")


def test_four_qubit_mirror_coherent_layout():
    cfg = normalize_config(four_qubit_mirror_config())
    # one pair coupling plus per-core target/control/double phase errors
    assert set(cfg["coherent"]) == {
        "izzi",
        "izii",
        "ziii",
        "zzii",
        "iizi",
        "iiiz",
        "iizz",
    }
    assert cfg["coherent"]["izzi"] == 0.12 / 2
