"""Reproducible end-to-end experiments: configs, scenario runs, sweeps.

Config schema (JSON object):

* ``n_qubits``: int.
* ``gate``: ``{"preset": name, "theta": x | "tau_g": t, "omega_g": w}``
  (``omega_g`` defaults to 1.0; exactly one of ``theta``/``tau_g``).
* ``coherent``: optional ``{pauli_label: coefficient}`` map of coherent-error
  Hamiltonian terms.  Coefficients are FULL Pauli prefactors: a textbook rate
  ``delta`` defined through ``(delta/2) P`` enters here as ``delta/2``.
* ``dissipators``: optional list of
  ``{"type": "amplitude_damping"|"pure_dephasing", "qubit": q, "rate": r}`` or
  ``{"type": "dense", "matrix": [[[re, im], ...], ...]}`` or
  ``{"type": "dense", "strength": s}`` (seeded from the config ``seed``).
  Dense matrices are indexed by the full non-identity Pauli basis in
  lexicographic order.
* ``seed``: optional int, used by random dense dissipators (default 0).

Reports are plain dicts of JSON-ready values that record their own inputs
(config SHA-256, seed, quadrature grid sizes) and carry no timestamps, so
identical inputs produce bit-identical JSON.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .errors import ValidationError
from .frame import FramedLindbladian, exact_noise
from .magnus import MagnusTerms, dyson_channel, magnus, magnus_channel
from .model import (
    GatePreset,
    LindbladModel,
    amplitude_damping_beta,
    build_model,
    gate_preset,
    pure_dephasing_beta,
    random_dense_beta,
)
from .pauli import MAX_QUBITS, PauliString, pauli_basis
from .plfit import PLModel, fidelities, fit_pl, pauli_twirl
from .superop import expm_channel, frobenius_distance, to_ptm

METHODS = ("exact", "magnus", "dyson")

DISPLAY_THRESHOLD = 1e-5

# Entangling cores of each preset as (gate, control, target); qubits not
# covered by a core idle.  The mirrored layout puts the second control on the
# outer qubit.
_CORES: dict[str, tuple[tuple[str, int, int], ...]] = {
    "identity": (),
    "x": (),
    "cz": (("cz", 0, 1),),
    "cx": (("cx", 0, 1),),
    "cz_i": (("cz", 0, 1),),
    "cx_i": (("cx", 0, 1),),
    "i_cz": (("cz", 1, 2),),
    "i_cx": (("cx", 1, 2),),
    "cz_cz": (("cz", 0, 1), ("cz", 2, 3)),
    "cx_cx": (("cx", 0, 1), ("cx", 2, 3)),
    "cx_xc": (("cx", 0, 1), ("cx", 3, 2)),
}


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------


def normalize_config(cfg: dict) -> dict:
    """Validate a config dict and fill defaults; returns a canonical copy."""
    if not isinstance(cfg, dict):
        raise ValidationError("config must be a JSON object")
    allowed = {"n_qubits", "gate", "coherent", "dissipators", "seed"}
    unknown = set(cfg) - allowed
    if unknown:
        raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    if "n_qubits" not in cfg or "gate" not in cfg:
        raise ValidationError("config requires n_qubits and gate")
    n = cfg["n_qubits"]
    if not isinstance(n, int) or n < 1:
        raise ValidationError("n_qubits must be a positive integer")
    cap = int(os.environ.get("FORGE_MAX_QUBITS", str(MAX_QUBITS)))
    if n > cap:
        raise ValidationError(f"n_qubits {n} exceeds cap {cap} (FORGE_MAX_QUBITS)")

    gate = cfg["gate"]
    if not isinstance(gate, dict) or "preset" not in gate:
        raise ValidationError("gate must be an object with a preset name")
    gate_keys = set(gate) - {"preset", "theta", "tau_g", "omega_g"}
    if gate_keys:
        raise ValidationError(f"unknown gate keys: {sorted(gate_keys)}")
    out_gate = {"preset": gate["preset"], "omega_g": float(gate.get("omega_g", 1.0))}
    if "theta" in gate:
        out_gate["theta"] = float(gate["theta"])
    if "tau_g" in gate:
        out_gate["tau_g"] = float(gate["tau_g"])

    coherent = cfg.get("coherent", {})
    if not isinstance(coherent, dict):
        raise ValidationError("coherent must be a label -> coefficient object")
    out_coherent = {}
    for label, c in sorted(coherent.items()):
        if len(label) != n:
            raise ValidationError(f"coherent label {label!r} is not {n} characters")
        out_coherent[label.lower()] = float(c)

    out_diss = []
    for i, d in enumerate(cfg.get("dissipators", [])):
        if not isinstance(d, dict) or "type" not in d:
            raise ValidationError(f"dissipator #{i} must be an object with a type")
        kind = d["type"]
        if kind in ("amplitude_damping", "pure_dephasing"):
            extra = set(d) - {"type", "qubit", "rate"}
            if extra or "qubit" not in d or "rate" not in d:
                raise ValidationError(
                    f"dissipator #{i}: {kind} takes exactly qubit and rate"
                )
            out_diss.append(
                {"type": kind, "qubit": int(d["qubit"]), "rate": float(d["rate"])}
            )
        elif kind == "dense":
            extra = set(d) - {"type", "matrix", "strength"}
            if extra or ("matrix" in d) == ("strength" in d):
                raise ValidationError(
                    f"dissipator #{i}: dense takes exactly one of matrix or strength"
                )
            if "strength" in d:
                out_diss.append({"type": kind, "strength": float(d["strength"])})
            else:
                out_diss.append({"type": kind, "matrix": d["matrix"]})
        else:
            raise ValidationError(f"dissipator #{i}: unknown type {kind!r}")

    out = {
        "n_qubits": n,
        "gate": out_gate,
        "coherent": out_coherent,
        "dissipators": out_diss,
        "seed": int(cfg.get("seed", 0)),
    }
    return out


def config_hash(cfg: dict) -> str:
    """SHA-256 over the canonical JSON encoding of a (normalized) config."""
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _dense_matrix_from_json(entry, n_qubits: int) -> np.ndarray:
    k = 4**n_qubits - 1
    data = np.asarray(entry, dtype=float)
    if data.shape != (k, k, 2):
        raise ValidationError(
            f"dense dissipator matrix must be {k}x{k} [re, im] pairs"
        )
    return data[..., 0] + 1j * data[..., 1]


def model_from_config(cfg: dict) -> tuple[LindbladModel, GatePreset]:
    """Build the Lindblad model and gate described by a config."""
    cfg = normalize_config(cfg)
    n = cfg["n_qubits"]
    g = cfg["gate"]
    gate = gate_preset(
        g["preset"],
        theta=g.get("theta"),
        tau_g=g.get("tau_g"),
        omega_g=g["omega_g"],
        n_qubits=n,
    )
    noise = {
        PauliString.from_label(lab): c
        for lab, c in cfg["coherent"].items()
        if c != 0.0
    }
    blocks = []
    for d in cfg["dissipators"]:
        if d["type"] == "amplitude_damping":
            blocks.append(amplitude_damping_beta(d["rate"], d["qubit"], n))
        elif d["type"] == "pure_dephasing":
            blocks.append(pure_dephasing_beta(d["rate"], d["qubit"], n))
        elif "strength" in d:
            blocks.append(
                random_dense_beta(n, d["strength"], cfg["seed"], gate.omega_g)
            )
        else:
            paulis = pauli_basis(n, include_identity=False)
            blocks.append((paulis, _dense_matrix_from_json(d["matrix"], n)))
    model = build_model(n, gate=gate, noise_coeffs=noise, dissipators=blocks)
    model.validate_beta()
    return model, gate


# ---------------------------------------------------------------------------
# Analytic per-mechanism prediction
# ---------------------------------------------------------------------------


def _embed(lam2: dict, positions: tuple[int, ...], n: int) -> dict:
    """Place a small-system lambda map at the given qubit positions of n qubits."""
    out = {}
    for label, value in lam2.items():
        if value == 0.0:
            continue
        chars = ["i"] * n
        for ch, q in zip(label, positions):
            chars[q] = ch
        out["".join(chars)] = out.get("".join(chars), 0.0) + value
    return out


def _core_of(qubit: int, cores) -> tuple[str, int, int] | None:
    for core in cores:
        if qubit in core[1:]:
            return core
    return None


def analytic_prediction(cfg: dict) -> dict[str, dict[str, float]]:
    """Per-mechanism analytic lambda maps for a benchmark-family config.

    Returns ``{mechanism_tag: {label: lambda}}`` with tags among
    ``amplitude_damping``, ``dephasing``, ``phase_noise``, ``crosstalk``.
    Raises ValidationError when the config falls outside the families with
    closed-form predictions (e.g. dense dissipators).
    """
    cfg = normalize_config(cfg)
    n = cfg["n_qubits"]
    g = cfg["gate"]
    gate = gate_preset(
        g["preset"], theta=g.get("theta"), tau_g=g.get("tau_g"),
        omega_g=g["omega_g"], n_qubits=n,
    )
    name, theta, omega, tau = gate.name, gate.theta, gate.omega_g, gate.tau_g
    if name not in _CORES:
        raise ValidationError(f"no analytic prediction for preset {name!r}")
    cores = _CORES[name]

    ad_parts, pd_parts = [], []
    for d in cfg["dissipators"]:
        if d["type"] == "dense":
            raise ValidationError("no analytic prediction for dense dissipators")
        q, rate = d["qubit"], d["rate"]
        damping = d["type"] == "amplitude_damping"
        if name == "x":
            lam = analytic.xtheta_lambdas(
                theta, rate if damping else 0.0, 0.0 if damping else rate, omega
            )
            part = _embed(lam, (q,), n)
        else:
            core = _core_of(q, cores)
            if core is None:  # idle qubit: exact single-qubit idle coefficients
                lam = analytic.identity_lambdas(
                    rate if damping else 0.0, 0.0 if damping else rate, tau
                )
                part = _embed(lam, (q,), n)
            else:
                core_gate, control, target = core
                left = rate if q == control else 0.0
                right = rate if q == target else 0.0
                if damping:
                    lam = analytic.ad_lambdas(core_gate, theta, left, right, omega)
                else:
                    lam = analytic.pd_lambdas(core_gate, theta, left, right, omega)
                part = _embed(lam, (control, target), n)
        (ad_parts if damping else pd_parts).append(part)

    # Coherent terms: per-core IZ/ZI/ZZ phase errors, then known couplings.
    deltas = {lab: 2.0 * c for lab, c in cfg["coherent"].items() if c != 0.0}
    phase_parts, xtalk_parts = [], []

    def _z_label(qubits):
        return "".join("z" if q in qubits else "i" for q in range(n))

    for core_gate, control, target in cores:
        diz = deltas.pop(_z_label({target}), 0.0)
        dzi = deltas.pop(_z_label({control}), 0.0)
        dzz = deltas.pop(_z_label({control, target}), 0.0)
        if diz or dzi or dzz:
            lam = analytic.phase_lambdas(core_gate, theta, diz, dzi, dzz, omega)
            phase_parts.append(_embed(lam, (control, target), n))

    if name == "identity":
        # Idle coherent Pauli terms rotate independently: one lambda each.
        for lab in list(deltas):
            delta = deltas.pop(lab)
            phase_parts.append({lab: (delta * tau) ** 2 / 4})

    for lab in list(deltas):
        delta = deltas.pop(lab)
        if n == 3 and lab == "zzi" and name in ("i_cz", "i_cx"):
            lam = analytic.spectator_lambdas(
                "control_spectator", name.split("_")[1], theta, delta, omega
            )
        elif n == 3 and lab == "izz" and name in ("cz_i", "cx_i"):
            lam = analytic.spectator_lambdas(
                "target_spectator", name.split("_")[0], theta, delta, omega
            )
        elif n == 4 and lab == "izzi" and name in ("cz_cz", "cx_cx", "cx_xc"):
            lam = analytic.mirror_lambdas(name, theta, delta, omega)
        else:
            raise ValidationError(
                f"no analytic prediction for coherent term {lab!r} under {name!r}"
            )
        xtalk_parts.append(lam)

    out = {}
    if ad_parts:
        out["amplitude_damping"] = analytic.aggregate(*ad_parts)
    if pd_parts:
        out["dephasing"] = analytic.aggregate(*pd_parts)
    if phase_parts:
        out["phase_noise"] = analytic.aggregate(*phase_parts)
    if xtalk_parts:
        out["crosstalk"] = analytic.aggregate(*xtalk_parts)
    return out


# ---------------------------------------------------------------------------
# Scenario runner
# ---------------------------------------------------------------------------


@dataclass
class Scenario:
    """A config together with the synthesis method and requested outputs."""

    config: dict
    model: LindbladModel
    gate: GatePreset
    method: str = "exact"
    order: int = 4
    outputs: tuple[str, ...] = ("fidelities", "pl")

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}")
        if self.order not in (1, 2, 3, 4):
            raise ValidationError("order must be in 1..4")
        bad = set(self.outputs) - {"channel", "ptm", "fidelities", "pl", "breakdown"}
        if bad:
            raise ValidationError(f"unknown outputs: {sorted(bad)}")


def scenario_from_config(
    cfg: dict,
    method: str = "exact",
    order: int = 4,
    outputs: tuple[str, ...] = ("fidelities", "pl"),
) -> Scenario:
    norm = normalize_config(cfg)
    model, gate = model_from_config(norm)
    return Scenario(norm, model, gate, method, order, outputs)


def _matrix_json(M: np.ndarray) -> list:
    pairs = np.stack([M.real, M.imag], axis=-1)
    return pairs.tolist()


def synthesize_noise(s: Scenario) -> tuple[np.ndarray, int | None]:
    """Noise channel N with expm(L tau_g) = U_g N, by the requested method.

    Returns (N, quadrature grid steps or None for the exact path).
    """
    F = FramedLindbladian(s.model, s.gate)
    if s.method == "exact":
        return exact_noise(F, position="left"), None
    T = magnus(F, order=s.order)
    N = magnus_channel(T) if s.method == "magnus" else dyson_channel(T)
    return N, T.grid_steps


def run_scenario(s: Scenario) -> dict:
    """Synthesize, twirl, and fit one scenario; returns the report dict."""
    N, grid_steps = synthesize_noise(s)
    twirled = pauli_twirl(N)
    f = fidelities(twirled)
    m = fit_pl(f, n_qubits=s.model.n_qubits)

    report = {
        "config": s.config,
        "config_sha256": config_hash(s.config),
        "method": s.method,
        "gate": {
            "preset": s.gate.name,
            "n_qubits": s.gate.n_qubits,
            "omega_g": s.gate.omega_g,
            "tau_g": s.gate.tau_g,
            "theta": s.gate.theta,
        },
        "pl_sum": float(m.total),
    }
    if s.method != "exact":
        report["order"] = s.order
    if grid_steps is not None:
        report["grid_steps"] = grid_steps
    if "fidelities" in s.outputs:
        labels = [p.label for p in pauli_basis(s.model.n_qubits)]
        report["fidelities"] = {lab: float(x) for lab, x in zip(labels, f)}
    if "pl" in s.outputs:
        report["pl"] = json.loads(m.to_json())
        report["pl_display"] = {
            lab: val
            for lab, val in sorted(m.by_label().items())
            if abs(val) > DISPLAY_THRESHOLD
        }
    if "channel" in s.outputs:
        L = FramedLindbladian(s.model, s.gate).full_generator()
        report["total_channel"] = _matrix_json(expm_channel(L, s.gate.tau_g))
        report["noise_channel"] = _matrix_json(N)
    if "ptm" in s.outputs:
        report["ptm"] = to_ptm(N).tolist()
    if "breakdown" in s.outputs:
        parts = analytic_prediction(s.config)
        total = analytic.aggregate(*parts.values())
        fitted = m.by_label()
        defects = {
            lab: abs(fitted.get(lab, 0.0) - total.get(lab, 0.0))
            for lab in sorted(set(fitted) | set(total))
        }
        report["breakdown"] = {
            "mechanisms": {tag: dict(sorted(p.items())) for tag, p in parts.items()},
            "analytic_total": dict(sorted(total.items())),
            "defect_max": max(defects.values(), default=0.0),
            "defects": defects,
        }
    return report


def compare_methods(cfg: dict, method: str = "magnus", order: int = 2) -> dict:
    """Perturbative vs exact synthesis on one config."""
    exact = scenario_from_config(cfg, method="exact")
    approx = scenario_from_config(cfg, method=method, order=order)
    N_exact, _ = synthesize_noise(exact)
    N_approx, grid_steps = synthesize_noise(approx)
    m_exact = fit_pl(fidelities(pauli_twirl(N_exact)), n_qubits=exact.model.n_qubits)
    m_approx = fit_pl(
        fidelities(pauli_twirl(N_approx)), n_qubits=approx.model.n_qubits
    )
    lam_e, lam_a = m_exact.by_label(), m_approx.by_label()
    return {
        "config": exact.config,
        "config_sha256": config_hash(exact.config),
        "method": method,
        "order": order,
        "grid_steps": grid_steps,
        "channel_distance": float(frobenius_distance(N_approx, N_exact)),
        "pl_exact": {lab: lam_e[lab] for lab in sorted(lam_e)},
        "pl_approx": {lab: lam_a[lab] for lab in sorted(lam_a)},
        "pl_deviation_max": max(
            (
                abs(lam_e.get(k, 0.0) - lam_a.get(k, 0.0))
                for k in set(lam_e) | set(lam_a)
            ),
            default=0.0,
        ),
    }


# ---------------------------------------------------------------------------
# Reference configs
# ---------------------------------------------------------------------------


def two_qubit_reference_config(
    gate: str = "cx", theta: float = np.pi / 4, omega_g: float = 1.0
) -> dict:
    """Two-qubit benchmark set: AD+PD on both qubits plus static phase errors.

    Rates (units of omega_g): beta_down = (0.012, 0.010), beta_phi = (0.011,
    0.013), delta_iz = 0.025, delta_zi = 0.023, delta_zz = 0.032.
    """
    w = omega_g
    return {
        "n_qubits": 2,
        "gate": {"preset": gate, "theta": theta, "omega_g": omega_g},
        "coherent": {"iz": 0.025 * w / 2, "zi": 0.023 * w / 2, "zz": 0.032 * w / 2},
        "dissipators": [
            {"type": "amplitude_damping", "qubit": 0, "rate": 0.012 * w},
            {"type": "amplitude_damping", "qubit": 1, "rate": 0.010 * w},
            {"type": "pure_dephasing", "qubit": 0, "rate": 0.011 * w},
            {"type": "pure_dephasing", "qubit": 1, "rate": 0.013 * w},
        ],
    }


def amplitude_damping_sweep_config(
    gate: str = "cx", theta: float = np.pi / 4, omega_g: float = 1.0
) -> dict:
    """Damping-only base for precision sweeps: rates (0.012, 0.010) omega_g.

    Sweeping ``strength`` rescales both rates proportionally (axis value =
    left-qubit rate / omega_g), so zero strength means zero noise.
    """
    return {
        "n_qubits": 2,
        "gate": {"preset": gate, "theta": theta, "omega_g": omega_g},
        "dissipators": [
            {"type": "amplitude_damping", "qubit": 0, "rate": 0.012 * omega_g},
            {"type": "amplitude_damping", "qubit": 1, "rate": 0.010 * omega_g},
        ],
    }


def three_qubit_spectator_config(theta: float = np.pi / 4, omega_g: float = 1.0) -> dict:
    """CX on (control, target) qubits (0, 1) with an idle spectator qubit 2.

    AD/PD on all three qubits, phase errors on the gate pair, and a ZZ
    coupling between target and spectator (delta_izz = 0.12 omega_g).
    """
    w = omega_g
    return {
        "n_qubits": 3,
        "gate": {"preset": "cx_i", "theta": theta, "omega_g": omega_g},
        "coherent": {
            "izi": 0.052 * w / 2,
            "zii": 0.071 * w / 2,
            "zzi": 0.085 * w / 2,
            "izz": 0.12 * w / 2,
        },
        "dissipators": [
            {"type": "amplitude_damping", "qubit": 0, "rate": 0.012 * w},
            {"type": "amplitude_damping", "qubit": 1, "rate": 0.010 * w},
            {"type": "amplitude_damping", "qubit": 2, "rate": 0.011 * w},
            {"type": "pure_dephasing", "qubit": 0, "rate": 0.011 * w},
            {"type": "pure_dephasing", "qubit": 1, "rate": 0.013 * w},
            {"type": "pure_dephasing", "qubit": 2, "rate": 0.014 * w},
        ],
    }


def four_qubit_mirror_config(
    theta: float = np.pi / 4, omega_g: float = 1.0, preset: str = "cx_xc"
) -> dict:
    """Two simultaneous two-qubit gates with a ZZ coupling between the pairs.

    Parameters are assigned mirror-symmetrically about the center: the outer
    qubits (0, 3) and inner qubits (1, 2) share rates, each gate carries the
    same phase-error set oriented control-to-target, and the pairs couple via
    delta_izzi = 0.12 omega_g.  This concrete assignment is an interpretation
    of a loosely specified layout; it is fixed here for reproducibility.
    """
    if preset not in ("cz_cz", "cx_cx", "cx_xc"):
        raise ValidationError("preset must be one of cz_cz, cx_cx, cx_xc")
    w = omega_g
    cores = _CORES[preset]

    def z_at(qubits):
        return "".join("z" if q in qubits else "i" for q in range(4))

    coherent = {z_at({1, 2}): 0.12 * w / 2}
    for _, control, target in cores:
        coherent[z_at({target})] = 0.052 * w / 2
        coherent[z_at({control})] = 0.071 * w / 2
        coherent[z_at({control, target})] = 0.085 * w / 2
    dissipators = []
    for q, (bd, bp) in enumerate(
        [(0.012, 0.011), (0.010, 0.013), (0.010, 0.013), (0.012, 0.011)]
    ):
        dissipators.append({"type": "amplitude_damping", "qubit": q, "rate": bd * w})
        dissipators.append({"type": "pure_dephasing", "qubit": q, "rate": bp * w})
    return {
        "n_qubits": 4,
        "gate": {"preset": preset, "theta": theta, "omega_g": omega_g},
        "coherent": coherent,
        "dissipators": dissipators,
    }


# ---------------------------------------------------------------------------
# Convergence study
# ---------------------------------------------------------------------------


def convergence_study(
    strengths=None,
    seed: int = 7,
    theta: float = np.pi / 2,
    preset: str = "cx",
    omega_g: float = 1.0,
    orders: tuple[int, ...] = (1, 2, 3, 4),
) -> dict:
    """Perturbative-vs-exact distances for a seeded dense random dissipator.

    For each strength the dissipator is the same seeded PSD matrix rescaled so
    its top eigenvalue is strength*omega_g.  Because the frame generator is
    linear in the dissipator, the Magnus terms obey Omega_k(c*L) = c^k *
    Omega_k(L); they are therefore integrated once at the largest strength and
    rescaled exactly, while the exact channel is recomputed per strength.

    Returns a report with rows (strength, method, order, distance) where
    distance is the normalized Frobenius distance to the exact noise channel.
    """
    if strengths is None:
        strengths = list(np.logspace(-4, -1, 7))
    strengths = [float(s) for s in strengths]
    if any(s <= 0 for s in strengths) or any(
        a >= b for a, b in zip(strengths, strengths[1:])
    ):
        raise ValidationError("strengths must be positive and strictly increasing")
    if sorted(set(orders)) != sorted(orders) or not set(orders) <= {1, 2, 3, 4}:
        raise ValidationError("orders must be distinct values in 1..4")

    gate = gate_preset(preset, theta=theta, omega_g=omega_g)
    n = gate.n_qubits
    s_ref = strengths[-1]
    paulis, B_ref = random_dense_beta(n, s_ref, seed, omega_g)
    model_ref = build_model(n, gate=gate, dissipators=[(paulis, B_ref)])
    T_ref = magnus(FramedLindbladian(model_ref, gate), order=max(orders))

    rows = []
    for s in strengths:
        scale = s / s_ref
        model = build_model(n, gate=gate, dissipators=[(paulis, B_ref * scale)])
        exact = exact_noise(FramedLindbladian(model, gate), position="left")
        terms = [om * scale ** (k + 1) for k, om in enumerate(T_ref.terms)]
        for order in orders:
            T = MagnusTerms(order, terms[:order], T_ref.grid_steps)
            for method, chan in (
                ("magnus", magnus_channel(T)),
                ("dyson", dyson_channel(T)),
            ):
                rows.append(
                    {
                        "strength": s,
                        "method": method,
                        "order": order,
                        "distance": float(frobenius_distance(chan, exact)),
                    }
                )
    return {
        "gate": {"preset": preset, "theta": float(theta), "omega_g": float(omega_g)},
        "seed": seed,
        "grid_steps": T_ref.grid_steps,
        "rows": rows,
    }


def convergence_to_csv(report: dict) -> str:
    lines = ["strength,method,order,distance"]
    for r in report["rows"]:
        lines.append(
            f"{float(r['strength'])!r},{r['method']},{r['order']},{float(r['distance'])!r}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


@dataclass
class SweepSpec:
    """A sweep axis, a strictly increasing grid, and the base config."""

    axis: str
    grid: list[float]
    base: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.axis not in ("theta", "strength"):
            raise ValidationError("axis must be theta or strength")
        self.grid = [float(x) for x in self.grid]
        if sorted(set(self.grid)) != self.grid:
            raise ValidationError("grid must be strictly increasing")


def _scaled_config(base: dict, factor: float) -> dict:
    """Rescale every noise rate (coherent and dissipative) uniformly."""
    cfg = json.loads(json.dumps(base))
    cfg["coherent"] = {k: v * factor for k, v in cfg.get("coherent", {}).items()}
    for d in cfg.get("dissipators", []):
        if "rate" in d:
            d["rate"] *= factor
        elif "strength" in d:
            d["strength"] *= factor
        else:
            raise ValidationError("cannot rescale an explicit dense matrix")
    return cfg


def angle_sweep(spec: SweepSpec) -> dict:
    """Numerical and analytic PL coefficients across gate angles."""
    if spec.axis != "theta":
        raise ValidationError("angle_sweep requires axis=theta")
    if any(not 0.0 <= t <= np.pi for t in spec.grid):
        raise ValidationError("theta grid must lie in [0, pi]")
    base = normalize_config(spec.base)
    rows = []
    for theta in spec.grid:
        cfg = json.loads(json.dumps(base))
        cfg["gate"].pop("tau_g", None)
        cfg["gate"]["theta"] = theta
        if theta == 0.0:
            num = {}
        else:
            rep = run_scenario(scenario_from_config(cfg, outputs=("pl",)))
            num = rep["pl"]["lambdas"]
        ana = analytic.aggregate(*analytic_prediction(cfg).values())
        rows.append(
            {
                "theta": theta,
                "numerical": dict(sorted(num.items())),
                "analytic": dict(sorted(ana.items())),
            }
        )
    labels = sorted({k for r in rows for k in r["numerical"] | r["analytic"]})
    return {
        "axis": "theta",
        "base_config": base,
        "config_sha256": config_hash(base),
        "labels": labels,
        "rows": rows,
    }


def precision_sweep(spec: SweepSpec) -> dict:
    """Per-coefficient |numerical - analytic| while rescaling all noise rates.

    The sweep axis is the rate of the first amplitude-damping dissipator in
    the base config (in units of omega_g); every other noise rate keeps its
    proportion to that reference.
    """
    if spec.axis != "strength":
        raise ValidationError("precision_sweep requires axis=strength")
    if any(not 0.0 <= s <= 0.1 for s in spec.grid):
        raise ValidationError("strength grid must lie in [0, 0.1]")
    base = normalize_config(spec.base)
    refs = [
        d["rate"]
        for d in base["dissipators"]
        if d["type"] == "amplitude_damping" and d["rate"] > 0
    ]
    if not refs:
        raise ValidationError("base config needs an amplitude-damping dissipator")
    omega = base["gate"]["omega_g"]
    ref = refs[0] / omega
    rows = []
    for s in spec.grid:
        if s == 0.0:
            rows.append({"strength": 0.0, "max_deviation": 0.0, "deviations": {}})
            continue
        cfg = _scaled_config(base, s / ref)
        rep = run_scenario(scenario_from_config(cfg, outputs=("pl",)))
        num = rep["pl"]["lambdas"]
        ana = analytic.aggregate(*analytic_prediction(cfg).values())
        dev = {
            lab: abs(num.get(lab, 0.0) - ana.get(lab, 0.0))
            for lab in sorted(set(num) | set(ana))
        }
        rows.append(
            {
                "strength": s,
                "max_deviation": max(dev.values(), default=0.0),
                "deviations": dev,
                "numerical": dict(sorted(num.items())),
                "analytic": dict(sorted(ana.items())),
            }
        )
    return {
        "axis": "strength",
        "base_config": base,
        "config_sha256": config_hash(base),
        "rows": rows,
    }


def sweep_to_csv(report: dict) -> str:
    """Plot-ready long-format CSV: one row per (grid point, Pauli label)."""
    axis = report["axis"]
    lines = [f"{axis},label,numerical,analytic"]
    for r in report["rows"]:
        num = r.get("numerical", {})
        ana = r.get("analytic", {})
        for lab in sorted(set(num) | set(ana)):
            lines.append(
                f"{float(r[axis])!r},{lab},"
                f"{float(num.get(lab, 0.0))!r},{float(ana.get(lab, 0.0))!r}"
            )
    return "\n".join(lines) + "\n"
