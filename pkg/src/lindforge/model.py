"""Declarative Lindblad models: ideal gate Hamiltonians, coherent noise, dissipators.

Rate conventions
----------------
All Hamiltonian coefficient maps store the FULL Pauli prefactor: the
Hamiltonian is H = sum_j coeff_j * P_j with no hidden factors. Builders that
take textbook rates (e.g. a phase-noise delta defined through (delta/2) Z)
apply the 1/2 themselves and say so in their docstrings. Rates are
dimensionless multiples of a declared unit frequency; tau_g carries the
inverse unit (everything is reported as rate/omega_g and theta = omega_g *
tau_g).

The identity Pauli never carries a Hamiltonian coefficient: it is a global
phase with no effect on channels, so presets strip it (the two-qubit cz
preset is (omega/2)(-IZ - ZI + ZZ) after stripping).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .pauli import PauliString, check_index_set, pauli_basis, to_matrix
from .superop import dissipator_pair, hamiltonian_generator

PSD_TOL = -1e-10

# Ideal-gate Hamiltonian coefficient maps (label -> multiple of omega_g).
# Two-qubit gates act on (control, target) = (qubit 0, qubit 1); the 3- and
# 4-qubit layouts embed them with spectators, and cx_xc mirrors the second
# gate so its control is the outer qubit 3.
_PRESETS: dict[str, dict[str, float]] = {
    "identity": {},
    "x": {"x": 0.5},
    "cz": {"iz": -0.5, "zi": -0.5, "zz": 0.5},
    "cx": {"ix": 0.5, "zx": -0.5},
    "i_cz": {"iiz": -0.5, "izi": -0.5, "izz": 0.5},
    "i_cx": {"iix": 0.5, "izx": -0.5},
    "cz_i": {"izi": -0.5, "zii": -0.5, "zzi": 0.5},
    "cx_i": {"ixi": 0.5, "zxi": -0.5},
    "cz_cz": {"izii": -0.5, "ziii": -0.5, "zzii": 0.5, "iiiz": -0.5, "iizi": -0.5, "iizz": 0.5},
    "cx_cx": {"ixii": 0.5, "zxii": -0.5, "iiix": 0.5, "iizx": -0.5},
    "cx_xc": {"ixii": 0.5, "zxii": -0.5, "iixi": 0.5, "iixz": -0.5},
}

_PRESET_QUBITS = {name: (len(next(iter(coeffs))) if coeffs else 0) for name, coeffs in _PRESETS.items()}


@dataclass(frozen=True)
class GatePreset:
    """An ideal gate: named Hamiltonian shape, rate omega_g, duration tau_g."""

    name: str
    n_qubits: int
    omega_g: float
    tau_g: float

    @property
    def theta(self) -> float:
        return self.omega_g * self.tau_g

    def hamiltonian_coeffs(self) -> dict[PauliString, float]:
        """Full-prefactor coefficient map of H_g."""
        return {
            PauliString.from_label(lab): c * self.omega_g
            for lab, c in _PRESETS[self.name].items()
        }

    def hamiltonian(self) -> np.ndarray:
        d = 2**self.n_qubits
        H = np.zeros((d, d), dtype=complex)
        for p, c in self.hamiltonian_coeffs().items():
            H += c * to_matrix(p)
        return H


def gate_preset(
    name: str,
    theta: float | None = None,
    tau_g: float | None = None,
    omega_g: float = 1.0,
    n_qubits: int | None = None,
) -> GatePreset:
    """Construct a preset from theta (= omega_g tau_g) or tau_g directly.

    The identity preset takes any n_qubits; named gates fix their own qubit
    count. Exactly one of theta / tau_g must be given.
    """
    if name not in _PRESETS:
        raise ValidationError(f"unknown gate preset {name!r}; choose from {sorted(_PRESETS)}")
    if (theta is None) == (tau_g is None):
        raise ValidationError("specify exactly one of theta or tau_g")
    if omega_g <= 0:
        raise ValidationError("omega_g must be positive")
    if tau_g is None:
        tau_g = theta / omega_g
    if tau_g < 0:
        raise ValidationError("tau_g must be non-negative")
    fixed_n = _PRESET_QUBITS[name]
    if fixed_n == 0:  # identity: any size
        n = n_qubits if n_qubits is not None else 1
    else:
        n = fixed_n
        if n_qubits is not None and n_qubits != n:
            raise ValidationError(f"preset {name!r} is a {n}-qubit gate")
    return GatePreset(name, n, float(omega_g), float(tau_g))


@dataclass
class LindbladModel:
    """Ideal + noise Hamiltonian coefficients and a dissipator matrix.

    ideal/noise map PauliString -> full Hamiltonian prefactor; beta is a
    Hermitian PSD matrix over beta_index (a PauliIndexSet). Values are
    treated as immutable once assembled.
    """

    n_qubits: int
    ideal: dict[PauliString, float] = field(default_factory=dict)
    noise: dict[PauliString, float] = field(default_factory=dict)
    beta_index: list[PauliString] = field(default_factory=list)
    beta: np.ndarray | None = None

    def __post_init__(self):
        if self.beta is None:
            self.beta = np.zeros((len(self.beta_index), len(self.beta_index)), dtype=complex)
        self.beta = np.asarray(self.beta, dtype=complex)
        if self.beta.shape != (len(self.beta_index), len(self.beta_index)):
            raise ValidationError("beta shape does not match beta_index")
        if self.beta_index:
            check_index_set(self.beta_index)
            if any(p.n_qubits != self.n_qubits for p in self.beta_index):
                raise ValidationError("beta_index n_qubits mismatch")
        for coeffs in (self.ideal, self.noise):
            for p, c in coeffs.items():
                if p.n_qubits != self.n_qubits:
                    raise ValidationError("coefficient n_qubits mismatch")
                if p.is_identity and c != 0.0:
                    raise ValidationError("identity Pauli carries no Hamiltonian coefficient")

    def validate_beta(self, clip: bool = False) -> np.ndarray:
        """Check Hermiticity and positive semi-definiteness (tolerance -1e-10).

        Returns the validated matrix. With clip=True, marginally negative
        eigenvalues (within tolerance) are zeroed after validation passes,
        for downstream consumers that need an exactly PSD matrix.
        """
        B = self.beta
        if B.size == 0:
            return B
        if np.abs(B - B.conj().T).max() > 1e-12 * max(1.0, np.abs(B).max()):
            raise ValidationError("dissipator matrix is not Hermitian")
        w, V = np.linalg.eigh(B)
        if w.min() < PSD_TOL:
            raise ValidationError(f"dissipator matrix not PSD: min eigenvalue {w.min():.3e}")
        if clip and w.min() < 0:
            B = (V * np.clip(w, 0, None)) @ V.conj().T
        return B

    def total_hamiltonian(self) -> np.ndarray:
        d = 2**self.n_qubits
        H = np.zeros((d, d), dtype=complex)
        for coeffs in (self.ideal, self.noise):
            for p, c in coeffs.items():
                if c != 0.0:
                    H += c * to_matrix(p)
        return H

    def noise_hamiltonian(self) -> np.ndarray:
        d = 2**self.n_qubits
        H = np.zeros((d, d), dtype=complex)
        for p, c in self.noise.items():
            if c != 0.0:
                H += c * to_matrix(p)
        return H


def amplitude_damping_beta(rate: float, qubit: int, n_qubits: int) -> tuple[list[PauliString], np.ndarray]:
    """Dissipator block of qubit relaxation, rate*D[S-] with S- = (X + iY)/2.

    Returns the 4x4 block (rate/4) * [[0,0,0,0],[0,1,-i,0],[0,i,1,0],[0,0,0,0]]
    over (I, X, Y, Z) at the given qubit (identity elsewhere); eigenvalues
    {0, 0, 0, rate/2}.
    """
    if rate < 0:
        raise ValidationError("amplitude damping rate must be >= 0")
    _check_qubit(qubit, n_qubits)
    paulis = _site_paulis(qubit, n_qubits)
    block = np.zeros((4, 4), dtype=complex)
    block[1, 1] = block[2, 2] = rate / 4
    block[1, 2] = -1j * rate / 4
    block[2, 1] = 1j * rate / 4
    return paulis, block


def pure_dephasing_beta(rate: float, qubit: int, n_qubits: int) -> tuple[list[PauliString], np.ndarray]:
    """Dissipator block of pure dephasing, (rate/2)*D[Z]: one entry rate/2 at (Z, Z)."""
    if rate < 0:
        raise ValidationError("dephasing rate must be >= 0")
    _check_qubit(qubit, n_qubits)
    paulis = _site_paulis(qubit, n_qubits)
    block = np.zeros((4, 4), dtype=complex)
    block[3, 3] = rate / 2
    return paulis, block


def phase_noise_hamiltonian(delta_iz: float, delta_zi: float, delta_zz: float) -> dict[PauliString, float]:
    """Two-qubit coherent phase noise (delta_iz/2) IZ + (delta_zi/2) ZI + (delta_zz/2) ZZ.

    Stores the halved values as full prefactors; zero deltas are omitted.
    """
    out = {}
    for lab, d in (("iz", delta_iz), ("zi", delta_zi), ("zz", delta_zz)):
        if not math.isfinite(d):
            raise ValidationError("non-finite phase-noise rate")
        if d != 0.0:
            out[PauliString.from_label(lab)] = d / 2
    return out


_XTALK_LABELS = {"control_spectator": "zzi", "target_spectator": "izz", "4q_mid": "izzi"}


def crosstalk_hamiltonian(layout: str, delta: float) -> dict[PauliString, float]:
    """Static ZZ crosstalk (delta/2) on the spectator pair of the chosen layout.

    Layouts: control_spectator -> ZZI (3 qubits), target_spectator -> IZZ
    (3 qubits), 4q_mid -> IZZI (4 qubits).
    """
    if layout not in _XTALK_LABELS:
        raise ValidationError(f"unknown crosstalk layout {layout!r}")
    if not math.isfinite(delta):
        raise ValidationError("non-finite crosstalk rate")
    if delta == 0.0:
        return {}
    return {PauliString.from_label(_XTALK_LABELS[layout]): delta / 2}


def random_dense_beta(
    n_qubits: int, strength: float, seed: int, omega_g: float = 1.0
) -> tuple[list[PauliString], np.ndarray]:
    """Seeded dense PSD dissipator over all non-identity Paulis.

    Draws a complex Gaussian G, forms G^dag G, and rescales so the largest
    eigenvalue equals strength*omega_g ("relative incoherent noise strength"
    is defined as max-eigenvalue/omega_g; this normalization is an assumption
    recorded in the project notes). Deterministic per seed; strength only
    rescales, so equal seeds share the same eigenbasis across strengths.
    """
    if strength < 0:
        raise ValidationError("strength must be >= 0")
    paulis = pauli_basis(n_qubits, include_identity=False)
    k = len(paulis)
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    B = G.conj().T @ G
    top = np.linalg.eigvalsh(B).max()
    if strength == 0.0:
        return paulis, np.zeros((k, k), dtype=complex)
    return paulis, B * (strength * omega_g / top)


def build_model(
    n_qubits: int,
    gate: GatePreset | None = None,
    noise_coeffs: dict[PauliString, float] | None = None,
    dissipators: list[tuple[list[PauliString], np.ndarray]] | None = None,
) -> LindbladModel:
    """Consolidate a gate preset, coherent noise, and dissipator blocks.

    Dissipator blocks over overlapping index sets are summed on the union
    index (stable lexicographic order), so the model ends up with a single
    (beta_index, beta) pair.
    """
    if gate is not None and gate.n_qubits != n_qubits:
        raise ValidationError("gate preset n_qubits mismatch")
    ideal = gate.hamiltonian_coeffs() if gate is not None else {}
    noise: dict[PauliString, float] = {}
    for p, c in (noise_coeffs or {}).items():
        if c != 0.0:
            noise[p] = noise.get(p, 0.0) + c
    index: list[PauliString] = []
    pos: dict[tuple[int, int], int] = {}
    terms = dissipators or []
    for paulis, _ in terms:
        for p in paulis:
            key = (p.x_bits, p.z_bits)
            if key not in pos:
                pos[key] = len(index)
                index.append(p)
    index = sorted(index, key=lambda p: p.index)
    pos = {(p.x_bits, p.z_bits): i for i, p in enumerate(index)}
    beta = np.zeros((len(index), len(index)), dtype=complex)
    for paulis, block in terms:
        block = np.asarray(block, dtype=complex)
        if block.shape != (len(paulis), len(paulis)):
            raise ValidationError("dissipator block shape mismatch")
        idx = [pos[(p.x_bits, p.z_bits)] for p in paulis]
        beta[np.ix_(idx, idx)] += block
    return LindbladModel(n_qubits, ideal=ideal, noise=noise, beta_index=index, beta=beta)


def merge_models(a: LindbladModel, b: LindbladModel) -> LindbladModel:
    """Entrywise sum of two models (coefficients add; betas add on the union index)."""
    if a.n_qubits != b.n_qubits:
        raise ValidationError("model n_qubits mismatch")
    coeffs = {}
    for src in (a.ideal, b.ideal):
        for p, c in src.items():
            coeffs[p] = coeffs.get(p, 0.0) + c
    noise = {}
    for src in (a.noise, b.noise):
        for p, c in src.items():
            noise[p] = noise.get(p, 0.0) + c
    merged = build_model(
        a.n_qubits,
        dissipators=[(a.beta_index, a.beta), (b.beta_index, b.beta)] if (a.beta_index or b.beta_index) else None,
    )
    merged.ideal = {p: c for p, c in coeffs.items() if c != 0.0}
    merged.noise = {p: c for p, c in noise.items() if c != 0.0}
    return merged


def assemble(model: LindbladModel, clip: bool = False) -> np.ndarray:
    """Full Lindblad generator: -i[H_ideal + H_noise, .] + sum beta_jk D[P_j, P_k].

    Validates dissipator PSD first (tolerance -1e-10; clip=True zeroes a
    marginally negative part instead of failing). Only nonzero beta entries
    are expanded, so sparse physical models stay cheap.
    """
    B = model.validate_beta(clip=clip)
    L = hamiltonian_generator(model.total_hamiltonian())
    rows, cols = np.nonzero(np.abs(B) > 0)
    for j, k in zip(rows, cols):
        L = L + B[j, k] * dissipator_pair(model.beta_index[j], model.beta_index[k])
    return L


def _check_qubit(qubit: int, n_qubits: int) -> None:
    if not (0 <= qubit < n_qubits):
        raise ValidationError(f"qubit {qubit} out of range for n={n_qubits}")


def _site_paulis(qubit: int, n_qubits: int) -> list[PauliString]:
    """(I, X, Y, Z) at one site, identity elsewhere, as n-qubit strings."""
    out = []
    for c in "ixyz":
        label = "".join(c if q == qubit else "i" for q in range(n_qubits))
        out.append(PauliString.from_label(label))
    return out
