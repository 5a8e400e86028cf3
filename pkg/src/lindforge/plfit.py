"""Pauli twirling, Pauli fidelities, and sparse Pauli-Lindblad fitting.

Twirling a channel over the Pauli group keeps exactly the diagonal of its
PTM (character orthogonality kills every off-diagonal element), so the twirl
is computed as diagonal extraction in the PTM picture; the brute-force
4^n-term conjugation average agrees and serves as the test oracle.

A Pauli-Lindblad generator L = sum_k lambda_k (P_k (.) P_k - I (.) I) acts
diagonally on Paulis, giving fidelities

    f_b = exp(-2 sum_{k anticommuting with b} lambda_k)

so fitting is the linear solve log f_b = -2 M lambda with M the
anticommutation indicator over non-identity Paulis. (In the lambda =
-(1/2) S^{-1} log f convention, S is realized as 2M; this is forced by the
diagonal action above and is the defining convention here.) The full-support
solve is exact — M is invertible on the whole group; a sparse support uses
least squares with the residual reported.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .pauli import PauliString, pauli_basis
from .superop import from_ptm, real_part_checked, to_ptm

PRUNE_TOL = 1e-12
TWIRL_RESIDUE_WARN = 1e-10


@dataclass
class PLModel:
    """A sparse Pauli-Lindblad generator: map from Pauli to rate lambda_k."""

    n_qubits: int
    lambdas: dict[PauliString, float] = field(default_factory=dict)
    prune_tol: float = PRUNE_TOL
    residual: float = 0.0

    def __post_init__(self):
        for p in self.lambdas:
            if p.n_qubits != self.n_qubits:
                raise ValidationError("lambda key n_qubits mismatch")
            if p.is_identity:
                raise ValidationError("identity carries no PL rate")

    @property
    def total(self) -> float:
        """Sum of rates; the leading-order infidelity driver."""
        return float(sum(self.lambdas.values()))

    def by_label(self) -> dict[str, float]:
        return {p.label: v for p, v in sorted(self.lambdas.items(), key=lambda kv: kv[0].index)}

    def support(self, threshold: float = 0.0) -> list[PauliString]:
        """Paulis with |lambda| above threshold, in lexicographic order."""
        keep = [p for p, v in self.lambdas.items() if abs(v) > threshold]
        return sorted(keep, key=lambda p: p.index)

    def to_json(self) -> str:
        return json.dumps({"n_qubits": self.n_qubits, "lambdas": self.by_label()}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PLModel":
        obj = json.loads(text)
        lambdas = {PauliString.from_label(lab): float(v) for lab, v in obj["lambdas"].items()}
        return cls(int(obj["n_qubits"]), lambdas)


def _twirl(S: np.ndarray) -> np.ndarray:
    R = to_ptm(S, check_real=False)
    resid = np.abs(np.diag(R).imag).max()
    if resid > TWIRL_RESIDUE_WARN:
        warnings.warn(
            f"imaginary PTM-diagonal residue {resid:.3e} after twirl "
            "(input does not preserve Hermiticity)",
            stacklevel=3,
        )
    return from_ptm(np.diag(np.diag(R).real))


def pauli_twirl(N: np.ndarray) -> np.ndarray:
    """Average of the conjugations P_k^dag N(P_k . P_k^dag) P_k over the Pauli group.

    Character orthogonality makes this exactly the PTM-diagonal part of N,
    which is how it is computed. A diagonal imaginary residue above 1e-10
    signals a non-Hermiticity-preserving input and triggers a diagnostics
    warning (never an error).
    """
    return _twirl(N)


def generator_twirl(L: np.ndarray) -> np.ndarray:
    """Twirl applied at the generator level: diagonal part of L's PTM."""
    return _twirl(L)


def fidelities(N: np.ndarray) -> np.ndarray:
    """Pauli fidelities: the PTM diagonal, ordered like pauli_basis(n).

    Requires a trace-preserving channel (f_identity = 1 within 1e-12).
    """
    R = to_ptm(N)
    f = np.diag(R).copy()
    if abs(f[0] - 1.0) > 1e-12:
        raise ValidationError(f"channel is not trace preserving: f_identity = {f[0]!r}")
    f[0] = 1.0
    return f


@lru_cache(maxsize=None)
def anticommutation_matrix(n: int) -> np.ndarray:
    """M[b, k] = 1 iff P_b and P_k anticommute, over non-identity Paulis."""
    ps = pauli_basis(n, include_identity=False)
    x = np.array([p.x_bits for p in ps], dtype=np.uint64)
    z = np.array([p.z_bits for p in ps], dtype=np.uint64)
    xz = np.bitwise_and(x[:, None], z[None, :])
    zx = np.bitwise_and(z[:, None], x[None, :])
    counts = _popcount(xz) + _popcount(zx)
    M = (counts % 2).astype(float)
    M.setflags(write=False)
    return M


def _popcount(a: np.ndarray) -> np.ndarray:
    out = np.zeros(a.shape, dtype=np.int64)
    a = a.copy()
    while a.any():
        out += (a & 1).astype(np.int64)
        a >>= 1
    return out


def fit_pl(
    f: np.ndarray,
    support: list[PauliString] | None = None,
    n_qubits: int | None = None,
    prune_tol: float = PRUNE_TOL,
) -> PLModel:
    """Fit lambda from fidelities: solve log f_b = -2 sum_k M[b,k] lambda_k.

    f is the full 4^n fidelity vector (identity first). support=None solves
    on the full non-identity group (exact, square system); an explicit
    support list solves least squares and reports the residual. Rates with
    |lambda| below prune_tol are dropped from the returned model.
    """
    f = np.asarray(f, dtype=float)
    if n_qubits is None:
        n_qubits = round(np.log2(f.size) / 2)
    if f.size != 4**n_qubits:
        raise ValidationError("fidelity vector length is not 4^n")
    if np.any(f <= 0):
        raise ValidationError("non-positive fidelity: log-domain error")
    y = -0.5 * np.log(f[1:])
    M = anticommutation_matrix(n_qubits)
    if support is None:
        lam = np.linalg.solve(M, y)
        keys = pauli_basis(n_qubits, include_identity=False)
        resid = 0.0
    else:
        if any(p.is_identity for p in support):
            raise ValidationError("identity cannot be in the fit support")
        cols = [p.index - 1 for p in support]
        A = M[:, cols]
        if np.linalg.matrix_rank(A) < len(cols):
            raise ValidationError("singular sparse support: rank-deficient fit")
        lam, res, _, _ = np.linalg.lstsq(A, y, rcond=None)
        keys = list(support)
        resid = float(np.linalg.norm(A @ lam - y))
    lambdas = {p: float(v) for p, v in zip(keys, lam) if abs(v) >= prune_tol}
    return PLModel(n_qubits, lambdas, prune_tol=prune_tol, residual=resid)


def pl_fidelities(m: PLModel) -> np.ndarray:
    """Closed-form fidelities of the PL channel: f_b = exp(-2 sum_anti lambda)."""
    n = m.n_qubits
    lam_full = np.zeros(4**n - 1)
    for p, v in m.lambdas.items():
        lam_full[p.index - 1] = v
    M = anticommutation_matrix(n)
    f = np.empty(4**n)
    f[0] = 1.0
    f[1:] = np.exp(-2.0 * (M @ lam_full))
    return f


def pl_channel(m: PLModel) -> np.ndarray:
    """exp of the PL generator — a Pauli channel, built from its exact fidelities."""
    return from_ptm(np.diag(pl_fidelities(m)))


def pl_generator(m: PLModel) -> np.ndarray:
    """The PL generator sum_k lambda_k (P_k (.) P_k - I (.) I) as a superoperator."""
    from .pauli import to_matrix  # local import keeps module load light

    dim = 4**m.n_qubits
    L = np.zeros((dim, dim), dtype=complex)
    eye = np.eye(dim)
    for p, v in m.lambdas.items():
        P = to_matrix(p)
        L += v * (np.kron(P, P.T) - eye)
    return L


def average_gate_fidelity(m: PLModel) -> float:
    """Leading-order average gate fidelity 1 - [d/(d+1)] sum_k lambda_k."""
    d = 2**m.n_qubits
    return 1.0 - d / (d + 1.0) * m.total


def fidelities_to_csv(f: np.ndarray, n_qubits: int) -> str:
    labels = [p.label for p in pauli_basis(n_qubits)]
    lines = ["label,f"]
    for lab, v in zip(labels, f):
        lines.append(f"{lab},{float(v)!r}")
    return "\n".join(lines) + "\n"
