"""Dense superoperator calculus.

Vectorization is row-major: vec(rho)[d*i + j] = rho[i, j]. Under it the map
rho -> A rho B is the matrix kron(A, B.T), so the "A (.) B" two-sided
notation used throughout this package is literally A (x) B^T. A channel
rho -> U rho U^dagger is kron(U, U.conj()).

PTMs live on the normalized Pauli basis: PTM[a, b] = (1/2^n) Tr[P_a S(P_b)].
For a trace-preserving channel the first PTM row is (1, 0, ..., 0) and the
diagonal holds the Pauli fidelities.
"""

from __future__ import annotations

import json
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import BranchCutError, SingularChannelError, ValidationError
from .pauli import PauliString, pauli_basis, to_matrix

# A SuperOperator is a plain complex ndarray of shape (4^n, 4^n); a PTM is a
# real ndarray of the same shape. Both are immutable by convention.

BRANCH_CUT_TOL = 1e-12
SINGULAR_TOL = 1e-14
IMAG_RESIDUE_TOL = 1e-10


def n_qubits_of(S: np.ndarray) -> int:
    dim = S.shape[0]
    n = round(np.log2(dim) / 2)
    if S.shape != (dim, dim) or 4**n != dim:
        raise ValidationError(f"not a superoperator shape: {S.shape}")
    return n


def vec(rho: np.ndarray) -> np.ndarray:
    """Row-major vectorization."""
    return np.asarray(rho).reshape(-1)


def unvec(v: np.ndarray) -> np.ndarray:
    d = round(np.sqrt(v.size))
    return np.asarray(v).reshape(d, d)


def left_right(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> A rho B."""
    return np.kron(A, B.T)


def channel_from_unitary(U: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> U rho U^dagger."""
    return np.kron(U, U.conj())


def hamiltonian_generator(H: np.ndarray) -> np.ndarray:
    """Generator -i[H, .] as a superoperator; H must be Hermitian."""
    H = np.asarray(H, dtype=complex)
    scale = max(1.0, np.abs(H).max())
    if np.abs(H - H.conj().T).max() > 1e-12 * scale:
        raise ValidationError("Hamiltonian is not Hermitian within 1e-12")
    eye = np.eye(H.shape[0])
    return -1j * (np.kron(H, eye) - np.kron(eye, H.T))


def dissipator_pair(Pj: PauliString | np.ndarray, Pk: PauliString | np.ndarray) -> np.ndarray:
    """Two-sided dissipator rho -> Pj rho Pk^dag - (1/2){Pk^dag Pj, rho}.

    Accepts PauliString or dense operators (the dense path serves
    frame-rotated Paulis, which are no longer Pauli strings).
    """
    if isinstance(Pj, PauliString) or isinstance(Pk, PauliString):
        if not (isinstance(Pj, PauliString) and isinstance(Pk, PauliString)):
            raise ValidationError("mixed PauliString/matrix dissipator arguments")
        if Pj.n_qubits != Pk.n_qubits:
            raise ValidationError("Pauli dimension mismatch")
        A, B = to_matrix(Pj), to_matrix(Pk)
    else:
        A, B = np.asarray(Pj, dtype=complex), np.asarray(Pk, dtype=complex)
        if A.shape != B.shape:
            raise ValidationError("operator dimension mismatch")
    BdA = B.conj().T @ A
    eye = np.eye(A.shape[0])
    return np.kron(A, B.conj()) - 0.5 * np.kron(BdA, eye) - 0.5 * np.kron(eye, BdA.T)


def expm_channel(L: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Channel exp(L t); trace-preserving whenever L annihilates the trace."""
    if not np.all(np.isfinite(L)):
        raise ValidationError("non-finite entries in generator")
    return scipy.linalg.expm(L * t)


def logm_channel(C: np.ndarray) -> np.ndarray:
    """Principal matrix logarithm of a channel, with branch-cut guards.

    Raises SingularChannelError if any eigenvalue magnitude is < 1e-14 and
    BranchCutError if any eigenvalue sits within 1e-12 of the closed negative
    real axis. No shifting or regularization is attempted.
    """
    w = np.linalg.eigvals(C)
    if np.abs(w).min() < SINGULAR_TOL:
        raise SingularChannelError(f"channel eigenvalue magnitude {np.abs(w).min():.3e}")
    on_cut = (w.real < 0) & (np.abs(w.imag) <= BRANCH_CUT_TOL)
    if np.any(on_cut):
        bad = w[on_cut][0]
        raise BranchCutError(f"eigenvalue {bad:.6e} within {BRANCH_CUT_TOL} of the branch cut")
    L = scipy.linalg.logm(C)
    return np.asarray(L, dtype=complex)


def real_part_checked(M: np.ndarray, tol: float = IMAG_RESIDUE_TOL) -> np.ndarray:
    """Drop an imaginary residue expected to be numerical noise; error if large."""
    resid = np.abs(M.imag).max() if np.iscomplexobj(M) else 0.0
    if resid > tol:
        raise ValidationError(f"imaginary residue {resid:.3e} exceeds {tol} on real-expected data")
    return np.ascontiguousarray(M.real) if np.iscomplexobj(M) else np.asarray(M, dtype=float)


@lru_cache(maxsize=None)
def _pauli_stack(n: int) -> np.ndarray:
    """Matrix whose columns are vec(P_b) over the lexicographic basis."""
    cols = [vec(to_matrix(p)) for p in pauli_basis(n)]
    Q = np.column_stack(cols)
    Q.setflags(write=False)
    return Q


def to_ptm(S: np.ndarray, check_real: bool = True) -> np.ndarray:
    """PTM[a,b] = (1/2^n) Tr[P_a S(P_b)]; errors if not real to 1e-10.

    check_real=False returns the raw complex matrix (used by callers that
    want to inspect the imaginary residue themselves).
    """
    n = n_qubits_of(S)
    Q = _pauli_stack(n)
    R = (Q.conj().T @ S @ Q) / (2**n)
    return real_part_checked(R) if check_real else R


def from_ptm(R: np.ndarray) -> np.ndarray:
    """Inverse of to_ptm (exact round trip)."""
    n = n_qubits_of(R)
    Q = _pauli_stack(n)
    return (Q @ R.astype(complex) @ Q.conj().T) / (2**n)


def choi_matrix(S: np.ndarray) -> np.ndarray:
    """Unit-trace Choi matrix of a trace-preserving channel.

    Reshuffle of the superoperator; positive semi-definiteness of the result
    is equivalent to complete positivity of the channel.
    """
    n = n_qubits_of(S)
    d = 2**n
    C = S.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)
    return C / d


def choi_min_eig(S: np.ndarray) -> float:
    """Minimum eigenvalue of the (unit-trace) Choi matrix; >= -tol means CP."""
    C = choi_matrix(S)
    return float(np.linalg.eigvalsh((C + C.conj().T) / 2).min())


def frobenius_distance(A: np.ndarray, B: np.ndarray) -> float:
    """||A - B||_F / d^4 with d = 2^n (the convergence-study normalization)."""
    if A.shape != B.shape:
        raise ValidationError("superoperator dimension mismatch")
    d4 = A.shape[0] ** 2  # (d^2)^2 = d^4
    return float(np.linalg.norm(A - B) / d4)


def trace_row_defect(L: np.ndarray) -> float:
    """Max |(Tr o L)| matrix element: 0 for a trace-annihilating generator."""
    n = n_qubits_of(L)
    tr = vec(np.eye(2**n)).conj()  # Tr[X] = <vec(I), vec(X)>
    return float(np.abs(tr @ L).max())


# --- serialization ---------------------------------------------------------


def superop_to_json(S: np.ndarray) -> str:
    """JSON container {n_qubits, convention, data}; data is row-major [re, im] pairs."""
    n = n_qubits_of(S)
    flat = np.asarray(S, dtype=complex).reshape(-1)
    data = [[float(c.real), float(c.imag)] for c in flat]
    return json.dumps({"n_qubits": n, "convention": "A_kron_BT", "data": data})


def superop_from_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    if obj.get("convention") != "A_kron_BT":
        raise ValidationError(f"unsupported convention {obj.get('convention')!r}")
    n = int(obj["n_qubits"])
    dim = 4**n
    flat = np.array([complex(re, im) for re, im in obj["data"]])
    if flat.size != dim * dim:
        raise ValidationError("data length does not match n_qubits")
    return flat.reshape(dim, dim)


def ptm_to_csv(R: np.ndarray) -> str:
    """CSV rows of a real PTM, labeled by the lexicographic Pauli order."""
    n = n_qubits_of(R)
    R = real_part_checked(np.asarray(R))
    labels = [p.label for p in pauli_basis(n)]
    lines = ["," + ",".join(labels)]
    for lab, row in zip(labels, R):
        lines.append(lab + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
