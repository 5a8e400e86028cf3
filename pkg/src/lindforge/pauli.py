"""Symplectic algebra of n-qubit Pauli operators.

A Pauli is stored as a pair of bit masks (x_bits, z_bits) plus a phase
exponent: the operator is i**phase_exp * prod_q P_q, where the per-qubit
factor is I, X, Y or Z according to the (x, z) bit pair

    (0,0) -> I    (1,0) -> X    (1,1) -> Y    (0,1) -> Z

Bit q of each mask belongs to qubit q, and qubit 0 is the LEFTMOST character
of the text label: "izzi" means I on qubit 0, Z on qubits 1-2, I on qubit 3.
Group logic (products, commutation, enumeration) never touches dense
matrices; matrices are materialized only by to_matrix at superoperator
boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError

# Default cap on dense-matrix realization; superoperators beyond n=6 are out
# of scope for this package (4096^2 complexes is the practical desk limit).
MAX_QUBITS = 6

_CHARS = "ixyz"
_CHAR_BITS = {"i": (0, 0), "x": (1, 0), "y": (1, 1), "z": (0, 1)}
_SINGLE = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli operator in symplectic form with an i**k phase."""

    n_qubits: int
    x_bits: int
    z_bits: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValidationError("n_qubits must be >= 1")
        mask = (1 << self.n_qubits) - 1
        object.__setattr__(self, "x_bits", self.x_bits & mask)
        object.__setattr__(self, "z_bits", self.z_bits & mask)
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def from_label(cls, label: str, phase_exp: int = 0) -> "PauliString":
        """Parse a lowercase label like "izzi" (qubit 0 leftmost)."""
        label = label.lower()
        if not label or any(c not in _CHAR_BITS for c in label):
            raise ValidationError(f"invalid Pauli label {label!r}")
        x = z = 0
        for q, c in enumerate(label):
            xb, zb = _CHAR_BITS[c]
            x |= xb << q
            z |= zb << q
        return cls(len(label), x, z, phase_exp)

    @property
    def label(self) -> str:
        """Text label, qubit 0 leftmost; phase not included."""
        out = []
        for q in range(self.n_qubits):
            xb = (self.x_bits >> q) & 1
            zb = (self.z_bits >> q) & 1
            out.append(_CHARS[{(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}[(xb, zb)]])
        return "".join(out)

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    @property
    def index(self) -> int:
        """Position in the lexicographic I<X<Y<Z order, qubit 0 most significant."""
        idx = 0
        for q in range(self.n_qubits):
            xb = (self.x_bits >> q) & 1
            zb = (self.z_bits >> q) & 1
            digit = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}[(xb, zb)]
            idx += digit << (2 * (self.n_qubits - 1 - q))
        return idx

    def __repr__(self):
        pre = {0: "", 1: "i*", 2: "-", 3: "-i*"}[self.phase_exp]
        return f"PauliString({pre}{self.label})"


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Exact operator product a·b with the phase tracked as a power of i."""
    if a.n_qubits != b.n_qubits:
        raise ValidationError("Pauli dimension mismatch")
    x = a.x_bits ^ b.x_bits
    z = a.z_bits ^ b.z_bits
    # Phase bookkeeping for the canonical form i**(x·z) X^x Z^z per qubit:
    # commuting Z^z1 past X^x2 gives (-1)^(z1·x2), and each factor carries
    # i**(x·z) into / out of canonical form.
    phase = (
        a.phase_exp
        + b.phase_exp
        + (a.x_bits & a.z_bits).bit_count()
        + (b.x_bits & b.z_bits).bit_count()
        + 2 * (a.z_bits & b.x_bits).bit_count()
        - (x & z).bit_count()
    )
    return PauliString(a.n_qubits, x, z, phase % 4)


def anticommutes(a: PauliString, b: PauliString) -> int:
    """1 iff ab = -ba, from the symplectic inner product x_a·z_b + z_a·x_b mod 2."""
    if a.n_qubits != b.n_qubits:
        raise ValidationError("Pauli dimension mismatch")
    return ((a.x_bits & b.z_bits).bit_count() + (a.z_bits & b.x_bits).bit_count()) % 2


def to_matrix(p: PauliString, max_qubits: int | None = None) -> np.ndarray:
    """Dense 2^n x 2^n complex matrix of p, including its i**phase_exp."""
    cap = MAX_QUBITS if max_qubits is None else max_qubits
    if p.n_qubits > cap:
        raise ValidationError(f"n_qubits={p.n_qubits} exceeds cap {cap}")
    m = _basis_matrix(p.n_qubits, p.index).copy()
    if p.phase_exp:
        m *= 1j ** p.phase_exp
    return m


@lru_cache(maxsize=None)
def _basis_matrix(n: int, index: int) -> np.ndarray:
    m = np.ones((1, 1), dtype=complex)
    for q in range(n):
        digit = (index >> (2 * (n - 1 - q))) & 3
        xb, zb = _CHAR_BITS[_CHARS[digit]]
        m = np.kron(m, _SINGLE[(xb, zb)])
    m.setflags(write=False)
    return m


def from_index(n: int, index: int) -> PauliString:
    """Inverse of PauliString.index."""
    assert 0 <= index < 4**n
    x = z = 0
    for q in range(n):
        digit = (index >> (2 * (n - 1 - q))) & 3
        xb, zb = _CHAR_BITS[_CHARS[digit]]
        x |= xb << q
        z |= zb << q
    return PauliString(n, x, z)


def pauli_basis(n: int, include_identity: bool = True) -> list[PauliString]:
    """The full 4^n Pauli group modulo phase, in lexicographic I<X<Y<Z order.

    The list is a PauliIndexSet: duplicate-free, stable, qubit 0 most
    significant. With include_identity=False the identity is dropped and the
    remaining 4^n-1 elements keep their relative order.
    """
    start = 0 if include_identity else 1
    return [from_index(n, k) for k in range(start, 4**n)]


def check_index_set(paulis: list[PauliString]) -> None:
    """Validate a user-supplied support set: uniform n, no duplicates."""
    if not paulis:
        raise ValidationError("empty Pauli index set")
    n = paulis[0].n_qubits
    seen = set()
    for p in paulis:
        if p.n_qubits != n:
            raise ValidationError("mixed n_qubits in Pauli index set")
        key = (p.x_bits, p.z_bits)
        if key in seen:
            raise ValidationError(f"duplicate Pauli {p.label} in index set")
        seen.add(key)
