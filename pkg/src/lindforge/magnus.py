"""Magnus and Dyson expansions of the time-ordered frame evolution.

The time-ordered exponential of the frame generator L(t) over [0, T] is
written exp(Omega_1 + ... + Omega_k) with

    Omega_1 = int L_1
    Omega_2 = (1/2) int [L_1, L_2]
    Omega_3 = (1/6) int ([L_1, [L_2, L_3]] + [[L_1, L_2], L_3])
    Omega_4 = (1/12) int ([L_1, [L_2, [L_3, L_4]]] + [L_1, [[L_2, L_3], L_4]]
                          + [[[L_1, L_2], L_3], L_4] + [L_2, [L_3, [L_4, L_1]]])

(L_j = L(t_j), integrals over the ordered simplex T >= t_1 >= ... >= t_k >= 0;
the commutator groupings are implemented verbatim, with no resummation
shortcuts). Every nested integral is maintained as a running accumulator so
one forward pass over a uniform grid produces all orders: the accumulators
form a coupled linear ODE system

    S1' = L          D2' = L S1       A2' = S1 L
    D3' = L D2       A3' = A2 L
    N3' = [L, D2 - A2]
    M'  = L D2 - S1 L S1 + A2 L
    C1' = [L, N3]    C2' = [L, M]
    C3' = L D3 - S1 L D2 + A2 L S1 - A3 L
    C4' = D3 L - D2 L S1 + S1 L A2 - L A3

whose terminal values give Omega_1 = S1, Omega_2 = (D2 - A2)/2,
Omega_3 = (N3 + M)/6, Omega_4 = (C1 + C2 + C3 + C4)/12. (The mixed-order
words such as S1 L S1 expand into the simplex integrals with the latest time
in an interior slot, which is how the non-descending commutator words are
reached by a single left-to-right pass.) The system is integrated with
classical RK4, which for the plain (non-nested) integrals reduces exactly to
composite Simpson weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ValidationError
from .frame import FramedLindbladian
from .superop import expm_channel, frobenius_distance  # noqa: F401  (re-export)

GRID_STEPS_DEFAULT = 512
REFINE_TOL = 1e-9
MAX_GRID_STEPS = 1 << 15


@dataclass
class MagnusTerms:
    """Magnus terms Omega_1..Omega_order on a given quadrature grid."""

    order: int
    terms: list[np.ndarray]
    grid_steps: int


def _sample_L(F: FramedLindbladian, steps: int) -> list[np.ndarray]:
    """Frame generator on the half-step grid needed by RK4 stages."""
    T = F.gate.tau_g
    h = T / steps
    return [F.eval_L_I(k * h / 2) for k in range(2 * steps + 1)]


def _rk4(L_vals: list[np.ndarray], h: float, steps: int, state: list[np.ndarray], rhs) -> list[np.ndarray]:
    for i in range(steps):
        L0, Lh, L1 = L_vals[2 * i], L_vals[2 * i + 1], L_vals[2 * i + 2]
        k1 = rhs(L0, state)
        k2 = rhs(Lh, [y + 0.5 * h * k for y, k in zip(state, k1)])
        k3 = rhs(Lh, [y + 0.5 * h * k for y, k in zip(state, k2)])
        k4 = rhs(L1, [y + h * k for y, k in zip(state, k3)])
        state = [
            y + (h / 6.0) * (a + 2 * b + 2 * c + d)
            for y, a, b, c, d in zip(state, k1, k2, k3, k4)
        ]
    return state


def _magnus_rhs(order: int):
    """Derivatives of (S1, D2, A2, D3, A3, N3, M, C1, C2, C3, C4) up to order."""

    def rhs(L, state):
        S1 = state[0]
        dS1 = L
        out = [dS1]
        if order >= 2:
            D2, A2 = state[1], state[2]
            Ls1 = L @ S1
            out += [Ls1, S1 @ L]
        if order >= 3:
            D3, A3, N3, M = state[3], state[4], state[5], state[6]
            Ld2 = L @ D2
            a2L = A2 @ L
            out += [Ld2, a2L, L @ (D2 - A2) - (D2 - A2) @ L, Ld2 - S1 @ Ls1 + a2L]
        if order >= 4:
            C3_d = L @ D3 - S1 @ Ld2 + A2 @ Ls1 - A3 @ L
            C4_d = D3 @ L - D2 @ Ls1 + S1 @ (L @ A2) - L @ A3
            out += [L @ N3 - N3 @ L, L @ M - M @ L, C3_d, C4_d]
        return out

    return rhs


_STATE_SIZES = {1: 1, 2: 3, 3: 7, 4: 11}


def _magnus_pass(F: FramedLindbladian, order: int, steps: int) -> list[np.ndarray]:
    dim = 4**F.model.n_qubits
    zeros = [np.zeros((dim, dim), dtype=complex) for _ in range(_STATE_SIZES[order])]
    T = F.gate.tau_g
    if T == 0.0:
        final = zeros
    else:
        L_vals = _sample_L(F, steps)
        final = _rk4(L_vals, T / steps, steps, zeros, _magnus_rhs(order))
    terms = [final[0]]
    if order >= 2:
        terms.append(0.5 * (final[1] - final[2]))
    if order >= 3:
        terms.append((final[5] + final[6]) / 6.0)
    if order >= 4:
        terms.append((final[7] + final[8] + final[9] + final[10]) / 12.0)
    return terms


def magnus(
    F: FramedLindbladian,
    order: int = 4,
    grid_steps: int = GRID_STEPS_DEFAULT,
    refine: bool = True,
) -> MagnusTerms:
    """Magnus terms Omega_1..Omega_order of the frame evolution over [0, tau_g].

    The uniform grid starts at grid_steps and doubles until another doubling
    changes every term by at most 1e-9 (Frobenius); failure to settle raises
    ConvergenceError. refine=False skips the check (single pass).
    """
    if order not in (1, 2, 3, 4):
        raise ValidationError("order must be in 1..4")
    if grid_steps < 16:
        raise ValidationError("grid_steps must be >= 16")
    if not refine:
        return MagnusTerms(order, _magnus_pass(F, order, grid_steps), grid_steps)
    steps = grid_steps
    coarse = _magnus_pass(F, order, steps)
    while steps <= MAX_GRID_STEPS:
        fine = _magnus_pass(F, order, 2 * steps)
        delta = max(np.linalg.norm(f - c) for f, c in zip(fine, coarse))
        if delta <= REFINE_TOL:
            return MagnusTerms(order, fine, 2 * steps)
        steps *= 2
        coarse = fine
    raise ConvergenceError(f"Magnus grid refinement stalled at {steps} steps (delta {delta:.3e})")


def dyson_terms(F: FramedLindbladian, order: int = 4, grid_steps: int = GRID_STEPS_DEFAULT) -> list[np.ndarray]:
    """Plain iterated integrals T_k = int L(t_1)...L(t_k) over the ordered simplex.

    These are the order-k terms of the time-ordered exponential itself; they
    double as an independent oracle for the Magnus terms through the exact
    identities T_2 = Omega_2 + Omega_1^2/2, etc.
    """
    if order not in (1, 2, 3, 4):
        raise ValidationError("order must be in 1..4")
    dim = 4**F.model.n_qubits
    state = [np.zeros((dim, dim), dtype=complex) for _ in range(order)]
    T = F.gate.tau_g
    if T == 0.0:
        return state

    def rhs(L, st):
        out = [L]
        for k in range(1, order):
            out.append(L @ st[k - 1])
        return out

    return _rk4(_sample_L(F, grid_steps), T / grid_steps, grid_steps, state, rhs)


def magnus_channel(T: MagnusTerms) -> np.ndarray:
    """exp(sum of Magnus terms): trace-preserving at every truncation order."""
    return expm_channel(sum(T.terms))


def dyson_channel(T: MagnusTerms) -> np.ndarray:
    """Taylor re-expansion of exp(sum Omega_k) truncated at T.order.

    Order 4 includes (1/2)Omega_2^2 (forced by the exponential expansion; the
    reconstruction then equals the plain iterated-integral series I + T_1 +
    ... + T_4 identically).
    """
    O = T.terms
    dim = O[0].shape[0]
    eye = np.eye(dim, dtype=complex)
    out = eye + O[0]
    if T.order >= 2:
        O1sq = O[0] @ O[0]
        out = out + O[1] + 0.5 * O1sq
    if T.order >= 3:
        out = out + O[2] + 0.5 * (O[0] @ O[1] + O[1] @ O[0]) + O1sq @ O[0] / 6.0
    if T.order >= 4:
        out = (
            out
            + O[3]
            + 0.5 * (O[0] @ O[2] + O[2] @ O[0])
            + 0.5 * (O[1] @ O[1])
            + (O1sq @ O[1] + O[0] @ O[1] @ O[0] + O[1] @ O1sq) / 6.0
            + O1sq @ O1sq / 24.0
        )
    return out
