"""Closed-form leading-order Pauli-Lindblad coefficients for benchmark scenarios.

Every function in this module returns a plain ``dict`` mapping lowercase Pauli
labels to coefficient values.  The maps hold the *structurally* nonzero entries
of the leading-order expansion; an entry may still evaluate to zero at special
angles (e.g. ``sin(4*theta) = 4*theta`` has no real solutions, but
``sin(theta)**4`` vanishes at ``theta = pi``).

Conventions
-----------
* ``theta`` is the gate angle; the gate duration is ``tau_g = theta / omega_g``.
  The "identity" gate is idle evolution for the same duration ``tau_g``.
* Dissipative rates (``beta_down``, ``beta_phi``) enter to first order; the
  returned coefficients are linear in ``rate / omega_g``.
* Coherent error strengths (``delta``) enter to second order; the returned
  coefficients are quadratic in ``delta / omega_g``.  ``delta`` is the rate in
  the convention ``H_err = (delta / 2) * P`` for the coupling Pauli ``P``.
* Two-qubit labels read left to right, e.g. ``"ix"`` is identity on the left
  qubit (index 0) and X on the right qubit (index 1).  For the entangling
  presets the left qubit is the control.
"""

import numpy as np

from .errors import ValidationError
from .pauli import PauliString, to_matrix
from .superop import left_right

GATES = ("identity", "cz", "cx")

MIRROR_LAYOUTS = ("cz_cz", "cx_cx", "cx_xc")

SPECTATOR_LAYOUTS = ("control_spectator", "target_spectator")


def _check_gate(gate):
    if gate not in GATES:
        raise ValidationError(f"unknown gate {gate!r}; expected one of {GATES}")


def ad_lambdas(gate, theta, beta_down_l, beta_down_r, omega_g=1.0):
    """Leading-order PL coefficients for amplitude damping during a gate.

    ``beta_down_l`` / ``beta_down_r`` are the damping rates on the left
    (control) and right (target) qubits.  Returns a label -> lambda dict.
    """
    _check_gate(gate)
    th = float(theta)
    bl = beta_down_l / omega_g
    br = beta_down_r / omega_g
    s2 = np.sin(2 * th)
    s4 = np.sin(4 * th)
    if gate == "identity":
        return {
            "ix": br * th / 4,
            "iy": br * th / 4,
            "xi": bl * th / 4,
            "yi": bl * th / 4,
        }
    if gate == "cz":
        plus = (2 * th + s2) / 16
        minus = (2 * th - s2) / 16
        return {
            "ix": plus * br,
            "iy": plus * br,
            "xi": plus * bl,
            "yi": plus * bl,
            "xz": minus * bl,
            "yz": minus * bl,
            "zx": minus * br,
            "zy": minus * br,
        }
    plus = (2 * th + s2) / 16
    minus = (2 * th - s2) / 16
    return {
        "ix": (th / 4) * br,
        "iy": (12 * th + 8 * s2 + s4) / 128 * br,
        "iz": (4 * th - s4) / 128 * br,
        "xi": plus * bl,
        "yi": plus * bl,
        "xx": minus * bl,
        "yx": minus * bl,
        "zy": (12 * th - 8 * s2 + s4) / 128 * br,
        "zz": (4 * th - s4) / 128 * br,
    }


def pd_lambdas(gate, theta, beta_phi_l, beta_phi_r, omega_g=1.0):
    """Leading-order PL coefficients for pure dephasing during a gate."""
    _check_gate(gate)
    th = float(theta)
    pl = beta_phi_l / omega_g
    pr = beta_phi_r / omega_g
    s2 = np.sin(2 * th)
    s4 = np.sin(4 * th)
    if gate == "identity" or gate == "cz":
        return {
            "iz": (th / 2) * pr,
            "zi": (th / 2) * pl,
        }
    return {
        "iy": (4 * th - s4) / 64 * pr,
        "iz": (12 * th + 8 * s2 + s4) / 64 * pr,
        "zi": (th / 2) * pl,
        "zy": (4 * th - s4) / 64 * pr,
        "zz": (12 * th - 8 * s2 + s4) / 64 * pr,
    }


def phase_lambdas(gate, theta, delta_iz, delta_zi, delta_zz, omega_g=1.0):
    """Second-order PL coefficients for static ZZ-type phase errors.

    The coherent error Hamiltonian is
    ``(delta_iz/2) IZ + (delta_zi/2) ZI + (delta_zz/2) ZZ``.
    """
    _check_gate(gate)
    th = float(theta)
    diz = delta_iz / omega_g
    dzi = delta_zi / omega_g
    dzz = delta_zz / omega_g
    if gate == "identity" or gate == "cz":
        return {
            "iz": (th**2 / 4) * diz**2,
            "zi": (th**2 / 4) * dzi**2,
            "zz": (th**2 / 4) * dzz**2,
        }
    s2 = np.sin(2 * th)
    s4th = np.sin(th) ** 4
    plus = 2 * th * (diz + dzz) + s2 * (diz - dzz)
    minus = 2 * th * (diz + dzz) - s2 * (diz - dzz)
    return {
        "iy": (s4th / 16) * (diz - dzz) ** 2,
        "iz": plus**2 / 64,
        "zi": (th**2 / 4) * dzi**2,
        "zy": (s4th / 16) * (diz - dzz) ** 2,
        "zz": minus**2 / 64,
    }


def spectator_lambdas(layout, gate, theta, delta, omega_g=1.0):
    """Second-order PL coefficients for a ZZ coupling to an idle third qubit.

    ``layout`` selects where the spectator sits relative to the two-qubit gate:

    * ``"control_spectator"``: gate on qubits (1, 2), spectator qubit 0,
      coupling Pauli ZZI (spectator-to-control).
    * ``"target_spectator"``: gate on qubits (0, 1), spectator qubit 2,
      coupling Pauli IZZ (target-to-spectator).

    ``gate`` is the two-qubit gate applied to the active pair.
    """
    if layout not in SPECTATOR_LAYOUTS:
        raise ValidationError(
            f"unknown layout {layout!r}; expected one of {SPECTATOR_LAYOUTS}"
        )
    _check_gate(gate)
    th = float(theta)
    d = delta / omega_g
    if layout == "control_spectator":
        # A Z error on the control commutes with both entangling presets, so
        # all three gate columns coincide with idle evolution.
        return {"zzi": (th**2 / 4) * d**2}
    if gate == "identity" or gate == "cz":
        return {"izz": (th**2 / 4) * d**2}
    s2 = np.sin(2 * th)
    s4th = np.sin(th) ** 4
    return {
        "iyz": (s4th / 16) * d**2,
        "izz": (2 * th + s2) ** 2 / 64 * d**2,
        "zyz": (s4th / 16) * d**2,
        "zzz": (2 * th - s2) ** 2 / 64 * d**2,
    }


def mirror_lambdas(layout, theta, delta, omega_g=1.0):
    """Second-order PL coefficients for a ZZ coupling between two gate pairs.

    Four qubits host two simultaneous two-qubit gates: gate A on (0, 1) and
    gate B on (2, 3).  The coupling Pauli is IZZI, linking qubit 1 to qubit 2.
    ``layout`` fixes the gate pair and orientation:

    * ``"cz_cz"``: CZ on both pairs.
    * ``"cx_cx"``: CX on both pairs, controls on qubits 0 and 2; the coupling
      touches A's target and B's control.
    * ``"cx_xc"``: CX on both pairs with B mirrored (control on qubit 3), so
      the coupling touches both targets.
    """
    if layout not in MIRROR_LAYOUTS:
        raise ValidationError(
            f"unknown layout {layout!r}; expected one of {MIRROR_LAYOUTS}"
        )
    th = float(theta)
    d2 = (delta / omega_g) ** 2
    if layout == "cz_cz":
        return {"izzi": (th**2 / 4) * d2}
    s2 = np.sin(2 * th)
    s4 = np.sin(4 * th)
    st4 = np.sin(th) ** 4
    if layout == "cx_cx":
        return {
            "iyzi": (st4 / 16) * d2,
            "izzi": (2 * th + s2) ** 2 / 64 * d2,
            "zyzi": (st4 / 16) * d2,
            "zzzi": (2 * th - s2) ** 2 / 64 * d2,
        }
    sharp = (4 * th - s4) ** 2 / 4096
    broad = st4 * (3 + np.cos(2 * th)) ** 2 / 256
    oct8 = np.sin(th) ** 8 / 64
    return {
        "iyyi": sharp * d2,
        "iyyz": sharp * d2,
        "iyzi": broad * d2,
        "iyzz": oct8 * d2,
        "izyi": broad * d2,
        "izyz": broad * d2,
        "izzi": (12 * th + 8 * s2 + s4) ** 2 / 4096 * d2,
        "izzz": sharp * d2,
        "zyyi": sharp * d2,
        "zyyz": sharp * d2,
        "zyzi": broad * d2,
        "zyzz": oct8 * d2,
        "zzyi": oct8 * d2,
        "zzyz": oct8 * d2,
        "zzzi": sharp * d2,
        "zzzz": (12 * th - 8 * s2 + s4) ** 2 / 4096 * d2,
    }


def identity_weights(beta_down, beta_phi, tau_g):
    """Exact Pauli-channel weights of the twirled idle channel.

    Single qubit idling for ``tau_g`` under amplitude damping ``beta_down``
    and pure dephasing ``beta_phi``.  Exact to all orders because the twirled
    idle channel is already Pauli diagonal.
    """
    down = np.exp(-beta_down * tau_g)
    cross = np.exp(-(beta_down / 2 + beta_phi) * tau_g)
    return {
        "i": (1 + down + 2 * cross) / 4,
        "x": (1 - down) / 4,
        "y": (1 - down) / 4,
        "z": (1 + down - 2 * cross) / 4,
    }


def identity_lambdas(beta_down, beta_phi, tau_g):
    """Exact PL coefficients of the twirled idle channel (see identity_weights)."""
    return {
        "x": beta_down * tau_g / 4,
        "y": beta_down * tau_g / 4,
        "z": beta_phi * tau_g / 2,
    }


def identity_channel(beta_down, beta_phi, tau_g):
    """Exact twirled idle channel as a 4 x 4 superoperator."""
    weights = identity_weights(beta_down, beta_phi, tau_g)
    chan = np.zeros((4, 4), dtype=complex)
    for label, w in weights.items():
        p = to_matrix(PauliString.from_label(label))
        chan += w * left_right(p, p)
    return chan


def xtheta_channel(theta, beta_down, beta_phi, omega_x=1.0):
    """First-order twirled noise channel of an X rotation by ``theta``.

    Amplitude damping and pure dephasing act during the rotation.  The matrix
    is returned in the row-major vectorized computational basis (00, 01, 10,
    11) and is accurate to first order in ``rate / omega_x``.
    """
    th = float(theta)
    s2 = np.sin(2 * th)
    num = s2 * (2 * beta_phi - beta_down) - 2 * th * (3 * beta_down + 2 * beta_phi)
    w1 = 1 + num / (16 * omega_x)
    w2 = -num / (16 * omega_x)
    w3 = 1 + (s2 * (beta_down - 2 * beta_phi) - 2 * th * (5 * beta_down + 6 * beta_phi)) / (
        16 * omega_x
    )
    w4 = (2 * beta_phi - beta_down) * (s2 - 2 * th) / (16 * omega_x)
    return np.array(
        [
            [w1, 0.0, 0.0, w2],
            [0.0, w3, w4, 0.0],
            [0.0, w4, w3, 0.0],
            [w2, 0.0, 0.0, w1],
        ]
    )


def xtheta_lambdas(theta, beta_down, beta_phi, omega_x=1.0):
    """Leading-order PL coefficients of an X rotation with damping/dephasing."""
    th = float(theta)
    s2 = np.sin(2 * th)
    bd = beta_down / omega_x
    bp = beta_phi / omega_x
    return {
        "x": (th / 4) * bd,
        "y": (2 * th + s2) / 16 * bd + (2 * th - s2) / 8 * bp,
        "z": (2 * th - s2) / 16 * bd + (2 * th + s2) / 8 * bp,
    }


def aggregate(*maps):
    """Sum several label -> coefficient maps into one (plain-float values)."""
    total = {}
    for m in maps:
        for label, value in m.items():
            total[label] = total.get(label, 0.0) + float(value)
    return total
