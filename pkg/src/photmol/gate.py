"""Two-qubit gates built from the pair phase.

Dual-rail qubits, basis order |n_a n_b> = |00>, |01>, |10>, |11>.
"""
from __future__ import annotations

import math

import numpy as np

BASIS_LABELS = ("|00>", "|01>", "|10>", "|11>")
UNITARY_TOL = 1e-12


def _as_gate(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
        raise ValueError(f"gate must be a 2x2 or 4x4 matrix, got shape {m.shape}")
    return m


def cz_from_phase(theta):
    """diag(1, 1, 1, e^{-i theta}); exactly diag(1, 1, 1, -1) at theta = pi."""
    last = -1.0 + 0j if theta == math.pi else complex(np.exp(-1j * theta))
    return np.diag([1.0, 1.0, 1.0, last]).astype(complex)


def hadamard():
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def identity(dim=2):
    return np.eye(dim, dtype=complex)


def cnot():
    """Control on the first qubit, target on the second."""
    return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def tensor(a, b):
    a, b = _as_gate(a), _as_gate(b)
    if a.shape[0] * b.shape[0] > 4:
        raise ValueError("tensor product would exceed two qubits")
    return np.kron(a, b)


def compose(gates):
    """Product for gates applied in sequence: compose([g1, g2]) = g2 @ g1."""
    gates = [_as_gate(g) for g in gates]
    if not gates:
        raise ValueError("compose needs at least one gate")
    out = gates[0]
    for g in gates[1:]:
        if g.shape != out.shape:
            raise ValueError(f"dimension mismatch: {g.shape} after {out.shape}")
        out = g @ out
    return out


def apply(state, gate):
    gate = _as_gate(gate)
    state = np.asarray(state, dtype=complex)
    if state.shape != (gate.shape[0],):
        raise ValueError(f"state of shape {state.shape} does not fit a {gate.shape[0]}-dim gate")
    return gate @ state


def is_unitary(gate, tol=UNITARY_TOL):
    gate = _as_gate(gate)
    return bool(np.max(np.abs(gate @ gate.conj().T - np.eye(gate.shape[0]))) < tol)


def truth_table(gate):
    """Image of each basis state as (input label, output amplitudes)."""
    gate = _as_gate(gate)
    if gate.shape[0] != 4:
        raise ValueError("truth table needs a two-qubit gate")
    return [(label, gate[:, i].copy()) for i, label in enumerate(BASIS_LABELS)]


def describe_output(amplitudes, tol=1e-12):
    """Render amplitudes as e.g. '-|11>' when they sit on one basis state."""
    nonzero = np.flatnonzero(np.abs(amplitudes) > tol)
    if nonzero.size != 1:
        return " + ".join(f"({a.real:+.6g}{a.imag:+.6g}j){BASIS_LABELS[i]}" for i, a in enumerate(amplitudes)
                          if abs(a) > tol) or "0"
    i = nonzero[0]
    a = amplitudes[i]
    if abs(a - 1) <= tol:
        return BASIS_LABELS[i]
    if abs(a + 1) <= tol:
        return "-" + BASIS_LABELS[i]
    return f"({a.real:+.6g}{a.imag:+.6g}j){BASIS_LABELS[i]}"


def gate_to_json(gate):
    """Nested lists of [re, im] pairs."""
    gate = _as_gate(gate)
    return [[[float(z.real), float(z.imag)] for z in row] for row in gate]
