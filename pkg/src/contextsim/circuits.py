"""Gate set and circuit application, including the controlled blocks used by
the probe-readout construction and the Bell-pair preparation circuit.

Gates compose left to right; a mixed state transforms as U rho U^dag. The
full-register matrix of any op respects the qubit-0-leftmost convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import ATOL, as_matrix
from .states import QuantumState, density_of

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
HADAMARD.setflags(write=False)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]], dtype=complex)


def is_unitary(u: np.ndarray, atol: float = ATOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= atol)


@dataclass(frozen=True)
class GateOp:
    """One gate: a unitary on ``targets``, optionally conditioned on a control.

    ``control_on`` selects the polarity: 1 applies the unitary when the
    control is |1>, 0 when it is |0>. Labels are cosmetic only.
    """

    label: str
    matrix: np.ndarray
    targets: tuple[int, ...]
    control: int | None = None
    control_on: int = 1

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != 2 ** len(self.targets):
            raise ValueError(f"matrix of shape {m.shape} does not fit {len(self.targets)} targets")
        if not is_unitary(m):
            raise ValueError(f"gate {self.label!r} is not unitary within tolerance")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("duplicate target qubits")
        if self.control is not None and self.control in self.targets:
            raise ValueError("control qubit cannot be a target")
        if self.control_on not in (0, 1):
            raise ValueError("control polarity must be 0 or 1")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))


@dataclass(frozen=True)
class Circuit:
    qubits: int
    ops: tuple[GateOp, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            used = op.targets + (() if op.control is None else (op.control,))
            if any(q < 0 or q >= self.qubits for q in used):
                raise ValueError(f"gate {op.label!r} addresses qubits outside 0..{self.qubits - 1}")


def hadamard(target: int) -> GateOp:
    return GateOp("H", HADAMARD, (target,))


def pauli_x(target: int) -> GateOp:
    from .linalg import PAULI_X

    return GateOp("X", PAULI_X, (target,))


def pauli_y(target: int) -> GateOp:
    from .linalg import PAULI_Y

    return GateOp("Y", PAULI_Y, (target,))


def pauli_z(target: int) -> GateOp:
    from .linalg import PAULI_Z

    return GateOp("Z", PAULI_Z, (target,))


def rx(target: int, theta: float) -> GateOp:
    return GateOp(f"RX({theta:.6g})", rx_matrix(theta), (target,))


def ry(target: int, theta: float) -> GateOp:
    return GateOp(f"RY({theta:.6g})", ry_matrix(theta), (target,))


def rz(target: int, theta: float) -> GateOp:
    return GateOp(f"RZ({theta:.6g})", rz_matrix(theta), (target,))


def cnot(control: int, target: int) -> GateOp:
    from .linalg import PAULI_X

    return GateOp("CNOT", PAULI_X, (target,), control=control)


def controlled(control: int, u: np.ndarray, targets, label: str = "ctrl-U", on: int = 1) -> GateOp:
    return GateOp(label, u, tuple(targets), control=control, control_on=on)


def global_gate(u: np.ndarray, qubits: int, label: str = "U") -> GateOp:
    return GateOp(label, u, tuple(range(qubits)))


def embed(u: np.ndarray, targets, n: int) -> np.ndarray:
    """Lift a unitary or observable on ``targets`` to the full n-qubit register.

    ``targets`` is an ordered qubit list; the operator acts as ``u`` there and
    as identity elsewhere. Qubit 0 is the most significant bit.
    """
    u = as_matrix(u)
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValueError("duplicate target qubits")
    if any(t < 0 or t >= n for t in targets):
        raise ValueError(f"targets {targets} out of range for {n} qubits")
    k = len(targets)
    if u.shape != (2 ** k, 2 ** k):
        raise ValueError(f"operator of shape {u.shape} does not fit {k} targets")
    rest = [q for q in range(n) if q not in targets]
    big = np.kron(u, np.eye(2 ** len(rest), dtype=complex))
    # big uses qubit order targets + rest; gather it back into register order
    order = list(targets) + rest
    dim = 2 ** n
    perm = np.empty(dim, dtype=int)
    for x in range(dim):
        y = 0
        for pos, q in enumerate(order):
            bit = (x >> (n - 1 - q)) & 1
            y |= bit << (n - 1 - pos)
        perm[x] = y
    return big[np.ix_(perm, perm)]


def full_gate_matrix(op: GateOp, n: int) -> np.ndarray:
    """The 2^n x 2^n unitary implemented by one gate op."""
    base = embed(op.matrix, op.targets, n)
    if op.control is None:
        return base
    p_active = np.array([[1, 0], [0, 0]], dtype=complex) if op.control_on == 0 else np.array(
        [[0, 0], [0, 1]], dtype=complex
    )
    p_idle = np.eye(2, dtype=complex) - p_active
    active = embed(p_active, [op.control], n)
    idle = embed(p_idle, [op.control], n)
    return idle + active @ base


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Compose all ops into one full-register unitary (left-to-right order)."""
    u = np.eye(2 ** circuit.qubits, dtype=complex)
    for op in circuit.ops:
        u = full_gate_matrix(op, circuit.qubits) @ u
    return u


def apply(circuit: Circuit, state: QuantumState) -> QuantumState:
    """Run a circuit on a state; pure stays pure, mixed maps as U rho U^dag."""
    if circuit.qubits != state.qubits:
        raise ValueError(
            f"circuit on {circuit.qubits} qubits cannot act on a {state.qubits}-qubit state"
        )
    if state.is_pure:
        psi = np.asarray(state.amplitudes)
        for op in circuit.ops:
            psi = full_gate_matrix(op, circuit.qubits) @ psi
        psi = psi / np.linalg.norm(psi)
        return QuantumState(qubits=state.qubits, amplitudes=psi)
    rho = density_of(state)
    for op in circuit.ops:
        f = full_gate_matrix(op, circuit.qubits)
        rho = f @ rho @ f.conj().T
    rho = (rho + rho.conj().T) / 2
    return QuantumState(qubits=state.qubits, rho=rho / np.trace(rho).real)


def bell_prep_circuit() -> Circuit:
    """Three-qubit preparation: Hadamard then CNOT on the system pair.

    Acting on |000> it leaves the probe in |0> and puts the system qubits in
    (|00> + |11>)/sqrt(2).
    """
    return Circuit(3, (hadamard(1), cnot(1, 2)))
