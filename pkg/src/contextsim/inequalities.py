"""Observable families and evaluators for the four inequalities.

Every evaluator can run through three routes: "scattering" (probe circuit),
"direct" (trace closed form), and "sequential" (invasive projective chains).
For term families built from mutually commuting factors all three agree.

The nine-entry square of two-qubit observables::

    A = Z x I    B = I x Z    C = Z x Z
    a = I x X    b = X x I    c = X x X
    alpha = Z x X    beta = X x Z    gamma = Y x Y

Rows and columns commute entrywise; every row product is +I and the
gamma*c*C column product is -I, which forces the six-context combination to
the value 6 on any input state while value assignments capped by the
classical bound stop at 4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ATOL, ATOL_DICHOTOMIC, PAULI_I, PAULI_X, PAULI_Y, PAULI_Z, as_matrix
from .circuits import ry_matrix
from .scattering import (
    TemporalCorrelationSpec,
    correlator_direct,
    correlator_scattering,
    sigma_theta_evolution,
    slot,
)
from .sequential import correlator_sequential
from .states import QuantumState

METHODS = ("scattering", "direct", "sequential")
VERDICT_EPS = 1e-9
CONSTRAINT_ATOL = 1e-6

PM_FACTOR_TOKENS = {
    "A": ("Z", "I"),
    "B": ("I", "Z"),
    "C": ("Z", "Z"),
    "a": ("I", "X"),
    "b": ("X", "I"),
    "c": ("X", "X"),
    "alpha": ("Z", "X"),
    "beta": ("X", "Z"),
    "gamma": ("Y", "Y"),
}

_PAULI = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

# Context sequences entering the six-term combination; the last one carries
# a minus sign.
PM_CONTEXTS = (
    ("A", "B", "C"),
    ("b", "c", "a"),
    ("gamma", "alpha", "beta"),
    ("A", "alpha", "a"),
    ("b", "B", "beta"),
    ("gamma", "c", "C"),
)
PM_SIGNS = (1.0, 1.0, 1.0, 1.0, 1.0, -1.0)


@dataclass(frozen=True)
class Observable:
    """A Hermitian operator with an optional dichotomic (O^2 = I) guarantee."""

    matrix: np.ndarray
    dichotomic: bool
    label: str

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise ValueError(f"observable {self.label!r} is not Hermitian")
        if self.dichotomic and np.max(np.abs(m @ m - np.eye(m.shape[0]))) > ATOL_DICHOTOMIC:
            raise ValueError(f"observable {self.label!r} does not square to the identity")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class InequalityReport:
    """Per-term correlators, their combination, and the violation verdict.

    ``terms`` holds raw correlator values; ``term_signs`` are the weights in
    the combination; ``term_predictions`` are the noiseless values (equal to
    the measured ones unless a noise model intervened); ``blocks_per_term``
    counts the controlled readout blocks each term needs, which drives the
    visibility noise model.
    """

    name: str
    method: str
    terms: tuple[tuple[str, float], ...]
    term_signs: tuple[float, ...]
    term_predictions: tuple[float, ...]
    blocks_per_term: tuple[int, ...]
    sum: float
    classical_bound: float
    bound_direction: str
    quantum_prediction: float | None
    violated: bool
    constraints: tuple[tuple[str, float], ...] | None = None
    constraints_satisfied: bool | None = None


def is_violated(total: float, bound: float, direction: str) -> bool:
    if direction == "<=":
        return total > bound + VERDICT_EPS
    if direction == ">=":
        return total < bound - VERDICT_EPS
    raise ValueError(f"unknown bound direction {direction!r}")


def _make_report(
    name, method, labels, values, signs, blocks, bound, direction, prediction,
    constraints=None,
):
    total = float(sum(s * v for s, v in zip(signs, values)))
    satisfied = None
    if constraints is not None:
        satisfied = all(abs(v - 1.0) <= CONSTRAINT_ATOL for _, v in constraints)
    return InequalityReport(
        name=name,
        method=method,
        terms=tuple(zip(labels, values)),
        term_signs=tuple(signs),
        term_predictions=tuple(values),
        blocks_per_term=tuple(blocks),
        sum=total,
        classical_bound=bound,
        bound_direction=direction,
        quantum_prediction=prediction,
        violated=is_violated(total, bound, direction),
        constraints=constraints,
        constraints_satisfied=satisfied,
    )


def sigma_theta(theta: float) -> Observable:
    """cos(theta) sigma_z + sin(theta) sigma_x; dichotomic for every angle."""
    m = np.cos(theta) * PAULI_Z + np.sin(theta) * PAULI_X
    return Observable(matrix=m, dichotomic=True, label=f"sigma_theta({theta:.6g})")


def pm_observable(label: str) -> Observable:
    if label not in PM_FACTOR_TOKENS:
        raise ValueError(f"unknown square entry {label!r}")
    left, right = PM_FACTOR_TOKENS[label]
    return Observable(matrix=np.kron(_PAULI[left], _PAULI[right]), dichotomic=True, label=label)


def pm_square() -> tuple[tuple[Observable, ...], ...]:
    """The nine two-qubit observables as a 3x3 grid (rows as listed above)."""
    return (
        tuple(pm_observable(k) for k in ("A", "B", "C")),
        tuple(pm_observable(k) for k in ("a", "b", "c")),
        tuple(pm_observable(k) for k in ("alpha", "beta", "gamma")),
    )


def pentagram_observable(j: int) -> Observable:
    """The j-th of five single-qubit directions stepping by 4*pi/5 in the x-z
    plane; j = 0 is sigma_z."""
    if not 0 <= j <= 4:
        raise ValueError(f"pentagram index {j} out of 0..4")
    u = ry_matrix(4 * np.pi * j / 5)
    return Observable(matrix=u.conj().T @ PAULI_Z @ u, dichotomic=True, label=f"sigma_{j}")


def _term_value(state: QuantumState, spec: TemporalCorrelationSpec, sequence, method: str) -> float:
    if method == "scattering":
        return correlator_scattering(state, spec)
    if method == "direct":
        return correlator_direct(state, spec)
    if method == "sequential":
        return correlator_sequential(state, sequence)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _pm_term(label_seq):
    slots = []
    for name in label_seq:
        left, right = PM_FACTOR_TOKENS[name]
        slots.append(slot((_PAULI[left], _PAULI[right])))
    spec = TemporalCorrelationSpec(system_qubits=2, slots=tuple(slots))
    return spec, tuple(pm_observable(name) for name in label_seq)


def eval_pm(state: QuantumState, method: str = "direct") -> InequalityReport:
    """Six sequential three-measurement contexts; classical bound 4, quantum
    value 6 independent of the input state."""
    if state.qubits != 2:
        raise ValueError("this evaluator needs a two-qubit state")
    labels, values = [], []
    for seq in PM_CONTEXTS:
        spec, sequence = _pm_term(seq)
        labels.append(".".join(seq))
        values.append(_term_value(state, spec, sequence, method))
    return _make_report(
        name="pm",
        method=method,
        labels=labels,
        values=values,
        signs=PM_SIGNS,
        blocks=[3] * 6,
        bound=4.0,
        direction="<=",
        prediction=6.0,
    )


def _kcbs_cycle(theta: float):
    """The five measurement descriptions (Z, theta, Z, theta, Z) as pairs of
    (slot, Observable)."""
    z_slot = slot((PAULI_Z,))
    th_slot = slot((PAULI_Z,), sigma_theta_evolution(theta))
    z_obs = Observable(matrix=PAULI_Z, dichotomic=True, label="Z")
    th_obs = sigma_theta(theta)
    cycle = []
    for k in range(5):
        cycle.append((z_slot, z_obs) if k % 2 == 0 else (th_slot, th_obs))
    return cycle


def _pair_term(state, cycle, i, j, method, n_qubits=1):
    spec = TemporalCorrelationSpec(
        system_qubits=n_qubits, slots=(cycle[i][0], cycle[j][0])
    )
    return _term_value(state, spec, (cycle[i][1], cycle[j][1]), method)


def eval_kcbs_temporal(state: QuantumState, theta: float, method: str = "direct") -> InequalityReport:
    """Five cyclic adjacent-pair correlators of the alternating Z/theta cycle;
    the combination equals 1 + 4 cos(theta) and its classical floor is -3."""
    if state.qubits != 1:
        raise ValueError("this evaluator needs a single-qubit state")
    cycle = _kcbs_cycle(theta)
    pairs = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0))
    labels = [f"X{i + 1}.X{j + 1}" for i, j in pairs]
    values = [_pair_term(state, cycle, i, j, method) for i, j in pairs]
    return _make_report(
        name="kcbs",
        method=method,
        labels=labels,
        values=values,
        signs=[1.0] * 5,
        blocks=[2] * 5,
        bound=-3.0,
        direction=">=",
        prediction=float(1 + 4 * np.cos(theta)),
    )


def eval_pentagon_lg(state: QuantumState, theta: float, method: str = "direct") -> InequalityReport:
    """All ten pair correlators of the five-measurement cycle; the two-point
    reading gives 4 + 6 cos(theta) against the classical floor -2."""
    if state.qubits != 1:
        raise ValueError("this evaluator needs a single-qubit state")
    cycle = _kcbs_cycle(theta)
    pairs = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    labels = [f"X{i + 1}.X{j + 1}" for i, j in pairs]
    values = [_pair_term(state, cycle, i, j, method) for i, j in pairs]
    return _make_report(
        name="pentagon",
        method=method,
        labels=labels,
        values=values,
        signs=[1.0] * 10,
        blocks=[2] * 10,
        bound=-2.0,
        direction=">=",
        prediction=float(4 + 6 * np.cos(theta)),
    )


def _bell_term(state, r, q, method):
    evo = np.kron(ry_matrix(4 * np.pi * r / 5), ry_matrix(4 * np.pi * q / 5))
    spec = TemporalCorrelationSpec(
        system_qubits=2, slots=(slot((PAULI_Z, PAULI_Z), evo),)
    )
    sig_r, sig_q = pentagram_observable(r).matrix, pentagram_observable(q).matrix
    sequence = (
        Observable(matrix=np.kron(sig_r, PAULI_I), dichotomic=True, label=f"A{r}"),
        Observable(matrix=np.kron(PAULI_I, sig_q), dichotomic=True, label=f"B{q}"),
    )
    return spec, sequence


def eval_transformed_bell(state: QuantumState, method: str = "direct") -> InequalityReport:
    """Five cross correlators <A_r B_{r+1}> of the pentagram family on two
    subsystems, with the side condition <A_j B_j> = 1 reported alongside.

    On the (|00>+|11>)/sqrt(2) state every term equals cos(4*pi/5) and the
    combination reaches -5 cos(pi/5), beating the classical floor -3.
    """
    if state.qubits != 2:
        raise ValueError("this evaluator needs a two-qubit state")
    labels, values = [], []
    for r in range(5):
        q = (r + 1) % 5
        spec, sequence = _bell_term(state, r, q, method)
        labels.append(f"A{r}.B{q}")
        values.append(_term_value(state, spec, sequence, method))
    constraints = []
    for j in range(5):
        spec, sequence = _bell_term(state, j, j, method)
        constraints.append((f"A{j}.B{j}", _term_value(state, spec, sequence, method)))
    return _make_report(
        name="bell",
        method=method,
        labels=labels,
        values=values,
        signs=[1.0] * 5,
        blocks=[1] * 5,
        bound=-3.0,
        direction=">=",
        prediction=float(5 * np.cos(4 * np.pi / 5)),
        constraints=tuple(constraints),
    )
