"""Ground-truth simulation of invasive sequential projective measurements.

Outcome chains follow the projection postulate: the post-measurement state is
P rho P / tr(P rho P). For dichotomic observables the +-1 projectors are
(I +- O)/2 exactly, which sidesteps eigenvector phase ambiguity in degenerate
eigenspaces. Branches below probability 1e-12 are pruned to avoid 0/0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .linalg import ATOL, PRUNE_EPS, anticommutator
from .states import QuantumState, density_of


@dataclass(frozen=True)
class LudersBranch:
    outcome: int
    probability: float
    state: QuantumState


@dataclass(frozen=True)
class OutcomeDistribution:
    """Joint distribution of a measurement sequence over +-1 outcome tuples."""

    observables: tuple
    table: dict

    def __post_init__(self):
        n = len(self.observables)
        if set(self.table) != set(itertools.product((1, -1), repeat=n)):
            raise ValueError(f"table must cover exactly the 2^{n} outcome tuples")
        total = 0.0
        for p in self.table.values():
            if p < -PRUNE_EPS:
                raise ValueError("negative probability in outcome table")
            total += p
        if abs(total - 1.0) > ATOL:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def marginal(self, prefix_len: int) -> "OutcomeDistribution":
        """Distribution of the first ``prefix_len`` outcomes."""
        table = {
            t: 0.0 for t in itertools.product((1, -1), repeat=prefix_len)
        }
        for outcome, p in self.table.items():
            table[outcome[:prefix_len]] += p
        return OutcomeDistribution(observables=self.observables[:prefix_len], table=table)


def _projectors(obs) -> tuple[np.ndarray, np.ndarray]:
    m = obs.matrix if hasattr(obs, "matrix") else np.asarray(obs)
    eye = np.eye(m.shape[0], dtype=complex)
    return (eye + m) / 2, (eye - m) / 2


def luders_measure(state: QuantumState, obs) -> list[LudersBranch]:
    """Measure one dichotomic observable; returns the surviving outcome branches."""
    p_plus, p_minus = _projectors(obs)
    rho = density_of(state)
    if rho.shape != p_plus.shape:
        raise ValueError("observable dimension does not match the state")
    branches = []
    for outcome, proj in ((1, p_plus), (-1, p_minus)):
        prob = float(np.trace(proj @ rho).real)
        if prob <= PRUNE_EPS:
            continue
        post = proj @ rho @ proj / prob
        post = (post + post.conj().T) / 2
        branches.append(
            LudersBranch(
                outcome=outcome,
                probability=prob,
                state=QuantumState(qubits=state.qubits, rho=post / np.trace(post).real),
            )
        )
    return branches


def joint_distribution(state: QuantumState, obs_seq) -> OutcomeDistribution:
    """Chain rule over measurement branches, in sequence order."""
    obs_seq = tuple(obs_seq)
    n = len(obs_seq)
    table = {t: 0.0 for t in itertools.product((1, -1), repeat=n)}
    live = [((), state, 1.0)]
    for obs in obs_seq:
        grown = []
        for outcomes, st, weight in live:
            for br in luders_measure(st, obs):
                grown.append((outcomes + (br.outcome,), br.state, weight * br.probability))
        live = grown
    for outcomes, _, weight in live:
        table[outcomes] = weight
    return OutcomeDistribution(observables=obs_seq, table=table)


def correlator_sequential(state: QuantumState, obs_seq) -> float:
    """Sum over outcome tuples of the outcome product times its probability."""
    dist = joint_distribution(state, obs_seq)
    total = 0.0
    for outcomes, p in dist.table.items():
        prod = 1
        for x in outcomes:
            prod *= x
        total += prod * p
    return total


def two_time_formula(state: QuantumState, x_i, x_j) -> float:
    """Two-point correlator 0.5 * Re tr(rho {X_i, X_j})."""
    mi = x_i.matrix if hasattr(x_i, "matrix") else np.asarray(x_i)
    mj = x_j.matrix if hasattr(x_j, "matrix") else np.asarray(x_j)
    return float(0.5 * np.trace(density_of(state) @ anticommutator(mi, mj)).real)
