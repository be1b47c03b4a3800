import json

import numpy as np
import pytest

from contextsim.circuits import apply, circuit_unitary, ry_matrix
from contextsim.linalg import PAULI_I, PAULI_X, PAULI_Z
from contextsim.scattering import (
    TemporalCorrelationSpec,
    TimeSlot,
    build_scattering_circuit,
    correlator_direct,
    correlator_scattering,
    hamiltonian_evolution,
    heisenberg_observable,
    parse_angle,
    parse_spec_document,
    probe_sigma_y,
    probe_sigma_z,
    random_correlation_spec,
    random_dichotomic,
    sigma_theta_evolution,
    slot,
)
from contextsim.states import (
    basis_state,
    bell_phi_plus,
    density_of,
    haar_random_state,
    haar_random_unitary,
    mixed_state,
    partial_trace,
    pure_state,
    random_pure_state,
)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def pm_slot(left, right):
    return slot((left, right))


def applied_block_product(spec):
    """Oracle: the controlled product as the circuit applies it (later slots
    multiply on the left)."""
    u = np.eye(2 ** spec.system_qubits, dtype=complex)
    for ts in spec.slots:
        u = heisenberg_observable(ts) @ u
    return u


class TestHeisenbergObservable:
    def test_identity_evolution(self):
        ts = pm_slot(PAULI_Z, PAULI_I)
        assert np.allclose(heisenberg_observable(ts), np.kron(PAULI_Z, PAULI_I))

    def test_rotation_turns_z_into_x(self):
        ts = slot((PAULI_Z,), sigma_theta_evolution(np.pi / 2))
        assert np.allclose(heisenberg_observable(ts), PAULI_X, atol=1e-12)

    def test_sigma_theta_evolution_general_angle(self):
        for theta in np.linspace(-np.pi, np.pi, 9):
            ts = slot((PAULI_Z,), sigma_theta_evolution(theta))
            expected = np.cos(theta) * PAULI_Z + np.sin(theta) * PAULI_X
            assert np.allclose(heisenberg_observable(ts), expected, atol=1e-12)

    def test_conjugation_preserves_dichotomic_spectrum(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            ts = TimeSlot(
                observables=(random_dichotomic(rng), random_dichotomic(rng)),
                evolution=haar_random_unitary(4, rng),
            )
            w = np.linalg.eigvalsh(heisenberg_observable(ts))
            assert np.allclose(np.abs(w), 1.0, atol=1e-10)

    def test_hamiltonian_evolution_helper(self):
        # exp(-i*angle*sigma_y) equals the half-angle rotation at twice the angle
        assert np.allclose(hamiltonian_evolution("y", 0.3), ry_matrix(0.6), atol=1e-12)


class TestCircuitShape:
    def test_zero_slots_reads_one(self):
        spec = TemporalCorrelationSpec(system_qubits=1, slots=())
        assert correlator_scattering(basis_state(1, "0"), spec) == pytest.approx(1.0, abs=1e-12)
        assert correlator_direct(basis_state(1, "0"), spec) == pytest.approx(1.0, abs=1e-12)

    def test_circuit_matches_hadamard_sandwich_oracle(self):
        rng = np.random.default_rng(1)
        spec = random_correlation_spec(1, 3, rng)
        got = circuit_unitary(build_scattering_circuit(spec))
        u = applied_block_product(spec)
        h_full = np.kron(HADAMARD, np.eye(2))
        blocks = np.block([[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), u]])
        assert np.allclose(got, h_full @ blocks @ h_full, atol=1e-10)

    def test_emits_probe_plus_system(self):
        spec = random_correlation_spec(2, 2, np.random.default_rng(2))
        circuit = build_scattering_circuit(spec)
        assert circuit.qubits == 3
        assert len(circuit.ops) == 4  # H, two controlled blocks, H


class TestProbeReadout:
    def test_probe_zero(self):
        st = pure_state(np.kron([1, 0], random_pure_state(1, 3).amplitudes))
        assert probe_sigma_z(st) == pytest.approx(1.0, abs=1e-12)

    def test_probe_one(self):
        st = pure_state(np.kron([0, 1], random_pure_state(1, 4).amplitudes))
        assert probe_sigma_z(st) == pytest.approx(-1.0, abs=1e-12)

    def test_probe_sigma_y_zero_before_circuit(self):
        st = pure_state(np.kron([1, 0], random_pure_state(1, 5).amplitudes))
        assert probe_sigma_y(st) == pytest.approx(0.0, abs=1e-12)

    def test_sigma_y_vanishes_for_commuting_slots(self):
        # commuting dichotomic product is Hermitian, so tr(rho U) is real
        spec = TemporalCorrelationSpec(
            system_qubits=2,
            slots=(pm_slot(PAULI_Z, PAULI_I), pm_slot(PAULI_Z, PAULI_X), pm_slot(PAULI_I, PAULI_X)),
        )
        st = random_pure_state(2, 6)
        out = apply(build_scattering_circuit(spec), _with_probe(st))
        assert probe_sigma_y(out) == pytest.approx(0.0, abs=1e-10)

    def test_sigma_y_matches_direct_trace_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            spec = random_correlation_spec(2, 3, rng)
            st = haar_random_state(2, rng)
            out = apply(build_scattering_circuit(spec), _with_probe(st))
            u = applied_block_product(spec)
            oracle = -np.trace(density_of(st) @ u).imag
            assert probe_sigma_y(out) == pytest.approx(oracle, abs=1e-10)


def _with_probe(state):
    return pure_state(np.kron([1, 0], state.amplitudes))


class TestCorrelators:
    def test_gamma_c_big_c_reads_minus_one(self):
        spec = TemporalCorrelationSpec(
            system_qubits=2,
            slots=(
                pm_slot(PAULI_Y, PAULI_Y),
                pm_slot(PAULI_X, PAULI_X),
                pm_slot(PAULI_Z, PAULI_Z),
            ),
        )
        for seed in range(5):
            st = random_pure_state(2, seed)
            assert correlator_scattering(st, spec) == pytest.approx(-1.0, abs=1e-10)

    def test_row_reads_plus_one(self):
        spec = TemporalCorrelationSpec(
            system_qubits=2,
            slots=(
                pm_slot(PAULI_Z, PAULI_I),
                pm_slot(PAULI_I, PAULI_Z),
                pm_slot(PAULI_Z, PAULI_Z),
            ),
        )
        for seed in range(5):
            st = random_pure_state(2, seed + 10)
            assert correlator_scattering(st, spec) == pytest.approx(1.0, abs=1e-10)

    def test_column_on_00_reads_plus_one(self):
        spec = TemporalCorrelationSpec(
            system_qubits=2,
            slots=(
                pm_slot(PAULI_Z, PAULI_I),
                pm_slot(PAULI_Z, PAULI_X),
                pm_slot(PAULI_I, PAULI_X),
            ),
        )
        assert correlator_direct(basis_state(2, "00"), spec) == pytest.approx(1.0, abs=1e-12)
        assert correlator_scattering(basis_state(2, "00"), spec) == pytest.approx(1.0, abs=1e-12)

    def test_single_z_on_plus_state(self):
        spec = TemporalCorrelationSpec(system_qubits=1, slots=(slot((PAULI_Z,)),))
        plus = pure_state(np.ones(2) / np.sqrt(2))
        assert correlator_scattering(plus, spec) == pytest.approx(0.0, abs=1e-12)

    def test_scattering_equals_direct_on_random_specs(self):
        for seed in range(50):
            rng = np.random.default_rng(3000 + seed)
            n = int(rng.integers(1, 3))
            spec = random_correlation_spec(n, int(rng.integers(1, 4)), rng)
            st = haar_random_state(n, rng)
            assert abs(correlator_scattering(st, spec) - correlator_direct(st, spec)) < 1e-10

    def test_mixed_input_state(self):
        spec = random_correlation_spec(2, 2, np.random.default_rng(8))
        st = mixed_state(np.eye(4) / 4)
        assert abs(correlator_scattering(st, spec) - correlator_direct(st, spec)) < 1e-10

    def test_magnitude_bounded_by_one(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            spec = random_correlation_spec(1, 3, rng)
            st = haar_random_state(1, rng)
            assert abs(correlator_scattering(st, spec)) <= 1 + 1e-10

    def test_probe_marginal_normalized(self):
        spec = random_correlation_spec(2, 2, np.random.default_rng(10))
        out = apply(build_scattering_circuit(spec), _with_probe(random_pure_state(2, 11)))
        probe = partial_trace(out, {0})
        assert np.trace(density_of(probe)).real == pytest.approx(1.0, abs=1e-10)

    def test_state_spec_mismatch(self):
        spec = random_correlation_spec(2, 1, np.random.default_rng(12))
        with pytest.raises(ValueError):
            correlator_scattering(basis_state(1, "0"), spec)


class TestSingleRunSufficiency:
    def test_anticontrolled_run_reads_the_same(self):
        # one run with plain controls equals one run with anti-controls;
        # no two-run combination is needed for the readout
        from contextsim.circuits import Circuit, GateOp, hadamard

        rng = np.random.default_rng(13)
        spec = random_correlation_spec(2, 2, rng)
        st = haar_random_state(2, rng)
        normal = build_scattering_circuit(spec)
        flipped_ops = []
        for op in normal.ops:
            if op.control is None:
                flipped_ops.append(op)
            else:
                flipped_ops.append(GateOp(op.label, op.matrix, op.targets, op.control, 0))
        flipped = Circuit(normal.qubits, tuple(flipped_ops))
        a = probe_sigma_z(apply(normal, _with_probe(st)))
        b = probe_sigma_z(apply(flipped, _with_probe(st)))
        assert a == pytest.approx(b, abs=1e-10)
        assert a == pytest.approx(correlator_direct(st, spec), abs=1e-10)


class TestSlotValidation:
    def test_non_dichotomic_rejected(self):
        with pytest.raises(ValueError):
            slot((0.5 * PAULI_Z,))

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            slot((np.array([[0, 1], [0, 0]], dtype=complex),))

    def test_wrong_evolution_size_rejected(self):
        with pytest.raises(ValueError):
            TimeSlot(observables=(PAULI_Z,), evolution=np.eye(4, dtype=complex))

    def test_slot_count_must_match_system(self):
        with pytest.raises(ValueError):
            TemporalCorrelationSpec(system_qubits=2, slots=(slot((PAULI_Z,)),))


class TestSpecDocuments:
    def test_square_tokens(self):
        doc = {
            "system_qubits": 2,
            "slots": [
                {"observables": ["pm:A"]},
                {"observables": ["pm:alpha"]},
                {"observables": ["pm:a"]},
            ],
        }
        spec = parse_spec_document(json.dumps(doc))
        assert correlator_direct(basis_state(2, "00"), spec) == pytest.approx(1.0, abs=1e-12)

    def test_sigma_theta_and_rotation_tokens(self):
        theta = float(np.arccos(-0.75))
        doc = {
            "system_qubits": 1,
            "slots": [
                {"observables": ["Z"]},
                {"observables": [f"sigma_theta({theta})"]},
            ],
        }
        spec = parse_spec_document(json.dumps(doc))
        assert correlator_direct(basis_state(1, "0"), spec) == pytest.approx(-0.75, abs=1e-12)

    def test_evolution_entries(self):
        doc = {
            "system_qubits": 1,
            "slots": [
                {
                    "observables": ["Z"],
                    "evolution": [{"axis": "y", "qubit": 0, "angle": -np.pi / 2}],
                }
            ],
        }
        spec = parse_spec_document(json.dumps(doc))
        assert np.allclose(heisenberg_observable(spec.slots[0]), PAULI_X, atol=1e-12)

    def test_pentagram_tokens(self):
        doc = {
            "system_qubits": 2,
            "slots": [{"observables": ["pentagram:0", "pentagram:1"]}],
        }
        spec = parse_spec_document(json.dumps(doc))
        assert correlator_direct(bell_phi_plus(), spec) == pytest.approx(
            np.cos(4 * np.pi / 5), abs=1e-12
        )

    def test_unknown_token_rejected(self):
        doc = {"system_qubits": 1, "slots": [{"observables": ["Q"]}]}
        with pytest.raises(ValueError):
            parse_spec_document(json.dumps(doc))

    def test_parse_angle_forms(self):
        assert parse_angle("pi") == pytest.approx(np.pi)
        assert parse_angle("acos(-0.75)") == pytest.approx(float(np.arccos(-0.75)))
        assert parse_angle("0.25") == 0.25
        assert parse_angle(1.5) == 1.5
        with pytest.raises(ValueError):
            parse_angle("acos(2)")
