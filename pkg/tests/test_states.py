import numpy as np
import pytest

from contextsim.linalg import PAULI_X, PAULI_Z
from contextsim.states import (
    QuantumState,
    basis_state,
    bell_phi_plus,
    density_of,
    fidelity,
    fix_global_phase,
    haar_random_unitary,
    mixed_state,
    partial_trace,
    pseudopure,
    pure_state,
    random_pure_state,
    state_from_literal,
    states_equal,
)


def expectation(state, op):
    return float(np.trace(density_of(state) @ op).real)


class TestBasisStates:
    def test_two_qubit_zero(self):
        assert np.array_equal(basis_state(2, "00").amplitudes, [1, 0, 0, 0])

    def test_single_one(self):
        assert np.array_equal(basis_state(1, "1").amplitudes, [0, 1])

    def test_three_qubit_zero(self):
        a = basis_state(3, "000").amplitudes
        assert a[0] == 1 and np.count_nonzero(a) == 1

    def test_bad_label(self):
        with pytest.raises(ValueError):
            basis_state(2, "02")
        with pytest.raises(ValueError):
            basis_state(2, "0")


class TestBellState:
    def test_norm(self):
        a = bell_phi_plus().amplitudes
        assert abs(np.vdot(a, a).real - 1) < 1e-12

    def test_zz_expectation(self):
        # 4x4 expectation oracle, operators entered by hand
        zz = np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex)
        assert abs(expectation(bell_phi_plus(), zz) - 1.0) < 1e-12

    def test_zx_expectation(self):
        zx = np.kron(PAULI_Z, PAULI_X)
        assert abs(expectation(bell_phi_plus(), zx)) < 1e-12


class TestValidation:
    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            pure_state([1.0, 1.0])

    def test_bad_trace_rejected(self):
        with pytest.raises(ValueError):
            mixed_state(np.eye(2))

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            mixed_state(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(ValueError):
            mixed_state(np.diag([1.5, -0.5]))

    def test_density_idempotent_for_pure(self):
        rho = density_of(random_pure_state(2, 9))
        assert np.max(np.abs(rho @ rho - rho)) < 1e-9


class TestPseudopure:
    def test_epsilon_one_is_projector(self):
        psi = basis_state(2, "01")
        assert np.allclose(density_of(pseudopure(psi, 1.0)), density_of(psi))

    def test_epsilon_zero_is_maximally_mixed(self):
        psi = basis_state(2, "01")
        assert np.allclose(density_of(pseudopure(psi, 0.0)), np.eye(4) / 4)

    def test_unit_trace_and_hermiticity_exact(self):
        rho = density_of(pseudopure(bell_phi_plus(), 0.37))
        assert np.trace(rho).real == pytest.approx(1.0, abs=0)
        assert np.array_equal(rho, rho.conj().T)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            pseudopure(basis_state(1, "0"), 1.2)

    def test_requires_pure(self):
        with pytest.raises(ValueError):
            pseudopure(mixed_state(np.eye(2) / 2), 0.5)


class TestFidelity:
    def test_self_fidelity(self):
        rho = pseudopure(bell_phi_plus(), 0.8)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal(self):
        assert fidelity(basis_state(1, "0"), basis_state(1, "1")) == pytest.approx(0.0, abs=1e-12)

    def test_half_overlap(self):
        plus = pure_state(np.array([1, 1]) / np.sqrt(2))
        assert fidelity(basis_state(1, "0"), plus) == pytest.approx(0.5, abs=1e-12)

    def test_pure_case_matches_overlap_oracle(self):
        for seed in range(5):
            a, b = random_pure_state(2, seed), random_pure_state(2, 100 + seed)
            oracle = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
            assert fidelity(a, b) == pytest.approx(oracle, abs=1e-10)
            # promoting either side to a density matrix must not change it
            assert fidelity(mixed_state(density_of(a)), b) == pytest.approx(oracle, abs=1e-9)

    def test_symmetry(self):
        a = pseudopure(random_pure_state(2, 3), 0.6)
        b = pseudopure(random_pure_state(2, 4), 0.9)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(basis_state(1, "0"), basis_state(2, "00"))


class TestPartialTrace:
    def test_product_state(self):
        rho = partial_trace(basis_state(2, "00"), {0})
        assert np.allclose(density_of(rho), [[1, 0], [0, 0]])

    def test_bell_reduction_matches_summation_oracle(self):
        full = density_of(bell_phi_plus())
        oracle = np.zeros((2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    oracle[i, j] += full[2 * i + k, 2 * j + k]
        reduced = partial_trace(bell_phi_plus(), {0})
        assert np.allclose(density_of(reduced), oracle)
        assert np.allclose(oracle, np.eye(2) / 2)
        assert np.allclose(density_of(partial_trace(bell_phi_plus(), {1})), np.eye(2) / 2)

    def test_trace_all_returns_scalar_one(self):
        out = partial_trace(bell_phi_plus(), set())
        assert out.qubits == 0
        assert np.allclose(density_of(out), [[1.0]])

    def test_keep_everything(self):
        st = random_pure_state(2, 5)
        assert np.allclose(density_of(partial_trace(st, {0, 1})), density_of(st))

    def test_trace_preserved(self):
        st = pseudopure(random_pure_state(3, 6), 0.5)
        assert np.trace(density_of(partial_trace(st, {1, 2}))).real == pytest.approx(1.0, abs=1e-12)

    def test_bad_index(self):
        with pytest.raises(ValueError):
            partial_trace(basis_state(2, "00"), {3})


class TestRandomStates:
    def test_norm_and_determinism(self):
        for seed in (0, 7, 123):
            a = random_pure_state(2, seed)
            b = random_pure_state(2, seed)
            assert abs(np.vdot(a.amplitudes, a.amplitudes).real - 1) < 1e-12
            assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_distinct_seeds_differ(self):
        assert not np.allclose(random_pure_state(2, 0).amplitudes, random_pure_state(2, 1).amplitudes)

    def test_sigma_z_mean_over_many_seeds(self):
        total = 0.0
        for seed in range(10_000):
            a = random_pure_state(1, seed).amplitudes
            total += abs(a[0]) ** 2 - abs(a[1]) ** 2
        assert abs(total / 10_000) < 0.05

    def test_size_cap(self):
        with pytest.raises(ValueError):
            random_pure_state(4, 0)

    def test_haar_unitary_is_unitary(self):
        u = haar_random_unitary(4, np.random.default_rng(8))
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12


class TestLiteralsAndPhase:
    def test_bitstring(self):
        assert np.array_equal(state_from_literal("01").amplitudes, [0, 1, 0, 0])

    def test_bell_token(self):
        assert states_equal(state_from_literal("bell"), bell_phi_plus())

    def test_file_literal(self, tmp_path):
        path = tmp_path / "state.txt"
        path.write_text("# a plus state\n0.7071067811865476 0\n0.7071067811865476 0\n")
        st = state_from_literal(str(path))
        assert st.qubits == 1
        assert abs(st.amplitudes[0] - st.amplitudes[1]) < 1e-12

    def test_bad_literal(self):
        with pytest.raises(ValueError):
            state_from_literal("bogus")

    def test_global_phase_equality(self):
        a = random_pure_state(2, 11)
        b = QuantumState(qubits=2, amplitudes=np.exp(1j * 0.9) * a.amplitudes)
        assert states_equal(a, b)
        assert np.allclose(
            fix_global_phase(a.amplitudes), fix_global_phase(b.amplitudes), atol=1e-12
        )
