"""Trotterization, controlled evolution and both QPE readout variants."""

import math

import numpy as np
import pytest

from groundstate import algorithms
from groundstate.circuit import Circuit, Gate, simulate
from groundstate.data import PauliString, QubitHamiltonian
from groundstate.errors import ValidationError
from groundstate.qpe import (
    build_trotter,
    map_controlled_evolution,
    phase_to_energy,
    run_iterative_qpe,
    run_standard_qpe,
)
from groundstate.stateprep import prepare_sparse

import oracles


def _p(letters):
    return PauliString.from_letters(letters)


def _h(n, *terms):
    return QubitHamiltonian(n, [(_p(t), c) for t, c in terms])


def _instances():
    return (
        algorithms.create("circuit_executor", "native_full_state"),
        algorithms.create("time_evolution_builder", "trotter"),
        algorithms.create("controlled_evolution_circuit_mapper", "pauli_sequence"),
    )


class TestBuildTrotter:
    def test_single_term_is_exact(self):
        h = _h(1, ("Z", 1.0))
        tau = 0.8
        sequence = build_trotter(h, tau, steps=1)
        assert len(sequence.rotations) == 1
        assert sequence.rotations[0][1] == pytest.approx(2.0 * tau)
        unitary = oracles.sequence_unitary(sequence)
        exact = oracles.exact_evolution(h, tau)
        assert np.max(np.abs(unitary - exact)) < 1e-12

    def test_identity_goes_to_global_phase(self):
        h = _h(1, ("I", 0.3), ("Z", 1.0))
        sequence = build_trotter(h, 0.5, steps=2)
        assert sequence.global_phase == pytest.approx(-0.15)
        assert all(not p.is_identity for p, _ in sequence.rotations)

    def test_unsupported_order(self):
        with pytest.raises(ValidationError):
            build_trotter(_h(1, ("Z", 1.0)), 0.5, steps=1, order=3)

    def test_term_order_lexicographic(self):
        h = _h(2, ("ZI", 0.2), ("IX", 0.4), ("YY", 0.1))
        sequence = build_trotter(h, 1.0, steps=1)
        letters = [p.to_letters() for p, _ in sequence.rotations]
        assert letters == sorted(letters)

    def _error(self, order, steps):
        h = _h(1, ("X", 0.37), ("Z", 0.82))
        time = 1.0
        sequence = build_trotter(h, time, steps=steps, order=order)
        approx = oracles.sequence_unitary(sequence)
        exact = oracles.exact_evolution(h, time)
        return np.linalg.norm(approx - exact, 2)

    def test_first_order_error_halves_on_step_doubling(self):
        ratios = [self._error(1, s) / self._error(1, 2 * s) for s in (4, 8)]
        for ratio in ratios:
            assert 1.7 <= ratio <= 2.3

    def test_second_order_error_quarters_on_step_doubling(self):
        ratios = [self._error(2, s) / self._error(2, 2 * s) for s in (2, 4)]
        for ratio in ratios:
            assert 3.2 <= ratio <= 4.8


class TestControlledEvolution:
    def test_single_z_rotation(self):
        sequence = build_trotter(_h(1, ("Z", 1.0)), 0.6, steps=1)
        circuit = map_controlled_evolution(sequence, 1)
        assert circuit.n_qubits == 2
        unitary = oracles.circuit_unitary(circuit)
        expected = oracles.controlled_matrix(oracles.sequence_unitary(sequence))
        assert np.max(np.abs(unitary - expected)) < 1e-12

    def test_power_two_is_squared_unitary(self):
        sequence = build_trotter(_h(2, ("XY", 0.3), ("ZZ", -0.4)), 0.7, steps=2)
        u1 = oracles.circuit_unitary(map_controlled_evolution(sequence, 1))
        u2 = oracles.circuit_unitary(map_controlled_evolution(sequence, 2))
        assert np.max(np.abs(u1 @ u1 - u2)) < 1e-12

    def test_ancilla_zero_branch_is_identity(self):
        sequence = build_trotter(_h(2, ("XZ", 0.9), ("II", 0.2)), 1.3, steps=1)
        body = map_controlled_evolution(sequence, 1)
        prep = [Gate("H", 0), Gate("CX", 1, control=0)]
        reference = simulate(Circuit(3, prep))
        with_evolution = simulate(Circuit(3, prep + list(body.gates)))
        np.testing.assert_allclose(with_evolution, reference, atol=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_random_two_qubit_hamiltonians(self, seed):
        rng = np.random.default_rng(seed + 17)
        terms = []
        for _ in range(4):
            letters = "".join(rng.choice(list("IXYZ"), size=2))
            terms.append((letters, float(rng.standard_normal())))
        h = _h(2, *terms)
        time = float(rng.uniform(0.2, 1.2))
        sequence = build_trotter(h, time, steps=3)
        circuit = map_controlled_evolution(sequence, 1)
        unitary = oracles.circuit_unitary(circuit)
        expected = oracles.controlled_matrix(oracles.sequence_unitary(sequence))
        assert np.max(np.abs(unitary - expected)) < 1e-10

    def test_global_phase_is_control_dependent(self):
        # pure-identity Hamiltonian: controlled branch must pick up exp(-i c t)
        sequence = build_trotter(_h(1, ("I", 0.7)), 1.1, steps=1)
        circuit = map_controlled_evolution(sequence, 3)
        unitary = oracles.circuit_unitary(circuit)
        expected = oracles.controlled_matrix(
            np.exp(-1j * 0.7 * 1.1 * 3) * np.eye(2)
        )
        assert np.max(np.abs(unitary - expected)) < 1e-12


class TestPhaseToEnergy:
    def test_wraps_to_positive_energy(self):
        assert phase_to_energy(7.0 / 8.0, math.pi / 4.0) == pytest.approx(1.0)

    def test_zero(self):
        assert phase_to_energy(0.0, 0.5) == 0.0

    def test_formula(self):
        assert phase_to_energy(0.25, 0.5) == pytest.approx(-math.pi)

    def test_nonpositive_time(self):
        with pytest.raises(ValidationError):
            phase_to_energy(0.5, 0.0)


class TestStandardQpe:
    def test_exact_phase_three_bits(self):
        executor, builder, mapper = _instances()
        h = _h(1, ("Z", 1.0))
        prep = Circuit(1)  # |0> has eigenvalue +1
        result = run_standard_qpe(
            prep, h, executor, builder, mapper,
            num_bits=3, evolution_time=math.pi / 4.0, shots=100, seed=3,
        )
        assert result.bits == "111"
        assert result.phase == pytest.approx(7.0 / 8.0)
        assert result.histogram == {"111": 100}
        assert result.raw_energy == pytest.approx(1.0)

    def test_exact_phase_two_bits(self):
        executor, builder, mapper = _instances()
        result = run_standard_qpe(
            Circuit(1), _h(1, ("Z", 1.0)), executor, builder, mapper,
            num_bits=2, evolution_time=math.pi / 2.0, shots=50, seed=1,
        )
        assert result.bits == "11"
        assert result.phase == pytest.approx(0.75)

    def test_num_bits_cap(self):
        executor, builder, mapper = _instances()
        with pytest.raises(ValidationError):
            run_standard_qpe(
                Circuit(1), _h(1, ("Z", 1.0)), executor, builder, mapper,
                num_bits=13, evolution_time=0.5, shots=10, seed=0,
            )

    def test_h2_eigenstate_within_resolution(
        self, h2_qubit_hamiltonian, h2_casci
    ):
        executor, builder, mapper = _instances()
        casci_energy, wavefunction = h2_casci
        prep = prepare_sparse(wavefunction.truncate(2), "jordan_wigner")
        num_bits, time = 6, 0.5
        result = run_standard_qpe(
            prep, h2_qubit_hamiltonian, executor, builder, mapper,
            num_bits=num_bits, evolution_time=time, shots=30, seed=7,
        )
        assert abs(result.raw_energy - casci_energy) <= 2 * math.pi / (
            time * 2**num_bits
        )


class TestIterativeQpe:
    def test_exact_phase_matches_standard(self):
        executor, builder, mapper = _instances()
        h = _h(1, ("Z", 1.0))
        result = run_iterative_qpe(
            Circuit(1), h, executor, builder, mapper,
            num_bits=3, evolution_time=math.pi / 4.0, shots=51, seed=5,
        )
        assert result.bits == "111"
        for round_record in result.histogram:
            counts = round_record["counts"]
            assert len(counts) == 1  # deterministic rounds for exact phases

    @pytest.mark.parametrize("seed", range(10))
    def test_agrees_with_standard_on_random_single_qubit(self, seed):
        rng = np.random.default_rng(seed + 900)
        coefficient = float(rng.uniform(-2.0, 2.0))
        h = _h(1, ("Z", coefficient), ("I", float(rng.uniform(-0.5, 0.5))))
        executor, builder, mapper = _instances()
        kwargs = dict(num_bits=5, evolution_time=0.7, shots=51, seed=seed)
        prep = Circuit(1)
        standard = run_standard_qpe(prep, h, executor, builder, mapper, **kwargs)
        iterative = run_iterative_qpe(prep, h, executor, builder, mapper, **kwargs)
        assert standard.bits == iterative.bits

    def test_high_overlap_trial_recovers_ground_phase(
        self, h2_qubit_hamiltonian, h2_casci
    ):
        executor, builder, mapper = _instances()
        casci_energy, wavefunction = h2_casci
        # single-determinant trial: overlap ~0.92 with the ground state
        trial = wavefunction.truncate(1)
        prep = prepare_sparse(trial, "jordan_wigner")
        result = run_iterative_qpe(
            prep, h2_qubit_hamiltonian, executor, builder, mapper,
            num_bits=8, evolution_time=0.5, shots=51, seed=21,
        )
        assert abs(result.raw_energy - casci_energy) <= 2 * math.pi / (0.5 * 2**8)

    def test_appendix_scale_pipeline(self, h2_qubit_hamiltonian, h2_casci):
        executor, builder, mapper = _instances()
        casci_energy, wavefunction = h2_casci
        prep = prepare_sparse(wavefunction.truncate(2), "jordan_wigner")
        result = run_iterative_qpe(
            prep, h2_qubit_hamiltonian, executor, builder, mapper,
            num_bits=8, evolution_time=0.5, shots=51, seed=0,
        )
        assert abs(result.raw_energy - casci_energy) <= 2 * math.pi / (0.5 * 2**8)


class TestExactPhaseRecovery:
    @pytest.mark.parametrize("numerator", range(8))
    def test_all_three_bit_phases_both_variants(self, numerator):
        """phi = m/8 recovered with probability one over 100 seeded shots."""
        executor, builder, mapper = _instances()
        # exp(-iHt) on |1> with H = c Z gives phase -(-c) t / 2pi: pick c so
        # that phi = numerator / 8 exactly, using t = 2 pi / 8.
        time = 2.0 * math.pi / 8.0
        h = _h(1, ("Z", -float(numerator)))  # |0> eigenvalue -m -> phi = m/8
        prep = Circuit(1)
        standard = run_standard_qpe(
            prep, h, executor, builder, mapper,
            num_bits=3, evolution_time=time, shots=100, seed=numerator,
        )
        assert standard.phase == pytest.approx(numerator / 8.0)
        assert standard.histogram == {standard.bits: 100}
        iterative = run_iterative_qpe(
            prep, h, executor, builder, mapper,
            num_bits=3, evolution_time=time, shots=100, seed=numerator,
        )
        assert iterative.phase == pytest.approx(numerator / 8.0)
        for round_record in iterative.histogram:
            assert len(round_record["counts"]) == 1


class TestResolutionBound:
    @pytest.mark.parametrize("seed", range(3))
    def test_eigenstate_error_below_lsb(self, seed):
        """Trotter steps chosen so the eigenphase error is far below half
        an LSB; readout error is then bounded by the register resolution."""
        rng = np.random.default_rng(seed)
        h = _h(1, ("Z", float(rng.uniform(0.3, 1.5))), ("I", float(rng.uniform(-0.3, 0.3))))
        exact = oracles.qubit_hamiltonian_matrix(h)
        ground = float(np.linalg.eigvalsh(exact)[0])
        executor, builder, mapper = _instances()
        num_bits, time = 6, 0.9
        prep = Circuit(1, [Gate("X", 0)])  # |1> is the Z=-1 eigenstate
        eigenvalue = h.coefficient(_p("I")) - h.coefficient(_p("Z"))
        result = run_iterative_qpe(
            prep, h, executor, builder, mapper,
            num_bits=num_bits, evolution_time=time, shots=51, seed=seed,
        )
        assert abs(result.raw_energy - eigenvalue) <= 2 * math.pi / (time * 2**num_bits)
        assert ground <= eigenvalue + 1e-12


class TestPhaseResultDocument:
    def test_json_round_trip(self, h2_qubit_hamiltonian, h2_casci):
        from groundstate.data import from_json, to_json

        executor, builder, mapper = _instances()
        _, wavefunction = h2_casci
        prep = prepare_sparse(wavefunction.truncate(2), "jordan_wigner")
        result = run_iterative_qpe(
            prep, h2_qubit_hamiltonian, executor, builder, mapper,
            num_bits=4, evolution_time=0.5, shots=11, seed=2,
        )
        assert from_json(to_json(result)) == result
