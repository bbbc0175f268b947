"""Built-in algorithm implementations and the user-facing factory API.

``create``, ``register``, ``list`` and ``kinds`` operate on the default
registry.  One implementation per kind ships as the default; the
registered names are:

==============================      =========================================
kind                                implementations (* = default)
==============================      =========================================
scf_solver                          native*
active_space_selector               valence*, manual
hamiltonian_constructor             native*
multi_configuration_calculator      casci*
qubit_mapper                        jordan_wigner*, parity, bravyi_kitaev
state_prep                          sparse_merge*, sparse_isometry_gf2x
time_evolution_builder              trotter*
controlled_evolution_circuit_mapper pauli_sequence*
circuit_executor                    native_full_state*
phase_estimation                    iterative*, standard
estimator                           qubitwise_sampling*
==============================      =========================================
"""

from __future__ import annotations

from . import activespace, casci, circuit, estimate, qpe, qubitmap, scf, stateprep
from .data import Wavefunction
from .errors import ValidationError
from .registry import (
    Algorithm,
    SettingSpec,
    Settings,
    create,
    default_registry,
    kinds,
    list_implementations,
    register,
)

list = list_implementations  # noqa: A001 - mirrors the CLI's `list` command

__all__ = [
    "Algorithm",
    "SettingSpec",
    "Settings",
    "create",
    "default_registry",
    "kinds",
    "list",
    "list_implementations",
    "register",
]


class NativeScfSolver(Algorithm):
    def _execute(self, structure, charge=0, spin_multiplicity=1, basis_or_guess="sto-3g"):
        return scf.run_rhf(
            structure,
            charge=charge,
            spin_multiplicity=spin_multiplicity,
            basis_or_guess=basis_or_guess,
            max_iterations=self.settings["max_iterations"],
            diis_history=self.settings["diis_history"],
            energy_tolerance=self.settings["energy_tolerance"],
            residual_tolerance=self.settings["residual_tolerance"],
        )


class ValenceSelector(Algorithm):
    def _execute(self, wavefunction: Wavefunction) -> Wavefunction:
        n_electrons = self.settings["num_active_electrons"]
        n_orbitals = self.settings["num_active_orbitals"]
        if n_electrons < 0 or n_orbitals < 0:
            n_electrons, n_orbitals = activespace.compute_valence_space_parameters(
                wavefunction, charge=0
            )
        return activespace.select_valence(wavefunction, n_electrons, n_orbitals)


def _parse_index_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"bad index list {text!r}; expected e.g. '0,1,2'") from exc


class ManualSelector(Algorithm):
    def _execute(self, wavefunction: Wavefunction) -> Wavefunction:
        orbitals = activespace.select_manual(
            wavefunction.get_orbitals(),
            _parse_index_list(self.settings["core_indices"]),
            _parse_index_list(self.settings["active_indices"]),
        )
        mask = 0
        for position, mo in enumerate(orbitals.active):
            if orbitals.occupations[mo] == 2.0:
                mask |= 1 << position
        return Wavefunction.single_determinant(len(orbitals.active), mask, mask, orbitals)


class NativeHamiltonianConstructor(Algorithm):
    def _execute(self, orbitals):
        return activespace.construct_hamiltonian(orbitals)


class CasciCalculator(Algorithm):
    def _execute(self, hamiltonian, n_alpha, n_beta):
        return casci.solve_casci(hamiltonian, n_alpha, n_beta)


class EncodingMapper(Algorithm):
    def _execute(self, hamiltonian):
        return qubitmap.map_fermion_to_qubit(hamiltonian, encoding=self.name)


class SparseMergePreparation(Algorithm):
    def _execute(self, wavefunction: Wavefunction):
        return stateprep.prepare_sparse(wavefunction, self.settings["encoding"])


class TrotterBuilder(Algorithm):
    def _execute(self, qubit_hamiltonian, time):
        return qpe.build_trotter(
            qubit_hamiltonian,
            time,
            steps=self.settings["steps"],
            order=self.settings["order"],
        )


class PauliSequenceMapper(Algorithm):
    def _execute(self, sequence, power):
        return qpe.map_controlled_evolution(sequence, power)


class FullStateExecutor(Algorithm):
    def _execute(self, program, shots, seed=0):
        return circuit.sample(program, shots, seed)


class IterativePhaseEstimation(Algorithm):
    def _execute(
        self,
        state_preparation,
        qubit_hamiltonian,
        circuit_executor,
        evolution_builder,
        circuit_mapper,
    ):
        return qpe.run_iterative_qpe(
            state_preparation,
            qubit_hamiltonian,
            circuit_executor,
            evolution_builder,
            circuit_mapper,
            num_bits=self.settings["num_bits"],
            evolution_time=self.settings["evolution_time"],
            shots=self.settings["shots"],
            seed=self.settings["seed"],
            settings_snapshot=self.settings.snapshot(),
        )


class StandardPhaseEstimation(Algorithm):
    def _execute(
        self,
        state_preparation,
        qubit_hamiltonian,
        circuit_executor,
        evolution_builder,
        circuit_mapper,
    ):
        return qpe.run_standard_qpe(
            state_preparation,
            qubit_hamiltonian,
            circuit_executor,
            evolution_builder,
            circuit_mapper,
            num_bits=self.settings["num_bits"],
            evolution_time=self.settings["evolution_time"],
            shots=self.settings["shots"],
            seed=self.settings["seed"],
            settings_snapshot=self.settings.snapshot(),
        )


class QubitwiseSamplingEstimator(Algorithm):
    def _execute(
        self,
        state_preparation,
        qubit_hamiltonian,
        circuit_executor=None,
        reference=None,
    ):
        threshold = self.settings["prefilter_threshold"]
        if reference is not None:
            reduced, offset = estimate.classical_prefilter(
                qubit_hamiltonian,
                reference,
                threshold,
                encoding=self.settings["encoding"],
            )
        else:
            if threshold > 0.0:
                raise ValidationError(
                    "a reference wavefunction is required for prefiltering"
                )
            reduced, offset = estimate.classical_prefilter_identity(qubit_hamiltonian)
        groups = estimate.group_qubitwise_commuting(reduced)
        shots = None if self.settings["exact"] else self.settings["shots_per_group"]
        return estimate.estimate_energy(
            state_preparation,
            groups,
            reduced,
            shots,
            seed=self.settings["seed"],
            executor=circuit_executor,
            classical_offset=offset,
            settings_snapshot=self.settings.snapshot(),
        )


def _register_builtins() -> None:
    register(
        "scf_solver",
        "native",
        NativeScfSolver,
        settings=[
            SettingSpec("max_iterations", "int", 128),
            SettingSpec("diis_history", "int", 8),
            SettingSpec("energy_tolerance", "float", 1e-10),
            SettingSpec("residual_tolerance", "float", 1e-8),
        ],
        default=True,
    )
    register(
        "active_space_selector",
        "valence",
        ValenceSelector,
        settings=[
            SettingSpec("num_active_electrons", "int", -1, "-1 = valence rule"),
            SettingSpec("num_active_orbitals", "int", -1, "-1 = valence rule"),
        ],
        default=True,
    )
    register(
        "active_space_selector",
        "manual",
        ManualSelector,
        settings=[
            SettingSpec("core_indices", "str", "", "comma-separated MO indices"),
            SettingSpec("active_indices", "str", "", "comma-separated MO indices"),
        ],
    )
    register("hamiltonian_constructor", "native", NativeHamiltonianConstructor, default=True)
    register("multi_configuration_calculator", "casci", CasciCalculator, default=True)
    register("qubit_mapper", "jordan_wigner", EncodingMapper, default=True)
    register("qubit_mapper", "parity", EncodingMapper)
    register("qubit_mapper", "bravyi_kitaev", EncodingMapper)
    prep_settings = [SettingSpec("encoding", "str", "jordan_wigner")]
    register("state_prep", "sparse_merge", SparseMergePreparation, prep_settings, default=True)
    register("state_prep", "sparse_isometry_gf2x", SparseMergePreparation, prep_settings)
    register(
        "time_evolution_builder",
        "trotter",
        TrotterBuilder,
        settings=[SettingSpec("steps", "int", 4), SettingSpec("order", "int", 1)],
        default=True,
    )
    register(
        "controlled_evolution_circuit_mapper",
        "pauli_sequence",
        PauliSequenceMapper,
        default=True,
    )
    register("circuit_executor", "native_full_state", FullStateExecutor, default=True)
    qpe_settings = [
        SettingSpec("num_bits", "int", 8),
        SettingSpec("evolution_time", "float", 0.5),
        SettingSpec("shots", "int", 51, "shots per round / readout"),
        SettingSpec("seed", "int", 0),
    ]
    register("phase_estimation", "iterative", IterativePhaseEstimation, qpe_settings, default=True)
    register("phase_estimation", "standard", StandardPhaseEstimation, qpe_settings)
    register(
        "estimator",
        "qubitwise_sampling",
        QubitwiseSamplingEstimator,
        settings=[
            SettingSpec("shots_per_group", "int", 4096),
            SettingSpec("prefilter_threshold", "float", 0.0),
            SettingSpec("encoding", "str", "jordan_wigner"),
            SettingSpec("seed", "int", 0),
            SettingSpec("exact", "bool", False, "infinite-shot marginals"),
        ],
        default=True,
    )


_register_builtins()
