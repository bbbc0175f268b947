import numpy as np
import pytest

from groundstate.activespace import (
    compute_valence_space_parameters,
    construct_hamiltonian,
    select_valence,
)
from groundstate.casci import solve_casci
from groundstate.data import Structure
from groundstate.qubitmap import map_fermion_to_qubit
from groundstate.scf import run_rhf


@pytest.fixture(scope="session")
def h2_structure():
    return Structure([[0.0, 0.0, 0.0], [0.0, 0.0, 1.4]], ["H", "H"])


@pytest.fixture(scope="session")
def h2_stretched():
    return Structure(np.array([[0, 0, 0], [0, 0, 2.5]]), symbols=["H", "H"])


@pytest.fixture(scope="session")
def he_structure():
    return Structure([[0.0, 0.0, 0.0]], ["He"])


@pytest.fixture(scope="session")
def h2o_structure():
    return Structure(
        [[0.0, 0.0, 0.0], [0.0, 1.431, 1.107], [0.0, -1.431, 1.107]],
        ["O", "H", "H"],
    )


@pytest.fixture(scope="session")
def h2_rhf(h2_structure):
    return run_rhf(h2_structure)


@pytest.fixture(scope="session")
def h2_stretched_rhf(h2_stretched):
    return run_rhf(h2_stretched)


@pytest.fixture(scope="session")
def he_rhf(he_structure):
    return run_rhf(he_structure)


@pytest.fixture(scope="session")
def h2o_rhf(h2o_structure):
    return run_rhf(h2o_structure)


@pytest.fixture(scope="session")
def h2_active_hamiltonian(h2_stretched_rhf):
    _, wavefunction = h2_stretched_rhf
    n_electrons, n_orbitals = compute_valence_space_parameters(wavefunction, 0)
    valence = select_valence(wavefunction, n_electrons, n_orbitals)
    return construct_hamiltonian(valence.get_orbitals())


@pytest.fixture(scope="session")
def h2_casci(h2_active_hamiltonian):
    return solve_casci(h2_active_hamiltonian, 1, 1)


@pytest.fixture(scope="session")
def h2_qubit_hamiltonian(h2_active_hamiltonian):
    return map_fermion_to_qubit(h2_active_hamiltonian, "jordan_wigner")


@pytest.fixture(scope="session")
def h2o_active_hamiltonian(h2o_rhf):
    _, wavefunction = h2o_rhf
    n_electrons, n_orbitals = compute_valence_space_parameters(wavefunction, 0)
    valence = select_valence(wavefunction, n_electrons, n_orbitals)
    return construct_hamiltonian(valence.get_orbitals())
