"""groundstate: molecular ground-state energy estimation pipeline.

A modular toolkit that takes a molecular geometry through restricted
Hartree-Fock, active-space selection, determinant CI, fermion-to-qubit
encoding, sparse state preparation and either Trotterized quantum phase
estimation or shot-based estimation on a built-in state-vector simulator.
Stages are immutable data objects connected by factory-registered,
interchangeable algorithms.
"""

from __future__ import annotations

from . import algorithms, data, utils
from .data import (
    FermionHamiltonian,
    Orbitals,
    PauliString,
    QubitHamiltonian,
    Structure,
    Wavefunction,
    from_json,
    load_json,
    parse_xyz,
    save_json,
    to_json,
)

__version__ = "0.1.0"

__all__ = [
    "FermionHamiltonian",
    "Orbitals",
    "PauliString",
    "QubitHamiltonian",
    "Structure",
    "Wavefunction",
    "algorithms",
    "data",
    "from_json",
    "load_json",
    "parse_xyz",
    "save_json",
    "to_json",
    "utils",
    "__version__",
]
