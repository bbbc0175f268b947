"""Active-space selection and frozen-core Hamiltonian construction.

Selection is either rule-based (valence counts centered on the Fermi
level) or fully manual.  Doubly occupied orbitals outside the active set
are folded into the scalar core energy and an effective one-body term.
"""

from __future__ import annotations

import logging

import numpy as np

from .constants import VALENCE_ELECTRONS, VALENCE_ORBITALS
from .data import FermionHamiltonian, Orbitals, Wavefunction
from .errors import ValidationError

logger = logging.getLogger(__name__)

_DEGENERACY_TOL = 1e-8


def compute_valence_space_parameters(
    wavefunction: Wavefunction, charge: int = 0
) -> tuple[int, int]:
    """Valence-rule (electron, orbital) counts for an SCF wavefunction."""
    orbitals = wavefunction.get_orbitals()
    structure = orbitals.basis.structure
    n_orbitals = sum(VALENCE_ORBITALS[z] for z in structure.atomic_numbers)
    n_electrons = sum(VALENCE_ELECTRONS[z] for z in structure.atomic_numbers) - int(charge)
    n_orbitals = min(n_orbitals, orbitals.n_molecular_orbitals)
    n_electrons = min(n_electrons, orbitals.n_electrons)
    if n_electrons < 0:
        raise ValidationError("valence electron count is negative for this charge")
    if n_electrons > 2 * n_orbitals:
        raise ValidationError("valence electrons exceed twice the valence orbitals")
    return n_electrons, n_orbitals


def select_valence(
    wavefunction: Wavefunction, n_active_electrons: int, n_active_orbitals: int
) -> Wavefunction:
    """Partition MOs around the Fermi level and re-express the determinant.

    The active set takes the ``n_active_electrons / 2`` highest occupied
    MOs plus the lowest virtuals needed to reach ``n_active_orbitals``;
    occupied MOs below become frozen core.
    """
    orbitals = wavefunction.get_orbitals()
    n_active_electrons = int(n_active_electrons)
    n_active_orbitals = int(n_active_orbitals)
    if n_active_electrons < 0 or n_active_orbitals < 1:
        raise ValidationError("active counts must be non-negative (>=1 orbital)")
    if n_active_electrons % 2 != 0:
        raise ValidationError(
            "valence selection requires an even active electron count"
        )
    if n_active_electrons > 2 * n_active_orbitals:
        raise ValidationError("more active electrons than the active orbitals hold")

    occupied = [i for i in range(orbitals.n_molecular_orbitals) if orbitals.occupations[i] == 2.0]
    unoccupied = [i for i in range(orbitals.n_molecular_orbitals) if orbitals.occupations[i] == 0.0]
    n_occ_active = n_active_electrons // 2
    n_virtual_active = n_active_orbitals - n_occ_active
    if n_occ_active > len(occupied):
        raise ValidationError("not enough occupied orbitals for the active space")
    if n_virtual_active < 0:
        raise ValidationError(
            f"{n_active_electrons} electrons do not fit in "
            f"{n_active_orbitals} active orbitals"
        )
    if n_virtual_active > len(unoccupied):
        raise ValidationError("not enough virtual orbitals for the active space")

    active_occupied = occupied[len(occupied) - n_occ_active :]
    core = occupied[: len(occupied) - n_occ_active]
    active = active_occupied + unoccupied[:n_virtual_active]

    energies = orbitals.energies
    if core and abs(energies[core[-1]] - energies[active[0]]) < _DEGENERACY_TOL:
        logger.warning(
            "degenerate orbitals at the core/active boundary; "
            "lower MO index kept in core"
        )
    if (
        n_virtual_active < len(unoccupied)
        and n_virtual_active > 0
        and abs(energies[active[-1]] - energies[unoccupied[n_virtual_active]]) < _DEGENERACY_TOL
    ):
        logger.warning(
            "degenerate orbitals at the active/virtual boundary; "
            "lower MO index kept active"
        )

    n_each_spin = n_active_electrons // 2
    partitioned = orbitals.with_partition(
        core, active, n_active_alpha=n_each_spin, n_active_beta=n_each_spin
    )
    mask = (1 << n_occ_active) - 1
    return Wavefunction.single_determinant(n_active_orbitals, mask, mask, partitioned)


def select_manual(
    orbitals: Orbitals, core_indices, active_indices
) -> Orbitals:
    """Set the partition exactly as given; remaining MOs become virtual."""
    core = [int(i) for i in core_indices]
    active = [int(i) for i in active_indices]
    combined = core + active
    n_mo = orbitals.n_molecular_orbitals
    if len(set(combined)) != len(combined):
        raise ValidationError("core and active index lists must be disjoint")
    if any(i < 0 or i >= n_mo for i in combined):
        raise ValidationError("partition index out of range")
    if not active:
        raise ValidationError("active space cannot be empty")
    for i in core:
        if orbitals.occupations[i] != 2.0:
            raise ValidationError(
                f"core orbital {i} is not doubly occupied; frozen-core folding "
                "requires closed-shell core orbitals"
            )
    return orbitals.with_partition(sorted(core), sorted(active))


def transform_to_mo(ao_matrix: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    return coefficients.T @ ao_matrix @ coefficients


def transform_eri_to_mo(ao_eri: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    """Four successive quarter transformations of the (pq|rs) tensor."""
    c = coefficients
    g = np.einsum("pi,pqrs->iqrs", c, ao_eri)
    g = np.einsum("qj,iqrs->ijrs", c, g)
    g = np.einsum("rk,ijrs->ijks", c, g)
    g = np.einsum("sl,ijks->ijkl", c, g)
    return g


def construct_hamiltonian(orbitals: Orbitals) -> FermionHamiltonian:
    """Fold frozen-core contributions into an active-space Hamiltonian."""
    if not orbitals.active:
        raise ValidationError("orbitals carry no active-space partition")
    ints = orbitals.basis.ao_integrals()
    c = orbitals.coefficients
    h_mo = transform_to_mo(ints.core_hamiltonian, c)
    g_mo = transform_eri_to_mo(ints.eri, c)

    core = list(orbitals.core)
    active = list(orbitals.active)

    core_energy = ints.nuclear_repulsion
    for i in core:
        core_energy += 2.0 * h_mo[i, i]
    for i in core:
        for j in core:
            core_energy += 2.0 * g_mo[i, i, j, j] - g_mo[i, j, j, i]

    n_active = len(active)
    h_eff = np.empty((n_active, n_active))
    for p_idx, p in enumerate(active):
        for q_idx, q in enumerate(active):
            value = h_mo[p, q]
            for i in core:
                value += 2.0 * g_mo[p, q, i, i] - g_mo[p, i, i, q]
            h_eff[p_idx, q_idx] = value

    g_active = g_mo[np.ix_(active, active, active, active)]
    return FermionHamiltonian(n_active, core_energy, h_eff, g_active, orbitals=orbitals)
