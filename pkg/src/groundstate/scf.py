"""Restricted Hartree-Fock with DIIS acceleration.

Roothaan iterations in a canonically orthogonalized AO basis, accelerated
by Pulay DIIS on the FDS-SDF residual, starting from the core-Hamiltonian
guess.  Only closed-shell singlets are supported.
"""

from __future__ import annotations

import numpy as np

from .basis import build_basis
from .data import Orbitals, Structure, Wavefunction
from .errors import ConvergenceError, UnsupportedError

_LINDEP_THRESHOLD = 1e-10


def _orthogonalizer(s: np.ndarray) -> np.ndarray:
    """Canonical orthogonalization, projecting out near-singular directions."""
    eigenvalues, vectors = np.linalg.eigh(s)
    keep = eigenvalues > _LINDEP_THRESHOLD
    return vectors[:, keep] / np.sqrt(eigenvalues[keep])


def _fix_column_signs(c: np.ndarray) -> np.ndarray:
    out = c.copy()
    for col in range(out.shape[1]):
        pivot = int(np.argmax(np.abs(out[:, col])))
        if out[pivot, col] < 0:
            out[:, col] = -out[:, col]
    return out


def _diis_extrapolate(focks: list[np.ndarray], errors: list[np.ndarray]) -> np.ndarray:
    m = len(focks)
    b = np.empty((m + 1, m + 1))
    b[-1, :] = -1.0
    b[:, -1] = -1.0
    b[-1, -1] = 0.0
    for i in range(m):
        for j in range(i + 1):
            b[i, j] = b[j, i] = float(np.sum(errors[i] * errors[j]))
    rhs = np.zeros(m + 1)
    rhs[-1] = -1.0
    try:
        weights = np.linalg.solve(b, rhs)[:m]
    except np.linalg.LinAlgError:
        return focks[-1]
    return sum(w * f for w, f in zip(weights, focks))


def run_rhf(
    structure: Structure,
    charge: int = 0,
    spin_multiplicity: int = 1,
    basis_or_guess: str = "sto-3g",
    max_iterations: int = 128,
    diis_history: int = 8,
    energy_tolerance: float = 1e-10,
    residual_tolerance: float = 1e-8,
) -> tuple[float, Wavefunction]:
    """Converge RHF and return (total energy, single-determinant state)."""
    if not isinstance(basis_or_guess, str):
        raise UnsupportedError(
            "passing an orbital guess is reserved; supply a basis name"
        )
    if spin_multiplicity != 1:
        raise UnsupportedError("only closed-shell singlets are supported")
    n_electrons = structure.n_electrons - int(charge)
    if n_electrons < 0:
        raise UnsupportedError("charge exceeds the available electrons")
    if n_electrons % 2 != 0:
        raise UnsupportedError("odd electron counts require an open-shell method")

    basis = build_basis(structure, basis_or_guess)
    ints = basis.ao_integrals()
    h_core = ints.core_hamiltonian
    s = ints.overlap
    eri = ints.eri
    x = _orthogonalizer(s)
    n_occ = n_electrons // 2
    if n_occ > x.shape[1]:
        raise UnsupportedError("more electron pairs than orbitals in this basis")

    def diagonalize(fock):
        f_prime = x.T @ fock @ x
        eps, c_prime = np.linalg.eigh(f_prime)
        return eps, _fix_column_signs(x @ c_prime)

    def density(c):
        occ = c[:, :n_occ]
        return 2.0 * occ @ occ.T

    eps, c = diagonalize(h_core)
    d = density(c)
    energy = 0.0
    fock_history: list[np.ndarray] = []
    error_history: list[np.ndarray] = []

    for iteration in range(1, max_iterations + 1):
        j = np.einsum("pqrs,rs->pq", eri, d)
        k = np.einsum("prqs,rs->pq", eri, d)
        fock = h_core + j - 0.5 * k
        new_energy = 0.5 * float(np.sum(d * (h_core + fock))) + ints.nuclear_repulsion
        residual = fock @ d @ s - s @ d @ fock
        residual_norm = float(np.linalg.norm(residual))
        energy_change = abs(new_energy - energy)
        energy = new_energy
        if residual_norm < residual_tolerance and (
            iteration > 1 and energy_change < energy_tolerance
        ):
            break

        fock_history.append(fock)
        error_history.append(residual)
        if len(fock_history) > diis_history:
            fock_history.pop(0)
            error_history.pop(0)
        if iteration >= 2:
            fock = _diis_extrapolate(fock_history, error_history)
        eps, c = diagonalize(fock)
        d = density(c)
    else:
        raise ConvergenceError(
            f"RHF did not converge in {max_iterations} iterations "
            f"(residual {residual_norm:.3e})"
        )

    n_mo = c.shape[1]
    occupations = np.zeros(n_mo)
    occupations[:n_occ] = 2.0
    orbitals = Orbitals(
        basis,
        c,
        eps,
        occupations,
        core=(),
        active=range(n_mo),
        virtual=(),
        n_active_alpha=n_occ,
        n_active_beta=n_occ,
    )
    mask = (1 << n_occ) - 1
    wavefunction = Wavefunction.single_determinant(n_mo, mask, mask, orbitals)
    return energy, wavefunction
