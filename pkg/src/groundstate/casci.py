"""Exact diagonalization over Slater determinants (CASCI / FCI).

Determinants are (alpha, beta) occupation bitmask pairs; matrix elements
follow the Slater-Condon rules with fermionic phases from the convention
"alpha string ascending, then beta string ascending".  Small problems use
a dense symmetric eigensolver, larger ones a simple Davidson iteration.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np
import scipy.sparse

from .data import FermionHamiltonian, Wavefunction
from .errors import ConvergenceError, ValidationError

_DENSE_LIMIT = 2000
_DIMENSION_CAP = 10**6
_DAVIDSON_TOL = 1e-8


def occupation_masks(n_orbitals: int, n_electrons: int) -> list[int]:
    """All n-choose-k occupation bitmasks in ascending numeric order."""
    masks = [
        sum(1 << i for i in occ)
        for occ in combinations(range(n_orbitals), n_electrons)
    ]
    return sorted(masks)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _annihilation_sign(mask: int, i: int) -> int:
    return -1 if bin(mask & ((1 << i) - 1)).count("1") % 2 else 1


def _single_phase(mask: int, i: int, a: int) -> int:
    """Phase of the normal-ordered excitation i -> a applied to a string."""
    sign = _annihilation_sign(mask, i)
    removed = mask & ~(1 << i)
    return sign * _annihilation_sign(removed, a)


def _diagonal_element(alpha: int, beta: int, h: np.ndarray, g: np.ndarray) -> float:
    occ_a = _bits(alpha)
    occ_b = _bits(beta)
    value = sum(h[i, i] for i in occ_a) + sum(h[i, i] for i in occ_b)
    for i in occ_a:
        for j in occ_a:
            value += 0.5 * (g[i, i, j, j] - g[i, j, j, i])
    for i in occ_b:
        for j in occ_b:
            value += 0.5 * (g[i, i, j, j] - g[i, j, j, i])
    for i in occ_a:
        for j in occ_b:
            value += g[i, i, j, j]
    return float(value)


def _single_element(
    mask: int, other_mask: int, i: int, a: int, h: np.ndarray, g: np.ndarray
) -> float:
    """Same-spin single excitation i -> a; ``other_mask`` is the other spin."""
    value = h[i, a]
    common = mask & ~(1 << i)
    for j in _bits(common):
        value += g[i, a, j, j] - g[i, j, j, a]
    for j in _bits(other_mask):
        value += g[i, a, j, j]
    return float(_single_phase(mask, i, a) * value)


def ci_matrix_element(
    det1: tuple[int, int], det2: tuple[int, int], h: np.ndarray, g: np.ndarray
) -> float:
    """Slater-Condon matrix element between two determinants (no core term)."""
    a1, b1 = det1
    a2, b2 = det2
    diff_a = a1 ^ a2
    diff_b = b1 ^ b2
    na = bin(diff_a).count("1") // 2
    nb = bin(diff_b).count("1") // 2
    degree = na + nb
    if degree > 2:
        return 0.0
    if degree == 0:
        return _diagonal_element(a1, b1, h, g)
    if degree == 1:
        if na == 1:
            i = _bits(diff_a & a1)[0]
            a = _bits(diff_a & a2)[0]
            return _single_element(a1, b1, i, a, h, g)
        i = _bits(diff_b & b1)[0]
        a = _bits(diff_b & b2)[0]
        return _single_element(b1, a1, i, a, h, g)
    if na == 2:
        return _same_spin_double(a1, diff_a, a2, h, g)
    if nb == 2:
        return _same_spin_double(b1, diff_b, b2, h, g)
    i = _bits(diff_a & a1)[0]
    a = _bits(diff_a & a2)[0]
    j = _bits(diff_b & b1)[0]
    b = _bits(diff_b & b2)[0]
    phase = _single_phase(a1, i, a) * _single_phase(b1, j, b)
    return float(phase * g[i, a, j, b])


def _same_spin_double(mask: int, diff: int, target: int, h, g) -> float:
    i, j = sorted(_bits(diff & mask))
    a, b = sorted(_bits(diff & target))
    intermediate = (mask & ~(1 << i)) | (1 << a)
    phase = _single_phase(mask, i, a) * _single_phase(intermediate, j, b)
    return float(phase * (g[i, a, j, b] - g[i, b, j, a]))


def determinant_basis(n_orbitals: int, n_alpha: int, n_beta: int) -> list[tuple[int, int]]:
    """Full determinant list, alpha-major, strings ascending."""
    alphas = occupation_masks(n_orbitals, n_alpha)
    betas = occupation_masks(n_orbitals, n_beta)
    return [(a, b) for a in alphas for b in betas]


def build_ci_matrix(
    hamiltonian: FermionHamiltonian, determinants: list[tuple[int, int]]
) -> np.ndarray:
    """Dense CI matrix over the given determinants, core energy excluded."""
    h = hamiltonian.one_body
    g = hamiltonian.two_body
    dim = len(determinants)
    matrix = np.zeros((dim, dim))
    for row in range(dim):
        for col in range(row + 1):
            value = ci_matrix_element(determinants[row], determinants[col], h, g)
            matrix[row, col] = matrix[col, row] = value
    return matrix


def _build_sparse_ci(hamiltonian, determinants) -> scipy.sparse.csr_matrix:
    h = hamiltonian.one_body
    g = hamiltonian.two_body
    dim = len(determinants)
    rows, cols, values = [], [], []
    for row in range(dim):
        for col in range(row + 1):
            d1, d2 = determinants[row], determinants[col]
            if bin(d1[0] ^ d2[0]).count("1") + bin(d1[1] ^ d2[1]).count("1") > 4:
                continue
            value = ci_matrix_element(d1, d2, h, g)
            if value != 0.0:
                rows.append(row)
                cols.append(col)
                values.append(value)
                if row != col:
                    rows.append(col)
                    cols.append(row)
                    values.append(value)
    return scipy.sparse.csr_matrix((values, (rows, cols)), shape=(dim, dim))


def davidson_lowest(
    matvec, diagonal: np.ndarray, tol: float = _DAVIDSON_TOL, max_iterations: int = 200
) -> tuple[float, np.ndarray]:
    """Lowest eigenpair by Davidson iteration with a diagonal preconditioner."""
    dim = len(diagonal)
    start = np.zeros(dim)
    start[int(np.argmin(diagonal))] = 1.0
    subspace = [start]
    projected = [matvec(start)]
    for _ in range(max_iterations):
        v = np.column_stack(subspace)
        av = np.column_stack(projected)
        small = v.T @ av
        small = 0.5 * (small + small.T)
        eigenvalues, eigenvectors = np.linalg.eigh(small)
        theta = eigenvalues[0]
        ritz = v @ eigenvectors[:, 0]
        residual = av @ eigenvectors[:, 0] - theta * ritz
        if np.linalg.norm(residual) < tol:
            return float(theta), ritz / np.linalg.norm(ritz)
        denom = diagonal - theta
        denom[np.abs(denom) < 1e-10] = 1e-10
        correction = residual / denom
        for basis_vec in subspace:
            correction -= np.dot(basis_vec, correction) * basis_vec
        norm = np.linalg.norm(correction)
        if norm < 1e-12:
            correction = np.random.default_rng(0).standard_normal(dim)
            for basis_vec in subspace:
                correction -= np.dot(basis_vec, correction) * basis_vec
            norm = np.linalg.norm(correction)
        subspace.append(correction / norm)
        projected.append(matvec(subspace[-1]))
        if len(subspace) > 40:
            ritz /= np.linalg.norm(ritz)
            subspace = [ritz]
            projected = [matvec(ritz)]
    raise ConvergenceError("Davidson iteration did not converge")


def solve_casci(
    hamiltonian: FermionHamiltonian, n_alpha: int, n_beta: int
) -> tuple[float, Wavefunction]:
    """Ground-state energy and wavefunction of the active-space Hamiltonian."""
    n = hamiltonian.n_orbitals
    n_alpha = int(n_alpha)
    n_beta = int(n_beta)
    if not (0 <= n_alpha <= n and 0 <= n_beta <= n):
        raise ValidationError(
            f"cannot place ({n_alpha}, {n_beta}) electrons in {n} orbitals"
        )
    dim = comb(n, n_alpha) * comb(n, n_beta)
    if dim > _DIMENSION_CAP:
        raise ValidationError(f"determinant space of {dim} exceeds the cap")

    determinants = determinant_basis(n, n_alpha, n_beta)
    if dim <= _DENSE_LIMIT:
        matrix = build_ci_matrix(hamiltonian, determinants)
        eigenvalues, eigenvectors = np.linalg.eigh(matrix)
        energy = float(eigenvalues[0])
        vector = eigenvectors[:, 0]
    else:
        sparse = _build_sparse_ci(hamiltonian, determinants)
        energy, vector = davidson_lowest(sparse.dot, sparse.diagonal().copy())

    pivot = int(np.argmax(np.abs(vector)))
    if vector[pivot] < 0:
        vector = -vector
    order = sorted(
        range(dim), key=lambda i: (-abs(vector[i]), determinants[i])
    )
    sorted_dets = [determinants[i] for i in order]
    sorted_coeffs = vector[order]
    wavefunction = Wavefunction(
        n, sorted_dets, sorted_coeffs, orbitals=hamiltonian.orbitals
    )
    return energy + hamiltonian.core_energy, wavefunction


def truncate(wavefunction: Wavefunction, max_determinants: int) -> Wavefunction:
    """Keep the dominant determinants and renormalize."""
    return wavefunction.truncate(max_determinants)
