"""Pauli-string algebra and fermion-to-qubit encodings.

A Pauli string in symplectic form (x, z) stands for the letter tensor
product where each Y contributes a factor i relative to the bare X.Z
product.  Encodings are described by three qubit sets per fermionic mode:
the flip set (bits toggled by an occupation change), the occupation set
(bits whose parity stores the occupation) and the prefix set (bits whose
parity gives the Jordan-Wigner sign).  Jordan-Wigner, parity and
Bravyi-Kitaev (Fenwick tree) are all instances.

Spin orbitals are interleaved: mode 2p is spatial orbital p with alpha
spin, mode 2p+1 the same orbital with beta spin.
"""

from __future__ import annotations

from dataclasses import dataclass

from .data import FermionHamiltonian, PauliString, QubitHamiltonian, Wavefunction
from .errors import UnsupportedError, ValidationError

ENCODINGS = ("bravyi_kitaev", "jordan_wigner", "parity")

_PHASES = (1.0, 1j, -1.0, -1j)
_IMAG_TOL = 1e-12


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _mul_masks(x1: int, z1: int, x2: int, z2: int) -> tuple[int, int, int]:
    """Multiply two symplectic Paulis; returns (i-power mod 4, x, z)."""
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    power = (
        _popcount(x1 & z1)
        + _popcount(x2 & z2)
        - _popcount(x3 & z3)
        + 2 * _popcount(z1 & x2)
    ) % 4
    return power, x3, z3


def pauli_mul(p: PauliString, q: PauliString) -> tuple[complex, PauliString]:
    """Product P.Q as (phase, string) with phase in {1, i, -1, -i}."""
    if p.n_qubits != q.n_qubits:
        raise ValidationError("cannot multiply Pauli strings of different widths")
    power, x, z = _mul_masks(p.x_bits, p.z_bits, q.x_bits, q.z_bits)
    return _PHASES[power], PauliString(p.n_qubits, x, z)


def qubitwise_commute(p: PauliString, q: PauliString) -> bool:
    """True iff at every qubit the letters are equal or one is identity."""
    if p.n_qubits != q.n_qubits:
        raise ValidationError("cannot compare Pauli strings of different widths")
    common = p.support & q.support
    return (p.x_bits & common) == (q.x_bits & common) and (
        p.z_bits & common
    ) == (q.z_bits & common)


# ---------------------------------------------------------------------------
# Encoding set construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EncodingSets:
    """Per-mode qubit masks defining a linear occupation encoding."""

    n_modes: int
    flip: tuple[int, ...]      # bits toggled when mode occupation flips
    occupation: tuple[int, ...]  # bits whose parity equals the occupation
    prefix: tuple[int, ...]    # bits whose parity equals sum of lower modes


def _fenwick_update(j: int, n: int) -> int:
    """Fenwick update chain of 0-indexed node j, as a bitmask."""
    mask = 0
    k = j + 1
    while k <= n:
        mask |= 1 << (k - 1)
        k += k & -k
    return mask


def _fenwick_query(j: int, n: int) -> int:
    """Fenwick prefix-parity chain covering modes 0..j, as a bitmask."""
    if j < 0:
        return 0
    mask = 0
    k = j + 1
    while k > 0:
        mask |= 1 << (k - 1)
        k -= k & -k
    return mask


def encoding_sets(encoding: str, n_modes: int) -> EncodingSets:
    if encoding == "jordan_wigner":
        flip = tuple(1 << j for j in range(n_modes))
        occupation = flip
        prefix = tuple((1 << j) - 1 for j in range(n_modes))
    elif encoding == "parity":
        full = (1 << n_modes) - 1
        flip = tuple(full & ~((1 << j) - 1) for j in range(n_modes))
        occupation = tuple(
            (1 << j) | (1 << (j - 1)) if j > 0 else 1 for j in range(n_modes)
        )
        prefix = tuple(1 << (j - 1) if j > 0 else 0 for j in range(n_modes))
    elif encoding == "bravyi_kitaev":
        flip = tuple(_fenwick_update(j, n_modes) for j in range(n_modes))
        occupation = tuple(
            _fenwick_query(j, n_modes) ^ _fenwick_query(j - 1, n_modes)
            for j in range(n_modes)
        )
        prefix = tuple(_fenwick_query(j - 1, n_modes) for j in range(n_modes))
    else:
        raise UnsupportedError(
            f"unknown encoding '{encoding}'; available: {', '.join(ENCODINGS)}"
        )
    return EncodingSets(n_modes, flip, occupation, prefix)


# ---------------------------------------------------------------------------
# Ladder operators as Pauli sums
# ---------------------------------------------------------------------------

PauliSum = dict[tuple[int, int], complex]


def _canonical_term(x: int, z: int, coeff: complex) -> tuple[tuple[int, int], complex]:
    # X^x Z^z = (-i)^{|x&z|} x canonical letter string.
    return (x, z), coeff * (-1j) ** _popcount(x & z)


def encode_ladder(
    mode: int, dagger: bool, sets: EncodingSets
) -> PauliSum:
    """Creation/annihilation operator of one mode as a two-term Pauli sum."""
    x = sets.flip[mode]
    z_plain = sets.prefix[mode]
    z_occ = sets.occupation[mode] ^ sets.prefix[mode]
    sign = 1.0 if dagger else -1.0
    terms: PauliSum = {}
    for z, weight in ((z_plain, 0.5), (z_occ, 0.5 * sign)):
        key, value = _canonical_term(x, z, weight)
        terms[key] = terms.get(key, 0.0) + value
    return terms


def _multiply_sums(a: PauliSum, b: PauliSum) -> PauliSum:
    out: PauliSum = {}
    for (x1, z1), c1 in a.items():
        for (x2, z2), c2 in b.items():
            power, x3, z3 = _mul_masks(x1, z1, x2, z2)
            key = (x3, z3)
            out[key] = out.get(key, 0.0) + c1 * c2 * _PHASES[power]
    return out


def _accumulate(target: PauliSum, source: PauliSum, scale: complex) -> None:
    for key, coeff in source.items():
        target[key] = target.get(key, 0.0) + scale * coeff


def map_fermion_to_qubit(
    hamiltonian: FermionHamiltonian, encoding: str = "jordan_wigner"
) -> QubitHamiltonian:
    """Second-quantize and encode the active-space Hamiltonian.

    H = E_core + sum_pq h_pq a+_p a_q + 1/2 sum_pqrs (pq|rs) a+_p a+_r a_s a_q
    with spin expanded over interleaved spin orbitals.  The core energy
    lands on the identity string.
    """
    n_modes = 2 * hamiltonian.n_orbitals
    sets = encoding_sets(encoding, n_modes)
    h = hamiltonian.one_body
    g = hamiltonian.two_body
    n = hamiltonian.n_orbitals

    create = [encode_ladder(m, True, sets) for m in range(n_modes)]
    destroy = [encode_ladder(m, False, sets) for m in range(n_modes)]

    total: PauliSum = {(0, 0): complex(hamiltonian.core_energy)}

    # One-body term: spin-diagonal.
    for p in range(n):
        for q in range(n):
            coeff = h[p, q]
            if coeff == 0.0:
                continue
            for spin in (0, 1):
                product = _multiply_sums(create[2 * p + spin], destroy[2 * q + spin])
                _accumulate(total, product, coeff)

    # Two-body term in chemists' notation.
    pair_cache: dict[tuple[int, int], PauliSum] = {}

    def create_pair(a: int, b: int) -> PauliSum:
        key = (a, b)
        if key not in pair_cache:
            pair_cache[key] = _multiply_sums(create[a], create[b])
        return pair_cache[key]

    destroy_cache: dict[tuple[int, int], PauliSum] = {}

    def destroy_pair(a: int, b: int) -> PauliSum:
        key = (a, b)
        if key not in destroy_cache:
            destroy_cache[key] = _multiply_sums(destroy[a], destroy[b])
        return destroy_cache[key]

    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    coeff = g[p, q, r, s]
                    if coeff == 0.0:
                        continue
                    half = 0.5 * coeff
                    for sigma in (0, 1):
                        for tau in (0, 1):
                            left = create_pair(2 * p + sigma, 2 * r + tau)
                            right = destroy_pair(2 * s + tau, 2 * q + sigma)
                            product = _multiply_sums(left, right)
                            _accumulate(total, product, half)

    terms = []
    for (x, z), coeff in total.items():
        if abs(coeff.imag) > _IMAG_TOL:
            raise ValidationError(
                f"non-Hermitian mapping result (imaginary part {coeff.imag:.3e})"
            )
        terms.append((PauliString(n_modes, x, z), coeff.real))
    return QubitHamiltonian(n_modes, terms)


# ---------------------------------------------------------------------------
# Determinants as encoded computational basis states
# ---------------------------------------------------------------------------


def occupation_vector(determinant: tuple[int, int]) -> int:
    """Interleave (alpha, beta) orbital masks into a spin-orbital mask."""
    alpha, beta = determinant
    occ = 0
    i = 0
    while alpha >> i or beta >> i:
        if (alpha >> i) & 1:
            occ |= 1 << (2 * i)
        if (beta >> i) & 1:
            occ |= 1 << (2 * i + 1)
        i += 1
    return occ


def _reorder_sign(determinant: tuple[int, int]) -> int:
    """Sign from reordering alpha-block/beta-block creation operators into
    ascending interleaved mode order."""
    alpha, beta = determinant
    swaps = 0
    for j in range(beta.bit_length()):
        if (beta >> j) & 1:
            swaps += _popcount(alpha & ~((1 << (j + 1)) - 1))
    return -1 if swaps % 2 else 1


def encoded_index(determinant: tuple[int, int], sets: EncodingSets) -> int:
    """Computational-basis index of a determinant under the encoding."""
    occ = occupation_vector(determinant)
    index = 0
    mode = 0
    while occ >> mode:
        if (occ >> mode) & 1:
            index ^= sets.flip[mode]
        mode += 1
    return index


def encoded_amplitudes(
    wavefunction: Wavefunction, encoding: str = "jordan_wigner"
) -> dict[int, float]:
    """Map a determinant expansion onto encoded basis-state amplitudes."""
    n_modes = 2 * wavefunction.n_orbitals
    sets = encoding_sets(encoding, n_modes)
    amplitudes: dict[int, float] = {}
    for det, coeff in zip(wavefunction.determinants, wavefunction.coefficients):
        index = encoded_index(det, sets)
        amplitudes[index] = amplitudes.get(index, 0.0) + _reorder_sign(det) * float(coeff)
    return amplitudes
