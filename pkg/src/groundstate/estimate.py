"""Shot-based observable estimation with qubit-wise commuting grouping.

Terms sharing per-qubit measurement bases are batched into one circuit;
per-shot the summed random variable over a group captures within-group
covariance.  A classical prefilter can move near-constant terms into an
exact offset computed from a reference state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, Gate, measurement_probabilities, dense_state
from .data import (
    PauliString,
    QubitHamiltonian,
    Wavefunction,
    _envelope,
    register_kind,
)
from .errors import SchemaError, ValidationError
from .qubitmap import encoded_amplitudes, qubitwise_commute


@dataclass(frozen=True)
class MeasurementGroup:
    """Indices of mutually qubit-wise-commuting terms plus their basis."""

    term_indices: tuple[int, ...]
    basis: PauliString

    def __post_init__(self):
        object.__setattr__(self, "term_indices", tuple(self.term_indices))


def group_qubitwise_commuting(
    hamiltonian: QubitHamiltonian,
) -> list[MeasurementGroup]:
    """Greedy first-fit grouping over terms sorted by |coefficient|.

    Ties sort lexicographically by letter string; the identity term is
    excluded (it is a classical constant).  Every non-identity term lands
    in exactly one group.
    """
    order = sorted(
        range(hamiltonian.n_terms),
        key=lambda i: (
            -abs(hamiltonian.terms[i][1]),
            hamiltonian.terms[i][0].to_letters(),
        ),
    )
    groups: list[list[int]] = []
    bases: list[PauliString] = []
    n = hamiltonian.n_qubits
    for index in order:
        pauli, _ = hamiltonian.terms[index]
        if pauli.is_identity:
            continue
        placed = False
        for g, basis in enumerate(bases):
            if qubitwise_commute(pauli, basis):
                groups[g].append(index)
                bases[g] = PauliString(
                    n, basis.x_bits | pauli.x_bits, basis.z_bits | pauli.z_bits
                )
                placed = True
                break
        if not placed:
            groups.append([index])
            bases.append(pauli)
    return [
        MeasurementGroup(tuple(indices), basis)
        for indices, basis in zip(groups, bases)
    ]


def _term_expectation(state: np.ndarray, pauli: PauliString) -> float:
    indices = np.arange(len(state), dtype=np.int64)
    signs = 1.0 - 2.0 * (np.bitwise_count(indices & pauli.z_bits) & 1)
    phase = 1j ** (bin(pauli.x_bits & pauli.z_bits).count("1") % 4)
    value = phase * np.sum(np.conj(state[indices ^ pauli.x_bits]) * signs * state)
    return float(value.real)


def classical_prefilter(
    hamiltonian: QubitHamiltonian,
    reference: Wavefunction,
    threshold: float = 0.0,
    encoding: str = "jordan_wigner",
) -> tuple[QubitHamiltonian, float]:
    """Move near-constant terms into an exact reference-state offset.

    The identity term is always routed to the offset; any other term with
    |coeff * <P>_ref| below ``threshold`` is replaced by its exact
    reference-state contribution.
    """
    if threshold < 0.0:
        raise ValidationError("prefilter threshold must be non-negative")
    if 2 * reference.n_orbitals != hamiltonian.n_qubits:
        raise ValidationError(
            "reference state does not match the Hamiltonian register under "
            f"the '{encoding}' encoding"
        )
    state = dense_state(
        encoded_amplitudes(reference, encoding), hamiltonian.n_qubits
    )
    offset = 0.0
    kept = []
    for pauli, coeff in hamiltonian.terms:
        if pauli.is_identity:
            offset += coeff
            continue
        contribution = coeff * _term_expectation(state, pauli)
        if abs(contribution) < threshold:
            offset += contribution
        else:
            kept.append((pauli, coeff))
    return QubitHamiltonian(hamiltonian.n_qubits, kept), offset


def classical_prefilter_identity(
    hamiltonian: QubitHamiltonian,
) -> tuple[QubitHamiltonian, float]:
    """Reference-free prefilter: only the identity term moves to the offset."""
    kept = [(p, c) for p, c in hamiltonian.terms if not p.is_identity]
    return (
        QubitHamiltonian(hamiltonian.n_qubits, kept),
        hamiltonian.identity_coefficient(),
    )


@dataclass(frozen=True, eq=False)
class EstimationResult:
    """Aggregated energy estimate with per-group statistics."""

    energy: float
    variance: float  # variance of the mean
    classical_offset: float
    group_statistics: tuple[dict, ...]
    seed: int
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variance < 0.0:
            raise ValidationError("variance must be non-negative")
        total = self.classical_offset + sum(g["mean"] for g in self.group_statistics)
        if abs(total - self.energy) > 1e-9:
            raise ValidationError("energy does not equal offset plus group means")
        object.__setattr__(self, "group_statistics", tuple(self.group_statistics))

    def __eq__(self, other):
        if not isinstance(other, EstimationResult):
            return NotImplemented
        return (
            self.energy == other.energy
            and self.variance == other.variance
            and self.classical_offset == other.classical_offset
            and self.group_statistics == other.group_statistics
            and self.seed == other.seed
            and self.settings == other.settings
        )

    def to_payload(self) -> dict:
        return _envelope(
            "estimation_result",
            energy=self.energy,
            variance=self.variance,
            classical_offset=self.classical_offset,
            group_statistics=[dict(g) for g in self.group_statistics],
            seed=self.seed,
            settings=dict(self.settings),
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "EstimationResult":
        try:
            return cls(
                payload["energy"],
                payload["variance"],
                payload["classical_offset"],
                tuple(payload["group_statistics"]),
                payload["seed"],
                payload["settings"],
            )
        except KeyError as exc:
            raise SchemaError(f"estimation_result document missing field {exc}") from exc


register_kind("estimation_result", EstimationResult.from_payload)


def _measurement_circuit(
    state_preparation: Circuit, basis: PauliString
) -> Circuit:
    gates = list(state_preparation.gates)
    n = state_preparation.n_qubits
    for q in range(n):
        letter = basis.letter(q)
        if letter == "X":
            gates.append(Gate("H", q))
        elif letter == "Y":
            gates.append(Gate("Sdg", q))
            gates.append(Gate("H", q))
    return Circuit(n, gates, measured=list(range(n)))


def _group_values(
    group: MeasurementGroup, hamiltonian: QubitHamiltonian, n_qubits: int
) -> tuple[list[int], list[float]]:
    supports = [hamiltonian.terms[i][0].support for i in group.term_indices]
    coeffs = [hamiltonian.terms[i][1] for i in group.term_indices]
    return supports, coeffs


def _outcome_value(mask: int, supports, coeffs) -> float:
    value = 0.0
    for support, coeff in zip(supports, coeffs):
        parity = bin(mask & support).count("1") & 1
        value += -coeff if parity else coeff
    return value


def _group_seed(seed: int, index: int) -> int:
    state = np.random.SeedSequence([int(seed), int(index)]).generate_state(2, np.uint32)
    return int(state[0]) ^ (int(state[1]) << 32)


def estimate_energy(
    state_preparation: Circuit,
    groups: list[MeasurementGroup],
    hamiltonian: QubitHamiltonian,
    shots_per_group: int | None,
    seed: int = 0,
    executor=None,
    classical_offset: float = 0.0,
    settings_snapshot: dict | None = None,
) -> EstimationResult:
    """Sample every group and aggregate means and variances.

    ``shots_per_group=None`` runs the infinite-shot limit: group means are
    computed from exact measurement marginals and the variance of the
    mean is zero.
    """
    if state_preparation.n_qubits != hamiltonian.n_qubits:
        raise ValidationError("state preparation width does not match Hamiltonian")
    exact = shots_per_group is None
    if not exact and int(shots_per_group) < 2:
        raise ValidationError("sample variance needs at least 2 shots per group")

    n = hamiltonian.n_qubits
    statistics = []
    energy = classical_offset
    variance_of_mean = 0.0
    for g_index, group in enumerate(groups):
        circuit = _measurement_circuit(state_preparation, group.basis)
        supports, coeffs = _group_values(group, hamiltonian, n)
        if exact:
            probabilities = measurement_probabilities(circuit)
            values = np.array(
                [
                    _outcome_value(_index_to_mask(i, n), supports, coeffs)
                    for i in range(len(probabilities))
                ]
            )
            mean = float(np.dot(probabilities, values))
            sample_variance = float(
                np.dot(probabilities, (values - mean) ** 2)
            )
            shots = 0
        else:
            group_seed = _group_seed(seed, g_index)
            counts = (executor.run if executor is not None else _default_sampler)(
                circuit, int(shots_per_group), group_seed
            )
            shots = int(shots_per_group)
            total = 0.0
            total_sq = 0.0
            for key, count in counts.counts.items():
                mask = _key_to_mask(key)
                value = _outcome_value(mask, supports, coeffs)
                total += count * value
                total_sq += count * value * value
            mean = total / shots
            sample_variance = max(0.0, (total_sq - shots * mean * mean) / (shots - 1))
            variance_of_mean += sample_variance / shots
        energy += mean
        statistics.append(
            {
                "term_indices": list(group.term_indices),
                "basis": group.basis.to_letters(),
                "shots": shots,
                "mean": mean,
                "variance": sample_variance,
            }
        )
    return EstimationResult(
        energy,
        variance_of_mean,
        classical_offset,
        tuple(statistics),
        int(seed),
        settings_snapshot or {},
    )


def _default_sampler(circuit: Circuit, shots: int, seed: int):
    from .circuit import sample

    return sample(circuit, shots, seed)


def _index_to_mask(index: int, n_qubits: int) -> int:
    """Marginal-distribution index (qubit 0 most significant) to qubit mask."""
    mask = 0
    for q in range(n_qubits):
        if (index >> (n_qubits - 1 - q)) & 1:
            mask |= 1 << q
    return mask


def _key_to_mask(key: str) -> int:
    """Counts key (i-th character = measured qubit i) to qubit mask."""
    mask = 0
    for position, char in enumerate(key):
        if char == "1":
            mask |= 1 << position
    return mask
