"""Circuit intermediate representation, dense simulator and shot sampler.

Qubit 0 is the least significant bit of a basis-state index.  Sampling
uses the counter-based Philox generator so a fixed seed reproduces counts
across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .data import QubitHamiltonian, _envelope, register_kind
from .errors import SchemaError, ValidationError

MAX_QUBITS = 24

_SINGLE_QUBIT_GATES = ("X", "Y", "Z", "H", "S", "Sdg", "RX", "RY", "RZ", "Phase")
_CONTROLLED_GATES = ("CX", "CZ", "CRZ", "CPhase")
_PARAMETRIC_GATES = ("RX", "RY", "RZ", "Phase", "CRZ", "CPhase")
GATE_KINDS = _SINGLE_QUBIT_GATES + _CONTROLLED_GATES


@dataclass(frozen=True)
class Gate:
    """One gate application: kind, target, optional control and angle."""

    kind: str
    target: int
    control: int | None = None
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate kind '{self.kind}'")
        if self.kind in _CONTROLLED_GATES:
            if self.control is None:
                raise ValidationError(f"{self.kind} requires a control qubit")
            if self.control == self.target:
                raise ValidationError("control and target qubits must differ")
        elif self.control is not None:
            raise ValidationError(f"{self.kind} does not take a control qubit")
        if self.kind in _PARAMETRIC_GATES:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValidationError(f"{self.kind} requires a finite angle")
        elif self.angle is not None:
            raise ValidationError(f"{self.kind} does not take an angle")


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate program on a fixed register, plus measured qubits."""

    n_qubits: int
    gates: tuple[Gate, ...]
    measured: tuple[int, ...]

    def __init__(self, n_qubits: int, gates: Iterable[Gate] = (), measured: Sequence[int] = ()):
        n = int(n_qubits)
        gates = tuple(gates)
        measured = tuple(int(q) for q in measured)
        if n < 1:
            raise ValidationError("a circuit needs at least one qubit")
        for gate in gates:
            if not 0 <= gate.target < n:
                raise ValidationError(f"gate target {gate.target} out of range")
            if gate.control is not None and not 0 <= gate.control < n:
                raise ValidationError(f"gate control {gate.control} out of range")
        if len(set(measured)) != len(measured):
            raise ValidationError("measured qubits must be unique")
        for q in measured:
            if not 0 <= q < n:
                raise ValidationError(f"measured qubit {q} out of range")
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "measured", measured)

    @property
    def n_gates(self) -> int:
        return len(self.gates)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and self.gates == other.gates
            and self.measured == other.measured
        )

    def __hash__(self):
        return hash((self.n_qubits, self.gates, self.measured))

    def to_payload(self) -> dict:
        records = []
        for gate in self.gates:
            record = {"gate": gate.kind, "target": gate.target}
            if gate.control is not None:
                record["control"] = gate.control
            if gate.angle is not None:
                record["angle"] = gate.angle
            records.append(record)
        return _envelope(
            "circuit",
            n_qubits=self.n_qubits,
            gates=records,
            measured=list(self.measured),
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "Circuit":
        try:
            gates = [
                Gate(
                    record["gate"],
                    record["target"],
                    record.get("control"),
                    record.get("angle"),
                )
                for record in payload["gates"]
            ]
            return cls(payload["n_qubits"], gates, payload["measured"])
        except KeyError as exc:
            raise SchemaError(f"circuit document missing field {exc}") from exc


@dataclass(frozen=True, eq=False)
class Counts:
    """Measured bitstring histogram from one sampling run."""

    counts: dict[str, int]
    shots: int
    seed: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValidationError("counts do not sum to the shot total")

    def modal_bitstring(self) -> str:
        """Most frequent outcome; ties go to the smaller bitstring."""
        return min(self.counts, key=lambda key: (-self.counts[key], key))

    def __eq__(self, other):
        if not isinstance(other, Counts):
            return NotImplemented
        return (
            self.counts == other.counts
            and self.shots == other.shots
            and self.seed == other.seed
        )

    def to_payload(self) -> dict:
        return _envelope("counts", counts=dict(self.counts), shots=self.shots, seed=self.seed)

    @classmethod
    def from_payload(cls, payload: dict) -> "Counts":
        try:
            return cls(dict(payload["counts"]), payload["shots"], payload["seed"])
        except KeyError as exc:
            raise SchemaError(f"counts document missing field {exc}") from exc


register_kind("circuit", Circuit.from_payload)
register_kind("counts", Counts.from_payload)


# ---------------------------------------------------------------------------
# Dense state-vector simulation
# ---------------------------------------------------------------------------


def _gate_matrix(gate: Gate) -> np.ndarray:
    kind = gate.kind
    theta = gate.angle
    if kind in ("X", "CX"):
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "Y":
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if kind in ("Z", "CZ"):
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if kind == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
    if kind == "S":
        return np.array([[1, 0], [0, 1j]], dtype=complex)
    if kind == "Sdg":
        return np.array([[1, 0], [0, -1j]], dtype=complex)
    if kind == "RX":
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "RY":
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind in ("RZ", "CRZ"):
        return np.array(
            [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex
        )
    if kind in ("Phase", "CPhase"):
        return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)
    raise ValidationError(f"unknown gate kind '{kind}'")


def simulate(circuit: Circuit) -> np.ndarray:
    """Exact state vector after applying the circuit to |0...0>."""
    n = circuit.n_qubits
    if n > MAX_QUBITS:
        raise ValidationError(f"simulator supports at most {MAX_QUBITS} qubits")
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0
    psi = state.reshape([2] * n)
    for gate in circuit.gates:
        matrix = _gate_matrix(gate)
        target_axis = n - 1 - gate.target
        if gate.control is None:
            moved = np.moveaxis(psi, target_axis, 0)
            moved[:] = np.einsum("ab,b...->a...", matrix, moved)
        else:
            control_axis = n - 1 - gate.control
            moved = np.moveaxis(psi, (control_axis, target_axis), (0, 1))
            moved[1] = np.einsum("ab,b...->a...", matrix, moved[1])
    return state


def measurement_probabilities(circuit: Circuit) -> np.ndarray:
    """Marginal distribution over the measured qubits, in declared order.

    The first declared qubit is the most significant bit of the outcome
    index (leftmost character of the bitstring keys).
    """
    if not circuit.measured:
        raise ValidationError("circuit declares no measured qubits")
    n = circuit.n_qubits
    probabilities = np.abs(simulate(circuit)) ** 2
    grid = probabilities.reshape([2] * n)
    kept_axes = [n - 1 - q for q in circuit.measured]
    other_axes = [axis for axis in range(n) if axis not in kept_axes]
    marginal = grid.transpose(kept_axes + other_axes).reshape(
        2 ** len(kept_axes), -1
    ).sum(axis=1)
    return marginal / marginal.sum()


def sample(circuit: Circuit, shots: int, seed: int = 0) -> Counts:
    """Draw i.i.d. measurement outcomes with a seeded Philox generator."""
    shots = int(shots)
    if shots < 1:
        raise ValidationError("shots must be at least 1")
    marginal = measurement_probabilities(circuit)
    rng = np.random.Generator(np.random.Philox(int(seed)))
    outcomes = rng.choice(len(marginal), size=shots, p=marginal)
    width = len(circuit.measured)
    values, tallies = np.unique(outcomes, return_counts=True)
    counts = {format(int(v), f"0{width}b"): int(c) for v, c in zip(values, tallies)}
    return Counts(counts, shots, int(seed))


def apply_pauli(state: np.ndarray, pauli) -> np.ndarray:
    """Pauli-string action on a dense state vector."""
    n_amplitudes = len(state)
    x, z = pauli.x_bits, pauli.z_bits
    indices = np.arange(n_amplitudes, dtype=np.int64)
    signs = 1.0 - 2.0 * (np.bitwise_count(indices & z) & 1)
    phase = 1j ** (bin(x & z).count("1") % 4)
    out = np.empty_like(state)
    out[indices ^ x] = phase * signs * state
    return out


def expectation(state: np.ndarray, hamiltonian: QubitHamiltonian) -> float:
    """Exact <psi|H|psi> via per-term Pauli action."""
    if len(state) != 2**hamiltonian.n_qubits:
        raise ValidationError("state width does not match Hamiltonian width")
    value = 0.0 + 0.0j
    indices = np.arange(len(state), dtype=np.int64)
    for pauli, coeff in hamiltonian.terms:
        x, z = pauli.x_bits, pauli.z_bits
        signs = 1.0 - 2.0 * (np.bitwise_count(indices & z) & 1)
        phase = 1j ** (bin(x & z).count("1") % 4)
        value += coeff * phase * np.sum(np.conj(state[indices ^ x]) * signs * state)
    return float(value.real)


def dense_state(amplitudes: dict[int, float], n_qubits: int) -> np.ndarray:
    """Dense state vector from a sparse index -> amplitude map."""
    state = np.zeros(2**n_qubits, dtype=complex)
    for index, amplitude in amplitudes.items():
        state[index] = amplitude
    norm = np.linalg.norm(state)
    if norm == 0.0:
        raise ValidationError("cannot build a state from all-zero amplitudes")
    return state / norm
