"""Trotterized time evolution and quantum phase estimation.

The evolution builder expresses exp(-iHt) as an ordered product of Pauli
rotations (identity folded into a global phase); the circuit mapper
compiles a controlled power of that product; the two phase-estimation
readouts share the convention U = exp(-iHt), so a phase fraction maps to
energy as E = -2*pi*wrap(phase)/t with wrap into (-1/2, 1/2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, Gate
from .data import PauliString, QubitHamiltonian, _envelope, register_kind
from .errors import SchemaError, ValidationError

MAX_PHASE_BITS = 12


@dataclass(frozen=True, eq=False)
class PauliRotationSequence:
    """Ordered Pauli rotations: prod_j exp(-i theta_j P_j / 2) * e^{i phase}.

    Rotations are listed in application (time) order and already expanded
    over the Trotter steps; ``steps`` and ``time`` are metadata.
    """

    n_qubits: int
    rotations: tuple[tuple[PauliString, float], ...]
    global_phase: float
    time: float
    steps: int

    def __init__(self, n_qubits, rotations, global_phase=0.0, time=0.0, steps=1):
        rotations = tuple((p, float(a)) for p, a in rotations)
        for pauli, angle in rotations:
            if pauli.n_qubits != n_qubits:
                raise ValidationError("rotation width does not match register")
            if not math.isfinite(angle):
                raise ValidationError("rotation angles must be finite")
        object.__setattr__(self, "n_qubits", int(n_qubits))
        object.__setattr__(self, "rotations", rotations)
        object.__setattr__(self, "global_phase", float(global_phase))
        object.__setattr__(self, "time", float(time))
        object.__setattr__(self, "steps", int(steps))

    def __eq__(self, other):
        if not isinstance(other, PauliRotationSequence):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and self.rotations == other.rotations
            and self.global_phase == other.global_phase
            and self.time == other.time
            and self.steps == other.steps
        )

    def to_payload(self) -> dict:
        return _envelope(
            "pauli_rotation_sequence",
            n_qubits=self.n_qubits,
            rotations=[[p.to_letters(), a] for p, a in self.rotations],
            global_phase=self.global_phase,
            time=self.time,
            steps=self.steps,
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "PauliRotationSequence":
        try:
            rotations = [
                (PauliString.from_letters(letters), angle)
                for letters, angle in payload["rotations"]
            ]
            return cls(
                payload["n_qubits"],
                rotations,
                payload["global_phase"],
                payload["time"],
                payload["steps"],
            )
        except KeyError as exc:
            raise SchemaError(
                f"pauli_rotation_sequence document missing field {exc}"
            ) from exc


def build_trotter(
    hamiltonian: QubitHamiltonian, time: float, steps: int = 1, order: int = 1
) -> PauliRotationSequence:
    """Product-formula approximation of exp(-iHt).

    Order 1 sweeps the non-identity terms (lexicographic letter order) in
    each of ``steps`` repetitions; order 2 runs the symmetrized half-step
    sweep forward then backward.  The identity coefficient becomes the
    exact global phase -c_I * t.
    """
    steps = int(steps)
    if steps < 1:
        raise ValidationError("Trotter steps must be at least 1")
    if order not in (1, 2):
        raise ValidationError("supported product-formula orders are 1 and 2")
    body = [(p, c) for p, c in hamiltonian.terms if not p.is_identity]
    global_phase = -hamiltonian.identity_coefficient() * time
    tau = time / steps
    rotations: list[tuple[PauliString, float]] = []
    for _ in range(steps):
        if order == 1:
            rotations.extend((p, 2.0 * c * tau) for p, c in body)
        else:
            rotations.extend((p, c * tau) for p, c in body)
            rotations.extend((p, c * tau) for p, c in reversed(body))
    return PauliRotationSequence(
        hamiltonian.n_qubits, rotations, global_phase, time, steps
    )


def _controlled_rotation_gates(
    pauli: PauliString, angle: float, control: int
) -> list[Gate]:
    actives = []
    q = 0
    support = pauli.support
    while support >> q:
        if (support >> q) & 1:
            actives.append(q)
        q += 1
    if not actives:
        # exp(-i*angle*I/2) is a pure phase on the controlled branch.
        return [Gate("Phase", control, angle=-angle / 2.0)]
    enter: list[Gate] = []
    for q in actives:
        letter = pauli.letter(q)
        if letter == "X":
            enter.append(Gate("H", q))
        elif letter == "Y":
            enter.append(Gate("Sdg", q))
            enter.append(Gate("H", q))
    ladder = [
        Gate("CX", actives[i + 1], control=actives[i]) for i in range(len(actives) - 1)
    ]
    middle = [Gate("CRZ", actives[-1], control=control, angle=angle)]
    exit_basis: list[Gate] = []
    for q in reversed(actives):
        letter = pauli.letter(q)
        if letter == "X":
            exit_basis.append(Gate("H", q))
        elif letter == "Y":
            exit_basis.append(Gate("H", q))
            exit_basis.append(Gate("S", q))
    return enter + ladder + middle + list(reversed(ladder)) + exit_basis


def controlled_evolution_gates(
    sequence: PauliRotationSequence, power: int, control: int
) -> list[Gate]:
    """Gate list for controlled-U^power with an arbitrary control index."""
    power = int(power)
    if power < 1:
        raise ValidationError("evolution power must be at least 1")
    gates: list[Gate] = []
    for _ in range(power):
        for pauli, angle in sequence.rotations:
            gates.extend(_controlled_rotation_gates(pauli, angle, control))
    total_phase = power * sequence.global_phase
    if total_phase != 0.0:
        gates.append(Gate("Phase", control, angle=total_phase))
    return gates


def map_controlled_evolution(sequence: PauliRotationSequence, power: int) -> Circuit:
    """Controlled-U^power circuit; the control ancilla is the top qubit."""
    control = sequence.n_qubits
    gates = controlled_evolution_gates(sequence, power, control)
    return Circuit(sequence.n_qubits + 1, gates)


def phase_to_energy(phase: float, time: float) -> float:
    """Invert the eigenphase of exp(-iHt) into an energy in Hartree."""
    if time <= 0.0:
        raise ValidationError("evolution time must be positive")
    wrapped = phase if phase <= 0.5 else phase - 1.0
    return -2.0 * math.pi * wrapped / time


@dataclass(frozen=True, eq=False)
class PhaseResult:
    """Phase-estimation outcome: bits, fraction, energy and histograms."""

    bits: str
    phase: float
    raw_energy: float
    evolution_time: float
    histogram: object
    shots: int
    seed: int
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        if any(b not in "01" for b in self.bits):
            raise ValidationError("phase bits must be a 0/1 string")
        expected = int(self.bits, 2) / (1 << len(self.bits)) if self.bits else 0.0
        if abs(expected - self.phase) > 1e-12:
            raise ValidationError("phase fraction does not match its bits")
        if abs(phase_to_energy(self.phase, self.evolution_time) - self.raw_energy) > 1e-9:
            raise ValidationError("raw_energy inconsistent with phase and time")

    def __eq__(self, other):
        if not isinstance(other, PhaseResult):
            return NotImplemented
        return (
            self.bits == other.bits
            and self.phase == other.phase
            and self.raw_energy == other.raw_energy
            and self.evolution_time == other.evolution_time
            and self.histogram == other.histogram
            and self.shots == other.shots
            and self.seed == other.seed
            and self.settings == other.settings
        )

    def to_payload(self) -> dict:
        return _envelope(
            "phase_result",
            bits=self.bits,
            phase=self.phase,
            raw_energy=self.raw_energy,
            evolution_time=self.evolution_time,
            histogram=self.histogram,
            shots=self.shots,
            seed=self.seed,
            settings=dict(self.settings),
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "PhaseResult":
        try:
            return cls(
                payload["bits"],
                payload["phase"],
                payload["raw_energy"],
                payload["evolution_time"],
                payload["histogram"],
                payload["shots"],
                payload["seed"],
                payload["settings"],
            )
        except KeyError as exc:
            raise SchemaError(f"phase_result document missing field {exc}") from exc


register_kind("pauli_rotation_sequence", PauliRotationSequence.from_payload)
register_kind("phase_result", PhaseResult.from_payload)


def _round_seed(seed: int, index: int) -> int:
    """Stable per-round sub-seed derived from the master seed."""
    state = np.random.SeedSequence([int(seed), int(index)]).generate_state(2, np.uint32)
    return int(state[0]) ^ (int(state[1]) << 32)


def _validate_qpe_inputs(state_preparation, hamiltonian, num_bits, shots):
    if not 1 <= int(num_bits) <= MAX_PHASE_BITS:
        raise ValidationError(f"num_bits must lie in [1, {MAX_PHASE_BITS}]")
    if int(shots) < 1:
        raise ValidationError("shots must be at least 1")
    if state_preparation.n_qubits != hamiltonian.n_qubits:
        raise ValidationError("state preparation width does not match Hamiltonian")


def run_standard_qpe(
    state_preparation: Circuit,
    qubit_hamiltonian: QubitHamiltonian,
    circuit_executor,
    evolution_builder,
    circuit_mapper,
    num_bits: int = 8,
    evolution_time: float = 0.5,
    shots: int = 100,
    seed: int = 0,
    settings_snapshot: dict | None = None,
) -> PhaseResult:
    """Textbook QPE: one ancilla per phase bit, inverse QFT readout."""
    _validate_qpe_inputs(state_preparation, qubit_hamiltonian, num_bits, shots)
    num_bits = int(num_bits)
    n_sys = qubit_hamiltonian.n_qubits
    sequence = evolution_builder.run(qubit_hamiltonian, evolution_time)

    gates: list[Gate] = list(state_preparation.gates)
    for k in range(num_bits):
        gates.append(Gate("H", n_sys + k))
    # Ancilla k accumulates phase 2^{m-1-k} * phi, so it ends up holding the
    # bit of weight 2^k in the phase register (ancilla 0 = least significant).
    for k in range(num_bits):
        mapped = circuit_mapper.run(sequence, 2 ** (num_bits - 1 - k))
        for gate in mapped.gates:
            target = n_sys + k if gate.target == n_sys else gate.target
            control = gate.control
            if control == n_sys:
                control = n_sys + k
            gates.append(Gate(gate.kind, target, control=control, angle=gate.angle))
    # Inverse QFT without terminal swaps, processed from the bottom bit up.
    for k in range(num_bits):
        for j in range(k):
            gates.append(
                Gate(
                    "CPhase",
                    n_sys + k,
                    control=n_sys + j,
                    angle=-2.0 * math.pi / 2 ** (k - j + 1),
                )
            )
        gates.append(Gate("H", n_sys + k))
    measured = [n_sys + k for k in range(num_bits - 1, -1, -1)]
    circuit = Circuit(n_sys + num_bits, gates, measured)

    counts = circuit_executor.run(circuit, shots, seed)
    bits = counts.modal_bitstring()
    phase = int(bits, 2) / 2**num_bits
    return PhaseResult(
        bits,
        phase,
        phase_to_energy(phase, evolution_time),
        evolution_time,
        dict(counts.counts),
        int(shots),
        int(seed),
        settings_snapshot or {},
    )


def run_iterative_qpe(
    state_preparation: Circuit,
    qubit_hamiltonian: QubitHamiltonian,
    circuit_executor,
    evolution_builder,
    circuit_mapper,
    num_bits: int = 8,
    evolution_time: float = 0.5,
    shots: int = 51,
    seed: int = 0,
    settings_snapshot: dict | None = None,
) -> PhaseResult:
    """Single-ancilla phase estimation with classical feedback rotations.

    Bits are fixed from least significant to most significant; each round
    runs a fresh circuit whose feedback angle cancels the already-known
    lower bits, and a majority vote over the round's shots fixes the bit.
    """
    _validate_qpe_inputs(state_preparation, qubit_hamiltonian, num_bits, shots)
    num_bits = int(num_bits)
    n_sys = qubit_hamiltonian.n_qubits
    ancilla = n_sys
    sequence = evolution_builder.run(qubit_hamiltonian, evolution_time)

    bits: dict[int, int] = {}
    rounds = []
    for k in range(num_bits, 0, -1):
        feedback = -2.0 * math.pi * sum(
            bits[j] / 2 ** (j - k + 1) for j in range(k + 1, num_bits + 1)
        )
        gates: list[Gate] = list(state_preparation.gates)
        gates.append(Gate("H", ancilla))
        mapped = circuit_mapper.run(sequence, 2 ** (k - 1))
        gates.extend(mapped.gates)
        if feedback != 0.0:
            gates.append(Gate("RZ", ancilla, angle=feedback))
        gates.append(Gate("H", ancilla))
        circuit = Circuit(n_sys + 1, gates, measured=[ancilla])

        round_seed = _round_seed(seed, k)
        counts = circuit_executor.run(circuit, shots, round_seed)
        ones = counts.counts.get("1", 0)
        zeros = counts.counts.get("0", 0)
        bit = 1 if ones > zeros else 0
        bits[k] = bit
        rounds.append(
            {
                "round": k,
                "power": 2 ** (k - 1),
                "counts": dict(counts.counts),
                "bit": bit,
                "seed": round_seed,
            }
        )

    bit_string = "".join(str(bits[k]) for k in range(1, num_bits + 1))
    phase = int(bit_string, 2) / 2**num_bits
    return PhaseResult(
        bit_string,
        phase,
        phase_to_energy(phase, evolution_time),
        evolution_time,
        rounds,
        int(shots),
        int(seed),
        settings_snapshot or {},
    )
