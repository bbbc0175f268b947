/**
 * JSON document shapes exchanged with the pipeline CLI.
 *
 * Every document carries a `kind` / `version` envelope; these interfaces
 * mirror the formats documented by the core package.
 */

export interface Envelope {
  kind: string;
  version: number;
}

export interface StructureDocument extends Envelope {
  kind: "structure";
  symbols: string[];
  coordinates_bohr: number[][];
}

export interface BasisSetDocument extends Envelope {
  kind: "basis_set";
  name: string;
  structure: StructureDocument;
}

export interface OrbitalsDocument extends Envelope {
  kind: "orbitals";
  basis: BasisSetDocument;
  coefficients: number[][];
  energies: number[];
  occupations: number[];
  core: number[];
  active: number[];
  virtual: number[];
  n_active_alpha: number;
  n_active_beta: number;
}

export interface WavefunctionDocument extends Envelope {
  kind: "wavefunction";
  n_orbitals: number;
  determinants: [number, number][];
  coefficients: number[];
  orbitals: OrbitalsDocument | null;
}

export interface FermionHamiltonianDocument extends Envelope {
  kind: "fermion_hamiltonian";
  n_orbitals: number;
  core_energy: number;
  one_body: number[][];
  two_body: number[];
  orbitals: OrbitalsDocument | null;
}

export interface QubitHamiltonianDocument extends Envelope {
  kind: "qubit_hamiltonian";
  n_qubits: number;
  terms: [string, number][];
}

export interface GateRecord {
  gate: string;
  target: number;
  control?: number;
  angle?: number;
}

export interface CircuitDocument extends Envelope {
  kind: "circuit";
  n_qubits: number;
  gates: GateRecord[];
  measured: number[];
}

export interface CountsDocument extends Envelope {
  kind: "counts";
  counts: Record<string, number>;
  shots: number;
  seed: number;
}

export interface RotationSequenceDocument extends Envelope {
  kind: "pauli_rotation_sequence";
  n_qubits: number;
  rotations: [string, number][];
  global_phase: number;
  time: number;
  steps: number;
}

export interface PhaseResultDocument extends Envelope {
  kind: "phase_result";
  bits: string;
  phase: number;
  raw_energy: number;
  evolution_time: number;
  histogram: unknown;
  shots: number;
  seed: number;
  settings: Record<string, unknown>;
}

export interface EstimationResultDocument extends Envelope {
  kind: "estimation_result";
  energy: number;
  variance: number;
  classical_offset: number;
  group_statistics: Array<Record<string, unknown>>;
  seed: number;
  settings: Record<string, unknown>;
}

export type ScalarSettings = Record<string, boolean | number | string>;

export function expectKind<T extends Envelope>(
  payload: unknown,
  kind: T["kind"],
): T {
  if (
    typeof payload !== "object" ||
    payload === null ||
    (payload as Envelope).kind !== kind
  ) {
    const found =
      typeof payload === "object" && payload !== null
        ? (payload as Envelope).kind
        : typeof payload;
    throw new Error(`expected a '${kind}' document, received '${found}'`);
  }
  return payload as T;
}
