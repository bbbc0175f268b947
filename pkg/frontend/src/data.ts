/**
 * Value wrappers over the pipeline's JSON documents.
 *
 * Wrappers hold the serialized payload, expose the accessors workflow
 * scripts need, and marshal through the CLI untouched, so a round trip
 * through any algorithm preserves numbers bit-exactly.
 */

import { readFileSync, writeFileSync } from "node:fs";

import {
  CircuitDocument,
  CountsDocument,
  EstimationResultDocument,
  FermionHamiltonianDocument,
  OrbitalsDocument,
  PhaseResultDocument,
  QubitHamiltonianDocument,
  RotationSequenceDocument,
  StructureDocument,
  WavefunctionDocument,
  expectKind,
} from "./documents.js";

const SCHEMA_VERSION = 1;

function popcount(mask: number): number {
  let count = 0;
  let value = mask;
  while (value) {
    value &= value - 1;
    count += 1;
  }
  return count;
}

export class Structure {
  constructor(public readonly document: StructureDocument) {}

  /** Coordinates are Bohr; the symbol list names each atom in order. */
  static create(coordinates: number[][], symbols: string[]): Structure {
    if (coordinates.length !== symbols.length) {
      throw new Error(
        `coordinate count ${coordinates.length} does not match ` +
          `${symbols.length} symbols`,
      );
    }
    if (coordinates.length === 0) {
      throw new Error("a structure needs at least one atom");
    }
    for (const row of coordinates) {
      if (row.length !== 3 || row.some((x) => !Number.isFinite(x))) {
        throw new Error("coordinates must be finite 3-vectors");
      }
    }
    return new Structure({
      kind: "structure",
      version: SCHEMA_VERSION,
      symbols: [...symbols],
      coordinates_bohr: coordinates.map((row) => [...row]),
    });
  }

  static fromJson(text: string): Structure {
    return new Structure(expectKind(JSON.parse(text), "structure"));
  }

  get symbols(): string[] {
    return this.document.symbols;
  }

  get coordinates(): number[][] {
    return this.document.coordinates_bohr;
  }

  toJson(): string {
    return JSON.stringify(this.document);
  }
}

export class Orbitals {
  constructor(public readonly document: OrbitalsDocument) {}

  get numMolecularOrbitals(): number {
    return this.document.coefficients[0]?.length ?? 0;
  }

  get numElectrons(): number {
    return Math.round(
      this.document.occupations.reduce((sum, occ) => sum + occ, 0),
    );
  }

  get structure(): Structure {
    return new Structure(this.document.basis.structure);
  }

  get active(): number[] {
    return this.document.active;
  }

  get core(): number[] {
    return this.document.core;
  }
}

export class Wavefunction {
  constructor(public readonly document: WavefunctionDocument) {}

  static fromJson(text: string): Wavefunction {
    return new Wavefunction(expectKind(JSON.parse(text), "wavefunction"));
  }

  get determinants(): [number, number][] {
    return this.document.determinants;
  }

  get coefficients(): number[] {
    return this.document.coefficients;
  }

  getOrbitals(): Orbitals {
    if (!this.document.orbitals) {
      throw new Error("wavefunction carries no orbital reference");
    }
    return new Orbitals(this.document.orbitals);
  }

  getActiveNumElectrons(): [number, number] {
    const [alpha, beta] = this.document.determinants[0];
    return [popcount(alpha), popcount(beta)];
  }

  /**
   * Keep the largest-|coefficient| determinants and renormalize, with the
   * same deterministic tie-break (ascending masks) as the core package.
   */
  truncate(maxDeterminants: number): Wavefunction {
    if (maxDeterminants < 1) {
      throw new Error("maxDeterminants must be at least 1");
    }
    const order = this.document.determinants
      .map((det, index) => ({ det, index }))
      .sort((a, b) => {
        const weight =
          Math.abs(this.document.coefficients[b.index]) -
          Math.abs(this.document.coefficients[a.index]);
        if (weight !== 0) {
          return weight;
        }
        return a.det[0] - b.det[0] || a.det[1] - b.det[1];
      })
      .slice(0, maxDeterminants);
    const coefficients = order.map(
      ({ index }) => this.document.coefficients[index],
    );
    const norm = Math.sqrt(coefficients.reduce((sum, c) => sum + c * c, 0));
    return new Wavefunction({
      ...this.document,
      determinants: order.map(({ det }) => [det[0], det[1]]),
      coefficients: coefficients.map((c) => c / norm),
    });
  }

  toJson(): string {
    return JSON.stringify(this.document);
  }
}

export class FermionHamiltonian {
  constructor(public readonly document: FermionHamiltonianDocument) {}

  get coreEnergy(): number {
    return this.document.core_energy;
  }

  get numOrbitals(): number {
    return this.document.n_orbitals;
  }

  getOrbitals(): Orbitals {
    if (!this.document.orbitals) {
      throw new Error("Hamiltonian carries no orbital reference");
    }
    return new Orbitals(this.document.orbitals);
  }
}

export class QubitHamiltonian {
  constructor(public readonly document: QubitHamiltonianDocument) {}

  get numQubits(): number {
    return this.document.n_qubits;
  }

  get termCount(): number {
    return this.document.terms.length;
  }

  get terms(): [string, number][] {
    return this.document.terms;
  }

  coefficient(letters: string): number {
    const entry = this.document.terms.find(([term]) => term === letters);
    return entry ? entry[1] : 0.0;
  }
}

export class Circuit {
  constructor(public readonly document: CircuitDocument) {}

  get numQubits(): number {
    return this.document.n_qubits;
  }

  get gateCount(): number {
    return this.document.gates.length;
  }
}

export class Counts {
  constructor(public readonly document: CountsDocument) {}

  get counts(): Record<string, number> {
    return this.document.counts;
  }

  get shots(): number {
    return this.document.shots;
  }
}

export class PauliRotationSequence {
  constructor(public readonly document: RotationSequenceDocument) {}

  get rotationCount(): number {
    return this.document.rotations.length;
  }
}

export class PhaseResult {
  constructor(public readonly document: PhaseResultDocument) {}

  get bits(): string {
    return this.document.bits;
  }

  get phase(): number {
    return this.document.phase;
  }

  get rawEnergy(): number {
    return this.document.raw_energy;
  }

  get histogram(): unknown {
    return this.document.histogram;
  }

  get seed(): number {
    return this.document.seed;
  }
}

export class EstimationResult {
  constructor(public readonly document: EstimationResultDocument) {}

  get energy(): number {
    return this.document.energy;
  }

  get variance(): number {
    return this.document.variance;
  }

  get classicalOffset(): number {
    return this.document.classical_offset;
  }
}

export function loadDocument(path: string): unknown {
  return JSON.parse(readFileSync(path, "utf-8"));
}

export function saveDocument(path: string, wrapper: { document: unknown }): void {
  writeFileSync(path, JSON.stringify(wrapper.document) + "\n");
}

/** Wrap a raw payload in the matching class, or return scalars as-is. */
export function wrapOutput(payload: unknown): unknown {
  if (typeof payload !== "object" || payload === null) {
    return payload;
  }
  const kind = (payload as { kind?: string }).kind;
  switch (kind) {
    case "structure":
      return new Structure(payload as StructureDocument);
    case "orbitals":
      return new Orbitals(payload as OrbitalsDocument);
    case "wavefunction":
      return new Wavefunction(payload as WavefunctionDocument);
    case "fermion_hamiltonian":
      return new FermionHamiltonian(payload as FermionHamiltonianDocument);
    case "qubit_hamiltonian":
      return new QubitHamiltonian(payload as QubitHamiltonianDocument);
    case "circuit":
      return new Circuit(payload as CircuitDocument);
    case "counts":
      return new Counts(payload as CountsDocument);
    case "pauli_rotation_sequence":
      return new PauliRotationSequence(payload as RotationSequenceDocument);
    case "phase_result":
      return new PhaseResult(payload as PhaseResultDocument);
    case "estimation_result":
      return new EstimationResult(payload as EstimationResultDocument);
    default:
      return payload;
  }
}
