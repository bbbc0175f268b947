/**
 * Factory-style algorithm handles mirroring the pipeline's registry API.
 *
 * `create(kind, name?, settings?)` returns a handle whose `run(...)`
 * executes the named implementation out of process via the CLI bridge;
 * settings lock once the handle has run.  Handles for executor, builder
 * and mapper kinds can be passed as dependencies to phase estimation and
 * the estimator, marshalled as {kind, impl, settings} specifications.
 */

import { invoke } from "./cli.js";
import {
  Circuit,
  Counts,
  EstimationResult,
  FermionHamiltonian,
  Orbitals,
  PauliRotationSequence,
  PhaseResult,
  QubitHamiltonian,
  Structure,
  Wavefunction,
  wrapOutput,
} from "./data.js";
import type { ScalarSettings } from "./documents.js";

export interface ScfOptions {
  charge?: number;
  spin_multiplicity?: number;
  basis_or_guess?: string;
}

export interface PhaseEstimationInputs {
  state_preparation: Circuit;
  qubit_hamiltonian: QubitHamiltonian;
  circuit_executor: AlgorithmHandle;
  evolution_builder: AlgorithmHandle;
  circuit_mapper: AlgorithmHandle;
}

export interface EstimatorInputs {
  state_preparation: Circuit;
  qubit_hamiltonian: QubitHamiltonian;
  circuit_executor?: AlgorithmHandle;
  reference?: Wavefunction;
}

export class AlgorithmHandle {
  private settingsValues: ScalarSettings;
  private settingsLocked = false;

  constructor(
    public readonly kind: string,
    public readonly name: string | undefined,
    settings: ScalarSettings = {},
  ) {
    this.settingsValues = { ...settings };
  }

  get locked(): boolean {
    return this.settingsLocked;
  }

  settings(): ScalarSettings {
    return { ...this.settingsValues };
  }

  set(key: string, value: boolean | number | string): void {
    if (this.settingsLocked) {
      throw new Error(
        `settings are locked after execution; cannot write '${key}'`,
      );
    }
    this.settingsValues[key] = value;
  }

  /** Dependency specification consumed by the CLI bridge. */
  toSpec(): { kind: string; impl?: string; settings: ScalarSettings } {
    return { kind: this.kind, impl: this.name, settings: this.settings() };
  }

  run(...parameters: unknown[]): unknown {
    try {
      return this.dispatch(parameters);
    } finally {
      this.settingsLocked = true;
    }
  }

  private invokeKind(
    inputs: unknown[],
    args: Record<string, unknown> = {},
    textInputs: Array<{ text: string; extension: string }> = [],
  ): unknown[] {
    return invoke({
      kind: this.kind,
      impl: this.name,
      settings: this.settingsValues,
      inputs,
      args,
      textInputs,
    }).map(wrapOutput);
  }

  private dispatch(parameters: unknown[]): unknown {
    switch (this.kind) {
      case "scf_solver": {
        const [structure, options] = parameters as [Structure, ScfOptions?];
        const outputs = this.invokeKind([structure.document], {
          charge: options?.charge ?? 0,
          spin_multiplicity: options?.spin_multiplicity ?? 1,
          basis_or_guess: options?.basis_or_guess ?? "sto-3g",
        });
        return [outputs[0] as number, outputs[1] as Wavefunction];
      }
      case "active_space_selector": {
        const [wavefunction] = parameters as [Wavefunction];
        return this.invokeKind([wavefunction.document])[0];
      }
      case "hamiltonian_constructor": {
        const [orbitals] = parameters as [Orbitals];
        return this.invokeKind([orbitals.document])[0];
      }
      case "multi_configuration_calculator": {
        const [hamiltonian, nAlpha, nBeta] = parameters as [
          FermionHamiltonian,
          number,
          number,
        ];
        const outputs = this.invokeKind([hamiltonian.document], {
          n_alpha: nAlpha,
          n_beta: nBeta,
        });
        return [outputs[0] as number, outputs[1] as Wavefunction];
      }
      case "qubit_mapper": {
        const [hamiltonian] = parameters as [FermionHamiltonian];
        return this.invokeKind([hamiltonian.document])[0];
      }
      case "state_prep": {
        const [wavefunction] = parameters as [Wavefunction];
        return this.invokeKind([wavefunction.document])[0];
      }
      case "time_evolution_builder": {
        const [hamiltonian, time] = parameters as [QubitHamiltonian, number];
        return this.invokeKind([hamiltonian.document], { time })[0];
      }
      case "controlled_evolution_circuit_mapper": {
        const [sequence, power] = parameters as [PauliRotationSequence, number];
        return this.invokeKind([sequence.document], { power })[0];
      }
      case "circuit_executor": {
        const [circuit, shots, seed] = parameters as [Circuit, number, number?];
        return this.invokeKind([circuit.document], {
          shots,
          seed: seed ?? 0,
        })[0] as Counts;
      }
      case "phase_estimation": {
        const [inputs] = parameters as [PhaseEstimationInputs];
        return this.invokeKind(
          [inputs.state_preparation.document, inputs.qubit_hamiltonian.document],
          {
            circuit_executor: inputs.circuit_executor.toSpec(),
            evolution_builder: inputs.evolution_builder.toSpec(),
            circuit_mapper: inputs.circuit_mapper.toSpec(),
          },
        )[0] as PhaseResult;
      }
      case "estimator": {
        const [inputs] = parameters as [EstimatorInputs];
        const args: Record<string, unknown> = {};
        if (inputs.circuit_executor) {
          args.circuit_executor = inputs.circuit_executor.toSpec();
        }
        if (inputs.reference) {
          args.reference = inputs.reference.document;
        }
        return this.invokeKind(
          [inputs.state_preparation.document, inputs.qubit_hamiltonian.document],
          args,
        )[0] as EstimationResult;
      }
      default: {
        // Unknown kinds still round-trip documents positionally, so new
        // plugin-registered kinds are reachable without frontend changes.
        const documents = parameters.map((p) =>
          p instanceof Object && "document" in p
            ? (p as { document: unknown }).document
            : p,
        );
        const outputs = this.invokeKind(documents as unknown[]);
        return outputs.length === 1 ? outputs[0] : outputs;
      }
    }
  }
}

export function create(
  kind: string,
  name?: string,
  settings: ScalarSettings = {},
): AlgorithmHandle {
  return new AlgorithmHandle(kind, name, settings);
}
