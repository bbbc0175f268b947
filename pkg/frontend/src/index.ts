/**
 * groundstate-frontend: scripting bindings over the pipeline CLI.
 *
 * The API mirrors the core registry surface: `algorithms.create` builds
 * handles for named implementations, `data` holds the document wrappers,
 * and `utils` the workflow helpers.  Everything executes through the
 * `groundstate` executable and its JSON/XYZ document formats.
 */

export * as algorithms from "./algorithms.js";
export * as data from "./data.js";
export * as utils from "./utils.js";
export { PipelineError, runCli } from "./cli.js";
export { AlgorithmHandle, create } from "./algorithms.js";
export {
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
} from "./data.js";
