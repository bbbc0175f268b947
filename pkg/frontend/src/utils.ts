/**
 * Workflow helpers mirroring the core package's utils namespace.
 */

import type { Wavefunction } from "./data.js";

const VALENCE_ELECTRONS: Record<string, number> = {
  H: 1,
  He: 2,
  Li: 1,
  Be: 2,
  B: 3,
  C: 4,
  N: 5,
  O: 6,
  F: 7,
  Ne: 8,
};

const VALENCE_ORBITALS: Record<string, number> = {
  H: 1,
  He: 1,
  Li: 4,
  Be: 4,
  B: 4,
  C: 4,
  N: 4,
  O: 4,
  F: 4,
  Ne: 4,
};

/**
 * Valence-rule (electrons, orbitals) for an SCF wavefunction, clamped to
 * the orbitals/electrons the basis actually provides.
 */
export function computeValenceSpaceParameters(
  wavefunction: Wavefunction,
  charge = 0,
): [number, number] {
  const orbitals = wavefunction.getOrbitals();
  const symbols = orbitals.structure.symbols;
  let electrons = -charge;
  let orbitalCount = 0;
  for (const symbol of symbols) {
    const ve = VALENCE_ELECTRONS[symbol];
    const vo = VALENCE_ORBITALS[symbol];
    if (ve === undefined || vo === undefined) {
      throw new Error(`no valence data for element '${symbol}'`);
    }
    electrons += ve;
    orbitalCount += vo;
  }
  orbitalCount = Math.min(orbitalCount, orbitals.numMolecularOrbitals);
  electrons = Math.min(electrons, orbitals.numElectrons);
  if (electrons < 0) {
    throw new Error("valence electron count is negative for this charge");
  }
  if (electrons > 2 * orbitalCount) {
    throw new Error("valence electrons exceed twice the valence orbitals");
  }
  return [electrons, orbitalCount];
}
