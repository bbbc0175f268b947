/**
 * Bindings API behavior: validation, settings locking, error propagation.
 */

import { describe, expect, it } from "vitest";

import { PipelineError, runCli } from "../src/cli.js";
import { create } from "../src/algorithms.js";
import { Circuit, Structure, Wavefunction } from "../src/data.js";

describe("Structure", () => {
  it("builds from Bohr coordinates plus symbols", () => {
    const structure = Structure.create(
      [
        [0, 0, 0],
        [0, 0, 2.5],
      ],
      ["H", "H"],
    );
    expect(structure.symbols).toEqual(["H", "H"]);
    expect(structure.coordinates[1][2]).toBe(2.5);
  });

  it("rejects mismatched coordinate and symbol counts", () => {
    expect(() =>
      Structure.create(
        [
          [0, 0, 0],
          [0, 0, 1],
          [0, 0, 2],
        ],
        ["H", "H"],
      ),
    ).toThrow(/does not match/);
  });

  it("rejects non-finite coordinates", () => {
    expect(() => Structure.create([[0, 0, Number.NaN]], ["H"])).toThrow(
      /finite/,
    );
  });

  it("round trips through JSON", () => {
    const structure = Structure.create([[0.25, -1.5, 3.125]], ["He"]);
    const recovered = Structure.fromJson(structure.toJson());
    expect(recovered.document).toEqual(structure.document);
  });
});

describe("settings lock", () => {
  it("rejects writes after the handle has run", () => {
    const structure = Structure.create(
      [
        [0, 0, 0],
        [0, 0, 1.4],
      ],
      ["H", "H"],
    );
    const solver = create("scf_solver", "native");
    solver.set("max_iterations", 64);
    solver.run(structure, {});
    expect(solver.locked).toBe(true);
    expect(() => solver.set("max_iterations", 32)).toThrow(/locked/);
    expect(solver.settings().max_iterations).toBe(64);
  });
});

describe("error propagation", () => {
  it("surfaces unknown implementation names with the available options", () => {
    const structure = Structure.create([[0, 0, 0]], ["He"]);
    const mapper = create("qubit_mapper", "nonexistent");
    // create() is lazy; the registry rejects the name when run() invokes it
    expect(() => mapper.run(structure as never)).toThrow(PipelineError);
    try {
      mapper.run(structure as never);
    } catch (error) {
      const failure = error as PipelineError;
      expect(failure.exitCode).toBe(2);
      expect(failure.message).toContain("jordan_wigner");
    }
  });

  it("surfaces invariant violations from stage execution", () => {
    const structure = Structure.create([[0, 0, 0]], ["He"]);
    const solver = create("scf_solver", "native");
    expect(() => solver.run(structure, { charge: 1 })).toThrow(/open-shell/);
  });
});

describe("wavefunction accessors", () => {
  function scfWavefunction(): Wavefunction {
    const structure = Structure.create(
      [
        [0, 0, 0],
        [0, 0, 2.5],
      ],
      ["H", "H"],
    );
    const [, wavefunction] = create("scf_solver", "native").run(
      structure,
      {},
    ) as [number, Wavefunction];
    return wavefunction;
  }

  it("exposes orbitals and electron counts", () => {
    const wavefunction = scfWavefunction();
    expect(wavefunction.getActiveNumElectrons()).toEqual([1, 1]);
    expect(wavefunction.getOrbitals().numMolecularOrbitals).toBe(2);
    expect(wavefunction.getOrbitals().numElectrons).toBe(2);
  });

  it("truncates deterministically and renormalizes", () => {
    const document = {
      ...scfWavefunction().document,
      determinants: [
        [1, 1],
        [2, 2],
        [1, 2],
      ] as [number, number][],
      coefficients: [0.8, -0.5, Math.sqrt(1 - 0.64 - 0.25)],
      orbitals: null,
    };
    const wavefunction = new Wavefunction(document);
    const truncated = wavefunction.truncate(2);
    expect(truncated.determinants).toEqual([
      [1, 1],
      [2, 2],
    ]);
    const norm = truncated.coefficients.reduce((sum, c) => sum + c * c, 0);
    expect(Math.abs(norm - 1.0)).toBeLessThan(1e-12);
  });
});

describe("executor handle", () => {
  it("samples deterministic counts through the CLI", () => {
    // X on qubit 0, measuring both qubits: key order follows the measured
    // list, so the result is "10" with certainty.
    const circuit = new Circuit({
      kind: "circuit",
      version: 1,
      n_qubits: 2,
      gates: [{ gate: "X", target: 0 }],
      measured: [0, 1],
    });
    const executor = create("circuit_executor", "native_full_state");
    const counts = executor.run(circuit, 25, 7) as {
      counts: Record<string, number>;
    };
    expect(counts.counts).toEqual({ "10": 25 });
  });
});

describe("cli passthrough", () => {
  it("reports the toolkit version", () => {
    expect(runCli(["version"]).trim()).toMatch(/^\d+\.\d+\.\d+$/);
  });
});
