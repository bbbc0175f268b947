"""Command-line workflow driver.

Subcommands:

* ``run``     -- execute the full pipeline from a config + geometry file.
* ``list``    -- show registered kinds, or implementations of one kind.
* ``version`` -- print the toolkit version.
* ``invoke``  -- run a single registered algorithm on serialized inputs
  (the bridge used by external scripting frontends).

Exit codes: 0 success, 1 stage failure, 2 configuration/schema errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, algorithms
from .data import Structure, from_json, parse_xyz
from .errors import GroundstateError, RegistryError, SchemaError, ValidationError

_PIPELINE_STAGES = (
    "scf",
    "active_space",
    "hamiltonian",
    "casci",
    "truncate",
    "qubit_map",
    "state_prep",
    "time_evolution",
    "circuit_mapper",
    "executor",
    "qpe",
    "estimate",
)

_STAGE_KINDS = {
    "scf": "scf_solver",
    "active_space": "active_space_selector",
    "hamiltonian": "hamiltonian_constructor",
    "casci": "multi_configuration_calculator",
    "qubit_map": "qubit_mapper",
    "state_prep": "state_prep",
    "time_evolution": "time_evolution_builder",
    "circuit_mapper": "controlled_evolution_circuit_mapper",
    "executor": "circuit_executor",
    "qpe": "phase_estimation",
    "estimate": "estimator",
}


class ConfigError(Exception):
    """Configuration problem; maps to exit code 2."""


class StageError(Exception):
    """Pipeline stage failure; maps to exit code 1."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause


def _load_structure(path: str) -> Structure:
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".xyz"):
        return parse_xyz(text)
    obj = from_json(text, "structure")
    return obj


def _load_config(path: str) -> dict:
    try:
        config = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError("config root must be an object")
    for key in config:
        if key not in _PIPELINE_STAGES:
            raise ConfigError(
                f"unknown config stage '{key}'; stages: {', '.join(_PIPELINE_STAGES)}"
            )
    if "qpe" in config and "estimate" in config:
        raise ConfigError("config must select either 'qpe' or 'estimate', not both")
    return config


def _stage_spec(config: dict, stage: str) -> tuple[str | None, dict, dict]:
    record = config.get(stage) or {}
    if not isinstance(record, dict):
        raise ConfigError(f"stage '{stage}' must be an object")
    impl = record.get("impl")
    settings = record.get("settings") or {}
    extra = {
        k: v for k, v in record.items() if k not in ("impl", "settings")
    }
    if not isinstance(settings, dict):
        raise ConfigError(f"stage '{stage}' settings must be an object")
    return impl, settings, extra


def _create_stage(config: dict, stage: str, overrides: dict | None = None):
    impl, settings, extra = _stage_spec(config, stage)
    merged = dict(settings)
    if overrides:
        merged.update(overrides)
    try:
        instance = algorithms.create(_STAGE_KINDS[stage], impl, **merged)
    except RegistryError as exc:
        raise ConfigError(f"stage '{stage}': {exc}") from exc
    return instance, extra


def _run_stage(stage: str, func, *args, **kwargs):
    try:
        return func(*args, **kwargs)
    except GroundstateError as exc:
        raise StageError(stage, exc) from exc


def cmd_run(args) -> int:
    config = _load_config(args.config)
    try:
        structure = _load_structure(args.structure)
    except (OSError, SchemaError, ValidationError) as exc:
        raise ConfigError(f"cannot load structure: {exc}") from exc

    stages: dict[str, dict] = {}
    document = {
        "kind": "workflow_result",
        "version": 1,
        "toolkit_version": __version__,
        "structure": structure.to_payload(),
        "stages": stages,
    }
    warnings: list[str] = []

    # --- classical stages -------------------------------------------------
    scf_solver, scf_extra = _create_stage(config, "scf")
    charge = int(scf_extra.get("charge", 0))
    multiplicity = int(scf_extra.get("spin_multiplicity", 1))
    basis = scf_extra.get("basis", "sto-3g")
    scf_energy, scf_wfn = _run_stage(
        "scf",
        scf_solver.run,
        structure,
        charge=charge,
        spin_multiplicity=multiplicity,
        basis_or_guess=basis,
    )
    stages["scf"] = {
        "impl": scf_solver.name,
        "settings": scf_solver.settings.snapshot(),
        "summary": {
            "energy": scf_energy,
            "n_molecular_orbitals": scf_wfn.get_orbitals().n_molecular_orbitals,
            "charge": charge,
            "basis": basis,
        },
    }

    selector, _ = _create_stage(config, "active_space")
    active_wfn = _run_stage("active_space", selector.run, scf_wfn)
    orbitals = active_wfn.get_orbitals()
    stages["active_space"] = {
        "impl": selector.name,
        "settings": selector.settings.snapshot(),
        "summary": {
            "core": list(orbitals.core),
            "active": list(orbitals.active),
            "virtual": list(orbitals.virtual),
            "n_active_alpha": orbitals.n_active_alpha,
            "n_active_beta": orbitals.n_active_beta,
        },
    }

    constructor, _ = _create_stage(config, "hamiltonian")
    hamiltonian = _run_stage("hamiltonian", constructor.run, orbitals)
    stages["hamiltonian"] = {
        "impl": constructor.name,
        "settings": constructor.settings.snapshot(),
        "summary": {
            "n_orbitals": hamiltonian.n_orbitals,
            "core_energy": hamiltonian.core_energy,
        },
    }

    casci_solver, _ = _create_stage(config, "casci")
    n_alpha, n_beta = active_wfn.get_active_num_electrons()
    casci_energy, casci_wfn = _run_stage(
        "casci", casci_solver.run, hamiltonian, n_alpha, n_beta
    )
    stages["casci"] = {
        "impl": casci_solver.name,
        "settings": casci_solver.settings.snapshot(),
        "summary": {
            "energy": casci_energy,
            "n_determinants": casci_wfn.n_determinants,
            "coefficients": casci_wfn.coefficients.tolist()[:16],
        },
    }

    _, _, truncate_extra = (None, None, (config.get("truncate") or {}))
    max_determinants = truncate_extra.get("max_determinants")
    if max_determinants is not None:
        trial_wfn = _run_stage("truncate", casci_wfn.truncate, int(max_determinants))
    else:
        trial_wfn = casci_wfn
    stages["truncate"] = {
        "impl": "native",
        "settings": {"max_determinants": max_determinants},
        "summary": {
            "n_determinants": trial_wfn.n_determinants,
            "coefficients": trial_wfn.coefficients.tolist()[:16],
        },
    }

    # --- quantum stages ---------------------------------------------------
    mapper, _ = _create_stage(config, "qubit_map")
    qubit_hamiltonian = _run_stage("qubit_map", mapper.run, hamiltonian)
    stages["qubit_map"] = {
        "impl": mapper.name,
        "settings": mapper.settings.snapshot(),
        "summary": {
            "n_qubits": qubit_hamiltonian.n_qubits,
            "n_terms": qubit_hamiltonian.n_terms,
        },
    }

    prep_impl, prep_settings, _ = _stage_spec(config, "state_prep")
    prep_settings = dict(prep_settings)
    prep_settings.setdefault("encoding", mapper.name)
    try:
        preparer = algorithms.create(_STAGE_KINDS["state_prep"], prep_impl, **prep_settings)
    except RegistryError as exc:
        raise ConfigError(f"stage 'state_prep': {exc}") from exc
    prep_circuit = _run_stage("state_prep", preparer.run, trial_wfn)
    stages["state_prep"] = {
        "impl": preparer.name,
        "settings": preparer.settings.snapshot(),
        "summary": {
            "n_qubits": prep_circuit.n_qubits,
            "n_gates": prep_circuit.n_gates,
        },
    }

    executor, _ = _create_stage(config, "executor")

    method = "estimate" if "estimate" in config else "qpe"
    seed_override = {} if args.seed is None else {"seed": int(args.seed)}
    if method == "qpe":
        builder, _ = _create_stage(config, "time_evolution")
        circuit_mapper, _ = _create_stage(config, "circuit_mapper")
        engine, _ = _create_stage(config, "qpe", seed_override)
        evolution_time = engine.settings["evolution_time"]
        if abs(casci_energy) * evolution_time >= math.pi:
            warnings.append(
                "CASCI reference energy lies outside the alias-free window "
                f"|E|*t < pi (|{casci_energy:.6f}| * {evolution_time} >= pi); "
                "phase readout may alias"
            )
        result = _run_stage(
            "qpe",
            engine.run,
            state_preparation=prep_circuit,
            qubit_hamiltonian=qubit_hamiltonian,
            circuit_executor=executor,
            evolution_builder=builder,
            circuit_mapper=circuit_mapper,
        )
        stages["time_evolution"] = {
            "impl": builder.name,
            "settings": builder.settings.snapshot(),
            "summary": {},
        }
        stages["circuit_mapper"] = {
            "impl": circuit_mapper.name,
            "settings": circuit_mapper.settings.snapshot(),
            "summary": {},
        }
        stages["qpe"] = {
            "impl": engine.name,
            "settings": engine.settings.snapshot(),
            "summary": {
                "raw_energy": result.raw_energy,
                "difference_from_casci": abs(result.raw_energy - casci_energy),
            },
        }
    else:
        engine, _ = _create_stage(config, "estimate", seed_override)
        result = _run_stage(
            "estimate",
            engine.run,
            state_preparation=prep_circuit,
            qubit_hamiltonian=qubit_hamiltonian,
            circuit_executor=executor,
            reference=trial_wfn,
        )
        stages["estimate"] = {
            "impl": engine.name,
            "settings": engine.settings.snapshot(),
            "summary": {
                "energy": result.energy,
                "variance": result.variance,
                "difference_from_casci": abs(result.energy - casci_energy),
            },
        }
    stages["executor"] = {
        "impl": executor.name,
        "settings": executor.settings.snapshot(),
        "summary": {},
    }

    document["seed"] = None if args.seed is None else int(args.seed)
    document["warnings"] = warnings
    document["result"] = result.to_payload()
    document["timestamp"] = datetime.now(timezone.utc).isoformat()

    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
    for message in warnings:
        print(f"warning: {message}", file=sys.stderr)

    if args.report_dir:
        from .report import render_report

        for path in render_report(document, args.report_dir):
            print(f"report: {path}")
    print(f"result written to {output}")
    return 0


def cmd_list(args) -> int:
    if args.kind is None:
        for kind in algorithms.kinds():
            listing = algorithms.list_implementations(kind)
            names = [
                f"{info.name}{' (default)' if info.is_default else ''}"
                for info in listing.implementations
            ]
            print(f"{kind}: {', '.join(names)}")
        return 0
    listing = algorithms.list_implementations(args.kind)
    if not listing.found:
        print(
            f"unknown kind '{args.kind}'; registered kinds: "
            f"{', '.join(algorithms.kinds())}",
            file=sys.stderr,
        )
        return 2
    print(f"{args.kind}:")
    for info in listing.implementations:
        marker = " (default)" if info.is_default else ""
        print(f"  {info.name}{marker}")
        for spec in info.settings_schema:
            note = f"  # {spec.description}" if spec.description else ""
            print(f"    {spec.name}: {spec.type} = {spec.default!r}{note}")
    return 0


def cmd_version(_args) -> int:
    print(__version__)
    return 0


# ---------------------------------------------------------------------------
# invoke: single-algorithm bridge for scripting frontends
# ---------------------------------------------------------------------------


def _invoke_load_input(path: str):
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".xyz"):
        return parse_xyz(text)
    return from_json(text)


def _as_output_payload(value):
    if hasattr(value, "to_payload"):
        return value.to_payload()
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    raise ValidationError(f"cannot serialize output of type {type(value).__name__}")


def _build_dependency(spec: dict):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("algorithm reference must be {'kind', 'impl'?, 'settings'?}")
    return algorithms.create(
        spec["kind"], spec.get("impl"), **(spec.get("settings") or {})
    )


def cmd_invoke(args) -> int:
    try:
        run_args = json.loads(args.args) if args.args else {}
        settings = json.loads(args.settings) if args.settings else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad JSON in --args/--settings: {exc}") from exc
    if not isinstance(run_args, dict) or not isinstance(settings, dict):
        raise ConfigError("--args and --settings must be JSON objects")
    try:
        instance = algorithms.create(args.kind, args.impl, **settings)
    except RegistryError as exc:
        raise ConfigError(str(exc)) from exc

    try:
        inputs = [_invoke_load_input(path) for path in args.input or []]
    except (OSError, SchemaError, ValidationError) as exc:
        raise ConfigError(f"cannot load input: {exc}") from exc

    # Dependency references (executor etc.) arrive as JSON specs in --args.
    kwargs = {}
    for key, value in run_args.items():
        if isinstance(value, dict) and "kind" in value:
            kwargs[key] = _build_dependency(value)
        elif isinstance(value, dict) and value.get("$input") is not None:
            kwargs[key] = _invoke_load_input(value["$input"])
        else:
            kwargs[key] = value

    result = _run_stage(args.kind, instance.run, *inputs, **kwargs)
    outputs = result if isinstance(result, tuple) else (result,)
    payload = {
        "kind": "run_output",
        "version": 1,
        "outputs": [_as_output_payload(item) for item in outputs],
    }
    Path(args.output).write_text(json.dumps(payload) + "\n", encoding="utf-8")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groundstate",
        description="molecular ground-state energy estimation pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute the configured pipeline")
    run.add_argument("--config", required=True)
    run.add_argument("--structure", required=True)
    run.add_argument("--output", required=True)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--report-dir", default=None)
    run.set_defaults(func=cmd_run)

    lst = sub.add_parser("list", help="list kinds or implementations")
    lst.add_argument("kind", nargs="?", default=None)
    lst.set_defaults(func=cmd_list)

    ver = sub.add_parser("version", help="print the toolkit version")
    ver.set_defaults(func=cmd_version)

    inv = sub.add_parser("invoke", help="run one algorithm on serialized inputs")
    inv.add_argument("--kind", required=True)
    inv.add_argument("--impl", default=None)
    inv.add_argument("--settings", default=None, help="JSON object of settings")
    inv.add_argument("--input", action="append", help="input document path (repeatable)")
    inv.add_argument("--args", default=None, help="JSON object of run() keyword args")
    inv.add_argument("--output", required=True)
    inv.set_defaults(func=cmd_invoke)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GroundstateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
