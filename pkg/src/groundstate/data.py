"""Immutable domain data types and their text serialization.

Every type here is a value object: construction validates the invariants,
all fields are read-only afterwards, and transformations return new
objects.  Serialization uses a JSON envelope ``{"kind": ..., "version": 1,
...}``; floating point values survive a round trip bit-exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .constants import ANGSTROM_TO_BOHR, MAX_SUPPORTED_Z, SYMBOL_TO_Z
from .errors import SchemaError, ValidationError

SCHEMA_VERSION = 1

_MIN_ATOM_SEPARATION = 1e-6  # Bohr


def _readonly(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True)
    out.flags.writeable = False
    return out


# ---------------------------------------------------------------------------
# JSON envelope machinery
# ---------------------------------------------------------------------------

_KIND_LOADERS: dict[str, Callable[[dict], Any]] = {}


def register_kind(kind: str, loader: Callable[[dict], Any]) -> None:
    """Register a payload loader for one document kind."""
    _KIND_LOADERS[kind] = loader


def to_json(obj: Any) -> str:
    """Serialize any registered data object to its JSON document."""
    payload = obj.to_payload()
    return json.dumps(payload)


def from_json(text: str, kind: str | None = None) -> Any:
    """Parse a JSON document back into a data object.

    ``kind`` optionally pins the expected document kind; a mismatch raises
    :class:`SchemaError`.  Invariant violations in the payload raise
    :class:`ValidationError`.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON document: {exc}") from exc
    if not isinstance(payload, dict):
        raise SchemaError("document root must be an object")
    return from_payload(payload, kind)


def from_payload(payload: dict, kind: str | None = None) -> Any:
    doc_kind = payload.get("kind")
    if doc_kind is None:
        raise SchemaError("document is missing the 'kind' field")
    if kind is not None and doc_kind != kind:
        raise SchemaError(f"expected document kind '{kind}', found '{doc_kind}'")
    if payload.get("version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {payload.get('version')!r}")
    loader = _KIND_LOADERS.get(doc_kind)
    if loader is None:
        raise SchemaError(f"unknown document kind '{doc_kind}'")
    return loader(payload)


def save_json(obj: Any, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(to_json(obj))
        handle.write("\n")


def load_json(path, kind: str | None = None) -> Any:
    with open(path, "r", encoding="utf-8") as handle:
        return from_json(handle.read(), kind)


def _envelope(kind: str, **fields) -> dict:
    payload = {"kind": kind, "version": SCHEMA_VERSION}
    payload.update(fields)
    return payload


# ---------------------------------------------------------------------------
# Structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Structure:
    """Molecular geometry: element symbols plus coordinates in Bohr."""

    coordinates: np.ndarray
    symbols: tuple[str, ...]

    def __init__(self, coordinates, symbols: Sequence[str]):
        symbols = tuple(str(s) for s in symbols)
        coords = np.atleast_2d(np.array(coordinates, dtype=float))
        if len(symbols) == 0:
            raise ValidationError("a structure needs at least one atom")
        if coords.shape != (len(symbols), 3):
            raise ValidationError(
                f"coordinate array of shape {coords.shape} does not match "
                f"{len(symbols)} atoms"
            )
        if not np.all(np.isfinite(coords)):
            raise ValidationError("coordinates must be finite")
        for symbol in symbols:
            if symbol not in SYMBOL_TO_Z:
                raise ValidationError(f"unknown element symbol '{symbol}'")
            if SYMBOL_TO_Z[symbol] > MAX_SUPPORTED_Z:
                raise ValidationError(f"element '{symbol}' outside supported range")
        for i in range(len(symbols)):
            for j in range(i + 1, len(symbols)):
                if np.linalg.norm(coords[i] - coords[j]) < _MIN_ATOM_SEPARATION:
                    raise ValidationError(f"atoms {i} and {j} coincide")
        object.__setattr__(self, "coordinates", _readonly(coords))
        object.__setattr__(self, "symbols", symbols)

    @property
    def atomic_numbers(self) -> tuple[int, ...]:
        return tuple(SYMBOL_TO_Z[s] for s in self.symbols)

    @property
    def n_atoms(self) -> int:
        return len(self.symbols)

    @property
    def n_electrons(self) -> int:
        return sum(self.atomic_numbers)

    def nuclear_repulsion(self) -> float:
        """Coulomb repulsion between all nuclear pairs, in Hartree."""
        energy = 0.0
        z = self.atomic_numbers
        for i in range(self.n_atoms):
            for j in range(i + 1, self.n_atoms):
                r = float(np.linalg.norm(self.coordinates[i] - self.coordinates[j]))
                energy += z[i] * z[j] / r
        return energy

    def __eq__(self, other) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return self.symbols == other.symbols and np.array_equal(
            self.coordinates, other.coordinates
        )

    def __hash__(self):
        return hash((self.symbols, self.coordinates.tobytes()))

    def to_payload(self) -> dict:
        return _envelope(
            "structure",
            symbols=list(self.symbols),
            coordinates_bohr=self.coordinates.tolist(),
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "Structure":
        try:
            return cls(payload["coordinates_bohr"], payload["symbols"])
        except KeyError as exc:
            raise SchemaError(f"structure document missing field {exc}") from exc


def parse_xyz(text: str) -> Structure:
    """Parse XYZ-format text; coordinates are Angstrom, output is Bohr."""
    lines = text.splitlines()
    if not lines:
        raise SchemaError("empty XYZ input")
    try:
        count = int(lines[0].strip())
    except ValueError as exc:
        raise SchemaError(f"bad atom count line: {lines[0]!r}") from exc
    body = [line for line in lines[2:] if line.strip()]
    if len(body) != count:
        raise SchemaError(f"XYZ declares {count} atoms but has {len(body)} rows")
    symbols = []
    coords = []
    for line in body:
        parts = line.split()
        if len(parts) < 4:
            raise SchemaError(f"bad XYZ row: {line!r}")
        symbol = parts[0]
        if symbol not in SYMBOL_TO_Z:
            raise SchemaError(f"unknown element symbol '{symbol}'")
        try:
            xyz = [float(p) for p in parts[1:4]]
        except ValueError as exc:
            raise SchemaError(f"non-numeric coordinate in row: {line!r}") from exc
        symbols.append(symbol)
        coords.append(xyz)
    return Structure(np.array(coords) * ANGSTROM_TO_BOHR, symbols)


# ---------------------------------------------------------------------------
# Orbitals
# ---------------------------------------------------------------------------

_ORTHONORMALITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Orbitals:
    """Molecular orbitals over an AO basis with an active-space partition.

    ``coefficients`` is the AO x MO matrix; MOs are stored in ascending
    energy order.  ``core``/``active``/``virtual`` disjointly cover all MO
    indices; ``n_active_alpha``/``n_active_beta`` count the correlated
    electrons assigned to the active orbitals.
    """

    basis: Any  # BasisSet; typed loosely to avoid a circular import
    coefficients: np.ndarray
    energies: np.ndarray
    occupations: np.ndarray
    core: tuple[int, ...]
    active: tuple[int, ...]
    virtual: tuple[int, ...]
    n_active_alpha: int
    n_active_beta: int

    def __init__(
        self,
        basis,
        coefficients,
        energies,
        occupations,
        core: Iterable[int] = (),
        active: Iterable[int] | None = None,
        virtual: Iterable[int] = (),
        n_active_alpha: int | None = None,
        n_active_beta: int | None = None,
    ):
        coeffs = _readonly(np.atleast_2d(coefficients))
        energies = _readonly(np.atleast_1d(energies))
        occupations = _readonly(np.atleast_1d(occupations))
        n_mo = coeffs.shape[1]
        if active is None:
            active = range(n_mo)
        core = tuple(int(i) for i in core)
        active = tuple(int(i) for i in active)
        virtual = tuple(int(i) for i in virtual)

        if energies.shape != (n_mo,) or occupations.shape != (n_mo,):
            raise ValidationError("energies/occupations do not match MO count")
        if not all(occ in (0.0, 1.0, 2.0) for occ in occupations):
            raise ValidationError("occupations must be 0, 1 or 2 electrons")
        all_indices = sorted(core + active + virtual)
        if all_indices != list(range(n_mo)):
            raise ValidationError("partition must disjointly cover all MOs")

        active_electrons = int(round(sum(occupations[i] for i in active)))
        if n_active_alpha is None and n_active_beta is None:
            n_active_alpha = active_electrons - active_electrons // 2
            n_active_beta = active_electrons // 2
        n_active_alpha = int(n_active_alpha)
        n_active_beta = int(n_active_beta)
        if min(n_active_alpha, n_active_beta) < 0:
            raise ValidationError("active electron counts must be non-negative")
        if max(n_active_alpha, n_active_beta) > len(active):
            raise ValidationError("more active electrons per spin than active orbitals")

        s = basis.ao_integrals().overlap
        ortho_error = np.linalg.norm(coeffs.T @ s @ coeffs - np.eye(n_mo))
        if ortho_error > _ORTHONORMALITY_TOL:
            raise ValidationError(
                f"MO coefficients not orthonormal in the AO metric "
                f"(|C^T S C - I| = {ortho_error:.3e})"
            )

        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "occupations", occupations)
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "active", active)
        object.__setattr__(self, "virtual", virtual)
        object.__setattr__(self, "n_active_alpha", n_active_alpha)
        object.__setattr__(self, "n_active_beta", n_active_beta)

    @property
    def n_molecular_orbitals(self) -> int:
        return self.coefficients.shape[1]

    @property
    def n_electrons(self) -> int:
        return int(round(float(np.sum(self.occupations))))

    def with_partition(
        self,
        core: Iterable[int],
        active: Iterable[int],
        n_active_alpha: int | None = None,
        n_active_beta: int | None = None,
    ) -> "Orbitals":
        """Return a copy of these orbitals with a new partition."""
        core = tuple(int(i) for i in core)
        active = tuple(int(i) for i in active)
        rest = tuple(i for i in range(self.n_molecular_orbitals) if i not in core + active)
        return Orbitals(
            self.basis,
            self.coefficients,
            self.energies,
            self.occupations,
            core=core,
            active=active,
            virtual=rest,
            n_active_alpha=n_active_alpha,
            n_active_beta=n_active_beta,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Orbitals):
            return NotImplemented
        return (
            self.basis == other.basis
            and np.array_equal(self.coefficients, other.coefficients)
            and np.array_equal(self.energies, other.energies)
            and np.array_equal(self.occupations, other.occupations)
            and self.core == other.core
            and self.active == other.active
            and self.virtual == other.virtual
            and self.n_active_alpha == other.n_active_alpha
            and self.n_active_beta == other.n_active_beta
        )

    def __hash__(self):
        return hash((self.core, self.active, self.virtual, self.coefficients.tobytes()))

    def to_payload(self) -> dict:
        return _envelope(
            "orbitals",
            basis=self.basis.to_payload(),
            coefficients=self.coefficients.tolist(),
            energies=self.energies.tolist(),
            occupations=self.occupations.tolist(),
            core=list(self.core),
            active=list(self.active),
            virtual=list(self.virtual),
            n_active_alpha=self.n_active_alpha,
            n_active_beta=self.n_active_beta,
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "Orbitals":
        from .basis import BasisSet

        try:
            return cls(
                BasisSet.from_payload(payload["basis"]),
                payload["coefficients"],
                payload["energies"],
                payload["occupations"],
                core=payload["core"],
                active=payload["active"],
                virtual=payload["virtual"],
                n_active_alpha=payload["n_active_alpha"],
                n_active_beta=payload["n_active_beta"],
            )
        except KeyError as exc:
            raise SchemaError(f"orbitals document missing field {exc}") from exc


# ---------------------------------------------------------------------------
# Wavefunction
# ---------------------------------------------------------------------------

_NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Wavefunction:
    """Linear combination of Slater determinants over active orbitals.

    Determinants are (alpha, beta) occupation bitmasks: bit ``i`` set means
    active spatial orbital ``i`` is occupied for that spin.  Coefficients
    are real and normalized.
    """

    n_orbitals: int
    determinants: tuple[tuple[int, int], ...]
    coefficients: np.ndarray
    orbitals: Orbitals | None = None

    def __init__(self, n_orbitals, determinants, coefficients, orbitals=None):
        n_orbitals = int(n_orbitals)
        if not 1 <= n_orbitals <= 64:
            raise ValidationError("supported active orbital count is 1..64")
        dets = tuple((int(a), int(b)) for a, b in determinants)
        coeffs = _readonly(np.atleast_1d(coefficients))
        if len(dets) == 0:
            raise ValidationError("a wavefunction needs at least one determinant")
        if coeffs.shape != (len(dets),):
            raise ValidationError("coefficient count does not match determinants")
        limit = 1 << n_orbitals
        for a, b in dets:
            if not (0 <= a < limit and 0 <= b < limit):
                raise ValidationError("determinant mask outside active orbital range")
        if len(set(dets)) != len(dets):
            raise ValidationError("determinants must be unique")
        n_alpha = bin(dets[0][0]).count("1")
        n_beta = bin(dets[0][1]).count("1")
        for a, b in dets:
            if bin(a).count("1") != n_alpha or bin(b).count("1") != n_beta:
                raise ValidationError("all determinants must share electron counts")
        norm = float(np.sum(coeffs**2))
        if abs(norm - 1.0) > _NORMALIZATION_TOL:
            raise ValidationError(f"coefficients not normalized (sum c^2 = {norm!r})")
        if orbitals is not None:
            if len(orbitals.active) != n_orbitals:
                raise ValidationError("n_orbitals does not match orbital partition")
        object.__setattr__(self, "n_orbitals", n_orbitals)
        object.__setattr__(self, "determinants", dets)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "orbitals", orbitals)

    @classmethod
    def single_determinant(
        cls, n_orbitals: int, alpha_mask: int, beta_mask: int, orbitals=None
    ) -> "Wavefunction":
        return cls(n_orbitals, [(alpha_mask, beta_mask)], [1.0], orbitals)

    @property
    def n_determinants(self) -> int:
        return len(self.determinants)

    def get_orbitals(self) -> Orbitals:
        if self.orbitals is None:
            raise ValidationError("wavefunction carries no orbital reference")
        return self.orbitals

    def get_active_num_electrons(self) -> tuple[int, int]:
        a, b = self.determinants[0]
        return bin(a).count("1"), bin(b).count("1")

    def truncate(self, max_determinants: int) -> "Wavefunction":
        """Keep the largest-|coefficient| determinants and renormalize.

        Ties are broken by ascending (alpha, beta) bitmask so truncation is
        deterministic.
        """
        max_determinants = int(max_determinants)
        if max_determinants < 1:
            raise ValidationError("max_determinants must be at least 1")
        order = sorted(
            range(self.n_determinants),
            key=lambda i: (-abs(self.coefficients[i]), self.determinants[i]),
        )
        keep = order[: min(max_determinants, self.n_determinants)]
        dets = [self.determinants[i] for i in keep]
        coeffs = np.array([self.coefficients[i] for i in keep])
        norm = math.sqrt(float(np.sum(coeffs**2)))
        if norm == 0.0:
            raise ValidationError("cannot renormalize an all-zero truncation")
        return Wavefunction(self.n_orbitals, dets, coeffs / norm, self.orbitals)

    def sorted_by_weight(self) -> "Wavefunction":
        """Return the same state with determinants sorted by descending |c|."""
        return self.truncate(self.n_determinants)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Wavefunction):
            return NotImplemented
        return (
            self.n_orbitals == other.n_orbitals
            and self.determinants == other.determinants
            and np.array_equal(self.coefficients, other.coefficients)
            and self.orbitals == other.orbitals
        )

    def __hash__(self):
        return hash((self.n_orbitals, self.determinants, self.coefficients.tobytes()))

    def to_payload(self) -> dict:
        return _envelope(
            "wavefunction",
            n_orbitals=self.n_orbitals,
            determinants=[[a, b] for a, b in self.determinants],
            coefficients=self.coefficients.tolist(),
            orbitals=None if self.orbitals is None else self.orbitals.to_payload(),
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "Wavefunction":
        try:
            orbitals = payload["orbitals"]
            return cls(
                payload["n_orbitals"],
                payload["determinants"],
                payload["coefficients"],
                None if orbitals is None else Orbitals.from_payload(orbitals),
            )
        except KeyError as exc:
            raise SchemaError(f"wavefunction document missing field {exc}") from exc


# ---------------------------------------------------------------------------
# FermionHamiltonian
# ---------------------------------------------------------------------------

_SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FermionHamiltonian:
    """Active-space electronic Hamiltonian in spatial-orbital integrals.

    ``one_body`` is the effective one-electron matrix (frozen-core folded),
    ``two_body`` the (pq|rs) tensor in chemists' notation, and
    ``core_energy`` collects nuclear repulsion plus frozen-core energy.
    """

    n_orbitals: int
    core_energy: float
    one_body: np.ndarray
    two_body: np.ndarray
    orbitals: Orbitals | None = None

    def __init__(self, n_orbitals, core_energy, one_body, two_body, orbitals=None):
        n = int(n_orbitals)
        h = _readonly(np.asarray(one_body, dtype=float))
        g = _readonly(np.asarray(two_body, dtype=float))
        if h.shape != (n, n):
            raise ValidationError(f"one-body matrix must be {n}x{n}")
        if g.shape != (n, n, n, n):
            raise ValidationError(f"two-body tensor must be {n}^4")
        if np.max(np.abs(h - h.T), initial=0.0) > _SYMMETRY_TOL:
            raise ValidationError("one-body matrix must be symmetric")
        for permuted in (
            g.transpose(1, 0, 2, 3),
            g.transpose(0, 1, 3, 2),
            g.transpose(2, 3, 0, 1),
        ):
            if np.max(np.abs(g - permuted), initial=0.0) > _SYMMETRY_TOL:
                raise ValidationError("two-body tensor must have 8-fold symmetry")
        object.__setattr__(self, "n_orbitals", n)
        object.__setattr__(self, "core_energy", float(core_energy))
        object.__setattr__(self, "one_body", h)
        object.__setattr__(self, "two_body", g)
        object.__setattr__(self, "orbitals", orbitals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FermionHamiltonian):
            return NotImplemented
        return (
            self.n_orbitals == other.n_orbitals
            and self.core_energy == other.core_energy
            and np.array_equal(self.one_body, other.one_body)
            and np.array_equal(self.two_body, other.two_body)
            and self.orbitals == other.orbitals
        )

    def __hash__(self):
        return hash((self.n_orbitals, self.core_energy, self.one_body.tobytes()))

    def to_payload(self) -> dict:
        return _envelope(
            "fermion_hamiltonian",
            n_orbitals=self.n_orbitals,
            core_energy=self.core_energy,
            one_body=self.one_body.tolist(),
            two_body=self.two_body.reshape(-1).tolist(),
            orbitals=None if self.orbitals is None else self.orbitals.to_payload(),
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "FermionHamiltonian":
        try:
            n = int(payload["n_orbitals"])
            two_body = np.array(payload["two_body"], dtype=float).reshape(n, n, n, n)
            orbitals = payload["orbitals"]
            return cls(
                n,
                payload["core_energy"],
                payload["one_body"],
                two_body,
                None if orbitals is None else Orbitals.from_payload(orbitals),
            )
        except KeyError as exc:
            raise SchemaError(f"fermion_hamiltonian document missing field {exc}") from exc


# ---------------------------------------------------------------------------
# PauliString / QubitHamiltonian
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis in symplectic (x, z) masks.

    Qubit q carries X when only ``x_bits`` has bit q, Z when only
    ``z_bits`` does, Y when both do, identity otherwise.
    """

    n_qubits: int
    x_bits: int
    z_bits: int

    def __post_init__(self):
        n = int(self.n_qubits)
        if n < 1:
            raise ValidationError("a Pauli string needs at least one qubit")
        limit = 1 << n
        if not (0 <= self.x_bits < limit and 0 <= self.z_bits < limit):
            raise ValidationError("Pauli masks exceed the declared qubit count")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_letters(cls, letters: str) -> "PauliString":
        """Build from a letter string with qubit ``n-1`` leftmost."""
        n = len(letters)
        x = z = 0
        for position, letter in enumerate(letters):
            qubit = n - 1 - position
            if letter == "X":
                x |= 1 << qubit
            elif letter == "Y":
                x |= 1 << qubit
                z |= 1 << qubit
            elif letter == "Z":
                z |= 1 << qubit
            elif letter != "I":
                raise ValidationError(f"invalid Pauli letter {letter!r}")
        return cls(n, x, z)

    def to_letters(self) -> str:
        out = []
        for qubit in range(self.n_qubits - 1, -1, -1):
            x = (self.x_bits >> qubit) & 1
            z = (self.z_bits >> qubit) & 1
            out.append("IXZY"[x + 2 * z])
        return "".join(out)

    @property
    def support(self) -> int:
        """Mask of qubits carrying a non-identity letter."""
        return self.x_bits | self.z_bits

    @property
    def is_identity(self) -> bool:
        return self.support == 0

    def letter(self, qubit: int) -> str:
        x = (self.x_bits >> qubit) & 1
        z = (self.z_bits >> qubit) & 1
        return ("I", "X", "Z", "Y")[x + 2 * z]

    def to_payload(self) -> dict:
        return _envelope("pauli_string", letters=self.to_letters())

    @classmethod
    def from_payload(cls, payload: dict) -> "PauliString":
        try:
            return cls.from_letters(payload["letters"])
        except KeyError as exc:
            raise SchemaError(f"pauli_string document missing field {exc}") from exc


_COEFF_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class QubitHamiltonian:
    """Real-weighted sum of Pauli strings on a fixed qubit register.

    Terms are combined, pruned below 1e-12 and stored in lexicographic
    letter order, so equal operators have identical representations.
    """

    n_qubits: int
    terms: tuple[tuple[PauliString, float], ...]

    def __init__(self, n_qubits: int, terms: Iterable[tuple[PauliString, float]]):
        n = int(n_qubits)
        combined: dict[tuple[int, int], float] = {}
        for pauli, coeff in terms:
            if pauli.n_qubits != n:
                raise ValidationError("term width does not match Hamiltonian width")
            if isinstance(coeff, complex):
                if abs(coeff.imag) > _COEFF_CUTOFF:
                    raise ValidationError("coefficients must be real (Hermiticity)")
                coeff = coeff.real
            key = (pauli.x_bits, pauli.z_bits)
            combined[key] = combined.get(key, 0.0) + float(coeff)
        kept = [
            (PauliString(n, x, z), c)
            for (x, z), c in combined.items()
            if abs(c) >= _COEFF_CUTOFF
        ]
        kept.sort(key=lambda item: item[0].to_letters())
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "terms", tuple(kept))

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def identity_coefficient(self) -> float:
        for pauli, coeff in self.terms:
            if pauli.is_identity:
                return coeff
        return 0.0

    def coefficient(self, pauli: PauliString) -> float:
        for candidate, coeff in self.terms:
            if candidate == pauli:
                return coeff
        return 0.0

    def __add__(self, other: "QubitHamiltonian") -> "QubitHamiltonian":
        if not isinstance(other, QubitHamiltonian):
            return NotImplemented
        if other.n_qubits != self.n_qubits:
            raise ValidationError("cannot add Hamiltonians of different widths")
        return QubitHamiltonian(self.n_qubits, list(self.terms) + list(other.terms))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QubitHamiltonian):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_qubits, self.terms))

    def to_payload(self) -> dict:
        return _envelope(
            "qubit_hamiltonian",
            n_qubits=self.n_qubits,
            terms=[[pauli.to_letters(), coeff] for pauli, coeff in self.terms],
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "QubitHamiltonian":
        try:
            terms = [
                (PauliString.from_letters(letters), coeff)
                for letters, coeff in payload["terms"]
            ]
            return cls(payload["n_qubits"], terms)
        except KeyError as exc:
            raise SchemaError(f"qubit_hamiltonian document missing field {exc}") from exc


register_kind("structure", Structure.from_payload)
register_kind("orbitals", Orbitals.from_payload)
register_kind("wavefunction", Wavefunction.from_payload)
register_kind("fermion_hamiltonian", FermionHamiltonian.from_payload)
register_kind("pauli_string", PauliString.from_payload)
register_kind("qubit_hamiltonian", QubitHamiltonian.from_payload)
