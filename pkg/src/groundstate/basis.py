"""Gaussian basis sets for the built-in integral engine.

Only the minimal STO-3G parameterization is shipped, covering H through
Ne.  AO ordering follows atom input order with s shells before p shells
and p components ordered (x, y, z).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import Structure, _envelope, register_kind
from .errors import SchemaError, UnsupportedError

# STO-3G primitive exponents per element; contraction coefficients are the
# standard shared set below.  Indexed by atomic number.
_STO3G_EXPONENTS_1S = {
    1: (3.425250914, 0.6239137298, 0.1688554040),
    2: (6.362421394, 1.158922999, 0.3136497915),
    3: (16.11957475, 2.936200663, 0.7946504870),
    4: (30.16787069, 5.495115306, 1.487192653),
    5: (48.79111318, 8.887362172, 2.405267040),
    6: (71.61683735, 13.04509632, 3.530512160),
    7: (99.10616896, 18.05231239, 4.885660238),
    8: (130.7093214, 23.80886605, 6.443608313),
    9: (166.6791340, 30.36081233, 8.216820672),
    10: (207.0156070, 37.70815124, 10.20529731),
}
_STO3G_EXPONENTS_2SP = {
    3: (0.6362897469, 0.1478600533, 0.0480886784),
    4: (1.314833110, 0.3055389383, 0.0993707456),
    5: (2.236956142, 0.5198204999, 0.1690617600),
    6: (2.941249355, 0.6834830964, 0.2222899159),
    7: (3.780455879, 0.8784966449, 0.2857143744),
    8: (5.033151319, 1.169596125, 0.3803889600),
    9: (6.464803249, 1.502281245, 0.4885884864),
    10: (8.246315120, 1.916266291, 0.6232292721),
}
_STO3G_COEFFS_1S = (0.1543289673, 0.5353281423, 0.4446345422)
_STO3G_COEFFS_2S = (-0.09996722919, 0.3995128261, 0.7001154689)
_STO3G_COEFFS_2P = (0.1559162750, 0.6076837186, 0.3919573931)

_SUPPORTED_BASIS_NAMES = ("sto-3g",)


@dataclass(frozen=True, eq=False)
class Shell:
    """One contracted shell: angular momentum, primitives, center."""

    angular_momentum: int  # 0 = s, 1 = p
    exponents: tuple[float, ...]
    coefficients: tuple[float, ...]
    atom_index: int

    def __post_init__(self):
        if len(self.exponents) != len(self.coefficients):
            raise UnsupportedError("contraction length mismatch in shell data")
        if any(a <= 0 for a in self.exponents):
            raise UnsupportedError("primitive exponents must be positive")

    def __eq__(self, other):
        if not isinstance(other, Shell):
            return NotImplemented
        return (
            self.angular_momentum == other.angular_momentum
            and self.exponents == other.exponents
            and self.coefficients == other.coefficients
            and self.atom_index == other.atom_index
        )

    def __hash__(self):
        return hash((self.angular_momentum, self.exponents, self.atom_index))


@dataclass(frozen=True, eq=False)
class BasisFunction:
    """One normalized Cartesian AO: polynomial powers plus primitives."""

    center: np.ndarray
    powers: tuple[int, int, int]
    exponents: np.ndarray
    coefficients: np.ndarray  # includes primitive and contraction norms


@dataclass(frozen=True, eq=False)
class BasisSet:
    """Per-atom shell assignment for one molecular structure."""

    name: str
    structure: Structure
    shells: tuple[Shell, ...]

    def __init__(self, name: str, structure: Structure, shells: Sequence[Shell]):
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "structure", structure)
        object.__setattr__(self, "shells", tuple(shells))
        object.__setattr__(self, "_cache", {})

    @property
    def n_ao(self) -> int:
        return sum(1 if s.angular_momentum == 0 else 3 for s in self.shells)

    def basis_functions(self) -> tuple[BasisFunction, ...]:
        """Expand shells into normalized Cartesian basis functions."""
        cache = self._cache
        if "functions" not in cache:
            functions = []
            for shell in self.shells:
                center = self.structure.coordinates[shell.atom_index]
                if shell.angular_momentum == 0:
                    power_list = [(0, 0, 0)]
                else:
                    power_list = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
                for powers in power_list:
                    functions.append(_normalized_function(center, powers, shell))
            cache["functions"] = tuple(functions)
        return cache["functions"]

    def ao_integrals(self):
        """All AO-basis integrals for this basis, computed once and cached."""
        cache = self._cache
        if "integrals" not in cache:
            from .integrals import compute_integrals

            cache["integrals"] = compute_integrals(self.structure, self)
        return cache["integrals"]

    def __eq__(self, other):
        if not isinstance(other, BasisSet):
            return NotImplemented
        return (
            self.name == other.name
            and self.structure == other.structure
            and self.shells == other.shells
        )

    def __hash__(self):
        return hash((self.name, self.structure, self.shells))

    def to_payload(self) -> dict:
        return _envelope(
            "basis_set", name=self.name, structure=self.structure.to_payload()
        )

    @classmethod
    def from_payload(cls, payload: dict) -> "BasisSet":
        try:
            structure = Structure.from_payload(payload["structure"])
            return build_basis(structure, payload["name"])
        except KeyError as exc:
            raise SchemaError(f"basis_set document missing field {exc}") from exc


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _primitive_norm(alpha: float, powers: tuple[int, int, int]) -> float:
    l, m, n = powers
    total = l + m + n
    prefactor = (2.0 * alpha / np.pi) ** 0.75
    numerator = (4.0 * alpha) ** (total / 2.0)
    denominator = np.sqrt(
        _double_factorial(2 * l - 1)
        * _double_factorial(2 * m - 1)
        * _double_factorial(2 * n - 1)
    )
    return prefactor * numerator / denominator


def _normalized_function(center, powers, shell: Shell) -> BasisFunction:
    from .integrals import primitive_overlap

    exponents = np.array(shell.exponents, dtype=float)
    raw = np.array(shell.coefficients, dtype=float)
    scaled = raw * np.array([_primitive_norm(a, powers) for a in exponents])
    # Normalize the contracted function in its own overlap metric.
    self_overlap = 0.0
    for ci, ai in zip(scaled, exponents):
        for cj, aj in zip(scaled, exponents):
            self_overlap += ci * cj * primitive_overlap(ai, center, powers, aj, center, powers)
    scaled = scaled / np.sqrt(self_overlap)
    center = np.array(center, dtype=float)
    center.flags.writeable = False
    scaled.flags.writeable = False
    exponents.flags.writeable = False
    return BasisFunction(center, tuple(powers), exponents, scaled)


def build_basis(structure: Structure, name: str = "sto-3g") -> BasisSet:
    """Assign built-in shells to every atom of ``structure``."""
    key = name.lower()
    if key not in _SUPPORTED_BASIS_NAMES:
        raise UnsupportedError(
            f"unsupported basis '{name}'; available: {', '.join(_SUPPORTED_BASIS_NAMES)}"
        )
    shells = []
    for atom_index, z in enumerate(structure.atomic_numbers):
        if z not in _STO3G_EXPONENTS_1S:
            raise UnsupportedError(f"no {name} data for element Z={z}")
        shells.append(Shell(0, _STO3G_EXPONENTS_1S[z], _STO3G_COEFFS_1S, atom_index))
        if z >= 3:
            exps = _STO3G_EXPONENTS_2SP[z]
            shells.append(Shell(0, exps, _STO3G_COEFFS_2S, atom_index))
            shells.append(Shell(1, exps, _STO3G_COEFFS_2P, atom_index))
    return BasisSet(key, structure, shells)


register_kind("basis_set", BasisSet.from_payload)
