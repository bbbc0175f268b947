"""Gaussian integrals over contracted s/p shells.

Implements overlap, kinetic, nuclear-attraction and two-electron repulsion
integrals with Hermite expansions (McMurchie-Davidson recurrences) and the
Boys function.  Everything is in Hartree atomic units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaln

from .data import Structure
from .errors import ValidationError


def boys(n_max: int, x: float) -> np.ndarray:
    """Boys function values F_0(x) .. F_{n_max}(x)."""
    x = float(x)
    out = np.empty(n_max + 1)
    if x < 1e-13:
        for n in range(n_max + 1):
            out[n] = 1.0 / (2 * n + 1) - x / (2 * n + 3)
        return out
    # Regularized incomplete gamma gives the top order; downward recursion
    # fills the rest stably.
    n = n_max
    a = n + 0.5
    top = np.exp(gammaln(a)) * gammainc(a, x) / (2.0 * x**a)
    out[n] = top
    exp_mx = np.exp(-x)
    for k in range(n - 1, -1, -1):
        out[k] = (2.0 * x * out[k + 1] + exp_mx) / (2 * k + 1)
    return out


def _hermite_expansion(la: int, lb: int, a: float, b: float, x_ab: float) -> np.ndarray:
    """Hermite expansion coefficients E[i, j, t] for one Cartesian direction."""
    p = a + b
    mu = a * b / p
    x_pa = -(b / p) * x_ab
    x_pb = (a / p) * x_ab
    e = np.zeros((la + 1, lb + 1, la + lb + 1))
    e[0, 0, 0] = np.exp(-mu * x_ab * x_ab)
    for i in range(1, la + 1):
        for t in range(i + 1):
            val = x_pa * e[i - 1, 0, t]
            if t > 0:
                val += e[i - 1, 0, t - 1] / (2.0 * p)
            if t + 1 <= i - 1:
                val += (t + 1) * e[i - 1, 0, t + 1]
            e[i, 0, t] = val
    for j in range(1, lb + 1):
        for i in range(la + 1):
            for t in range(i + j + 1):
                val = x_pb * e[i, j - 1, t]
                if t > 0:
                    val += e[i, j - 1, t - 1] / (2.0 * p)
                if t + 1 <= i + j - 1:
                    val += (t + 1) * e[i, j - 1, t + 1]
                e[i, j, t] = val
    return e


def _hermite_coulomb(t_max: int, u_max: int, v_max: int, p: float, pc) -> np.ndarray:
    """Hermite Coulomb integrals R[t, u, v] at auxiliary order zero."""
    order = t_max + u_max + v_max
    f = boys(order, p * float(np.dot(pc, pc)))
    base = np.array([(-2.0 * p) ** n * f[n] for n in range(order + 1)])
    table = {}

    def r(t: int, u: int, v: int, n: int) -> float:
        if t < 0 or u < 0 or v < 0:
            return 0.0
        if t == 0 and u == 0 and v == 0:
            return base[n]
        key = (t, u, v, n)
        if key in table:
            return table[key]
        if t > 0:
            val = (t - 1) * r(t - 2, u, v, n + 1) + pc[0] * r(t - 1, u, v, n + 1)
        elif u > 0:
            val = (u - 1) * r(t, u - 2, v, n + 1) + pc[1] * r(t, u - 1, v, n + 1)
        else:
            val = (v - 1) * r(t, u, v - 2, n + 1) + pc[2] * r(t, u, v - 1, n + 1)
        table[key] = val
        return val

    out = np.empty((t_max + 1, u_max + 1, v_max + 1))
    for t in range(t_max + 1):
        for u in range(u_max + 1):
            for v in range(v_max + 1):
                out[t, u, v] = r(t, u, v, 0)
    return out


def primitive_overlap(a, center_a, powers_a, b, center_b, powers_b) -> float:
    """Overlap of two unnormalized Cartesian Gaussian primitives."""
    p = a + b
    value = (np.pi / p) ** 1.5
    for d in range(3):
        e = _hermite_expansion(
            powers_a[d], powers_b[d], a, b, center_a[d] - center_b[d]
        )
        value *= e[powers_a[d], powers_b[d], 0]
    return float(value)


@dataclass(frozen=True)
class _PrimitivePair:
    p: float
    center: np.ndarray
    weight: float  # product of contraction coefficients
    e_x: np.ndarray  # Hermite coefficient rows over t, per dimension
    e_y: np.ndarray
    e_z: np.ndarray


def _pair_list(f, g) -> list[_PrimitivePair]:
    pairs = []
    ab = f.center - g.center
    for ca, a in zip(f.coefficients, f.exponents):
        for cb, b in zip(g.coefficients, g.exponents):
            p = a + b
            center = (a * f.center + b * g.center) / p
            rows = []
            for d in range(3):
                e = _hermite_expansion(f.powers[d], g.powers[d], a, b, ab[d])
                rows.append(e[f.powers[d], g.powers[d], :])
            pairs.append(_PrimitivePair(p, center, ca * cb, rows[0], rows[1], rows[2]))
    return pairs


@dataclass(frozen=True, eq=False)
class AOIntegrals:
    """All AO-basis integrals for one structure/basis combination."""

    overlap: np.ndarray
    kinetic: np.ndarray
    nuclear_attraction: np.ndarray
    eri: np.ndarray
    nuclear_repulsion: float

    def __post_init__(self):
        s = self.overlap
        if np.min(np.linalg.eigvalsh(s)) <= 0.0:
            raise ValidationError("overlap matrix is not positive definite")
        for arr in (self.overlap, self.kinetic, self.nuclear_attraction, self.eri):
            arr.flags.writeable = False

    @property
    def core_hamiltonian(self) -> np.ndarray:
        return self.kinetic + self.nuclear_attraction


def _one_electron(f, g, structure: Structure):
    """(overlap, kinetic, nuclear attraction) for one contracted pair."""
    s_val = t_val = v_val = 0.0
    ab = f.center - g.center
    charges = structure.atomic_numbers
    centers = structure.coordinates
    for ca, a in zip(f.coefficients, f.exponents):
        for cb, b in zip(g.coefficients, g.exponents):
            p = a + b
            weight = ca * cb
            center = (a * f.center + b * g.center) / p
            e_tabs = []
            for d in range(3):
                # lb + 2 columns are needed by the kinetic-energy factors.
                e_tabs.append(
                    _hermite_expansion(f.powers[d], g.powers[d] + 2, a, b, ab[d])
                )
            volume = (np.pi / p) ** 1.5
            e0 = [e_tabs[d][f.powers[d], g.powers[d], 0] for d in range(3)]
            s_val += weight * volume * e0[0] * e0[1] * e0[2]

            kin = []
            for d in range(3):
                i, j = f.powers[d], g.powers[d]
                term = b * (2 * j + 1) * e_tabs[d][i, j, 0]
                term -= 2.0 * b * b * e_tabs[d][i, j + 2, 0]
                if j >= 2:
                    term -= 0.5 * j * (j - 1) * e_tabs[d][i, j - 2, 0]
                kin.append(term)
            t_val += weight * volume * (
                kin[0] * e0[1] * e0[2] + e0[0] * kin[1] * e0[2] + e0[0] * e0[1] * kin[2]
            )

            rows = [e_tabs[d][f.powers[d], g.powers[d], :] for d in range(3)]
            t_max = f.powers[0] + g.powers[0]
            u_max = f.powers[1] + g.powers[1]
            v_max = f.powers[2] + g.powers[2]
            for z, nucleus in zip(charges, centers):
                r_tab = _hermite_coulomb(t_max, u_max, v_max, p, center - nucleus)
                acc = 0.0
                for t in range(t_max + 1):
                    for u in range(u_max + 1):
                        for v in range(v_max + 1):
                            acc += rows[0][t] * rows[1][u] * rows[2][v] * r_tab[t, u, v]
                v_val -= z * weight * (2.0 * np.pi / p) * acc
    return s_val, t_val, v_val


def _contracted_eri(bra_pairs, ket_pairs) -> float:
    value = 0.0
    for bra in bra_pairs:
        bra_support = [
            (t, u, v, bra.e_x[t] * bra.e_y[u] * bra.e_z[v])
            for t in range(len(bra.e_x))
            for u in range(len(bra.e_y))
            for v in range(len(bra.e_z))
            if bra.e_x[t] * bra.e_y[u] * bra.e_z[v] != 0.0
        ]
        for ket in ket_pairs:
            alpha = bra.p * ket.p / (bra.p + ket.p)
            prefactor = (
                2.0
                * np.pi**2.5
                / (bra.p * ket.p * np.sqrt(bra.p + ket.p))
                * bra.weight
                * ket.weight
            )
            t_max = len(bra.e_x) + len(ket.e_x) - 2
            u_max = len(bra.e_y) + len(ket.e_y) - 2
            v_max = len(bra.e_z) + len(ket.e_z) - 2
            r_tab = _hermite_coulomb(t_max, u_max, v_max, alpha, bra.center - ket.center)
            acc = 0.0
            for t, u, v, e_bra in bra_support:
                for tau in range(len(ket.e_x)):
                    for nu in range(len(ket.e_y)):
                        for phi in range(len(ket.e_z)):
                            e_ket = ket.e_x[tau] * ket.e_y[nu] * ket.e_z[phi]
                            if e_ket == 0.0:
                                continue
                            sign = -1.0 if (tau + nu + phi) % 2 else 1.0
                            acc += e_bra * e_ket * sign * r_tab[t + tau, u + nu, v + phi]
            value += prefactor * acc
    return value


def compute_integrals(structure: Structure, basis) -> AOIntegrals:
    """All AO integrals plus the nuclear repulsion energy."""
    functions = basis.basis_functions()
    n = len(functions)
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s_val, t_val, v_val = _one_electron(functions[i], functions[j], structure)
            s[i, j] = s[j, i] = s_val
            t[i, j] = t[j, i] = t_val
            v[i, j] = v[j, i] = v_val

    pair_cache = {}

    def pairs(i, j):
        key = (i, j)
        if key not in pair_cache:
            pair_cache[key] = _pair_list(functions[i], functions[j])
        return pair_cache[key]

    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(n):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if ij < kl:
                        continue
                    value = _contracted_eri(pairs(i, j), pairs(k, l))
                    for a, b in ((i, j), (j, i)):
                        for c, d in ((k, l), (l, k)):
                            eri[a, b, c, d] = value
                            eri[c, d, a, b] = value
    return AOIntegrals(s, t, v, eri, structure.nuclear_repulsion())
