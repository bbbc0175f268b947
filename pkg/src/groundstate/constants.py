"""Physical constants, element data and unit conventions.

All quantities inside the package are in Hartree atomic units: lengths in
Bohr, energies in Hartree.  XYZ files are the single place where Angstrom
enters; they are converted on ingestion.
"""

from __future__ import annotations

ANGSTROM_TO_BOHR = 1.8897259886

#: Elements supported by the built-in basis data (Z = 1..10).
ELEMENT_SYMBOLS = ("H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne")

SYMBOL_TO_Z = {symbol: z for z, symbol in enumerate(ELEMENT_SYMBOLS, start=1)}
Z_TO_SYMBOL = {z: symbol for symbol, z in SYMBOL_TO_Z.items()}

MAX_SUPPORTED_Z = len(ELEMENT_SYMBOLS)

#: Valence electron count per element (charge-neutral atom).
VALENCE_ELECTRONS = {
    1: 1,   # H
    2: 2,   # He
    3: 1,   # Li
    4: 2,   # Be
    5: 3,   # B
    6: 4,   # C
    7: 5,   # N
    8: 6,   # O
    9: 7,   # F
    10: 8,  # Ne
}

#: Valence spatial-orbital count per element: 1s for H/He, 2s+2p for Li..Ne.
VALENCE_ORBITALS = {z: (1 if z <= 2 else 4) for z in range(1, 11)}
