"""Element tables used by the SMILES parser and validator."""

from __future__ import annotations

# Every IUPAC element symbol, for bracket-atom validation.
ELEMENTS: frozenset[str] = frozenset((
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr",
    "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb",
    "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm",
    "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds",
    "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
))

# Atoms writable without brackets.  Two-letter symbols must be matched before
# their one-letter prefixes (Cl before C, Br before B).
ORGANIC_SUBSET: tuple[str, ...] = ("B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I")
TWO_LETTER_ORGANIC: tuple[str, ...] = ("Cl", "Br")

# Elements that may carry the aromatic flag at all, and the subset writable
# as bare lowercase symbols outside brackets.
AROMATIC_CAPABLE: frozenset[str] = frozenset({"B", "C", "N", "O", "P", "S", "Se", "As"})
AROMATIC_ORGANIC: frozenset[str] = frozenset({"b", "c", "n", "o", "p", "s"})
AROMATIC_BRACKET: frozenset[str] = frozenset({"b", "c", "n", "o", "p", "s", "se", "as"})

# Allowed valences for organic-subset atoms, smallest first.  Used both for
# implicit-hydrogen assignment and for strict validity checking.
DEFAULT_VALENCES: dict[str, tuple[int, ...]] = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}
