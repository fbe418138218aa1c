"""SMILES parsing, structural validation, and elementary molecular properties.

The grammar covered here is the organic subset plus bracket atoms (isotope,
chirality, explicit hydrogen count, formal charge, atom class), branches,
ring closures written as single digits or ``%nn``, aromatic atoms and bonds,
directional bonds (``/`` and ``\\``, recorded as plain single bonds), and
dot-separated fragments.  Parsing never canonicalises and never mutates the
input; a parsed :class:`Molecule` keeps the source string it came from.

Stereochemistry is read but not interpreted: chirality markers are stored on
the atom, bond direction is discarded.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

from .elements import (
    AROMATIC_BRACKET,
    AROMATIC_CAPABLE,
    AROMATIC_ORGANIC,
    DEFAULT_VALENCES,
    ELEMENTS,
)
from .errors import (
    DanglingBond,
    DuplicateBond,
    EmptyBranch,
    EmptyComponent,
    LeadingBond,
    RingBondConflict,
    SmilesParseError,
    UnbalancedParenthesis,
    UnknownSymbol,
    UnmatchedRingClosure,
    UnterminatedBracket,
)


class BondOrder(enum.Enum):
    """Bond orders distinguished by the grammar.

    The numeric values double as the deterministic byte codes used in
    fingerprint hashing, so they must never be renumbered.
    """

    SINGLE = 1
    DOUBLE = 2
    TRIPLE = 3
    QUADRUPLE = 4
    AROMATIC = 5

    @property
    def valence_units(self) -> float:
        """Contribution of one such bond to a strict valence sum."""
        return 1.5 if self is BondOrder.AROMATIC else float(self.value)


_BOND_SYMBOLS = {
    "-": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    "$": BondOrder.QUADRUPLE,
    ":": BondOrder.AROMATIC,
    "/": BondOrder.SINGLE,
    "\\": BondOrder.SINGLE,
}


class Chirality(enum.Enum):
    COUNTERCLOCKWISE = "@"
    CLOCKWISE = "@@"


@dataclass(frozen=True)
class Atom:
    """One atom as written.  ``element`` is always the capitalised symbol;
    aromaticity is carried separately in ``aromatic``."""

    element: str
    aromatic: bool = False
    formal_charge: int = 0
    explicit_h_count: int | None = None
    isotope: int | None = None
    chirality: Chirality | None = None
    in_bracket: bool = False

    def __post_init__(self) -> None:
        if self.element not in ELEMENTS:
            raise ValueError(f"unrecognised element symbol {self.element!r}")
        if self.aromatic and self.element not in AROMATIC_CAPABLE:
            raise ValueError(f"element {self.element!r} cannot be aromatic")
        if self.explicit_h_count is not None and not self.in_bracket:
            raise ValueError("explicit hydrogen counts exist only in brackets")


@dataclass(frozen=True)
class Bond:
    """An undirected bond between two atom indices (``from_idx < to_idx`` is
    not guaranteed; the pair is simply the order of appearance)."""

    from_idx: int
    to_idx: int
    order: BondOrder

    def __post_init__(self) -> None:
        if self.from_idx == self.to_idx:
            raise ValueError("a bond cannot join an atom to itself")

    def other(self, idx: int) -> int:
        return self.to_idx if idx == self.from_idx else self.from_idx


@dataclass(frozen=True)
class Molecule:
    """A parsed molecular graph.  May be disconnected (dot-separated input)."""

    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]
    source: str = ""

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, Bond], ...], ...]:
        """Per-atom tuple of ``(neighbor_index, bond)`` pairs, in bond order."""
        adj: list[list[tuple[int, Bond]]] = [[] for _ in self.atoms]
        for bond in self.bonds:
            adj[bond.from_idx].append((bond.to_idx, bond))
            adj[bond.to_idx].append((bond.from_idx, bond))
        return tuple(tuple(entries) for entries in adj)

    @cached_property
    def ring_bond_flags(self) -> tuple[bool, ...]:
        """True for each bond that lies on at least one cycle (a non-bridge)."""
        bridges = _find_bridges(len(self.atoms), self.bonds)
        return tuple(i not in bridges for i in range(len(self.bonds)))

    @cached_property
    def ring_atom_flags(self) -> tuple[bool, ...]:
        flags = [False] * len(self.atoms)
        for bond, in_ring in zip(self.bonds, self.ring_bond_flags):
            if in_ring:
                flags[bond.from_idx] = True
                flags[bond.to_idx] = True
        return tuple(flags)

    @cached_property
    def ring_sizes(self) -> frozenset[int]:
        """Sizes of the smallest cycle through each ring bond."""
        sizes = set()
        for i, bond in enumerate(self.bonds):
            if not self.ring_bond_flags[i]:
                continue
            length = _shortest_path_avoiding(self, bond.from_idx, bond.to_idx, i)
            if length is not None:
                sizes.add(length + 1)
        return frozenset(sizes)

    @cached_property
    def implicit_h(self) -> tuple[int, ...]:
        """Implicit hydrogen count per atom.

        Bracket atoms get no implicit hydrogens (their count is explicit or
        zero).  For bare organic-subset atoms the count fills the smallest
        allowed valence at or above the bond-order sum, with aromatic bonds
        counted as order one and one hydrogen slot surrendered by aromatic
        ring atoms; the count never goes below zero.
        """
        out = []
        for idx, atom in enumerate(self.atoms):
            if atom.in_bracket:
                out.append(0)
                continue
            allowed = DEFAULT_VALENCES.get(atom.element)
            if allowed is None:
                out.append(0)
                continue
            bond_sum = sum(
                1 if bond.order is BondOrder.AROMATIC else bond.order.value
                for _, bond in self.neighbors[idx]
            )
            target = next((v for v in allowed if v >= bond_sum), None)
            count = 0 if target is None else target - bond_sum
            if atom.aromatic and self.ring_atom_flags[idx]:
                count -= 1
            out.append(max(count, 0))
        return tuple(out)

    def total_h(self, idx: int) -> int:
        """Explicit-plus-implicit hydrogen count of atom ``idx``."""
        atom = self.atoms[idx]
        if atom.in_bracket:
            return atom.explicit_h_count or 0
        return self.implicit_h[idx]


def _find_bridges(n_atoms: int, bonds: tuple[Bond, ...]) -> set[int]:
    """Bond indices that are bridges (removing one disconnects its component)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_atoms)]
    for i, bond in enumerate(bonds):
        adj[bond.from_idx].append((bond.to_idx, i))
        adj[bond.to_idx].append((bond.from_idx, i))

    disc = [-1] * n_atoms
    low = [0] * n_atoms
    bridges: set[int] = set()
    counter = 0
    for root in range(n_atoms):
        if disc[root] != -1:
            continue
        # Iterative DFS; each stack frame remembers the edge it arrived by.
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]
        while stack:
            node, in_edge, child_pos = stack[-1]
            if disc[node] == -1:
                disc[node] = low[node] = counter
                counter += 1
            if child_pos < len(adj[node]):
                stack[-1] = (node, in_edge, child_pos + 1)
                nbr, edge = adj[node][child_pos]
                if edge == in_edge:
                    continue
                if disc[nbr] == -1:
                    stack.append((nbr, edge, 0))
                else:
                    low[node] = min(low[node], disc[nbr])
            else:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[node])
                    if low[node] > disc[parent]:
                        bridges.add(in_edge)
    return bridges


def _shortest_path_avoiding(mol: Molecule, start: int, goal: int, skip_bond: int) -> int | None:
    """BFS distance from start to goal without traversing bond ``skip_bond``."""
    if start == goal:
        return 0
    seen = {start}
    frontier = [start]
    dist = 0
    skipped = mol.bonds[skip_bond]
    while frontier:
        dist += 1
        nxt = []
        for node in frontier:
            for nbr, bond in mol.neighbors[node]:
                if bond is skipped:
                    continue
                if nbr == goal:
                    return dist
                if nbr not in seen:
                    seen.add(nbr)
                    nxt.append(nbr)
        frontier = nxt
    return None


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of :func:`validate`.

    ``valence_ok`` is None unless strict checking ran on a parseable string.
    ``verdict`` is the conjunction of every populated flag.
    """

    smiles: str
    parseable: bool
    ring_closures_ok: bool
    parentheses_ok: bool
    valence_ok: bool | None
    verdict: bool
    failure_detail: str = ""


class _Cursor:
    """Character cursor over a SMILES string."""

    __slots__ = ("text", "pos")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        return ch

    def take_digits(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start:self.pos]


class _Parser:
    def __init__(self, text: str):
        self.cur = _Cursor(text)
        self.atoms: list[Atom] = []
        self.bonds: list[Bond] = []
        self.bond_pairs: set[tuple[int, int]] = set()
        self.prev: int | None = None
        self.pending: BondOrder | None = None
        self.pending_offset = 0
        # each entry: (attachment atom, atom count at open, offset of '(')
        self.branch_stack: list[tuple[int, int, int]] = []
        # ring number -> (atom index, bond order written at open, offset)
        self.open_rings: dict[int, tuple[int, BondOrder | None, int]] = {}

    # -- helpers -------------------------------------------------------------

    def _take_pending(self) -> BondOrder | None:
        order = self.pending
        self.pending = None
        return order

    def _add_bond(self, a: int, b: int, order: BondOrder, offset: int) -> None:
        pair = (a, b) if a < b else (b, a)
        if pair in self.bond_pairs:
            raise DuplicateBond(
                f"second bond between atoms {pair[0]} and {pair[1]}", offset)
        self.bond_pairs.add(pair)
        self.bonds.append(Bond(a, b, order))

    def _add_atom(self, atom: Atom, offset: int) -> None:
        idx = len(self.atoms)
        self.atoms.append(atom)
        if self.prev is not None:
            order = self._take_pending()
            if order is None:
                both_aromatic = atom.aromatic and self.atoms[self.prev].aromatic
                order = BondOrder.AROMATIC if both_aromatic else BondOrder.SINGLE
            self._add_bond(self.prev, idx, order, offset)
        self.prev = idx

    def _ring_closure(self, number: int, offset: int) -> None:
        if self.prev is None:
            raise LeadingBond("ring closure before any atom", offset)
        order = self._take_pending()
        if number not in self.open_rings:
            self.open_rings[number] = (self.prev, order, offset)
            return
        other, other_order, _ = self.open_rings.pop(number)
        if other == self.prev:
            raise UnmatchedRingClosure(
                f"ring bond {number} opened and closed on the same atom", offset)
        if order is not None and other_order is not None and order is not other_order:
            raise RingBondConflict(
                f"ring bond {number} written as {other_order.name.lower()} on one "
                f"end and {order.name.lower()} on the other", offset)
        resolved = order or other_order
        if resolved is None:
            both_aromatic = (self.atoms[other].aromatic
                             and self.atoms[self.prev].aromatic)
            resolved = BondOrder.AROMATIC if both_aromatic else BondOrder.SINGLE
        self._add_bond(other, self.prev, resolved, offset)

    # -- bracket atoms ---------------------------------------------------------

    def _read_bracket_symbol(self) -> tuple[str, bool]:
        cur = self.cur
        ch = cur.peek()
        if ch.islower():
            two = cur.text[cur.pos:cur.pos + 2]
            if two in AROMATIC_BRACKET:
                cur.pos += 2
                return two.capitalize(), True
            if ch in AROMATIC_BRACKET:
                cur.take()
                return ch.upper(), True
            raise UnknownSymbol(f"unknown aromatic symbol {ch!r} in bracket", cur.pos)
        if ch.isupper():
            two = cur.text[cur.pos:cur.pos + 2]
            if len(two) == 2 and two[1].islower() and two in ELEMENTS:
                cur.pos += 2
                return two, False
            if ch in ELEMENTS:
                cur.take()
                return ch, False
            raise UnknownSymbol(f"unknown element symbol {ch!r} in bracket", cur.pos)
        raise UnknownSymbol(f"expected an element symbol, found {ch!r}", cur.pos)

    def _parse_bracket_atom(self) -> Atom:
        cur = self.cur
        start = cur.pos
        cur.take()  # consume '['
        digits = cur.take_digits()
        isotope = int(digits) if digits else None

        if not cur.peek():
            raise UnterminatedBracket("bracket atom never closed", start)
        element, aromatic = self._read_bracket_symbol()
        if aromatic and element not in AROMATIC_CAPABLE:
            raise UnknownSymbol(f"{element} cannot be aromatic", start)

        chirality = None
        if cur.peek() == "@":
            cur.take()
            if cur.peek() == "@":
                cur.take()
                chirality = Chirality.CLOCKWISE
            else:
                chirality = Chirality.COUNTERCLOCKWISE

        h_count = None
        if cur.peek() == "H":
            cur.take()
            digits = cur.take_digits()
            h_count = int(digits) if digits else 1

        charge = 0
        if cur.peek() in ("+", "-"):
            sign = 1 if cur.take() == "+" else -1
            digits = cur.take_digits()
            if digits:
                charge = sign * int(digits)
            else:
                charge = sign
                while cur.peek() == ("+" if sign > 0 else "-"):
                    cur.take()
                    charge += sign

        if cur.peek() == ":":  # atom class: accepted and discarded
            cur.take()
            if not cur.take_digits():
                raise UnknownSymbol("atom class marker ':' without digits", cur.pos)

        if cur.peek() != "]":
            if not cur.peek():
                raise UnterminatedBracket("bracket atom never closed", start)
            raise UnknownSymbol(
                f"unexpected {cur.peek()!r} inside bracket atom", cur.pos)
        cur.take()
        return Atom(
            element=element,
            aromatic=aromatic,
            formal_charge=charge,
            explicit_h_count=h_count if h_count is not None else 0,
            isotope=isotope,
            chirality=chirality,
            in_bracket=True,
        )

    # -- main loop -------------------------------------------------------------

    def parse(self) -> Molecule:
        cur = self.cur
        if not cur.text:
            raise SmilesParseError("empty SMILES string")
        while cur.peek():
            offset = cur.pos
            ch = cur.peek()

            if ch == "[":
                self._add_atom(self._parse_bracket_atom(), offset)
            elif ch.isdigit():
                cur.take()
                self._ring_closure(int(ch), offset)
            elif ch == "%":
                cur.take()
                two = cur.text[cur.pos:cur.pos + 2]
                if len(two) < 2 or not two.isdigit():
                    raise UnknownSymbol("'%' ring closure needs two digits", offset)
                cur.pos += 2
                self._ring_closure(int(two), offset)
            elif ch in _BOND_SYMBOLS:
                cur.take()
                if self.prev is None:
                    raise LeadingBond(f"bond {ch!r} before any atom", offset)
                if self.pending is not None:
                    raise DanglingBond(
                        "bond symbol followed by another bond symbol", offset)
                self.pending = _BOND_SYMBOLS[ch]
                self.pending_offset = offset
            elif ch == "(":
                cur.take()
                if self.prev is None:
                    raise UnbalancedParenthesis("branch opened before any atom", offset)
                if self.pending is not None:
                    raise DanglingBond("bond symbol before a branch opening", offset)
                self.branch_stack.append((self.prev, len(self.atoms), offset))
            elif ch == ")":
                cur.take()
                if self.pending is not None:
                    raise DanglingBond("bond symbol at the end of a branch", offset)
                if not self.branch_stack:
                    raise UnbalancedParenthesis("')' without matching '('", offset)
                attach, count_at_open, _ = self.branch_stack.pop()
                if len(self.atoms) == count_at_open:
                    raise EmptyBranch("branch contains no atoms", offset)
                self.prev = attach
            elif ch == ".":
                cur.take()
                if self.pending is not None:
                    raise DanglingBond("bond symbol before a dot separator", offset)
                if self.prev is None:
                    raise EmptyComponent("dot separator with no atoms before it", offset)
                self.prev = None
            else:
                atom = self._read_organic_atom()
                if atom is None:
                    raise UnknownSymbol(f"unexpected character {ch!r}", offset)
                self._add_atom(atom, offset)

        if self.pending is not None:
            raise DanglingBond(
                "bond symbol at end of input", self.pending_offset)
        if self.branch_stack:
            raise UnbalancedParenthesis(
                "'(' without matching ')'", self.branch_stack[-1][2])
        if self.open_rings:
            number, (_, _, offset) = min(self.open_rings.items(), key=lambda kv: kv[1][2])
            raise UnmatchedRingClosure(f"ring bond {number} never closed", offset)
        if self.prev is None and self.atoms:
            raise EmptyComponent("dot separator at end of input", len(cur.text) - 1)
        return Molecule(tuple(self.atoms), tuple(self.bonds), cur.text)

    def _read_organic_atom(self) -> Atom | None:
        cur = self.cur
        two = cur.text[cur.pos:cur.pos + 2]
        if two in ("Cl", "Br"):
            cur.pos += 2
            return Atom(element=two)
        ch = cur.peek()
        if ch in "BCNOPSFI":
            cur.take()
            return Atom(element=ch)
        if ch in AROMATIC_ORGANIC:
            cur.take()
            return Atom(element=ch.upper(), aromatic=True)
        return None


def parse_smiles(text: str) -> Molecule:
    """Parse ``text`` into a :class:`Molecule`.

    Raises a :class:`~evalkit.errors.SmilesParseError` subclass naming the
    first grammar violation encountered, with its character offset.
    """
    return _Parser(text).parse()


def strict_valence_ok(mol: Molecule) -> bool:
    """Check bare organic-subset atoms against the default valence table.

    The bond-order sum counts aromatic bonds as 1.5 and is rounded up; an
    atom passes when that sum does not exceed its largest allowed valence.
    Bracket atoms are exempt (their hydrogens and charge are explicit).
    """
    for idx, atom in enumerate(mol.atoms):
        if atom.in_bracket:
            continue
        allowed = DEFAULT_VALENCES.get(atom.element)
        if allowed is None:
            continue
        units = sum(bond.order.valence_units for _, bond in mol.neighbors[idx])
        if math.ceil(units) > allowed[-1]:
            return False
    return True


def validate(text: str, strict: bool = False) -> ValidityReport:
    """Grade a candidate SMILES string without raising.

    Leading and trailing whitespace is ignored.  An empty string fails as
    unparseable.  ``ring_closures_ok`` and ``parentheses_ok`` stay True
    unless the failure is specifically of that class, so a report pinpoints
    what broke; ``verdict`` is the conjunction of all populated flags.
    """
    stripped = text.strip()
    if not stripped:
        return ValidityReport(
            smiles=text, parseable=False, ring_closures_ok=True,
            parentheses_ok=True, valence_ok=None, verdict=False,
            failure_detail="empty string")
    try:
        mol = parse_smiles(stripped)
    except SmilesParseError as exc:
        ring_ok = not isinstance(exc, (UnmatchedRingClosure, RingBondConflict))
        paren_ok = not isinstance(exc, (UnbalancedParenthesis, EmptyBranch))
        return ValidityReport(
            smiles=text, parseable=False, ring_closures_ok=ring_ok,
            parentheses_ok=paren_ok, valence_ok=None, verdict=False,
            failure_detail=str(exc))
    valence = strict_valence_ok(mol) if strict else None
    verdict = valence is not False
    detail = "" if verdict else "valence limit exceeded"
    return ValidityReport(
        smiles=text, parseable=True, ring_closures_ok=True,
        parentheses_ok=True, valence_ok=valence, verdict=verdict,
        failure_detail=detail)


def molecular_formula(mol: Molecule) -> str:
    """Hill-order molecular formula with implicit hydrogens filled in.

    Carbon first, then hydrogen, then the rest alphabetically; with no
    carbon present every element sorts alphabetically.  A net formal charge
    is appended as ``+``/``-`` with a magnitude when above one.
    """
    counts: Counter[str] = Counter()
    for idx, atom in enumerate(mol.atoms):
        counts[atom.element] += 1
        counts["H"] += mol.total_h(idx)
    if counts["H"] == 0:
        del counts["H"]

    if counts.get("C"):
        symbols = ["C"] + (["H"] if "H" in counts else [])
        symbols += sorted(s for s in counts if s not in ("C", "H"))
    else:
        symbols = sorted(counts)

    parts = [f"{s}{counts[s]}" if counts[s] > 1 else s for s in symbols]
    charge = sum(atom.formal_charge for atom in mol.atoms)
    if charge:
        sign = "+" if charge > 0 else "-"
        magnitude = str(abs(charge)) if abs(charge) > 1 else ""
        parts.append(f"{sign}{magnitude}")
    return "".join(parts)
