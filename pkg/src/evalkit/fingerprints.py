"""Molecular fingerprints and Tanimoto similarity.

Three schemes, all bit-exact across platforms because every hash is FNV-1a
(64-bit) over deterministic byte strings:

* ``morgan`` — circular neighbourhoods.  Each atom starts from an invariant
  hashing (element, degree, formal charge, total hydrogens, aromatic flag,
  ring membership); each iteration rehashes the atom's invariant with the
  sorted (bond-order code, neighbour invariant) pairs.  Every invariant
  produced at every radius sets bit ``invariant mod width``.
* ``path`` — all simple linear paths of 1 to ``max_path_bonds`` bonds
  (bonds and atoms both distinct within a path).  A path's descriptor is the
  lexicographically smaller of its forward and reverse readings, so the two
  traversal directions hash identically.
* ``keys`` — a fixed list of named structural predicates; bit *k* is key
  *k*'s truth value.  Key sets are loadable from a text file.

Bit vectors are arbitrary-precision integers; bit i set means feature i
present.  Widths must be powers of two.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError, SchemeMismatch
from .smiles import BondOrder, Molecule

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    """The 64-bit FNV-1a hash of ``data``."""
    value = FNV_OFFSET
    for byte in data:
        value ^= byte
        value = (value * FNV_PRIME) & _MASK64
    return value


@dataclass(frozen=True)
class Fingerprint:
    """A bit vector tagged with the scheme and parameters that produced it.

    Comparisons (Tanimoto) are only defined between fingerprints whose
    scheme, parameters, and width all agree.
    """

    bits: int
    width: int
    scheme: str
    params: tuple[tuple[str, object], ...]

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.width:
            raise ValueError("bit vector wider than the declared width")

    @property
    def popcount(self) -> int:
        return self.bits.bit_count()

    def to_hex(self) -> str:
        """Zero-padded hex string of ceil(width/4) digits, most significant
        first, so every fingerprint of a given width prints one length."""
        return format(self.bits, f"0{(self.width + 3) // 4}x")


def _require_width(width: int) -> None:
    if width < 4 or width & (width - 1):
        raise InputError(f"fingerprint width must be a power of two >= 4, got {width}")


def _initial_invariants(mol: Molecule) -> list[int]:
    invariants = []
    for idx, atom in enumerate(mol.atoms):
        payload = "|".join((
            atom.element,
            str(len(mol.neighbors[idx])),
            str(atom.formal_charge),
            str(mol.total_h(idx)),
            str(int(atom.aromatic)),
            str(int(mol.ring_atom_flags[idx])),
        ))
        invariants.append(fnv1a64(payload.encode("ascii")))
    return invariants


def morgan_fingerprint(mol: Molecule, radius: int = 2, width: int = 2048) -> Fingerprint:
    """Circular fingerprint of ``mol``.

    Invariants depend only on the graph, never on atom input order, so any
    two SMILES writings of the same molecule give identical bits.  Growing
    the radius only adds invariants: the radius-r bit set is a subset of the
    radius-(r+1) set for the same molecule and width.
    """
    _require_width(width)
    if radius < 0:
        raise InputError("radius must be non-negative")

    invariants = _initial_invariants(mol)
    bits = 0
    for inv in invariants:
        bits |= 1 << (inv % width)
    for _ in range(radius):
        updated = []
        for idx in range(len(mol.atoms)):
            pairs = sorted(
                (bond.order.value, invariants[nbr])
                for nbr, bond in mol.neighbors[idx]
            )
            payload = invariants[idx].to_bytes(8, "big") + b"".join(
                code.to_bytes(1, "big") + inv.to_bytes(8, "big")
                for code, inv in pairs
            )
            updated.append(fnv1a64(payload))
        invariants = updated
        for inv in invariants:
            bits |= 1 << (inv % width)
    return Fingerprint(bits, width, "morgan",
                       (("radius", radius), ("width", width)))


def _path_descriptor(mol: Molecule, atom_path: list[int], bond_path: list) -> tuple:
    """Canonical descriptor of one path: entries of (element, aromatic flag,
    following-bond code), direction chosen as the lexicographic minimum."""
    forward = []
    for i, atom_idx in enumerate(atom_path):
        atom = mol.atoms[atom_idx]
        bond_code = bond_path[i].order.value if i < len(bond_path) else 0
        forward.append((atom.element, int(atom.aromatic), bond_code))
    backward = []
    for i in range(len(atom_path) - 1, -1, -1):
        atom = mol.atoms[atom_path[i]]
        bond_code = bond_path[i - 1].order.value if i > 0 else 0
        backward.append((atom.element, int(atom.aromatic), bond_code))
    return min(tuple(forward), tuple(backward))


def enumerate_path_descriptors(mol: Molecule, max_path_bonds: int = 7) -> set[tuple]:
    """Canonical descriptors of every simple path of 1..max_path_bonds bonds.

    Paths repeat neither bonds nor atoms; each undirected path contributes
    one descriptor regardless of direction.
    """
    found: set[tuple] = set()
    for start in range(len(mol.atoms)):
        stack = [(start, [start], [])]
        while stack:
            node, atom_path, bond_path = stack.pop()
            if bond_path:
                found.add(_path_descriptor(mol, atom_path, bond_path))
            if len(bond_path) == max_path_bonds:
                continue
            for nbr, bond in mol.neighbors[node]:
                if nbr in atom_path:
                    continue
                stack.append((nbr, atom_path + [nbr], bond_path + [bond]))
    return found


def _descriptor_bytes(descriptor: tuple) -> bytes:
    return "|".join(f"{e},{a},{b}" for e, a, b in descriptor).encode("ascii")


def path_fingerprint(mol: Molecule, max_path_bonds: int = 7, width: int = 2048) -> Fingerprint:
    """Linear-path fingerprint of ``mol``."""
    _require_width(width)
    if max_path_bonds < 1:
        raise InputError("max_path_bonds must be at least 1")
    bits = 0
    for descriptor in enumerate_path_descriptors(mol, max_path_bonds):
        bits |= 1 << (fnv1a64(_descriptor_bytes(descriptor)) % width)
    return Fingerprint(bits, width, "path",
                       (("max_path_bonds", max_path_bonds), ("width", width)))


# --- key-based fingerprints --------------------------------------------------

_BOND_NAMES = {
    "single": BondOrder.SINGLE,
    "double": BondOrder.DOUBLE,
    "triple": BondOrder.TRIPLE,
    "quadruple": BondOrder.QUADRUPLE,
    "aromatic": BondOrder.AROMATIC,
}


@dataclass(frozen=True)
class KeyDescriptor:
    """One named structural predicate, parsed from its text form.

    The grammar is closed:

    * ``element:<symbol>`` — an atom of that element exists
    * ``count:<symbol>:<k>`` — at least k atoms of that element exist
    * ``ring`` — any ring atom exists
    * ``ring-size:<n>`` — some ring bond's smallest cycle has n atoms
    * ``bond:<single|double|triple|quadruple|aromatic>`` — bond order present
    * ``path:<E1-E2-...>`` — a simple path with that element sequence exists
      (either direction)
    """

    text: str

    @classmethod
    def parse(cls, text: str) -> "KeyDescriptor":
        parts = text.split(":")
        head = parts[0]
        if head == "ring" and len(parts) == 1:
            return cls(text)
        if head == "element" and len(parts) == 2 and parts[1]:
            return cls(text)
        if head == "count" and len(parts) == 3 and parts[1] and parts[2].isdigit() \
                and int(parts[2]) >= 1:
            return cls(text)
        if head == "ring-size" and len(parts) == 2 and parts[1].isdigit() \
                and int(parts[1]) >= 3:
            return cls(text)
        if head == "bond" and len(parts) == 2 and parts[1] in _BOND_NAMES:
            return cls(text)
        if head == "path" and len(parts) == 2 and parts[1]:
            elements = parts[1].split("-")
            if len(elements) >= 2 and all(elements):
                return cls(text)
        raise InputError(f"unrecognised key descriptor {text!r}")

    def matches(self, mol: Molecule) -> bool:
        parts = self.text.split(":")
        head = parts[0]
        if head == "element":
            return any(a.element == parts[1] for a in mol.atoms)
        if head == "count":
            needed = int(parts[2])
            return sum(a.element == parts[1] for a in mol.atoms) >= needed
        if head == "ring":
            return any(mol.ring_atom_flags)
        if head == "ring-size":
            return int(parts[1]) in mol.ring_sizes
        if head == "bond":
            wanted = _BOND_NAMES[parts[1]]
            return any(b.order is wanted for b in mol.bonds)
        sequence = tuple(parts[1].split("-"))
        return (_element_path_exists(mol, sequence)
                or _element_path_exists(mol, sequence[::-1]))


def _element_path_exists(mol: Molecule, sequence: tuple[str, ...]) -> bool:
    for start, atom in enumerate(mol.atoms):
        if atom.element != sequence[0]:
            continue
        stack = [(start, 1, frozenset((start,)))]
        while stack:
            node, depth, visited = stack.pop()
            if depth == len(sequence):
                return True
            for nbr, _ in mol.neighbors[node]:
                if nbr in visited:
                    continue
                if mol.atoms[nbr].element == sequence[depth]:
                    stack.append((nbr, depth + 1, visited | {nbr}))
    return False


@dataclass(frozen=True)
class KeySet:
    """An ordered list of key descriptors; key ids are dense from zero."""

    name: str
    keys: tuple[KeyDescriptor, ...]

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def digest(self) -> str:
        listing = "\n".join(f"{i}\t{k.text}" for i, k in enumerate(self.keys))
        return hashlib.sha256(listing.encode("utf-8")).hexdigest()[:16]

    @classmethod
    def load(cls, path: str | Path) -> "KeySet":
        """Read ``<id><TAB><descriptor>`` lines; ids must count up from 0."""
        keys = []
        for lineno, line in enumerate(
                Path(path).read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise InputError(
                    f"{path} line {lineno}: expected '<id>\\t<descriptor>'")
            if not fields[0].isdigit() or int(fields[0]) != len(keys):
                raise InputError(
                    f"{path} line {lineno}: key ids must be dense from 0")
            keys.append(KeyDescriptor.parse(fields[1]))
        if not keys:
            raise InputError(f"key set file {path} defines no keys")
        return cls(name=Path(path).stem, keys=tuple(keys))


_DEFAULT_KEY_TEXTS = (
    "element:C", "element:N", "element:O", "element:S", "element:P",
    "element:F", "element:Cl", "element:Br", "element:I", "element:B",
    "count:C:2", "count:C:4", "count:C:8", "count:C:16",
    "count:N:2", "count:O:2", "count:O:4", "count:S:2",
    "ring",
    "ring-size:3", "ring-size:4", "ring-size:5", "ring-size:6",
    "ring-size:7", "ring-size:8",
    "bond:single", "bond:double", "bond:triple", "bond:aromatic",
    "path:C-C", "path:C-O", "path:C-N", "path:C-S",
    "path:C-C-O", "path:C-C-N", "path:C-C-C", "path:O-C-O",
    "path:N-C-C-O", "path:C-C-C-C", "path:C-N-C",
)

DEFAULT_KEYSET = KeySet(
    name="default-40",
    keys=tuple(KeyDescriptor.parse(t) for t in _DEFAULT_KEY_TEXTS),
)


def key_fingerprint(mol: Molecule, keyset: KeySet = DEFAULT_KEYSET) -> Fingerprint:
    """Key-based fingerprint: bit k is descriptor k's truth value.

    The width is the key count (not necessarily a power of two).
    """
    bits = 0
    for i, key in enumerate(keyset.keys):
        if key.matches(mol):
            bits |= 1 << i
    return Fingerprint(bits, len(keyset), "keys",
                       (("keyset", keyset.digest), ("width", len(keyset))))


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """Tanimoto similarity |a AND b| / |a OR b|.

    Two empty fingerprints count as identical (1.0).  Comparing different
    schemes, parameters, or widths raises :class:`SchemeMismatch`.
    """
    if (a.scheme, a.params, a.width) != (b.scheme, b.params, b.width):
        raise SchemeMismatch(
            f"cannot compare {a.scheme}{a.params} against {b.scheme}{b.params}")
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union
