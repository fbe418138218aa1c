"""Parser, validator, and molecular property tests."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evalkit.errors import (
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
from evalkit.smiles import (
    BondOrder,
    Chirality,
    molecular_formula,
    parse_smiles,
    strict_valence_ok,
    validate,
)

import genmol


class TestParsing:
    def test_linear_chain(self):
        mol = parse_smiles("CCO")
        assert [a.element for a in mol.atoms] == ["C", "C", "O"]
        assert len(mol.bonds) == 2
        assert all(b.order is BondOrder.SINGLE for b in mol.bonds)
        assert mol.source == "CCO"

    def test_ring(self):
        mol = parse_smiles("C1CCCCC1")
        assert len(mol.atoms) == 6
        assert len(mol.bonds) == 6
        assert all(mol.ring_atom_flags)

    def test_aromatic_ring(self):
        mol = parse_smiles("c1ccccc1")
        assert all(a.aromatic for a in mol.atoms)
        assert all(a.element == "C" for a in mol.atoms)
        assert all(b.order is BondOrder.AROMATIC for b in mol.bonds)

    def test_branch(self):
        mol = parse_smiles("CC(=O)O")
        assert len(mol.atoms) == 4
        orders = sorted(b.order.name for b in mol.bonds)
        assert orders == ["DOUBLE", "SINGLE", "SINGLE"]
        # the double bond hangs off atom 1
        double = next(b for b in mol.bonds if b.order is BondOrder.DOUBLE)
        assert {double.from_idx, double.to_idx} == {1, 2}

    def test_bond_symbols(self):
        assert parse_smiles("C=C").bonds[0].order is BondOrder.DOUBLE
        assert parse_smiles("C#C").bonds[0].order is BondOrder.TRIPLE
        assert parse_smiles("C$C").bonds[0].order is BondOrder.QUADRUPLE
        assert parse_smiles("C:C").bonds[0].order is BondOrder.AROMATIC
        assert parse_smiles("C-C").bonds[0].order is BondOrder.SINGLE

    def test_directional_bonds_become_single(self):
        mol = parse_smiles("C/C=C\\C")
        orders = [b.order for b in mol.bonds]
        assert orders == [BondOrder.SINGLE, BondOrder.DOUBLE, BondOrder.SINGLE]

    def test_two_letter_elements(self):
        mol = parse_smiles("ClCBr")
        assert [a.element for a in mol.atoms] == ["Cl", "C", "Br"]

    def test_bracket_atom_fields(self):
        atom = parse_smiles("[13C@@H2+]").atoms[0]
        assert atom.element == "C"
        assert atom.isotope == 13
        assert atom.chirality is Chirality.CLOCKWISE
        assert atom.explicit_h_count == 2
        assert atom.formal_charge == 1
        assert atom.in_bracket

    def test_bracket_charge_styles(self):
        assert parse_smiles("[O-2]").atoms[0].formal_charge == -2
        assert parse_smiles("[O--]").atoms[0].formal_charge == -2
        assert parse_smiles("[Fe+++]").atoms[0].formal_charge == 3
        assert parse_smiles("[NH4+]").atoms[0].explicit_h_count == 4

    def test_bracket_atom_class_discarded(self):
        mol = parse_smiles("[CH3:7]C")
        assert mol.atoms[0].element == "C"
        assert mol.atoms[0].explicit_h_count == 3

    def test_bracket_aromatic_two_letter(self):
        atom = parse_smiles("[se]").atoms[0]
        assert atom.element == "Se"
        assert atom.aromatic

    def test_dot_separates_fragments(self):
        mol = parse_smiles("[Na+].[Cl-]")
        assert len(mol.atoms) == 2
        assert len(mol.bonds) == 0

    def test_percent_ring_closure(self):
        mol = parse_smiles("C%12CCCCC%12")
        assert len(mol.bonds) == 6
        assert all(mol.ring_atom_flags)

    def test_ring_bond_order_written_on_either_side(self):
        for text in ("C=1CCCCC1", "C1CCCCC=1", "C=1CCCCC=1"):
            mol = parse_smiles(text)
            closure = mol.bonds[-1]
            assert closure.order is BondOrder.DOUBLE

    def test_ring_digit_reuse_after_closing(self):
        mol = parse_smiles("C1CC1C1CC1")
        assert len(mol.atoms) == 6
        # two three-membered rings plus the chain bond joining them
        assert len(mol.bonds) == 7
        assert mol.ring_sizes == frozenset({3})

    def test_implicit_bond_between_aromatic_atoms_is_aromatic(self):
        mol = parse_smiles("cc")
        assert mol.bonds[0].order is BondOrder.AROMATIC

    def test_explicit_single_between_aromatic_atoms(self):
        mol = parse_smiles("c1ccccc1-c1ccccc1")
        bridge = mol.bonds[6]
        assert bridge.order is BondOrder.SINGLE


class TestParseErrors:
    @pytest.mark.parametrize("text,error", [
        ("C1CC", UnmatchedRingClosure),
        ("C11", UnmatchedRingClosure),
        ("C=1CC-1", RingBondConflict),
        ("C(", UnbalancedParenthesis),
        ("CC)C", UnbalancedParenthesis),
        ("(CC)", UnbalancedParenthesis),
        ("C()C", EmptyBranch),
        ("=CC", LeadingBond),
        ("1CC1", LeadingBond),
        ("CC=", DanglingBond),
        ("C==C", DanglingBond),
        ("C=(C)O", DanglingBond),
        ("C(C=)O", DanglingBond),
        ("C=.C", DanglingBond),
        (".CC", EmptyComponent),
        ("CC.", EmptyComponent),
        ("C..C", EmptyComponent),
        ("C12CC12", DuplicateBond),
        ("[C", UnterminatedBracket),
        ("[", UnterminatedBracket),
        ("Cq", UnknownSymbol),
        ("C*", UnknownSymbol),
        ("[Xq]", UnknownSymbol),
        ("[]", UnknownSymbol),
        ("C C", UnknownSymbol),
        ("", SmilesParseError),
    ])
    def test_error_class(self, text, error):
        with pytest.raises(error):
            parse_smiles(text)

    def test_error_offset_reported(self):
        with pytest.raises(UnknownSymbol) as info:
            parse_smiles("CCq")
        assert info.value.offset == 2
        assert "offset 2" in str(info.value)

    def test_after_dot_bond_is_leading(self):
        with pytest.raises(LeadingBond):
            parse_smiles("C.=C")


class TestValidate:
    def test_valid_lenient(self):
        report = validate("CCO")
        assert report.parseable and report.ring_closures_ok and report.parentheses_ok
        assert report.valence_ok is None
        assert report.verdict

    def test_ring_failure_flags(self):
        report = validate("C1CC")
        assert not report.parseable
        assert not report.ring_closures_ok
        assert report.parentheses_ok
        assert not report.verdict
        assert "ring" in report.failure_detail

    def test_paren_failure_flags(self):
        report = validate("C(")
        assert not report.parseable
        assert report.ring_closures_ok
        assert not report.parentheses_ok
        assert not report.verdict

    def test_strict_valence_failure(self):
        report = validate("CC(C)(C)(C)C", strict=True)
        assert report.parseable
        assert report.valence_ok is False
        assert not report.verdict

    def test_lenient_ignores_valence(self):
        report = validate("CC(C)(C)(C)C")
        assert report.valence_ok is None
        assert report.verdict

    def test_strict_valence_pass(self):
        report = validate("c1ccccc1", strict=True)
        assert report.valence_ok is True
        assert report.verdict

    def test_empty_string(self):
        report = validate("")
        assert not report.parseable
        assert not report.verdict

    def test_whitespace_trimmed(self):
        assert validate("  CCO \n").verdict

    def test_bracket_atoms_exempt_from_valence(self):
        # Explicit decorations take responsibility for their own chemistry.
        assert validate("[C](C)(C)(C)(C)C", strict=True).verdict

    def test_verdict_is_conjunction(self, valid_smiles_corpus):
        for text in valid_smiles_corpus[:50]:
            report = validate(text, strict=True)
            flags = [report.parseable, report.ring_closures_ok,
                     report.parentheses_ok]
            if report.valence_ok is not None:
                flags.append(report.valence_ok)
            assert report.verdict == all(flags)


class TestStrictValence:
    def test_pentavalent_carbon_rejected(self):
        assert not strict_valence_ok(parse_smiles("CC(C)(C)(C)C"))

    def test_sulfur_hexavalent_allowed(self):
        assert strict_valence_ok(parse_smiles("OS(=O)(=O)O"))

    def test_nitrogen_pentavalent_allowed(self):
        assert strict_valence_ok(parse_smiles("O=[N+]([O-])c1ccccc1"))

    def test_halogen_divalent_rejected(self):
        assert not strict_valence_ok(parse_smiles("CClC"))


class TestMolecularFormula:
    @pytest.mark.parametrize("text,formula", [
        ("CCO", "C2H6O"),
        ("c1ccccc1", "C6H6"),
        ("[NH4+]", "H4N+"),
        ("CC(=O)O", "C2H4O2"),
        ("Cc1ccccc1", "C7H8"),
        ("c1ccncc1", "C5H5N"),
        ("c1ccoc1", "C4H4O"),
        ("C[N+](C)(C)C", "C4H12N+"),
        ("[O-2]", "O-2"),
        ("[Na+].[Cl-]", "ClNa"),
        ("[13CH4]", "CH4"),
        ("O", "H2O"),
        ("N#N", "N2"),
        ("OS(=O)(=O)O", "H2O4S"),
    ])
    def test_formula(self, text, formula):
        assert molecular_formula(parse_smiles(text)) == formula

    def test_carbon_first_then_hydrogen_then_alphabetical(self):
        assert molecular_formula(parse_smiles("ClCBr")) == "CH2BrCl"


class TestRingPerception:
    def test_chain_has_no_ring_atoms(self):
        mol = parse_smiles("CCCCC")
        assert not any(mol.ring_atom_flags)
        assert not any(mol.ring_bond_flags)

    def test_ring_sizes(self):
        assert parse_smiles("C1CC1").ring_sizes == frozenset({3})
        assert parse_smiles("c1ccccc1").ring_sizes == frozenset({6})
        assert parse_smiles("C1CC1C1CCCC1").ring_sizes == frozenset({3, 5})

    def test_bridge_not_flagged(self):
        mol = parse_smiles("C1CC1CC1CC1")
        flags = dict(zip(
            [(b.from_idx, b.to_idx) for b in mol.bonds], mol.ring_bond_flags))
        # the two chain bonds joining the rings are bridges
        assert sum(1 for v in flags.values() if not v) == 2


class TestGeneratedGraphs:
    """The writer in genmol emits SMILES for a known graph; parsing must
    recover exactly that graph (elements, flags, charges, bond orders)."""

    def test_parse_recovers_generated_graph(self):
        rng = random.Random(4242)
        for _ in range(300):
            gmol = genmol.random_molecule(rng)
            text, order = genmol.write_smiles(gmol, rng=rng)
            parsed = parse_smiles(text)
            assert len(parsed.atoms) == len(gmol.atoms), text
            for position, generated_idx in enumerate(order):
                expected = gmol.atoms[generated_idx]
                actual = parsed.atoms[position]
                assert actual.element == expected.element, text
                assert actual.aromatic == expected.aromatic, text
                assert actual.formal_charge == expected.charge, text
            position_of = {g: p for p, g in enumerate(order)}
            expected_bonds = {
                tuple(sorted((position_of[a], position_of[b]))) + (order_name,)
                for (a, b), order_name in gmol.bonds.items()
            }
            actual_bonds = {
                tuple(sorted((b.from_idx, b.to_idx))) + (b.order.name.lower(),)
                for b in parsed.bonds
            }
            assert actual_bonds == expected_bonds, text

    def test_rerooted_writings_parse_to_same_formula(self):
        rng = random.Random(99)
        for _ in range(100):
            gmol = genmol.random_molecule(rng, max_atoms=10)
            text_a, _ = genmol.write_smiles(gmol, root=0)
            root_b = rng.randrange(len(gmol.atoms))
            text_b, _ = genmol.write_smiles(gmol, root=root_b)
            assert (molecular_formula(parse_smiles(text_a))
                    == molecular_formula(parse_smiles(text_b)))


@given(st.text(alphabet="CNOPSFIcnos123456789()=#[]+-.%@Hl\\/Br", max_size=40))
@settings(max_examples=300, deadline=None)
def test_parser_never_crashes_unexpectedly(text):
    """Any input either parses or raises a SmilesParseError; nothing else."""
    try:
        mol = parse_smiles(text)
    except SmilesParseError:
        return
    assert len(mol.atoms) >= 1
    for bond in mol.bonds:
        assert 0 <= bond.from_idx < len(mol.atoms)
        assert 0 <= bond.to_idx < len(mol.atoms)
        assert bond.from_idx != bond.to_idx


@given(st.sampled_from([
    "CCO", "c1ccccc1", "CC(=O)Oc1ccccc1C(=O)O", "[NH4+]", "C1CC2CCC1CC2",
]))
def test_parse_is_deterministic(text):
    first = parse_smiles(text)
    second = parse_smiles(text)
    assert first.atoms == second.atoms
    assert first.bonds == second.bonds
