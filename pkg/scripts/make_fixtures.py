#!/usr/bin/env python3
"""Regenerate the generated test fixtures, deterministically.

Reads tests/fixtures/valid_smiles.txt (hand-curated, not generated) and
writes:

    tests/fixtures/pairs_100.jsonl        100 drug/indication records
    tests/fixtures/embeddings_ref.txt     100 x 8 embedding file
    tests/fixtures/embeddings_hyp.txt     100 x 8 embedding file (different)
    tests/fixtures/text2mol_identity.txt  100 paired rows, ref == hyp

Byte-identical on every run: the only randomness is the package's own
seeded PRNG and all floats are fixed-format.
"""

from __future__ import annotations

import json
from pathlib import Path

from evalkit.rng import Xoshiro256StarStar

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"

ACTIONS = ("treatment", "management", "relief", "prevention", "control",
           "symptomatic treatment", "long term management")
QUALIFIERS = ("mild to moderate", "severe", "chronic", "acute", "recurrent",
              "treatment resistant", "newly diagnosed")
CONDITIONS = (
    "hypertension", "bacterial infections of the skin", "seasonal allergic rhinitis",
    "major depressive disorder", "type 2 diabetes mellitus", "rheumatoid arthritis",
    "gastroesophageal reflux disease", "partial onset seizures", "chronic heart failure",
    "migraine headache", "asthma and bronchospasm", "postoperative nausea and vomiting",
    "iron deficiency anemia", "hypercholesterolemia", "urinary tract infections",
    "glaucoma and ocular hypertension",
)
POPULATIONS = ("in adults", "in children over six years of age", "in elderly patients",
               "in hospitalized patients", "in adults and adolescents",
               "when first line therapy has failed")
SOURCES = ("drugbank", "chembl", "other")


def _uniform(rng: Xoshiro256StarStar, low: float, high: float) -> float:
    return low + (high - low) * (rng.next_u64() / 2.0 ** 64)


def _pick(rng: Xoshiro256StarStar, options):
    return options[rng.below(len(options))]


def make_pairs(smiles: list[str]) -> None:
    rng = Xoshiro256StarStar(2024)
    with (FIXTURES / "pairs_100.jsonl").open("w", encoding="utf-8") as out:
        for i, s in enumerate(smiles[:100], start=1):
            indication = (
                f"For the {_pick(rng, ACTIONS)} of {_pick(rng, QUALIFIERS)} "
                f"{_pick(rng, CONDITIONS)} {_pick(rng, POPULATIONS)}"
            )
            record = {
                "id": f"d{i:03d}",
                "smiles": s,
                "indication": indication,
                "source": _pick(rng, SOURCES),
            }
            out.write(json.dumps(record, ensure_ascii=False) + "\n")


def make_embeddings(name: str, seed: int, rows: int = 100, dim: int = 8,
                    shift: float = 0.0) -> None:
    rng = Xoshiro256StarStar(seed)
    with (FIXTURES / name).open("w", encoding="utf-8") as out:
        out.write(f"D={dim}\n")
        for _ in range(rows):
            values = [_uniform(rng, -1.0, 1.0) + shift for _ in range(dim)]
            out.write(" ".join(f"{v:.6f}" for v in values) + "\n")


def make_text2mol_identity(rows: int = 100, dim: int = 8) -> None:
    rng = Xoshiro256StarStar(7)
    with (FIXTURES / "text2mol_identity.txt").open("w", encoding="utf-8") as out:
        out.write(f"D={dim}\n")
        for _ in range(rows):
            vector = [f"{_uniform(rng, -1.0, 1.0):.6f}" for _ in range(dim)]
            out.write(" ".join(vector + vector) + "\n")


def main() -> None:
    smiles = [
        line.strip()
        for line in (FIXTURES / "valid_smiles.txt").read_text().splitlines()
        if line.strip()
    ]
    if len(smiles) < 100:
        raise SystemExit("valid_smiles.txt must hold at least 100 strings")
    make_pairs(smiles)
    make_embeddings("embeddings_ref.txt", seed=11)
    make_embeddings("embeddings_hyp.txt", seed=12, shift=0.25)
    make_text2mol_identity()
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
