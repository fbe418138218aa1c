#!/usr/bin/env python3
"""Run both evaluation flows with a prediction set equal to its references.

This is the smoke experiment for a fresh checkout: identity predictions must
score perfectly on every exact metric, so any other number printed here
means the environment or the toolkit is broken.  Reports land in
``out/identity/`` next to this script unless another directory is given.
"""

import argparse
import json
import sys
from pathlib import Path

from evalkit.harness import (
    Task,
    eval_d2i,
    eval_i2d,
    load_predictions,
    render_report,
)

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"


def build_identity_predictions(out_dir: Path) -> tuple[Path, Path]:
    records = [
        json.loads(line)
        for line in (FIXTURES / "pairs_100.jsonl").read_text().splitlines()
        if line.strip()
    ]
    i2d = out_dir / "predictions_i2d.jsonl"
    with i2d.open("w") as handle:
        for record in records:
            handle.write(json.dumps({
                "id": record["id"],
                "reference": record["smiles"],
                "hypothesis": record["smiles"],
            }) + "\n")
    d2i = out_dir / "predictions_d2i.jsonl"
    with d2i.open("w") as handle:
        for record in records:
            handle.write(json.dumps({
                "id": record["id"],
                "reference": record["indication"],
                "hypothesis": record["indication"],
            }) + "\n")
    return i2d, d2i


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(ROOT / "out" / "identity"),
                        help="directory for prediction files and reports")
    args = parser.parse_args()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    i2d_path, d2i_path = build_identity_predictions(out_dir)

    i2d_report = eval_i2d(
        load_predictions(i2d_path, Task.INDICATION_TO_DRUG),
        embeddings_ref=FIXTURES / "embeddings_ref.txt",
        embeddings_hyp=FIXTURES / "embeddings_ref.txt",
        text2mol_embeddings=FIXTURES / "text2mol_identity.txt",
    )
    d2i_report = eval_d2i(load_predictions(d2i_path, Task.DRUG_TO_INDICATION))

    print("indication -> drug (identity)")
    print(render_report(i2d_report, "table"))
    print("drug -> indication (identity)")
    print(render_report(d2i_report, "table"))

    for name, report in (("report_i2d.json", i2d_report),
                         ("report_d2i.json", d2i_report)):
        (out_dir / name).write_text(render_report(report, "json"))
    print(f"JSON reports written to {out_dir}")

    perfect = (
        i2d_report.exact == 1.0
        and i2d_report.levenshtein == 0.0
        and i2d_report.validity == 1.0
        and i2d_report.maccs_fts == i2d_report.rdk_fts == i2d_report.morgan_fts == 1.0
        and d2i_report.bleu2 == d2i_report.bleu4 == 1.0
        and d2i_report.rouge1 == d2i_report.rouge2 == d2i_report.rouge_l == 1.0
    )
    if not perfect:
        print("identity run did not score perfectly", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
