"""Evaluation flows for both translation directions, and report rendering.

A prediction file is JSONL: one object per line with keys ``id``,
``reference``, and ``hypothesis``.  The harness turns one prediction file
into one report row whose columns mirror the paper-style results tables:

* drug→indication: BLEU-2, BLEU-4, ROUGE-1, ROUGE-2, ROUGE-L, METEOR,
  Text2Mol
* indication→drug: BLEU, Exact, Levenshtein, MACCS, RDK, Morgan, FCD,
  Text2Mol, Validity

Optional columns stay None ("not computed") unless their inputs were
supplied; in particular FCD is never silently reported as 0.  Text2Mol is a
cosine over externally produced paired embeddings (file format: ``D=<dim>``
header, then per prediction row the reference vector followed by the
hypothesis vector on one line).

Rendering is deterministic byte for byte: fixed column orders, fixed float
formatting, no timestamps.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

from . import fingerprints as fp
from .errors import (
    DuplicateId,
    EmbeddingRowMismatch,
    EmptySet,
    InputError,
    SchemaMismatch,
    SmilesParseError,
    TaskMismatch,
)
from .frechet import fcd_from_files, read_vector_rows
from .smiles import parse_smiles, validate
from .textmetrics import (
    CorpusPair,
    TokenMode,
    bleu,
    exact_match,
    levenshtein,
    meteor,
    rouge_l,
    rouge_n,
)

FLOAT_FORMAT = "{:.4f}"
ABSENT_CELL = "—"


class Task(enum.Enum):
    DRUG_TO_INDICATION = "drug_to_indication"
    INDICATION_TO_DRUG = "indication_to_drug"


@dataclass(frozen=True)
class PredictionRow:
    id: str
    reference: str
    hypothesis: str


@dataclass(frozen=True)
class PredictionFile:
    rows: tuple[PredictionRow, ...]
    task: Task

    def __len__(self) -> int:
        return len(self.rows)


def load_predictions(path: str | Path, task: Task) -> PredictionFile:
    """Read a JSONL prediction file.

    Every line needs ``id``, ``reference``, and ``hypothesis``; ids must be
    unique and references non-empty.  Hypotheses may be empty strings (a
    model can fail to produce output), and for the indication→drug task
    they may be arbitrarily malformed SMILES; grading that is the point.
    """
    path = Path(path)
    rows: list[PredictionRow] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaMismatch(
                    f"{path} line {lineno}: invalid JSON ({exc})") from exc
            missing = [k for k in ("id", "reference", "hypothesis")
                       if k not in payload]
            if missing:
                raise SchemaMismatch(
                    f"{path} line {lineno}: missing keys {missing}")
            row = PredictionRow(
                id=str(payload["id"]),
                reference=str(payload["reference"]),
                hypothesis=str(payload["hypothesis"]),
            )
            if row.id in seen:
                raise DuplicateId(f"{path} line {lineno}: duplicate id {row.id!r}")
            if not row.reference.strip():
                raise InputError(f"{path} line {lineno}: empty reference")
            seen.add(row.id)
            rows.append(row)
    if not rows:
        raise EmptySet(f"{path}: no prediction rows")
    return PredictionFile(rows=tuple(rows), task=task)


@dataclass(frozen=True)
class D2IReport:
    bleu2: float
    bleu4: float
    rouge1: float
    rouge2: float
    rouge_l: float
    meteor: float
    text2mol: float | None
    rows: int
    metadata: dict


@dataclass(frozen=True)
class I2DReport:
    bleu: float
    exact: float
    levenshtein: float
    maccs_fts: float | None
    rdk_fts: float | None
    morgan_fts: float | None
    fcd: float | None
    text2mol: float | None
    validity: float
    rows: int
    skipped_invalid: int
    metadata: dict


def _require_task(preds: PredictionFile, expected: Task) -> None:
    if preds.task is not expected:
        raise TaskMismatch(
            f"prediction file loaded for {preds.task.value}, "
            f"evaluated as {expected.value}")


def _mean_paired_cosine(path: str | Path, n_rows: int) -> float:
    """Mean cosine similarity over a paired-embedding file.

    A zero vector has no direction; its pair contributes 0.
    """
    dim, rows = read_vector_rows(path, row_multiplier=2)
    if len(rows) != n_rows:
        raise EmbeddingRowMismatch(
            f"{path}: {len(rows)} embedding rows for {n_rows} predictions")
    total = 0.0
    for row in rows:
        ref, hyp = row[:dim], row[dim:]
        norm_r = math.sqrt(sum(x * x for x in ref))
        norm_h = math.sqrt(sum(x * x for x in hyp))
        if norm_r == 0.0 or norm_h == 0.0:
            continue
        total += sum(r * h for r, h in zip(ref, hyp)) / (norm_r * norm_h)
    return total / n_rows


def eval_d2i(preds: PredictionFile,
             text2mol_embeddings: str | Path | None = None) -> D2IReport:
    """Score a drug→indication prediction file (word-level text metrics)."""
    _require_task(preds, Task.DRUG_TO_INDICATION)
    references = [row.reference for row in preds.rows]
    hypotheses = [row.hypothesis for row in preds.rows]
    corpus = CorpusPair.from_strings(references, hypotheses, TokenMode.WORD)

    text2mol = None
    if text2mol_embeddings is not None:
        text2mol = _mean_paired_cosine(text2mol_embeddings, len(preds))

    metadata = {
        "task": Task.DRUG_TO_INDICATION.value,
        "rows": len(preds),
        "tokenization": TokenMode.WORD.value,
        "bleu_smoothing_epsilon": 1e-9,
        "rouge_scoring": "f1",
        "meteor_matching": "exact unigrams, no stemming or synonyms",
        "text2mol": ("mean cosine over paired embeddings"
                     if text2mol is not None else "not computed"),
    }
    return D2IReport(
        bleu2=bleu(corpus, max_n=2),
        bleu4=bleu(corpus, max_n=4),
        rouge1=rouge_n(corpus, 1),
        rouge2=rouge_n(corpus, 2),
        rouge_l=rouge_l(corpus),
        meteor=meteor(corpus),
        text2mol=text2mol,
        rows=len(preds),
        metadata=metadata,
    )


def eval_i2d(preds: PredictionFile,
             embeddings_ref: str | Path | None = None,
             embeddings_hyp: str | Path | None = None,
             text2mol_embeddings: str | Path | None = None,
             strict_validity: bool = False,
             radius: int = 2,
             bits: int = 2048,
             max_path_bonds: int = 7,
             keyset: fp.KeySet | None = None,
             bleu_max_n: int = 4,
             smiles_token_mode: TokenMode = TokenMode.CHAR) -> I2DReport:
    """Score an indication→drug prediction file (SMILES metrics).

    Fingerprint similarities average only over pairs where both sides
    parse; the excluded pair count is reported as ``skipped_invalid``.  FCD
    requires both embedding files and is otherwise reported as not computed.
    """
    _require_task(preds, Task.INDICATION_TO_DRUG)
    if keyset is None:
        keyset = fp.DEFAULT_KEYSET
    if (embeddings_ref is None) != (embeddings_hyp is None):
        raise InputError(
            "FCD needs both reference and hypothesis embedding files")

    references = [row.reference for row in preds.rows]
    hypotheses = [row.hypothesis for row in preds.rows]

    corpus = CorpusPair.from_strings(references, hypotheses, smiles_token_mode)
    bleu_score = bleu(corpus, max_n=bleu_max_n)
    exact = exact_match(references, hypotheses)
    mean_lev = sum(
        levenshtein(r, h) for r, h in zip(references, hypotheses)) / len(preds)
    validity = sum(
        1 for h in hypotheses if validate(h, strict=strict_validity).verdict
    ) / len(preds)

    maccs_sum = rdk_sum = morgan_sum = 0.0
    zero_zero = {"maccs": 0, "rdk": 0, "morgan": 0}
    used = 0
    for ref_text, hyp_text in zip(references, hypotheses):
        try:
            ref_mol = parse_smiles(ref_text.strip())
            hyp_mol = parse_smiles(hyp_text.strip())
        except SmilesParseError:
            continue
        used += 1
        for label, make in (
            ("maccs", lambda m: fp.key_fingerprint(m, keyset)),
            ("rdk", lambda m: fp.path_fingerprint(m, max_path_bonds, bits)),
            ("morgan", lambda m: fp.morgan_fingerprint(m, radius, bits)),
        ):
            fp_ref = make(ref_mol)
            fp_hyp = make(hyp_mol)
            if fp_ref.bits == 0 and fp_hyp.bits == 0:
                zero_zero[label] += 1
            score = fp.tanimoto(fp_ref, fp_hyp)
            if label == "maccs":
                maccs_sum += score
            elif label == "rdk":
                rdk_sum += score
            else:
                morgan_sum += score
    skipped = len(preds) - used

    fcd = None
    if embeddings_ref is not None and embeddings_hyp is not None:
        fcd = fcd_from_files(embeddings_ref, embeddings_hyp)

    text2mol = None
    if text2mol_embeddings is not None:
        text2mol = _mean_paired_cosine(text2mol_embeddings, len(preds))

    metadata = {
        "task": Task.INDICATION_TO_DRUG.value,
        "rows": len(preds),
        "tokenization": smiles_token_mode.value,
        "bleu_max_n": bleu_max_n,
        "bleu_smoothing_epsilon": 1e-9,
        "levenshtein": "character level on raw strings",
        "validity_mode": "strict" if strict_validity else "lenient",
        "fingerprint_hash": "fnv1a-64",
        "morgan_radius": radius,
        "fingerprint_width": bits,
        "max_path_bonds": max_path_bonds,
        "keyset": keyset.name,
        "keyset_digest": keyset.digest,
        "zero_zero_tanimoto_pairs": zero_zero,
        "fcd": ("unbiased covariance (N-1), clamped eigenvalues"
                if fcd is not None else "not computed"),
        "text2mol": ("mean cosine over paired embeddings"
                     if text2mol is not None else "not computed"),
    }
    return I2DReport(
        bleu=bleu_score,
        exact=exact,
        levenshtein=mean_lev,
        maccs_fts=maccs_sum / used if used else None,
        rdk_fts=rdk_sum / used if used else None,
        morgan_fts=morgan_sum / used if used else None,
        fcd=fcd,
        text2mol=text2mol,
        validity=validity,
        rows=len(preds),
        skipped_invalid=skipped,
        metadata=metadata,
    )


# --- rendering ---------------------------------------------------------------

# (paper table header, report attribute) in table order
D2I_COLUMNS: tuple[tuple[str, str], ...] = (
    ("BLEU-2", "bleu2"),
    ("BLEU-4", "bleu4"),
    ("ROUGE-1", "rouge1"),
    ("ROUGE-2", "rouge2"),
    ("ROUGE-L", "rouge_l"),
    ("METEOR", "meteor"),
    ("Text2Mol", "text2mol"),
)

I2D_COLUMNS: tuple[tuple[str, str], ...] = (
    ("BLEU", "bleu"),
    ("Exact", "exact"),
    ("Levenshtein", "levenshtein"),
    ("MACCS", "maccs_fts"),
    ("RDK", "rdk_fts"),
    ("Morgan", "morgan_fts"),
    ("FCD", "fcd"),
    ("Text2Mol", "text2mol"),
    ("Validity", "validity"),
)


def _columns_for(report: D2IReport | I2DReport) -> tuple[tuple[str, str], ...]:
    return D2I_COLUMNS if isinstance(report, D2IReport) else I2D_COLUMNS


def _render_table(report: D2IReport | I2DReport) -> str:
    columns = _columns_for(report)
    cells = []
    for header, attr in columns:
        value = getattr(report, attr)
        cells.append(ABSENT_CELL if value is None else FLOAT_FORMAT.format(value))
    widths = [max(len(h), len(c)) for (h, _), c in zip(columns, cells)]
    header_line = "  ".join(h.ljust(w) for (h, _), w in zip(columns, widths))
    rule = "  ".join("-" * w for w in widths)
    value_line = "  ".join(c.ljust(w) for c, w in zip(cells, widths))
    lines = [header_line.rstrip(), rule, value_line.rstrip()]
    if isinstance(report, I2DReport):
        lines.append(f"skipped_invalid: {report.skipped_invalid}")
    for key, value in report.metadata.items():
        lines.append(f"# {key}: {value}")
    return "\n".join(lines) + "\n"


def _render_csv(report: D2IReport | I2DReport) -> str:
    columns = _columns_for(report)
    headers = ",".join(header for header, _ in columns)
    values = ",".join(
        "" if getattr(report, attr) is None else repr(getattr(report, attr))
        for _, attr in columns)
    return f"{headers}\n{values}\n"


def _render_json(report: D2IReport | I2DReport) -> str:
    columns = _columns_for(report)
    payload: dict = {
        "task": report.metadata["task"],
        "scores": {attr: getattr(report, attr) for _, attr in columns},
        "rows": report.rows,
    }
    if isinstance(report, I2DReport):
        payload["skipped_invalid"] = report.skipped_invalid
    payload["metadata"] = report.metadata
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def render_report(report: D2IReport | I2DReport, format: str = "table") -> str:
    """Render a report as ``table`` (4-decimal fixed point, absent cells
    "—"), ``csv`` (header row plus value row, full precision), or ``json``
    (full precision plus metadata, byte-stable across identical runs)."""
    if format == "table":
        return _render_table(report)
    if format == "csv":
        return _render_csv(report)
    if format == "json":
        return _render_json(report)
    raise InputError(f"unknown format {format!r}; choose table, csv, or json")


def report_from_json(text: str) -> D2IReport | I2DReport:
    """Rebuild a report from its JSON rendering (used by the render command)."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"report is not valid JSON: {exc}") from exc
    try:
        task = Task(payload["task"])
        scores = payload["scores"]
        if task is Task.DRUG_TO_INDICATION:
            return D2IReport(
                bleu2=scores["bleu2"], bleu4=scores["bleu4"],
                rouge1=scores["rouge1"], rouge2=scores["rouge2"],
                rouge_l=scores["rouge_l"], meteor=scores["meteor"],
                text2mol=scores["text2mol"], rows=payload["rows"],
                metadata=payload["metadata"],
            )
        return I2DReport(
            bleu=scores["bleu"], exact=scores["exact"],
            levenshtein=scores["levenshtein"], maccs_fts=scores["maccs_fts"],
            rdk_fts=scores["rdk_fts"], morgan_fts=scores["morgan_fts"],
            fcd=scores["fcd"], text2mol=scores["text2mol"],
            validity=scores["validity"], rows=payload["rows"],
            skipped_invalid=payload["skipped_invalid"],
            metadata=payload["metadata"],
        )
    except (KeyError, ValueError) as exc:
        raise SchemaMismatch(f"report JSON missing fields: {exc}") from exc
