"""Frechet distance between Gaussians fitted to embedding sets.

The toolkit never runs an embedding network; embeddings arrive in text
files.  The file format is one header line ``D=<dim>`` followed by one
space-separated vector per line.  Files whose first two bytes are the gzip
magic number are decompressed transparently.

    d^2 = ||mu_a - mu_b||^2 + Tr(S_a) + Tr(S_b) - 2 Tr((S_a^1/2 S_b S_a^1/2)^1/2)

Matrix square roots come from symmetric eigendecomposition with negative
eigenvalues (numerical noise on near-singular fits) clamped to zero, and
the final distance is clamped to zero as well.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    EigenFailure,
    InputError,
    NonFiniteInput,
    TooFewSamples,
)


@dataclass(frozen=True)
class EmbeddingSet:
    """A matrix of row vectors, at least two rows, all finite."""

    vectors: np.ndarray
    source_label: str = ""

    def __post_init__(self) -> None:
        array = np.asarray(self.vectors, dtype=np.float64)
        if array.ndim != 2:
            raise InputError("embeddings must form a 2-D array of row vectors")
        if array.shape[0] < 2:
            raise TooFewSamples(
                f"need at least 2 embedding rows, got {array.shape[0]}")
        if not np.isfinite(array).all():
            raise NonFiniteInput("embeddings contain NaN or infinite values")
        object.__setattr__(self, "vectors", array)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]


@dataclass(frozen=True)
class GaussianStats:
    """Mean vector and symmetrised unbiased covariance of an embedding set."""

    mean: np.ndarray
    covariance: np.ndarray


def gaussian_fit(embeddings: EmbeddingSet) -> GaussianStats:
    """Column means and the (N-1)-normalised covariance, symmetrised."""
    vectors = embeddings.vectors
    mean = vectors.mean(axis=0)
    centered = vectors - mean
    covariance = centered.T @ centered / (vectors.shape[0] - 1)
    covariance = (covariance + covariance.T) / 2.0
    return GaussianStats(mean=mean, covariance=covariance)


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    root = (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.T
    return (root + root.T) / 2.0


def frechet_distance(a: GaussianStats, b: GaussianStats) -> float:
    """Squared Frechet distance between two Gaussians.

    Never returns a negative value: eigenvalues of the inner product matrix
    and the final sum are both clamped at zero, so two fits of the same
    sample differ only by accumulated rounding.
    """
    if a.mean.shape != b.mean.shape:
        raise DimensionMismatch(
            f"gaussians of dimension {a.mean.shape[0]} vs {b.mean.shape[0]}")
    diff = a.mean - b.mean
    root_a = _psd_sqrt(a.covariance)
    inner = root_a @ b.covariance @ root_a
    inner = (inner + inner.T) / 2.0
    try:
        eigenvalues = np.linalg.eigvalsh(inner)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}") from exc
    trace_root = np.sqrt(np.clip(eigenvalues, 0.0, None)).sum()
    distance = (float(diff @ diff)
                + float(np.trace(a.covariance))
                + float(np.trace(b.covariance))
                - 2.0 * float(trace_root))
    return max(distance, 0.0)


def read_vector_rows(path: str | Path, row_multiplier: int = 1) -> tuple[int, list[list[float]]]:
    """Parse a ``D=<dim>`` vector file into (dim, rows).

    Each data line must hold ``dim * row_multiplier`` space-separated floats
    (paired-embedding files store two vectors per line).  Gzip-compressed
    files are detected by magic number and decompressed.
    """
    path = Path(path)
    raw = path.read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    lines = raw.decode("utf-8").splitlines()
    if not lines or not lines[0].startswith("D="):
        raise InputError(f"{path}: first line must be 'D=<dim>'")
    try:
        dim = int(lines[0][2:])
    except ValueError:
        raise InputError(f"{path}: malformed dimension header {lines[0]!r}") from None
    if dim < 1:
        raise InputError(f"{path}: dimension must be positive")

    expected = dim * row_multiplier
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != expected:
            raise InputError(
                f"{path} line {lineno}: expected {expected} values, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise InputError(
                f"{path} line {lineno}: non-numeric value") from None
    return dim, rows


def load_embeddings(path: str | Path) -> EmbeddingSet:
    """Read an embedding file (``D=<dim>`` header, one vector per line)."""
    _, rows = read_vector_rows(path)
    if len(rows) < 2:
        raise TooFewSamples(
            f"{path}: need at least 2 embedding rows, got {len(rows)}")
    return EmbeddingSet(np.array(rows, dtype=np.float64), source_label=str(path))


def fcd_from_files(path_a: str | Path, path_b: str | Path) -> float:
    """Frechet distance between Gaussians fitted to two embedding files."""
    set_a = load_embeddings(path_a)
    set_b = load_embeddings(path_b)
    if set_a.dim != set_b.dim:
        raise DimensionMismatch(
            f"embedding dimensions differ: {set_a.dim} vs {set_b.dim}")
    return frechet_distance(gaussian_fit(set_a), gaussian_fit(set_b))
