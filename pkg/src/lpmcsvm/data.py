"""Sparse datasets and LIBSVM-format text ingestion.

Rows are sparse feature vectors with integer class labels. Original label
tokens are preserved verbatim; internally classes are dense 0-based indices
assigned in first-appearance order so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
import scipy.sparse as sp


class DataError(ValueError):
    """Malformed input data (bad format, bad indices, non-finite values)."""


@dataclass(frozen=True)
class SparseVector:
    """A sparse row: strictly increasing 0-based indices, nonzero finite values."""

    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        if idx.ndim != 1 or val.ndim != 1 or idx.shape != val.shape:
            raise DataError("indices and values must be 1-d arrays of equal length")
        if idx.size and (np.diff(idx) <= 0).any():
            raise DataError("feature indices must be strictly increasing")
        if idx.size and idx[0] < 0:
            raise DataError("feature indices must be nonnegative")
        if not np.isfinite(val).all():
            raise DataError("feature values must be finite")
        if (val == 0.0).any():
            raise DataError("zero values must not be stored")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def max_index(self) -> int:
        return int(self.indices[-1]) if self.indices.size else -1


def dot(a: SparseVector, b: SparseVector) -> float:
    """Sparse-sparse inner product (sequential accumulation, reproducible)."""
    if a.indices.size == 0 or b.indices.size == 0:
        return 0.0
    pos = np.minimum(np.searchsorted(a.indices, b.indices), a.indices.size - 1)
    hit = a.indices[pos] == b.indices
    total = 0.0
    for av, bv in zip(a.values[pos[hit]], b.values[hit]):
        total += av * bv
    return total


def axpy(s: float, a: SparseVector, dense: np.ndarray) -> None:
    """dense[i] += s * a[i] for the stored entries of a."""
    dense[a.indices] += s * a.values


@dataclass
class Dataset:
    """An immutable sample of sparse rows with dense 0-based class labels."""

    examples: list[SparseVector]
    labels: np.ndarray
    num_classes: int
    dimension: int
    label_map: dict[str, int]
    _csr: sp.csr_matrix | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        n = len(self.examples)
        if n < 1 or self.labels.shape != (n,):
            raise DataError("need at least one example and one label per example")
        if self.num_classes < 1 or self.dimension < 1:
            raise DataError("num_classes and dimension must be positive")
        if (self.labels < 0).any() or (self.labels >= self.num_classes).any():
            raise DataError("labels must lie in [0, num_classes)")
        for x in self.examples:
            if x.max_index() >= self.dimension:
                raise DataError("feature index exceeds dataset dimension")
        if len(self.label_map) != self.num_classes:
            raise DataError("label_map must cover every class index exactly once")

    @property
    def n(self) -> int:
        return len(self.examples)

    @property
    def class_labels(self) -> list[str]:
        """Original label token for each class index."""
        out = [""] * self.num_classes
        for token, j in self.label_map.items():
            out[j] = token
        return out

    def csr(self) -> sp.csr_matrix:
        """CSR view of the rows; built once and cached."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            for i, x in enumerate(self.examples):
                indptr[i + 1] = indptr[i] + x.nnz
            indices = np.concatenate(
                [x.indices for x in self.examples] or [np.empty(0, np.int64)]
            )
            data = np.concatenate(
                [x.values for x in self.examples] or [np.empty(0, np.float64)]
            )
            self._csr = sp.csr_matrix(
                (data, indices, indptr), shape=(self.n, self.dimension)
            )
        return self._csr

    def subset(self, idx: Iterable[int]) -> "Dataset":
        """Rows at the given positions; class indexing and dimension are kept."""
        idx = list(idx)
        return Dataset(
            examples=[self.examples[i] for i in idx],
            labels=self.labels[idx],
            num_classes=self.num_classes,
            dimension=self.dimension,
            label_map=dict(self.label_map),
        )


def kernel_diag_sum(dataset: Dataset) -> float:
    """Sum of squared row norms, i.e. the trace of the linear kernel matrix."""
    total = 0.0
    for x in dataset.examples:
        total += dot(x, x)
    return total


def self_kernel(dataset: Dataset) -> np.ndarray:
    """Per-row squared norms k(x_i, x_i)."""
    return np.array([dot(x, x) for x in dataset.examples], dtype=np.float64)


def _parse_line(line: str, lineno: int) -> tuple[str, np.ndarray, np.ndarray]:
    parts = line.split()
    label = parts[0]
    if ":" in label:
        raise DataError(f"line {lineno}: missing label before feature list")
    idx = np.empty(len(parts) - 1, dtype=np.int64)
    val = np.empty(len(parts) - 1, dtype=np.float64)
    k = 0
    prev = 0
    for tok in parts[1:]:
        try:
            i_s, v_s = tok.split(":", 1)
            i = int(i_s)
            v = float(v_s)
        except ValueError:
            raise DataError(f"line {lineno}: malformed feature token {tok!r}") from None
        if i <= 0:
            raise DataError(f"line {lineno}: feature indices are 1-based, got {i}")
        if i <= prev:
            raise DataError(f"line {lineno}: non-ascending feature index {i}")
        if not np.isfinite(v):
            raise DataError(f"line {lineno}: non-finite value for index {i}")
        prev = i
        if v == 0.0:
            continue
        idx[k] = i - 1
        val[k] = v
        k += 1
    return label, idx[:k], val[:k]


def parse_libsvm(
    source: str | TextIO,
    dimension: int | None = None,
    bias: bool = False,
) -> Dataset:
    """Parse LIBSVM sparse text (1-based indices, `#` comment lines ignored).

    Labels are remapped to 0-based class indices in first-appearance order.
    The dimension is inferred as max index + 1 unless given explicitly; an
    explicit dimension smaller than an observed index is an error. With
    ``bias=True`` a constant-1 feature is appended past the last column.
    """
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source.read().splitlines()

    label_map: dict[str, int] = {}
    labels: list[int] = []
    rows: list[tuple[np.ndarray, np.ndarray]] = []
    max_idx = -1
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        token, idx, val = _parse_line(line, lineno)
        if token not in label_map:
            label_map[token] = len(label_map)
        labels.append(label_map[token])
        rows.append((idx, val))
        if idx.size:
            max_idx = max(max_idx, int(idx[-1]))

    if not rows:
        raise DataError("empty input: no data lines found")

    inferred = max_idx + 1
    if dimension is None:
        d = max(inferred, 1)
    else:
        if dimension < inferred:
            raise DataError(
                f"explicit dimension {dimension} smaller than observed {inferred}"
            )
        d = dimension
    if bias:
        examples = [
            SparseVector(np.append(idx, d), np.append(val, 1.0)) for idx, val in rows
        ]
        d += 1
    else:
        examples = [SparseVector(idx, val) for idx, val in rows]

    return Dataset(
        examples=examples,
        labels=np.array(labels, dtype=np.int64),
        num_classes=len(label_map),
        dimension=d,
        label_map=label_map,
    )


def write_libsvm(dataset: Dataset) -> str:
    """Serialize back to LIBSVM text (1-based indices, original label tokens)."""
    names = dataset.class_labels
    out = []
    for x, y in zip(dataset.examples, dataset.labels):
        feats = " ".join(f"{i + 1}:{v!r}" for i, v in zip(x.indices, x.values))
        out.append(f"{names[y]} {feats}".rstrip())
    return "\n".join(out) + "\n"
