"""Dataset container, CSV ingestion and per-fold min-max scaling."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class DatasetError(ValueError):
    """Raised for malformed or unusable dataset input."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """Numeric feature matrix (m samples x n features) with encoded class labels.

    ``labels`` holds integers 0..c-1; ``label_names[i]`` is the original text of
    label ``i``. Arrays are made read-only on construction.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    label_names: tuple[str, ...]
    name: str = field(default="dataset", compare=False)

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64, copy=True)
        y = np.array(self.labels, dtype=np.int64, copy=True)
        if X.ndim != 2:
            raise DatasetError(f"features must be 2-D, got shape {X.shape}")
        m, n = X.shape
        if m < 2 or n < 1:
            raise DatasetError(f"need at least 2 samples and 1 feature, got {m}x{n}")
        if y.shape != (m,):
            raise DatasetError(f"labels length {y.shape} does not match {m} samples")
        if not np.all(np.isfinite(X)):
            r, c = np.argwhere(~np.isfinite(X))[0]
            raise DatasetError(f"missing or non-finite value at row {r + 1}, column {c + 1}")
        names = tuple(str(s) for s in self.feature_names)
        if len(names) != n:
            raise DatasetError(f"{len(names)} feature names for {n} features")
        if len(set(names)) != n:
            dup = sorted({s for s in names if names.count(s) > 1})
            raise DatasetError(f"duplicate feature names: {', '.join(dup)}")
        if y.min() < 0 or y.max() >= len(self.label_names):
            raise DatasetError("labels must be encoded as 0..c-1 with a name for each")
        if len(np.unique(y)) < 2:
            raise DatasetError("dataset has a single class; at least 2 are required")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "label_names", tuple(str(s) for s in self.label_names))

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.label_names)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def subset(self, columns: Sequence[int]) -> "Dataset":
        """Return a dataset restricted to ``columns`` (in the given order)."""
        cols = list(columns)
        return Dataset(
            self.features[:, cols],
            self.labels,
            tuple(self.feature_names[j] for j in cols),
            self.label_names,
            name=self.name,
        )

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.feature_names == other.feature_names
            and self.label_names == other.label_names
            and np.array_equal(self.features, other.features)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None


def encode_labels(raw: Iterable[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    """Encode text labels as integers in order of first appearance."""
    mapping: dict[str, int] = {}
    codes = [mapping.setdefault(v, len(mapping)) for v in raw]
    return np.asarray(codes, dtype=np.int64), tuple(mapping)


def _parse_cell(text: str, row: int, col: int, header: str) -> float:
    s = text.strip()
    if s == "":
        raise DatasetError(f"missing value at row {row}, column {col} ({header!r})")
    try:
        v = float(s)
    except ValueError:
        raise DatasetError(
            f"cannot parse {s!r} as a number at row {row}, column {col} ({header!r})"
        ) from None
    if not math.isfinite(v):
        raise DatasetError(f"missing value {s!r} at row {row}, column {col} ({header!r})")
    return v


def load_csv(path, label_column: str | None = None) -> Dataset:
    """Load a comma-separated file with one header row.

    The label column is ``label_column`` if given, otherwise ``class`` when
    present, otherwise the last column. Row numbers in error messages count the
    header as row 1.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except FileNotFoundError:
        raise DatasetError(f"no such file: {path}") from None
    except UnicodeDecodeError as exc:
        raise DatasetError(f"{path} is not valid UTF-8: {exc}") from None
    if not rows:
        raise DatasetError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if label_column is None:
        label_idx = header.index("class") if "class" in header else len(header) - 1
    else:
        if label_column not in header:
            raise DatasetError(f"label column {label_column!r} not found in header")
        label_idx = header.index(label_column)
    feat_idx = [j for j in range(len(header)) if j != label_idx]

    values, raw_labels = [], []
    for r, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DatasetError(
                f"row {r} has {len(row)} fields, expected {len(header)}"
            )
        values.append([_parse_cell(row[j], r, j + 1, header[j]) for j in feat_idx])
        label = row[label_idx].strip()
        if label == "":
            raise DatasetError(f"missing label at row {r}, column {label_idx + 1}")
        raw_labels.append(label)

    labels, label_names = encode_labels(raw_labels)
    X = np.asarray(values, dtype=np.float64).reshape(len(values), len(feat_idx))
    return Dataset(X, labels, tuple(header[j] for j in feat_idx), label_names, name=path.stem)


def write_csv(dataset: Dataset, path, label_column: str = "class") -> None:
    """Write ``dataset`` in the format read by :func:`load_csv`.

    Floats are written with ``repr`` so a reload is exact.
    """
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(list(dataset.feature_names) + [label_column])
        for x, y in zip(dataset.features, dataset.labels):
            w.writerow([repr(float(v)) for v in x] + [dataset.label_names[y]])


@dataclass(frozen=True)
class Scaler:
    """Per-feature min-max map fitted on training rows."""

    minimum: np.ndarray
    maximum: np.ndarray

    def __len__(self):
        return len(self.minimum)

    def transform(self, X: np.ndarray) -> np.ndarray:
        # constant features map to 0; out-of-range values are not clamped
        span = self.maximum - self.minimum
        safe = np.where(span > 0, span, 1.0)
        out = (np.asarray(X, dtype=np.float64) - self.minimum) / safe
        out[..., span <= 0] = 0.0
        return out


def fit_scaler(dataset_or_matrix, rows: Sequence[int]) -> Scaler:
    """Fit a :class:`Scaler` on ``rows`` only.

    Accepts a :class:`Dataset` or a plain 2-D array.
    """
    X = dataset_or_matrix.features if isinstance(dataset_or_matrix, Dataset) else np.asarray(
        dataset_or_matrix, dtype=np.float64
    )
    idx = np.asarray(rows, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("cannot fit a scaler on an empty row set")
    if idx.min() < 0 or idx.max() >= X.shape[0]:
        raise IndexError("row index out of range")
    train = X[idx]
    return Scaler(train.min(axis=0), train.max(axis=0))
