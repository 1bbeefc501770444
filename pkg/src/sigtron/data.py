"""Dataset loading, standardization, fold assignment and imbalance statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .exceptions import ConfigurationError, DataError

__all__ = [
    "Dataset",
    "Standardizer",
    "ImbalanceStats",
    "load_dataset",
    "write_dataset",
    "standardize",
    "imbalance_stats",
    "kfold_assign",
    "split_half",
    "concat",
]


@dataclass(frozen=True)
class Dataset:
    """Dense feature matrix with integer labels.

    Binary datasets carry labels in ``{-1, +1}`` and ``classes`` holds the raw
    labels as ``(negative, positive)``.  Multi-class datasets carry ids
    ``0..K-1`` indexing ``classes``.
    """

    features: np.ndarray
    labels: np.ndarray
    classes: tuple = ()
    binary: bool = True
    feature_means: np.ndarray | None = None
    feature_stds: np.ndarray | None = None
    fold_ids: np.ndarray | None = None

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=int)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise ConfigurationError("features must be d x s and labels length d")
        if not np.all(np.isfinite(X)):
            raise DataError("non-finite feature values")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        if not self.classes:
            object.__setattr__(self, "classes", (-1, 1) if self.binary
                               else tuple(range(int(y.max()) + 1 if y.size else 0)))

    @property
    def n_samples(self):
        return self.features.shape[0]

    @property
    def n_features(self):
        return self.features.shape[1]

    @property
    def n_classes(self):
        return 2 if self.binary else len(self.classes)

    def subset(self, idx):
        idx = np.asarray(idx)
        folds = None if self.fold_ids is None else self.fold_ids[idx]
        return replace(self, features=self.features[idx], labels=self.labels[idx],
                       fold_ids=folds)

    def one_vs_rest(self, cls):
        """Binary view of a multi-class set: class id ``cls`` is +1, the rest -1."""
        if self.binary:
            raise ConfigurationError("one_vs_rest needs a multi-class dataset")
        y = np.where(self.labels == cls, 1, -1)
        return replace(self, labels=y, binary=True, classes=("rest", self.classes[cls]))

    def with_features(self, X, means=None, stds=None):
        return replace(self, features=X, feature_means=means, feature_stds=stds)


def concat(a, b):
    if a.n_features != b.n_features:
        raise ConfigurationError("feature dimensions differ")
    return replace(a, features=np.vstack([a.features, b.features]),
                   labels=np.concatenate([a.labels, b.labels]), fold_ids=None)


def split_half(ds):
    """Deterministic first-half / second-half train-test split."""
    h = (ds.n_samples + 1) // 2
    return ds.subset(np.arange(h)), ds.subset(np.arange(h, ds.n_samples))


# ---------------------------------------------------------------------------
# parsing


def _is_number(tok):
    try:
        float(tok)
    except ValueError:
        return False
    return True


def _encode_labels(raw, path):
    if not raw:
        raise DataError("no data rows", path)
    order = list(dict.fromkeys(raw))
    numeric = all(_is_number(v) for v in order)
    if len(order) == 2:
        if numeric:
            neg, pos = sorted(order, key=float)
        else:
            pos, neg = order
        y = np.array([1 if v == pos else -1 for v in raw], dtype=int)
        return y, (neg, pos), True
    index = {v: i for i, v in enumerate(order)}
    return np.array([index[v] for v in raw], dtype=int), tuple(order), False


def _label_token(tok):
    # "+1" and "1" name the same class
    if _is_number(tok):
        v = float(tok)
        return str(int(v)) if v.is_integer() else repr(v)
    return tok


def _read_csv(path):
    rows, raw = [], []
    width = None
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    start = 0
    while start < len(lines) and not lines[start].strip():
        start += 1
    if start < len(lines):
        first = [t.strip() for t in lines[start].split(",")]
        if not any(_is_number(t) for t in first[:-1]):
            start += 1  # header row
    for lineno in range(start, len(lines)):
        line = lines[lineno].strip()
        if not line:
            continue
        toks = [t.strip() for t in line.split(",")]
        if width is None:
            width = len(toks)
            if width < 2:
                raise DataError("need at least one feature and a label", path, lineno + 1)
        elif len(toks) != width:
            raise DataError(f"expected {width} columns, found {len(toks)}", path, lineno + 1)
        try:
            rows.append([float(t) for t in toks[:-1]])
        except ValueError as exc:
            raise DataError(f"non-numeric cell ({exc})", path, lineno + 1) from None
        raw.append(_label_token(toks[-1]))
    return np.array(rows, dtype=float).reshape(len(rows), (width or 1) - 1), raw


def _read_libsvm(path, n_features=None):
    entries, raw = [], []
    max_idx = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            raw.append(_label_token(toks[0]))
            row = {}
            for tok in toks[1:]:
                try:
                    i, v = tok.split(":", 1)
                    i, v = int(i), float(v)
                except ValueError:
                    raise DataError(f"bad entry {tok!r}", path, lineno) from None
                if i < 1:
                    raise DataError(f"feature index {i} must be >= 1", path, lineno)
                row[i] = v
                max_idx = max(max_idx, i)
            entries.append(row)
    s = max_idx if n_features is None else n_features
    if max_idx > s:
        raise DataError(f"feature index {max_idx} exceeds n_features={s}", path)
    X = np.zeros((len(entries), s))
    for r, row in enumerate(entries):
        for i, v in row.items():
            X[r, i - 1] = v
    return X, raw


def _guess_format(path):
    suffix = Path(path).suffix.lower()
    return "csv" if suffix in (".csv", ".txt") else "libsvm"


def load_dataset(path, format=None, n_features=None):
    """Read a CSV (label in the last column) or libsvm-sparse file."""
    fmt = format or _guess_format(path)
    if fmt == "csv":
        X, raw = _read_csv(path)
    elif fmt in ("libsvm", "libsvm-sparse", "svmlight"):
        X, raw = _read_libsvm(path, n_features)
    else:
        raise ValueError(f"unknown dataset format {fmt!r}")
    if not raw:
        raise DataError("empty dataset", path)
    if not np.all(np.isfinite(X)):
        raise DataError("non-finite feature value", path)
    order = list(dict.fromkeys(raw))
    if len(order) == 1:
        # one label only: binary set with a single (empty) class
        lab = order[0]
        if _is_number(lab) and float(lab) <= 0:
            return Dataset(X, -np.ones(len(raw), dtype=int), (lab, ""), True)
        return Dataset(X, np.ones(len(raw), dtype=int), ("", lab), True)
    y, classes, binary = _encode_labels(raw, path)
    return Dataset(X, y, classes, binary)


def _label_out(ds, y):
    if ds.binary:
        return ds.classes[1] if y == 1 else ds.classes[0]
    return ds.classes[y]


def write_dataset(ds, path, format="csv"):
    """Write ``ds`` so that :func:`load_dataset` reads back the same values."""
    with open(path, "w", encoding="utf-8") as fh:
        for x, y in zip(ds.features, ds.labels):
            lab = _label_out(ds, int(y))
            if format == "csv":
                fh.write(",".join(repr(float(v)) for v in x) + f",{lab}\n")
            else:
                feats = " ".join(f"{i + 1}:{float(v)!r}" for i, v in enumerate(x) if v != 0.0)
                fh.write(f"{lab} {feats}".rstrip() + "\n")


# ---------------------------------------------------------------------------
# preprocessing


@dataclass(frozen=True)
class Standardizer:
    """Per-feature affine map ``(x - mean) / scale``; scale is 1 for constant columns."""

    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X):
        X = np.asarray(X, dtype=float)
        mean = X.mean(axis=0)
        std = X.std(axis=0)  # population divisor
        flat = std <= 1e-12 * np.maximum(1.0, np.abs(mean))
        return cls(mean, np.where(flat, 1.0, std))

    def transform(self, X):
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.mean.shape[0]:
            raise ConfigurationError(
                f"expected {self.mean.shape[0]} features, got {X.shape[1]}")
        return (X - self.mean) / self.scale


def standardize(train, apply_to=()):
    """Fit on ``train`` and transform it plus every dataset in ``apply_to``.

    Returns ``(standardizer, [train', *apply_to'])``.
    """
    st = Standardizer.fit(train.features)
    out = [train.with_features(st.transform(train.features), st.mean, st.scale)]
    for ds in apply_to:
        if ds.n_features != train.n_features:
            raise ConfigurationError("dimension mismatch between splits")
        out.append(ds.with_features(st.transform(ds.features), st.mean, st.scale))
    return st, out


def kfold_assign(ds, k, seed=0):
    """Shuffle rows with ``seed`` and deal them into ``k`` near-equal folds."""
    d = ds.n_samples
    if k < 2:
        raise ConfigurationError("need at least two folds")
    if k > d:
        raise ConfigurationError(f"cannot make {k} folds from {d} rows")
    perm = np.random.default_rng(seed).permutation(d)
    folds = np.empty(d, dtype=int)
    folds[perm] = np.arange(d) % k
    return replace(ds, fold_ids=folds)


# ---------------------------------------------------------------------------
# imbalance statistics


@dataclass(frozen=True)
class ImbalanceStats:
    r_c: float
    r_sc: float
    pos_centroid: np.ndarray = field(repr=False)
    neg_centroid: np.ndarray = field(repr=False)
    n_pos: int = 0
    n_neg: int = 0


def scale_class_ratio(r_c, pos_centroid, neg_centroid):
    """``r_c * sqrt((|x_p|^2 + 1) / (|x_n|^2 + 1))``."""
    num = float(np.dot(pos_centroid, pos_centroid)) + 1.0
    den = float(np.dot(neg_centroid, neg_centroid)) + 1.0
    return r_c * math.sqrt(num / den)


def imbalance_stats(ds, positive_class=None):
    """Class and scale-class imbalance ratios of one binary (or OVA) view."""
    if ds.binary:
        pos = ds.labels == 1
    else:
        if positive_class is None:
            raise ConfigurationError("multi-class data needs a positive_class")
        pos = ds.labels == positive_class
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise ConfigurationError("both classes must be nonempty")
    xp = ds.features[pos].mean(axis=0)
    xn = ds.features[~pos].mean(axis=0)
    r_c = n_pos / n_neg
    return ImbalanceStats(r_c, scale_class_ratio(r_c, xp, xn), xp, xn, n_pos, n_neg)
