"""
Tabular dataset loading, preprocessing, stratified splitting and PU masking.

All operations are deterministic given their inputs and an explicit seed,
and every returned object is treated as immutable so that experiment folds
can run concurrently without coordination.
"""
import csv
import math
from dataclasses import dataclass, field

import numpy as np


class DataError(Exception):
    """Raised for unloadable or structurally invalid input data."""


@dataclass(frozen=True)
class Dataset:
    name: str
    features: np.ndarray        # (n, d), float
    labels: np.ndarray          # (n,), values in {+1, -1}
    feature_names: tuple

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels, dtype=int)
        if X.ndim != 2 or X.shape[0] < 2 or X.shape[1] < 1:
            raise DataError(f"feature matrix must be n>=2 by d>=1, got {X.shape}")
        if not np.all(np.isfinite(X)):
            raise DataError("non-finite feature value")
        if y.shape != (X.shape[0],):
            raise DataError("labels must align with feature rows")
        if not np.all(np.isin(y, (-1, 1))):
            raise DataError("labels must be +1 or -1")
        if not (np.any(y == 1) and np.any(y == -1)):
            raise DataError("need at least one instance of each class")
        if len(self.feature_names) != X.shape[1]:
            raise DataError("feature_names must match feature count")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def d(self):
        return self.features.shape[1]


@dataclass(frozen=True)
class FoldPlan:
    k: int
    test_sets: tuple            # k index arrays, pairwise disjoint, covering 0..n-1
    seed: int

    def train_indices(self, fold):
        test = set(self.test_sets[fold].tolist())
        n = sum(len(t) for t in self.test_sets)
        return np.array([i for i in range(n) if i not in test], dtype=int)


@dataclass(frozen=True)
class PuView:
    positive_indices: np.ndarray    # P: labeled positives (dataset indices)
    unlabeled_indices: np.ndarray   # U: everything else in the training split
    hidden_truth: np.ndarray        # full-length label array, evaluation only
    labeled_fraction: float


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def load_csv(path, label_column, positive_label, drop_columns=(), name=None):
    """Load a comma-delimited file with a header row into a Dataset.

    label_column and drop_columns entries may be column names or zero-based
    positions. Rows whose label equals positive_label map to +1, all other
    label values map to -1.
    """
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if len(rows) < 2:
        raise DataError(f"{path}: need a header row and at least one data row")

    header = [h.strip() for h in rows[0]]

    def col_index(ref):
        if isinstance(ref, int):
            if not 0 <= ref < len(header):
                raise DataError(f"column index {ref} out of range")
            return ref
        if ref in header:
            return header.index(ref)
        raise DataError(f"column {ref!r} not found in header {header}")

    label_idx = col_index(label_column)
    dropped = {col_index(c) for c in drop_columns}
    dropped.discard(label_idx)
    feat_idx = [j for j in range(len(header)) if j != label_idx and j not in dropped]
    if not feat_idx:
        raise DataError("no feature columns remain")

    features = []
    labels = []
    pos = str(positive_label).strip()
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"row {r}: expected {len(header)} cells, got {len(row)}")
        vals = []
        for j in feat_idx:
            cell = row[j].strip()
            try:
                vals.append(float(cell))
            except ValueError:
                raise DataError(
                    f"row {r}, column {header[j]!r}: cannot parse {cell!r} as a number"
                ) from None
        features.append(vals)
        labels.append(1 if row[label_idx].strip() == pos else -1)

    labels = np.array(labels, dtype=int)
    if len(set(labels.tolist())) != 2:
        raise DataError(
            f"label column {header[label_idx]!r} has a single class after mapping "
            f"positive_label={positive_label!r}"
        )
    return Dataset(
        name=name or str(path),
        features=np.array(features, dtype=float),
        labels=labels,
        feature_names=tuple(header[j] for j in feat_idx),
    )


def standardize(d, stats_source):
    """Z-score each feature using mean/std over stats_source rows only.

    Zero-variance features are centered but left unscaled so that held-out
    rows never influence their own preprocessing.
    """
    idx = np.asarray(stats_source, dtype=int)
    if idx.size == 0:
        raise DataError("stats_source must be nonempty")
    mu = d.features[idx].mean(axis=0)
    sd = d.features[idx].std(axis=0)
    sd_safe = np.where(sd == 0.0, 1.0, sd)
    return Dataset(
        name=d.name,
        features=(d.features - mu) / sd_safe,
        labels=d.labels,
        feature_names=d.feature_names,
    )


def stratified_k_fold(d, k, seed):
    """Deterministic stratified k-fold plan over the dataset rows."""
    if k < 2:
        raise DataError("k must be >= 2")
    test_sets = [[] for _ in range(k)]
    rng = np.random.default_rng([seed, 0xF01D])
    for cls in (1, -1):
        members = np.flatnonzero(d.labels == cls)
        if members.size < k:
            raise DataError(f"class {cls:+d} has {members.size} instances, fewer than k={k}")
        perm = rng.permutation(members)
        for j in range(k):
            test_sets[j].extend(perm[j::k].tolist())
    folds = tuple(np.array(sorted(t), dtype=int) for t in test_sets)
    for f in folds:
        f.setflags(write=False)
    return FoldPlan(k=k, test_sets=folds, seed=seed)


def make_pu_view(d, train_indices, f, seed):
    """Hide all but a round(f * n_positives) random subset of training labels.

    The retained subset becomes P; every other training instance, positive
    or negative, goes into U with its true label kept aside for scoring.
    """
    if not 0.0 < f <= 1.0:
        raise DataError(f"labeled fraction must be in (0, 1], got {f}")
    train = np.asarray(train_indices, dtype=int)
    pos = train[d.labels[train] == 1]
    if pos.size == 0:
        raise DataError("no positive instances in the training split")
    n_p = _round_half_up(f * pos.size)
    rng = np.random.default_rng([seed, 0x9057])
    chosen = rng.choice(pos, size=n_p, replace=False) if n_p else np.array([], dtype=int)
    p_set = set(chosen.tolist())
    P = np.array(sorted(p_set), dtype=int)
    U = np.array([i for i in train if i not in p_set], dtype=int)
    P.setflags(write=False)
    U.setflags(write=False)
    return PuView(
        positive_indices=P,
        unlabeled_indices=U,
        hidden_truth=d.labels,
        labeled_fraction=f,
    )


def binarize(d, column, threshold, drop_column=True):
    """Relabel by thresholding a numeric feature column: value <= threshold -> +1."""
    if column not in d.feature_names:
        raise DataError(f"column {column!r} not found")
    j = d.feature_names.index(column)
    labels = np.where(d.features[:, j] <= threshold, 1, -1)
    if drop_column:
        keep = [i for i in range(d.d) if i != j]
        feats = d.features[:, keep]
        names = tuple(n for i, n in enumerate(d.feature_names) if i != j)
    else:
        feats, names = d.features, d.feature_names
    return Dataset(name=d.name, features=feats, labels=labels, feature_names=names)


def fold_plan_manifest(plan):
    """Plain-text audit form of a fold plan: one test-index list per line."""
    lines = [f"# folds={plan.k} seed={plan.seed}"]
    for t in plan.test_sets:
        lines.append(" ".join(str(i) for i in t))
    return "\n".join(lines) + "\n"


def pu_view_manifest(view):
    """Plain-text audit form of a PU mask: P on one line, U on the next."""
    lines = [
        f"# labeled_fraction={view.labeled_fraction}",
        "P " + " ".join(str(i) for i in view.positive_indices),
        "U " + " ".join(str(i) for i in view.unlabeled_indices),
    ]
    return "\n".join(lines) + "\n"
