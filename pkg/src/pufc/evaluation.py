"""
Metrics and the cross-validation experiment protocol.

Every experiment follows the same shape: stratified k-fold split, per-fold
z-scoring from the training rows only, PU masking of the training labels at
a chosen fraction, one method run, and positive-class precision / recall /
F-measure on the held-out fold against the ground truth. Fold-level RNG
streams derive from (seed, fold index), so sweeps and method comparisons
that share a seed automatically share folds and PU masks.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from joblib import Parallel, delayed

from . import baselines, classifiers, dataset as ds, pipeline, smuc


@dataclass(frozen=True)
class MetricsResult:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f_measure: float


@dataclass(frozen=True)
class ExperimentConfig:
    method: str = "pufc"
    labeled_fraction: float = 0.3
    epsilon: float = 0.1
    folds: int = 10
    seed: int = 0
    classifier_kind: str = "nearest-centroid"
    smuc: smuc.SmucConfig = field(default_factory=smuc.SmucConfig)
    spy_ratio: float = 0.10
    noise_level: float = 0.15
    max_iter: int = 50          # iteration cap for the baseline loops
    standardize: bool = True

    def __post_init__(self):
        if not 0.0 < self.labeled_fraction <= 1.0:
            raise ValueError(f"labeled_fraction must be in (0, 1], got {self.labeled_fraction}")
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {sorted(METHODS)}")
        pipeline.check_epsilon(self.epsilon)


@dataclass(frozen=True)
class Summary:
    per_fold_f: tuple
    mean_pct: float
    std_pct: float


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    fold_metrics: tuple         # one MetricsResult per fold
    flags: tuple                # per-fold failure note or ""
    summary: Summary


def f_measure(precision, recall):
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if not (0.0 <= precision <= 1.0 and 0.0 <= recall <= 1.0):
        raise ValueError("precision and recall must lie in [0, 1]")
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def confusion(y_true, y_pred):
    """Positive-class confusion counts and derived metrics."""
    t = np.asarray(y_true, dtype=int)
    p = np.asarray(y_pred, dtype=int)
    if t.shape != p.shape or t.size == 0:
        raise ValueError("label vectors must be nonempty and the same length")
    tp = int(np.sum((t == 1) & (p == 1)))
    fp = int(np.sum((t == -1) & (p == 1)))
    fn = int(np.sum((t == 1) & (p == -1)))
    tn = int(np.sum((t == -1) & (p == -1)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return MetricsResult(tp, fp, fn, tn, precision, recall, f_measure(precision, recall))


def _run_pufc(X, pu, cfg, fold_seed):
    model = pipeline.run_pufc(
        X, pu,
        pipeline.PufcConfig(epsilon=cfg.epsilon, smuc=cfg.smuc,
                            classifier_kind=cfg.classifier_kind),
    )
    return model.final_classifier


def _run_basic(X, pu, cfg, fold_seed):
    return baselines.basic_pu(X, pu, cfg.classifier_kind, cfg.max_iter).final_classifier


def _run_spy(X, pu, cfg, fold_seed):
    return baselines.spy_pu(X, pu, cfg.spy_ratio, cfg.noise_level,
                            seed=fold_seed).final_classifier


def _run_pruning(X, pu, cfg, fold_seed):
    return baselines.pruning_pu(X, pu, cfg.classifier_kind, cfg.max_iter).final_classifier


METHODS = {
    "pufc": _run_pufc,
    "basic": _run_basic,
    "spy": _run_spy,
    "pruning": _run_pruning,
}

_ZERO_METRICS = MetricsResult(0, 0, 0, 0, 0.0, 0.0, 0.0)


def fold_seed(seed, fold):
    return seed * 100_003 + fold


def _run_fold(d, cfg, plan, fold):
    test = plan.test_sets[fold]
    train = plan.train_indices(fold)
    data = ds.standardize(d, train) if cfg.standardize else d
    fseed = fold_seed(cfg.seed, fold)
    try:
        pu = ds.make_pu_view(data, train, cfg.labeled_fraction, fseed)
        clf = METHODS[cfg.method](data.features, pu, cfg, fseed)
        pred = clf.predict(data.features[test])
        return confusion(d.labels[test], pred), ""
    except Exception as exc:      # degenerate folds score 0 with a flag
        return _ZERO_METRICS, f"{type(exc).__name__}: {exc}"


def summarize(per_fold_f):
    per_fold_f = tuple(float(f) for f in per_fold_f)
    arr = np.array(per_fold_f)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return Summary(per_fold_f=per_fold_f, mean_pct=float(arr.mean()) * 100.0,
                   std_pct=std * 100.0)


def run_cv_experiment(d, cfg, n_jobs=1):
    """Run the full k-fold protocol for one (method, fraction, epsilon) cell.

    Folds are independent; with n_jobs > 1 they run in parallel and are
    reduced in fold order, so the result is identical either way. A method
    failure on a fold is recorded as F = 0 with a flag, not raised.
    """
    plan = ds.stratified_k_fold(d, cfg.folds, cfg.seed)
    if n_jobs == 1:
        outcomes = [_run_fold(d, cfg, plan, j) for j in range(cfg.folds)]
    else:
        outcomes = Parallel(n_jobs=n_jobs)(
            delayed(_run_fold)(d, cfg, plan, j) for j in range(cfg.folds)
        )
    metrics = tuple(m for m, _ in outcomes)
    flags = tuple(flag for _, flag in outcomes)
    return ExperimentResult(
        config=cfg,
        fold_metrics=metrics,
        flags=flags,
        summary=summarize([m.f_measure for m in metrics]),
    )


def epsilon_sweep(d, grid, cfg, n_jobs=1):
    """One experiment per band width, with folds and PU masks shared across
    the grid. Returns [(epsilon, ExperimentResult)] plus the best index."""
    grid = [pipeline.check_epsilon(e) for e in grid]
    results = [(e, run_cv_experiment(d, replace(cfg, epsilon=e), n_jobs)) for e in grid]
    best = max(range(len(results)), key=lambda i: results[i][1].summary.mean_pct)
    return results, best


def fraction_sweep(d, fractions, cfg, n_jobs=1):
    """One experiment per labeled fraction, folds shared."""
    results = [
        (f, run_cv_experiment(d, replace(cfg, labeled_fraction=f), n_jobs))
        for f in fractions
    ]
    return results


def compare_methods(d, methods, cfg, n_jobs=1):
    """Run several methods under identical folds, PU masks, and classifier.

    Returns [(method, ExperimentResult)] plus the index of the best mean F.
    """
    results = [(m, run_cv_experiment(d, replace(cfg, method=m), n_jobs)) for m in methods]
    best = max(range(len(results)), key=lambda i: results[i][1].summary.mean_pct)
    return results, best


# ---------------------------------------------------------------------------
# delimited / text rendering

FOLD_CSV_HEADER = "dataset,method,classifier,labeled_fraction,epsilon,fold,precision,recall,f_measure,flags"
SUMMARY_CSV_HEADER = "dataset,method,classifier,labeled_fraction,epsilon,mean_pct,std_pct,flagged_folds"


def fold_csv_rows(dataset_name, result):
    cfg = result.config
    rows = []
    for j, (m, flag) in enumerate(zip(result.fold_metrics, result.flags)):
        rows.append(
            f"{dataset_name},{cfg.method},{cfg.classifier_kind},{cfg.labeled_fraction},"
            f"{cfg.epsilon},{j},{m.precision:.6f},{m.recall:.6f},{m.f_measure:.6f},"
            f"{flag.replace(',', ';')}"
        )
    return rows


def summary_csv_row(dataset_name, result):
    cfg = result.config
    s = result.summary
    flagged = sum(1 for f in result.flags if f)
    return (
        f"{dataset_name},{cfg.method},{cfg.classifier_kind},{cfg.labeled_fraction},"
        f"{cfg.epsilon},{s.mean_pct:.4f},{s.std_pct:.4f},{flagged}"
    )


def render_table(row_labels, col_labels, cells, mark_best_per_row=False):
    """Aligned text table of 'mean±std' cells; the best mean in a row gets
    a trailing '*' when requested."""
    body = []
    for r, label in enumerate(row_labels):
        texts = [f"{m:.2f}±{s:.2f}" for m, s in cells[r]]
        if mark_best_per_row and texts:
            best = max(range(len(cells[r])), key=lambda i: cells[r][i][0])
            texts[best] += " *"
        body.append([label] + texts)
    header = [""] + list(col_labels)
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"
