"""
Comparison methods: the classic iterative reliable-negative grower, the
spy-threshold scheme, and the conservative pruning variant that starts from
the whole unlabeled pool and whittles it down.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import classifiers
from .pipeline import EmptyReliableNegatives, PufcError


@dataclass(frozen=True)
class PuRunResult:
    rn_history: tuple           # per-iteration RN sets (dataset indices)
    final_classifier: object
    labeled_u: np.ndarray       # final label per unlabeled-pool position
    iterations: int
    degenerate: bool = False

    @property
    def rn(self):
        return self.rn_history[-1] if self.rn_history else np.array([], dtype=int)


def _check_pu(pu):
    if pu.positive_indices.size < 1 or pu.unlabeled_indices.size < 2:
        raise PufcError("need |P| >= 1 and |U| >= 2")


def _label_pool(X, U, rn_set, clf):
    """RN members keep -1; everything else gets the final classifier's call."""
    labeled = np.empty(U.size, dtype=int)
    in_rn = np.isin(U, rn_set)
    labeled[in_rn] = -1
    if np.any(~in_rn):
        labeled[~in_rn] = clf.predict(X[U[~in_rn]])
    return labeled


def basic_pu(X, pu, classifier_kind="nearest-centroid", max_iter=50):
    """Grow the reliable-negative set from an initial everything-is-negative
    fit, retraining on (P, RN) and absorbing newly predicted negatives until
    a round adds nothing."""
    _check_pu(pu)
    X = np.asarray(X, dtype=float)
    P, U = pu.positive_indices, pu.unlabeled_indices

    first = classifiers.train(
        classifier_kind,
        np.vstack([X[P], X[U]]),
        np.concatenate([np.ones(P.size, dtype=int), -np.ones(U.size, dtype=int)]),
    )
    pred = first.predict(X[U])
    rn = U[pred == -1]
    if rn.size == 0:
        return PuRunResult(
            rn_history=(rn,),
            final_classifier=first,
            labeled_u=pred.copy(),
            iterations=1,
            degenerate=True,
        )

    remaining = U[pred == 1]
    history = [rn]
    clf = first
    iterations = 1
    while iterations < max_iter:
        iterations += 1
        clf = classifiers.train(
            classifier_kind,
            np.vstack([X[P], X[rn]]),
            np.concatenate([np.ones(P.size, dtype=int), -np.ones(rn.size, dtype=int)]),
        )
        if remaining.size == 0:
            break
        pred = clf.predict(X[remaining])
        moved = remaining[pred == -1]
        if moved.size == 0:
            break
        rn = np.sort(np.concatenate([rn, moved]))
        remaining = remaining[pred == 1]
        history.append(rn)

    return PuRunResult(
        rn_history=tuple(history),
        final_classifier=clf,
        labeled_u=_label_pool(X, U, rn, clf),
        iterations=iterations,
    )


def spy_pu(X, pu, spy_ratio=0.10, noise_level=0.15, classifier_kind="gaussian-nb",
           seed=0):
    """Hide a random slice of P inside U, score everything with a
    probabilistic classifier, and take as reliable negatives the unlabeled
    instances scoring below the noise_level quantile of the spy scores."""
    _check_pu(pu)
    if pu.positive_indices.size < 2:
        raise PufcError("spy method needs |P| >= 2")
    if not 0 < spy_ratio < 1:
        raise PufcError(f"spy_ratio must be in (0, 1), got {spy_ratio}")
    if not 0 <= noise_level < 1:
        raise PufcError(f"noise_level must be in [0, 1), got {noise_level}")
    X = np.asarray(X, dtype=float)
    P, U = pu.positive_indices, pu.unlabeled_indices

    n_spies = max(1, int(math.floor(spy_ratio * P.size + 0.5)))
    n_spies = min(n_spies, P.size - 1)
    rng = np.random.default_rng([seed, 0x59A7])
    spies = np.sort(rng.choice(P, size=n_spies, replace=False))
    kept = P[~np.isin(P, spies)]

    neg_pool = np.concatenate([U, spies])
    scorer = classifiers.train(
        classifier_kind,
        np.vstack([X[kept], X[neg_pool]]),
        np.concatenate([np.ones(kept.size, dtype=int), -np.ones(neg_pool.size, dtype=int)]),
    )
    spy_scores = scorer.predict_proba(X[spies])
    degenerate = bool(np.all(spy_scores == spy_scores[0])) and n_spies > 1
    threshold = np.sort(spy_scores)[int(math.floor(noise_level * n_spies))]

    rn = U[scorer.predict_proba(X[U]) < threshold]
    if rn.size == 0:
        raise EmptyReliableNegatives(
            f"spy threshold {threshold:.6f} marked no unlabeled instance negative"
        )

    clf = classifiers.train(
        classifier_kind,
        np.vstack([X[P], X[rn]]),
        np.concatenate([np.ones(P.size, dtype=int), -np.ones(rn.size, dtype=int)]),
    )
    return PuRunResult(
        rn_history=(rn,),
        final_classifier=clf,
        labeled_u=_label_pool(X, U, rn, clf),
        iterations=1,
        degenerate=degenerate,
    )


def pruning_pu(X, pu, classifier_kind="nearest-centroid", max_iter=50):
    """Start with RN = U and repeatedly drop RN members the current (P, RN)
    classifier calls positive, until a pass removes nothing."""
    _check_pu(pu)
    X = np.asarray(X, dtype=float)
    P, U = pu.positive_indices, pu.unlabeled_indices

    rn = U.copy()
    history = [rn]
    iterations = 0
    for i in range(1, max_iter + 1):
        clf = classifiers.train(
            classifier_kind,
            np.vstack([X[P], X[rn]]),
            np.concatenate([np.ones(P.size, dtype=int), -np.ones(rn.size, dtype=int)]),
        )
        pred = clf.predict(X[rn])
        kept = rn[pred == -1]
        iterations = i
        if kept.size == rn.size:
            break
        if kept.size == 0:
            raise EmptyReliableNegatives(f"reliable-negative set pruned empty at iteration {i}")
        rn = kept
        history.append(rn)

    final = classifiers.train(
        classifier_kind,
        np.vstack([X[P], X[rn]]),
        np.concatenate([np.ones(P.size, dtype=int), -np.ones(rn.size, dtype=int)]),
    )
    return PuRunResult(
        rn_history=tuple(history),
        final_classifier=final,
        labeled_u=_label_pool(X, U, rn, final),
        iterations=iterations,
    )
