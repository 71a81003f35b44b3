"""
Small deterministic binary classifiers used as the final-stage learner and
as the probabilistic scorer in the spy baseline.

All of them share the same tie rule: anything scoring exactly on the
boundary goes to the positive class, so predict always agrees with
thresholding predict_proba at 0.5.
"""
import numpy as np


class ClassifierError(Exception):
    pass


def _as_matrix(x, d):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != d:
        raise ClassifierError(f"expected {d}-dimensional inputs, got shape {x.shape}")
    return x


class NearestCentroid:
    """Per-class mean vectors; Euclidean decision, ties to +1."""

    kind = "nearest-centroid"

    def __init__(self, X, y):
        self.centroid_pos = X[y == 1].mean(axis=0)
        self.centroid_neg = X[y == -1].mean(axis=0)
        self.d = X.shape[1]

    def _distances(self, X):
        dp = np.linalg.norm(X - self.centroid_pos, axis=1)
        dn = np.linalg.norm(X - self.centroid_neg, axis=1)
        return dp, dn

    def predict(self, x):
        dp, dn = self._distances(_as_matrix(x, self.d))
        return np.where(dp <= dn, 1, -1)

    def predict_proba(self, x):
        # softmin over the two distances; equidistant points get exactly 0.5
        dp, dn = self._distances(_as_matrix(x, self.d))
        return 1.0 / (1.0 + np.exp(dp - dn))


class KNearest:
    """k-nearest-neighbor vote, k=3 clamped to the training size.

    Neighbor distance ties resolve to the lowest training index; vote ties
    go to +1.
    """

    kind = "knn"

    def __init__(self, X, y, k=3):
        self.X = X
        self.y = y
        self.k = min(k, X.shape[0])
        self.d = X.shape[1]

    def _vote_fraction(self, X):
        out = np.empty(X.shape[0])
        for i, x in enumerate(X):
            dist = np.linalg.norm(self.X - x, axis=1)
            nearest = np.argsort(dist, kind="stable")[: self.k]
            out[i] = np.mean(self.y[nearest] == 1)
        return out

    def predict(self, x):
        return np.where(self._vote_fraction(_as_matrix(x, self.d)) >= 0.5, 1, -1)

    def predict_proba(self, x):
        return self._vote_fraction(_as_matrix(x, self.d))


class GaussianNaiveBayes:
    """Per-class diagonal Gaussians with a variance floor and count priors."""

    kind = "gaussian-nb"

    def __init__(self, X, y, var_floor=1e-9):
        self.d = X.shape[1]
        self.params = {}
        n = X.shape[0]
        for cls in (1, -1):
            rows = X[y == cls]
            self.params[cls] = (
                rows.mean(axis=0),
                np.maximum(rows.var(axis=0), var_floor),
                np.log(rows.shape[0] / n),
            )

    def _log_joint(self, X, cls):
        mu, var, log_prior = self.params[cls]
        ll = -0.5 * (np.log(2 * np.pi * var) + (X - mu) ** 2 / var).sum(axis=1)
        return ll + log_prior

    def predict(self, x):
        X = _as_matrix(x, self.d)
        return np.where(self._log_joint(X, 1) >= self._log_joint(X, -1), 1, -1)

    def predict_proba(self, x):
        X = _as_matrix(x, self.d)
        lp = self._log_joint(X, 1)
        ln = self._log_joint(X, -1)
        m = np.maximum(lp, ln)
        ep = np.exp(lp - m)
        en = np.exp(ln - m)
        return ep / (ep + en)


_REGISTRY = {
    "nearest-centroid": NearestCentroid,
    "knn": KNearest,
    "gaussian-nb": GaussianNaiveBayes,
}


def classifier_kinds():
    return sorted(_REGISTRY)


def train(kind, X, y):
    """Train a registered classifier on rows X with labels y in {+1, -1}."""
    if kind not in _REGISTRY:
        raise ClassifierError(f"unknown classifier kind {kind!r}; choose from {classifier_kinds()}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] < 2:
        raise ClassifierError("need an (n>=2, d) matrix with aligned labels")
    if not (np.any(y == 1) and np.any(y == -1)):
        raise ClassifierError("both classes must be present in the training data")
    return _REGISTRY[kind](X, y)
