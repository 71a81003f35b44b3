"""
Semi-supervised metric-based fuzzy clustering.

Labeled instances carry a prior membership row that the solver treats as a
hard floor: the optimized membership of instance i in cluster k never drops
below its prior. The metric is a Mahalanobis form learned once, up front,
from the prior-weighted covariance; the solver then alternates a closed-form
membership update (an entropy-regularized softmax over squared distances)
with a weighted-mean centroid update until the membership matrix stops
moving.
"""
from dataclasses import dataclass, field

import numpy as np


class SmucError(Exception):
    pass


@dataclass(frozen=True)
class SmucConfig:
    eta: float = 1.0        # inverse temperature of the entropy term
    tol: float = 1e-5       # Frobenius-norm convergence threshold
    max_iter: int = 300
    ridge: float = 1e-8     # relative ridge for ill-conditioned covariance

    def __post_init__(self):
        if self.eta <= 0:
            raise SmucError("eta must be > 0")
        if self.tol <= 0:
            raise SmucError("tol must be > 0")
        if self.max_iter < 1:
            raise SmucError("max_iter must be >= 1")
        if self.ridge < 0:
            raise SmucError("ridge must be >= 0")


@dataclass(frozen=True)
class MetricMatrix:
    values: np.ndarray      # (d, d) symmetric positive definite
    ridge_used: float


@dataclass(frozen=True)
class SmucModel:
    centroids: np.ndarray       # (c, d)
    metric: MetricMatrix
    memberships: np.ndarray     # (n, c), rows on the simplex
    iterations: int
    objective_trace: tuple
    converged: bool


def seed_prior(n, c, assignments):
    """Build an (n, c) prior with a 1 at each (instance, cluster) assignment."""
    prior = np.zeros((n, c))
    seen = set()
    for i, k in assignments:
        if not (0 <= i < n and 0 <= k < c):
            raise SmucError(f"assignment ({i}, {k}) out of range for n={n}, c={c}")
        if i in seen:
            raise SmucError(f"instance {i} assigned more than once")
        seen.add(i)
        prior[i, k] = 1.0
    return prior


def check_prior(prior):
    prior = np.asarray(prior, dtype=float)
    if prior.min() < 0 or prior.max() > 1:
        raise SmucError("prior entries must lie in [0, 1]")
    if np.any(prior.sum(axis=1) > 1 + 1e-12):
        raise SmucError("prior rows must sum to at most 1")
    return prior


def seeding_prior(prior):
    """Prior used only for centroid/covariance seeding: rows with no side
    information are spread uniformly so every cluster has support."""
    prior = np.asarray(prior, dtype=float)
    c = prior.shape[1]
    out = prior.copy()
    empty = prior.sum(axis=1) == 0
    out[empty] = 1.0 / c
    return out


def preliminary_centroids(X, prior_seeded):
    """Squared-prior weighted means, one row per cluster."""
    w = np.asarray(prior_seeded, dtype=float) ** 2
    mass = w.sum(axis=0)
    if np.any(mass <= 0):
        bad = int(np.flatnonzero(mass <= 0)[0])
        raise SmucError(f"cluster {bad} has zero prior mass")
    return (w.T @ X) / mass[:, None]


def prior_covariance(X, prior_seeded, centroids):
    """Pooled squared-prior weighted covariance around the cluster centroids."""
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    w = np.asarray(prior_seeded, dtype=float) ** 2
    C = np.zeros((d, d))
    for k in range(w.shape[1]):
        diff = X - centroids[k]
        C += (w[:, k, None] * diff).T @ diff
    C /= n
    return (C + C.T) / 2


def metric_from_covariance(C, ridge=1e-8):
    """Invert the covariance, adding a trace-scaled ridge only when needed."""
    C = np.asarray(C, dtype=float)
    d = C.shape[0]
    if np.max(np.abs(C - C.T)) > 1e-10:
        raise SmucError("covariance matrix is not symmetric")

    def pd_inverse(M):
        np.linalg.cholesky(M)       # raises LinAlgError unless positive definite
        inv = np.linalg.inv(M)
        return (inv + inv.T) / 2

    try:
        if np.linalg.cond(C) <= 1e12:
            return MetricMatrix(values=pd_inverse(C), ridge_used=0.0)
    except np.linalg.LinAlgError:
        pass
    tr = np.trace(C)
    lam = ridge * tr / d if tr > 0 else 0.0
    lam = max(lam, 1e-8)
    try:
        return MetricMatrix(values=pd_inverse(C + lam * np.eye(d)), ridge_used=lam)
    except np.linalg.LinAlgError:
        raise SmucError(f"covariance not positive definite even with ridge {lam}") from None


def mahalanobis_sq(A, x, y):
    """Squared Mahalanobis distance (x-y)^T A (x-y)."""
    M = A.values if isinstance(A, MetricMatrix) else np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.shape[-1] != M.shape[0]:
        raise SmucError(f"dimension mismatch: {x.shape} vs {y.shape} with metric {M.shape}")
    diff = x - y
    return float(diff @ M @ diff)


def _sq_distances(X, V, A):
    """(n, c) matrix of squared Mahalanobis distances to each centroid."""
    M = A.values if isinstance(A, MetricMatrix) else np.asarray(A, dtype=float)
    out = np.empty((X.shape[0], V.shape[0]))
    for k in range(V.shape[0]):
        diff = X - V[k]
        out[:, k] = np.einsum("ij,jk,ik->i", diff, M, diff)
    return np.maximum(out, 0.0)


def update_memberships(X, V, A, prior, eta):
    """Closed-form membership update: prior floor plus the leftover mass
    distributed by a softmax over negative scaled squared distances."""
    if eta <= 0:
        raise SmucError("eta must be > 0")
    prior = np.asarray(prior, dtype=float)
    d2 = _sq_distances(np.asarray(X, dtype=float), np.asarray(V, dtype=float), A)
    z = -eta * d2
    z -= z.max(axis=1, keepdims=True)
    e = np.exp(z)
    soft = e / e.sum(axis=1, keepdims=True)
    slack = 1.0 - prior.sum(axis=1, keepdims=True)
    return prior + soft * slack


def update_centroids(X, U):
    """Membership-weighted means."""
    U = np.asarray(U, dtype=float)
    mass = U.sum(axis=0)
    if np.any(mass <= 0):
        bad = int(np.flatnonzero(mass <= 0)[0])
        raise SmucError(f"cluster {bad} has zero membership mass")
    return (U.T @ np.asarray(X, dtype=float)) / mass[:, None]


def objective(X, U, prior, V, A, eta):
    """Distance dispersion plus the scaled entropy of the free membership mass."""
    U = np.asarray(U, dtype=float)
    prior = np.asarray(prior, dtype=float)
    free = U - prior
    if free.min() < -1e-12:
        raise SmucError("membership below its prior; entropy term undefined")
    free = np.clip(free, 0.0, None)
    d2 = _sq_distances(np.asarray(X, dtype=float), np.asarray(V, dtype=float), A)
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = np.where(free > 0, free * np.log(np.where(free > 0, free, 1.0)), 0.0)
    return float((U * d2).sum() + ent.sum() / eta)


def fit(X, prior, config=SmucConfig(), callback=None):
    """Run the full clustering: seed centroids and the metric from the prior,
    then alternate membership and centroid updates to convergence.

    callback, if given, receives (iteration, memberships, centroids) after
    every update pair; used by invariant checks.
    """
    X = np.asarray(X, dtype=float)
    prior = check_prior(prior)
    n, c = prior.shape
    if not n >= c >= 2:
        raise SmucError(f"need n >= c >= 2, got n={n}, c={c}")
    if X.shape[0] != n:
        raise SmucError("prior rows must match instance count")

    seeded = seeding_prior(prior)
    V = preliminary_centroids(X, seeded)
    C = prior_covariance(X, seeded, V)
    metric = metric_from_covariance(C, config.ridge)

    u_prev = seeded
    trace = []
    converged = False
    iterations = 0
    for t in range(1, config.max_iter + 1):
        U = update_memberships(X, V, metric, prior, config.eta)
        V = update_centroids(X, U)
        trace.append(objective(X, U, prior, V, metric, config.eta))
        if callback is not None:
            callback(t, U, V)
        iterations = t
        delta = float(np.linalg.norm(U - u_prev))
        u_prev = U
        if delta < config.tol:
            converged = True
            break
    return SmucModel(
        centroids=V,
        metric=metric,
        memberships=u_prev,
        iterations=iterations,
        objective_trace=tuple(trace),
        converged=converged,
    )


def model_report(model):
    """Plain-text summary of a fitted model."""
    lines = [
        f"iterations = {model.iterations}",
        f"converged = {model.converged}",
        f"ridge_used = {model.metric.ridge_used:.6g}",
        "objective_trace = " + " ".join(f"{j:.6f}" for j in model.objective_trace),
        "centroids:",
    ]
    for k, v in enumerate(model.centroids):
        lines.append(f"  cluster {k}: " + " ".join(f"{x:.6f}" for x in v))
    return "\n".join(lines) + "\n"


def memberships_csv(model):
    """Membership matrix as comma-delimited text, one row per instance."""
    c = model.memberships.shape[1]
    lines = [",".join(f"u{k}" for k in range(c))]
    for row in model.memberships:
        lines.append(",".join(f"{x:.10f}" for x in row))
    return "\n".join(lines) + "\n"
