"""
The reliable-sample extraction pipeline.

Cluster the labeled positives together with the unlabeled pool, read off
each unlabeled instance's positive-cluster membership, and split the pool
with a band of half-width epsilon around 0.5: low memberships become
reliable negatives, high ones reliable positives, and everything inside the
band is treated as boundary noise and excluded from the final training set.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import classifiers, smuc


class PufcError(Exception):
    pass


class EmptyReliableNegatives(PufcError):
    """No unlabeled instance fell below the negative threshold."""


def check_epsilon(epsilon):
    if not 0.0 <= epsilon < 0.5:
        raise PufcError(f"epsilon must be in [0, 0.5), got {epsilon}")
    return float(epsilon)


@dataclass(frozen=True)
class PufcConfig:
    epsilon: float = 0.1
    smuc: smuc.SmucConfig = field(default_factory=smuc.SmucConfig)
    classifier_kind: str = "nearest-centroid"

    def __post_init__(self):
        check_epsilon(self.epsilon)
        if self.classifier_kind not in classifiers.classifier_kinds():
            raise PufcError(f"unknown classifier kind {self.classifier_kind!r}")


@dataclass(frozen=True)
class ReliableSplit:
    rn: np.ndarray          # positions into the unlabeled pool
    rp: np.ndarray
    noise: np.ndarray
    u_plus: np.ndarray      # positive-cluster membership per pool position
    epsilon: float


@dataclass(frozen=True)
class PufcModel:
    split: ReliableSplit
    final_classifier: object
    expanded_p_size: int
    smuc_model: smuc.SmucModel
    labeled_u: np.ndarray   # final label per unlabeled-pool position


def positive_membership(model, u_positions, positive_cluster=0):
    """Membership in the positive cluster for the given instance rows."""
    u = np.asarray(u_positions, dtype=int)
    memberships = model.memberships
    if not 0 <= positive_cluster < memberships.shape[1]:
        raise PufcError(f"positive_cluster {positive_cluster} out of range")
    if u.size and (u.min() < 0 or u.max() >= memberships.shape[0]):
        raise PufcError("instance index out of range")
    return memberships[u, positive_cluster]


def fuzziness(u):
    """Binary Shannon fuzziness: 1 at membership 0.5, 0 at 0 or 1."""
    arr = np.asarray(u, dtype=float)
    if arr.min() < 0 or arr.max() > 1:
        raise PufcError("membership must lie in [0, 1]")
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(arr > 0, arr * np.log2(np.where(arr > 0, arr, 1.0)), 0.0)
        q = 1.0 - arr
        t2 = np.where(q > 0, q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    out = -(t1 + t2)
    return float(out) if np.isscalar(u) else out


def split_unlabeled(u_plus, epsilon):
    """Band rule, checked in order: reliable negative, then noise, then
    reliable positive, so a membership of exactly 0.5 with epsilon 0 is a
    reliable negative."""
    epsilon = check_epsilon(epsilon)
    u = np.asarray(u_plus, dtype=float)
    if u.size and (u.min() < 0 or u.max() > 1):
        raise PufcError("memberships must lie in [0, 1]")
    is_rn = u <= 0.5 - epsilon
    is_noise = ~is_rn & (u < 0.5 + epsilon)
    is_rp = ~is_rn & ~is_noise
    return ReliableSplit(
        rn=np.flatnonzero(is_rn),
        rp=np.flatnonzero(is_rp),
        noise=np.flatnonzero(is_noise),
        u_plus=u,
        epsilon=epsilon,
    )


def run_pufc(X, pu, config=PufcConfig()):
    """Full pipeline over a PU-masked training set.

    Returns the fitted model; labeled_u carries a final label for every
    unlabeled-pool instance, noise points included (they are excluded from
    classifier training but still classified at the end).
    """
    X = np.asarray(X, dtype=float)
    P = pu.positive_indices
    U = pu.unlabeled_indices
    if P.size < 1 or U.size < 2:
        raise PufcError(f"need |P| >= 1 and |U| >= 2, got {P.size} and {U.size}")

    order = np.concatenate([P, U])
    prior = smuc.seed_prior(order.size, 2, [(i, 0) for i in range(P.size)])
    model = smuc.fit(X[order], prior, config.smuc)

    u_plus = positive_membership(model, np.arange(P.size, order.size), positive_cluster=0)
    split = split_unlabeled(u_plus, config.epsilon)
    if split.rn.size == 0:
        raise EmptyReliableNegatives(
            f"no reliable negatives at epsilon={config.epsilon}; cannot train the final classifier"
        )

    rn_idx = U[split.rn]
    rp_idx = U[split.rp]
    train_X = np.vstack([X[P], X[rp_idx], X[rn_idx]])
    train_y = np.concatenate([
        np.ones(P.size + rp_idx.size, dtype=int),
        -np.ones(rn_idx.size, dtype=int),
    ])
    clf = classifiers.train(config.classifier_kind, train_X, train_y)

    labeled_u = np.empty(U.size, dtype=int)
    labeled_u[split.rn] = -1
    labeled_u[split.rp] = 1
    if split.noise.size:
        labeled_u[split.noise] = clf.predict(X[U[split.noise]])

    return PufcModel(
        split=split,
        final_classifier=clf,
        expanded_p_size=P.size + rp_idx.size,
        smuc_model=model,
        labeled_u=labeled_u,
    )


def split_report(model, pu=None):
    """Plain-text report: band width, set sizes, purity when truth is known."""
    s = model.split
    lines = [
        f"epsilon = {s.epsilon}",
        f"reliable_negatives = {s.rn.size}",
        f"reliable_positives = {s.rp.size}",
        f"noise = {s.noise.size}",
        f"expanded_positive_set = {model.expanded_p_size}",
        f"smuc_iterations = {model.smuc_model.iterations}",
    ]
    if pu is not None:
        truth = pu.hidden_truth[pu.unlabeled_indices]
        if s.rn.size:
            lines.append(f"rn_purity = {np.mean(truth[s.rn] == -1):.4f}")
        if s.rp.size:
            lines.append(f"rp_purity = {np.mean(truth[s.rp] == 1):.4f}")
    return "\n".join(lines) + "\n"
