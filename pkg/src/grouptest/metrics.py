"""Set-recovery metrics and the information-theoretic counting bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaln

from .model import ItemSet


@dataclass(frozen=True)
class RecoveryStats:
    false_negatives: int
    false_positives: int
    misclassified: int
    jaccard: float
    f1: float
    exact: bool


def _check_universe(truth: ItemSet, estimate: ItemSet):
    if truth.universe_size != estimate.universe_size:
        raise ValueError(
            f"universe mismatch: {truth.universe_size} vs {estimate.universe_size}"
        )


def confusion(truth: ItemSet, estimate: ItemSet) -> RecoveryStats:
    """Full recovery statistics of an estimate against the true defective set."""
    _check_universe(truth, estimate)
    t, e = set(truth.members), set(estimate.members)
    fn = len(t - e)
    fp = len(e - t)
    return RecoveryStats(
        false_negatives=fn,
        false_positives=fp,
        misclassified=fn + fp,
        jaccard=jaccard(truth, estimate),
        f1=f1_score(truth, estimate),
        exact=(fn + fp == 0),
    )


def jaccard(truth: ItemSet, estimate: ItemSet) -> float:
    """Intersection over union; two empty sets count as perfect agreement."""
    _check_universe(truth, estimate)
    t, e = set(truth.members), set(estimate.members)
    union = t | e
    if not union:
        return 1.0
    return len(t & e) / len(union)


def f1_score(truth: ItemSet, estimate: ItemSet) -> float:
    """Harmonic mean of precision and recall; empty-vs-empty counts as 1."""
    _check_universe(truth, estimate)
    t, e = set(truth.members), set(estimate.members)
    if not t and not e:
        return 1.0
    inter = len(t & e)
    if inter == 0:
        return 0.0
    precision = inter / len(e)
    recall = inter / len(t)
    return 2.0 * precision * recall / (precision + recall)


def counting_bound(n_items: int, n_defectives: int, n_tests: int) -> float:
    """Ceiling on exact-recovery probability: min(1, 2**T / C(N, k)).

    Evaluated in log space so N=500-scale binomials do not overflow.
    """
    if not 0 <= n_defectives <= n_items:
        raise ValueError(f"need 0 <= k <= N, got k={n_defectives}, N={n_items}")
    if n_tests < 0:
        raise ValueError(f"n_tests must be >= 0, got {n_tests}")
    log_choose = (
        gammaln(n_items + 1) - gammaln(n_defectives + 1) - gammaln(n_items - n_defectives + 1)
    )
    log_bound = n_tests * math.log(2.0) - float(log_choose)
    if log_bound >= 0.0:
        return 1.0
    return math.exp(log_bound)
