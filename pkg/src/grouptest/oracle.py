"""Brute-force references that validate the closed forms at small scale.

The moment oracles enumerate every inclusion pattern of the N-1 peer items
(2**(N-1) patterns, capped at N = 16) and take probability-weighted sums,
so they share no code path with the analytic formulas they check.
``consistent_sets`` exhaustively lists the defective sets a decoder could
legitimately output, which underpins the exact-recovery feasibility checks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .design import DesignMatrix
from .model import ItemSet, OutcomeVector

_MAX_ENUM_ITEMS = 16
_MAX_SUBSETS = 10**6


@dataclass(frozen=True)
class EnumeratedMoments:
    """Moment values obtained by exhaustive pattern enumeration."""

    mu_d: float
    nu_d: float
    mu_nd: float
    nu_nd: float
    base_mu_d: float
    base_nu_d: float
    base_mu_nd: float
    base_nu_nd: float
    method: str = "exhaustive_patterns"


def _peer_patterns(n_items: int, n_defective_peers: int, p: float):
    """All inclusion patterns of the N-1 peers: (probability, size, defectives_in)."""
    n_peers = n_items - 1
    masks = np.arange(1 << n_peers, dtype=np.uint32)
    bits = (masks[:, np.newaxis] >> np.arange(n_peers)) & 1
    sizes = bits.sum(axis=1)
    # The first n_defective_peers peers are the defective ones; the prior is
    # exchangeable so the labeling does not matter.
    defectives_in = bits[:, :n_defective_peers].sum(axis=1)
    probs = p**sizes * (1.0 - p) ** (n_peers - sizes)
    return probs, sizes, defectives_in


def brute_force_weighted_moments(n_items: int, n_defectives: int, p: float) -> EnumeratedMoments:
    """Exact inverse-weight score moments by enumeration over all peer patterns."""
    if n_items > _MAX_ENUM_ITEMS:
        raise ValueError(f"enumeration budget is N <= {_MAX_ENUM_ITEMS}, got {n_items}")
    if not 1 <= n_defectives < n_items:
        raise ValueError(f"need 1 <= k < N, got k={n_defectives}, N={n_items}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")

    # Defective focal item: k-1 defective peers; inclusion alone makes the
    # test positive, so every included pattern contributes 1/(1+size).
    probs, sizes, _ = _peer_patterns(n_items, n_defectives - 1, p)
    recip = 1.0 / (1.0 + sizes)
    base_mu_d = float((probs * recip).sum())
    base_nu_d = float((probs * recip**2).sum())

    # Non-defective focal item: k defective peers; the test must also hold
    # at least one of them.
    probs, sizes, defectives_in = _peer_patterns(n_items, n_defectives, p)
    positive = defectives_in >= 1
    recip = 1.0 / (1.0 + sizes)
    q = float(probs[positive].sum())
    raw_mu_nd = float((probs * recip * positive).sum())
    raw_nu_nd = float((probs * recip**2 * positive).sum())

    return EnumeratedMoments(
        mu_d=p * base_mu_d,
        nu_d=p * base_nu_d,
        mu_nd=p * raw_mu_nd,
        nu_nd=p * raw_nu_nd,
        base_mu_d=base_mu_d,
        base_nu_d=base_nu_d,
        base_mu_nd=raw_mu_nd / q if q > 0 else 0.0,
        base_nu_nd=raw_nu_nd / q if q > 0 else 0.0,
    )


def brute_force_unweighted_moments(n_defectives: int, p: float, n_items: int) -> EnumeratedMoments:
    """Exact indicator score moments by the same enumeration."""
    if n_items > _MAX_ENUM_ITEMS:
        raise ValueError(f"enumeration budget is N <= {_MAX_ENUM_ITEMS}, got {n_items}")
    if not 1 <= n_defectives < n_items:
        raise ValueError(f"need 1 <= k < N, got k={n_defectives}, N={n_items}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")

    probs, _, _ = _peer_patterns(n_items, n_defectives - 1, p)
    base_mu_d = float(probs.sum())  # inclusion suffices; contribution is 1

    probs, _, defectives_in = _peer_patterns(n_items, n_defectives, p)
    positive = defectives_in >= 1
    q = float(probs[positive].sum())
    raw_mu_nd = float((probs * positive).sum())
    base_nd = raw_mu_nd / q if q > 0 else 0.0

    # Indicator contributions square to themselves, so second moments equal firsts.
    return EnumeratedMoments(
        mu_d=p * base_mu_d,
        nu_d=p * base_mu_d,
        mu_nd=p * raw_mu_nd,
        nu_nd=p * raw_mu_nd,
        base_mu_d=base_mu_d,
        base_nu_d=base_mu_d,
        base_mu_nd=base_nd,
        base_nu_nd=base_nd,
    )


def consistent_sets(matrix: DesignMatrix, outcomes: OutcomeVector, n_defectives: int) -> list[ItemSet]:
    """Every size-k defective set that reproduces the observed outcomes exactly.

    Returned in lexicographic order of the member tuples.
    """
    n = matrix.n_items
    if not 0 <= n_defectives <= n:
        raise ValueError(f"need 0 <= k <= N, got k={n_defectives}, N={n}")
    if math.comb(n, n_defectives) > _MAX_SUBSETS:
        raise ValueError(
            f"C({n}, {n_defectives}) exceeds the enumeration budget of {_MAX_SUBSETS}"
        )
    if outcomes.n_tests != matrix.n_tests:
        raise ValueError("outcome length does not match matrix n_tests")

    positive = outcomes.to_mask()
    pos_pools = [set(matrix.rows[t]) for t in np.flatnonzero(positive)]
    eliminated = set()
    for t in np.flatnonzero(~positive):
        eliminated.update(matrix.rows[t])

    found = []
    for combo in itertools.combinations(range(n), n_defectives):
        chosen = set(combo)
        if chosen & eliminated:
            continue
        if all(chosen & pool for pool in pos_pools):
            found.append(ItemSet(combo, universe_size=n))
    return found
