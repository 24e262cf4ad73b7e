"""The four noiseless non-adaptive decoders, sharing one weighted-scoring kernel.

* ``comp``: every item seen in a negative test is a definite non-defective
  (DND); the remaining potential defectives (PD) are returned as the
  estimate. The estimate always contains the true defective set.
* ``dd``: an item that is the unique PD member of some positive test is a
  definite defective; the estimate is exactly those items, so it is always
  a subset of the truth.
* ``scomp``: starts from the DD output and greedily adds the PD item
  covering the most unexplained positive tests until all are explained.
* ``w_scomp``: the same greedy loop, but each unexplained test t
  contributes 1/w_t**alpha to its members' scores, where w_t is the number
  of PD items in t. Low-weight tests carry more information, so their
  members are promoted first. alpha=0 recovers scomp exactly,
  trace-for-trace; the default alpha is 1.

Ties at the argmax are broken toward the lowest item index. Scores are
accumulated over tests in ascending test index with a fixed reduction
order, so results are reproducible across runs and thread counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .design import DesignMatrix
from .model import ItemSet, OutcomeVector


class TraceStep(NamedTuple):
    item: int
    score: float
    unexplained_after: int


@dataclass(frozen=True)
class DecodeResult:
    """Decoder output: the estimate plus the DND/DD partition and greedy trace."""

    estimate: ItemSet
    definite_non_defectives: ItemSet
    dd_core: ItemSet
    trace: tuple[TraceStep, ...] | None = None

    def to_json_dict(self) -> dict:
        out = {
            "estimate": list(self.estimate.members),
            "definite_non_defectives": list(self.definite_non_defectives.members),
            "dd_core": list(self.dd_core.members),
        }
        if self.trace is not None:
            out["trace"] = [
                {"item": s.item, "score": s.score, "unexplained_after": s.unexplained_after}
                for s in self.trace
            ]
        else:
            out["trace"] = None
        return out


@dataclass(frozen=True)
class ScoreVector:
    """Per-item scores over the unexplained tests, with the test weights used."""

    scores: dict[int, float]
    weights: dict[int, int]
    alpha: float


def _check_dims(matrix: DesignMatrix, outcomes: OutcomeVector):
    if outcomes.n_tests != matrix.n_tests:
        raise ValueError(
            f"outcome length {outcomes.n_tests} does not match "
            f"matrix n_tests {matrix.n_tests}"
        )


def _comp_masks(dense: np.ndarray, positive: np.ndarray):
    """(pd, dnd) boolean item masks. Items in no test stay potential."""
    dnd = dense[~positive].any(axis=0)
    return ~dnd, dnd


def _dd_core_mask(dense: np.ndarray, positive: np.ndarray, pd: np.ndarray) -> np.ndarray:
    pos_rows = dense[positive]
    pd_hits = pos_rows & pd
    singleton = pd_hits.sum(axis=1) == 1
    core = np.zeros(dense.shape[1], dtype=bool)
    if singleton.any():
        core[np.nonzero(pd_hits[singleton])[1]] = True
    return core


def comp(matrix: DesignMatrix, outcomes: OutcomeVector) -> DecodeResult:
    """Return every item not ruled out by a negative test."""
    _check_dims(matrix, outcomes)
    positive = outcomes.to_mask()
    pd, dnd = _comp_masks(matrix.dense, positive)
    return DecodeResult(
        estimate=ItemSet.from_mask(pd),
        definite_non_defectives=ItemSet.from_mask(dnd),
        dd_core=ItemSet((), universe_size=matrix.n_items),
    )


def dd(matrix: DesignMatrix, outcomes: OutcomeVector) -> DecodeResult:
    """Return only the items certified by a positive test they alone can explain."""
    _check_dims(matrix, outcomes)
    positive = outcomes.to_mask()
    pd, dnd = _comp_masks(matrix.dense, positive)
    core = _dd_core_mask(matrix.dense, positive, pd)
    core_set = ItemSet.from_mask(core)
    return DecodeResult(
        estimate=core_set,
        definite_non_defectives=ItemSet.from_mask(dnd),
        dd_core=core_set,
    )


def score_items(
    matrix: DesignMatrix,
    outcomes: OutcomeVector,
    candidates: ItemSet,
    unexplained,
    alpha: float,
) -> ScoreVector:
    """Weighted coverage scores of the candidates over the unexplained tests.

    Each unexplained test t has weight w_t = |candidates in pool t| and
    contributes 1/w_t**alpha to the score of every candidate it contains.
    Tests with w_t = 0 contribute nothing.
    """
    _check_dims(matrix, outcomes)
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    positive = outcomes.to_mask()
    unexplained = sorted(set(int(t) for t in unexplained))
    for t in unexplained:
        if not 0 <= t < matrix.n_tests:
            raise ValueError(f"test index {t} outside [0, {matrix.n_tests})")
        if not positive[t]:
            raise ValueError(f"unexplained test {t} is not positive")
    cand_mask = candidates.to_mask()
    if len(cand_mask) != matrix.n_items:
        raise ValueError("candidate universe does not match matrix n_items")
    sub = matrix.dense[unexplained]
    weights_arr = (sub & cand_mask).sum(axis=1)
    coeff = np.zeros(len(unexplained))
    nz = weights_arr > 0
    coeff[nz] = weights_arr[nz] ** (-float(alpha))
    totals = np.add.reduce(sub * coeff[:, np.newaxis], axis=0) if unexplained else np.zeros(matrix.n_items)
    return ScoreVector(
        scores={i: float(totals[i]) for i in candidates.members},
        weights={t: int(w) for t, w in zip(unexplained, weights_arr)},
        alpha=float(alpha),
    )


def _greedy_decode(matrix: DesignMatrix, outcomes: OutcomeVector, alpha: float) -> DecodeResult:
    dense = matrix.dense
    positive = outcomes.to_mask()
    pd, dnd = _comp_masks(dense, positive)
    core = _dd_core_mask(dense, positive, pd)

    estimate = core.copy()
    explained = (dense & estimate).any(axis=1)
    unexplained = positive & ~explained
    candidates = pd & ~estimate
    # Candidate shrink applied from the first iteration: only items that can
    # still explain something are eligible.
    candidates &= dense[unexplained].any(axis=0)

    trace: list[TraceStep] = []
    while unexplained.any() and candidates.any():
        sub = dense[unexplained]
        weights = (sub & candidates).sum(axis=1)
        coeff = np.zeros(len(weights))
        nz = weights > 0
        coeff[nz] = weights[nz] ** (-alpha)
        totals = np.add.reduce(sub * coeff[:, np.newaxis], axis=0)
        masked = np.where(candidates, totals, -1.0)
        best = int(np.argmax(masked))  # first max wins: lowest-index tie-break
        best_score = float(totals[best])
        if best_score <= 0.0:
            break
        estimate[best] = True
        candidates[best] = False
        test_idx = np.flatnonzero(unexplained)
        newly_explained = sub[:, best]
        if not newly_explained.any():
            break
        unexplained[test_idx[newly_explained]] = False
        candidates &= dense[unexplained].any(axis=0)
        trace.append(TraceStep(best, best_score, int(unexplained.sum())))

    return DecodeResult(
        estimate=ItemSet.from_mask(estimate),
        definite_non_defectives=ItemSet.from_mask(dnd),
        dd_core=ItemSet.from_mask(core),
        trace=tuple(trace),
    )


def scomp(matrix: DesignMatrix, outcomes: OutcomeVector) -> DecodeResult:
    """Greedy cover of the unexplained positive tests with unit increments."""
    _check_dims(matrix, outcomes)
    return _greedy_decode(matrix, outcomes, alpha=0.0)


def w_scomp(matrix: DesignMatrix, outcomes: OutcomeVector, alpha: float = 1.0) -> DecodeResult:
    """Greedy cover with inverse-weight increments 1/w_t**alpha."""
    _check_dims(matrix, outcomes)
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return _greedy_decode(matrix, outcomes, alpha=float(alpha))


DECODERS = {
    "comp": comp,
    "dd": dd,
    "scomp": scomp,
    "wscomp": w_scomp,
}
