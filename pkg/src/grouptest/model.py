"""Defective-set prior and the noiseless OR test channel.

The defective set is drawn from the combinatorial prior: uniform over all
size-k subsets of the item universe. Test outcomes are exact: a test is
positive iff its pool contains at least one defective. Decoders never see
k; it is used only to construct the truth and to pick design parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import DesignMatrix


@dataclass(frozen=True)
class ItemSet:
    """A subset of the item universe, stored as a sorted index tuple."""

    members: tuple[int, ...]
    universe_size: int

    def __post_init__(self):
        members = tuple(sorted(set(int(i) for i in self.members)))
        object.__setattr__(self, "members", members)
        if members and (members[0] < 0 or members[-1] >= self.universe_size):
            raise ValueError(
                f"item index outside [0, {self.universe_size}): {members}"
            )

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "ItemSet":
        return cls(tuple(np.flatnonzero(mask).tolist()), universe_size=len(mask))

    def to_mask(self) -> np.ndarray:
        mask = np.zeros(self.universe_size, dtype=bool)
        mask[list(self.members)] = True
        return mask

    def __len__(self):
        return len(self.members)

    def __contains__(self, item):
        return item in set(self.members)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class OutcomeVector:
    """The T binary test results, index-aligned with the design's rows."""

    bits: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    @property
    def n_tests(self) -> int:
        return len(self.bits)

    def to_mask(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=bool)

    def to_json_dict(self) -> dict:
        return {"bits": [int(b) for b in self.bits]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "OutcomeVector":
        return cls(tuple(bool(b) for b in data["bits"]))


def sample_defective_set(n_items: int, n_defectives: int, seed) -> ItemSet:
    """Uniform draw over all size-k subsets of [0, N); deterministic per seed."""
    if not 0 <= n_defectives <= n_items:
        raise ValueError(
            f"need 0 <= k <= N, got k={n_defectives}, N={n_items}"
        )
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    members = rng.choice(n_items, size=n_defectives, replace=False)
    return ItemSet(tuple(int(i) for i in members), universe_size=n_items)


def run_tests(matrix: DesignMatrix, defectives: ItemSet) -> OutcomeVector:
    """Noiseless outcomes: test t is positive iff pool t meets the defective set."""
    if defectives.universe_size != matrix.n_items:
        raise ValueError(
            f"universe size {defectives.universe_size} does not match "
            f"matrix n_items {matrix.n_items}"
        )
    hits = matrix.dense & defectives.to_mask()[np.newaxis, :]
    return OutcomeVector(tuple(bool(b) for b in hits.any(axis=1)))
