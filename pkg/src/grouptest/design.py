"""Pooling-matrix designs: Bernoulli, constant and near-constant column weight.

A pooling matrix assigns items (columns) to tests (rows). Three random
families are provided, together with the parameter choices that are optimal
for each family given the number of defectives:

* ``bernoulli``: every entry is an independent Bernoulli(p) draw, with
  ``p = 1/(k+1)`` the optimal inclusion probability for k defectives.
* ``constant_column``: every item joins exactly L tests, an L-subset drawn
  uniformly without replacement, independently per item.
* ``near_constant_column``: every item draws L tests uniformly *with*
  replacement; duplicates collapse, so column weights range over [1, L].
  The optimal choice for both column families is ``L = floor((T/k) ln 2)``.

Generation is deterministic given the spec (including its seed) and does not
depend on thread count or platform word order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_DESIGN_KINDS = ("bernoulli", "constant_column", "near_constant_column", "explicit")


@dataclass(frozen=True)
class DesignSpec:
    """Parameters for generating one pooling matrix.

    Exactly the parameter relevant to ``design_kind`` must be set:
    ``inclusion_prob`` for bernoulli, ``column_weight`` for the column
    designs. ``seed`` may be any value acceptable to numpy's SeedSequence
    (an unsigned int or a tuple of ints).
    """

    design_kind: str
    n_items: int
    n_tests: int
    inclusion_prob: float | None = None
    column_weight: int | None = None
    seed: int | tuple[int, ...] = 0

    def __post_init__(self):
        if self.design_kind not in ("bernoulli", "constant_column", "near_constant_column"):
            raise ValueError(f"unknown design_kind {self.design_kind!r}")
        if self.n_items < 1 or self.n_tests < 1:
            raise ValueError("n_items and n_tests must be >= 1")
        if self.design_kind == "bernoulli":
            if self.inclusion_prob is None or self.column_weight is not None:
                raise ValueError("bernoulli design takes inclusion_prob only")
            if not 0.0 <= self.inclusion_prob <= 1.0:
                raise ValueError(f"inclusion_prob must be in [0, 1], got {self.inclusion_prob}")
        else:
            if self.column_weight is None or self.inclusion_prob is not None:
                raise ValueError(f"{self.design_kind} design takes column_weight only")
            if self.column_weight < 1:
                raise ValueError(f"column_weight must be >= 1, got {self.column_weight}")
            if self.design_kind == "constant_column" and self.column_weight > self.n_tests:
                raise ValueError(
                    f"column_weight {self.column_weight} exceeds n_tests {self.n_tests}"
                )


class DesignMatrix:
    """Immutable binary T x N pooling matrix with row and column index views.

    ``rows[t]`` lists the items pooled into test t; ``cols[i]`` lists the
    tests item i participates in. Both views describe the same matrix. A
    dense boolean array is kept alongside for the vectorized decoder
    kernels. Indices are 0-based everywhere.
    """

    __slots__ = ("n_tests", "n_items", "design_kind", "params", "_rows", "_cols", "_dense")

    def __init__(self, rows, n_items: int, design_kind: str = "explicit", params: dict | None = None):
        if design_kind not in _DESIGN_KINDS:
            raise ValueError(f"unknown design_kind {design_kind!r}")
        self.n_tests = len(rows)
        self.n_items = int(n_items)
        self.design_kind = design_kind
        self.params = dict(params or {})
        dense = np.zeros((self.n_tests, self.n_items), dtype=bool)
        clean_rows = []
        for t, row in enumerate(rows):
            idx = sorted(set(int(i) for i in row))
            if idx and (idx[0] < 0 or idx[-1] >= self.n_items):
                raise ValueError(f"test {t} contains an item index outside [0, {self.n_items})")
            dense[t, idx] = True
            clean_rows.append(tuple(idx))
        dense.flags.writeable = False
        self._rows = tuple(clean_rows)
        self._cols = None
        self._dense = dense

    @classmethod
    def _from_dense(cls, dense: np.ndarray, design_kind: str, params: dict) -> "DesignMatrix":
        # Fast path for the generators; row/column views are built on demand.
        self = cls.__new__(cls)
        self.n_tests, self.n_items = dense.shape
        self.design_kind = design_kind
        self.params = dict(params)
        dense = np.ascontiguousarray(dense, dtype=bool)
        dense.flags.writeable = False
        self._rows = None
        self._cols = None
        self._dense = dense
        return self

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        if self._rows is None:
            self._rows = tuple(
                tuple(np.flatnonzero(self._dense[t]).tolist()) for t in range(self.n_tests)
            )
        return self._rows

    @property
    def cols(self) -> tuple[tuple[int, ...], ...]:
        if self._cols is None:
            cols = [[] for _ in range(self.n_items)]
            for t, row in enumerate(self.rows):
                for i in row:
                    cols[i].append(t)
            self._cols = tuple(tuple(c) for c in cols)
        return self._cols

    @property
    def dense(self) -> np.ndarray:
        """Read-only boolean array of shape (n_tests, n_items)."""
        return self._dense

    def column_weights(self) -> np.ndarray:
        return self._dense.sum(axis=0)

    def __eq__(self, other):
        return (
            isinstance(other, DesignMatrix)
            and self.n_items == other.n_items
            and self.n_tests == other.n_tests
            and bool(np.array_equal(self._dense, other._dense))
        )

    def __repr__(self):
        return (
            f"DesignMatrix(n_tests={self.n_tests}, n_items={self.n_items}, "
            f"design_kind={self.design_kind!r})"
        )

    def to_json_dict(self) -> dict:
        return {
            "n_tests": self.n_tests,
            "n_items": self.n_items,
            "rows": [list(r) for r in self.rows],
            "design_kind": self.design_kind,
            "params": self.params,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DesignMatrix":
        rows = data["rows"]
        if len(rows) != data["n_tests"]:
            raise ValueError("rows length does not match n_tests")
        return cls(
            rows,
            n_items=data["n_items"],
            design_kind=data.get("design_kind", "explicit"),
            params=data.get("params", {}),
        )


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def gen_bernoulli(spec: DesignSpec) -> DesignMatrix:
    """Matrix with independent Bernoulli(p) entries; deterministic per (spec, seed)."""
    if spec.design_kind != "bernoulli":
        raise ValueError(f"spec is for {spec.design_kind!r}, expected bernoulli")
    p = spec.inclusion_prob
    rng = _rng(spec.seed)
    dense = rng.random((spec.n_tests, spec.n_items)) < p
    return DesignMatrix._from_dense(
        dense, "bernoulli", {"p": p, "seed": _seed_for_params(spec.seed)}
    )


def gen_constant_column(spec: DesignSpec) -> DesignMatrix:
    """Each column is a uniform L-subset of tests, drawn without replacement."""
    if spec.design_kind != "constant_column":
        raise ValueError(f"spec is for {spec.design_kind!r}, expected constant_column")
    L = spec.column_weight
    rng = _rng(spec.seed)
    dense = np.zeros((spec.n_tests, spec.n_items), dtype=bool)
    for i in range(spec.n_items):
        dense[rng.choice(spec.n_tests, size=L, replace=False), i] = True
    return DesignMatrix._from_dense(
        dense, "constant_column", {"L": L, "seed": _seed_for_params(spec.seed)}
    )


def gen_near_constant_column(spec: DesignSpec) -> DesignMatrix:
    """Each column draws L tests uniformly with replacement; duplicates collapse."""
    if spec.design_kind != "near_constant_column":
        raise ValueError(f"spec is for {spec.design_kind!r}, expected near_constant_column")
    L = spec.column_weight
    rng = _rng(spec.seed)
    dense = np.zeros((spec.n_tests, spec.n_items), dtype=bool)
    for i in range(spec.n_items):
        dense[rng.integers(0, spec.n_tests, size=L), i] = True
    return DesignMatrix._from_dense(
        dense, "near_constant_column", {"L": L, "seed": _seed_for_params(spec.seed)}
    )


_GENERATORS = {
    "bernoulli": gen_bernoulli,
    "constant_column": gen_constant_column,
    "near_constant_column": gen_near_constant_column,
}


def generate(spec: DesignSpec) -> DesignMatrix:
    """Dispatch to the generator for ``spec.design_kind``."""
    return _GENERATORS[spec.design_kind](spec)


def _seed_for_params(seed) -> int | list[int]:
    # JSON-friendly copy of the seed (tuples become lists).
    return list(seed) if isinstance(seed, tuple) else int(seed)


def optimal_bernoulli_p(n_defectives: int) -> float:
    """Inclusion probability 1/(k+1) that balances sparsity and information."""
    if n_defectives < 1:
        raise ValueError("optimal inclusion probability is undefined for k < 1")
    return 1.0 / (n_defectives + 1)


def optimal_column_weight(n_tests: int, n_defectives: int) -> int:
    """Tests per item floor((T/k) ln 2), the information-maximizing choice."""
    if n_tests < 1 or n_defectives < 1:
        raise ValueError("n_tests and n_defectives must be >= 1")
    weight = math.floor((n_tests / n_defectives) * math.log(2))
    if weight < 1:
        raise ValueError(
            f"n_tests={n_tests} too small for k={n_defectives} under this design"
        )
    return weight
