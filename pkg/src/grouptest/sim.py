"""Monte Carlo benchmark harness for the decoder/design families.

A sweep runs ``n_trials`` independent trials at every requested number of
tests T. Each trial draws a fresh pooling matrix and a fresh defective set,
runs every requested decoder on the same instance, and records recovery
statistics. Per-trial seeds are derived from (master_seed, T, trial index)
by counter-mode mixing, so results do not depend on scheduling or execution
order and a sweep is a pure function of its config.

Design parameters follow the optimal choices: p = 1/(k+1) for Bernoulli
and L = floor((T/k) ln 2) for the column designs. The degenerate k = 0
prior is simulated with full participation (p = 1, L = T).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import design as design_mod
from .decoders import DECODERS
from .metrics import RecoveryStats, confusion, counting_bound
from .model import sample_defective_set, run_tests

ALGORITHMS = ("comp", "dd", "scomp", "wscomp")

CSV_COLUMNS = [
    "design",
    "algorithm",
    "N",
    "k",
    "T",
    "alpha",
    "n_trials",
    "master_seed",
    "success_prob",
    "mean_fn",
    "mean_fp",
    "mean_jaccard",
    "mean_f1",
    "mean_misclassified",
    "counting_bound",
]


@dataclass(frozen=True)
class SimConfig:
    n_items: int
    n_defectives: int
    design_kind: str
    t_values: tuple[int, ...]
    n_trials: int = 1000
    algorithms: tuple[str, ...] = ALGORITHMS
    alpha: float = 1.0
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "t_values", tuple(int(t) for t in self.t_values))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.t_values or any(t < 1 for t in self.t_values):
            raise ValueError("t_values must be nonempty and positive")
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if not 0 <= self.n_defectives <= self.n_items:
            raise ValueError("need 0 <= k <= N")
        if self.design_kind not in ("bernoulli", "constant_column", "near_constant_column"):
            raise ValueError(f"unknown design_kind {self.design_kind!r}")
        unknown = [a for a in self.algorithms if a not in DECODERS]
        if unknown:
            raise ValueError(f"unknown algorithms: {unknown}")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")

    def to_json_dict(self) -> dict:
        return {
            "n_items": self.n_items,
            "n_defectives": self.n_defectives,
            "design_kind": self.design_kind,
            "t_values": list(self.t_values),
            "n_trials": self.n_trials,
            "algorithms": list(self.algorithms),
            "alpha": self.alpha,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SimConfig":
        return cls(
            n_items=data["n_items"],
            n_defectives=data["n_defectives"],
            design_kind=data["design_kind"],
            t_values=tuple(data["t_values"]),
            n_trials=data.get("n_trials", 1000),
            algorithms=tuple(data.get("algorithms", ALGORITHMS)),
            alpha=data.get("alpha", 1.0),
            master_seed=data["master_seed"],
        )


@dataclass(frozen=True)
class SweepRow:
    design: str
    algorithm: str
    n_items: int
    n_defectives: int
    n_tests: int
    alpha: float
    n_trials: int
    master_seed: int
    success_prob: float
    mean_fn: float
    mean_fp: float
    mean_jaccard: float
    mean_f1: float
    mean_misclassified: float
    counting_bound: float


@dataclass(frozen=True)
class SweepResult:
    config: SimConfig
    rows: tuple[SweepRow, ...] = field(default_factory=tuple)

    def row(self, n_tests: int, algorithm: str) -> SweepRow:
        for r in self.rows:
            if r.n_tests == n_tests and r.algorithm == algorithm:
                return r
        raise KeyError(f"no row for T={n_tests}, algorithm={algorithm!r}")

    def to_csv(self, path_or_file) -> None:
        if hasattr(path_or_file, "write"):
            self._write_csv(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                self._write_csv(fh)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        self._write_csv(buf)
        return buf.getvalue()

    def _write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow(
                [
                    r.design,
                    r.algorithm,
                    r.n_items,
                    r.n_defectives,
                    r.n_tests,
                    repr(r.alpha),
                    r.n_trials,
                    r.master_seed,
                    repr(r.success_prob),
                    repr(r.mean_fn),
                    repr(r.mean_fp),
                    repr(r.mean_jaccard),
                    repr(r.mean_f1),
                    repr(r.mean_misclassified),
                    repr(r.counting_bound),
                ]
            )


def design_spec_for(design_kind: str, n_items: int, n_defectives: int, n_tests: int, seed=0) -> design_mod.DesignSpec:
    """The per-T design spec with optimal parameters (degenerate at k = 0)."""
    if design_kind == "bernoulli":
        p = 1.0 if n_defectives == 0 else design_mod.optimal_bernoulli_p(n_defectives)
        return design_mod.DesignSpec(
            design_kind="bernoulli", n_items=n_items, n_tests=n_tests, inclusion_prob=p, seed=seed
        )
    weight = (
        n_tests
        if n_defectives == 0
        else design_mod.optimal_column_weight(n_tests, n_defectives)
    )
    return design_mod.DesignSpec(
        design_kind=design_kind, n_items=n_items, n_tests=n_tests, column_weight=weight, seed=seed
    )


def run_trial(
    n_items: int,
    n_defectives: int,
    design_spec: design_mod.DesignSpec,
    algorithms,
    alpha: float,
    trial_seed,
) -> dict[str, RecoveryStats]:
    """One independent trial: fresh matrix, fresh defective set, all decoders.

    ``trial_seed`` may be an int or a tuple of ints; the matrix and the
    defective set get independent sub-seeds derived from it.
    """
    state = np.random.SeedSequence(trial_seed).generate_state(2, np.uint64)
    spec = design_mod.DesignSpec(
        design_kind=design_spec.design_kind,
        n_items=design_spec.n_items,
        n_tests=design_spec.n_tests,
        inclusion_prob=design_spec.inclusion_prob,
        column_weight=design_spec.column_weight,
        seed=int(state[0]),
    )
    matrix = design_mod.generate(spec)
    truth = sample_defective_set(n_items, n_defectives, int(state[1]))
    outcomes = run_tests(matrix, truth)

    stats = {}
    for name in algorithms:
        if name == "wscomp":
            result = DECODERS[name](matrix, outcomes, alpha)
        else:
            result = DECODERS[name](matrix, outcomes)
        stats[name] = confusion(truth, result.estimate)
    return stats


def run_sweep(config: SimConfig) -> SweepResult:
    """Full benchmark sweep; a pure function of the config."""
    rows = []
    for n_tests in config.t_values:
        spec = design_spec_for(
            config.design_kind, config.n_items, config.n_defectives, n_tests
        )
        per_algo: dict[str, list[RecoveryStats]] = {a: [] for a in config.algorithms}
        for trial in range(config.n_trials):
            trial_stats = run_trial(
                config.n_items,
                config.n_defectives,
                spec,
                config.algorithms,
                config.alpha,
                trial_seed=(config.master_seed, n_tests, trial),
            )
            for a in config.algorithms:
                per_algo[a].append(trial_stats[a])
        bound = counting_bound(config.n_items, config.n_defectives, n_tests)
        for a in config.algorithms:
            collected = per_algo[a]
            n = len(collected)
            rows.append(
                SweepRow(
                    design=config.design_kind,
                    algorithm=a,
                    n_items=config.n_items,
                    n_defectives=config.n_defectives,
                    n_tests=n_tests,
                    alpha=config.alpha,
                    n_trials=n,
                    master_seed=config.master_seed,
                    success_prob=sum(s.exact for s in collected) / n,
                    mean_fn=sum(s.false_negatives for s in collected) / n,
                    mean_fp=sum(s.false_positives for s in collected) / n,
                    mean_jaccard=sum(s.jaccard for s in collected) / n,
                    mean_f1=sum(s.f1 for s in collected) / n,
                    mean_misclassified=sum(s.misclassified for s in collected) / n,
                    counting_bound=bound,
                )
            )
    return SweepResult(config=config, rows=tuple(rows))


def delta_series(sweep: SweepResult, smooth_window: int | None = None) -> list[tuple[int, float]]:
    """Per-T difference of mean misclassification: scomp minus wscomp.

    ``smooth_window`` applies a centered simple moving average (edges use
    the available neighbours).
    """
    algorithms = {r.algorithm for r in sweep.rows}
    for required in ("scomp", "wscomp"):
        if required not in algorithms:
            raise ValueError(f"sweep does not include algorithm {required!r}")
    t_values = sorted({r.n_tests for r in sweep.rows})
    deltas = [
        sweep.row(t, "scomp").mean_misclassified - sweep.row(t, "wscomp").mean_misclassified
        for t in t_values
    ]
    if smooth_window is not None and smooth_window > 1:
        half = (smooth_window - 1) // 2
        smoothed = []
        for i in range(len(deltas)):
            lo = max(0, i - half)
            hi = min(len(deltas), i + half + 1)
            smoothed.append(sum(deltas[lo:hi]) / (hi - lo))
        deltas = smoothed
    return list(zip(t_values, deltas))
