import math

import pytest

from grouptest.sim import (
    ALGORITHMS,
    CSV_COLUMNS,
    SimConfig,
    delta_series,
    design_spec_for,
    run_sweep,
    run_trial,
)


def small_config(**overrides):
    base = dict(
        n_items=40,
        n_defectives=3,
        design_kind="bernoulli",
        t_values=(15, 25),
        n_trials=40,
        master_seed=11,
    )
    base.update(overrides)
    return SimConfig(**base)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            small_config(t_values=())
        with pytest.raises(ValueError):
            small_config(n_trials=0)
        with pytest.raises(ValueError):
            small_config(n_defectives=41)
        with pytest.raises(ValueError):
            small_config(algorithms=("comp", "nope"))

    def test_json_round_trip(self):
        cfg = small_config()
        assert SimConfig.from_json_dict(cfg.to_json_dict()) == cfg


class TestDesignSpecFor:
    def test_bernoulli_uses_optimal_p(self):
        spec = design_spec_for("bernoulli", 500, 10, 100)
        assert spec.inclusion_prob == pytest.approx(1 / 11)

    def test_column_uses_optimal_weight(self):
        spec = design_spec_for("constant_column", 500, 10, 100)
        assert spec.column_weight == 6

    def test_degenerate_no_defectives(self):
        assert design_spec_for("bernoulli", 10, 0, 5).inclusion_prob == 1.0
        assert design_spec_for("constant_column", 10, 0, 5).column_weight == 5


class TestRunTrial:
    def test_no_defectives_trivial_recovery(self):
        spec = design_spec_for("bernoulli", 12, 0, 6)
        stats = run_trial(12, 0, spec, ALGORITHMS, 1.0, trial_seed=3)
        for algo in ("dd", "scomp", "wscomp"):
            assert stats[algo].exact
        # p = 1 puts every item in every test, so COMP is exact as well
        assert stats["comp"].exact

    def test_fixed_seed_reproducible(self):
        spec = design_spec_for("bernoulli", 30, 4, 20)
        a = run_trial(30, 4, spec, ALGORITHMS, 1.0, trial_seed=(5, 20, 7))
        b = run_trial(30, 4, spec, ALGORITHMS, 1.0, trial_seed=(5, 20, 7))
        assert a == b

    def test_structural_error_patterns(self):
        spec = design_spec_for("bernoulli", 50, 5, 25)
        for trial in range(30):
            stats = run_trial(50, 5, spec, ALGORITHMS, 1.0, trial_seed=(1, 25, trial))
            assert stats["comp"].false_negatives == 0
            assert stats["dd"].false_positives == 0


class TestRunSweep:
    def test_csv_deterministic(self):
        cfg = small_config()
        assert run_sweep(cfg).to_csv_text() == run_sweep(cfg).to_csv_text()

    def test_csv_columns_exact(self):
        text = run_sweep(small_config(n_trials=2, t_values=(10,))).to_csv_text()
        assert text.splitlines()[0] == ",".join(CSV_COLUMNS)

    def test_single_trial_equals_aggregate(self):
        cfg = small_config(n_trials=1, t_values=(18,), algorithms=("scomp",))
        sweep = run_sweep(cfg)
        spec = design_spec_for("bernoulli", cfg.n_items, cfg.n_defectives, 18)
        stats = run_trial(
            cfg.n_items, cfg.n_defectives, spec, ("scomp",), 1.0,
            trial_seed=(cfg.master_seed, 18, 0),
        )["scomp"]
        row = sweep.row(18, "scomp")
        assert row.success_prob == float(stats.exact)
        assert row.mean_fn == stats.false_negatives
        assert row.mean_fp == stats.false_positives
        assert row.mean_misclassified == stats.misclassified

    def test_misclassified_is_fn_plus_fp(self):
        sweep = run_sweep(small_config())
        for row in sweep.rows:
            assert row.mean_misclassified == pytest.approx(row.mean_fn + row.mean_fp)

    def test_success_trend_nondecreasing_with_slack(self):
        cfg = SimConfig(
            n_items=100,
            n_defectives=5,
            design_kind="bernoulli",
            t_values=(30, 50, 70, 90),
            n_trials=200,
            master_seed=4,
        )
        sweep = run_sweep(cfg)
        for algo in ALGORITHMS:
            probs = [sweep.row(t, algo).success_prob for t in cfg.t_values]
            for a, b in zip(probs, probs[1:]):
                slack = 3 * math.sqrt((a * (1 - a) + b * (1 - b)) / cfg.n_trials + 1e-12)
                assert b >= a - slack

    def test_wscomp_high_success_at_t200(self):
        cfg = SimConfig(
            n_items=500,
            n_defectives=10,
            design_kind="bernoulli",
            t_values=(200,),
            n_trials=1000,
            algorithms=("wscomp",),
            master_seed=20250810,
        )
        assert run_sweep(cfg).row(200, "wscomp").success_prob >= 0.95


class TestDeltaSeries:
    def test_requires_both_algorithms(self):
        sweep = run_sweep(small_config(algorithms=("comp", "scomp")))
        with pytest.raises(ValueError):
            delta_series(sweep)

    def test_zero_when_algorithms_agree(self):
        # plenty of tests: both greedy decoders recover exactly, delta = 0
        cfg = small_config(t_values=(80,), n_trials=30)
        series = delta_series(run_sweep(cfg))
        assert series == [(80, 0.0)]

    def test_smoothing_window(self):
        sweep = run_sweep(small_config(t_values=(10, 15, 20, 25), n_trials=20))
        raw = delta_series(sweep)
        smooth = delta_series(sweep, smooth_window=3)
        assert [t for t, _ in raw] == [t for t, _ in smooth]
        assert smooth[1][1] == pytest.approx((raw[0][1] + raw[1][1] + raw[2][1]) / 3)
