"""Command-line front end.

Subcommands: ``design`` (generate a pooling matrix), ``decode`` (run one
decoder on matrix + outcome files), ``simulate`` (Monte Carlo sweep to
CSV), ``theory snr`` / ``theory f`` (closed-form tables), ``verify``
(brute-force oracle suite), ``plot`` (CSV to SVG figures).

Exit codes: 0 success, 1 parameter/usage error, 2 verification failure,
3 I/O error. The randomized subcommands (``design``, ``simulate``) require
a seed so that every run is reproducible.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import design as design_mod
from . import oracle, theory
from .decoders import DECODERS, comp, w_scomp
from .design import DesignMatrix, DesignSpec
from .model import OutcomeVector, run_tests, sample_defective_set
from .plotting import PlotSpec, emit_plot
from .sim import SimConfig, run_sweep


class VerificationError(Exception):
    """A brute-force check disagreed with a closed form."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; we map those to 1.
    def error(self, message):
        raise ValueError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="gt", description="Noiseless non-adaptive group testing toolkit")
    sub = parser.add_subparsers(dest="command")

    p_design = sub.add_parser("design", help="generate a pooling matrix")
    p_design.add_argument(
        "--kind",
        required=True,
        choices=["bernoulli", "constant_column", "near_constant_column"],
    )
    p_design.add_argument("--n-items", type=int, required=True)
    p_design.add_argument("--n-tests", type=int, required=True)
    p_design.add_argument("--p", type=float, help="inclusion probability (bernoulli)")
    p_design.add_argument("--column-weight", type=int, help="tests per item (column designs)")
    p_design.add_argument(
        "--k", type=int, help="derive the optimal parameter for k defectives"
    )
    p_design.add_argument("--seed", type=int, required=True)
    p_design.add_argument("-o", "--output", required=True)

    p_decode = sub.add_parser("decode", help="decode outcomes against a matrix")
    p_decode.add_argument("--matrix", required=True)
    p_decode.add_argument("--outcomes", required=True)
    p_decode.add_argument("--algo", required=True, choices=sorted(DECODERS))
    p_decode.add_argument("--alpha", type=float, default=1.0)
    p_decode.add_argument("--trace", action="store_true", help="include the greedy trace")
    p_decode.add_argument("-o", "--output", help="write JSON here instead of stdout")

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo sweep")
    p_sim.add_argument("--config", required=True, help="JSON config (SimConfig fields)")
    p_sim.add_argument("--seed", type=int, help="master seed (overrides the config)")
    p_sim.add_argument("-o", "--output", required=True, help="CSV output path")

    p_theory = sub.add_parser("theory", help="closed-form tables")
    theory_sub = p_theory.add_subparsers(dest="theory_command")
    p_snr = theory_sub.add_parser("snr", help="per-test SNRs and moments at one (N, k)")
    p_snr.add_argument("--n", type=int, required=True)
    p_snr.add_argument("--k", type=int, required=True)
    p_f = theory_sub.add_parser("f", help="positivity-function grid as CSV")
    p_f.add_argument("--k-max", type=int, required=True)
    p_f.add_argument("--n-span", type=int, required=True)
    p_f.add_argument("-o", "--output", required=True)

    p_verify = sub.add_parser("verify", help="brute-force oracle suite")
    p_verify.add_argument("--n-max", type=int, default=12)
    p_verify.add_argument("--trials", type=int, default=200, help="decoder cross-check instances")

    p_plot = sub.add_parser("plot", help="render a CSV sweep as SVG")
    p_plot.add_argument("--input", required=True)
    p_plot.add_argument(
        "--metric",
        required=True,
        choices=["success_prob", "mean_fn", "mean_fp", "jaccard", "f1", "delta"],
    )
    p_plot.add_argument("--overlay-counting-bound", action="store_true")
    p_plot.add_argument("--zoom", type=int, nargs=2, metavar=("T_LO", "T_HI"))
    p_plot.add_argument("--smooth-window", type=int)
    p_plot.add_argument("-o", "--output", required=True)

    return parser


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _dump_json(data: dict, path: str | None):
    text = json.dumps(data, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cmd_design(args) -> int:
    if args.kind == "bernoulli":
        p = args.p
        if p is None:
            if args.k is None:
                raise ValueError("bernoulli design needs --p or --k")
            p = design_mod.optimal_bernoulli_p(args.k)
        spec = DesignSpec(
            design_kind=args.kind,
            n_items=args.n_items,
            n_tests=args.n_tests,
            inclusion_prob=p,
            seed=args.seed,
        )
    else:
        weight = args.column_weight
        if weight is None:
            if args.k is None:
                raise ValueError("column designs need --column-weight or --k")
            weight = design_mod.optimal_column_weight(args.n_tests, args.k)
        spec = DesignSpec(
            design_kind=args.kind,
            n_items=args.n_items,
            n_tests=args.n_tests,
            column_weight=weight,
            seed=args.seed,
        )
    matrix = design_mod.generate(spec)
    _dump_json(matrix.to_json_dict(), args.output)
    return 0


def _cmd_decode(args) -> int:
    matrix = DesignMatrix.from_json_dict(_load_json(args.matrix))
    outcomes = OutcomeVector.from_json_dict(_load_json(args.outcomes))
    if args.algo == "wscomp":
        result = DECODERS[args.algo](matrix, outcomes, args.alpha)
    else:
        result = DECODERS[args.algo](matrix, outcomes)
    payload = result.to_json_dict()
    if not args.trace:
        payload["trace"] = None
    _dump_json(payload, args.output)
    return 0


def _cmd_simulate(args) -> int:
    raw = _load_json(args.config)
    if args.seed is not None:
        raw["master_seed"] = args.seed
    if "master_seed" not in raw:
        raise ValueError("provide --seed or a master_seed in the config")
    config = SimConfig.from_json_dict(raw)
    sweep = run_sweep(config)
    sweep.to_csv(args.output)
    return 0


def _cmd_theory(args) -> int:
    if args.theory_command == "snr":
        n, k = args.n, args.k
        p = design_mod.optimal_bernoulli_p(k)
        weighted = theory.weighted_moments(n, k, p)
        unweighted = theory.unweighted_moments(k, p)
        print(f"N={n} k={k} p=1/(k+1)={p:.6f} q={theory.coverage_prob(k, p):.6f}")
        for m in (weighted, unweighted):
            print(
                f"{m.rule:>10}: mu_d={m.mu_d:.6f} nu_d={m.nu_d:.6f} "
                f"mu_nd={m.mu_nd:.6f} nu_nd={m.nu_nd:.6f} "
                f"delta_mu={m.delta_mu:.6f} sigma2={m.sigma2:.6f}"
            )
        print(f"SNR_W = {weighted.snr_per:.6f}")
        print(f"SNR_U = {unweighted.snr_per:.6f}")
        return 0
    if args.theory_command == "f":
        with open(args.output, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["k", "N", "f_value", "residual_19", "snr_w", "snr_u"])
            for k in range(1, args.k_max + 1):
                p = design_mod.optimal_bernoulli_p(k)
                snr_u = theory.unweighted_moments(k, p).snr_per
                for n in range(k + 1, k + args.n_span + 1):
                    point = theory.f_value(n, k)
                    snr_w = theory.weighted_moments(n, k, p).snr_per
                    writer.writerow(
                        [k, n, repr(point.f_value), repr(point.residual_19), repr(snr_w), repr(snr_u)]
                    )
        return 0
    raise ValueError("theory needs a subcommand: snr or f")


def _verify_moments(n_max: int) -> tuple[float, float]:
    worst_w = 0.0
    worst_u = 0.0
    for n in range(2, n_max + 1):
        for k in range(1, n):
            for p in (0.1, 0.25, 0.5, 1.0 / (k + 1)):
                closed_w = theory.weighted_moments(n, k, p)
                enum_w = oracle.brute_force_weighted_moments(n, k, p)
                for attr in ("mu_d", "nu_d", "mu_nd", "nu_nd"):
                    worst_w = max(worst_w, abs(getattr(closed_w, attr) - getattr(enum_w, attr)))
                closed_u = theory.unweighted_moments(k, p)
                enum_u = oracle.brute_force_unweighted_moments(k, p, n)
                for attr in ("mu_d", "nu_d", "mu_nd", "nu_nd"):
                    worst_u = max(worst_u, abs(getattr(closed_u, attr) - getattr(enum_u, attr)))
    return worst_w, worst_u


def _verify_decoders(trials: int) -> int:
    violations = 0
    rng = np.random.default_rng(20240)
    for _ in range(trials):
        n = int(rng.integers(3, 11))
        k = int(rng.integers(1, min(4, n)))
        t = int(rng.integers(3, 13))
        spec = DesignSpec(
            design_kind="bernoulli",
            n_items=n,
            n_tests=t,
            inclusion_prob=float(rng.uniform(0.1, 0.6)),
            seed=int(rng.integers(0, 2**63)),
        )
        matrix = design_mod.generate(spec)
        truth = sample_defective_set(n, k, int(rng.integers(0, 2**63)))
        outcomes = run_tests(matrix, truth)
        feasible = oracle.consistent_sets(matrix, outcomes, k)
        comp_estimate = set(comp(matrix, outcomes).estimate.members)
        if set(truth.members) not in [set(s.members) for s in feasible]:
            violations += 1
        if any(not set(s.members) <= comp_estimate for s in feasible):
            violations += 1
        if len(feasible) == 1 and set(feasible[0].members) != set(truth.members):
            violations += 1
        estimate = set(w_scomp(matrix, outcomes).estimate.members)
        if estimate == set(truth.members) and set(truth.members) not in [
            set(s.members) for s in feasible
        ]:
            violations += 1
    return violations


def _cmd_verify(args) -> int:
    if args.n_max > 16:
        raise ValueError("--n-max is capped at 16 by the enumeration budget")
    worst_w, worst_u = _verify_moments(args.n_max)
    violations = _verify_decoders(args.trials)
    tol = 1e-12
    print(f"weighted moments vs enumeration  : worst |dev| = {worst_w:.3e}")
    print(f"unweighted moments vs enumeration: worst |dev| = {worst_u:.3e}")
    print(f"decoder/feasible-set cross-checks: {violations} violation(s) in {args.trials} instances")
    if worst_w > tol or worst_u > tol or violations > 0:
        raise VerificationError("oracle suite failed")
    print("verify: all checks passed")
    return 0


def _cmd_plot(args) -> int:
    spec = PlotSpec(
        input_csv=args.input,
        metric=args.metric,
        output_path=args.output,
        overlay_counting_bound=args.overlay_counting_bound,
        zoom=tuple(args.zoom) if args.zoom else None,
        smooth_window=args.smooth_window,
    )
    emit_plot(spec)
    return 0


_COMMANDS = {
    "design": _cmd_design,
    "decode": _cmd_decode,
    "simulate": _cmd_simulate,
    "theory": _cmd_theory,
    "verify": _cmd_verify,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 1
        return _COMMANDS[args.command](args)
    except json.JSONDecodeError as exc:
        print(f"gt: malformed JSON: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"gt: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"gt: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except OSError as exc:
        print(f"gt: {exc}", file=sys.stderr)
        return 3


def cli_main():
    sys.exit(main())
