"""Command-line entry point.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import ValidationError
from .harness import (
    ExperimentConfig,
    rows_to_csv,
    run_experiment,
    summarize,
    summary_to_csv,
)
from .ovo import (
    LabelRanker,
    RateBoundParams,
    estimate_ranking_risk,
    fit_ovo,
    n0_upper_bound,
    predict_permutation,
    rate_bound,
    score_labels,
    topk_error,
)
from .perm import TieBreakPolicy, invert
from .synth import LabeledDataset, PosteriorOracle, sample_dataset


def _tie_break(args: argparse.Namespace) -> TieBreakPolicy:
    if args.tie_seed is not None:
        return TieBreakPolicy("seeded-random", args.tie_seed)
    return TieBreakPolicy()


def cmd_synth(args: argparse.Namespace) -> None:
    oracle = PosteriorOracle(args.depth, args.alpha, tuple(args.splits) if args.splits else None)
    sample_dataset(oracle, args.n, args.seed).to_csv(args.out)
    if args.oracle_out:
        oracle.save(args.oracle_out)


def cmd_fit(args: argparse.Namespace) -> None:
    data = LabeledDataset.from_csv(args.data, args.k)
    learner = {"linear": {"steps": args.steps, "step_size": args.step_size}} if args.learner == "linear" else "stump"
    fit_ovo(data, learner, _tie_break(args)).save(args.out)


def cmd_predict(args: argparse.Namespace) -> None:
    ranker = LabelRanker.load(args.model)
    perm, cyclic = predict_permutation(ranker, args.x)
    out = {
        "scores": list(score_labels(ranker, args.x).scores),
        "permutation": list(perm.ranks),
        "order": list(invert(perm).ranks),
        "was_cyclic": cyclic,
    }
    print(json.dumps(out))


def cmd_eval(args: argparse.Namespace) -> None:
    ranker = LabelRanker.load(args.model)
    oracle = PosteriorOracle.load(args.oracle)
    print(json.dumps(estimate_ranking_risk(ranker, oracle, args.n_test, args.seed).to_dict()))


def cmd_topk(args: argparse.Namespace) -> None:
    ranker = LabelRanker.load(args.model)
    test = LabeledDataset.from_csv(args.data, ranker.k_count)
    print(json.dumps({"k": args.k, "topk_error": topk_error(ranker, test, args.k), "n_test": len(test)}))


def cmd_curve(args: argparse.Namespace) -> None:
    cfg = ExperimentConfig.load(args.config)
    rows = list(run_experiment(cfg, workers=args.workers))
    Path(args.out).write_text(rows_to_csv(rows))
    if args.summary:
        Path(args.summary).write_text(summary_to_csv(summarize(rows)))


def cmd_rate_bound(args: argparse.Namespace) -> None:
    params = RateBoundParams(alpha=args.alpha, B=args.B, eps=args.eps, V=args.V, C=args.C)
    print(json.dumps({
        "r_n": rate_bound(params, args.n, args.delta),
        "n0_upper_bound": n0_upper_bound(params, args.delta),
        "h": params.h,
        "beta": params.beta,
    }))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ovorank", description="One-versus-one label ranking toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="sample a synthetic labeled dataset")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--splits", type=float, nargs="+", help="per-level split points (default: dyadic)")
    s.add_argument("--out", required=True)
    s.add_argument("--oracle-out", help="also write the oracle parameters as JSON")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("fit", help="fit an OVO ranker on a CSV dataset")
    s.add_argument("--data", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--learner", choices=["stump", "linear"], default="stump")
    s.add_argument("--steps", type=int, default=500)
    s.add_argument("--step-size", type=float, default=1.0)
    s.add_argument("--tie-seed", type=int, help="use seeded-random tie-breaking with this seed")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("predict", help="scores and permutation at one point")
    s.add_argument("--model", required=True)
    s.add_argument("--x", type=float, required=True)
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("eval", help="Monte Carlo ranking risk against an oracle")
    s.add_argument("--model", required=True)
    s.add_argument("--oracle", required=True)
    s.add_argument("--n-test", type=int, default=1000)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("topk", help="top-k error on a labeled test set")
    s.add_argument("--model", required=True)
    s.add_argument("--data", required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_topk)

    s = sub.add_parser("curve", help="run the learning-curve experiment")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--summary", help="also write per-(alpha, n) quartiles")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("rate-bound", help="evaluate the excess-risk rate bound and n0")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--B", type=float, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--V", type=float, required=True)
    s.add_argument("--C", type=float, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.set_defaults(func=cmd_rate_bound)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
