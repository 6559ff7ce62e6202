"""Learning-curve experiments: n-grid x trials, CSV output, quartile summaries.

Each trial gets its own seeds, derived from ``(base_seed, alpha index, n index,
trial index, stream)`` through ``numpy.random.SeedSequence`` (a documented hash
of the integer entropy words).  Stream 0 draws the training set, stream 1 the
test points.  No state is shared between trials, so the rows do not depend on
the order or process in which trials run.
"""

from __future__ import annotations

import csv
import io
import json
import time
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .ovo import estimate_ranking_risk, fit_ovo, resolve_learner
from .perm import TieBreakPolicy
from .synth import PosteriorOracle, sample_dataset

DEFAULT_N_LIST: tuple[int, ...] = (10, 30, 100, 300, 1_000, 3_000, 10_000, 30_000, 100_000)
CSV_HEADER = ("alpha", "n", "trial", "mismatch_rate", "mean_kendall", "cycle_rate", "fit_seconds")
METRIC_NAMES = ("mismatch_rate", "mean_kendall", "cycle_rate")


@dataclass(frozen=True)
class ExperimentConfig:
    depth: int = 2
    alpha_list: tuple[float, ...] = (0.2, 0.8)
    n_list: tuple[int, ...] = DEFAULT_N_LIST
    trials: int = 100
    n_test: int = 1000
    learner: str | dict = "stump"
    tie_break: TieBreakPolicy = field(default_factory=TieBreakPolicy)
    base_seed: int = 0
    splits: tuple[float, ...] | None = None
    # wall-clock fit time is not reproducible; off by default so CSVs are byte-stable
    record_fit_seconds: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha_list", tuple(float(a) for a in self.alpha_list))
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if self.splits is not None:
            object.__setattr__(self, "splits", tuple(float(s) for s in self.splits))
        if isinstance(self.tie_break, (dict, str)):
            object.__setattr__(self, "tie_break", TieBreakPolicy.from_dict(self.tie_break))
        problems = []
        if not isinstance(self.depth, int) or self.depth < 0:
            problems.append(f"depth: must be a nonnegative integer, got {self.depth!r}")
        if not self.alpha_list or any(not 0.0 < a <= 1.0 for a in self.alpha_list):
            problems.append(f"alpha_list: every alpha must lie in (0, 1], got {list(self.alpha_list)}")
        if not self.n_list or any(n < 1 for n in self.n_list):
            problems.append(f"n_list: every n must be positive, got {list(self.n_list)}")
        if self.trials < 1:
            problems.append(f"trials: must be positive, got {self.trials}")
        if self.n_test < 1:
            problems.append(f"n_test: must be positive, got {self.n_test}")
        if self.base_seed < 0:
            problems.append(f"base_seed: must be nonnegative, got {self.base_seed}")
        try:
            resolve_learner(self.learner)
        except ValidationError as exc:
            problems.append(f"learner: {exc}")
        if problems:
            raise ValidationError("invalid experiment config: " + "; ".join(problems))

    def oracle(self, alpha: float) -> PosteriorOracle:
        return PosteriorOracle(self.depth, alpha, self.splits)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["tie_break"] = self.tie_break.to_dict()
        d["alpha_list"] = list(self.alpha_list)
        d["n_list"] = list(self.n_list)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ValidationError(f"invalid experiment config: unknown fields {unknown}")
        return cls(**d)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class TrialRow:
    alpha: float
    n: int
    trial: int
    mismatch_rate: float
    mean_kendall: float
    cycle_rate: float
    fit_seconds: float | None = None

    def csv_fields(self) -> list[str]:
        return [
            repr(self.alpha),
            str(self.n),
            str(self.trial),
            repr(self.mismatch_rate),
            repr(self.mean_kendall),
            repr(self.cycle_rate),
            "" if self.fit_seconds is None else repr(self.fit_seconds),
        ]


def trial_seeds(base_seed: int, alpha_index: int, n_index: int, trial: int) -> tuple[int, int]:
    """(train seed, test seed) for one trial."""
    words = [base_seed, alpha_index, n_index, trial]
    return tuple(
        int(np.random.SeedSequence(words + [stream]).generate_state(1, np.uint64)[0]) for stream in (0, 1)
    )


def run_trial(cfg: ExperimentConfig, alpha_index: int, n_index: int, trial: int) -> TrialRow:
    alpha = cfg.alpha_list[alpha_index]
    n = cfg.n_list[n_index]
    oracle = cfg.oracle(alpha)
    train_seed, test_seed = trial_seeds(cfg.base_seed, alpha_index, n_index, trial)
    data = sample_dataset(oracle, n, train_seed)
    t0 = time.perf_counter()
    ranker = fit_ovo(data, cfg.learner, cfg.tie_break)
    elapsed = time.perf_counter() - t0
    report = estimate_ranking_risk(ranker, oracle, cfg.n_test, test_seed)
    return TrialRow(
        alpha=alpha,
        n=n,
        trial=trial,
        mismatch_rate=report.mismatch_rate,
        mean_kendall=report.mean_kendall,
        cycle_rate=report.cycle_rate,
        fit_seconds=elapsed if cfg.record_fit_seconds else None,
    )


def _run_task(args: tuple[ExperimentConfig, int, int, int]) -> TrialRow:
    return run_trial(*args)


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> Iterator[TrialRow]:
    """Run every (alpha, n, trial) cell; rows come out sorted by (alpha, n, trial)."""
    tasks = [
        (cfg, ai, ni, t)
        for ai in range(len(cfg.alpha_list))
        for ni in range(len(cfg.n_list))
        for t in range(cfg.trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        rows = [_run_task(t) for t in tasks]
    rows.sort(key=lambda r: (r.alpha, r.n, r.trial))
    return iter(rows)


def rows_to_csv(rows: Iterable[TrialRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.csv_fields())
    return buf.getvalue()


def rows_from_csv(text: str) -> list[TrialRow]:
    r = csv.DictReader(io.StringIO(text))
    return [
        TrialRow(
            alpha=float(d["alpha"]),
            n=int(d["n"]),
            trial=int(d["trial"]),
            mismatch_rate=float(d["mismatch_rate"]),
            mean_kendall=float(d["mean_kendall"]),
            cycle_rate=float(d["cycle_rate"]),
            fit_seconds=float(d["fit_seconds"]) if d["fit_seconds"] else None,
        )
        for d in r
    ]


@dataclass(frozen=True)
class Quartiles:
    min: float
    q1: float
    median: float
    q3: float
    max: float


def quartiles(values: Sequence[float]) -> Quartiles:
    """Five-number summary; quartiles interpolate linearly between order statistics.

    This is the inclusive convention (``statistics.quantiles(method="inclusive")``):
    the ``p``-quantile sits at position ``p * (n - 1)`` of the sorted values.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValidationError("cannot summarize an empty sample")
    q = np.percentile(v, [0, 25, 50, 75, 100], method="linear")
    return Quartiles(*(float(t) for t in q))


def summarize(rows: Iterable[TrialRow]) -> dict[tuple[float, int], dict[str, Quartiles]]:
    groups: dict[tuple[float, int], list[TrialRow]] = {}
    for row in rows:
        groups.setdefault((row.alpha, row.n), []).append(row)
    if not groups:
        raise ValidationError("cannot summarize an empty set of rows")
    return {
        key: {m: quartiles([getattr(r, m) for r in grp]) for m in METRIC_NAMES}
        for key, grp in sorted(groups.items())
    }


def summary_to_csv(summary: dict[tuple[float, int], dict[str, Quartiles]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "n", "metric", "min", "q1", "median", "q3", "max"])
    for (alpha, n), per_metric in summary.items():
        for metric, q in per_metric.items():
            w.writerow([repr(alpha), n, metric, repr(q.min), repr(q.q1), repr(q.median), repr(q.q3), repr(q.max)])
    return buf.getvalue()
