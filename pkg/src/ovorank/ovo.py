"""One-versus-one label ranking.

For every pair ``k < l`` a binary classifier is fitted on the points labeled
``k`` or ``l``.  At a query point the ``K(K-1)/2`` duels form a tournament;
each label scores one plus the number of duels it lost, and sorting the
scores (ties broken by the ranker's policy) gives the predicted permutation.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Callable, Mapping
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Union

import numpy as np
import numpy.typing as npt

from .errors import DimensionError, EndpointError, ParameterError, ValidationError
from .learn import (
    BinaryClassifier,
    BinaryView,
    LinearBinaryModel,
    Stump,
    binary_view,
    fit_linear,
    fit_stump_erm,
    model_from_dict,
)
from .perm import (
    Permutation,
    ScoreVector,
    TieBreakPolicy,
    Tournament,
    is_permutation_batch,
    kendall_batch,
    ranks_from_scores_batch,
    scores_batch,
)
from .synth import (
    LabeledDataset,
    PosteriorOracle,
    Seed,
    has_ties,
    rng_from,
    sigma_star_batch,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearLearner:
    steps: int = 500
    step_size: float = 1.0

    def __call__(self, view: BinaryView) -> LinearBinaryModel:
        return fit_linear(view, self.steps, self.step_size)

    def to_spec(self) -> dict:
        return {"linear": {"steps": self.steps, "step_size": self.step_size}}


Learner = Union[str, Mapping, LinearLearner, Callable[[BinaryView], BinaryClassifier]]


def resolve_learner(learner: Learner) -> Callable[[BinaryView], BinaryClassifier]:
    """Accept ``"stump"``, ``"linear"``, ``{"linear": {...}}`` or a callable."""
    if learner == "stump" or (isinstance(learner, Mapping) and set(learner) == {"stump"}):
        return fit_stump_erm
    if learner == "linear":
        return LinearLearner()
    if isinstance(learner, Mapping) and set(learner) == {"linear"}:
        opts = learner["linear"] or {}
        return LinearLearner(int(opts.get("steps", 500)), float(opts.get("step_size", 1.0)))
    if callable(learner):
        return learner
    raise ValidationError(f"unknown learner {learner!r}; use 'stump', 'linear' or {{'linear': {{...}}}}")


class BayesDuel:
    """Bayes rule for the duel ``k < l`` under a known posterior; ties go to ``k``."""

    def __init__(self, oracle: PosteriorOracle, k: int, l: int):
        self.oracle, self.k, self.l = oracle, k, l

    def predict(self, x: npt.ArrayLike) -> npt.NDArray[np.int_]:
        e = np.atleast_2d(self.oracle.eta(np.atleast_1d(np.asarray(x, dtype=np.float64))))
        return np.where(e[:, self.l - 1] > e[:, self.k - 1], 1, -1)


@dataclass(frozen=True)
class LabelRanker:
    k_count: int
    classifiers: Mapping[tuple[int, int], BinaryClassifier]
    tie_break: TieBreakPolicy = field(default_factory=TieBreakPolicy)

    def __post_init__(self) -> None:
        expected = set(combinations(range(1, self.k_count + 1), 2))
        if set(self.classifiers) != expected:
            missing = sorted(expected - set(self.classifiers))
            extra = sorted(set(self.classifiers) - expected)
            raise ValidationError(f"classifier pairs mismatch: missing {missing}, unexpected {extra}")

    def duel(self, k: int, l: int, x: npt.ArrayLike) -> npt.NDArray[np.int_]:
        """``g_{k,l}(x)``; for ``k > l`` this is ``-g_{l,k}(x)``."""
        if k == l:
            raise ParameterError("a label does not duel itself")
        if k < l:
            return self.classifiers[(k, l)].predict(x)
        return -self.classifiers[(l, k)].predict(x)

    def wins(self, xs: npt.ArrayLike) -> npt.NDArray[np.bool_]:
        """``(m, K, K)`` array; ``[i, a, b]`` is True when label ``a + 1`` beats ``b + 1`` at ``xs[i]``."""
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        m = xs.shape[0]
        w = np.zeros((m, self.k_count, self.k_count), dtype=bool)
        for (k, l), clf in self.classifiers.items():
            l_wins = np.asarray(clf.predict(xs)).reshape(m) == 1
            w[:, l - 1, k - 1] = l_wins
            w[:, k - 1, l - 1] = ~l_wins
        return w

    def predict_batch(self, xs: npt.ArrayLike) -> tuple[npt.NDArray[np.int_], npt.NDArray[np.bool_]]:
        """Predicted ranks ``(m, K)`` and cyclic flags ``(m,)``."""
        scores = scores_batch(self.wins(xs))
        return ranks_from_scores_batch(scores, self.tie_break), ~is_permutation_batch(scores)

    def to_dict(self) -> dict:
        rows = []
        for (k, l) in sorted(self.classifiers):
            clf = self.classifiers[(k, l)]
            if not isinstance(clf, (Stump, LinearBinaryModel)):
                raise ValidationError(f"classifier for ({k}, {l}) of type {type(clf).__name__} is not serializable")
            rows.append({"k": k, "l": l, "model": clf.to_dict()})
        return {"k_count": self.k_count, "tie_break": self.tie_break.to_dict(), "classifiers": rows}

    @classmethod
    def from_dict(cls, d: dict) -> LabelRanker:
        try:
            clfs = {(int(r["k"]), int(r["l"])): model_from_dict(r["model"]) for r in d["classifiers"]}
            return cls(int(d["k_count"]), clfs, TieBreakPolicy.from_dict(d.get("tie_break", "lowest-label-first")))
        except KeyError as exc:
            raise ValidationError(f"ranker JSON is missing field {exc.args[0]!r}") from None

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> LabelRanker:
        return cls.from_dict(json.loads(Path(path).read_text()))


def fit_ovo(data: LabeledDataset, learner: Learner = "stump", tie_break: TieBreakPolicy | None = None) -> LabelRanker:
    if data.k_count < 2:
        raise ParameterError(f"need at least 2 labels, got {data.k_count}")
    fit = resolve_learner(learner)
    clfs = {
        (k, l): fit(binary_view(data, k, l))
        for k, l in combinations(range(1, data.k_count + 1), 2)
    }
    return LabelRanker(data.k_count, clfs, tie_break or TieBreakPolicy())


def bayes_ranker(oracle: PosteriorOracle, tie_break: TieBreakPolicy | None = None) -> LabelRanker:
    k = oracle.k_count
    clfs = {(a, b): BayesDuel(oracle, a, b) for a, b in combinations(range(1, k + 1), 2)}
    return LabelRanker(k, clfs, tie_break or TieBreakPolicy())


def tournament_at(r: LabelRanker, x: float) -> Tournament:
    return Tournament(r.wins([x])[0])


def score_labels(r: LabelRanker, x: float) -> ScoreVector:
    return ScoreVector(tuple(int(v) for v in scores_batch(r.wins([x]))[0]))


def predict_permutation(r: LabelRanker, x: float) -> tuple[Permutation, bool]:
    ranks, cyclic = r.predict_batch([x])
    return Permutation(tuple(int(v) for v in ranks[0])), bool(cyclic[0])


@dataclass(frozen=True)
class RankingRiskReport:
    mismatch_rate: float
    mean_kendall: float
    cycle_rate: float
    n_test: int

    def to_dict(self) -> dict:
        return asdict(self)


def draw_tie_free_points(oracle: PosteriorOracle, n: int, rng: np.random.Generator, max_rounds: int = 1000):
    """Uniform points on [0, 1] whose posterior has no tied entries, with their posteriors."""
    x = rng.random(n)
    e = oracle.eta(x) if n else np.zeros((0, oracle.k_count))
    redraws = 0
    for _ in range(max_rounds):
        tied = np.flatnonzero(has_ties(e))
        if tied.size == 0:
            break
        redraws += tied.size
        x[tied] = rng.random(tied.size)
        e[tied] = oracle.eta(x[tied])
    else:
        raise ValidationError(f"could not draw tie-free test points for {oracle} after {max_rounds} rounds")
    if redraws:
        logger.info("redrew %d test points that landed on posterior ties", redraws)
    return x, e


def estimate_ranking_risk(r: LabelRanker, oracle: PosteriorOracle, n_test: int, seed: Seed) -> RankingRiskReport:
    """Monte Carlo estimate of the ranking risks against the exact optimal ranking."""
    if oracle.k_count != r.k_count:
        raise DimensionError(f"oracle has {oracle.k_count} labels, ranker {r.k_count}")
    if n_test < 1:
        raise ParameterError(f"n_test must be positive, got {n_test}")
    x, e = draw_tie_free_points(oracle, n_test, rng_from(seed))
    pred, cyclic = r.predict_batch(x)
    truth = sigma_star_batch(e)
    return RankingRiskReport(
        mismatch_rate=float(np.mean(np.any(pred != truth, axis=1))),
        mean_kendall=float(np.mean(kendall_batch(pred, truth))),
        cycle_rate=float(np.mean(cyclic)),
        n_test=n_test,
    )


def topk_hits(ranks: npt.NDArray[np.int_], y: npt.NDArray[np.int_], k: int) -> npt.NDArray[np.bool_]:
    return ranks[np.arange(y.size), y - 1] <= k


def topk_error(r: LabelRanker, test: LabeledDataset, k: int) -> float:
    """Share of test points whose label is missing from the predicted top ``k``."""
    if not 1 <= k <= r.k_count:
        raise ParameterError(f"k must lie in 1..{r.k_count}, got {k}")
    if test.k_count != r.k_count:
        raise DimensionError(f"test set has {test.k_count} labels, ranker {r.k_count}")
    if len(test) == 0:
        return 0.0
    ranks, _ = r.predict_batch(test.x)
    return float(np.mean(~topk_hits(ranks, test.y, k)))


def _pow(base: float, expo: float) -> float:
    return 1.0 if expo == 0 else base**expo


@dataclass(frozen=True)
class RateBoundParams:
    """Constants of the excess-risk bound.

    ``C`` is the absolute constant of the localized Rademacher bound
    ``psi(r) <= C r sqrt(V log n / n)``; it has no known value, so results
    are only meaningful up to that constant.
    """

    alpha: float
    B: float
    eps: float
    V: float
    C: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ParameterError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.B > 0:
            raise ParameterError(f"B must be positive, got {self.B}")
        if not 0.0 < self.eps <= 1.0:
            raise ParameterError(f"eps must lie in (0, 1], got {self.eps}")
        if not self.V >= 1:
            raise ParameterError(f"V must be at least 1, got {self.V}")
        if not self.C > 0:
            raise ParameterError(f"C must be positive, got {self.C}")

    @property
    def h(self) -> float:
        a = self.alpha
        return self.eps ** (3 - 2 * a) * _pow(1 - a, 1 - a) * _pow(a, a) / self.B ** (1 - a)

    @property
    def beta(self) -> float:
        a = self.alpha
        return self.B ** (1 - a) / (_pow(1 - a, 1 - a) * _pow(a, a))

    def _require_interior(self) -> None:
        if self.alpha in (0.0, 1.0):
            raise EndpointError(
                f"alpha = {self.alpha} is an endpoint; the bound is only defined for 0 < alpha < 1 "
                "(see the README for the limiting conventions)"
            )


def rate_bound(params: RateBoundParams, n: int, delta: float) -> float:
    """``2 (1/(n h))^(1/(2-a)) [(64 C^2 V log n)^(1/(2-a)) + (32 log(2/delta))^(1/(2-a))]``."""
    params._require_interior()
    if n < 2:
        raise ParameterError(f"n must be at least 2, got {n}")
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    p = 1.0 / (2.0 - params.alpha)
    first = (64.0 * params.C**2 * params.V * math.log(n)) ** p
    second = (32.0 * math.log(2.0 / delta)) ** p
    return 2.0 * (1.0 / (n * params.h)) ** p * (first + second)


def n0_upper_bound(params: RateBoundParams, delta: float) -> int:
    """Sample size beyond which :func:`rate_bound` applies (upper bound, rounded up).

    The second term uses the binary noise constant ``beta / eps``.
    """
    params._require_interior()
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    a = params.alpha
    log_term = math.log(2.0 / delta)
    first = (2.0 / delta) ** (1.0 / (2.0 * params.C**2 * params.V))
    beta_bin = params.beta / params.eps
    second = log_term * ((16.0 / 3.0) ** (2.0 - a) / (32.0 * beta_bin * params.eps**a)) ** (1.0 / (1.0 - a))
    return max(1, math.ceil(max(first, second)))
