"""Permutations of labels, distances between them, tournaments and Copeland scoring.

A permutation is stored as *ranks of labels*: ``ranks[k - 1]`` is the rank of
label ``k`` and rank 1 is the top.  Labels and ranks are both 1-based, as in the
JSON serialization.  The array helpers suffixed ``_batch`` work on 0-based numpy
arrays of shape ``(m, K)`` and are what the vectorized estimators use.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from .errors import DimensionError, ValidationError

Metric = Literal["kendall", "footrule", "spearman_rho", "hamming", "zero_one"]
METRICS: tuple[str, ...] = ("kendall", "footrule", "spearman_rho", "hamming", "zero_one")


@dataclass(frozen=True)
class Permutation:
    """Rank assignment over ``K`` labels."""

    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        ranks = tuple(int(r) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        k = len(ranks)
        if k < 1:
            raise ValidationError("a permutation needs at least one label")
        seen: dict[int, int] = {}
        for i, r in enumerate(ranks):
            if not 1 <= r <= k:
                raise ValidationError(f"rank {r} at index {i} is outside 1..{k}")
            if r in seen:
                raise ValidationError(f"duplicate rank {r} at index {i} (already at index {seen[r]})")
            seen[r] = i

    @property
    def k_count(self) -> int:
        return len(self.ranks)

    def rank_of(self, label: int) -> int:
        return self.ranks[label - 1]

    def label_at(self, rank: int) -> int:
        return self.ranks.index(rank) + 1

    def top(self, k: int) -> tuple[int, ...]:
        """Labels occupying ranks ``1..k``, best first."""
        inv = invert(self).ranks
        return inv[:k]

    def to_json(self) -> str:
        return json.dumps(list(self.ranks))

    @classmethod
    def from_json(cls, text: str) -> Permutation:
        return make_permutation(json.loads(text))

    @classmethod
    def identity(cls, k: int) -> Permutation:
        return cls(tuple(range(1, k + 1)))


def make_permutation(ranks: Sequence[int] | npt.ArrayLike) -> Permutation:
    return Permutation(tuple(int(r) for r in np.asarray(ranks).ravel()))


def invert(p: Permutation) -> Permutation:
    """Return ``q`` with ``q[p(k)] = k``: the label sitting at each rank."""
    out = [0] * p.k_count
    for label, rank in enumerate(p.ranks, start=1):
        out[rank - 1] = label
    return Permutation(tuple(out))


def permutation_distance(metric: Metric | str, a: Permutation, b: Permutation) -> int:
    if a.k_count != b.k_count:
        raise DimensionError(f"permutations over {a.k_count} and {b.k_count} labels")
    ra, rb = a.ranks, b.ranks
    k = len(ra)
    if metric == "kendall":
        return sum(
            1
            for i in range(k)
            for j in range(i + 1, k)
            if (ra[i] - ra[j]) * (rb[i] - rb[j]) < 0
        )
    if metric == "footrule":
        return sum(abs(x - y) for x, y in zip(ra, rb))
    if metric == "spearman_rho":
        return sum((x - y) ** 2 for x, y in zip(ra, rb))
    if metric == "hamming":
        return sum(x != y for x, y in zip(ra, rb))
    if metric == "zero_one":
        return int(ra != rb)
    raise ValidationError(f"unknown metric {metric!r}; expected one of {METRICS}")


def kendall_tau(a: Permutation, b: Permutation) -> int:
    return permutation_distance("kendall", a, b)


def kendall_batch(a: npt.NDArray[np.int_], b: npt.NDArray[np.int_]) -> npt.NDArray[np.int_]:
    """Row-wise Kendall distance between two ``(m, K)`` rank arrays."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"rank arrays of shapes {a.shape} and {b.shape}")
    i, j = np.triu_indices(a.shape[-1], k=1)
    return ((a[..., i] - a[..., j]) * (b[..., i] - b[..., j]) < 0).sum(axis=-1)


@dataclass(frozen=True)
class Tournament:
    """Complete oriented graph over ``K`` labels.

    ``wins[i, j]`` is True when label ``i + 1`` beats label ``j + 1``.
    """

    wins: npt.NDArray[np.bool_]

    def __post_init__(self) -> None:
        w = np.array(self.wins, dtype=bool)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 2:
            raise ValidationError(f"tournament matrix must be square with K >= 2, got shape {w.shape}")
        if w.diagonal().any():
            raise ValidationError("a label cannot beat itself")
        off = ~np.eye(w.shape[0], dtype=bool)
        if not np.all((w ^ w.T)[off]):
            i, j = np.argwhere(~(w ^ w.T) & off)[0]
            raise ValidationError(f"duel between labels {i + 1} and {j + 1} must have exactly one winner")
        w.setflags(write=False)
        object.__setattr__(self, "wins", w)

    @property
    def k_count(self) -> int:
        return self.wins.shape[0]

    def beats(self, winner: int, loser: int) -> bool:
        return bool(self.wins[winner - 1, loser - 1])

    @classmethod
    def from_pairs(cls, k: int, winners: dict[tuple[int, int], int]) -> Tournament:
        """Build from ``{(k, l): winner}`` for every unordered pair ``k < l``."""
        w = np.zeros((k, k), dtype=bool)
        for (a, b), win in winners.items():
            lo, hi = min(a, b), max(a, b)
            if win not in (lo, hi):
                raise ValidationError(f"winner {win} is not part of duel ({lo}, {hi})")
            other = hi if win == lo else lo
            w[win - 1, other - 1] = True
        return cls(w)


@dataclass(frozen=True)
class ScoreVector:
    """``scores[k - 1]`` is one plus the number of duels label ``k`` lost."""

    scores: tuple[int, ...]

    def __post_init__(self) -> None:
        s = tuple(int(v) for v in self.scores)
        object.__setattr__(self, "scores", s)
        k = len(s)
        for i, v in enumerate(s):
            if not 1 <= v <= k:
                raise ValidationError(f"score {v} of label {i + 1} is outside 1..{k}")
        if sum(v - 1 for v in s) != k * (k - 1) // 2:
            raise ValidationError(f"losses sum to {sum(v - 1 for v in s)}, expected {k * (k - 1) // 2}")

    @property
    def k_count(self) -> int:
        return len(self.scores)

    def is_permutation(self) -> bool:
        return sorted(self.scores) == list(range(1, len(self.scores) + 1))


@dataclass(frozen=True)
class TieBreakPolicy:
    """How equal scores are ordered.

    ``lowest-label-first`` puts the smaller label ahead.  ``seeded-random`` draws
    one random priority per label from ``seed`` and orders ties by it, so a
    given seed always resolves a given tie the same way.
    """

    mode: Literal["lowest-label-first", "seeded-random"] = "lowest-label-first"
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("lowest-label-first", "seeded-random"):
            raise ValidationError(f"unknown tie-break mode {self.mode!r}")
        if self.mode == "seeded-random" and self.seed is None:
            raise ValidationError("seeded-random tie-break needs a seed")

    def priorities(self, k: int) -> npt.NDArray[np.float64]:
        """Secondary sort key per label (smaller goes first)."""
        if self.mode == "lowest-label-first":
            return np.arange(k, dtype=np.float64)
        return np.random.default_rng(self.seed).random(k)

    def to_dict(self) -> dict:
        if self.mode == "seeded-random":
            return {"mode": self.mode, "seed": self.seed}
        return {"mode": self.mode}

    @classmethod
    def from_dict(cls, d: dict | str) -> TieBreakPolicy:
        if isinstance(d, str):
            return cls(d)
        return cls(d["mode"], d.get("seed"))


def copeland_ranks(t: Tournament) -> ScoreVector:
    return ScoreVector(tuple(int(v) for v in 1 + t.wins.sum(axis=0)))


def copeland_score(t: Tournament) -> npt.NDArray[np.int_]:
    """Wins minus losses for each label."""
    return t.wins.sum(axis=1) - t.wins.sum(axis=0)


def is_acyclic(t: Tournament) -> bool:
    # Transitive iff loss counts are all distinct.
    losses = np.sort(t.wins.sum(axis=0))
    return bool(np.array_equal(losses, np.arange(t.k_count)))


def ranks_from_scores(
    s: ScoreVector | Sequence[int],
    tb: TieBreakPolicy | None = None,
) -> Permutation:
    if not isinstance(s, ScoreVector):
        s = ScoreVector(tuple(s))
    tb = tb or TieBreakPolicy()
    ranks = ranks_from_scores_batch(np.asarray(s.scores)[None, :], tb)[0]
    return Permutation(tuple(int(r) for r in ranks))


def scores_batch(wins: npt.NDArray[np.bool_]) -> npt.NDArray[np.int_]:
    """Scores for a stack of win matrices of shape ``(m, K, K)``."""
    return 1 + wins.sum(axis=-2)


def ranks_from_scores_batch(scores: npt.NDArray[np.int_], tb: TieBreakPolicy) -> npt.NDArray[np.int_]:
    """Order labels by ascending score, ties by the policy; returns ``(m, K)`` ranks."""
    scores = np.asarray(scores)
    k = scores.shape[-1]
    prio = tb.priorities(k)
    # lexsort: last key is primary.
    order = np.lexsort((np.broadcast_to(prio, scores.shape), scores), axis=-1)
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order, np.arange(1, k + 1)[None, :].repeat(scores.shape[0], 0), axis=-1)
    return ranks


def is_permutation_batch(ranks_or_scores: npt.NDArray[np.int_]) -> npt.NDArray[np.bool_]:
    k = ranks_or_scores.shape[-1]
    return np.all(np.sort(ranks_or_scores, axis=-1) == np.arange(1, k + 1), axis=-1)
