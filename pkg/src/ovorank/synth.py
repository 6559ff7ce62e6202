"""Synthetic posteriors on [0, 1], Bayes oracles, and permutation samplers.

The posterior model has ``K = 2 ** (depth + 1)`` labels.  Label ``k`` is read as
the ``depth + 1``-bit number ``k - 1``, most significant bit first; bit ``d``
selects either the warped noise profile ``h_{alpha, x0}`` or its complement at
level ``d``.  Because the two choices sum to one at every level, the products
sum to one over labels.

Split points come in two flavours:

* dyadic (default, ``splits=None``): the split at level ``d`` is the midpoint
  of the dyadic interval named by the first ``d`` bits, so label ``k``
  dominates ``[(k - 1) / K, k / K]``;
* per level (``splits=[s_0, ..., s_D]``): every label uses ``s_d`` at level
  ``d``.  With all splits equal, labels with the same number of one-bits share
  the same posterior, so this mode is only useful for closed-form checks.

Random draws use numpy's PCG64 bit generator (``numpy.random.default_rng``).
Every sampler takes ``seed`` as an int, a sequence of ints, or an existing
``numpy.random.Generator``.
"""

from __future__ import annotations

import csv
import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
import numpy.typing as npt

from .errors import DegeneracyError, ParameterError, ValidationError
from .perm import Permutation

logger = logging.getLogger(__name__)

Seed = Union[int, Sequence[int], np.random.Generator, None]


def rng_from(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def h_alpha(alpha: float, x: npt.ArrayLike) -> npt.NDArray[np.float64] | float:
    """Noise profile ``1/2 + 1/2 * sign(2x - 1) * |2x - 1| ** ((1 - alpha) / alpha)``.

    ``sign`` is -1 at ``x = 1/2``; at ``alpha = 1`` the power is taken as 1
    everywhere, giving a hard step.
    """
    if not 0.0 < alpha <= 1.0:
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha}")
    x = np.asarray(x, dtype=np.float64)
    expo = (1.0 - alpha) / alpha
    sign = np.where(2.0 * x > 1.0, 1.0, -1.0)
    out = 0.5 + 0.5 * sign * np.abs(2.0 * x - 1.0) ** expo
    return out if out.ndim else float(out)


def h_alpha_warped(alpha: float, x0: npt.ArrayLike, x: npt.ArrayLike) -> npt.NDArray[np.float64] | float:
    """``h_alpha`` with its midpoint moved from 1/2 to ``x0``."""
    x0 = np.asarray(x0, dtype=np.float64)
    if np.any((x0 <= 0.0) | (x0 >= 1.0)):
        raise ParameterError(f"split point must lie in (0, 1), got {x0}")
    x = np.asarray(x, dtype=np.float64)
    u = np.where(x < x0, x / (2.0 * x0), 0.5 + (x - x0) / (2.0 * (1.0 - x0)))
    return h_alpha(alpha, u)


@dataclass(frozen=True)
class PosteriorOracle:
    depth: int
    alpha: float
    splits: tuple[float, ...] | None = None
    _bits: npt.NDArray[np.bool_] = field(init=False, repr=False, compare=False)
    _split_table: npt.NDArray[np.float64] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if int(self.depth) != self.depth or self.depth < 0:
            raise ParameterError(f"depth must be a nonnegative integer, got {self.depth}")
        if not 0.0 < self.alpha <= 1.0:
            raise ParameterError(f"alpha must lie in (0, 1], got {self.alpha}")
        depth = int(self.depth)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "alpha", float(self.alpha))
        levels = depth + 1
        k = 2**levels
        labels = np.arange(k)[:, None]
        shifts = np.arange(depth, -1, -1)[None, :]
        bits = ((labels >> shifts) & 1).astype(bool)
        if self.splits is None:
            # prefix value of the first d bits, then the midpoint of its dyadic cell
            prefix = labels >> (shifts + 1)
            table = (2 * prefix + 1) / 2.0 ** np.arange(1, levels + 1)[None, :]
        else:
            splits = tuple(float(s) for s in self.splits)
            if len(splits) != levels:
                raise ParameterError(f"need {levels} split points for depth {depth}, got {len(splits)}")
            if any(not 0.0 < s < 1.0 for s in splits):
                raise ParameterError(f"split points must lie in (0, 1), got {splits}")
            object.__setattr__(self, "splits", splits)
            table = np.broadcast_to(np.asarray(splits), (k, levels)).copy()
        bits.setflags(write=False)
        table.setflags(write=False)
        object.__setattr__(self, "_bits", bits)
        object.__setattr__(self, "_split_table", table)

    @property
    def k_count(self) -> int:
        return 2 ** (self.depth + 1)

    def eta(self, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Posterior vector at ``x``: shape ``(K,)`` for a scalar, ``(m, K)`` for an array."""
        xa = np.asarray(x, dtype=np.float64)
        if np.any((xa < 0.0) | (xa > 1.0)):
            raise ParameterError("x must lie in [0, 1]")
        flat = xa.reshape(-1)
        hv = h_alpha_warped(self.alpha, self._split_table[None, :, :], flat[:, None, None])
        out = np.where(self._bits[None, :, :], hv, 1.0 - hv).prod(axis=2)
        return out[0] if xa.ndim == 0 else out.reshape(xa.shape + (self.k_count,))

    def to_dict(self) -> dict:
        return {"depth": self.depth, "alpha": self.alpha, "splits": None if self.splits is None else list(self.splits)}

    @classmethod
    def from_dict(cls, d: dict) -> PosteriorOracle:
        try:
            return cls(int(d["depth"]), float(d["alpha"]), None if d.get("splits") is None else tuple(d["splits"]))
        except KeyError as exc:
            raise ValidationError(f"oracle JSON is missing field {exc.args[0]!r}") from None

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> PosteriorOracle:
        return cls.from_dict(json.loads(Path(path).read_text()))


def eta(oracle: PosteriorOracle, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return oracle.eta(x)


def has_ties(eta_mat: npt.NDArray[np.float64]) -> npt.NDArray[np.bool_]:
    """True for rows of an ``(m, K)`` posterior array that contain equal entries."""
    s = np.sort(eta_mat, axis=-1)
    return np.any(np.diff(s, axis=-1) == 0.0, axis=-1)


def sigma_star_batch(eta_mat: npt.NDArray[np.float64]) -> npt.NDArray[np.int_]:
    """Ranks by decreasing posterior for every row; ties resolve to the lower label."""
    order = np.argsort(-eta_mat, axis=-1, kind="stable")
    ranks = np.empty_like(order)
    k = eta_mat.shape[-1]
    np.put_along_axis(ranks, order, np.broadcast_to(np.arange(1, k + 1), order.shape).copy(), axis=-1)
    return ranks


def sigma_star(eta_vec: npt.ArrayLike) -> Permutation:
    e = np.asarray(eta_vec, dtype=np.float64)
    if has_ties(e[None, :])[0]:
        raise DegeneracyError(f"posterior has tied entries: {e.tolist()}")
    return Permutation(tuple(int(r) for r in sigma_star_batch(e[None, :])[0]))


def bayes_binary(eta_vec: npt.ArrayLike, k: int, l: int) -> int:
    """Bayes duel between labels ``k < l``: +1 when ``l`` is likelier, -1 when ``k`` is."""
    e = np.asarray(eta_vec, dtype=np.float64)
    if not 1 <= k < l <= e.shape[0]:
        raise ParameterError(f"need 1 <= k < l <= {e.shape[0]}, got ({k}, {l})")
    ek, el = e[k - 1], e[l - 1]
    if ek + el <= 0.0:
        raise ParameterError(f"labels {k} and {l} both have zero posterior")
    if ek == el:
        raise DegeneracyError(f"labels {k} and {l} are tied at {ek}")
    return 1 if el > ek else -1


@dataclass(frozen=True)
class LabeledDataset:
    """I.i.d. sample of ``(x, y)`` with 1-based labels ``y`` in ``1..k_count``."""

    x: npt.NDArray[np.float64]
    y: npt.NDArray[np.int64]
    k_count: int

    def __post_init__(self) -> None:
        x = np.array(self.x, dtype=np.float64).reshape(-1)
        y = np.array(self.y, dtype=np.int64).reshape(-1)
        if x.shape != y.shape:
            raise ValidationError(f"{x.size} inputs but {y.size} labels")
        if self.k_count < 1:
            raise ValidationError(f"k_count must be positive, got {self.k_count}")
        bad = np.flatnonzero((y < 1) | (y > self.k_count))
        if bad.size:
            raise ValidationError(f"label {y[bad[0]]} at row {bad[0]} is outside 1..{self.k_count}")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return int(self.x.size)

    @property
    def counts(self) -> npt.NDArray[np.int64]:
        """``n_k`` for ``k = 1..K``."""
        return np.bincount(self.y, minlength=self.k_count + 1)[1:]

    @property
    def proportions(self) -> npt.NDArray[np.float64]:
        n = len(self)
        return self.counts / n if n else np.zeros(self.k_count)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y"])
            for xi, yi in zip(self.x.tolist(), self.y.tolist()):
                w.writerow([repr(xi), yi])

    @classmethod
    def from_csv(cls, path: str | Path, k_count: int | None = None) -> LabeledDataset:
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            header = next(r, None)
            if header != ["x", "y"]:
                raise ValidationError(f"expected CSV header x,y, got {header}")
            xs: list[float] = []
            ys: list[int] = []
            for lineno, row in enumerate(r, start=2):
                try:
                    xs.append(float(row[0]))
                    ys.append(int(row[1]))
                except (ValueError, IndexError):
                    raise ValidationError(f"malformed row {lineno}: {row}") from None
        if k_count is None:
            k_count = max(ys, default=1)
        return cls(np.asarray(xs), np.asarray(ys, dtype=np.int64), k_count)


def sample_dataset(oracle: PosteriorOracle, n: int, seed: Seed) -> LabeledDataset:
    """Draw ``X ~ U[0, 1]`` and ``Y ~ Categorical(eta(X))``."""
    if n < 0:
        raise ParameterError(f"n must be nonnegative, got {n}")
    rng = rng_from(seed)
    x = rng.random(n)
    u = rng.random(n)
    cum = np.cumsum(oracle.eta(x), axis=1) if n else np.zeros((0, oracle.k_count))
    y = (u[:, None] >= cum).sum(axis=1) + 1
    # float round-off in the cumulative sum can leave u above the last entry
    y = np.minimum(y, oracle.k_count)
    return LabeledDataset(x, y, oracle.k_count)


def _pl_order(weights: npt.NDArray[np.float64], rng: np.random.Generator) -> list[int]:
    """Sequential Plackett-Luce draw; returns 0-based items best first.

    Zero-weight items are placed after every positive one, in uniform random
    order (the limit of vanishing, equal weights).
    """
    w = weights.tolist()
    remaining = [i for i, wi in enumerate(w) if wi > 0.0]
    zeros = [i for i, wi in enumerate(w) if wi == 0.0]
    order: list[int] = []
    draws = rng.random(max(len(remaining) - 1, 0)).tolist()
    total = sum(w[i] for i in remaining)
    for u in draws:
        target = u * total
        acc = 0.0
        pick = len(remaining) - 1
        for pos, i in enumerate(remaining):
            acc += w[i]
            if target < acc:
                pick = pos
                break
        item = remaining.pop(pick)
        total -= w[item]
        order.append(item)
    order.extend(remaining)
    if zeros:
        order.extend(zeros[i] for i in rng.permutation(len(zeros)))
    return order


def _ranks_from_order(order: Sequence[int]) -> Permutation:
    ranks = [0] * len(order)
    for r, item in enumerate(order, start=1):
        ranks[item] = r
    return Permutation(tuple(ranks))


def plackett_luce_sample(weights: npt.ArrayLike, seed: Seed) -> Permutation:
    """Draw ``Sigma`` from the Plackett-Luce model with positive ``weights``.

    The top label is drawn with probability ``w_k / sum(w)``, the next from
    the remaining labels with renormalized weights, and so on.
    """
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.size < 1:
        raise ParameterError("need at least one weight")
    if np.any(~np.isfinite(w)) or np.any(w <= 0.0):
        raise ParameterError(f"weights must be positive and finite, got {w.tolist()}")
    return _ranks_from_order(_pl_order(w, rng_from(seed)))


def couple_sigma(y: int, eta_vec: npt.ArrayLike, seed: Seed) -> Permutation:
    """Permutation with ``y`` on top and the rest ordered by Plackett-Luce on ``eta``.

    If ``y`` is itself drawn from ``eta``, the result is a Plackett-Luce draw
    with weights ``eta``.
    """
    e = np.asarray(eta_vec, dtype=np.float64).reshape(-1)
    if not 1 <= y <= e.size:
        raise ParameterError(f"label {y} is outside 1..{e.size}")
    if e[y - 1] <= 0.0:
        raise ParameterError(f"label {y} has zero posterior and cannot be observed")
    if np.any(e < 0.0):
        raise ParameterError("posterior entries must be nonnegative")
    rest = np.delete(np.arange(e.size), y - 1)
    tail = _pl_order(e[rest], rng_from(seed))
    return _ranks_from_order([y - 1] + [int(rest[i]) for i in tail])


@dataclass(frozen=True)
class NoiseDiagnostics:
    h_margin: float
    eps_min: float


def noise_diagnostics(oracle: PosteriorOracle, grid_size: int) -> NoiseDiagnostics:
    """Grid minima of the pairwise margin ``|p_kl - 1/2|`` and of ``eta_k + eta_l``.

    Pairs with ``eta_k + eta_l = 0`` carry no mass at that point and are left
    out of the margin.
    """
    if grid_size < 2:
        raise ParameterError(f"grid_size must be at least 2, got {grid_size}")
    e = oracle.eta(np.linspace(0.0, 1.0, grid_size))
    i, j = np.triu_indices(oracle.k_count, k=1)
    tot = e[:, i] + e[:, j]
    live = tot > 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        margin = np.abs(e[:, i] / tot - 0.5)
    h = float(margin[live].min()) if live.any() else 0.0
    return NoiseDiagnostics(h_margin=h, eps_min=float(max(tot.min(), 0.0)))
