"""Binary classifiers for the pairwise duels and their empirical risk.

All classifiers return labels in {-1, +1} and map a score of exactly zero to
+1.  A duel between labels ``k < l`` encodes ``l`` as +1 and ``k`` as -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol, Union

import numpy as np
import numpy.typing as npt
from scipy.special import expit

from .errors import ParameterError, ValidationError
from .synth import LabeledDataset, Seed


class BinaryClassifier(Protocol):
    def predict(self, x: npt.ArrayLike) -> npt.NDArray[np.int_]: ...


@dataclass(frozen=True)
class BinaryView:
    """Points of a dataset whose label is ``k`` or ``l``, relabeled -1 / +1."""

    x: npt.NDArray[np.float64]
    y: npt.NDArray[np.int_]
    pair: tuple[int, int]
    n_k: int
    n_l: int

    def __len__(self) -> int:
        return int(self.y.size)


def binary_view(data: LabeledDataset, k: int, l: int) -> BinaryView:
    if not 1 <= k < l <= data.k_count:
        raise ParameterError(f"need 1 <= k < l <= {data.k_count}, got ({k}, {l})")
    mask = (data.y == k) | (data.y == l)
    y = np.where(data.y[mask] == l, 1, -1)
    n_l = int(np.count_nonzero(y == 1))
    return BinaryView(x=data.x[mask], y=y, pair=(k, l), n_k=int(y.size) - n_l, n_l=n_l)


@dataclass(frozen=True)
class Stump:
    """``x -> 2 * 1{(x - threshold) * polarity >= 0} - 1``."""

    threshold: float
    polarity: int = 1

    def __post_init__(self) -> None:
        if self.polarity not in (-1, 1):
            raise ParameterError(f"polarity must be -1 or +1, got {self.polarity}")
        if math.isnan(self.threshold):
            raise ParameterError("threshold is NaN")

    def predict(self, x: npt.ArrayLike) -> npt.NDArray[np.int_]:
        x = np.asarray(x, dtype=np.float64)
        return np.where((x - self.threshold) * self.polarity >= 0.0, 1, -1)

    def to_dict(self) -> dict:
        return {"stump": {"s": self.threshold, "eps": self.polarity}}


@dataclass(frozen=True)
class LinearBinaryModel:
    """``x -> sign(<weight, x> + bias)`` with ``sign(0) = +1``."""

    weight: tuple[float, ...]
    bias: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", tuple(float(w) for w in self.weight))
        if not all(math.isfinite(w) for w in self.weight) or not math.isfinite(self.bias):
            raise ParameterError("linear model parameters must be finite")

    def decision(self, x: npt.ArrayLike) -> npt.NDArray[np.float64]:
        return _design(x, len(self.weight)) @ np.asarray(self.weight) + self.bias

    def predict(self, x: npt.ArrayLike) -> npt.NDArray[np.int_]:
        return np.where(self.decision(x) >= 0.0, 1, -1)

    def to_dict(self) -> dict:
        return {"linear": {"w": list(self.weight), "b": self.bias}}


Model = Union[Stump, LinearBinaryModel]


def model_from_dict(d: dict) -> Model:
    if "stump" in d:
        return Stump(float(d["stump"]["s"]), int(d["stump"]["eps"]))
    if "linear" in d:
        return LinearBinaryModel(tuple(d["linear"]["w"]), float(d["linear"]["b"]))
    raise ValidationError(f"unknown model encoding with keys {sorted(d)}")


def _design(x: npt.ArrayLike, dim: int | None = None) -> npt.NDArray[np.float64]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim <= 1:
        x = x.reshape(-1, 1)
    if dim is not None and x.shape[1] != dim:
        raise ValidationError(f"expected {dim} features, got {x.shape[1]}")
    return x


def empirical_binary_risk(classifier: BinaryClassifier, view: BinaryView) -> float:
    """Misclassification rate on the view; an empty view has risk 0."""
    n = len(view)
    if n == 0:
        return 0.0
    return float(np.count_nonzero(classifier.predict(view.x) != view.y)) / n


def _between(lo: float, hi: float, polarity: int) -> float:
    """Threshold separating ``lo < hi`` for the given polarity.

    The midpoint normally works.  For adjacent floats it rounds onto an
    endpoint, so fall back to the endpoint that still splits correctly.
    """
    mid = lo / 2.0 + hi / 2.0
    if polarity == 1:
        return mid if lo < mid <= hi else hi
    return mid if lo <= mid < hi else lo


def stump_error_table(x: npt.NDArray[np.float64], y: npt.NDArray[np.int_]):
    """Error counts of every distinct stump on sorted data.

    Returns ``(xs, cut, errors)``: ``xs`` is the sorted input, ``cut`` the
    split positions (0 and ``n`` are the constant sentinels) and ``errors``
    an ``(len(cut), 2)`` integer array for polarity +1 (column 0) and -1.
    """
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    n = xs.size
    pos = np.concatenate(([0], np.cumsum(ys == 1)))
    neg = np.arange(n + 1) - pos
    cut = np.concatenate(([0], np.flatnonzero(xs[1:] > xs[:-1]) + 1, [n])) if n else np.array([0])
    pos_c, neg_c = pos[cut], neg[cut]
    # +1: left predicted -1, right +1.  -1: left +1, right -1.
    err_plus = pos_c + (neg[-1] - neg_c)
    err_minus = neg_c + (pos[-1] - pos_c)
    return xs, cut, np.stack([err_plus, err_minus], axis=1)


def fit_stump_erm(view: BinaryView) -> Stump:
    """Exact empirical risk minimizer over all stumps.

    Candidate thresholds are ``-inf``, the midpoints between consecutive
    distinct inputs and ``+inf``.  Among minimizers the smallest threshold
    wins, then polarity +1.
    """
    x = np.asarray(view.x, dtype=np.float64).reshape(-1)
    if x.size == 0:
        return Stump(-math.inf, 1)
    if not np.all(np.isfinite(x)):
        raise ValidationError("stump inputs must be finite")
    xs, cut, err = stump_error_table(x, np.asarray(view.y))
    # row-major argmin: first minimal cut, polarity +1 before -1
    flat = int(np.argmin(err.reshape(-1)))
    c, col = divmod(flat, 2)
    polarity = 1 if col == 0 else -1
    i = int(cut[c])
    if i == 0:
        s = -math.inf
    elif i == xs.size:
        s = math.inf
    else:
        s = _between(float(xs[i - 1]), float(xs[i]), polarity)
    return Stump(s, polarity)


def fit_linear(view: BinaryView, steps: int = 500, step_size: float = 1.0, seed: Seed = None) -> LinearBinaryModel:
    """Full-batch gradient descent on the mean logistic loss from zero.

    ``seed`` is accepted for interface symmetry; full-batch descent draws no
    random numbers.
    """
    if steps < 0:
        raise ParameterError(f"steps must be nonnegative, got {steps}")
    if not step_size > 0:
        raise ParameterError(f"step_size must be positive, got {step_size}")
    X = _design(view.x)
    if not np.all(np.isfinite(X)):
        raise ValidationError("features must be finite")
    y = np.asarray(view.y, dtype=np.float64)
    w = np.zeros(X.shape[1])
    b = 0.0
    n = y.size
    if n == 0:
        return LinearBinaryModel(tuple(w), b)
    for _ in range(steps):
        margin = y * (X @ w + b)
        g = -y * expit(-margin)
        w = w - step_size * (X.T @ g) / n
        b = b - step_size * float(g.mean())
    return LinearBinaryModel(tuple(w), b)


def logistic_loss(model: LinearBinaryModel, view: BinaryView) -> float:
    if len(view) == 0:
        return 0.0
    z = model.decision(view.x)
    return float(np.mean(np.logaddexp(0.0, -np.asarray(view.y) * z)))
