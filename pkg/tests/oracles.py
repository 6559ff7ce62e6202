import itertools

import numpy as np

from ovorank.ovo import LabelRanker
from ovorank.perm import TieBreakPolicy, Tournament


def all_tournaments(k):
    """Every orientation of the K(K-1)/2 duels."""
    pairs = list(itertools.combinations(range(k), 2))
    for mask in range(2 ** len(pairs)):
        w = np.zeros((k, k), dtype=bool)
        for bit, (a, b) in enumerate(pairs):
            if mask >> bit & 1:
                w[a, b] = True
            else:
                w[b, a] = True
        yield Tournament(w)


def random_tournament(k, rng):
    w = np.zeros((k, k), dtype=bool)
    for a, b in itertools.combinations(range(k), 2):
        if rng.random() < 0.5:
            w[a, b] = True
        else:
            w[b, a] = True
    return Tournament(w)


def brute_transitive(t):
    k = t.k_count
    return all(
        not (t.wins[a, b] and t.wins[b, c]) or t.wins[a, c]
        for a in range(k) for b in range(k) for c in range(k)
        if len({a, b, c}) == 3
    )


def tree_eta(alpha, depth, x, h):
    """Posterior by explicit recursion over the dyadic tree.

    Each node owns an interval [lo, hi]; its split is the interval midpoint.
    The right child receives mass h(split, x), the left the complement.
    """
    out = []

    def walk(level, lo, hi, mass):
        if level > depth:
            out.append(mass)
            return
        mid = (lo + hi) / 2
        hv = h(alpha, mid, x)
        walk(level + 1, lo, mid, mass * (1 - hv))
        walk(level + 1, mid, hi, mass * hv)

    walk(0, 0.0, 1.0, 1.0)
    return out


def binomial_se(p, n):
    return (p * (1 - p) / n) ** 0.5


def brute_stump_errors(x, y):
    """Error counts of every achievable stump labeling, by direct evaluation.

    Thresholds at the data values plus both infinities cover every interval
    of equivalent thresholds for both polarities.
    """
    cands = [-np.inf] + sorted(set(np.asarray(x).tolist())) + [np.inf]
    out = []
    for s in cands:
        for eps in (1, -1):
            pred = np.where((np.asarray(x) - s) * eps >= 0, 1, -1)
            out.append(int(np.count_nonzero(pred != np.asarray(y))))
    return out


def brute_stump_choice(x, y):
    """Minimizer over -inf, midpoints, +inf in (threshold, +1 first) order."""
    xs = sorted(set(np.asarray(x).tolist()))
    cands = [-np.inf] + [(a + b) / 2 for a, b in zip(xs, xs[1:])] + [np.inf]
    best = None
    for s in cands:
        for eps in (1, -1):
            err = int(np.count_nonzero(np.where((np.asarray(x) - s) * eps >= 0, 1, -1) != np.asarray(y)))
            if best is None or err < best[0]:
                best = (err, s, eps)
    return best


class Const:
    def __init__(self, sign):
        self.sign = sign

    def predict(self, x):
        return np.full(np.atleast_1d(x).shape, self.sign)


class Negated:
    def __init__(self, clf):
        self.clf = clf

    def predict(self, x):
        return -self.clf.predict(x)


def ranker_from_tournament(t, tie_break=None):
    """Constant duels reproducing a given tournament everywhere."""
    k = t.k_count
    clfs = {(a, b): Const(1 if t.beats(b, a) else -1) for a, b in itertools.combinations(range(1, k + 1), 2)}
    return LabelRanker(k, clfs, tie_break or TieBreakPolicy())


# reference values from a 50-digit mpmath evaluation of the closed forms
RATE_CASES = [
    ((0.5, 1.0, 1.0, 2, 1.0), 10**4, 0.1, 0.9065897092751711499668739, 3),
    ((0.2, 2.0, 0.5, 2, 0.5), 1000, 0.05, 7.21298239936718071185766, 40),
    ((0.8, 0.5, 0.9, 3, 2.0), 10**5, 0.01, 0.4200216532913790280785558, 2),
    ((0.35, 1.5, 0.25, 2, 0.1), 500, 0.2, 9.467493913729953112164743, 9999999999999922212637533),
    ((0.65, 3.0, 0.7, 5, 1.3), 10**6, 0.5, 0.1829994908551039289773365, 2),
]
