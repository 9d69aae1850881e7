"""Shift-invariant measures that can be evaluated on cylinders and sparse patterns."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import WordTooLong
from .symbolic import CylinderSet, SubshiftSpec, as_word, transfer_graph


class MeasureModel:
    """Base class. Subclasses implement :meth:`pattern_prob`."""

    kind = "abstract"
    k: int

    def pattern_prob(self, pattern: dict) -> float:
        """Measure of ``{x : x[p] = a for (p, a) in pattern}``."""
        raise NotImplementedError

    def word_prob(self, word, anchor: int = 0) -> float:
        w = as_word(word)
        return self.pattern_prob({anchor + i: a for i, a in enumerate(w)})


@dataclass(frozen=True, eq=False)
class Bernoulli(MeasureModel):
    weights: tuple
    kind = "bernoulli"

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if any(x < 0 for x in w) or abs(sum(w) - 1.0) > 1e-12:
            raise ValueError("Bernoulli weights must be a probability vector")
        object.__setattr__(self, "weights", w)

    @property
    def k(self):
        return len(self.weights)

    def pattern_prob(self, pattern):
        p = 1.0
        for a in pattern.values():
            p *= self.weights[a]
        return p


@dataclass(frozen=True, eq=False)
class Markov(MeasureModel):
    """Stationary one-step Markov measure on symbols."""

    transition: np.ndarray
    stationary: np.ndarray
    kind = "markov"
    _powers: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        P = np.asarray(self.transition, dtype=float)
        pi = np.asarray(self.stationary, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or pi.shape != (P.shape[0],):
            raise ValueError("transition must be square and match the stationary vector")
        if (P < 0).any() or np.abs(P.sum(axis=1) - 1).max() > 1e-12:
            raise ValueError("transition rows must sum to 1")
        if (pi < 0).any() or abs(pi.sum() - 1) > 1e-12:
            raise ValueError("stationary vector must sum to 1")
        if np.abs(pi @ P - pi).max() > 1e-9:
            raise ValueError("stationary vector is not invariant under the transition")
        object.__setattr__(self, "transition", P)
        object.__setattr__(self, "stationary", pi)

    @classmethod
    def from_transition(cls, P) -> "Markov":
        P = np.asarray(P, dtype=float)
        vals, vecs = np.linalg.eig(P.T)
        i = int(np.argmin(np.abs(vals - 1)))
        pi = np.real(vecs[:, i])
        pi = pi / pi.sum()
        return cls(P, pi)

    @property
    def k(self):
        return self.transition.shape[0]

    def _power(self, g):
        if g not in self._powers:
            self._powers[g] = np.linalg.matrix_power(self.transition, g)
        return self._powers[g]

    def pattern_prob(self, pattern):
        if not pattern:
            return 1.0
        pos = sorted(pattern)
        p = float(self.stationary[pattern[pos[0]]])
        for a, b in zip(pos, pos[1:]):
            if b - a == 1:
                p *= self.transition[pattern[a], pattern[b]]
            else:
                p *= self._power(b - a)[pattern[a], pattern[b]]
            if p == 0.0:
                break
        return float(p)

    def entropy_rate(self) -> float:
        """``-sum_i pi_i sum_j P_ij ln P_ij``."""
        P, pi = self.transition, self.stationary
        h = 0.0
        for i in range(self.k):
            for j in range(self.k):
                if P[i, j] > 0:
                    h -= pi[i] * P[i, j] * math.log(P[i, j])
        return h


def parry_measure(spec: SubshiftSpec) -> Markov:
    """Maximal-entropy Markov measure of a one-step SFT.

    ``P[i, j] = A[i, j] v[j] / (lam v[i])`` with ``v`` the Perron right
    eigenvector of the symbol adjacency matrix ``A``.
    """
    g = transfer_graph(spec)
    if g.L != 1 or any(len(f) > 2 for f in spec.forbidden):
        raise ValueError("Parry measure is built here for one-step SFTs only")
    A = np.zeros((spec.k, spec.k))
    for i in range(spec.k):
        for j in range(spec.k):
            if (i,) in g.index and (j,) in g.index and g.adj[g.index[(i,)], g.index[(j,)]]:
                A[i, j] = 1.0
    vals, vecs = np.linalg.eig(A)
    i = int(np.argmax(np.real(vals)))
    lam = float(np.real(vals[i]))
    v = np.abs(np.real(vecs[:, i]))
    vals_l, vecs_l = np.linalg.eig(A.T)
    u = np.abs(np.real(vecs_l[:, int(np.argmax(np.real(vals_l)))]))
    P = np.zeros_like(A)
    for a in range(spec.k):
        if v[a] > 0:
            P[a] = A[a] * v / (lam * v[a])
    P = P / np.where(P.sum(axis=1, keepdims=True) > 0, P.sum(axis=1, keepdims=True), 1)
    pi = u * v
    pi = pi / pi.sum()
    return Markov(P, pi)


@dataclass(frozen=True, eq=False)
class Empirical(MeasureModel):
    """Sliding-window frequencies over a finite segment, words up to ``max_len``.

    No boundary correction: the error against the true frequency is
    ``O(max_len / len(segment))``.
    """

    segment: tuple
    max_len: int
    k: int = 2
    kind = "empirical"

    def __post_init__(self):
        seg = as_word(self.segment)
        object.__setattr__(self, "segment", seg)
        if self.max_len < 1 or self.max_len > len(seg):
            raise ValueError("max_len must lie in [1, len(segment)]")
        if seg and max(seg) >= self.k:
            object.__setattr__(self, "k", max(seg) + 1)
        object.__setattr__(self, "_arr", np.asarray(seg, dtype=np.int64))

    def pattern_prob(self, pattern):
        if not pattern:
            return 1.0
        pos = sorted(pattern)
        span = pos[-1] - pos[0] + 1
        if span > self.max_len:
            raise WordTooLong(f"pattern span {span} exceeds empirical horizon {self.max_len}")
        arr = self._arr
        n = len(arr) - span + 1
        hit = np.ones(n, dtype=bool)
        for p in pos:
            off = p - pos[0]
            hit &= arr[off:off + n] == pattern[p]
        return float(hit.sum()) / n


def point_mass(symbol: int = 0, k: int = 2, length: int = 64) -> Empirical:
    """Empirical measure of the fixed point ``symbol^infinity``."""
    return Empirical((symbol,) * length, length, k)


def cylinder_measure(m: MeasureModel, c: CylinderSet) -> float:
    return m.word_prob(c.word, c.anchor)


def avoid_prob(m: MeasureModel, excluded) -> float:
    """Measure of the set of points avoiding every cylinder ``(anchor, word)`` in ``excluded``."""
    excluded = [(c.anchor, c.word) if isinstance(c, CylinderSet) else (c[0], tuple(c[1])) for c in excluded]
    if not excluded:
        return 1.0
    lo = min(a for a, _ in excluded)
    hi = max(a + len(w) for a, w in excluded)
    if isinstance(m, Empirical):
        span = hi - lo
        if span > m.max_len:
            raise WordTooLong(f"union span {span} exceeds empirical horizon {m.max_len}")
        arr = m._arr
        n = len(arr) - span + 1
        hit = np.zeros(n, dtype=bool)
        for a, w in excluded:
            cur = np.ones(n, dtype=bool)
            for j, sym in enumerate(w):
                off = a - lo + j
                cur &= arr[off:off + n] == sym
            hit |= cur
        return float((~hit).sum()) / n
    if isinstance(m, Bernoulli):
        start = np.asarray(m.weights)
        P = np.tile(start, (m.k, 1))
    elif isinstance(m, Markov):
        start, P = m.stationary, m.transition
    else:
        raise TypeError(f"no union rule for {type(m).__name__}")
    ends: dict = {}
    for a, w in excluded:
        ends.setdefault(a + len(w) - 1, []).append((a, w))
    W = max(len(w) for _, w in excluded)
    keep = max(W - 1, 1)
    dist = {(): 1.0}
    for p in range(lo, hi):
        nxt: dict = {}
        for hist, pr in dist.items():
            for b in range(m.k):
                step = start[b] if not hist else P[hist[-1], b]
                if step == 0.0:
                    continue
                h = hist + (b,)
                bad = False
                for a, w in ends.get(p, ()):
                    seg = h[len(h) - len(w):] if len(h) >= len(w) else None
                    if seg == w:
                        bad = True
                        break
                if bad:
                    continue
                key = h[-keep:]
                nxt[key] = nxt.get(key, 0.0) + pr * step
        dist = nxt
    return float(sum(dist.values()))


def union_measure(m: MeasureModel, cylinders) -> float:
    return 1.0 - avoid_prob(m, cylinders)
