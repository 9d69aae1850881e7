"""Finite shattering combinatorics on pattern sets.

A pattern set ``S`` is a set of functions ``Z -> {0, 1, ..., k}``. An index set
``I`` is shattered when ``S`` restricted to ``I`` contains every function
``I -> {1, ..., k}``; the symbol 0 never helps.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._setcover import min_set_cover
from .independence import split_selection  # noqa: F401  (re-exported)


@dataclass(frozen=True)
class PatternSet:
    Z: tuple
    k: int
    patterns: frozenset

    def __post_init__(self):
        Z = tuple(self.Z)
        pats = frozenset(tuple(int(v) for v in p) for p in self.patterns)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if len(set(Z)) != len(Z):
            raise ValueError("index set has repeated entries")
        for p in pats:
            if len(p) != len(Z) or any(not 0 <= v <= self.k for v in p):
                raise ValueError(f"pattern {p} is not a map Z -> {{0..{self.k}}}")
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "patterns", pats)

    @classmethod
    def of(cls, patterns, k: int, n: int | None = None) -> "PatternSet":
        pats = [tuple(p) for p in patterns]
        if n is None:
            n = len(pats[0]) if pats else 0
        return cls(tuple(range(n)), k, frozenset(pats))

    @classmethod
    def full(cls, n: int, k: int) -> "PatternSet":
        """``{1..k}^n``."""
        return cls.of(itertools.product(range(1, k + 1), repeat=n), k, n)

    @property
    def n(self) -> int:
        return len(self.Z)

    def __len__(self):
        return len(self.patterns)

    def restrict(self, I) -> set:
        idx = [self.Z.index(z) for z in I]
        return {tuple(p[i] for i in idx) for p in self.patterns}

    def with_pattern(self, p) -> "PatternSet":
        return PatternSet(self.Z, self.k, self.patterns | {tuple(p)})


def is_shattered(S: PatternSet, I) -> bool:
    idx = [S.Z.index(z) for z in I]
    seen = {tuple(p[i] for i in idx) for p in S.patterns if all(p[i] for i in idx)}
    return len(seen) == S.k ** len(idx)


def largest_shattered_subset(S: PatternSet) -> tuple:
    """``(I, |I|)`` with ``I`` a largest shattered subset, lexicographically least among ties.

    Include-first DFS in index order; a set that is not shattered has no
    shattered superset, so failing branches are cut immediately.
    """
    if S.n > 24:
        raise ValueError("exact search supports |Z| <= 24")
    n, k = S.n, S.k
    if not S.patterns:
        return (), 0
    pats = sorted(S.patterns)
    # only coordinates that see every nonzero symbol can be shattered
    elems = [j for j in range(n) if len({p[j] for p in pats} - {0}) == k]
    best = [()]

    def shattered(cols):
        need = k ** len(cols)
        seen = {tuple(p[c] for c in cols) for p in pats if all(p[c] for c in cols)}
        return len(seen) == need

    def rec(i, cur):
        if len(cur) > len(best[0]):
            best[0] = cur
        if i == len(elems) or len(cur) + len(elems) - i <= len(best[0]):
            return
        nxt = cur + (elems[i],)
        if shattered(list(nxt)):
            rec(i + 1, nxt)
        if len(cur) + len(elems) - i - 1 > len(best[0]):
            rec(i + 1, cur)

    rec(0, ())
    I = tuple(S.Z[j] for j in best[0])
    return I, len(I)


def km_threshold(n: int, k: int, t: int) -> int:
    """Largest size of ``S`` inside ``{1..k}^n`` with no shattered set of size ``t``."""
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    return sum(math.comb(n, i) * (k - 1) ** (n - i) for i in range(t))


def cover_sets(S: PatternSet):
    """Yield ``(i, mask)`` for each product ``prod {i_z}^c``; ``mask`` marks the covered patterns."""
    pats = sorted(S.patterns)
    for i in itertools.product(range(1, S.k + 1), repeat=S.n):
        mask = 0
        for b, p in enumerate(pats):
            if all(v != c for v, c in zip(p, i)):
                mask |= 1 << b
        yield i, mask


def cover_number(S: PatternSet, budget: int | None = None) -> int:
    """Exact minimum number of one-symbol-excluded product sets covering ``S``."""
    if S.n > 12 or len(S) > 4096:
        raise ValueError("cover_number supports |Z| <= 12 and |S| <= 4096")
    if not S.patterns:
        return 0
    universe = (1 << len(S)) - 1
    return len(min_set_cover(universe, [m for _, m in cover_sets(S)], budget=budget))


def cover_bound(S: PatternSet) -> dict:
    """Exact ``F_S`` against ``(k/(k-1))^s`` for the largest shattered size ``s``.

    The bound is only claimed for a nonempty shattered set, so ``s = 0`` is
    reported as vacuous.
    """
    I, s = largest_shattered_subset(S)
    F = cover_number(S)
    bound = (S.k / (S.k - 1)) ** s if S.k > 1 else math.inf
    return {"F_S": F, "s": s, "I": I, "bound": bound,
            "holds": s == 0 or F >= bound - 1e-12, "vacuous": s == 0}


def density_lemma_search(S: PatternSet, a_target: float, b: float):
    """A shattered ``I`` with ``|I| >= a_target * n``, or ``None`` (definitive at this size)."""
    n = S.n
    if any(sum(1 for v in p if v == 0) > b * n + 1e-12 for p in S.patterns):
        raise ValueError("some pattern has more than b*n zeros")
    I, s = largest_shattered_subset(S)
    if s >= math.ceil(a_target * n - 1e-12):
        return I
    return None


def _side_patterns(vals: np.ndarray, t: float) -> PatternSet:
    # 2: strictly above t, 1: strictly below, 0: on the threshold (useless)
    codes = np.where(vals > t, 2, np.where(vals < t, 1, 0))
    return PatternSet.of({tuple(r) for r in codes.tolist()}, 2, vals.shape[1])


def _margin(vals: np.ndarray, t: float, J) -> float:
    """Largest ``eps`` with every sign pattern on ``J`` realised at distance ``eps`` from ``t``."""
    if not J:
        return math.inf
    sub = vals[:, list(J)] - t
    eps = math.inf
    for sigma in itertools.product((0, 1), repeat=len(J)):
        signed = np.where(np.array(sigma) == 1, sub, -sub)
        eps = min(eps, float(signed.min(axis=1).max()))
    return eps


def separated_to_shattered(E, delta: float, m: int = 64, min_size: int = 1):
    """Threshold ``t``, margin ``eps`` and coordinates ``J`` on which ``E`` is shattered.

    Every ``sigma`` in ``{0,1}^J`` is realised by some ``v`` with
    ``v_j >= t + eps`` where ``sigma_j = 1`` and ``v_j <= t - eps`` where it is
    0. ``t`` runs over the grid ``-1 + i/m``. Complex inputs also try imaginary
    parts. Returns ``None`` when no ``J`` of size ``min_size`` is found.
    """
    E = np.asarray(E)
    if E.ndim != 2 or len(E) == 0:
        raise ValueError("E must be a nonempty list of equal-length vectors")
    if np.abs(E).max() > 1 + 1e-12:
        raise ValueError("vectors must have sup-norm at most 1")
    for i in range(len(E)):
        d = np.abs(E[i + 1:] - E[i]).max(axis=1) if i + 1 < len(E) else np.array([])
        if d.size and d.min() < delta - 1e-12:
            raise ValueError("E is not delta-separated")
    sides = [("real", np.real(E).astype(float))]
    if np.iscomplexobj(E):
        sides.append(("imaginary", np.imag(E).astype(float)))
    best = None
    for side, vals in sides:
        for i in range(2 * m + 1):
            t = -1 + i / m
            I, s = largest_shattered_subset(_side_patterns(vals, t))
            if s < min_size:
                continue
            eps = _margin(vals, t, I)
            key = (s, eps)
            if best is None or key > best[0]:
                best = (key, {"t": t, "epsilon": eps, "J": I, "side": side})
    return None if best is None else best[1]
