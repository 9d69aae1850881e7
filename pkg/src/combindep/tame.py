"""Deterministic construction of the pair ``(p, q)`` behind the tame, non-measure-null subshift.

Both sequences vanish on the negative half-line and outside the blocks
``[a_n, a'_n]``. Block ``n`` is filled according to ``n mod 3``: a copy of the
other sequence's central word, or (when ``n`` is divisible by 3) the shortest
pair of equal-length ``p``-words not yet seen side by side in ``(p, q)``.

``a_{m+1}`` and the auxiliary times ``h_{m+1}`` take the smallest values
allowed by the construction's inequalities::

    h_{m+1} = h_m + (a'_m - a_1) + 1
    a_{m+1} = max(m, a'_m, a'_m + h_{m+1} - h_1) + 1
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


@dataclass(frozen=True)
class Block:
    n: int
    a: int
    a_prime: int | None
    h: int
    branch: str
    pair: tuple | None = None


@dataclass
class TameExample:
    length: int
    p: np.ndarray
    q: np.ndarray
    schedule: list

    def ones_density(self, n: int | None = None) -> float:
        n = self.length if n is None else n
        return float(self.p[:n].sum()) / n

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "p": "".join(map(str, self.p.tolist())),
            "q": "".join(map(str, self.q.tolist())),
            "schedule": [asdict(b) for b in self.schedule],
        }


def _codes(arr: np.ndarray, d: int, pad: int) -> np.ndarray:
    """Integer codes of all length-``d`` windows of ``0^pad + arr`` (big-endian base 2)."""
    x = np.concatenate([np.zeros(pad, dtype=np.int64), arr.astype(np.int64)])
    if len(x) < d:
        return np.zeros(0, dtype=np.int64)
    win = sliding_window_view(x, d)
    return win @ (1 << np.arange(d - 1, -1, -1, dtype=np.int64))


def _decode(code: int, d: int) -> tuple:
    return tuple((code >> (d - 1 - i)) & 1 for i in range(d))


def missing_pair(p: np.ndarray, q: np.ndarray, upto: int, max_d: int = 40):
    """Shortest, then lexicographically least, pair of equal-length ``p``-words
    over ``(-inf, upto]`` that never occurs jointly in ``(p, q)`` there."""
    p = p[:upto + 1]
    q = q[:upto + 1]
    for d in range(1, max_d + 1):
        words = np.unique(_codes(p, d, d))
        joint = _codes(p, d, d) * (1 << d) + _codes(q, d, d)
        seen = set(np.unique(joint).tolist())
        for f in words.tolist():
            for g in words.tolist():
                if f * (1 << d) + g not in seen:
                    return _decode(f, d), _decode(g, d)
    raise RuntimeError("no missing pair up to the length cap")


def _pair_realized(p, q, upto, f, g) -> bool:
    d = len(f)
    fc = int(np.dot(f, 1 << np.arange(d - 1, -1, -1)))
    gc = int(np.dot(g, 1 << np.arange(d - 1, -1, -1)))
    joint = _codes(p[:upto + 1], d, d) * (1 << d) + _codes(q[:upto + 1], d, d)
    return bool((joint == fc * (1 << d) + gc).any())


def build_tame_example(L: int) -> TameExample:
    """Extend ``(p, q)`` block by block until both are determined on ``[0, L)``."""
    if L < 1:
        raise ValueError("L must be >= 1")
    cap = 2 * L + 64
    p = np.zeros(cap, dtype=np.uint8)
    q = np.zeros(cap, dtype=np.uint8)
    p[0], q[0] = 1, 0
    a1 = 0
    a, ap, h = 0, 0, 0
    schedule = [Block(1, 0, 0, 0, "seed")]
    m = 1
    while ap < L - 1:
        h_next = h + (ap - a1) + 1
        a_next = max(m, ap, ap + h_next - schedule[0].h) + 1
        assert h_next > h + ap - a1
        assert a_next > max(m, ap) and a_next > ap + h_next - schedule[0].h
        if a_next >= L:
            schedule.append(Block(m + 1, a_next, None, h_next, "beyond"))
            break
        n = m + 1
        pair = None
        if n % 3 == 1:
            ap_next = a_next + 2 * m
            branch = "copy_q"
        elif n % 3 == 2:
            ap_next = a_next + 2 * m
            branch = "copy_p"
        else:
            f, g = missing_pair(p, q, ap)
            ap_next = a_next + len(f) - 1
            branch = "pair"
            pair = ("".join(map(str, f)), "".join(map(str, g)))
        if ap_next + 1 > len(p):
            grow = max(ap_next + 1, 2 * len(p))
            p = np.concatenate([p, np.zeros(grow - len(p), dtype=np.uint8)])
            q = np.concatenate([q, np.zeros(grow - len(q), dtype=np.uint8)])
        if branch == "copy_q":
            # q on [-m, m]; q vanishes on negatives
            src = np.concatenate([np.zeros(m, dtype=np.uint8), q[:m + 1]])
            p[a_next:ap_next + 1] = src
        elif branch == "copy_p":
            src = np.concatenate([np.zeros(m, dtype=np.uint8), p[:m + 1]])
            q[a_next:ap_next + 1] = src
        else:
            p[a_next:ap_next + 1] = f
            q[a_next:ap_next + 1] = g
            assert _pair_realized(p, q, ap_next, f, g)
        assert a_next <= ap_next
        schedule.append(Block(n, a_next, ap_next, h_next, branch, pair))
        a, ap, h = a_next, ap_next, h_next
        m = n
    return TameExample(L, p[:L].copy(), q[:L].copy(), schedule)


@lru_cache(maxsize=8)
def cached_tame(L: int) -> TameExample:
    return build_tame_example(L)


def check_schedule(ex: TameExample) -> list:
    """Return every violated schedule inequality as a message (empty if all hold)."""
    bad = []
    blocks = ex.schedule
    a1, h1 = blocks[0].a, blocks[0].h
    if (a1, blocks[0].a_prime) != (0, 0):
        bad.append("a_1 = a'_1 = 0 fails")
    for prev, nxt in zip(blocks, blocks[1:]):
        m = prev.n
        if not prev.a <= prev.a_prime < nxt.a:
            bad.append(f"a_m <= a'_m < a_(m+1) fails at m={m}")
        if not nxt.a > max(m, prev.a_prime):
            bad.append(f"a_(m+1) > max(m, a'_m) fails at m={m}")
        if not nxt.h > prev.h + prev.a_prime - a1:
            bad.append(f"h_(m+1) > h_m + a'_m - a_1 fails at m={m}")
        if not nxt.a > prev.a_prime + nxt.h - h1:
            bad.append(f"a_(m+1) > a'_m + h_(m+1) - h_1 fails at m={m}")
    inside = np.zeros(ex.length, dtype=bool)
    for b in blocks:
        if b.a_prime is not None:
            inside[b.a:min(b.a_prime + 1, ex.length)] = True
    if ex.p[~inside].any() or ex.q[~inside].any():
        bad.append("p or q nonzero outside the blocks")
    if ex.p[0] != 1 or ex.q[0] != 0:
        bad.append("p(0) = 1, q(0) = 0 fails")
    return bad


def pair_coverage(ex: TameExample, d_max: int) -> dict:
    """Fraction of ordered pairs of equal-length ``p``-words realised jointly in ``(p, q)``."""
    out = {}
    for d in range(1, d_max + 1):
        words = np.unique(_codes(ex.p, d, d))
        seen = set(np.unique(_codes(ex.p, d, d) * (1 << d) + _codes(ex.q, d, d)).tolist())
        total = len(words) ** 2
        hit = sum(1 for f in words.tolist() for g in words.tolist() if f * (1 << d) + g in seen)
        out[d] = hit / total
    return out


def v_disjointness(ex: TameExample) -> dict:
    """Finite-scale check that the translates of ``V = {x : x(0) = 1}`` by the
    times ``h_i`` do not meet along the generated prefix of ``p``."""
    hs = [b.h for b in ex.schedule]
    ones = np.flatnonzero(ex.p)
    ones_set = set(ones.tolist())
    violations = []
    for i in range(len(hs)):
        for j in range(i + 1, len(hs)):
            delta = hs[j] - hs[i]
            if delta <= 0 or delta >= ex.length:
                continue
            for k in ones.tolist():
                if k + delta in ones_set:
                    violations.append((hs[i], hs[j], k))
                    break
    return {"pairs_checked": len(hs) * (len(hs) - 1) // 2, "violations": violations}
