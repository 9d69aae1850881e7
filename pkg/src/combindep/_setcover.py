"""Exact minimum set cover over bitmask-encoded sets."""
from __future__ import annotations

from .errors import BudgetExceeded


def _prune(universe: int, sets):
    """Drop empty, duplicate and dominated sets; keep the first of equal ones."""
    cand = sorted({s & universe for s in sets if s & universe},
                  key=lambda s: (-s.bit_count(), s))
    kept = []
    for s in cand:
        if not any(s | t == t for t in kept):
            kept.append(s)
    return kept


def greedy_cover(universe: int, sets) -> list:
    sets = _prune(universe, sets)
    left, out = universe, []
    while left:
        _, s = max(enumerate(sets), key=lambda p: ((p[1] & left).bit_count(), -p[0]))
        if not s & left:
            raise ValueError("sets do not cover the universe")
        out.append(s)
        left &= ~s
    return out


def min_set_cover(universe: int, sets, budget: int | None = None) -> list:
    """Smallest sub-collection of ``sets`` whose union contains ``universe``.

    Branch and bound: branch on the uncovered element with the fewest covering
    sets, bound by ``ceil(|uncovered| / largest set)``, and memoise the best
    depth at which each uncovered mask was reached. Raises
    :class:`BudgetExceeded` after ``budget`` nodes with the incumbent as
    ``partial``.
    """
    if not universe:
        return []
    sets = _prune(universe, sets)
    best = greedy_cover(universe, sets)
    biggest = max(s.bit_count() for s in sets)
    by_elem: dict = {}
    for s in sets:
        m = s
        while m:
            low = m & -m
            by_elem.setdefault(low, []).append(s)
            m ^= low
    seen: dict = {}
    nodes = [0]

    def rec(left, chosen):
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise BudgetExceeded("set cover budget exhausted", partial=list(best))
        if not left:
            if len(chosen) < len(best):
                best[:] = chosen
            return
        lb = -(-left.bit_count() // biggest)
        if len(chosen) + lb >= len(best):
            return
        if seen.get(left, 1 << 30) <= len(chosen):
            return
        seen[left] = len(chosen)
        pick, opts = None, None
        m = left
        while m:
            low = m & -m
            o = by_elem[low]
            if opts is None or len(o) < len(opts):
                pick, opts = low, o
                if len(o) == 1:
                    break
            m ^= low
        for s in sorted(opts, key=lambda s: -(s & left).bit_count()):
            rec(left & ~s, chosen + [s])

    for low in _bits(universe):
        if low not in by_elem:
            raise ValueError("sets do not cover the universe")
    rec(universe, [])
    return best


def _bits(m: int):
    while m:
        low = m & -m
        yield low
        m ^= low
