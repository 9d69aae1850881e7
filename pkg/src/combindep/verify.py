"""Self-checking suites for the finite combinatorics.

Each suite returns ``{"suite", "instances", "failures", "extremal", ...}`` and
is deterministic for a given seed.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .shattering import (PatternSet, cover_bound, km_threshold, largest_shattered_subset,
                         separated_to_shattered)

EXHAUSTIVE_LIMIT = 2 ** 16
MAX_FAILURES_LISTED = 20


def _shatter_masks(n: int, k: int, universe: list) -> list:
    """For each index set ``I`` (as a tuple) the bitmasks of universe patterns per value on ``I``."""
    out = []
    for size in range(1, n + 1):
        for I in itertools.combinations(range(n), size):
            groups: dict = {}
            for b, p in enumerate(universe):
                key = tuple(p[i] for i in I)
                groups[key] = groups.get(key, 0) | (1 << b)
            out.append((I, list(groups.values())))
    return out


def _largest_shattered_size(mask: int, table) -> int:
    # a set that is not shattered has no shattered superset, but sizes here are small
    best = 0
    for I, groups in table:
        if len(I) > best and all(mask & g for g in groups):
            best = len(I)
    return best


def _subsets(N: int, instances: int | None, seed: int):
    if 2 ** N <= EXHAUSTIVE_LIMIT and instances is None:
        return range(2 ** N), True
    rng = np.random.default_rng(seed)
    count = instances or 10_000
    masks = [int.from_bytes(rng.bytes((N + 7) // 8), "little") & ((1 << N) - 1) for _ in range(count)]
    return masks, False


def sauer(n: int = 3, k: int = 2, *, instances: int | None = None, seed: int = 0) -> dict:
    """Karpovsky-Milman over subsets of ``{1..k}^n``.

    Checks that ``|S| > km_threshold(n, k, t)`` forces a shattered ``t``-set and,
    when the enumeration is exhaustive, that the threshold is attained.
    """
    universe = list(itertools.product(range(1, k + 1), repeat=n))
    table = _shatter_masks(n, k, universe)
    masks, exhaustive = _subsets(len(universe), instances, seed)
    km = {t: km_threshold(n, k, t) for t in range(1, n + 1)}
    largest_without = {t: 0 for t in km}
    witness = {t: [] for t in km}
    failures = []
    count = 0
    for mask in masks:
        count += 1
        size = mask.bit_count()
        s = _largest_shattered_size(mask, table)
        for t, th in km.items():
            if size > th and s < t:
                if len(failures) < MAX_FAILURES_LISTED:
                    failures.append({"S": _patterns(mask, universe), "t": t, "s": s})
                else:
                    failures.append(None)
            if s < t and size > largest_without[t]:
                largest_without[t] = size
                witness[t] = _patterns(mask, universe)
    tight = {t: largest_without[t] == km[t] for t in km}
    if exhaustive:
        failures += [{"tightness": t, "largest_without": largest_without[t], "km": km[t]}
                     for t in km if not tight[t]]
    return {
        "suite": "sauer", "n": n, "k": k, "instances": count, "exhaustive": exhaustive,
        "failures": sum(1 for _ in failures), "failure_examples": [f for f in failures if f][:MAX_FAILURES_LISTED],
        "km_threshold": {str(t): v for t, v in km.items()},
        "largest_without_shattered_t": {str(t): v for t, v in largest_without.items()},
        "tight": {str(t): v for t, v in tight.items()} if exhaustive else None,
        "extremal": {str(t): witness[t] for t in km},
    }


def _patterns(mask: int, universe: list) -> list:
    return ["".join(map(str, universe[b])) for b in range(len(universe)) if mask >> b & 1]


def cover_bound_suite(n: int = 3, k: int = 2, *, instances: int | None = None, seed: int = 0) -> dict:
    """``F_S >= (k/(k-1))^s`` over subsets of ``{1..k}^n``, with equality on the full set for ``k = 2``."""
    universe = list(itertools.product(range(1, k + 1), repeat=n))
    masks, exhaustive = _subsets(len(universe), instances, seed)
    failures, count, vacuous = [], 0, 0
    tightest = None
    for mask in masks:
        count += 1
        S = PatternSet.of([universe[b] for b in range(len(universe)) if mask >> b & 1], k, n)
        r = cover_bound(S)
        vacuous += r["vacuous"]
        if not r["holds"]:
            failures.append({"S": _patterns(mask, universe), "F_S": r["F_S"], "s": r["s"]})
        if not r["vacuous"]:
            gap = r["F_S"] / r["bound"]
            if tightest is None or gap < tightest[0]:
                tightest = (gap, {"S": _patterns(mask, universe), "F_S": r["F_S"], "s": r["s"],
                                  "bound": r["bound"]})
    full = cover_bound(PatternSet.full(n, k))
    equality = math.isclose(full["F_S"], full["bound"])
    if k == 2 and not equality:
        failures.append({"full_set_equality": False, "F_S": full["F_S"], "bound": full["bound"]})
    return {
        "suite": "cover-bound", "n": n, "k": k, "instances": count, "exhaustive": exhaustive,
        "vacuous": vacuous, "failures": len(failures), "failure_examples": failures[:MAX_FAILURES_LISTED],
        "full_set": {"F_S": full["F_S"], "bound": full["bound"], "equality": equality},
        "extremal": tightest[1] if tightest else None,
    }


def support_class_bound(S: PatternSet) -> int:
    """Shattered size forced by pigeonholing on supports and applying the KM threshold.

    Patterns sharing a support ``U`` restrict to a subset of ``{1..k}^U``; more
    than ``km_threshold(|U|, k, t)`` of them shatter a ``t``-subset of ``U``.
    """
    classes: dict = {}
    for p in S.patterns:
        U = tuple(i for i, v in enumerate(p) if v)
        classes[U] = classes.get(U, 0) + 1
    forced = 0
    for U, size in classes.items():
        for t in range(len(U), forced, -1):
            if size > km_threshold(len(U), S.k, t):
                forced = t
                break
    return forced


def density_lemma(n: int = 6, k: int = 2, b: float = 0.34, *, instances: int = 200, seed: int = 0) -> dict:
    """Random pattern sets with at most ``b n`` zeros per pattern against the support-class bound."""
    rng = np.random.default_rng(seed)
    max_zeros = int(math.floor(b * n + 1e-12))
    failures, best = [], None
    for _ in range(instances):
        size = int(rng.integers(1, 2 ** min(n, 10)))
        pats = set()
        for _ in range(size):
            p = rng.integers(1, k + 1, size=n)
            z = int(rng.integers(0, max_zeros + 1))
            p[rng.choice(n, size=z, replace=False)] = 0
            pats.add(tuple(int(v) for v in p))
        S = PatternSet.of(pats, k, n)
        forced = support_class_bound(S)
        I, s = largest_shattered_subset(S)
        if s < forced:
            failures.append({"patterns": sorted("".join(map(str, p)) for p in pats), "forced": forced, "s": s})
        if best is None or (s - forced, -len(S)) < best[0]:
            best = ((s - forced, -len(S)), {"size": len(S), "forced": forced, "s": s, "I": list(I)})
    return {"suite": "density-lemma", "n": n, "k": k, "b": b, "instances": instances,
            "failures": len(failures), "failure_examples": failures[:MAX_FAILURES_LISTED],
            "extremal": best[1] if best else None}


def _check_separation(E: np.ndarray, res: dict) -> bool:
    vals = np.real(E) if res["side"] == "real" else np.imag(E)
    t, eps, J = res["t"], res["epsilon"], list(res["J"])
    if eps <= 0:
        return False
    for sigma in itertools.product((0, 1), repeat=len(J)):
        ok = np.ones(len(vals), dtype=bool)
        for j, bit in zip(J, sigma):
            ok &= vals[:, j] >= t + eps - 1e-12 if bit else vals[:, j] <= t - eps + 1e-12
        if not ok.any():
            return False
    return True


def separated(n: int = 5, *, instances: int = 40, seed: int = 0, m: int = 64) -> dict:
    """Re-verify ``separated_to_shattered`` outputs on random binary and real vector sets."""
    rng = np.random.default_rng(seed)
    failures, worst = [], None
    cube = np.array(list(itertools.product((0.0, 1.0), repeat=n)))
    res = separated_to_shattered(cube, 1.0, m)
    if res is None or list(res["J"]) != list(range(n)) or res["epsilon"] < 0.25:
        failures.append({"full_cube": res})
    for i in range(instances):
        binary = i % 2 == 0
        rows = int(rng.integers(2, 2 ** n + 1))
        if binary:
            E = cube[np.sort(rng.choice(len(cube), size=rows, replace=False))]
        else:
            E = np.unique(np.round(rng.uniform(-1, 1, size=(rows, n)) * 8) / 8, axis=0)
        if len(E) < 2:
            continue
        d = np.abs(E[:, None, :] - E[None, :, :]).max(axis=2)
        delta = float(d[~np.eye(len(E), dtype=bool)].min())
        r = separated_to_shattered(E, delta, m)
        if r is None:
            failures.append({"E": E.tolist(), "reason": "no shattered coordinate"})
            continue
        if not _check_separation(E, r):
            failures.append({"E": E.tolist(), "result": _jsonable(r), "reason": "certificate rejected"})
        if binary:
            forced = max((t for t in range(1, n + 1) if len(E) > km_threshold(n, 2, t)), default=0)
            if len(r["J"]) < forced:
                failures.append({"E": E.tolist(), "forced": forced, "J": list(r["J"])})
        if worst is None or r["epsilon"] < worst[0]:
            worst = (r["epsilon"], {"rows": len(E), "delta": delta, **_jsonable(r)})
    return {"suite": "separated", "n": n, "instances": instances + 1, "failures": len(failures),
            "failure_examples": failures[:MAX_FAILURES_LISTED], "full_cube": _jsonable(res) if res else None,
            "extremal": worst[1] if worst else None}


def _jsonable(r: dict) -> dict:
    return {"t": r["t"], "epsilon": r["epsilon"], "J": list(r["J"]), "side": r["side"]}


SUITES = {
    "sauer": sauer,
    "cover-bound": cover_bound_suite,
    "density-lemma": density_lemma,
    "separated": separated,
}
