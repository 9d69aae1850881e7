"""Lower ℓ1 constants of finite function families.

For functions ``g_1..g_m`` on a weighted finite sample space,
``c_star = min ||sum c_s g_s||_inf`` over ``sum |c_s| = 1``; the inverse of the
map from ``ℓ1^m`` onto their span has norm ``1/c_star``. The sup norm is the
essential one, so null sample points are ignored.

Splitting ``c = c_plus - c_minus`` in a plain LP is not enough here: the LP may
put equal mass on both parts and cancel to zero. A binary sign variable per
coefficient forbids that, which turns the problem into a small MILP.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from .errors import BudgetExceeded, CertificateInvalid, Degenerate
from .measures import MeasureModel
from .symbolic import SubshiftSpec, admissible_assignments, as_word

REVALIDATION_TOL = 1e-9


@dataclass
class FunctionFamily:
    """Functions ``labels[j] -> G[:, j]`` on sample points with weights ``weights``."""

    weights: np.ndarray
    G: np.ndarray
    labels: tuple
    points: tuple = ()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        G = np.asarray(self.G)
        if np.iscomplexobj(G):
            raise ValueError("only real-valued families are supported")
        G = G.astype(float).reshape(len(w), -1) if G.size else np.zeros((len(w), 0))
        if abs(w.sum() - 1) > 1e-12 or (w < 0).any():
            raise ValueError("weights must be a probability vector")
        if not np.isfinite(G).all():
            raise ValueError("function values must be finite")
        if G.shape[1] != len(self.labels):
            raise ValueError("one label per function")
        self.weights, self.G, self.labels = w, G, tuple(self.labels)

    @classmethod
    def from_dict(cls, weights, functions: dict, points=()) -> "FunctionFamily":
        labels = tuple(functions)
        G = np.column_stack([np.asarray(functions[s], dtype=float) for s in labels]) if labels else \
            np.zeros((len(weights), 0))
        return cls(np.asarray(weights, dtype=float), G, labels, tuple(points))

    @property
    def sup_norms(self) -> dict:
        live = self.weights > 0
        return {s: float(np.abs(self.G[live, j]).max()) if live.any() else 0.0
                for j, s in enumerate(self.labels)}

    def subfamily(self, labels) -> "FunctionFamily":
        idx = [self.labels.index(s) for s in labels]
        return FunctionFamily(self.weights, self.G[:, idx], tuple(labels), self.points)

    def centered(self) -> "FunctionFamily":
        return FunctionFamily(self.weights, self.G - self.weights @ self.G, self.labels, self.points)


@dataclass
class L1Report:
    c_star: float
    optimizer: np.ndarray
    labels: tuple = ()
    solver_value: float = field(default=0.0, repr=False)

    @property
    def lam(self) -> float:
        return math.inf if self.c_star <= 0 else 1.0 / self.c_star

    def to_dict(self) -> dict:
        return {"c_star": self.c_star, "lambda": None if math.isinf(self.lam) else self.lam,
                "optimizer": {str(s): float(c) for s, c in zip(self.labels, self.optimizer)}}


def sup_value(G: np.ndarray, c) -> float:
    return float(np.abs(G @ np.asarray(c, dtype=float)).max()) if len(G) else 0.0


def l1_constant(fam: FunctionFamily) -> L1Report:
    """Global minimum of the sup norm over the ℓ1 sphere, via MILP, with the optimizer re-evaluated."""
    m = fam.G.shape[1]
    if m == 0:
        raise Degenerate("empty family")
    if m > 64 or fam.G.shape[0] > 4096:
        raise ValueError("supports at most 64 functions on at most 4096 sample points")
    G = fam.G[fam.weights > 0]
    c, t = _milp_rows(G, m)
    signs = np.where(c < 0, -1.0, 1.0)
    # polish on the sign facet over all rows; the MILP alone is only good to ~1e-7
    a, _ = _facet_lp(G, signs)
    if a is not None:
        c = signs * a
    c = c / np.abs(c).sum()
    val = sup_value(G, c)
    # HiGHS MIP feasibility is ~1e-6 relative to the data, so t may undershoot by that much
    scale = max(1.0, float(np.abs(G).max()) if G.size else 1.0)
    if val > t + 1e-5 * scale:
        raise RuntimeError(f"optimizer re-evaluates to {val}, solver reported {t}")
    return L1Report(val, c, fam.labels, float(t))


def _milp_rows(G: np.ndarray, m: int):
    """MILP on the given rows; returns ``(c, t)`` with ``sum |c| = 1``."""
    N = len(G)
    # variables: c_plus (m), c_minus (m), z (m), t
    nv = 3 * m + 1
    cost = np.zeros(nv)
    cost[-1] = 1.0
    eye = np.eye(m)
    rows = [np.hstack([G, -G, np.zeros((N, m)), -np.ones((N, 1))]),
            np.hstack([-G, G, np.zeros((N, m)), -np.ones((N, 1))]),
            np.hstack([eye, np.zeros((m, m)), -eye, np.zeros((m, 1))]),
            np.hstack([np.zeros((m, m)), eye, eye, np.zeros((m, 1))]),
            np.concatenate([np.ones(2 * m), np.zeros(m + 1)])[None, :]]
    lo = np.concatenate([np.full(2 * N + 2 * m, -np.inf), [1.0]])
    hi = np.concatenate([np.zeros(2 * N + m), np.ones(m), [1.0]])
    cons = LinearConstraint(np.vstack(rows), lo, hi)
    integrality = np.concatenate([np.zeros(2 * m), np.ones(m), np.zeros(1)])
    bounds = Bounds(np.zeros(nv), np.concatenate([np.ones(3 * m), [np.inf]]))
    res = milp(cost, constraints=cons, integrality=integrality, bounds=bounds,
               options={"mip_rel_gap": 0.0, "presolve": True})
    if res.x is None:
        raise RuntimeError(f"MILP failed: {res.message}")
    c = res.x[:m] - res.x[m:2 * m]
    return c / np.abs(c).sum(), float(res.fun)


def _facet_lp(G: np.ndarray, signs):
    """Minimise the sup norm over coefficients with the given signs; ``(|c|, value)``."""
    N, m = G.shape
    Gs = G * np.asarray(signs)
    A = np.vstack([np.hstack([Gs, -np.ones((N, 1))]), np.hstack([-Gs, -np.ones((N, 1))])])
    res = linprog(np.r_[np.zeros(m), 1.0], A_ub=A, b_ub=np.zeros(2 * N),
                  A_eq=np.r_[np.ones(m), 0.0][None, :], b_eq=[1.0],
                  bounds=[(0, None)] * (m + 1), method="highs",
                  options={"primal_feasibility_tolerance": 1e-10,
                           "dual_feasibility_tolerance": 1e-10})
    if res.status != 0:
        return None, math.inf
    return np.clip(res.x[:m], 0, None), float(res.fun)


def l1_constant_by_facets(fam: FunctionFamily) -> float:
    """Independent check: one LP per sign pattern of the coefficients (2^m LPs)."""
    G = fam.G[fam.weights > 0]
    best = math.inf
    for signs in itertools.product((1.0, -1.0), repeat=G.shape[1]):
        if signs[0] < 0:
            continue  # c and -c give the same norm
        a, v = _facet_lp(G, signs)
        if a is not None:
            best = min(best, sup_value(G, np.asarray(signs) * a / a.sum()))
    return best


# -- independence-driven bounds ------------------------------------------------

def _interval(B) -> tuple:
    lo, hi = (B, B) if np.isscalar(B) else (min(B), max(B))
    return float(lo), float(hi)


def family_from_certificate(cert, f) -> FunctionFamily:
    """One sample point per assignment: the certificate's witness for it.

    ``g_s`` at the point for ``sigma`` is ``f`` evaluated on the witness
    shifted by ``s``; ``f`` is a :class:`CylinderFunction`.
    """
    sigmas = sorted(cert.witnesses)
    w = np.full(len(sigmas), 1.0 / len(sigmas))
    funcs = {}
    for s in cert.J:
        funcs[s] = [f.at(cert.witnesses[sg], s) for sg in sigmas]
    return FunctionFamily.from_dict(w, funcs, points=tuple(sigmas))


def rosenthal_dor_bound(cert, fam: FunctionFamily, B1, B2) -> dict:
    """Certified lower bound on ``c_star`` of the family restricted to ``cert.J``.

    Every assignment ``sigma`` must have a sample point where ``g_s`` lies in
    ``B_sigma(s)`` for all ``s``; ``cert`` supplies it either as a mapping
    ``sigma -> point index`` or as an independence certificate whose
    assignments name the points (see :func:`family_from_certificate`).
    """
    b1, b2 = _interval(B1), _interval(B2)
    d = max(b2[0] - b1[1], b1[0] - b2[1])
    diam1, diam2 = b1[1] - b1[0], b2[1] - b2[0]
    if d <= diam1 + diam2:
        raise ValueError("need dist(B1, B2) > diam(B1) + diam(B2)")
    J = tuple(cert.J)
    if hasattr(cert, "points_by_sigma"):
        lookup = dict(cert.points_by_sigma)
    else:
        lookup = {p: i for i, p in enumerate(fam.points)}
    boxes = (b1, b2)
    for sigma in itertools.product((1, 2), repeat=len(J)):
        row = lookup.get(sigma)
        if row is None:
            raise CertificateInvalid(f"no sample point for assignment {sigma}")
        for s, i in zip(J, sigma):
            v = fam.G[row, fam.labels.index(s)]
            lo, hi = boxes[i - 1]
            if not lo - 1e-12 <= v <= hi + 1e-12 or fam.weights[row] <= 0:
                raise CertificateInvalid(f"g_{s} misses B_{i} at the point for {sigma}")
    bound = (d - diam1 - diam2) / 2
    eps = 6 * d / 5
    return {"bound": bound, "midpoint": d / 2, "distance": d,
            "loose": {"eps": eps, "eps_over_10": eps / 10}, "J": J}


@dataclass
class PointsBySigma:
    """Plain ``sigma -> sample row`` certificate for :func:`rosenthal_dor_bound`."""

    J: tuple
    points_by_sigma: dict


# -- cylinder functions and shifted families -------------------------------------

@dataclass(frozen=True)
class CylinderFunction:
    """``f(x) = values[x[anchor : anchor + depth]]``; missing words map to 0."""

    values: tuple
    anchor: int = 0

    def __post_init__(self):
        vals = dict(self.values) if not isinstance(self.values, dict) else self.values
        vals = {as_word(k): float(v) for k, v in dict(vals).items()}
        depths = {len(k) for k in vals}
        if len(depths) != 1:
            raise ValueError("all words must share one length")
        object.__setattr__(self, "values", tuple(sorted(vals.items())))

    @property
    def depth(self) -> int:
        return len(self.values[0][0])

    def table(self) -> dict:
        return dict(self.values)

    def at(self, witness, s: int = 0) -> float:
        a = self.anchor + s
        return self.table().get(tuple(witness.at(a + i) for i in range(self.depth)), 0.0)


def symbol_indicator(symbol: int = 1, k: int = 2) -> CylinderFunction:
    return CylinderFunction({(a,): float(a == symbol) for a in range(k)})


def constant_function(c: float = 1.0, k: int = 2) -> CylinderFunction:
    return CylinderFunction({(a,): c for a in range(k)})


def shifted_family(spec: SubshiftSpec, m: MeasureModel, f: CylinderFunction, F, *,
                   removal=(), extra=0, center: bool = True) -> tuple:
    """Sample the shifts of ``f`` over ``F`` on all admissible words of the coordinate hull.

    Returns ``(family, coords, rows)``; ``rows`` are the words (sample points).
    ``removal`` lists cylinders ``(anchor, word)`` whose indicator is zeroed
    out (the projection onto the retained set). ``extra`` widens the hull on
    the right, for perturbations deeper than ``f``.
    """
    F = sorted(set(F))
    lo = min(F) + f.anchor
    hi = max(F) + f.anchor + f.depth + extra
    for a, w in removal:
        lo, hi = min(lo, a), max(hi, a + len(w))
    coords = tuple(range(lo, hi))
    rows = list(admissible_assignments(spec, coords))
    if len(rows) > 4096:
        raise ValueError(f"{len(rows)} sample points exceed the limit of 4096")
    w = np.array([m.pattern_prob(dict(zip(coords, r))) for r in rows])
    keep = w > 0
    rows = [r for r, k in zip(rows, keep) if k]
    w = w[keep]
    w = w / w.sum()
    tab = f.table()
    G = np.zeros((len(rows), len(F)))
    for j, s in enumerate(F):
        a = s + f.anchor - lo
        for i, r in enumerate(rows):
            G[i, j] = tab.get(tuple(r[a:a + f.depth]), 0.0)
    if removal:
        ret = np.ones(len(rows), dtype=bool)
        for i, r in enumerate(rows):
            for a, word in removal:
                if tuple(r[a - lo:a - lo + len(word)]) == tuple(word):
                    ret[i] = False
                    break
        G = G * ret[:, None]
    fam = FunctionFamily(w, G, tuple(F), tuple(rows))
    return (fam.centered() if center else fam), coords, rows


def sign_pattern_lower_bound(G: np.ndarray, max_m: int = 14) -> float:
    """``min over sign patterns e of max over rows x of min_j e_j G[x, j]``.

    A valid lower bound on ``c_star``: if ``c`` has signs ``e``, the row
    attaining the max gives ``sum c_j G[x, j] >= that value``.
    """
    N, m = G.shape
    if m > max_m or N == 0:
        return 0.0
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=m)))
    best = np.full(len(signs), -np.inf)
    for start in range(0, N, 256):
        blk = G[start:start + 256]
        val = (signs[:, None, :] * blk[None, :, :]).min(axis=2).max(axis=1)
        best = np.maximum(best, val)
    return max(0.0, float(best.min()))


def trial_upper_bound(G: np.ndarray) -> float:
    """Smallest sup norm among unit vectors and normalised pairwise sums and differences."""
    N, m = G.shape
    if N == 0:
        return 0.0
    best = float(np.abs(G).max(axis=0).min())
    for i, j in itertools.combinations(range(m), 2):
        best = min(best, float(np.abs(G[:, i] - G[:, j]).max()) / 2,
                   float(np.abs(G[:, i] + G[:, j]).max()) / 2)
    return best


def max_l1_subset(fam: FunctionFamily, lam: float, budget: int | None = None) -> tuple:
    """Largest label subset with ``c_star >= 1/lam``; lexicographically least among ties.

    Passing subsets are downward closed, so include-first DFS with an
    incumbent is exact. The full set is tried first.
    """
    target = 1.0 / lam
    labels = sorted(fam.labels)
    calls = [0]

    def passes(sub):
        if not sub:
            return True
        calls[0] += 1
        if budget is not None and calls[0] > budget:
            raise BudgetExceeded("l1 subset budget exhausted", partial=tuple(best[0]))
        sf = fam.subfamily(sub)
        G = sf.G[sf.weights > 0]
        if sign_pattern_lower_bound(G) >= target - 1e-12:
            return True
        if trial_upper_bound(G) < target - 1e-12:
            return False
        return l1_constant(sf).c_star >= target - 1e-12

    best = [()]
    if passes(labels):
        return tuple(labels)
    elems = [s for s in labels if passes([s])]

    def rec(i, cur):
        if len(cur) > len(best[0]):
            best[0] = cur
        if i == len(elems) or len(cur) + len(elems) - i <= len(best[0]):
            return
        nxt = cur + (elems[i],)
        if len(nxt) == 1 or passes(list(nxt)):
            rec(i + 1, nxt)
        if len(cur) + len(elems) - i - 1 > len(best[0]):
            rec(i + 1, cur)

    rec(0, ())
    return best[0]


def l1_isomorphism_set(spec, f: CylinderFunction, m: MeasureModel, F, lam: float, *,
                       removal=(), center: bool = True, budget: int | None = None) -> tuple:
    """Largest ``I`` in ``F`` whose shifts of ``f`` have ``c_star >= 1/lam``.

    Functions are centred by default so that a constant ``f`` yields the
    empty set for every finite ``lam``.
    """
    F = sorted(set(F))
    if len(F) > 20:
        raise ValueError("exact search supports |F| <= 20")
    fam, _, _ = shifted_family(spec, m, f, F, removal=removal, center=center)
    return max_l1_subset(fam, lam, budget)


def perturb(fam: FunctionFamily, coords, rows, F, delta: float, r: int, rng) -> FunctionFamily:
    """Add to each ``g_s`` an independent Gaussian depth-``r`` cylinder function at ``s``
    scaled to L2 norm ``0.999 * delta``."""
    if delta <= 0:
        return fam
    G = fam.G.copy()
    lo = coords[0]
    for j, s in enumerate(F):
        words = sorted({tuple(row[s - lo:s - lo + r]) for row in rows})
        vals = dict(zip(words, rng.standard_normal(len(words))))
        eta = np.array([vals[tuple(row[s - lo:s - lo + r])] for row in rows])
        norm = math.sqrt(float(fam.weights @ eta ** 2))
        if norm > 0:
            G[:, j] += eta * (0.999 * delta / norm)
    return FunctionFamily(fam.weights, G, fam.labels, fam.points)


def perturb_and_test(spec, f: CylinderFunction, m: MeasureModel, F, delta: float, lam: float,
                     trials: int, seed: int, *, r: int | None = None, center: bool = True,
                     threshold: float = 0.5) -> dict:
    """Achieved density ``|I|/|F|`` over seeded random perturbations of the shifts of ``f``."""
    F = sorted(set(F))
    r = (f.depth + 1) if r is None else r
    extra = max(0, r - f.depth - f.anchor)
    fam, coords, rows = shifted_family(spec, m, f, F, extra=extra, center=center)
    rng = np.random.default_rng(seed)
    dens = []
    for _ in range(trials):
        g = perturb(fam, coords, rows, F, delta, r, rng)
        dens.append(len(max_l1_subset(g, lam)) / len(F))
    hit = sum(1 for d in dens if d >= threshold)
    return {"densities": dens, "threshold": threshold, "fraction_at_least": hit / trials if trials else 0.0,
            "mean": float(np.mean(dens)) if dens else 0.0, "trials": trials, "seed": seed,
            "delta": delta, "lambda": lam}
