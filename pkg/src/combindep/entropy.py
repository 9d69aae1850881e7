"""Entropy of partitions and covers, their joins over windows, and partition-based approximation ranks."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from ._setcover import min_set_cover
from .errors import BudgetExceeded, DepthCapExceeded, PremiseFailed
from .measures import MeasureModel
from .symbolic import BorelLikeSet, CylinderSet, Partition, SubshiftSpec, admissible_assignments

DEPTH_CAP = 2 ** 18
ASSIGNMENT_CAP = 10 ** 6


def _cells(spec: SubshiftSpec, coords, cap: int = DEPTH_CAP) -> list:
    out = []
    for w in admissible_assignments(spec, coords):
        out.append(w)
        if len(out) > cap:
            raise DepthCapExceeded(f"more than {cap} cylinders on {len(coords)} coordinates")
    return out


def _window(F) -> tuple:
    if isinstance(F, int):
        return tuple(range(F))
    return tuple(F)


def atom_measures(P: Partition, m: MeasureModel) -> dict:
    """``label -> mu(atom)``."""
    acc: dict = {}
    for w, lab in P.labels.items():
        acc.setdefault(lab, []).append(m.pattern_prob(dict(zip(P.coords, w))))
    return {lab: math.fsum(ps) for lab, ps in acc.items()}


def entropy_of(masses) -> float:
    return math.fsum(-p * math.log(p) for p in masses if p > 0.0)


def shannon_entropy(P: Partition, m: MeasureModel) -> float:
    """``sum -mu(P) ln mu(P)`` over the atoms, with ``0 ln 0 = 0``."""
    return entropy_of(atom_measures(P, m).values())


def join(*parts: Partition, cap: int = DEPTH_CAP) -> Partition:
    """Common refinement; the label of a point is the tuple of its labels."""
    spec = parts[0].spec
    coords = tuple(sorted(set().union(*(p.coords for p in parts))))
    pos = {c: i for i, c in enumerate(coords)}
    idx = [[pos[c] for c in p.coords] for p in parts]
    labels = {}
    for w in _cells(spec, coords, cap):
        labels[w] = tuple(p.labels[tuple(w[i] for i in ix)] for p, ix in zip(parts, idx))
    return Partition(spec, coords, labels)


def join_over_window(P: Partition, F, cap: int = DEPTH_CAP) -> Partition:
    """``P^F``: the join of the shifted partitions ``s^{-1} P`` for ``s`` in ``F``.

    Repeated elements of ``F`` add nothing. Raises :class:`DepthCapExceeded`
    when the joined coordinates carry more than ``cap`` cylinders.
    """
    F = sorted(set(_window(F)))
    if not F:
        return Partition.trivial(P.spec)
    if F == [0]:
        return P
    return join(*(P.shifted(s) for s in F), cap=cap)


def dynamical_entropy_curve(P: Partition, m: MeasureModel, windows) -> list:
    """``H(P^F)/|F|`` for each window (an int ``n`` means ``[0, n)``)."""
    out = []
    for F in windows:
        F = _window(F)
        out.append(shannon_entropy(join_over_window(P, F), m) / len(set(F)))
    return out


def conditional_entropy(P: Partition, Q: Partition, m: MeasureModel) -> float:
    """``H(P v Q) - H(Q)``."""
    if not Q.coords:
        return shannon_entropy(P, m)
    v = shannon_entropy(join(P, Q), m) - shannon_entropy(Q, m)
    return max(v, 0.0)


def sequence_entropy_curve(P: Partition, m: MeasureModel, s, n_max: int) -> list:
    """``(1/n) H(join of s_i^{-1} P, i <= n)`` for ``n = 1..n_max``."""
    s = list(s)[:n_max]
    if len(s) < n_max:
        raise ValueError("sequence shorter than n_max")
    return [shannon_entropy(join_over_window(P, s[:n]), m) / n for n in range(1, n_max + 1)]


# -- covers -------------------------------------------------------------------

@dataclass(frozen=True)
class Cover:
    """Finite cover by unions of cylinders, checked at the coordinates its members use."""

    spec: SubshiftSpec
    members: tuple
    coords: tuple = field(default=(), compare=False)

    def __post_init__(self):
        mem = tuple(BorelLikeSet.of(x) if not isinstance(x, BorelLikeSet) else x for x in self.members)
        if not mem:
            raise ValueError("a cover needs at least one member")
        coords = tuple(sorted(set().union(*(x.coords() for x in mem)))) or (0,)
        object.__setattr__(self, "members", mem)
        object.__setattr__(self, "coords", coords)
        for w in _cells(self.spec, coords):
            a = dict(zip(coords, w))
            if not any(x.contains(a) for x in mem):
                raise ValueError(f"cylinder {w} on {coords} is not covered")

    @classmethod
    def from_partition(cls, P: Partition) -> "Cover":
        if P.coords and list(P.coords) != list(range(P.coords[0], P.coords[0] + len(P.coords))):
            raise ValueError("only interval-based partitions convert to covers")
        members = []
        for lab, words in sorted(P.atoms().items(), key=lambda kv: repr(kv[0])):
            members.append(BorelLikeSet(tuple(CylinderSet(w, P.coords[0] if P.coords else 0)
                                              for w in words)))
        return cls(P.spec, tuple(members))

    def member_masks(self) -> list:
        """For each base cell, the set of member indices containing it."""
        out = []
        for w in _cells(self.spec, self.coords):
            a = dict(zip(self.coords, w))
            out.append(frozenset(j for j, x in enumerate(self.members) if x.contains(a)))
        return out


class _JoinedCover:
    """Cells of the joined cover ``U^F`` with their masses and the members holding each."""

    def __init__(self, U: Cover, F, m: MeasureModel, cap=DEPTH_CAP):
        F = sorted(set(_window(F)))
        self.F = F
        coords = tuple(sorted({c + s for s in F for c in U.coords}))
        pos = {c: i for i, c in enumerate(coords)}
        self.cells = _cells(U.spec, coords, cap)
        self.mass = [m.pattern_prob(dict(zip(coords, w))) for w in self.cells]
        per_s = []
        for s in F:
            ix = [pos[c + s] for c in U.coords]
            per_s.append([frozenset(j for j, x in enumerate(U.members)
                                    if x.contains(dict(zip(U.coords, (w[i] for i in ix)))))
                          for w in self.cells])
        # choices[c] = tuple over s of member sets
        self.choices = [tuple(ps[c] for ps in per_s) for c in range(len(self.cells))]
        self.n_members = len(U.members)

    def member_masks(self) -> dict:
        """Bitmask of cells for each joined member (tuple of member indices), nonempty only."""
        masks: dict = {}
        for c, ch in enumerate(self.choices):
            for tup in itertools.product(*(sorted(x) for x in ch)):
                masks[tup] = masks.get(tup, 0) | (1 << c)
        return masks


def _partial_cover(masks: list, weights: list, need: float, budget: int) -> int:
    """Fewest masks whose union has weight at least ``need``."""
    if need <= 1e-12:
        return 0

    def wt(mask):
        return math.fsum(weights[i] for i in range(len(weights)) if mask >> i & 1)

    uniq = sorted(set(masks), key=lambda x: -wt(x))
    kept = [u for i, u in enumerate(uniq) if not any(u | v == v and u != v for v in uniq)]
    full = 0
    for i, w in enumerate(weights):
        if w > 0:
            full |= 1 << i
    if wt(full) - need <= 1e-12:
        return len(min_set_cover(full, kept))
    tried = 0
    for j in range(1, len(kept) + 1):
        for combo in itertools.combinations(kept, j):
            tried += 1
            if tried > budget:
                raise BudgetExceeded("partial cover budget exhausted", partial=None)
            u = 0
            for x in combo:
                u |= x
            if wt(u) >= need - 1e-12:
                return j
    raise ValueError("members do not cover enough mass")


def cover_number_N(U: Cover, F, delta: float, m: MeasureModel, budget: int = ASSIGNMENT_CAP) -> int:
    """Fewest members of ``U^F`` covering some ``D`` with ``mu(D) >= 1 - delta``.

    ``D`` ranges over complements of unions of cells of the joined
    coordinates, so the best ``D`` drops exactly the cells left uncovered. The
    result is exact for that family and an upper bound on the Borel minimum.
    """
    jc = _JoinedCover(U, F, m)
    masks = list(jc.member_masks().values())
    return _partial_cover(masks, jc.mass, 1.0 - delta, budget)


@dataclass
class HMinus:
    window: tuple
    value: float
    exact: bool


def _assignment_entropy(jc: _JoinedCover, limit: int) -> tuple:
    """Least entropy of a partition obtained by sending each cell to a member containing it."""
    opts = []
    for c, ch in enumerate(jc.choices):
        if jc.mass[c] > 0:
            opts.append((c, list(itertools.product(*(sorted(x) for x in ch)))))
    total = 1
    for _, o in opts:
        total *= len(o)
        if total > limit:
            break
    if total <= limit:
        best = math.inf
        for pick in itertools.product(*(o for _, o in opts)):
            acc: dict = {}
            for (c, _), tup in zip(opts, pick):
                acc[tup] = acc.get(tup, 0.0) + jc.mass[c]
            best = min(best, entropy_of(acc.values()))
        return (0.0 if best is math.inf else best), True
    # greedy: repeatedly give the heaviest member all of its unassigned cells
    left = {c for c, _ in opts}
    members: dict = {}
    for c, o in opts:
        for tup in o:
            members.setdefault(tup, set()).add(c)
    groups = []
    while left:
        tup = max(members, key=lambda t: (math.fsum(jc.mass[c] for c in members[t] & left), t))
        got = members[tup] & left
        groups.append(math.fsum(jc.mass[c] for c in got))
        left -= got
    return entropy_of(groups), False


def h_minus_proxy(U: Cover, m: MeasureModel, windows, limit: int = ASSIGNMENT_CAP) -> list:
    """``H(U^F)/|F|`` per window, the infimum taken over cell-level refinements.

    Exact when at most ``limit`` assignments exist, otherwise a greedy value
    flagged as an upper bound (``exact=False``).
    """
    out = []
    for F in windows:
        F = tuple(sorted(set(_window(F))))
        jc = _JoinedCover(U, F, m)
        h, exact = _assignment_entropy(jc, limit)
        out.append(HMinus(F, h / len(F), exact))
    return out


def refining_partitions(U: Cover, limit: int = 4096):
    """Partitions at the cover's coordinates whose atoms each sit inside a member."""
    cells = _cells(U.spec, U.coords)
    masks = U.member_masks()
    total = math.prod(len(x) for x in masks)
    if total > limit:
        # fall back to the first-member choice only
        yield Partition(U.spec, U.coords, {w: min(x) for w, x in zip(cells, masks)})
        return
    for pick in itertools.product(*(sorted(x) for x in masks)):
        yield Partition(U.spec, U.coords, dict(zip(cells, pick)))


def h_plus_comparison(U: Cover, m: MeasureModel, windows, limit: int = 4096) -> dict:
    """Both proxies side by side; whether they agree in the limit is an open question, so nothing is asserted."""
    hm = h_minus_proxy(U, m, windows)
    curves = [dynamical_entropy_curve(P, m, windows) for P in refining_partitions(U, limit)]
    hp = [min(c[i] for c in curves) for i in range(len(windows))]
    return {"h_minus": [h.value for h in hm], "h_minus_exact": [h.exact for h in hm],
            "h_plus": hp, "partitions_tried": len(curves)}


# -- approximation rank ---------------------------------------------------------

@dataclass
class CpaReport:
    n: int
    delta: float
    rank: int
    dim: int
    achieved_error: float
    bound_ok: bool
    entropy: float = 0.0
    tolerance: float = 0.0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _symbol_values(P: Partition, values=None) -> dict:
    labs = sorted(set(P.labels.values()), key=repr)
    if values is not None:
        return dict(values)
    if len(labs) == 1:
        return {labs[0]: 0.0}
    return {lab: i / (len(labs) - 1) for i, lab in enumerate(labs)}


def _window_atoms(P: Partition, m, n) -> dict:
    """Atoms of ``P^[0,n)`` keyed by the tuple of ``P``-labels at each shift."""
    if n == 1:
        return {(lab,): p for lab, p in atom_measures(P, m).items()}
    return atom_measures(join_over_window(P, range(n)), m)


def _remainder_error(masses, vals, n, rest) -> float:
    """Largest L2 error over the shifted functions when the atoms in ``rest`` are merged."""
    mr = math.fsum(masses[a] for a in rest)
    if mr <= 0:
        return 0.0
    err = 0.0
    for i in range(n):
        avg = math.fsum(masses[a] * vals[a[i]] for a in rest) / mr
        e2 = math.fsum(masses[a] * (vals[a[i]] - avg) ** 2 for a in rest)
        err = max(err, math.sqrt(e2))
    return err


def cpa_from_partition(P: Partition, m: MeasureModel, n: int, delta: float, values=None) -> CpaReport:
    """Finite-dimensional approximation of the shifts of a ``P``-measurable function.

    Atoms of ``P^[0,n)`` with ``mu > e^{-n delta}`` are kept, the rest merge
    into one block; the conditional expectation onto that algebra is applied
    to ``f o shift^i`` for ``i < n``, where ``f`` takes ``values[label]``
    (labels evenly spaced in ``[0, 1]`` by default). ``rank`` counts the kept
    atoms plus one; ``dim`` omits the extra block when it is null.
    """
    masses = _window_atoms(P, m, n)
    H = entropy_of(masses.values())
    if H > n * delta ** 2 + 1e-12:
        raise PremiseFailed(f"H(P^[0,{n}))/n = {H / n:.6g} exceeds delta^2 = {delta ** 2:.6g}",
                            entropy_per_step=H / n)
    vals = _symbol_values(P, values)
    cut = math.exp(-n * delta)
    big = [a for a, p in masses.items() if p > cut]
    rest = [a for a, p in masses.items() if p <= cut]
    err = _remainder_error(masses, vals, n, rest)
    rank = len(big) + 1
    dim = len(big) + (1 if math.fsum(masses[a] for a in rest) > 0 else 0)
    tol = math.sqrt(delta ** 2 + 4 * delta)
    ok = rank <= math.exp(n * delta) + 1 and err <= tol
    return CpaReport(n, delta, rank, dim, err, ok, H, tol)


def _greedy_rank(P: Partition, m, n, delta, values=None) -> int:
    """Dimension of the algebra from merging the lightest atoms while the error stays below tolerance."""
    masses = _window_atoms(P, m, n)
    vals = _symbol_values(P, values)
    tol = math.sqrt(delta ** 2 + 4 * delta)
    order = sorted((a for a, p in masses.items() if p > 0), key=lambda a: (masses[a], repr(a)))
    rest = []
    for a in order:
        if _remainder_error(masses, vals, n, rest + [a]) < tol:
            rest.append(a)
        else:
            break
    pos = sum(1 for p in masses.values() if p > 0)
    return pos - len(rest) + (1 if rest else 0)


def hcpa_upper_estimate(partitions, m: MeasureModel, delta: float, windows) -> list:
    """``(1/n) ln rank`` per window from the best of the constructions tried; an upper-bound proxy."""
    parts = list(partitions)
    P = parts[0] if len(parts) == 1 else join(*parts)
    out = []
    for F in windows:
        n = len(_window(F))
        dims = [_greedy_rank(P, m, n, delta)]
        try:
            dims.append(cpa_from_partition(P, m, n, delta).dim)
        except PremiseFailed:
            pass
        d = max(1, min(dims))
        out.append({"n": n, "value": math.log(d) / n, "rank": d, "upper_bound": True})
    return out
