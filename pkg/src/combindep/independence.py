"""Independence sets for tuples of cylinder unions, and the densities built from them.

A set ``J`` of integers is an independence set for ``A = (A_1, ..., A_k)``
relative to ``D`` when every assignment ``sigma: J -> {1..k}`` is realised by a
point ``x`` with ``x`` in ``D_s`` and the shift of ``x`` by ``s`` in
``A_sigma(s)`` for every ``s`` in ``J``. Subsets of independence sets are
independence sets, which is what makes the branch-and-bound below exact.

Two witness semantics are supported. In language mode (full shifts and SFTs) a
witness is any segment of a point of the subshift. In orbit-sample mode the
candidate points are the shifts of one supplied segment, and a witness records
the shift that produced it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BudgetExceeded, NonDisjointNeighbourhoods, UnsupportedSpec
from .measures import MeasureModel, union_measure
from .symbolic import (
    BorelLikeSet,
    CylinderSet,
    SetTuple,
    SubshiftSpec,
    Witness,
    _expand,
    admissible_assignments,
    as_word,
    pattern_admissible,
    sample_feasible,
    solve_constraints,
    word_str,
)

DEFAULT_CAP = 2 ** 20
EXACT_FAMILY_LIMIT = 4096
_TOL = 1e-12


# -- constraint models -------------------------------------------------------

def _cyl_key(c) -> tuple:
    if isinstance(c, CylinderSet):
        return (c.anchor, c.word)
    a, w = c
    return (int(a), as_word(w))


class ConstraintModel:
    """The map ``s -> D_s``; each ``D_s`` is the complement of a union of cylinders."""

    kind = "abstract"

    def removed(self, s: int) -> tuple:
        raise NotImplementedError

    def shifted(self, t: int) -> "ConstraintModel":
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Everything(ConstraintModel):
    kind = "everything"

    def removed(self, s):
        return ()

    def shifted(self, t):
        return self

    def describe(self):
        return {"kind": "everything"}


@dataclass(frozen=True)
class Fixed(ConstraintModel):
    """One set ``D`` used at every group element."""

    removal: tuple = ()
    kind = "fixed"

    def __post_init__(self):
        object.__setattr__(self, "removal", tuple(sorted({_cyl_key(c) for c in self.removal})))

    def removed(self, s):
        return self.removal

    def shifted(self, t):
        return Fixed(tuple((a + t, w) for a, w in self.removal))

    def measure(self, m: MeasureModel) -> float:
        return union_measure(m, self.removal)

    def describe(self):
        return {"kind": "fixed", "removed": [[a, word_str(w)] for a, w in self.removal]}


@dataclass(frozen=True)
class PerElement(ConstraintModel):
    """A separate removal list for each element; elements not listed keep ``D_s = X``."""

    removals: tuple = ()
    kind = "per-element"

    def __post_init__(self):
        items = dict(self.removals) if not isinstance(self.removals, dict) else self.removals
        norm = tuple(sorted((int(s), tuple(sorted({_cyl_key(c) for c in cs})))
                            for s, cs in dict(items).items()))
        object.__setattr__(self, "removals", norm)

    def removed(self, s):
        return dict(self.removals).get(s, ())

    def shifted(self, t):
        return PerElement({s + t: tuple((a + t, w) for a, w in cs) for s, cs in self.removals})

    def describe(self):
        return {"kind": "per-element",
                "removed": {str(s): [[a, word_str(w)] for a, w in cs] for s, cs in self.removals}}


EVERYTHING = Everything()


# -- certificates -------------------------------------------------------------

@dataclass
class IndependenceCertificate:
    """Witnesses for every assignment on ``J``. Assignments use symbols 1..k."""

    J: tuple
    witnesses: dict
    tuple_: SetTuple = field(repr=False)
    D: ConstraintModel = field(default=EVERYTHING, repr=False)
    mode: str = "language"

    def __bool__(self):
        return True

    def __len__(self):
        return len(self.J)

    def revalidate(self, spec: SubshiftSpec, segment: Witness | None = None) -> bool:
        """Re-check every stored witness from scratch."""
        k = self.tuple_.k
        if len(self.witnesses) != k ** len(self.J):
            return False
        for sigma in itertools.product(range(1, k + 1), repeat=len(self.J)):
            w = self.witnesses.get(sigma)
            if w is None or not witness_ok(w, self.J, sigma, self.tuple_, self.D):
                return False
            if segment is not None:
                t = w.orbit_shift
                if t is None or not segment.covers(range(w.start + t, w.start + t + len(w.word))):
                    return False
                if any(segment.at(w.start + t + i) != a for i, a in enumerate(w.word)):
                    return False
            elif not spec.is_generator and not spec.in_language(w.word):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "J": list(self.J),
            "mode": self.mode,
            "D": self.D.describe(),
            "witnesses": [
                {"sigma": list(s), "start": w.start, "word": word_str(w.word),
                 **({"orbit_shift": w.orbit_shift} if w.orbit_shift is not None else {})}
                for s, w in sorted(self.witnesses.items())
            ],
        }


@dataclass(frozen=True)
class NotIndependent:
    """Lexicographically least assignment (symbols 1..k) with no witness."""

    sigma: tuple
    J: tuple = ()

    def __bool__(self):
        return False


def _meets(w: Witness, s: int, comp: BorelLikeSet) -> bool:
    for c in comp.cylinders:
        req = c.constraints(s)
        if w.covers(req) and all(w.at(p) == a for p, a in req.items()):
            return True
    return False


def _avoids(w: Witness, excluded) -> bool:
    for a, word in excluded:
        span = range(a, a + len(word))
        if not w.covers(span) or all(w.at(p) == b for p, b in zip(span, word)):
            return False
    return True


def witness_ok(w: Witness, J, sigma, A: SetTuple, D: ConstraintModel) -> bool:
    """True if ``w`` decides and satisfies every requirement of ``sigma`` on ``J``."""
    for s, i in zip(J, sigma):
        if not _meets(w, s, A[i - 1]) or not _avoids(w, D.removed(s)):
            return False
    return True


# -- solver -------------------------------------------------------------------

class IndependenceSolver:
    """Feasibility oracle for one (spec, tuple, D), with a translation-normalised cache.

    The cache is only used in language mode, where feasibility is invariant
    under translating all constraints together.
    """

    def __init__(self, spec: SubshiftSpec, A: SetTuple, D: ConstraintModel = EVERYTHING,
                 segment: Witness | None = None, cap: int = DEFAULT_CAP):
        if not isinstance(A, SetTuple):
            A = SetTuple(tuple(A))
        if spec.is_generator and segment is None:
            raise UnsupportedSpec("generator specs need a sampled segment (orbit-sample mode)")
        self.spec, self.A, self.D, self.segment, self.cap = spec, A, D, segment, cap
        self.mode = "orbit-sample" if segment is not None else "language"
        self._cache: dict = {}
        self.checks = 0

    def _solve(self, required: dict, excluded: tuple):
        if self.segment is not None:
            return sample_feasible(self.segment, required, excluded)
        pts = list(required) + [a for a, _ in excluded]
        o = min(pts) if pts else 0
        key = (tuple(sorted((p - o, a) for p, a in required.items())),
               tuple(sorted((a - o, w) for a, w in excluded)))
        if key not in self._cache:
            norm = {p - o: a for p, a in required.items()}
            self._cache[key] = solve_constraints(self.spec, norm, [(a - o, w) for a, w in excluded])
        w = self._cache[key]
        return None if w is None else Witness(w.start + o, w.word)

    def excluded_for(self, J) -> tuple:
        out = set()
        for s in J:
            out.update(self.D.removed(s))
        return tuple(sorted(out))

    def witness(self, J, sigma, excluded=None):
        """A witness for ``sigma`` (symbols 1..k) on ``J``, or ``None``."""
        self.checks += 1
        excluded = self.excluded_for(J) if excluded is None else excluded
        cons = [(s, self.A[i - 1]) for s, i in zip(J, sigma)]
        for required in _expand(cons):
            w = self._solve(required, excluded)
            if w is not None:
                return w
        return None

    def check(self, J, parent: IndependenceCertificate | None = None):
        """Certificate for ``J`` or the least failing assignment.

        ``parent`` may hold a certificate for ``J`` minus its last-added element;
        its witnesses are reused whenever they already decide the new element.
        """
        J = tuple(J)
        k = self.A.k
        if k ** len(J) > self.cap:
            raise BudgetExceeded(f"{k}^{len(J)} assignments exceed the cap {self.cap}")
        excluded = self.excluded_for(J)
        reuse = None
        if parent is not None:
            extra = [s for s in J if s not in parent.J]
            if len(extra) == 1 and len(J) == len(parent.J) + 1:
                reuse = (J.index(extra[0]), parent)
        wits = {}
        for sigma in itertools.product(range(1, k + 1), repeat=len(J)):
            w = None
            if reuse is not None:
                pos, par = reuse
                cand = par.witnesses.get(sigma[:pos] + sigma[pos + 1:])
                if cand is not None and witness_ok(cand, J, sigma, self.A, self.D):
                    w = cand
            if w is None:
                w = self.witness(J, sigma, excluded)
            if w is None:
                return NotIndependent(sigma, J)
            wits[sigma] = w
        return IndependenceCertificate(J, wits, self.A, self.D, self.mode)


def is_independence_set(spec, A, J, D: ConstraintModel = EVERYTHING, *,
                        segment: Witness | None = None, cap: int = DEFAULT_CAP):
    """Certificate with ``k^|J|`` witnesses, or :class:`NotIndependent` (falsy)."""
    return IndependenceSolver(spec, A, D, segment, cap).check(tuple(sorted(set(J))))


@dataclass
class MaxIndependence:
    J: tuple
    certificate: IndependenceCertificate
    lower_bound: bool = False
    checks: int = 0

    @property
    def size(self) -> int:
        return len(self.J)


def max_independence_subset(spec, A, F, D: ConstraintModel = EVERYTHING, *,
                            segment: Witness | None = None, cap: int = DEFAULT_CAP,
                            budget: int | None = None, solver: IndependenceSolver | None = None
                            ) -> MaxIndependence:
    """Largest independence subset of ``F``; ties go to the lexicographically least.

    Include-first DFS over ``F`` in increasing order with an incumbent. A branch
    is cut once it cannot strictly beat the incumbent, so the first optimum
    found is the lexicographically least one. ``budget`` caps the total number
    of fresh feasibility searches; hitting it raises :class:`BudgetExceeded`
    whose ``partial`` is the incumbent flagged as a lower bound.
    """
    sv = solver or IndependenceSolver(spec, A, D, segment, cap)
    F = sorted(set(F))
    empty = sv.check(())
    if not empty:
        # no point at all meets the constraints; only the empty set qualifies vacuously
        return MaxIndependence((), IndependenceCertificate((), {}, sv.A, sv.D, sv.mode), False, sv.checks)
    singles = {}
    for s in F:
        c = sv.check((s,))
        if c:
            singles[s] = c
    elems = [s for s in F if s in singles]
    best = [(), empty]
    start = sv.checks

    def over_budget():
        return budget is not None and sv.checks - start > budget

    def rec(i, cur, cert):
        if over_budget():
            raise BudgetExceeded("search budget exhausted",
                                 partial=MaxIndependence(best[0], best[1], True, sv.checks))
        if len(cur) > len(best[0]):
            best[0], best[1] = cur, cert
        if i == len(elems) or len(cur) + len(elems) - i <= len(best[0]):
            return
        s = elems[i]
        nxt = cur + (s,)
        try:
            c = singles[s] if not cur else sv.check(nxt, parent=cert)
        except BudgetExceeded as e:
            raise BudgetExceeded(str(e), partial=MaxIndependence(best[0], best[1], True, sv.checks))
        if c:
            rec(i + 1, nxt, c)
        if len(cur) + len(elems) - i - 1 > len(best[0]):
            rec(i + 1, cur, cert)

    rec(0, (), empty)
    return MaxIndependence(best[0], best[1], False, sv.checks)


# -- constraint families ------------------------------------------------------

@dataclass(frozen=True)
class ExactAtoms:
    """All admissible removals of depth-``r`` cylinders near the window.

    Candidate atoms are ``[w]_t`` for admissible ``r``-words ``w`` and anchors
    ``t`` overlapping the hull of the positions the tuple constrains, so the
    family moves with the window. Only maximal removal sets are evaluated; more
    removal can only shrink independence sets. Falls back to
    :class:`GreedyAdversary` beyond ``limit`` admissible sets.
    """

    r: int = 1
    limit: int = EXACT_FAMILY_LIMIT

    def describe(self):
        return {"kind": "exact-atoms", "r": self.r}


@dataclass(frozen=True)
class GreedyAdversary:
    """Repeatedly remove the atom containing the most certificate witnesses."""

    r: int = 1
    passes: int = 8

    def describe(self):
        return {"kind": "greedy-adversary", "r": self.r, "passes": self.passes}


def constrained_hull(A: SetTuple, F) -> tuple:
    lo = hi = None
    for c in (c for comp in A.components for c in comp.cylinders):
        for s in F:
            a, b = s + c.anchor, s + c.anchor + len(c.word) - 1
            lo = a if lo is None else min(lo, a)
            hi = b if hi is None else max(hi, b)
    if lo is None:
        lo = hi = min(F) if F else 0
    return lo, hi


def candidate_atoms(spec, A, F, r: int) -> list:
    lo, hi = constrained_hull(A, F)
    if spec.is_generator:
        words = list(itertools.product(range(spec.k), repeat=r))
    else:
        words = list(admissible_assignments(spec, range(r)))
    return [(t, w) for t in range(lo - r + 1, hi + 1) for w in words]


def _admissible(m, atoms, delta) -> bool:
    if not atoms:
        return True
    return union_measure(m, atoms) <= delta + _TOL


def _split_null(m, atoms):
    null, pos = [], []
    for t, w in atoms:
        (null if m.word_prob(w, t) <= 0.0 else pos).append((t, w))
    return null, pos


def maximal_removals(m: MeasureModel, atoms, delta: float, limit: int = EXACT_FAMILY_LIMIT):
    """Maximal admissible removal sets, or ``None`` if there are more than ``limit`` admissible sets.

    Null atoms belong to every maximal set. The rest are enumerated by DFS,
    pruning supersets of inadmissible sets.
    """
    null, pos = _split_null(m, atoms)
    found = []
    count = [0]

    def rec(i, cur):
        if count[0] > limit:
            return
        if i == len(pos):
            count[0] += 1
            found.append(cur)
            return
        nxt = cur + [pos[i]]
        if _admissible(m, null + nxt, delta):
            rec(i + 1, nxt)
        rec(i + 1, cur)

    rec(0, [])
    if count[0] > limit:
        return None
    sets = [frozenset(s) for s in found]
    maximal = []
    for s in sets:
        if not any(pos_atom not in s and _admissible(m, null + sorted(s | {pos_atom}), delta)
                   for pos_atom in pos):
            maximal.append(tuple(sorted(set(null) | s)))
    return sorted(set(maximal))


@dataclass
class DensityReport:
    window: tuple
    delta: float
    phi_hat: int
    density: float
    mode: str
    family: dict
    exact: bool
    removal: tuple = ()
    phi_hat_prime: int | None = None
    J: tuple = ()
    evaluated: int = 0

    def to_dict(self) -> dict:
        out = {
            "window": list(self.window), "delta": self.delta, "phi_hat": self.phi_hat,
            "density": self.density, "mode": self.mode, "family": self.family,
            "exact_family": self.exact, "bound": "upper (min over an explicit sub-family)",
            "minimising_removal": [[a, word_str(w)] for a, w in self.removal],
            "J": list(self.J), "removal_sets_evaluated": self.evaluated,
        }
        if self.phi_hat_prime is not None:
            out["phi_hat_prime"] = self.phi_hat_prime
        return out


def _greedy(spec, A, F, m, delta, atoms, passes, segment, cap, budget):
    null, pos = _split_null(m, atoms)
    removed = list(null)
    res = max_independence_subset(spec, A, F, Fixed(removed), segment=segment, cap=cap, budget=budget)
    best = (res.size, tuple(sorted(removed)), res.J)
    evaluated = 1
    for _ in range(passes):
        hits = []
        for t, w in pos:
            if (t, w) in removed:
                continue
            n = sum(1 for wit in res.certificate.witnesses.values()
                    if wit.covers(range(t, t + len(w)))
                    and all(wit.at(t + j) == a for j, a in enumerate(w)))
            hits.append((-n, t, w))
        hits.sort()
        for _, t, w in hits:
            if _admissible(m, removed + [(t, w)], delta):
                removed.append((t, w))
                break
        else:
            break
        res = max_independence_subset(spec, A, F, Fixed(removed), segment=segment, cap=cap, budget=budget)
        evaluated += 1
        if res.size < best[0]:
            best = (res.size, tuple(sorted(removed)), res.J)
    return best, evaluated


def _phi_prime(spec, A, F, m, delta, removals, phi_fixed, segment, cap, budget):
    """Min over per-element removal maps built from the same maximal sets.

    The maps tried are: every constant map, every co-moving map ``s -> R + s``,
    and, when small enough, every product choice of one set per element.
    """
    best = phi_fixed
    F = sorted(F)
    s0 = F[0] if F else 0
    for R in removals:
        D = PerElement({s: tuple((a + s - s0, w) for a, w in R) for s in F})
        best = min(best, max_independence_subset(spec, A, F, D, segment=segment, cap=cap,
                                                 budget=budget).size)
    if len(removals) > 1 and len(removals) ** len(F) <= EXACT_FAMILY_LIMIT:
        for choice in itertools.product(removals, repeat=len(F)):
            D = PerElement(dict(zip(F, choice)))
            best = min(best, max_independence_subset(spec, A, F, D, segment=segment, cap=cap,
                                                     budget=budget).size)
    return best


def phi_density(spec, A, F, delta: float, m: MeasureModel, family=None, *, prime: bool = False,
                segment: Witness | None = None, cap: int = DEFAULT_CAP,
                budget: int | None = None) -> DensityReport:
    """``phi_hat = min over the family of the max independence subset of F``.

    The family is a sub-collection of all admissible ``D``, so ``phi_hat`` is an
    upper bound on the true minimum. With ``prime=True`` the per-element value is
    also computed over maps that include all constant maps, hence never exceeds
    ``phi_hat``.
    """
    if not isinstance(A, SetTuple):
        A = SetTuple(tuple(A))
    family = family or ExactAtoms(1)
    F = tuple(sorted(set(F)))
    if not F:
        raise ValueError("window must be nonempty")
    mode = "orbit-sample" if segment is not None else "language"
    atoms = candidate_atoms(spec, A, F, family.r)
    removals = None
    if isinstance(family, ExactAtoms):
        removals = maximal_removals(m, atoms, delta, family.limit)
    exact = removals is not None
    if exact:
        best = None
        for R in removals:
            res = max_independence_subset(spec, A, F, Fixed(R), segment=segment, cap=cap, budget=budget)
            if best is None or res.size < best[0]:
                best = (res.size, R, res.J)
        evaluated = len(removals)
    else:
        passes = family.passes if isinstance(family, GreedyAdversary) else 8
        best, evaluated = _greedy(spec, A, F, m, delta, atoms, passes, segment, cap, budget)
    phi, R, J = best
    rep = DensityReport(F, delta, phi, phi / len(F), mode, family.describe(), exact, R,
                        J=J, evaluated=evaluated)
    if prime:
        pool = removals if exact else [R]
        rep.phi_hat_prime = _phi_prime(spec, A, F, m, delta, pool, phi, segment, cap, budget)
        assert rep.phi_hat_prime <= rep.phi_hat
    return rep


def upper_density_estimate(spec, A, delta, m, windows, family=None, **kw) -> dict:
    """Per-window ``phi_hat(F)/|F|``; the max is the upper-density proxy, the min the lower."""
    if not windows:
        raise ValueError("need at least one window")
    reps = [phi_density(spec, A, tuple(F), delta, m, family, **kw) for F in windows]
    ds = [r.density for r in reps]
    return {"reports": reps, "densities": ds, "max": max(ds), "min": min(ds)}


def sequential_density_estimate(spec, A, delta, m, index_sets, family=None, **kw) -> dict:
    """The same computation over arbitrary finite index sets of increasing size."""
    sets = [tuple(sorted(set(S))) for S in index_sets]
    sizes = [len(S) for S in sets]
    if not sets or any(b <= a for a, b in zip(sizes, sizes[1:])) or sizes[0] == 0:
        raise ValueError("index sets must be nonempty with strictly increasing cardinality")
    reps = [phi_density(spec, A, S, delta, m, family, **kw) for S in sets]
    ds = [r.density for r in reps]
    return {"reports": reps, "densities": ds, "limsup_proxy": max(ds[len(ds) // 2:])}


def _germ_cylinder(spec, germ, d):
    w = as_word(germ)
    if len(w) % 2 == 0:
        raise ValueError("germs are central words of odd length 2r+1")
    r = len(w) // 2
    if d > r:
        raise ValueError(f"germ of radius {r} cannot give depth {d}")
    return CylinderSet(w[r - d:r + d + 1], -d)


def detect_ie_pair(spec, m, x1, x2, r: int, delta: float, windows, *, threshold: float = 0.01,
                   family=None, **kw) -> dict:
    """Finite-scale IE-pair proxy for two points given by their central words.

    For each depth ``d = 0..r`` the pair of depth-``d`` neighbourhoods is run
    through :func:`upper_density_estimate`. The verdict uses the deepest level
    and the largest window. This is evidence at one scale, not a limit.
    """
    levels = []
    for d in range(r + 1):
        c1, c2 = _germ_cylinder(spec, x1, d), _germ_cylinder(spec, x2, d)
        if c1.word == c2.word:
            raise NonDisjointNeighbourhoods(f"neighbourhoods coincide at depth {d}")
        if not spec.is_generator:
            for c in (c1, c2):
                if not pattern_admissible(spec, c.constraints()):
                    raise NonDisjointNeighbourhoods(
                        f"cylinder {word_str(c.word)} is empty, so no disjoint pair of nonempty "
                        "neighbourhoods exists")
        est = upper_density_estimate(spec, SetTuple.of(c1, c2), delta, m, windows, family, **kw)
        levels.append({"depth": d, "words": [word_str(c1.word), word_str(c2.word)],
                       "densities": est["densities"], "max": est["max"], "min": est["min"]})
    final = levels[-1]["densities"][-1]
    return {
        "verdict": "POSITIVE" if final >= threshold else "NOT_DETECTED",
        "density": final,
        "threshold": threshold,
        "levels": levels,
        "note": "finite-scale proxy over the listed windows, not a limit",
    }


def split_selection(spec, cert: IndependenceCertificate, parts, *, segment=None,
                    cap: int = DEFAULT_CAP) -> dict:
    """Split the first component into ``parts`` and keep the better branch.

    ``cert`` certifies the tuple whose first component is the union of ``parts``.
    Each branch tuple replaces that component by one part; the branch with the
    largest exact independence subset of ``cert.J`` wins (lowest index on ties).
    """
    rest = cert.tuple_.components[1:]
    best = None
    sizes = []
    for b, part in enumerate(parts, start=1):
        A = SetTuple((BorelLikeSet.of(part),) + tuple(rest))
        res = max_independence_subset(spec, A, cert.J, cert.D, segment=segment, cap=cap)
        sizes.append(res.size)
        if best is None or res.size > best[1].size:
            best = (b, res)
    b, res = best
    n = len(cert.J)
    return {"J": res.J, "branch": b, "ratio": (res.size / n) if n else 1.0,
            "branch_sizes": sizes, "certificate": res.certificate}
