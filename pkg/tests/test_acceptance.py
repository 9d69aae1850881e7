"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run ``python tests/test_acceptance.py`` for the plain report, or use pytest,
which also lists the lines in its terminal summary.
"""
import itertools
import math
import random
import time

import numpy as np
import pytest

from combindep.entropy import cpa_from_partition, dynamical_entropy_curve, join_over_window, shannon_entropy
from combindep.independence import ExactAtoms, is_independence_set, max_independence_subset, phi_density
from combindep.l1 import (CylinderFunction, FunctionFamily, family_from_certificate, l1_constant,
                          max_l1_subset, rosenthal_dor_bound)
from combindep.measures import Bernoulli
from combindep.serialize import dumps
from combindep.shattering import PatternSet, cover_number
from combindep.symbolic import BorelLikeSet, Partition, SetTuple, SubshiftSpec, cyl, symbol_partition
from combindep.systems import golden_mean_system
from combindep.tame import build_tame_example, check_schedule
from combindep.verify import cover_bound_suite, sauer

from oracles import max_independent

FULL2 = SubshiftSpec.full_shift(2)
GOLDEN, PARRY = golden_mean_system()
A01 = SetTuple.of(cyl("0"), cyl("1"))
LN2 = math.log(2)
LN_PHI = math.log((1 + math.sqrt(5)) / 2)

LINES = []


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def _random_tuple(rng):
    comps = []
    for _ in range(2):
        comps.append(BorelLikeSet.of(*[cyl("".join(rng.choice("01") for _ in range(rng.randint(1, 2))),
                                           rng.randint(-1, 1)) for _ in range(rng.randint(1, 2))]))
    return SetTuple(tuple(comps))


def entropy_exactness():
    def work():
        bern = dynamical_entropy_curve(symbol_partition(FULL2), Bernoulli((0.5, 0.5)), range(1, 17))
        gold = dynamical_entropy_curve(symbol_partition(GOLDEN), PARRY, [14])[0]
        return max(abs(v - LN2) for v in bern), abs(gold - LN_PHI), abs(PARRY.entropy_rate() - LN_PHI)
    (bern_err, gold_err, rate_err), dt = timed(work)
    ok = bern_err <= 1e-12 and gold_err <= 5e-3 and rate_err <= 1e-9 and dt < 10
    return ok, (f"bernoulli max err {bern_err:.2e}; golden n=14 err {gold_err:.6f} (tol 5e-3); "
                f"rate err {rate_err:.2e}; {dt:.2f}s")


def km_exhaustive():
    rep, dt = timed(lambda: sauer(4, 2))
    ok = rep["instances"] == 65536 and rep["failures"] == 0 and dt < 60
    return ok, f"{rep['instances']} subsets, {rep['failures']} failures, {dt:.2f}s"


def cover_number_bound():
    def work():
        reps = [cover_bound_suite(3, 2), cover_bound_suite(2, 3)]
        equal = all(cover_number(PatternSet.full(n, 2)) == 2 ** n for n in range(1, 4))
        return reps, equal
    (reps, equal), dt = timed(work)
    inst = [r["instances"] for r in reps]
    fails = sum(r["failures"] for r in reps)
    ok = inst == [256, 512] and fails == 0 and equal and dt < 30
    return ok, f"instances {inst}, {fails} failures, equality on full cubes {equal}, {dt:.2f}s"


def solver_vs_oracle():
    bad = []
    for n in range(1, 11):
        got = max_independence_subset(GOLDEN, A01, range(n)).J
        want = max_independent(2, ("11",), [[(0, (0,))], [(0, (1,))]], range(n))
        if got != want:
            bad.append((n, got, want))
    return not bad, f"n = 1..10, mismatches {bad}"


def shift_covariance():
    rng = random.Random(5)
    bad = 0
    for _ in range(100):
        A = _random_tuple(rng)
        F = sorted(rng.sample(range(6), rng.randint(1, 3)))
        delta = rng.choice([0.0, 0.1, 0.25, 0.5])
        t = rng.randint(-50, 50)
        a = phi_density(GOLDEN, A, F, delta, PARRY, ExactAtoms(1)).phi_hat
        b = phi_density(GOLDEN, A, [s + t for s in F], delta, PARRY, ExactAtoms(1)).phi_hat
        bad += a != b
    return bad == 0, f"100 instances, {bad} disagreements"


def _random_certificate_family(rng):
    spec = rng.choice([FULL2, GOLDEN])
    words2 = [w for w in itertools.product((0, 1), repeat=2) if spec.in_language(w)]
    rng.shuffle(words2)
    cut = rng.randint(1, len(words2) - 1)
    S1, S2 = words2[:cut], words2[cut:]
    lo1 = rng.uniform(-1, 0)
    b1 = (lo1, lo1 + rng.uniform(0, 0.2))
    lo2 = b1[1] + rng.uniform(0.5, 1.0)
    b2 = (lo2, lo2 + rng.uniform(0, 0.2))
    vals = {w: rng.uniform(*(b1 if w in S1 else b2)) for w in words2}
    A = SetTuple((BorelLikeSet.of(*[cyl("".join(map(str, w))) for w in S1]),
                  BorelLikeSet.of(*[cyl("".join(map(str, w))) for w in S2])))
    F = sorted(rng.sample(range(8), rng.randint(1, 4)))
    cert = max_independence_subset(spec, A, F).certificate
    return cert, family_from_certificate(cert, CylinderFunction(vals)), b1, b2


def lp_suite():
    def work():
        rad = []
        for n in range(1, 6):
            G = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
            rad.append(l1_constant(FunctionFamily(np.full(len(G), 1 / len(G)), G, tuple(range(n)))).c_star)
        g = np.array([0.3, -1.0, 0.7])
        dup = l1_constant(FunctionFamily(np.full(3, 1 / 3), np.column_stack([g, g]), (0, 1))).c_star
        rng = random.Random(11)
        checked = viol = 0
        while checked < 200:
            cert, fam, b1, b2 = _random_certificate_family(rng)
            if not cert.J:
                continue
            checked += 1
            viol += rosenthal_dor_bound(cert, fam, b1, b2)["bound"] > l1_constant(fam).c_star + 1e-9
        return rad, dup, checked, viol
    (rad, dup, checked, viol), dt = timed(work)
    rad_err = max(abs(c - 1) for c in rad)
    ok = rad_err <= 1e-9 and dup <= 1e-9 and viol == 0 and dt < 60
    return ok, f"rademacher err {rad_err:.1e}; duplicate {dup:.1e}; {checked} certificates, {viol} violations; {dt:.2f}s"


def cpa_bound():
    rng = random.Random(3)
    viol = 0
    for _ in range(50):
        p = rng.uniform(0.9, 0.999)
        k = rng.choice([2, 3])
        spec, m = SubshiftSpec.full_shift(k), Bernoulli(tuple([p] + [(1 - p) / (k - 1)] * (k - 1)))
        base = Partition.cylinders(spec, rng.randint(1, 2))
        P = Partition(spec, base.coords, {w: rng.randint(0, 2) for w in base.labels})
        n = rng.randint(1, 5)
        H = shannon_entropy(join_over_window(P, range(n)), m)
        # smallest delta meeting the premise, inflated a little
        delta = max(math.sqrt(H / n), 0.01) * rng.uniform(1.0, 1.5)
        r = cpa_from_partition(P, m, n, delta)
        viol += not (r.rank <= math.exp(n * delta) + 1 and r.achieved_error <= math.sqrt(delta ** 2 + 4 * delta))
    return viol == 0, f"50 instances, {viol} violations"


def tame_example():
    def work():
        a = dumps(build_tame_example(10 ** 5).to_dict())
        ex = build_tame_example(10 ** 5)
        return a == dumps(ex.to_dict()), ex
    (same, ex), dt = timed(work)
    bad = check_schedule(ex)
    dens = ex.ones_density(10 ** 4)
    ok = same and ex.p[0] == 1 and ex.q[0] == 0 and not bad and dens < 0.01 and dt < 10
    return ok, (f"byte-identical {same}; p(0)={ex.p[0]} q(0)={ex.q[0]}; {len(bad)} schedule violations "
                f"over {len(ex.schedule)} blocks; ones density {dens:.4f}; {dt:.2f}s")


def downward_closedness():
    rng = random.Random(9)
    ind_viol = 0
    for _ in range(1000):
        spec = rng.choice([FULL2, GOLDEN])
        A = _random_tuple(rng)
        F = sorted(rng.sample(range(8), rng.randint(1, 5)))
        J = list(max_independence_subset(spec, A, F).J)
        sub = [s for s in J if rng.random() < 0.5]
        ind_viol += not is_independence_set(spec, A, sub)
    nrng = np.random.default_rng(9)
    l1_viol = pairs = 0
    while pairs < 200:
        G = nrng.normal(size=(10, 5))
        fam = FunctionFamily(np.full(10, 0.1), G, tuple(range(5)))
        lam = float(nrng.uniform(1.5, 5))
        I = max_l1_subset(fam, lam)
        if not I:
            continue
        for _ in range(5):
            sub = [s for s in I if nrng.random() < 0.6] or [I[0]]
            l1_viol += l1_constant(fam.subfamily(sub)).c_star < 1 / lam - 1e-9
            pairs += 1
    return ind_viol == 0 and l1_viol == 0, f"independence 1000 pairs, {ind_viol} violations; l1 {pairs} pairs, {l1_viol} violations"


CRITERIA = [
    (1, "entropy exactness", entropy_exactness),
    (2, "Karpovsky-Milman exhaustive", km_exhaustive),
    (3, "cover-number bound", cover_number_bound),
    (4, "independence solver vs oracle", solver_vs_oracle),
    (5, "shift covariance", shift_covariance),
    (6, "LP / l1 suite", lp_suite),
    (7, "cpa bound", cpa_bound),
    (8, "tame example", tame_example),
    (9, "downward closedness", downward_closedness),
]


def evaluate(num, name, fn):
    ok, detail = fn()
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {name}: {detail}"
    LINES.append(line)
    print(line)
    return ok, line


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(num, name, fn):
    ok, line = evaluate(num, name, fn)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c)[0] for c in CRITERIA]
    raise SystemExit(0 if all(results) else 1)
