import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combindep.independence import is_independence_set
from combindep.shattering import (PatternSet, cover_bound, cover_number, cover_sets, density_lemma_search,
                                  is_shattered, km_threshold, largest_shattered_subset,
                                  separated_to_shattered)
from combindep.symbolic import SetTuple, SubshiftSpec, cyl
from combindep.verify import support_class_bound

from oracles import largest_shattered, min_cover


def test_full_pattern_set_is_fully_shattered():
    for n in range(1, 5):
        assert largest_shattered_subset(PatternSet.full(n, 2)) == (tuple(range(n)), n)


def test_single_pattern_shatters_nothing():
    assert largest_shattered_subset(PatternSet.of([(1, 2, 1)], 2))[1] == 0


@settings(max_examples=80, deadline=None)
@given(st.sets(st.tuples(*[st.integers(0, 2)] * 3), min_size=1, max_size=12), st.integers(1, 2))
def test_largest_shattered_matches_enumeration(pats, k):
    pats = {tuple(min(v, k) for v in p) for p in pats}
    S = PatternSet.of(pats, k, 3)
    I, s = largest_shattered_subset(S)
    assert s == largest_shattered(pats, k, 3)
    assert is_shattered(S, I)
    # lexicographically least among the optimal sets
    opt = [J for J in itertools.combinations(range(3), s) if is_shattered(S, J)]
    assert I == min(opt)


def test_zero_symbol_never_helps():
    S = PatternSet.of([(0,), (1,), (2,)], 2)
    assert largest_shattered_subset(S)[1] == 1
    assert largest_shattered_subset(PatternSet.of([(0,), (1,)], 2))[1] == 0


def test_km_values():
    assert km_threshold(3, 2, 2) == 4
    assert km_threshold(4, 2, 1) == 1
    assert km_threshold(2, 3, 1) == 4
    assert km_threshold(4, 3, 2) == 48
    with pytest.raises(ValueError):
        km_threshold(3, 2, 0)


def test_km_tight_for_three_two_two():
    univ = list(itertools.product((1, 2), repeat=3))
    fives = [c for c in itertools.combinations(univ, 5)]
    assert all(largest_shattered(set(c), 2, 3) >= 2 for c in fives)
    assert any(largest_shattered(set(c), 2, 3) < 2 for c in itertools.combinations(univ, 4))


def test_km_ternary_exhaustive_small():
    univ = list(itertools.product((1, 2, 3), repeat=2))
    for r in range(len(univ) + 1):
        for S in itertools.combinations(univ, r):
            s = largest_shattered(set(S), 3, 2)
            for t in (1, 2):
                if len(S) > km_threshold(2, 3, t):
                    assert s >= t


def test_km_sampled_n4_k3():
    rng = random.Random(0)
    univ = list(itertools.product((1, 2, 3), repeat=4))
    th = km_threshold(4, 3, 2)
    for _ in range(200):
        S = rng.sample(univ, th + 1)
        assert largest_shattered_subset(PatternSet.of(S, 3, 4))[1] >= 2


def test_cover_number_examples():
    for n in range(1, 4):
        assert cover_number(PatternSet.full(n, 2)) == 2 ** n
    assert cover_number(PatternSet.of([(1, 2)], 2)) == 1
    assert cover_number(PatternSet.of([(1,), (2,), (3,)], 3)) == 2


@settings(max_examples=60, deadline=None)
@given(st.sets(st.tuples(*[st.integers(1, 3)] * 2), min_size=1, max_size=9))
def test_cover_number_matches_enumeration(pats):
    S = PatternSet.of(pats, 3, 2)
    order = sorted(S.patterns)
    sets = [{order[b] for b in range(len(order)) if mask >> b & 1} for _, mask in cover_sets(S)]
    assert cover_number(S) == min_cover(set(order), sets)
    r = cover_bound(S)
    assert r["holds"]


@settings(max_examples=60, deadline=None)
@given(st.sets(st.tuples(*[st.integers(1, 2)] * 3), max_size=7), st.tuples(*[st.integers(1, 2)] * 3))
def test_monotone_under_adding_a_pattern(pats, extra):
    S = PatternSet.of(pats, 2, 3)
    T = S.with_pattern(extra)
    assert largest_shattered_subset(T)[1] >= largest_shattered_subset(S)[1]
    assert cover_number(T) >= cover_number(S)


def test_density_lemma_examples():
    pats = [p for p in itertools.product((0, 1, 2), repeat=3) if p.count(0) <= 1]
    assert density_lemma_search(PatternSet.of(pats, 2), 1.0, 1 / 3) == (0, 1, 2)
    assert density_lemma_search(PatternSet.of([(0, 0, 0)], 2), 0.5, 1.0) is None
    with pytest.raises(ValueError):
        density_lemma_search(PatternSet.of([(0, 0, 1)], 2), 0.5, 0.3)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.tuples(*[st.integers(0, 2)] * 4), min_size=1, max_size=30))
def test_support_class_bound_is_attained(pats):
    S = PatternSet.of(pats, 2, 4)
    assert largest_shattered_subset(S)[1] >= support_class_bound(S)


def test_separated_full_cube():
    E = np.array(list(itertools.product((0.0, 1.0), repeat=3)))
    r = separated_to_shattered(E, 1.0)
    assert r["J"] == (0, 1, 2) and r["epsilon"] >= 0.25 and r["t"] == 0.5


def test_separated_single_vector_finds_nothing():
    assert separated_to_shattered(np.zeros((1, 4)), 1.0) is None


def test_separated_recovers_independent_coordinates():
    spec = SubshiftSpec.full_shift(2)
    cert = is_independence_set(spec, SetTuple.of(cyl("0"), cyl("1")), range(4))
    E = np.array([[w.at(s) for s in range(4)] for _, w in sorted(cert.witnesses.items())], dtype=float)
    r = separated_to_shattered(E, 1.0)
    assert r["J"] == (0, 1, 2, 3)


def test_separated_validates_inputs():
    with pytest.raises(ValueError):
        separated_to_shattered(np.array([[2.0]]), 1.0)
    with pytest.raises(ValueError):
        separated_to_shattered(np.array([[0.0], [0.1]]), 0.5)


def test_complex_inputs_use_imaginary_side():
    E = np.array([[0.2 + 0.0j, 0.2 + 0.0j], [0.2 + 1.0j, 0.2 + 0.0j],
                  [0.2 + 0.0j, 0.2 + 1.0j], [0.2 + 1.0j, 0.2 + 1.0j]]) * 0.9
    r = separated_to_shattered(E, 0.5)
    assert r["side"] == "imaginary" and r["J"] == (0, 1)
