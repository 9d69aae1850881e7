import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combindep.errors import WordTooLong
from combindep.measures import (Bernoulli, Empirical, Markov, avoid_prob, cylinder_measure,
                                parry_measure, point_mass, union_measure)
from combindep.symbolic import SubshiftSpec, cyl
from combindep.systems import golden_mean_system

PHI = (1 + math.sqrt(5)) / 2


def test_bernoulli_product():
    assert cylinder_measure(Bernoulli((0.5, 0.5)), cyl("01")) == 0.25


def test_parry_measure_of_one():
    # stationary vector of P = [[1/phi, 1/phi^2], [1, 0]], solved by hand
    _, m = golden_mean_system()
    assert cylinder_measure(m, cyl("1")) == pytest.approx((5 - math.sqrt(5)) / 10, abs=1e-12)
    assert cylinder_measure(m, cyl("1")) == pytest.approx(0.276393, abs=1e-6)
    assert m.transition[0, 0] == pytest.approx(1 / PHI, abs=1e-12)
    assert m.transition[0, 1] == pytest.approx(1 / PHI ** 2, abs=1e-12)


def test_golden_mean_system_contract():
    spec, m = golden_mean_system()
    assert spec.forbidden == ((1, 1),)
    assert m.entropy_rate() == pytest.approx(math.log(PHI), abs=1e-9)
    assert np.abs(m.transition.sum(axis=1) - 1).max() <= 1e-12
    assert cylinder_measure(m, cyl("11")) == 0


def test_empirical_sliding_frequency():
    m = Empirical("0101", 2)
    assert cylinder_measure(m, cyl("01")) == pytest.approx(2 / 3)
    with pytest.raises(WordTooLong):
        cylinder_measure(m, cyl("010"))


def test_invalid_models_rejected():
    with pytest.raises(ValueError):
        Bernoulli((0.5, 0.6))
    with pytest.raises(ValueError):
        Markov(np.array([[0.5, 0.5], [1.0, 0.0]]), np.array([0.5, 0.5]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.05, 1.0), min_size=2, max_size=4), st.integers(-20, 20),
       st.lists(st.integers(0, 3), min_size=1, max_size=5))
def test_shift_invariance_and_normalisation(raw, anchor, word):
    w = np.array(raw) / sum(raw)
    m = Bernoulli(tuple(w / w.sum()))
    word = [a % m.k for a in word]
    assert m.word_prob(word, anchor) == m.word_prob(word, 0)
    assert math.fsum(m.word_prob([a], anchor) for a in range(m.k)) == pytest.approx(1, abs=1e-12)
    assert m.word_prob([], anchor) == 1.0


@settings(max_examples=40, deadline=None)
@given(st.integers(-10, 10), st.lists(st.integers(0, 1), min_size=1, max_size=6))
def test_markov_shift_invariance(anchor, word):
    _, m = golden_mean_system()
    assert m.word_prob(word, anchor) == m.word_prob(word, 0)
    assert m.word_prob([0], anchor) + m.word_prob([1], anchor) == pytest.approx(1, abs=1e-12)


def test_parry_stationarity_for_another_sft():
    spec = SubshiftSpec.sft(3, ["00", "12"])
    m = parry_measure(spec)
    assert np.abs(m.stationary @ m.transition - m.stationary).max() < 1e-9


def test_avoid_and_union_agree():
    m = Bernoulli((0.5, 0.5))
    ex = [(0, (1,)), (2, (1, 1))]
    assert avoid_prob(m, ex) == pytest.approx(0.5 * 0.75)
    assert union_measure(m, [cyl("1", 0), cyl("11", 2)]) == pytest.approx(1 - 0.5 * 0.75)


def test_point_mass_is_a_fixed_point():
    m = point_mass(0)
    assert cylinder_measure(m, cyl("000")) == 1.0
    assert cylinder_measure(m, cyl("1")) == 0.0
