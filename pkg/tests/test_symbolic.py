import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combindep.errors import EmptyLanguage, UnsupportedSpec
from combindep.symbolic import (BorelLikeSet, Partition, SetTuple, SubshiftSpec, as_word, cyl,
                                feasible_word, generate_segment, solve_constraints, symbol_partition,
                                transfer_graph)

from oracles import golden_words, words

GOLDEN = SubshiftSpec.sft(2, ["11"])
FULL2 = SubshiftSpec.full_shift(2)


def test_words_parse_digit_and_comma_forms():
    assert as_word("0110") == (0, 1, 1, 0)
    assert as_word("1,12,3") == (1, 12, 3)
    assert as_word([2, 0]) == (2, 0)


def test_alphabet_and_forbidden_words_are_validated():
    with pytest.raises(ValueError):
        SubshiftSpec.full_shift(0)
    with pytest.raises(ValueError):
        SubshiftSpec.sft(2, ["2"])


def test_full_shift_realises_any_pattern():
    w = feasible_word(FULL2, [(0, 1), (3, 0)])
    assert w is not None and w.at(0) == 1 and w.at(3) == 0


def test_golden_mean_rejects_forced_forbidden_block():
    assert feasible_word(GOLDEN, [(0, 1), (1, 1)]) is None


def test_golden_mean_spaced_ones():
    w = feasible_word(GOLDEN, [(0, 1), (2, 1)])
    assert w.word == (1, 0, 1)
    assert "".join(map(str, w.word)) in {"".join(map(str, x)) for x in golden_words(3)}


def test_generator_specs_are_refused_by_the_language_kernel():
    with pytest.raises(UnsupportedSpec):
        feasible_word(SubshiftSpec.generator("tame", 2, which="p"), [(0, 1)])


def test_language_matches_enumeration():
    for n in range(1, 9):
        lang = {w for w in itertools.product((0, 1), repeat=n) if GOLDEN.in_language(w)}
        assert lang == set(golden_words(n))


@settings(max_examples=150, deadline=None)
@given(st.dictionaries(st.integers(0, 7), st.integers(0, 1), min_size=1, max_size=5),
       st.sampled_from([("11",), ("11", "101"), ("000",), ()]))
def test_feasibility_sound_and_complete(required, forbidden):
    spec = SubshiftSpec.sft(2, forbidden) if forbidden else FULL2
    lo, hi = min(required), max(required) + 1
    pad = 3
    pool = words(2, hi - lo + 2 * pad, forbidden)
    # each forbidden set admits a constant point, so 3 symbols of padding decide extendability
    expected = any(all(w[p - lo + pad] == a for p, a in required.items()) for w in pool)
    got = solve_constraints(spec, required)
    assert (got is not None) == expected
    if got is not None:
        assert got.satisfies(required)
        assert spec.locally_admissible(got.word)


def test_excluded_cylinders_are_avoided():
    w = solve_constraints(FULL2, {0: 1}, [(1, (0,)), (1, (1, 1))])
    assert w is not None and w.at(1) == 1 and w.at(2) == 0
    assert solve_constraints(FULL2, {0: 1}, [(0, (1,))]) is None


def test_generate_segment_is_deterministic_and_admissible():
    a = generate_segment(FULL2, 0, 4, seed=7)
    assert a == generate_segment(FULL2, 0, 4, seed=7)
    g = generate_segment(GOLDEN, 0, 10, seed=3)
    assert "11" not in "".join(map(str, g.word))
    with pytest.raises(EmptyLanguage):
        generate_segment(SubshiftSpec.sft(2, ["0", "1"]), 0, 4)


def test_transfer_graph_of_golden_mean():
    g = transfer_graph(GOLDEN)
    assert g.L == 1 and len(g.vertices) == 2


def test_set_tuple_disjointness():
    assert SetTuple.of(cyl("0"), cyl("1")).syntactically_disjoint()
    assert not SetTuple.of(cyl("0"), cyl("00")).syntactically_disjoint()
    assert SetTuple.of(cyl("00"), cyl("01")).syntactically_disjoint()


def test_borel_like_membership():
    B = BorelLikeSet.of(cyl("01", 0), cyl("1", 3))
    assert B.contains({0: 0, 1: 1, 3: 0})
    assert B.contains({0: 1, 1: 1, 3: 1})
    assert not B.contains({0: 1, 1: 1, 3: 0})


def test_partitions_cover_admissible_words():
    P = Partition.cylinders(GOLDEN, 3)
    assert set(P.labels) == set(golden_words(3))
    assert len(symbol_partition(GOLDEN)) == 2
