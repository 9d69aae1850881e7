import json
import pathlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combindep import serialize as ser
from combindep.measures import Bernoulli, Empirical, Markov, cylinder_measure
from combindep.symbolic import BorelLikeSet, CylinderSet, SetTuple, SubshiftSpec, cyl
from combindep.systems import golden_mean_system

DOCS_SCHEMA = pathlib.Path(__file__).parent.parent / "docs" / "schema.json"


def test_spec_round_trips():
    for spec in (SubshiftSpec.full_shift(3), SubshiftSpec.sft(2, ["11"]), SubshiftSpec.sft(12, [[11, 10], [0]]),
                 SubshiftSpec.generator("tame", 2, which="q")):
        back = ser.spec_from_json(json.loads(json.dumps(ser.spec_to_json(spec))))
        assert ser.spec_to_json(back) == ser.spec_to_json(spec)


def test_large_alphabet_words_are_arrays():
    d = ser.spec_to_json(SubshiftSpec.sft(12, [[11, 10]]))
    assert d["forbidden"] == [[11, 10]]
    assert ser.spec_to_json(SubshiftSpec.sft(2, ["11"]))["forbidden"] == ["11"]


def test_measure_round_trips():
    spec, parry = golden_mean_system()
    for m in (Bernoulli((0.25, 0.75)), parry, Empirical("0110", 2)):
        back = ser.measure_from_json(json.loads(ser.dumps(ser.measure_to_json(m))), spec)
        for w in ("0", "1", "01", "10"):
            assert cylinder_measure(back, cyl(w)) == pytest.approx(cylinder_measure(m, cyl(w)), abs=1e-15)
    got = ser.measure_from_json({"kind": "parry"}, spec)
    assert np.allclose(got.transition, parry.transition)
    with pytest.raises(ValueError):
        ser.measure_from_json({"kind": "parry"})


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.tuples(st.integers(-5, 5), st.lists(st.integers(0, 11), min_size=1, max_size=4)),
                         min_size=1, max_size=3), min_size=1, max_size=3),
       st.sampled_from([2, 12]))
def test_tuple_round_trip(comps, k):
    A = SetTuple(tuple(BorelLikeSet(tuple(CylinderSet(tuple(a % k for a in w), s) for s, w in comp))
                       for comp in comps))
    back = ser.tuple_from_json(json.loads(json.dumps(ser.tuple_to_json(A, k))))
    assert back == A


def test_cylinder_shorthand():
    assert ser.cylinder_from_json("01@3") == cyl("01", 3)
    assert ser.cylinder_from_json("1") == cyl("1", 0)


def test_dumps_is_canonical():
    assert ser.dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
    with pytest.raises(ValueError):
        ser.dumps({"x": float("nan")})


def test_published_schema_matches_package_copy():
    assert json.loads(DOCS_SCHEMA.read_text()) == ser.config_schema()
