import json

import pytest

from combindep.measures import cylinder_measure
from combindep.serialize import dumps
from combindep.symbolic import cyl, generate_segment
from combindep.systems import fixed_point_system, full_shift_system, golden_mean_system, tame_spec
from combindep.tame import build_tame_example, check_schedule, pair_coverage, v_disjointness
from combindep.verify import SUITES


def test_initial_values():
    ex = build_tame_example(50)
    assert ex.p[0] == 1 and ex.q[0] == 0


def test_regeneration_is_byte_identical():
    a = dumps(build_tame_example(5000).to_dict())
    b = dumps(build_tame_example(5000).to_dict())
    assert a == b


def test_prefix_stability():
    # a longer run extends a shorter one
    short, long = build_tame_example(3000), build_tame_example(30000)
    assert (long.p[:3000] == short.p).all() and (long.q[:3000] == short.q).all()


@pytest.mark.parametrize("L", [1, 10, 1000, 10 ** 5])
def test_schedule_holds(L):
    assert check_schedule(build_tame_example(L)) == []


def test_sparse_ones():
    assert build_tame_example(10 ** 4).ones_density() < 0.01


def test_pair_coverage_grows_with_length():
    small, big = pair_coverage(build_tame_example(2000), 4), pair_coverage(build_tame_example(20000), 4)
    assert all(big[d] >= small[d] for d in small)
    assert small[1] == 1.0


def test_v_translates_disjoint_on_prefix():
    assert v_disjointness(build_tame_example(20000))["violations"] == []


def test_rejects_empty_length():
    with pytest.raises(ValueError):
        build_tame_example(0)


def test_tame_spec_segments_match_construction():
    ex = build_tame_example(4096)
    assert generate_segment(tame_spec("p"), 0, 4096).word == tuple(ex.p.tolist())
    seg = generate_segment(tame_spec("q"), -3, 5)
    assert seg.start == -3 and seg.word == (0, 0, 0) + tuple(ex.q[:5].tolist())


def test_canonical_systems():
    spec, m = full_shift_system(3)
    assert spec.k == 3 and cylinder_measure(m, cyl("2")) == pytest.approx(1 / 3)
    assert not fixed_point_system().in_language((0, 1, 0))
    assert fixed_point_system().in_language((0, 0, 0))
    spec, m = golden_mean_system()
    assert json.loads(dumps(spec.forbidden)) == [[1, 1]]


@pytest.mark.parametrize("name,kwargs", [
    ("sauer", {"n": 3, "k": 2}), ("sauer", {"n": 2, "k": 3}),
    ("cover-bound", {"n": 2, "k": 3}), ("density-lemma", {"instances": 60}),
    ("separated", {"instances": 20}),
])
def test_verify_suites_report_no_failures(name, kwargs):
    rep = SUITES[name](**kwargs)
    assert rep["failures"] == 0 and rep["instances"] > 0
