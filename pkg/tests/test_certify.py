from fractions import Fraction

import pytest

from polarcert.certify import appendix as A
from polarcert.certify.bounds import (
    bounds,
    hermitian_threshold,
    hyperbolic_threshold,
    klein_threshold,
    monotone,
    moorhouse_hermitian,
    moorhouse_hyperbolic,
    parabolic_threshold,
)
from polarcert.certify.h54 import h54_certificate, integer_solutions
from polarcert.certify.threelines import ThreeLinesError, inspect_triple, transversals, verify_threelines
from polarcert.polar import cached


@pytest.fixture(scope="module")
def h54():
    return h54_certificate()


def test_h54_final_equation(h54):
    assert h54.ok
    assert h54.final_equation == "24*x15 == 36 : infeasible"
    assert [s.number for s in h54.stages] == list(range(1, 8))


def test_h54_orbit_table_embedded(h54):
    table = h54.stage(3).details["table"]
    assert len(table) == 34
    assert [row["weight"] for row in table] == [str(w) for w in A.WEIGHTS]
    assert sum(row["size"] for row in table) == 693


def test_h54_elimination_justified(h54):
    s6 = h54.stage(6).details
    assert s6["W5_family"]["count"] == 12 and s6["W5_family"]["all_3_tight"]
    assert all(s6["emptiness_justification"].values())
    # the fixed U-invariant W5 does not contain orbits 16 and 25
    assert s6["reference_inside_W5"] == {"16": False, "18": True, "25": False, "32": True}
    assert {d["orbit"] for d in h54.discrepancies} == {16, 25}


def test_h54_corrupted_weights_fail_at_stage_4():
    w = list(A.WEIGHTS)
    w[4] += 1
    rep = h54_certificate(w)
    assert not rep.ok
    assert rep.stages[-1].number == 4 and not rep.stages[-1].ok
    assert rep.stages[-1].diff[0] == {"expected": "weighted-tight(36)", "got": "neither"}
    assert rep.final_equation is None


def test_h54_wrong_length_weights():
    rep = h54_certificate(list(A.WEIGHTS)[:-1])
    assert not rep.ok


def test_integer_solutions_small():
    assert integer_solutions({15: 24}, Fraction(36), {15: 12}) == []
    assert integer_solutions({1: 2, 2: 3}, Fraction(7), {1: 5, 2: 5}) == [{1: 2, 2: 1}]


def test_q9_default_and_random_choice():
    from polarcert.certify.q9 import q9_choices, q9_report

    r = q9_report(2)
    assert r["ok"]
    assert r["tight_set"]["classification"] == "weighted-tight(90)"
    assert r["parity"]["pairs"] == 15 and r["parity"]["odd"]
    assert all(c["ok"] for c in q9_choices(1, 2, seed=3))


def test_threelines_q2_full():
    rep = verify_threelines(2)
    assert rep.mode == "full" and rep.triples_checked == 40320
    assert rep.transversal_counts == {3: 40320}


def test_threelines_sampled_q3():
    rep = verify_threelines(3, samples=20, seed=1)
    assert rep.transversal_counts == {4: 20}
    assert rep.span_point_counts == {16: 20} and rep.ruling_line_counts == {8: 20}


def test_threelines_degenerate_input():
    S = cached("Q", 7, 2)
    g = S.generators
    meeting = next(h for h in g[1:] if h & g[0])
    with pytest.raises(ThreeLinesError):
        transversals(S, g[0], meeting, g[-1])
    with pytest.raises(ThreeLinesError):
        inspect_triple(S, (g[0], g[0], g[1]))
    with pytest.raises(ThreeLinesError):
        verify_threelines(4)


def test_thresholds():
    assert hermitian_threshold(2) == 6
    assert klein_threshold(2) == 9
    assert hyperbolic_threshold(2) == 5
    assert parabolic_threshold(2) == Fraction(7, 2)
    assert parabolic_threshold(3) == 6


def test_moorhouse_instances():
    assert moorhouse_hyperbolic(2, 4) == (16, 10, True)
    assert moorhouse_hyperbolic(2, 3) == (8, 8, False)
    assert moorhouse_hermitian(2, 4) == (128, 63, True)
    assert moorhouse_hermitian(2, 3) == (32, 35, False)


@pytest.mark.parametrize("family", ["hermitian", "hyperbolic", "parabolic"])
def test_bounds_table(family):
    rep = bounds(family, qmax=5)
    assert rep.qs == [2, 3, 4, 5]
    for row in rep.rows:
        assert row.combinatorial == (row.d > row.threshold)
    assert monotone(family)


def test_bounds_rejects_unknown_family():
    with pytest.raises(ValueError):
        bounds("symplectic")
