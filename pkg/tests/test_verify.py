import itertools
from math import comb

import pytest

from conftest import M2
from reesvec.filtration import closures, powers
from reesvec.hilbert import fit_polynomial
from reesvec.monomial import parse_ideal
from reesvec.reductions import complete_reduction
from reesvec.verify import (
    CorrespondenceReport,
    Verdict,
    verdict_for,
    verify_cm_vanishing_proxy,
    verify_correspondence,
)


def test_verdicts():
    assert verdict_for([], []) is Verdict.BIJECTIVE
    assert verdict_for([(1, 1)], []) is Verdict.FORWARD_FAILS
    assert verdict_for([], [(0, 0)]) is Verdict.BACKWARD_FAILS
    assert verdict_for([(1, 1)], [(0, 0)]) is Verdict.BOTH_FAIL


class TestExample1:
    def test_polynomial_matches_closed_form(self, example1):
        # F(r, s) = m^(r + 2s) in three variables
        p = fit_polynomial(example1)
        for r, s in itertools.product(range(7), repeat=2):
            assert p((r, s)) == comb(r + 2 * s + 2, 3)

    def test_bijective(self, example1, example1_candidate):
        report = verify_correspondence(example1, example1_candidate, (6, 6))
        assert report.verdict is Verdict.BIJECTIVE
        assert report.shift == (2, 2)
        assert (0, 0) in report.postulation and (2, 2) in report.reductions
        assert report.proxy_p_equals_h

    def test_proxy(self, example1):
        assert verify_cm_vanishing_proxy(example1, (6, 6))


class TestExample2:
    def test_forward_fails(self, example2, example2_candidate):
        report = verify_correspondence(example2, example2_candidate, (8, 8))
        assert report.verdict is Verdict.FORWARD_FAILS
        assert report.forward_violations[0] == (1, 1)
        assert (0, 0) not in report.postulation
        assert report.backward_violations == []

    def test_proxy_fails(self, example2):
        assert not verify_cm_vanishing_proxy(example2, (8, 8))


def test_single_graded_pattern():
    spec = powers(M2)
    cand = complete_reduction(spec, [[(1, 0), (0, 1)]])
    report = verify_correspondence(spec, cand, (8,))
    assert report.postulation.minimal_elements == ((0,),)
    assert report.reductions.minimal_elements == ((0,),)
    assert report.s1_pattern == {"reduction_number": 0, "postulation_number": -2, "holds": True}


def test_closure_proxy():
    spec = closures(parse_ideal("X^2 + Y^2"))
    assert verify_cm_vanishing_proxy(spec, (8,))


def test_report_round_trip(example2, example2_candidate):
    report = verify_correspondence(example2, example2_candidate, (5, 5))
    back = CorrespondenceReport.from_dict(report.to_dict())
    assert back.verdict is report.verdict
    assert back.forward_violations == report.forward_violations
    assert back.to_table() == report.to_table()


def test_tampered_report_rejected(example2, example2_candidate):
    data = verify_correspondence(example2, example2_candidate, (5, 5)).to_dict()
    data["verdict"] = "Bijective"
    with pytest.raises(ValueError):
        CorrespondenceReport.from_dict(data)
