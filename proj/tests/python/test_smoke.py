"""Smoke tests for the python extension module."""

import math

import pytest

cb = pytest.importorskip("_cubature")


def test_bounds():
    assert cb.stroud_bound(2, 6) == 10
    assert cb.moller_bound(7, 7) == 182
    assert cb.effective_bound(2, 8) == 15


def test_moments():
    assert cb.monomial_moment(cb.Region.ExpR2, 2, [4, 0]) == pytest.approx(3 * math.pi / 4)
    assert cb.volume(cb.Region.Ball, 2) == pytest.approx(math.pi)
    assert cb.moment_system_size(cb.Region.ExpR2, 7, 7) == 3432


def test_catalog_and_verify():
    entries = cb.catalog()
    assert len(entries) >= 20
    rule = cb.build_rule("s7-183-7")
    assert rule.N == 183
    rep = cb.verify(rule, 7)
    assert rep["pass"]
    assert cb.detected_degree(rule, 1e-11, 8) == 7
    assert cb.quality_of(rule) == "PI"


def test_evaluate_j4():
    rule = cb.build_rule("s4-15-4")
    j4 = cb.evaluate(rule, lambda x: math.cos(sum(x)))
    assert abs(j4 - 3.4818127309) < 1e-9


def test_stability():
    assert cb.stability_factor(cb.build_rule("e7r2-38-4")) == pytest.approx(7.18, abs=0.01)


def test_search_and_shells():
    rep = cb.search(cb.Region.ExpR2, 2, 3, 6, seed=1)
    assert rep["outcome"] == "success"
    rule = rep["rule"]
    assert cb.verify(rule, 3)["pass"]

    shells = cb.detect_shells(cb.build_rule("e5r2-22-4"))
    assert [len(s["members"]) for s in shells] == [1, 6, 15]


def test_simplex_and_convert():
    rule = cb.simplex_rule(cb.Region.GaussianProb, 3)
    assert rule.N == 4
    back = cb.convert_gaussian(rule)
    assert cb.verify(back, 2)["pass"]


def test_rule_files(tmp_path):
    rule = cb.build_rule("e2r2-10-6")
    path = str(tmp_path / "rule.txt")
    cb.write_rule(rule, path)
    again = cb.read_rule(path)
    assert again.points == rule.points
    assert again.weights == rule.weights


def test_identify_surd():
    hit = cb.identify_surd("0.70710678118654752440084436210484903928483593768847")
    assert hit is not None and "sqrt" in hit["form"]
    assert cb.identify_surd("3.1415926535897932384626433832795028841971693993751") is None


def test_refine():
    out = cb.refine(cb.build_rule("e2r2-10-6"), 6, 202)
    assert out["working_digits"] == 202
    assert out["print32_stable"]
