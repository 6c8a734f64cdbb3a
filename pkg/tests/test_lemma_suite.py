from unittest.mock import patch

import pytest

from app.config import settings
from app.errors import LemmaFailure
from app.services.connectivity import enumerate_2separations
from app.services.fixtures import corpus, cycle, fixture
from app.services.lemma_suite import disjoint_families, run_suite
from app.services.matroid_kernel import direct_sum, relabel, uniform


def test_k4_minus_edge_passes_every_check(k4e):
    report = run_suite(k4e)
    assert report.fixture == "input"
    assert report.passed, report.failures
    assert all(result.skipped is None for result in report.results)


def test_single_suite(u24):
    report = run_suite(u24, "duality")
    assert [r.name for r in report.results] == [
        "separations of the dual",
        "basis differences under duality",
        "localization of the dual",
        "decomposition of the dual",
    ]
    assert report.passed


def test_unknown_suite(u24):
    with pytest.raises(ValueError):
        run_suite(u24, "everything")


def test_disconnected_input_skips_connected_checks():
    M = direct_sum(uniform(1, 2), relabel(uniform(1, 2), {"e0": "f0", "e1": "f1"}))
    report = run_suite(M, "lemmas")
    skipped = {r.name: r.skipped for r in report.results if r.skipped}
    assert skipped["corner lemma"] == "disconnected"
    assert skipped["canonical decomposition"] == "disconnected"
    assert report.passed


def test_small_caps_skip_exhaustive_checks(k4e):
    settings.SUBMODULARITY_CAP = 4
    report = run_suite(k4e, "lemmas")
    skipped = {r.name for r in report.results if r.skipped}
    assert "connectivity submodular" in skipped
    assert "corner lemma" not in skipped


def test_failures_are_reported():
    with patch("app.services.separation_calculus.corner", side_effect=LemmaFailure("corner lemma", "boom")):
        report = run_suite(uniform(3, 4), "lemmas")
    assert not report.passed
    assert any(failure.startswith("corner lemma: LemmaFailure: corner lemma: boom") for failure in report.failures)



def test_every_disjoint_family_of_sides():
    c6 = cycle(6)
    sides = [side for s in enumerate_2separations(c6) for side in (s.side_a, s.side_b)]
    families = list(disjoint_families(sides))
    assert len(sides) == 50
    assert len(families) == 195
    assert max(len(family) for family in families) == 3
    for family in families:
        union = 0
        for side in family:
            assert not union & side
            union |= side


def test_unreached_local_independent_sets_are_reported(k4e):
    with patch("app.services.localization.local_independents_correspond", return_value=0):
        report = run_suite(k4e, "lemmas")
    result = next(r for r in report.results if r.name == "independence correspondence")
    assert not result.passed
    assert all("are no images of independent sets" in failure for failure in result.failures)

@pytest.mark.parametrize("name", [name for name, _ in corpus()])
def test_corpus_fixture_passes(name):
    report = run_suite(fixture(name), "all", name)
    assert report.passed, report.failures
