import dataclasses

import pytest

import simpcat.contiguity as contiguity
from simpcat.errors import BadParameter
from simpcat.suite import GROUPS, PROPERTIES, SuiteConfig, run_property, run_suite

TINY = SuiteConfig(max_vertices=3, map_vertices=3, maps_per_pair=4, poset_points=3, fibration_universe=2, es_universe=3)


def test_every_group_has_properties():
    assert {p.group for p in PROPERTIES.values()} == set(GROUPS)


def test_tiny_suite_passes_and_is_deterministic():
    a = run_suite(TINY)
    assert a.ok, [r.to_dict() for r in a.failed]
    b = run_suite(TINY, jobs=2)
    assert [r.name for r in a.results] == [r.name for r in b.results]
    assert a.digest == b.digest


def test_digest_ignores_timing():
    report = run_suite(dataclasses.replace(TINY, groups=("scomplex",)))
    before = report.digest
    for r in report.results:
        r.seconds += 100
    assert report.digest == before
    assert "seconds" in report.to_dict()["results"][0]
    assert "seconds" not in report.to_dict(timing=False)["results"][0]


def test_unknown_group():
    with pytest.raises(BadParameter):
        run_suite(dataclasses.replace(TINY, groups=("nope",)))


def test_skips_are_enumerated():
    r = run_property("projection", dataclasses.replace(TINY, max_vertices=4, map_vertices=4))
    assert r.status == "pass" and r.skips
    assert all("cap" in reason for reason in r.skips)


def test_mutant_contiguity_is_caught(monkeypatch):
    def too_strict(domain, codomain, a, b):
        return all(contiguity.image_mask(a, m) == contiguity.image_mask(b, m) for m in domain.facet_masks)

    monkeypatch.setattr(contiguity, "contiguous_assignments", too_strict)
    contiguity.clear_caches()
    r = run_property("composition_bound", TINY)
    assert r.status == "fail" and r.failures
    assert r.failures[0]["covers_verify"] is False


def test_gscat_gap_is_noted(monkeypatch):
    import simpcat.suite as suite

    real = suite.gscat_upper
    monkeypatch.setattr(suite, "gscat_upper", lambda K: (real(K)[0] + 1, None))
    r = run_property("scat_gscat_chain", TINY)
    assert r.status == "pass" and r.notes
    assert "notes" in r.to_dict()
