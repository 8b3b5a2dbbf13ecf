import json

import pytest

from simpcat import (
    build_factorization,
    constant_map,
    gscat_upper,
    identity,
    is_null_class,
    same_contiguity_class,
    scat,
    scat_map,
    standard_complex,
)
from simpcat.certificates import (
    chain_certificate,
    check_certificate,
    cover_certificate,
    factorization_certificate,
    fence_certificate,
    load_map,
)
from simpcat.errors import ParseError
from simpcat.finite_space import chain_to_fence


def roundtrip(doc):
    return check_certificate(json.loads(json.dumps(doc)))


def test_cover_roundtrip(c4):
    n, cover = scat(c4)
    assert roundtrip(cover_certificate(cover)).ok


def test_cover_missing_facet_names_it(c4):
    doc = cover_certificate(scat(c4)[1])
    doc["parts"], doc["chains"] = doc["parts"][:1], doc["chains"][:1]
    check = roundtrip(doc)
    assert not check.ok
    assert "not covered" in check.reason and "[" in check.reason


def test_factorization_roundtrips(c4):
    for f in (constant_map(c4, c4, 0), identity(c4)):
        n, cover = scat_map(f)
        doc = factorization_certificate(build_factorization(f, cover), f, n)
        assert roundtrip(doc).ok


def test_factorization_level_too_low(c4):
    f = identity(c4)
    n, cover = scat_map(f)
    doc = factorization_certificate(build_factorization(f, cover), f, n)
    doc["n"] = 0
    assert not roundtrip(doc).ok


def test_gscat_cover_roundtrip(c4):
    assert roundtrip(cover_certificate(gscat_upper(c4)[1])).ok


def test_chain_roundtrip_and_corruption(c4):
    chain = same_contiguity_class(constant_map(c4, c4, 0), constant_map(c4, c4, 2))
    doc = chain_certificate(chain)
    assert roundtrip(doc).ok
    doc["maps"].insert(1, {"a": "c", "b": "c", "c": "c", "d": "c"})
    assert not roundtrip(doc).ok


def test_non_simplicial_map_in_chain_fails(c4):
    doc = chain_certificate(same_contiguity_class(identity(c4), identity(c4)))
    doc["maps"].append({"a": "a", "b": "c", "c": "c", "d": "c"})
    assert not roundtrip(doc).ok


def test_fence_roundtrip(c4):
    chain = is_null_class(constant_map(c4, c4, 1))
    assert roundtrip(fence_certificate(chain_to_fence(chain))).ok


def test_kind_mismatch_and_errors(c4):
    doc = cover_certificate(scat(c4)[1])
    assert not check_certificate(doc, "chain").ok
    with pytest.raises(ParseError):
        check_certificate({"kind": "mystery"})
    with pytest.raises(ParseError):
        check_certificate({"kind": "chain"})
    with pytest.raises(ParseError):
        check_certificate([1, 2])


def test_map_documents(c4):
    doc = identity(c4).to_dict()
    assert load_map(doc) == identity(c4)
    with pytest.raises(ParseError):
        load_map(dict(doc, extra=1))
    bad = dict(doc, map={"a": "a", "b": "zz", "c": "c", "d": "d"})
    with pytest.raises(ParseError):
        load_map(bad)
