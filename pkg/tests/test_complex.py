import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simpcat import (
    all_simplices,
    are_isomorphic,
    build_complex,
    categorical_product,
    cone,
    enumerate_corpus,
    generated_subcomplex,
    is_connected,
    standard_complex,
    subcomplex_intersection,
    subcomplex_union,
)
from simpcat.complex import SimplicialComplex, whole
from simpcat.errors import BadParameter, EmptyInput, NotASimplex, ParentMismatch, ResourceLimit

from conftest import iso_classes, simplex_set


def facets_of(K):
    return sorted(K.simplex_labels(m) for m in K.facet_masks)


def test_build_normalizes():
    assert facets_of(build_complex([["a", "b"], ["b", "c"], ["a", "b"]])) == [["a", "b"], ["b", "c"]]
    assert facets_of(build_complex([["a", "b", "c"], ["a", "b"]])) == [["a", "b", "c"]]
    assert not build_complex([["a", "b"], ["c", "d"]]).connected


def test_build_rejects_empty():
    with pytest.raises(EmptyInput):
        build_complex([])
    with pytest.raises(EmptyInput):
        build_complex([["a"], []])


def test_all_simplices_examples(c4):
    assert len(all_simplices(standard_complex("simplex", 2))) == 7
    assert len(all_simplices(standard_complex("simplex", 1))) == 3
    assert len(all_simplices(c4)) == 8


def test_all_simplices_cap():
    with pytest.raises(ResourceLimit):
        all_simplices(standard_complex("simplex", 5), cap=10)


def test_all_simplices_oracle():
    for K in enumerate_corpus(4):
        assert all_simplices(K) == simplex_set(K)


def test_connectivity():
    assert is_connected(build_complex([["a", "b"], ["b", "c"]]))
    assert not is_connected(build_complex([["a", "b"], ["c", "d"]]))
    assert is_connected(build_complex([["a"]]))


def test_cone_examples():
    assert facets_of(cone(build_complex([["a"]]))) == [["a", "v"]]
    assert facets_of(cone(build_complex([["a", "b"], ["b", "c"]]))) == [["a", "b", "v"], ["b", "c", "v"]]
    c3 = cone(standard_complex("cycle", 3))
    assert facets_of(c3) == [["a", "b", "v"], ["a", "c", "v"], ["b", "c", "v"]]


def test_cone_fresh_apex_label():
    K = build_complex([["v", "w"]])
    C = cone(K)
    assert C.n_vertices == 3 and len(set(C.labels)) == 3


def test_product_examples():
    L = standard_complex("cycle", 4)
    P = categorical_product(build_complex([["a"]]), L)
    assert are_isomorphic(P, L) is not None
    E = categorical_product(build_complex([["a", "b"]]), build_complex([["c", "d"]]))
    assert E.n_facets == 1 and E.n_vertices == 4


def test_product_simplices_by_projection_oracle():
    K = standard_complex("path", 3)
    L = standard_complex("cycle", 3)
    P = categorical_product(K, L)
    sk, sl = simplex_set(K), simplex_set(L)
    pairs = [(x, y) for x in range(K.n_vertices) for y in range(L.n_vertices)]
    index = {f"{K.labels[x]}·{L.labels[y]}": (x, y) for x, y in pairs}
    coords = [index[label] for label in P.labels]
    expected = set()
    for r in range(1, len(coords) + 1):
        for combo in itertools.combinations(range(len(coords)), r):
            if frozenset(coords[i][0] for i in combo) in sk and frozenset(coords[i][1] for i in combo) in sl:
                expected.add(frozenset(combo))
    assert all_simplices(P) == expected


def test_product_cap():
    with pytest.raises(ResourceLimit):
        categorical_product(standard_complex("cycle", 8), standard_complex("cycle", 8), cap=32)


def test_subcomplexes():
    K = build_complex([["a", "b", "c"]])
    U = generated_subcomplex(K, [["a", "b"]])
    assert U.complex.n_vertices == 2
    c4 = standard_complex("cycle", 4)
    assert generated_subcomplex(c4, [list(c4.simplex_labels(m)) for m in c4.facet_masks]).simplex_masks == whole(c4).simplex_masks
    T = build_complex([["a", "b", "c"], ["b", "c", "d"]])
    assert len(generated_subcomplex(T, [["a", "b", "c"]]).simplex_masks) == 7
    with pytest.raises(NotASimplex):
        generated_subcomplex(c4, [["a", "c"]])


def test_union_intersection(c4):
    A = generated_subcomplex(c4, [["a", "b"], ["b", "c"]])
    B = generated_subcomplex(c4, [["b", "c"], ["c", "d"]])
    assert subcomplex_union(A, A).simplex_masks == A.simplex_masks
    meet = subcomplex_intersection(A, B)
    assert meet.simplex_masks == generated_subcomplex(c4, [["b", "c"]]).simplex_masks
    assert meet.simplex_masks <= subcomplex_union(A, B).simplex_masks
    with pytest.raises(ParentMismatch):
        subcomplex_union(A, whole(standard_complex("cycle", 5)))


def test_isomorphism_examples(c4):
    assert are_isomorphic(c4, c4).bijection == tuple(range(4))
    relabeled = build_complex([["w", "x"], ["x", "y"], ["y", "z"], ["z", "w"]])
    assert are_isomorphic(c4, relabeled) is not None
    assert are_isomorphic(c4, standard_complex("path", 4)) is None


def test_standard_families():
    assert facets_of(standard_complex("simplex", 2)) == [["a", "b", "c"]]
    assert facets_of(standard_complex("boundary_of_simplex", 2)) == [["a", "b"], ["a", "c"], ["b", "c"]]
    assert facets_of(standard_complex("cycle", 4)) == [["a", "b"], ["a", "d"], ["b", "c"], ["c", "d"]]
    with pytest.raises(BadParameter):
        standard_complex("cycle", 2)
    with pytest.raises(BadParameter):
        standard_complex("torus", 2)


def test_corpus_small_cases():
    assert [K.describe() for K in enumerate_corpus(1, 1)] == ["<a>"]
    assert [K.describe() for K in enumerate_corpus(2)] == ["<a>", "<ab>"]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_corpus_counts_match_oracle(n):
    corpus = enumerate_corpus(n)
    assert sum(K.n_vertices == n for K in corpus) == iso_classes(n)


def test_corpus_deterministic_and_distinct():
    a = [K.to_dict() for K in enumerate_corpus(4)]
    b = [K.to_dict() for K in enumerate_corpus(4)]
    assert a == b
    corpus = list(enumerate_corpus(4))
    for K, L in itertools.combinations(corpus, 2):
        assert are_isomorphic(K, L) is None


def test_json_roundtrip_and_unknown_fields(c4):
    assert SimplicialComplex.from_dict(c4.to_dict()) == c4
    doc = dict(c4.to_dict(), colour="red")
    with pytest.raises(Exception):
        SimplicialComplex.from_dict(doc)


facet_lists = st.lists(
    st.sets(st.integers(0, 5), min_size=1, max_size=4), min_size=1, max_size=6
)


@settings(max_examples=200, deadline=None)
@given(facet_lists)
def test_normalization_idempotent(facets):
    K = build_complex(facets)
    again = build_complex([K.simplex_labels(m) for m in K.facet_masks], labels=K.labels)
    assert again == K


@settings(max_examples=100, deadline=None)
@given(facet_lists)
def test_facets_form_antichain(facets):
    K = build_complex(facets)
    for a, b in itertools.permutations(K.facets, 2):
        assert not a <= b
    assert simplex_set(K) == all_simplices(K)
