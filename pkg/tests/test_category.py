import dataclasses
import itertools
import random

import pytest

from simpcat import (
    build_complex,
    build_factorization,
    compose,
    cone,
    constant_map,
    diagonal,
    enumerate_corpus,
    generated_subcomplex,
    gscat_exact,
    gscat_upper,
    identity,
    is_null_class,
    product_map,
    projection,
    scat,
    scat_map,
    standard_complex,
    subspace_scat,
    validate_map,
    verify_cover,
    verify_factorization,
)
from simpcat.category import Cover, is_categorical_for, maximal_good_sets, min_set_cover
from simpcat.complex import Subcomplex, all_simplices, are_isomorphic, whole
from simpcat.contiguity import ContiguityChain, SimplicialMap, core
from simpcat.errors import DisconnectedComplex, ResourceLimit

from conftest import brute_maps, brute_scat, simplex_set


def test_categorical_parts(c4):
    f = identity(c4)
    for m in c4.facet_masks:
        assert is_categorical_for(f, generated_subcomplex(c4, [c4.simplex_labels(m)])) is not None
    path = generated_subcomplex(c4, [["a", "b"], ["b", "c"], ["c", "d"]])
    assert is_categorical_for(f, path) is not None
    assert is_categorical_for(f, whole(c4)) is None


def test_maximal_good_sets_examples(c4):
    tri = standard_complex("simplex", 2)
    assert maximal_good_sets(identity(tri)).as_index_sets() == [(0,)]
    fam = maximal_good_sets(identity(c4)).as_index_sets()
    assert len(fam) == 4 and all(len(s) == 3 for s in fam)
    assert maximal_good_sets(constant_map(c4, c4, 0)).as_index_sets() == [(0, 1, 2, 3)]


def test_min_set_cover_examples():
    assert min_set_cover(3, [0b111]) == (1, (0,))
    paths = [0b0111, 0b1011, 0b1101, 0b1110]
    count, sel = min_set_cover(4, paths)
    assert count == 2
    assert paths[sel[0]] | paths[sel[1]] == 0b1111
    assert min_set_cover(4, [1, 2, 4, 8])[0] == 4


def test_min_set_cover_oracle():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 7)
        family = sorted({rng.randint(1, (1 << n) - 1) for _ in range(rng.randint(1, 6))} | {1 << i for i in range(n)})
        best = next(
            k for k in range(1, n + 1)
            if any(sum(c) and _union(c) == (1 << n) - 1 for c in itertools.combinations(family, k))
        )
        count, sel = min_set_cover(n, family)
        assert count == best and _union([family[i] for i in sel]) == (1 << n) - 1


def _union(masks):
    out = 0
    for m in masks:
        out |= m
    return out


def test_scat_map_examples(c4):
    assert scat_map(constant_map(c4, c4, 1))[0] == 0
    n, cover = scat_map(identity(c4))
    assert n == 1 and verify_cover(cover)
    c6 = standard_complex("cycle", 6)
    rot = validate_map(c6, c6, {x: "abcdef"[(i + 3) % 6] for i, x in enumerate("abcdef")})
    assert scat_map(rot)[0] == 1 <= scat(c6)[0]


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_scat_simplex(n):
    assert scat(standard_complex("simplex", n))[0] == 0


@pytest.mark.parametrize("n", range(3, 9))
def test_scat_cycle(n):
    value, cover = scat(standard_complex("cycle", n))
    assert value == 1 and verify_cover(cover)


def test_scat_boundaries():
    assert scat(standard_complex("boundary_of_simplex", 2))[0] == 1
    assert scat(standard_complex("boundary_of_simplex", 3))[0] == 1


def test_scat_oracle_small():
    rng = random.Random(7)
    corpus = [K for K in enumerate_corpus(4) if K.n_facets <= 4]
    for K in corpus:
        assert scat(K)[0] == brute_scat(K, K, tuple(range(K.n_vertices)))
    for K, L in itertools.product(corpus[:12], corpus[:12]):
        maps = brute_maps(K, L)
        for a in rng.sample(maps, min(2, len(maps))):
            assert scat_map(SimplicialMap(K, L, a))[0] == brute_scat(K, L, a)


def test_scat_rejects_disconnected():
    with pytest.raises(DisconnectedComplex):
        scat(build_complex([["a", "b"], ["c", "d"]]))


def test_subspace_examples(c4):
    assert subspace_scat(c4, whole(c4))[0] == scat(c4)[0]
    assert subspace_scat(c4, generated_subcomplex(c4, [["a", "b"]]))[0] == 0
    opposite = generated_subcomplex(c4, [["a", "b"], ["c", "d"]])
    # the path ab, bc, cd contains both edges and is categorical in C4
    assert subspace_scat(c4, opposite)[0] == 0


def test_subspace_matches_inclusion():
    for K in list(enumerate_corpus(4))[:12]:
        for m in K.facet_masks:
            A = Subcomplex(K, tuple(x for x in K.facet_masks if x != m)) if K.n_facets > 1 else whole(K)
            inc = SimplicialMap(A.complex, K, A.embedding)
            if A.complex.connected:
                assert subspace_scat(K, A)[0] == scat_map(inc)[0]


def test_gscat_examples(c4):
    assert gscat_upper(standard_complex("simplex", 3))[0] == 0
    assert gscat_upper(c4)[0] == 1
    assert gscat_exact(standard_complex("simplex", 2)) == 0
    assert gscat_exact(c4) == 1
    with pytest.raises(ResourceLimit):
        gscat_exact(standard_complex("cycle", 8))


def _brute_gscat(K):
    simplices = sorted(simplex_set(K), key=lambda s: (len(s), sorted(s)))
    good = []
    for r in range(1, len(simplices) + 1):
        for combo in itertools.combinations(simplices, r):
            chosen = set(combo)
            if any(frozenset(c) not in chosen for s in combo for k in range(1, len(s)) for c in itertools.combinations(s, k)):
                continue
            sub = build_complex([sorted(s) for s in combo])
            if not sub.connected:
                continue
            if core(sub).core.n_vertices == 1:
                good.append(chosen)
    target = set(simplices)
    for k in range(1, len(target) + 1):
        for parts in itertools.combinations(good, k):
            if set().union(*parts) == target:
                return k - 1


def test_gscat_exact_oracle():
    tiny = [K for K in enumerate_corpus(4) if len(all_simplices(K)) <= 10]
    assert tiny
    for K in tiny:
        exact = gscat_exact(K)
        assert exact == _brute_gscat(K)
        assert scat(K)[0] <= exact <= gscat_upper(K)[0]


def test_products_examples(c4):
    assert scat_map(diagonal(c4))[0] == 1
    e = standard_complex("simplex", 1)
    assert scat_map(projection(c4, e, 1))[0] == scat(c4)[0]
    P = build_complex([["a", "b"], ["b", "c"]])
    f = identity(P)
    g = identity(standard_complex("cycle", 3))
    assert scat_map(product_map(f, g))[0] <= (0 + 1) * (1 + 1) - 1


def test_factorization_constant(c4):
    f = constant_map(c4, c4, 0)
    n, cover = scat_map(f)
    w = build_factorization(f, cover)
    assert are_isomorphic(w.K_prime, cone(c4)) is not None
    assert verify_factorization(w, f, n)


def test_factorization_identity(c4):
    f = identity(c4)
    n, cover = scat_map(f)
    w = build_factorization(f, cover)
    # ell is the inclusion of the bottom layer, so the triangle commutes exactly
    assert compose(w.g, w.ell) == f
    assert w.gscat_cover.size <= n + 1
    assert verify_factorization(w, f, n)
    corrupted = dataclasses.replace(w, ell=SimplicialMap(c4, w.K_prime, (0,) * 4))
    assert not verify_factorization(corrupted, f, n)


def test_factorization_single_step_parts_are_cones():
    # every part's image sits in a closed star, so each part is coned off directly
    K = standard_complex("path", 3)
    L = standard_complex("cycle", 4)
    f = SimplicialMap(K, L, (0, 1, 0))
    n, cover = scat_map(f)
    w = build_factorization(f, cover)
    assert n == 0 and w.K_prime.n_vertices == K.n_vertices + 1
    assert are_isomorphic(w.K_prime, cone(K)) is not None


def test_factorization_rejects_uncollapsible_k_prime(c4):
    f = constant_map(c4, c4, 0)
    _, gcover = gscat_upper(c4)
    fake = dataclasses.replace(
        build_factorization(f, scat_map(f)[1]),
        K_prime=c4,
        ell=identity(c4),
        g=f,
        gscat_cover=gcover,
        comm_chain=ContiguityChain((f,)),
    )
    assert not verify_factorization(fake, f, 0)


def test_factorization_sweep():
    rng = random.Random(11)
    corpus = list(enumerate_corpus(4))
    for K, L in itertools.product(corpus, corpus):
        maps = brute_maps(K, L)
        for a in rng.sample(maps, min(2, len(maps))):
            f = SimplicialMap(K, L, a)
            n, cover = scat_map(f)
            w = build_factorization(f, cover)
            assert verify_factorization(w, f, n)
            assert gscat_upper(w.K_prime)[0] <= n if w.K_prime.n_facets <= 12 else True


def test_cover_verification_detects_missing_part(c4):
    n, cover = scat(c4)
    truncated = Cover(cover.map, cover.parts[:1], cover.chains[:1])
    assert not verify_cover(truncated)


def test_scat_of_null_maps_is_zero():
    corpus = list(enumerate_corpus(3))
    for K, L in itertools.product(corpus, corpus):
        for a in brute_maps(K, L):
            f = SimplicialMap(K, L, a)
            assert (scat_map(f)[0] == 0) == (is_null_class(f) is not None)
    assert scat(cone(standard_complex("cycle", 5)))[0] == 0
