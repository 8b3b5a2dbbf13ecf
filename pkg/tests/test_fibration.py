import itertools

import pytest

from simpcat import (
    UNBOUNDED,
    build_complex,
    compose,
    constant_map,
    enumerate_corpus,
    es_bounded,
    fiber,
    identity,
    is_fibration_over,
    projection,
    scat,
    standard_complex,
)
from simpcat.complex import are_isomorphic
from simpcat.contiguity import SimplicialMap, simplicial_maps
from simpcat.errors import EmptyFiber
from simpcat.fibration import (
    ES_SEMANTICS,
    check_fibration_inequalities,
    es_composition_check,
    es_equivalence_crosscheck,
    exact_lifts,
    fibers_equivalent,
)

from conftest import brute_component, brute_contiguous, brute_maps, brute_null, brute_scat


def edge_into_c4():
    c4 = standard_complex("cycle", 4)
    e = build_complex([["a", "b"]])
    return SimplicialMap(e, c4, (0, 1))


def brute_is_fibration(p, universe):
    E, B = p.domain, p.codomain
    for K in universe:
        maps_kb = brute_maps(K, B)
        maps_ke = brute_maps(K, E)
        lifts = {a: [x for x in maps_ke if tuple(p.assignment[v] for v in x) == a] for a in maps_kb}
        for f, g in itertools.product(maps_kb, maps_kb):
            if not brute_contiguous(K, B, f, g):
                continue
            for f_hat in lifts[f]:
                cls = brute_component(K, E, f_hat)
                if not any(g_hat in cls for g_hat in lifts[g]):
                    return False
    return True


def test_fiber_examples(c4):
    L = standard_complex("path", 3)
    p = projection(c4, L, 1)
    for b in range(c4.n_vertices):
        assert are_isomorphic(fiber(p, b).complex, L) is not None
    assert fiber(identity(c4), 2).complex.n_vertices == 1
    assert fiber(constant_map(c4, c4, 1), 1).complex == c4
    with pytest.raises(EmptyFiber):
        fiber(constant_map(c4, c4, 1), 0)


def test_fibers_equivalent_examples(c4):
    assert fibers_equivalent(projection(c4, standard_complex("simplex", 1), 1))
    assert fibers_equivalent(identity(c4))
    # fibres: a point over x, a 4-cycle over y
    E = build_complex([["p", "q1"], ["q1", "q2"], ["q2", "q3"], ["q3", "q4"], ["q4", "q1"]])
    B = build_complex([["x", "y"]])
    p = SimplicialMap(E, B, (0, 1, 1, 1, 1))
    assert not fibers_equivalent(p)


def test_exact_lifts_oracle(c4):
    p = projection(c4, standard_complex("simplex", 1), 1)
    K = standard_complex("path", 3)
    for a in list(simplicial_maps(K, c4))[:10]:
        f = SimplicialMap(K, c4, a)
        got = sorted(exact_lifts(p, f))
        want = [x for x in brute_maps(K, p.domain) if tuple(p.assignment[v] for v in x) == a]
        assert got == want


def test_fibration_examples():
    universe = enumerate_corpus(3)
    c4 = standard_complex("cycle", 4)
    assert is_fibration_over(projection(c4, standard_complex("simplex", 1), 1), universe).verified
    assert is_fibration_over(identity(c4), universe).verified
    verdict = is_fibration_over(edge_into_c4(), universe)
    assert verdict.status == "counterexample"
    ce = verdict.counterexample
    assert compose(edge_into_c4(), ce.f_hat) == ce.f


@pytest.mark.parametrize("make", [
    lambda: projection(standard_complex("cycle", 3), standard_complex("simplex", 1), 1),
    lambda: projection(standard_complex("path", 3), standard_complex("path", 2), 1),
    lambda: identity(standard_complex("cycle", 4)),
    edge_into_c4,
    lambda: SimplicialMap(standard_complex("path", 3), standard_complex("simplex", 1), (0, 1, 1)),
    lambda: SimplicialMap(standard_complex("cycle", 4), standard_complex("path", 3), (0, 1, 2, 1)),
])
def test_fibration_matches_oracle(make):
    p = make()
    universe = enumerate_corpus(2)
    assert is_fibration_over(p, universe).verified == brute_is_fibration(p, universe)


def test_fibration_monotone_in_universe():
    p = projection(standard_complex("cycle", 3), standard_complex("path", 2), 1)
    assert is_fibration_over(p, enumerate_corpus(3)).verified
    for n in (1, 2):
        assert is_fibration_over(p, enumerate_corpus(n)).verified


def test_inequalities(c4):
    p = projection(c4, standard_complex("simplex", 1), 1)
    report = check_fibration_inequalities(p, 0)
    assert report["scat_E"] == 1 and report["scat_B"] == 1 and report["scat_F"] == 0
    assert report["map_inequality"] and report["space_inequality"]
    ident = check_fibration_inequalities(identity(c4), 0)
    assert ident["scat_i"] == 0 and ident["map_inequality"]
    const = check_fibration_inequalities(constant_map(c4, c4, 0), 0)
    assert const["scat_p"] == 0 and const["map_bound"] == const["scat_i"]


def brute_es(f, universe, n_max):
    K = f.domain
    L = f.codomain
    for n in range(n_max + 1):
        for M in universe:
            if brute_scat(M, M, tuple(range(M.n_vertices))) != n:
                continue
            for h in brute_maps(M, K):
                fh = tuple(f.assignment[x] for x in h)
                if not brute_null(M, L, fh):
                    return n - 1
    return n_max


def test_es_examples(c4):
    universe = enumerate_corpus(4)
    assert es_bounded(constant_map(c4, c4, 0), universe).value is UNBOUNDED
    res = es_bounded(identity(c4), universe)
    assert res.value == 0 < scat(c4)[0] and res.semantics == ES_SEMANTICS
    assert res.witness is not None


def test_es_oracle():
    universe = enumerate_corpus(3)
    c3 = standard_complex("cycle", 3)
    c4 = standard_complex("cycle", 4)
    cases = [identity(c3), identity(c4)]
    P = standard_complex("path", 3)
    cases.append(SimplicialMap(P, c3, (0, 1, 2)))
    cases.append(SimplicialMap(c3, c3, (1, 2, 0)))
    for f in cases:
        res = es_bounded(f, universe, n_max=2)
        if brute_null(f.domain, f.codomain, f.assignment):
            assert res.value is UNBOUNDED
        else:
            assert res.value == brute_es(f, universe, 2)


def test_es_zero_always_passes():
    universe = enumerate_corpus(3)
    c3 = standard_complex("cycle", 3)
    assert es_bounded(identity(c3), universe, n_max=0).value == 0


def test_es_crosscheck(c4):
    universe = enumerate_corpus(4)
    for f in (identity(c4), constant_map(c4, c4, 0)):
        for n in (0, 1):
            report = es_equivalence_crosscheck(f, universe, n)
            assert report["agree"], report


def test_es_composition(c4):
    universe = enumerate_corpus(3)
    report = es_composition_check(constant_map(c4, c4, 0), identity(c4), universe)
    assert report["failed"] == 0 and report["bound"] == "unbounded"
    report = es_composition_check(identity(c4), identity(c4), universe)
    assert report["failed"] == 0 and "caveat" in report
