"""Brute-force oracles shared by the tests.

These deliberately avoid the optimized machinery: maps are enumerated with
itertools.product, simplices by subset enumeration, contiguity classes by a
plain BFS over the full map space, and covers by trying every combination.
"""
from __future__ import annotations

import itertools
from collections import deque

import pytest

from simpcat import build_complex, standard_complex
from simpcat.contiguity import clear_caches


def simplex_set(K):
    """Every non-empty subset of every facet, as frozensets of vertex ids."""
    out = set()
    for facet in K.facets:
        vs = sorted(facet)
        for r in range(1, len(vs) + 1):
            out.update(frozenset(c) for c in itertools.combinations(vs, r))
    return out


def brute_maps(K, L):
    """All simplicial vertex maps K -> L as tuples."""
    simplices = simplex_set(L)
    found = []
    for a in itertools.product(range(L.n_vertices), repeat=K.n_vertices):
        if all(frozenset(a[v] for v in f) in simplices for f in K.facets):
            found.append(a)
    return found


def brute_contiguous(K, L, a, b):
    simplices = simplex_set(L)
    return all(frozenset(a[v] for v in f) | frozenset(b[v] for v in f) in simplices for f in K.facets)


def brute_component(K, L, a):
    """The contiguity class of ``a`` by BFS over all maps."""
    maps = brute_maps(K, L)
    seen = {a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in maps:
            if y not in seen and brute_contiguous(K, L, x, y):
                seen.add(y)
                queue.append(y)
    return seen


def brute_null(K, L, a):
    return any(len(set(m)) == 1 for m in brute_component(K, L, a))


def brute_scat(K, L, a):
    """Least n such that n+1 facet-generated parts with null restriction cover K."""
    facets = list(K.facets)
    good = []
    for r in range(1, len(facets) + 1):
        for idx in itertools.combinations(range(len(facets)), r):
            verts = sorted(set().union(*(facets[i] for i in idx)))
            pos = {v: i for i, v in enumerate(verts)}
            sub = build_complex([[pos[v] for v in facets[i]] for i in idx])
            # build_complex relabels; vertex order is preserved because labels are ints in order
            restricted = tuple(a[v] for v in verts)
            if brute_null(sub, L, restricted):
                good.append(set(idx))
    everything = set(range(len(facets)))
    for k in range(1, len(facets) + 1):
        for combo in itertools.combinations(good, k):
            if set().union(*combo) == everything:
                return k - 1
    raise AssertionError("single facets are always good")


def iso_classes(n):
    """Connected complexes on exactly n vertices up to isomorphism, by brute force."""
    if n == 1:
        return 1
    subsets = [frozenset(c) for r in range(2, n + 1) for c in itertools.combinations(range(n), r)]
    seen = set()
    for r in range(1, len(subsets) + 1):
        for fam in itertools.combinations(subsets, r):
            if any(a < b for a in fam for b in fam):
                continue
            if set().union(*fam) != set(range(n)):
                continue
            # connectivity of the 1-skeleton
            reach, stack = {0}, [0]
            while stack:
                v = stack.pop()
                for f in fam:
                    if v in f:
                        for w in f - reach:
                            reach.add(w)
                            stack.append(w)
            if len(reach) != n:
                continue
            canon = min(
                tuple(sorted(tuple(sorted(p[v] for v in f)) for f in fam))
                for p in itertools.permutations(range(n))
            )
            seen.add(canon)
    return len(seen)


@pytest.fixture
def c4():
    return standard_complex("cycle", 4)


@pytest.fixture(autouse=True)
def _fresh_caches():
    # mutant tests patch the contiguity predicate; never let memo tables leak across tests
    clear_caches()
    yield
    clear_caches()


# criterion number -> (passed, one-line detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
