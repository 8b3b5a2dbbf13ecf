"""Exhaustive enumeration of small connected complexes up to isomorphism."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .complex import SimplicialComplex, bits, default_labels
from .errors import ResourceLimit

HARD_VERTEX_CAP = 6


@dataclass(frozen=True)
class Corpus:
    complexes: tuple[SimplicialComplex, ...]
    max_vertices: int
    max_facets: Optional[int]
    exhaustive: bool = True

    def __len__(self):
        return len(self.complexes)

    def __iter__(self):
        return iter(self.complexes)

    def restrict(self, max_vertices: int) -> "Corpus":
        return Corpus(
            tuple(K for K in self.complexes if K.n_vertices <= max_vertices),
            min(max_vertices, self.max_vertices),
            self.max_facets,
            self.exhaustive,
        )


def _antichains(n: int, max_facets: Optional[int]):
    """Antichains of subsets of ``range(n)`` that cover every element."""
    full = (1 << n) - 1
    if n == 1:
        yield (1,)
        return
    # singletons would be isolated vertices; n >= 2 connected complexes have none
    subsets = [m for m in range(1, full + 1) if bin(m).count("1") >= 2]
    subsets.sort(key=lambda m: (-bin(m).count("1"), m))
    limit = max_facets if max_facets is not None else len(subsets)

    def rec(start, chosen, covered):
        if covered == full:
            yield tuple(chosen)
        if len(chosen) == limit:
            return
        for i in range(start, len(subsets)):
            s = subsets[i]
            if any(s & c == s for c in chosen):
                continue
            chosen.append(s)
            yield from rec(i + 1, chosen, covered | s)
            chosen.pop()

    yield from rec(0, [], 0)


def _connected(n: int, facets) -> bool:
    comp = facets[0]
    changed = True
    while changed:
        changed = False
        for f in facets:
            if f & comp and f & ~comp:
                comp |= f
                changed = True
    return comp == (1 << n) - 1


def canonical_form(n: int, facets) -> tuple[int, ...]:
    """Least sorted facet-mask tuple over signature-respecting relabellings."""
    sig = []
    for v in range(n):
        sig.append(tuple(sorted(bin(f).count("1") for f in facets if f >> v & 1)))
    order = sorted(range(n), key=lambda v: sig[v])
    groups = [list(g) for _, g in itertools.groupby(order, key=lambda v: sig[v])]
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [0] * n
        pos = 0
        for block in choice:
            for v in block:
                perm[v] = pos
                pos += 1
        form = tuple(sorted(sum(1 << perm[v] for v in bits(f)) for f in facets))
        if best is None or form < best:
            best = form
    return best


def enumerate_corpus(
    max_vertices: int, max_facets: Optional[int] = None, hard_cap: int = HARD_VERTEX_CAP
) -> Corpus:
    """All connected complexes with at most ``max_vertices`` vertices, one per iso class.

    Order: vertex count, then facet count, then canonical facet masks.
    """
    if max_vertices > hard_cap:
        raise ResourceLimit(f"corpus enumeration capped at {hard_cap} vertices")
    found = []
    for n in range(1, max_vertices + 1):
        forms = set()
        for facets in _antichains(n, max_facets):
            if _connected(n, facets):
                forms.add(canonical_form(n, facets))
        for form in sorted(forms, key=lambda f: (len(f), f)):
            found.append(SimplicialComplex(default_labels(n), form))
    return Corpus(tuple(found), max_vertices, max_facets, True)
