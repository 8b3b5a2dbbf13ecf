"""Simplicial LS category of complexes and maps, computed exactly.

Covers are searched over facet-generated subcomplexes: any part ``U`` with
``f|U ~ *`` can be shrunk to the closure of the facets it contains without
losing the property, and those closures still cover.  The search space is
therefore the subset lattice of facets, and goodness is downward closed in it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .complex import (
    SimplicialComplex,
    Subcomplex,
    bits,
    categorical_product,
    facet_subset_subcomplex,
    fresh_label,
    mask_of,
    product_vertex,
)
from .contiguity import (
    ContiguityChain,
    SimplicialMap,
    compose,
    core,
    identity,
    image_mask,
    is_null_class,
    null_decision,
    restrict,
    verify_chain,
)
from .errors import BadParameter, DisconnectedComplex, PasteFailure, ResourceLimit
from .search import DEFAULT_LIMITS, SearchLimits

MAX_SUBSETS = 1 << 16
GSCAT_EXACT_SIMPLEX_CAP = 12


@dataclass(frozen=True)
class Cover:
    """Parts of ``map.domain`` with a chain ``map|part ~ constant`` for each.

    A geometric cover instead carries chains ``id_part ~ constant`` inside the
    part itself (strong collapsibility of each part).
    """

    map: SimplicialMap
    parts: tuple[Subcomplex, ...]
    chains: tuple[ContiguityChain, ...]
    geometric: bool = False

    @property
    def size(self) -> int:
        return len(self.parts)

    def facet_sets(self) -> list[list[int]]:
        return [list(p.facet_indices()) for p in self.parts]

    def to_dict(self) -> dict:
        return {
            "kind": "geometric" if self.geometric else "categorical",
            "parts": self.facet_sets(),
            "chains": [c.to_dict() for c in self.chains],
        }


@dataclass(frozen=True)
class GoodSetFamily:
    base: tuple[int, ...]
    maximal_good: tuple[int, ...]

    def as_index_sets(self) -> list[tuple[int, ...]]:
        return [tuple(bits(m)) for m in self.maximal_good]


def _require(f: SimplicialMap):
    if not f.domain.connected:
        raise DisconnectedComplex("domain must be connected")
    if not f.codomain.connected:
        raise DisconnectedComplex("codomain must be connected")


def is_categorical_for(
    f: SimplicialMap, U: Subcomplex, limits: SearchLimits = DEFAULT_LIMITS
) -> Optional[ContiguityChain]:
    """Chain certifying ``f|U ~ *``, or None when ``f|U`` is not null."""
    if not f.codomain.connected:
        raise DisconnectedComplex("codomain must be connected")
    return is_null_class(restrict(f, U), limits)


def _restricted_assignment(f: SimplicialMap, subset: int):
    sub = facet_subset_subcomplex(f.domain, subset)
    return sub.complex, tuple(f.assignment[p] for p in sub.embedding)


def _part_is_null(f: SimplicialMap, subset: int, limits) -> bool:
    dom, a = _restricted_assignment(f, subset)
    return null_decision(SimplicialMap(dom, f.codomain, a), limits)


def _maximal_down_closed(m: int, good, max_subsets: int) -> list[int]:
    """Maximal sets of a downward-closed family on ``m`` elements, levelwise."""
    full = (1 << m) - 1
    if good(full):
        return [full]
    level = [1 << i for i in range(m) if good(1 << i)]
    seen = set(level)
    maximal = []
    tested = len(level)
    while level:
        nxt = []
        extended = set()
        for s in level:
            top = s.bit_length()
            for j in range(top, m):
                cand = s | 1 << j
                # every subset one smaller must already be good
                if any(cand & ~(1 << i) not in seen for i in bits(s)):
                    continue
                tested += 1
                if tested > max_subsets:
                    raise ResourceLimit(f"good-set exploration exceeded {max_subsets} subsets")
                if good(cand):
                    nxt.append(cand)
        nxt_set = set(nxt)
        for c in nxt:
            for i in bits(c):
                extended.add(c & ~(1 << i))
        maximal.extend(s for s in level if s not in extended)
        seen = nxt_set
        level = sorted(nxt_set)
    return _sort_sets(maximal)


def _sort_sets(masks) -> list[int]:
    return sorted(set(masks), key=lambda s: tuple(bits(s)))


def maximal_good_sets(
    f: SimplicialMap, limits: SearchLimits = DEFAULT_LIMITS, max_subsets: int = MAX_SUBSETS
) -> GoodSetFamily:
    """All maximal facet-index sets whose closure is categorical for ``f``."""
    _require(f)
    memo: dict[int, bool] = {}

    def good(s):
        if s not in memo:
            memo[s] = _part_is_null(f, s, limits)
        return memo[s]

    found = _maximal_down_closed(f.domain.n_facets, good, max_subsets)
    return GoodSetFamily(f.domain.facet_masks, tuple(found))


def min_set_cover(n_elements: int, family) -> tuple[int, tuple[int, ...]]:
    """Exact minimum cover of ``range(n_elements)`` by sets from ``family`` (bitmasks).

    Iterative deepening on the cover size with a counting bound; within a
    size the search walks index combinations in lexicographic order, so the
    returned selection is the lexicographically least optimal one.
    """
    family = list(family)
    full = (1 << n_elements) - 1
    union = 0
    for s in family:
        union |= s
    if union != full:
        raise BadParameter("family does not cover every element")
    if full == 0:
        return 0, ()
    largest = max(bin(s).count("1") for s in family)
    # suffix unions let us prune branches that can no longer cover
    suffix = [0] * (len(family) + 1)
    for i in range(len(family) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | family[i]

    def search(k, start, covered, chosen):
        if covered == full:
            return list(chosen)
        if k == 0:
            return None
        missing = full & ~covered
        if -(-bin(missing).count("1") // largest) > k:
            return None
        if (covered | suffix[start]) != full:
            return None
        low = missing & -missing
        for i in range(start, len(family)):
            if not family[i] & missing:
                continue
            chosen.append(i)
            found = search(k - 1, i + 1, covered | family[i], chosen)
            chosen.pop()
            if found is not None:
                return found
            if family[i] & low and (covered | suffix[i + 1]) & low == 0:
                break
        return None

    for k in range(1, len(family) + 1):
        found = search(k, 0, 0, [])
        if found is not None:
            return k, tuple(found)
    raise AssertionError("unreachable: the family covers")


def _cover_from_sets(f: SimplicialMap, subsets, limits) -> Cover:
    parts, chains = [], []
    for s in subsets:
        part = facet_subset_subcomplex(f.domain, s)
        chain = is_null_class(restrict(f, part), limits)
        if chain is None:
            raise AssertionError("selected part is not categorical")
        parts.append(part)
        chains.append(chain)
    return Cover(f, tuple(parts), tuple(chains))


def scat_map(
    f: SimplicialMap, limits: SearchLimits = DEFAULT_LIMITS, max_subsets: int = MAX_SUBSETS
) -> tuple[int, Cover]:
    """``scat(f)`` with a certifying minimum categorical cover."""
    family = maximal_good_sets(f, limits, max_subsets)
    count, selection = min_set_cover(f.domain.n_facets, family.maximal_good)
    cover = _cover_from_sets(f, [family.maximal_good[i] for i in selection], limits)
    return count - 1, cover


def scat(K: SimplicialComplex, limits: SearchLimits = DEFAULT_LIMITS, max_subsets: int = MAX_SUBSETS):
    return scat_map(identity(K), limits, max_subsets)


def subspace_scat(
    K: SimplicialComplex, A: Subcomplex, limits: SearchLimits = DEFAULT_LIMITS, max_subsets: int = MAX_SUBSETS
) -> tuple[int, Cover]:
    """Least ``n`` with ``n+1`` subcomplexes of ``K``, categorical in ``K``, covering ``A``.

    Parts are taken inside ``A`` (intersecting a categorical part with ``A``
    keeps it categorical), generated by maximal simplices of ``A`` and tested
    as subcomplexes of ``K`` against ``id_K``.
    """
    if A.parent != K:
        raise BadParameter("A must be a subcomplex of K")
    if not K.connected:
        raise DisconnectedComplex("K must be connected")
    gens = A.generators
    idK = identity(K)
    memo: dict[int, bool] = {}

    def part(s):
        return Subcomplex(K, tuple(gens[i] for i in bits(s)))

    def good(s):
        if s not in memo:
            memo[s] = null_decision(restrict(idK, part(s)), limits)
        return memo[s]

    maximal = _maximal_down_closed(len(gens), good, max_subsets)
    count, selection = min_set_cover(len(gens), maximal)
    parts, chains = [], []
    for i in selection:
        U = part(maximal[i])
        parts.append(U)
        chains.append(is_null_class(restrict(idK, U), limits))
    return count - 1, Cover(idK, tuple(parts), tuple(chains))


# -- geometric category --------------------------------------------------------


def _collapsible(K: SimplicialComplex) -> bool:
    return K.connected and core(K).core.n_vertices == 1


def _collapse_chain(K: SimplicialComplex) -> ContiguityChain:
    """``id_K ~ constant`` for a strong collapsible ``K``."""
    return core(K).idr_chain


def gscat_upper(
    K: SimplicialComplex, max_subsets: int = MAX_SUBSETS
) -> tuple[int, Cover]:
    """Minimum over facet-generated covers by strong collapsible parts.

    Collapsibility is not inherited by subcomplexes, so this is only an upper
    bound for the geometric category.
    """
    if not K.connected:
        raise DisconnectedComplex("K must be connected")
    m = K.n_facets
    if (1 << m) - 1 > max_subsets:
        raise ResourceLimit(f"{m} facets exceed the subset budget for gscat_upper")
    good = []
    for s in range(1, 1 << m):
        if _collapsible(facet_subset_subcomplex(K, s).complex):
            good.append(s)
    good_set = set(good)
    maximal = [s for s in good if not any(t != s and t & s == s for t in good_set)]
    maximal = _sort_sets(maximal)
    count, selection = min_set_cover(m, maximal)
    parts = [facet_subset_subcomplex(K, maximal[i]) for i in selection]
    chains = tuple(_collapse_chain(p.complex) for p in parts)
    return count - 1, Cover(identity(K), tuple(parts), chains, geometric=True)


def gscat_exact(K: SimplicialComplex, cap: int = GSCAT_EXACT_SIMPLEX_CAP) -> int:
    """Exact geometric category by enumerating every subcomplex (order ideals)."""
    if not K.connected:
        raise DisconnectedComplex("K must be connected")
    simplices = sorted(K.simplex_masks, key=lambda s: (bin(s).count("1"), s))
    if len(simplices) > cap:
        raise ResourceLimit(f"{len(simplices)} simplices exceed the gscat_exact cap {cap}")
    index = {s: i for i, s in enumerate(simplices)}
    below = []
    for s in simplices:
        m = 0
        for t in simplices:
            if t & s == t:
                m |= 1 << index[t]
        below.append(m)
    ideals = set()
    for gens in range(1, 1 << len(simplices)):
        closure = 0
        for i in bits(gens):
            closure |= below[i]
        ideals.add(closure)
    good = []
    for ideal in ideals:
        gen_masks = [simplices[i] for i in bits(ideal)]
        sub = Subcomplex(K, tuple(gen_masks))
        if _collapsible(sub.complex):
            good.append(ideal)
    maximal = [s for s in good if not any(t != s and t & s == s for t in good)]
    count, _ = min_set_cover(len(simplices), _sort_sets(maximal))
    return count - 1


# -- products ------------------------------------------------------------------


def diagonal(K: SimplicialComplex, cap: int = 64) -> SimplicialMap:
    P = categorical_product(K, K, cap)
    return SimplicialMap(K, P, tuple(product_vertex(K, K, v, v) for v in range(K.n_vertices)))


def projection(K: SimplicialComplex, L: SimplicialComplex, which: int = 1, cap: int = 64) -> SimplicialMap:
    P = categorical_product(K, L, cap)
    nl = L.n_vertices
    if which == 1:
        return SimplicialMap(P, K, tuple(p // nl for p in range(P.n_vertices)))
    if which == 2:
        return SimplicialMap(P, L, tuple(p % nl for p in range(P.n_vertices)))
    raise BadParameter("projection index must be 1 or 2")


def product_map(f: SimplicialMap, g: SimplicialMap, cap: int = 64) -> SimplicialMap:
    src = categorical_product(f.domain, g.domain, cap)
    dst = categorical_product(f.codomain, g.codomain, cap)
    out = []
    for x in range(f.domain.n_vertices):
        for y in range(g.domain.n_vertices):
            out.append(product_vertex(f.codomain, g.codomain, f.assignment[x], g.assignment[y]))
    return SimplicialMap(src, dst, tuple(out))


# -- factorization -------------------------------------------------------------


@dataclass(frozen=True)
class FactorizationWitness:
    """``K --ell--> K' --g--> L`` with ``g o ell ~ f`` and a collapsible cover of ``K'``."""

    K_prime: SimplicialComplex
    ell: SimplicialMap
    g: SimplicialMap
    gscat_cover: Cover
    comm_chain: ContiguityChain

    def to_dict(self) -> dict:
        return {
            "K_prime": self.K_prime.to_dict(),
            "ell": self.ell.labelled(),
            "g": self.g.labelled(),
            "gscat_cover": self.gscat_cover.to_dict(),
            "comm_chain": self.comm_chain.to_dict(),
        }


def _star_centre(h: SimplicialMap) -> Optional[int]:
    """Least vertex whose closed star contains the whole image of ``h``."""
    images = [h.image(m) for m in h.domain.facet_masks]
    for w in range(h.codomain.n_vertices):
        if all(h.codomain.contains(img | 1 << w) for img in images):
            return w
    return None


def _short_null_steps(h: SimplicialMap, chain: ContiguityChain) -> list[tuple]:
    """Assignments from ``h`` to a constant: one step when the image sits in a
    closed star, otherwise ``chain`` cut at its first constant map."""
    w = _star_centre(h)
    if w is not None:
        return [h.assignment, (w,) * h.domain.n_vertices] if not h.is_constant else [h.assignment]
    steps = []
    for m in chain.maps:
        steps.append(m.assignment)
        if m.is_constant:
            break
    return steps


def build_factorization(f: SimplicialMap, cover: Cover) -> FactorizationWitness:
    """Factor ``f`` through a union of cones, one per cover part.

    Over part ``j`` with null chain ``f|U_j = h_0 ~ h_1 ~ ... ~ h_m = const``
    the new complex carries a layered cylinder: layer 0 is ``U_j`` itself
    (shared with every other part), layer ``t`` is a copy of ``U_j`` joined
    simplex-wise to layer ``t+1``, and the last layer is coned off by an apex.
    When the chain has a single step this is exactly the cone ``C U_j`` glued
    along ``U_j``.  ``g`` sends layer ``t`` by ``h_t`` and the apex to the
    constant, which is simplicial because consecutive ``h_t`` are contiguous;
    ``ell`` is the layer-0 inclusion, so ``g o ell = f`` on the nose.  Each
    layered cone is strong collapsible (layer ``t`` is dominated by layer
    ``t+1``, the last layer by the apex), giving ``gscat(K') <= n``.
    """
    K, L = f.domain, f.codomain
    if cover.map != f:
        raise BadParameter("cover does not belong to f")
    labels = list(K.labels)
    taken = set(labels)
    values = list(f.assignment)
    facets = []
    part_facets = []
    for j, (part, chain) in enumerate(zip(cover.parts, cover.chains)):
        if chain.start != restrict(f, part) or not chain.end.is_constant:
            raise PasteFailure(f"chain of part {j} does not certify f|U ~ *")
        emb = part.embedding
        steps = _short_null_steps(restrict(f, part), chain)
        layers = [list(emb)]
        for t in range(1, len(steps) - 1):
            ids = []
            for i, p in enumerate(emb):
                lb = fresh_label(taken, f"{K.labels[p]}~{j}.{t}")
                taken.add(lb)
                labels.append(lb)
                values.append(steps[t][i])
                ids.append(len(labels) - 1)
            layers.append(ids)
        apex_label = fresh_label(taken, f"^{j}")
        taken.add(apex_label)
        labels.append(apex_label)
        values.append(steps[-1][0])
        apex = len(labels) - 1
        mine = []
        for gen in part.complex.facet_masks:
            local = list(bits(gen))
            for t in range(len(layers) - 1):
                mine.append(mask_of(layers[t][i] for i in local) | mask_of(layers[t + 1][i] for i in local))
            mine.append(mask_of(layers[-1][i] for i in local) | 1 << apex)
        facets.extend(mine)
        part_facets.append(mine)
    K_prime = SimplicialComplex(tuple(labels), tuple(facets))
    ell = SimplicialMap(K, K_prime, tuple(range(K.n_vertices)))
    try:
        g = SimplicialMap(K_prime, L, tuple(values))
    except Exception as exc:  # pragma: no cover - guarded by the chain checks above
        raise PasteFailure(f"glued map is not simplicial: {exc}") from exc
    parts = [Subcomplex(K_prime, tuple(ms)) for ms in part_facets]
    chains = tuple(_collapse_chain(p.complex) for p in parts)
    gcover = Cover(identity(K_prime), tuple(parts), chains, geometric=True)
    comm = ContiguityChain((compose(g, ell),))
    if comm.start != f:
        comm = ContiguityChain((compose(g, ell), f))
    return FactorizationWitness(K_prime, ell, g, gcover, comm)


def verify_cover(cover: Cover) -> bool:
    """Replay a cover certificate: parts cover every facet and each chain verifies."""
    f = cover.map
    K = f.domain
    if cover.geometric and f != identity(K):
        return False
    if len(cover.parts) != len(cover.chains):
        return False
    covered = set()
    for part, chain in zip(cover.parts, cover.chains):
        if part.parent != K:
            return False
        covered.update(m for m in K.facet_masks if part.contains(m))
        expected = identity(part.complex) if cover.geometric else restrict(f, part)
        if chain.domain != expected.domain or chain.codomain != expected.codomain:
            return False
        if not chain.end.is_constant:
            return False
        if not verify_chain(chain, start=expected):
            return False
    return covered == set(K.facet_masks)


def verify_factorization(w: FactorizationWitness, f: SimplicialMap, n: int) -> bool:
    """Check ``gscat(K') <= n`` through the witness cover and ``g o ell ~ f``."""
    try:
        if w.ell.domain != f.domain or w.ell.codomain != w.K_prime:
            return False
        if w.g.domain != w.K_prime or w.g.codomain != f.codomain:
            return False
        cover = w.gscat_cover
        if not cover.geometric or cover.map.domain != w.K_prime or cover.size > n + 1:
            return False
        if not verify_cover(cover):
            return False
        return bool(verify_chain(w.comm_chain, start=compose(w.g, w.ell), end=f))
    except Exception:
        return False
