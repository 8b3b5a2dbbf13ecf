"""Replays every invariant and property over a bounded corpus.

Each property yields one of pass / fail / skipped.  A property is skipped only
when none of its instances could be checked, and every skipped instance
carries its reason.  Failures keep replayable counterexamples (complexes and
maps as JSON documents).
"""
from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

from . import contiguity as _contiguity
from .category import (
    build_factorization,
    diagonal,
    gscat_exact,
    gscat_upper,
    maximal_good_sets,
    product_map,
    projection,
    scat_map,
    subspace_scat,
    verify_cover,
    verify_factorization,
    Cover,
    _cover_from_sets,
)
from .certificates import (
    chain_certificate,
    check_certificate,
    cover_certificate,
    digest,
    factorization_certificate,
    fence_certificate,
)
from .complex import (
    SimplicialComplex,
    all_simplices,
    are_isomorphic,
    bits,
    build_complex,
    categorical_product,
    cone,
    facet_subset_subcomplex,
    mask_of,
)
from .contiguity import (
    SimplicialMap,
    compose,
    constant_map,
    contiguity_neighbors,
    core,
    identity,
    inclusion,
    is_contiguous,
    is_null_class,
    null_decision,
    paste_maps,
    restrict,
    same_contiguity_class,
    simplicial_maps,
    strong_equivalence_inverse,
    verify_chain,
)
from .corpus import enumerate_corpus
from .errors import DisconnectedComplex, EmptyFiber, ResourceLimit
from .fibration import (
    UNBOUNDED,
    check_fibration_inequalities,
    es_bounded,
    es_equivalence_crosscheck,
    fibers_equivalent,
    is_fibration_over,
)
from .finite_space import (
    all_monotone_maps,
    cat_map,
    cat_space,
    chain_to_fence,
    chi_map,
    enumerate_posets,
    face_poset,
    fence_to_chain,
    homotopic,
    k_map,
    MonotoneMap,
    null_homotopy,
    space_identity,
    verify_fence,
)
from .search import DEFAULT_LIMITS, SearchLimits

GROUPS = ("scomplex", "contiguity", "category", "products", "finite_space", "fibration", "certificates")


@dataclass(frozen=True)
class SuiteConfig:
    max_vertices: int = 5  # corpus for properties of complexes
    map_vertices: int = 4  # domain and codomain cap for properties of maps
    maps_per_pair: int = 16  # sample size for the heavier map properties
    triple_maps: int = 3  # maps per pair inside composition triples
    product_vertex_cap: int = 12
    product_facet_cap: int = 9
    diagonal_vertex_cap: int = 16
    face_poset_cap: int = 15
    poset_points: int = 4
    fibration_universe: int = 3
    es_universe: int = 4
    seed: int = 0
    groups: tuple[str, ...] = ()
    limits: SearchLimits = DEFAULT_LIMITS

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "limits"}
        out["groups"] = list(self.groups)
        out["limits"] = {"max_states": self.limits.max_states, "max_neighbors": self.limits.max_neighbors}
        return out


@dataclass
class PropertyResult:
    name: str
    group: str
    statement: str
    checked: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    skips: Counter = field(default_factory=Counter)
    notes: Counter = field(default_factory=Counter)  # observations that are neither passes nor failures
    seconds: float = 0.0

    @property
    def status(self) -> str:
        if self.failure_count:
            return "fail"
        return "pass" if self.checked else "skipped"

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "name": self.name,
            "group": self.group,
            "statement": self.statement,
            "status": self.status,
            "checked": self.checked,
            "failed": self.failure_count,
            "skipped": dict(sorted(self.skips.items())),
            "notes": dict(sorted(self.notes.items())),
            "counterexamples": self.failures,
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


class Recorder:
    MAX_EXAMPLES = 5

    def __init__(self, result: PropertyResult):
        self.result = result

    def check(self, ok: bool, example=None):
        self.result.checked += 1
        if not ok:
            self.result.failure_count += 1
            if len(self.result.failures) < self.MAX_EXAMPLES:
                self.result.failures.append(example() if callable(example) else example)

    def skip(self, reason: str):
        self.result.skips[reason] += 1

    def note(self, observation: str):
        self.result.notes[observation] += 1

    def attempt(self, fn, *args):
        """Run one instance; budget exhaustion becomes a logged skip."""
        try:
            fn(*args)
        except ResourceLimit as exc:
            self.skip(f"resource limit: {exc}")


@dataclass(frozen=True)
class Property:
    name: str
    group: str
    statement: str
    run: object


PROPERTIES: dict[str, Property] = {}


def prop(name: str, group: str, statement: str):
    def register(fn):
        PROPERTIES[name] = Property(name, group, statement, fn)
        return fn

    return register


def _map_doc(f: SimplicialMap) -> dict:
    return f.to_dict()


# -- shared context --------------------------------------------------------------


class Context:
    """Corpora, sampled maps and memoised category values for one run."""

    def __init__(self, config: SuiteConfig):
        self.config = config
        self.limits = config.limits
        self._scat: dict = {}
        self._maps: dict = {}
        self._certified: dict = {}

    def corpus(self, n: int):
        return enumerate_corpus(n)

    @cached_property
    def complexes(self):
        return self.corpus(self.config.max_vertices).complexes

    @cached_property
    def small(self):
        return self.corpus(self.config.map_vertices).complexes

    @cached_property
    def pairs(self):
        return list(itertools.product(self.small, self.small))

    def maps(self, K, L, limit=None) -> list[SimplicialMap]:
        """All simplicial maps, or a seeded sample of ``limit`` of them."""
        key = (K, L)
        if key not in self._maps:
            self._maps[key] = [SimplicialMap(K, L, a) for a in simplicial_maps(K, L)]
        maps = self._maps[key]
        if limit is None or len(maps) <= limit:
            return maps
        rng = random.Random(f"{self.config.seed}:{K.describe()}:{L.describe()}")
        chosen = sorted(rng.sample(range(len(maps)), limit))
        if K == L:
            ident = maps.index(identity(K))
            if ident not in chosen:
                chosen[-1] = ident
                chosen.sort()
        return [maps[i] for i in chosen]

    def all_maps(self, limit=None):
        for K, L in self.pairs:
            yield from self.maps(K, L, limit)

    def scat_map(self, f):
        if f not in self._scat:
            self._scat[f] = scat_map(f, self.limits)
        return self._scat[f]

    def scat(self, K):
        return self.scat_map(identity(K))[0]

    def certified(self, f) -> bool:
        """Whether the cover behind scat_map(f) replays through the chain checker."""
        if f not in self._certified:
            self._certified[f] = verify_cover(self.scat_map(f)[1])
        return self._certified[f]

    def within_product_cap(self, K, L) -> bool:
        c = self.config
        return K.n_vertices * L.n_vertices <= c.product_vertex_cap and K.n_facets * L.n_facets <= c.product_facet_cap


# -- simplicial complexes ------------------------------------------------------------


@prop("normalization_idempotence", "scomplex", "build_complex(facets(K)) = K")
def _normalization(ctx: Context, rec: Recorder):
    for K in ctx.complexes:
        facets = [K.simplex_labels(m) for m in K.facet_masks]
        rec.check(build_complex(facets, labels=K.labels) == K, lambda: {"complex": K.to_dict()})


@prop("product_projection_law", "scomplex", "facets of K x L are exactly the products of facets")
def _product_law(ctx: Context, rec: Recorder):
    for K, L in ctx.pairs:
        if K.n_vertices * L.n_vertices > ctx.config.diagonal_vertex_cap:
            rec.skip("product exceeds the vertex cap")
            continue
        P = categorical_product(K, L)
        nL = L.n_vertices
        expected = set()
        for s in K.facet_masks:
            for t in L.facet_masks:
                expected.add(mask_of(x * nL + y for x in bits(s) for y in bits(t)))
        projected_ok = all(
            mask_of(v // nL for v in bits(F)) in K.facet_masks and mask_of(v % nL for v in bits(F)) in L.facet_masks
            for F in P.facet_masks
        )
        rec.check(projected_ok and set(P.facet_masks) == expected, lambda: {"K": K.to_dict(), "L": L.to_dict()})


@prop("cone_collapsible", "scomplex", "cone(K) is connected and its core is a single vertex")
def _cone(ctx: Context, rec: Recorder):
    for K in ctx.complexes:
        C = cone(K)
        rec.check(C.connected and core(C).core.n_vertices == 1, lambda: {"complex": K.to_dict()})


@prop("isomorphism_equivalence", "scomplex", "are_isomorphic is an equivalence; the corpus is pairwise non-isomorphic")
def _iso(ctx: Context, rec: Recorder):
    rng = random.Random(ctx.config.seed)
    corpus = ctx.complexes
    for i, K in enumerate(corpus):
        for L in corpus[i + 1:]:
            rec.check(are_isomorphic(K, L) is None, lambda: {"K": K.to_dict(), "L": L.to_dict()})
    for K in corpus:
        copies = []
        for _ in range(2):
            perm = list(range(K.n_vertices))
            rng.shuffle(perm)
            facets = tuple(sum(1 << perm[v] for v in bits(m)) for m in K.facet_masks)
            copies.append(SimplicialComplex(K.labels, tuple(sorted(facets))))
        A, B = copies
        ok = (
            are_isomorphic(K, K) is not None
            and are_isomorphic(K, A) is not None
            and are_isomorphic(A, K) is not None
            and are_isomorphic(A, B) is not None
        )
        rec.check(ok, lambda: {"complex": K.to_dict()})


@prop("simplex_count_oracle", "scomplex", "all_simplices agrees with subset enumeration")
def _simplex_count(ctx: Context, rec: Recorder):
    for K in ctx.small:
        oracle = {
            frozenset(bits(m)) for m in range(1, 1 << K.n_vertices) if any(m & f == m for f in K.facet_masks)
        }
        rec.check(all_simplices(K) == oracle, lambda: {"complex": K.to_dict()})


# -- contiguity ------------------------------------------------------------------------


@prop("contiguity_reflexive_symmetric", "contiguity", "contiguity is reflexive and symmetric")
def _contiguity_rs(ctx: Context, rec: Recorder):
    for K, L in ctx.pairs:
        maps = ctx.maps(K, L, ctx.config.triple_maps * 2)
        for f in maps:
            rec.check(is_contiguous(f, f), lambda: {"f": _map_doc(f)})
            for g in maps:
                rec.check(is_contiguous(f, g) == is_contiguous(g, f), lambda: {"f": _map_doc(f), "g": _map_doc(g)})


@prop("constants_single_class", "contiguity", "all constant maps into a connected complex are in one class")
def _constants(ctx: Context, rec: Recorder):
    for K, L in ctx.pairs:
        base = constant_map(K, L, 0)
        for w in range(1, L.n_vertices):
            c = constant_map(K, L, w)
            chain = same_contiguity_class(base, c, ctx.limits)
            rec.check(chain is not None and bool(verify_chain(chain, base, c)), lambda: {"K": K.to_dict(), "L": L.to_dict(), "w": w})


@prop("composition_respects_classes", "contiguity", "h o chain and chain o h verify")
def _composition_chains(ctx: Context, rec: Recorder):
    small = ctx.small
    for K, L in ctx.pairs:
        for f in ctx.maps(K, L, ctx.config.triple_maps):
            chain = is_null_class(f, ctx.limits)
            if chain is None:
                nb = next((g for g in contiguity_neighbors(f) if g != f), None)
                if nb is None:
                    continue
                chain = same_contiguity_class(f, nb, ctx.limits)
            for M in small[:: max(1, len(small) // 4)]:
                for h in ctx.maps(L, M, 1):
                    post = chain.post(h)
                    rec.check(bool(verify_chain(post, compose(h, chain.start), compose(h, chain.end))),
                              lambda: {"f": _map_doc(f), "h": _map_doc(h)})
                for h in ctx.maps(M, K, 1):
                    pre = chain.pre(h)
                    rec.check(bool(verify_chain(pre, compose(chain.start, h), compose(chain.end, h))),
                              lambda: {"f": _map_doc(f), "h": _map_doc(h)})


@prop("core_idempotent", "contiguity", "the core of a core is isomorphic to it")
def _core_idem(ctx: Context, rec: Recorder):
    for K in ctx.complexes:
        C = core(K).core
        rec.check(are_isomorphic(core(C).core, C) is not None, lambda: {"complex": K.to_dict()})


@prop("core_retraction", "contiguity", "idr chain verifies and r o i = id on the core")
def _core_idr(ctx: Context, rec: Recorder):
    for K in ctx.complexes:
        cd = core(K)
        ok = bool(verify_chain(cd.idr_chain, identity(K), compose(cd.inclusion, cd.retraction)))
        ok = ok and compose(cd.retraction, cd.inclusion) == identity(cd.core)
        rec.check(ok, lambda: {"complex": K.to_dict()})


def class_partition_disagreements(K, L, maps, limits):
    """Compare the naive partition of ``maps`` into classes (full BFS over all
    maps, no core reduction) with the core-reduced decisions.

    Every pair is covered: the reduced class labels must induce the same
    partition.  ``same_contiguity_class`` is also called against each map's own
    representative and the next one, and null decisions are compared with and
    without reduction.
    """
    from .search import component

    naive = {}
    reps = []
    for f in maps:
        if f.assignment in naive:
            continue
        comp = component(f.assignment, lambda s: _contiguity._neighbor_assignments(K, L, s), limits)
        for a in comp:
            naive[a] = len(reps)
        reps.append(f)
    bad = []
    label_of_class = {}
    for f in maps:
        mine = naive[f.assignment]
        key = _contiguity.class_key(f, limits)
        if label_of_class.setdefault(mine, key) != key:
            bad.append((f, reps[mine]))
        if same_contiguity_class(f, reps[mine], limits) is None:
            bad.append((f, reps[mine]))
        if len(reps) > 1:
            other = reps[(mine + 1) % len(reps)]
            if same_contiguity_class(f, other, limits) is not None:
                bad.append((f, other))
        if null_decision(f, limits) != null_decision(f, limits, reduce=False):
            bad.append((f, None))
    if len(set(label_of_class.values())) != len(label_of_class):
        bad.append((reps[0], None))
    return len(reps), bad


@prop("decision_stability", "contiguity", "core-reduced class decisions agree with naive full-space BFS")
def _stability(ctx: Context, rec: Recorder):
    for K, L in ctx.pairs:
        if K.n_vertices > 4:
            continue

        def one():
            _, bad = class_partition_disagreements(K, L, ctx.maps(K, L), ctx.limits)
            rec.check(not bad, lambda: {
                "f": _map_doc(bad[0][0]),
                "g": None if bad[0][1] is None else bad[0][1].labelled(),
            })

        rec.attempt(one)


@prop("paste_lemma", "contiguity", "f1 u g1 ~ f2 u g2 for contiguous pasteable pairs")
def _paste(ctx: Context, rec: Recorder):
    for K, L in ctx.pairs:
        if K.n_facets < 2:
            continue
        m = K.n_facets
        U = facet_subset_subcomplex(K, (1 << (m // 2)) - 1)
        V = facet_subset_subcomplex(K, ((1 << m) - 1) ^ ((1 << (m // 2)) - 1))
        for F1 in ctx.maps(K, L, ctx.config.triple_maps):
            F2 = next((g for g in contiguity_neighbors(F1) if g != F1), F1)
            W1, p1 = paste_maps(U, restrict(F1, U), V, restrict(F1, V))
            W2, p2 = paste_maps(U, restrict(F2, U), V, restrict(F2, V))
            chain = same_contiguity_class(p1, p2, ctx.limits)
            rec.check(chain is not None and bool(verify_chain(chain, p1, p2)), lambda: {"F1": _map_doc(F1), "F2": _map_doc(F2)})


# -- category of maps ---------------------------------------------------------------------


@prop("scat_identity", "category", "scat(id_K) = scat(K)")
def _scat_id(ctx: Context, rec: Recorder):
    for K in ctx.complexes:
        n, cover = ctx.scat_map(identity(K))
        rec.check(n == ctx.scat(K) and verify_cover(cover), lambda: {"complex": K.to_dict()})


@prop("composition_bound", "category", "scat(g o f) <= min(scat(g), scat(f))")
def _composition(ctx: Context, rec: Recorder):
    k = ctx.config.triple_maps
    for K, L in ctx.pairs:
        fs = ctx.maps(K, L, k)
        for M in ctx.small:
            for g in ctx.maps(L, M, k):
                for f in fs:
                    gf = compose(g, f)
                    a, b, c = ctx.scat_map(gf)[0], ctx.scat_map(g)[0], ctx.scat_map(f)[0]
                    certified = ctx.certified(gf) and ctx.certified(g) and ctx.certified(f)
                    rec.check(a <= min(b, c) and certified, lambda: {
                        "f": _map_doc(f), "g": _map_doc(g), "scat_gf": a, "scat_g": b, "scat_f": c,
                        "covers_verify": certified,
                    })


@prop("min_bound", "category", "scat(f) <= min(scat(K), scat(L))")
def _min_bound(ctx: Context, rec: Recorder):
    for f in ctx.all_maps():
        n = ctx.scat_map(f)[0]
        rec.check(n <= min(ctx.scat(f.domain), ctx.scat(f.codomain)), lambda: {"f": _map_doc(f), "scat": n})


@prop("contiguity_invariance", "category", "f ~ g implies scat(f) = scat(g)")
def _invariance(ctx: Context, rec: Recorder):
    for f in ctx.all_maps(ctx.config.maps_per_pair):
        for g in itertools.islice((g for g in contiguity_neighbors(f) if g != f), 2):
            a, b = ctx.scat_map(f)[0], ctx.scat_map(g)[0]
            rec.check(a == b, lambda: {"f": _map_doc(f), "g": g.labelled(), "scat_f": a, "scat_g": b})


@prop("scat_zero_iff_null", "category", "scat(f) = 0 iff f ~ *")
def _zero_iff_null(ctx: Context, rec: Recorder):
    for f in ctx.all_maps():
        n = ctx.scat_map(f)[0]
        rec.check((n == 0) == null_decision(f, ctx.limits), lambda: {"f": _map_doc(f), "scat": n})


@prop("cone_scat_zero", "category", "scat(cone(K)) = 0")
def _cone_scat(ctx: Context, rec: Recorder):
    for K in ctx.complexes:
        rec.check(ctx.scat(cone(K)) == 0, lambda: {"complex": K.to_dict()})


@prop("strong_equivalence", "category", "a strong equivalence f has scat(f) = scat(K) = scat(L)")
def _strong_eq(ctx: Context, rec: Recorder):
    candidates = []
    for K in ctx.complexes:
        cd = core(K)
        candidates += [cd.inclusion, cd.retraction]
    for K, L in ctx.pairs:
        if core(K).core.n_vertices == core(L).core.n_vertices:
            candidates += ctx.maps(K, L, 4)
    for f in candidates:
        def one(f=f):
            if strong_equivalence_inverse(f, ctx.limits) is None:
                return
            n = ctx.scat_map(f)[0]
            rec.check(n == ctx.scat(f.domain) == ctx.scat(f.codomain), lambda: {"f": _map_doc(f), "scat": n})

        rec.attempt(one)


@prop("subspace_equality", "category", "subspace_scat(K, A) = scat(inclusion A -> K)")
def _subspace(ctx: Context, rec: Recorder):
    for K in ctx.small:
        for s in range(1, 1 << K.n_facets):
            A = facet_subset_subcomplex(K, s)
            if not A.complex.connected:
                continue
            a = subspace_scat(K, A, ctx.limits)[0]
            b = ctx.scat_map(inclusion(A))[0]
            rec.check(a == b, lambda: {"K": K.to_dict(), "A": [K.simplex_labels(g) for g in A.generators], "subspace": a, "map": b})


@prop("scat_gscat_chain", "category", "scat(K) <= gscat_exact(K) <= gscat_upper(K)")
def _gscat(ctx: Context, rec: Recorder):
    for K in ctx.complexes:
        try:
            exact = gscat_exact(K)
        except ResourceLimit:
            rec.skip("more simplices than the gscat_exact cap")
            continue
        upper = gscat_upper(K)[0]
        s = ctx.scat(K)
        if exact < upper:
            rec.note("gscat_exact below the facet-generated bound")
        rec.check(s <= exact <= upper, lambda: {"complex": K.to_dict(), "scat": s, "gscat_exact": exact, "gscat_upper": upper})


@prop("factorization_roundtrip", "category", "every computed cover factors f through K' with gscat(K') <= n")
def _factorization(ctx: Context, rec: Recorder):
    for f in ctx.all_maps(ctx.config.maps_per_pair):
        n, cover = ctx.scat_map(f)
        w = build_factorization(f, cover)
        cert = check_certificate(factorization_certificate(w, f, n))
        ok = verify_factorization(w, f, n) and bool(cert) and w.gscat_cover.size <= n + 1
        if ok and w.K_prime.n_facets <= 12:
            ok = gscat_upper(w.K_prime)[0] <= n
        rec.check(ok, lambda: {"f": _map_doc(f), "n": n, "reason": cert.reason})
        # converse: a witness from any verified cover bounds the computed value
        family = maximal_good_sets(f, ctx.limits).maximal_good
        wide = _cover_from_sets(f, family, ctx.limits)
        w2 = build_factorization(f, wide)
        level = wide.size - 1
        rec.check(verify_factorization(w2, f, level) and n <= level, lambda: {"f": _map_doc(f), "level": level, "n": n})


# -- products --------------------------------------------------------------------------


@prop("diagonal", "products", "scat(diagonal K -> K x K) = scat(K)")
def _diagonal(ctx: Context, rec: Recorder):
    for K in ctx.small:
        if K.n_vertices ** 2 > ctx.config.diagonal_vertex_cap:
            rec.skip("K x K exceeds the vertex cap")
            continue
        d = diagonal(K, cap=ctx.config.diagonal_vertex_cap)
        a, b = ctx.scat_map(d)[0], ctx.scat(K)
        rec.check(a == b, lambda: {"complex": K.to_dict(), "scat_diagonal": a, "scat": b})


@prop("projection", "products", "scat(p1: K x L -> K) = scat(K)")
def _projection(ctx: Context, rec: Recorder):
    for K, L in ctx.pairs:
        if not ctx.within_product_cap(K, L):
            rec.skip("K x L exceeds the product cap")
            continue
        p = projection(K, L, 1, cap=ctx.config.product_vertex_cap)
        a, b = ctx.scat_map(p)[0], ctx.scat(K)
        rec.check(a == b, lambda: {"K": K.to_dict(), "L": L.to_dict(), "scat_p": a, "scat_K": b})


@prop("product_inequality", "products", "scat(K x L) <= (scat(K)+1)(scat(L)+1) - 1")
def _product_ineq(ctx: Context, rec: Recorder):
    for K, L in ctx.pairs:
        if not ctx.within_product_cap(K, L):
            rec.skip("K x L exceeds the product cap")
            continue
        P = categorical_product(K, L, cap=ctx.config.product_vertex_cap)
        a = ctx.scat(P)
        bound = (ctx.scat(K) + 1) * (ctx.scat(L) + 1) - 1
        rec.check(a <= bound, lambda: {"K": K.to_dict(), "L": L.to_dict(), "scat": a, "bound": bound})


@prop("map_product_inequality", "products", "scat(f x g) <= (scat(f)+1)(scat(g)+1) - 1")
def _map_product(ctx: Context, rec: Recorder):
    small = [K for K in ctx.small if K.n_vertices <= 3]
    for K, K2, L, L2 in itertools.product(small, repeat=4):
        if not (ctx.within_product_cap(K, L) and ctx.within_product_cap(K2, L2)):
            rec.skip("a product exceeds the product cap")
            continue
        for f in ctx.maps(K, K2, 1):
            for g in ctx.maps(L, L2, 1):
                h = product_map(f, g, cap=ctx.config.product_vertex_cap)
                a = ctx.scat_map(h)[0]
                bound = (ctx.scat_map(f)[0] + 1) * (ctx.scat_map(g)[0] + 1) - 1
                rec.check(a <= bound, lambda: {"f": _map_doc(f), "g": _map_doc(g), "scat": a, "bound": bound})


# -- finite spaces -----------------------------------------------------------------------


def _chains_for(ctx: Context, f: SimplicialMap):
    chain = is_null_class(f, ctx.limits)
    if chain is not None:
        yield chain
    nb = next((g for g in contiguity_neighbors(f) if g != f), None)
    if nb is not None:
        yield same_contiguity_class(f, nb, ctx.limits)


def _chi_sized(ctx, K) -> bool:
    return K.simplex_count <= ctx.config.face_poset_cap


@prop("chi_preserves_classes", "finite_space", "chi maps each chain to a verifying fence; chi(f) and chi(g) are homotopic")
def _chi_classes(ctx: Context, rec: Recorder):
    for K, L in ctx.pairs:
        if not (_chi_sized(ctx, K) and _chi_sized(ctx, L)):
            rec.skip("face poset exceeds the cap")
            continue
        for f in ctx.maps(K, L, ctx.config.triple_maps):
            for chain in _chains_for(ctx, f):
                def one(chain=chain):
                    fence = chain_to_fence(chain)
                    a, b = chi_map(chain.start), chi_map(chain.end)
                    ok = verify_fence(fence, a, b) and homotopic(a, b, ctx.limits) is not None
                    rec.check(ok, lambda: chain_certificate(chain))

                rec.attempt(one)


def _poset_maps(ctx: Context):
    posets = enumerate_posets(ctx.config.poset_points)
    rng = random.Random(ctx.config.seed)
    for X in posets:
        for Y in posets:
            maps = list(all_monotone_maps(X, Y))
            if len(maps) > ctx.config.maps_per_pair:
                maps = sorted(rng.sample(maps, ctx.config.maps_per_pair))
            for a in maps:
                yield MonotoneMap(X, Y, a)


@prop("k_preserves_homotopy", "finite_space", "K maps each fence to a verifying chain; K(f) and K(g) are in one class")
def _k_fences(ctx: Context, rec: Recorder):
    for f in _poset_maps(ctx):
        def one(f=f):
            fence = null_homotopy(f, ctx.limits)
            if fence is None:
                return
            chain = fence_to_chain(fence)
            a, b = k_map(fence.start), k_map(fence.end)
            ok = bool(verify_chain(chain, a, b)) and same_contiguity_class(a, b, ctx.limits) is not None
            rec.check(ok, lambda: fence_certificate(fence))

        rec.attempt(one)


@prop("cat_chi_bound", "finite_space", "cat(chi(f)) <= scat(f)")
def _cat_chi(ctx: Context, rec: Recorder):
    for K, L in ctx.pairs:
        if not (_chi_sized(ctx, K) and _chi_sized(ctx, L)):
            rec.skip("face poset exceeds the cap")
            continue
        for f in ctx.maps(K, L, ctx.config.maps_per_pair):
            def one(f=f):
                c = cat_map(chi_map(f), ctx.limits)[0]
                s = ctx.scat_map(f)[0]
                rec.check(c <= s, lambda: {"f": _map_doc(f), "cat_chi": c, "scat": s})

            rec.attempt(one)


@prop("scat_k_bound", "finite_space", "scat(K(f)) <= cat(f)")
def _scat_k(ctx: Context, rec: Recorder):
    for f in _poset_maps(ctx):
        def one(f=f):
            c = cat_map(f, ctx.limits)[0]
            s = ctx.scat_map(k_map(f))[0]
            rec.check(s <= c, lambda: {"f": f.to_dict(), "cat": c, "scat_k": s})

        rec.attempt(one)


@prop("cat_space_identity", "finite_space", "cat(X) = cat(id_X)")
def _cat_space(ctx: Context, rec: Recorder):
    spaces = list(enumerate_posets(ctx.config.poset_points))
    spaces += [face_poset(K) for K in ctx.small if _chi_sized(ctx, K)]
    for X in spaces:
        def one(X=X):
            a = cat_space(X, ctx.limits)[0]
            b = cat_map(space_identity(X), ctx.limits)[0]
            rec.check(a == b, lambda: {"space": X.to_dict(), "cat": a, "cat_id": b})

        rec.attempt(one)


# -- fibrations and Es --------------------------------------------------------------------


def _fibration_candidates(ctx: Context):
    small = [K for K in ctx.small if K.n_vertices <= 3]
    out = []
    for K, L in itertools.product(small, repeat=2):
        if K.n_vertices * L.n_vertices <= ctx.config.product_vertex_cap:
            out.append(projection(K, L, 1, cap=ctx.config.product_vertex_cap))
    for K in small:
        for L in small:
            out += [f for f in ctx.maps(K, L, 2) if f.image(K.vertex_mask) == L.vertex_mask]
    return out


@prop("projection_fibration", "fibration", "p1: K x L -> K is verified, has equivalent fibres and meets both bounds")
def _projection_fibration(ctx: Context, rec: Recorder):
    universe = ctx.corpus(ctx.config.fibration_universe)
    for K, L in ctx.pairs:
        if not ctx.within_product_cap(K, L):
            rec.skip("K x L exceeds the product cap")
            continue
        p = projection(K, L, 1, cap=ctx.config.product_vertex_cap)
        v = is_fibration_over(p, universe, ctx.limits)
        if v.status == "resource_limited":
            rec.skip(f"resource limit: {v.reason}")
            continue
        report = check_fibration_inequalities(p, 0, ctx.limits) if v.verified else {}
        ok = v.verified and fibers_equivalent(p) and report["map_inequality"] and report["space_inequality"]
        rec.check(ok, lambda: {"p": _map_doc(p), "verdict": v.to_dict(), "inequalities": report})


@prop("fibration_monotone", "fibration", "verified over a universe implies verified over every sub-universe")
def _fib_monotone(ctx: Context, rec: Recorder):
    big = ctx.corpus(ctx.config.fibration_universe)
    sub = big.restrict(ctx.config.fibration_universe - 1)
    for p in _fibration_candidates(ctx):
        v = is_fibration_over(p, big, ctx.limits)
        if v.status == "resource_limited":
            rec.skip("fibration search hit its limit")
            continue
        if v.verified:
            w = is_fibration_over(p, sub, ctx.limits)
            rec.check(w.verified, lambda: {"p": _map_doc(p)})


@prop("verified_fibers_equivalent", "fibration", "verified fibrations have strongly equivalent fibres")
def _fib_fibers(ctx: Context, rec: Recorder):
    universe = ctx.corpus(ctx.config.fibration_universe)
    for p in _fibration_candidates(ctx):
        v = is_fibration_over(p, universe, ctx.limits)
        if not v.verified:
            continue
        try:
            ok = fibers_equivalent(p)
        except (DisconnectedComplex, EmptyFiber) as exc:
            # comparing fibres presumes connected fibres; the universe has no
            # disconnected complexes to lift them along
            rec.skip(f"outside precondition: {exc} for {p.domain.describe()} -> {p.codomain.describe()}")
            continue
        rec.check(ok, lambda: {"p": _map_doc(p)})


def _es_maps(ctx: Context):
    return list(ctx.all_maps(ctx.config.triple_maps))


@prop("es_invariance", "fibration", "f0 ~ f1 implies Es(f0) = Es(f1)")
def _es_inv(ctx: Context, rec: Recorder):
    universe = ctx.corpus(ctx.config.es_universe)
    for f in _es_maps(ctx):
        g = next((g for g in contiguity_neighbors(f) if g != f), None)
        if g is None:
            continue
        a = es_bounded(f, universe, 3, ctx.limits).value
        b = es_bounded(g, universe, 3, ctx.limits).value
        rec.check(a == b, lambda: {"f": _map_doc(f), "g": g.labelled(), "es_f": repr(a), "es_g": repr(b)})


@prop("es_unbounded_iff_null", "fibration", "Es is Unbounded exactly for null-class maps")
def _es_null(ctx: Context, rec: Recorder):
    universe = ctx.corpus(ctx.config.es_universe)
    for f in _es_maps(ctx):
        v = es_bounded(f, universe, 3, ctx.limits).value
        rec.check((v is UNBOUNDED) == null_decision(f, ctx.limits), lambda: {"f": _map_doc(f), "es": repr(v)})


@prop("es_below_scat", "fibration", "Es(f) < scat(K) for non-null f with K in the universe")
def _es_scat(ctx: Context, rec: Recorder):
    universe = ctx.corpus(ctx.config.es_universe)
    for f in _es_maps(ctx):
        v = es_bounded(f, universe, 3, ctx.limits).value
        if v is UNBOUNDED:
            continue
        s = ctx.scat(f.domain)
        rec.check(v < s, lambda: {"f": _map_doc(f), "es": v, "scat": s})


@prop("es_antitone", "fibration", "enlarging the universe never increases Es")
def _es_antitone(ctx: Context, rec: Recorder):
    big = ctx.corpus(ctx.config.es_universe)
    small = big.restrict(ctx.config.es_universe - 1)
    for f in _es_maps(ctx):
        a = es_bounded(f, small, 3, ctx.limits).value
        b = es_bounded(f, big, 3, ctx.limits).value
        if a is UNBOUNDED or b is UNBOUNDED:
            rec.check(a is b, lambda: {"f": _map_doc(f)})
        else:
            rec.check(b <= a, lambda: {"f": _map_doc(f), "small": a, "big": b})


@prop("es_crosscheck", "fibration", "the three characterisations of Es(f) >= n agree for n in {0, 1}")
def _es_cross(ctx: Context, rec: Recorder):
    universe = ctx.corpus(ctx.config.es_universe)
    for f in _es_maps(ctx):
        for n in (0, 1):
            report = es_equivalence_crosscheck(f, universe, n, ctx.limits)
            rec.check(report["agree"], lambda: {"f": _map_doc(f), "report": report})


# -- certificates ---------------------------------------------------------------------------


@prop("certificate_roundtrip", "certificates", "every emitted certificate re-validates from its JSON alone")
def _certs(ctx: Context, rec: Recorder):
    import json

    def replay(doc):
        rec.check(bool(check_certificate(json.loads(json.dumps(doc)))), lambda: doc)

    for K in ctx.complexes:
        n, cover = ctx.scat_map(identity(K))
        replay(cover_certificate(cover))
        if K.n_facets <= 8:
            replay(cover_certificate(gscat_upper(K)[1]))
    for f in ctx.all_maps(ctx.config.triple_maps):
        n, cover = ctx.scat_map(f)
        replay(cover_certificate(cover))
        replay(factorization_certificate(build_factorization(f, cover), f, n))
        chain = is_null_class(f, ctx.limits)
        if chain is not None:
            replay(chain_certificate(chain))
            if _chi_sized(ctx, f.domain) and _chi_sized(ctx, f.codomain):
                replay(fence_certificate(chain_to_fence(chain)))


# -- running ----------------------------------------------------------------------------------


@dataclass
class SuiteReport:
    config: SuiteConfig
    results: list[PropertyResult]

    @property
    def failed(self) -> list[PropertyResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def _body(self, timing: bool) -> dict:
        return {
            "config": self.config.to_dict(),
            "results": [r.to_dict(timing) for r in self.results],
            "summary": dict(sorted(Counter(r.status for r in self.results).items())),
        }

    @property
    def digest(self) -> str:
        """Hash of the report with timing fields left out."""
        return digest(self._body(timing=False))

    def to_dict(self, timing: bool = True) -> dict:
        body = self._body(timing)
        body["digest"] = self.digest
        return body


def selected(config: SuiteConfig) -> list[Property]:
    if not config.groups:
        return list(PROPERTIES.values())
    unknown = set(config.groups) - set(GROUPS)
    if unknown:
        from .errors import BadParameter

        raise BadParameter(f"unknown suite groups {sorted(unknown)}")
    return [p for p in PROPERTIES.values() if p.group in config.groups]


def run_property(name: str, config: SuiteConfig, ctx: Context = None) -> PropertyResult:
    p = PROPERTIES[name]
    ctx = ctx or Context(config)
    result = PropertyResult(p.name, p.group, p.statement)
    start = time.perf_counter()
    try:
        p.run(ctx, Recorder(result))
    except ResourceLimit as exc:
        result.skips[f"resource limit: {exc}"] += 1
    result.seconds = time.perf_counter() - start
    return result


def _run_group(args):
    names, config = args
    ctx = Context(config)
    return [run_property(n, config, ctx) for n in names]


def run_suite(config: SuiteConfig = SuiteConfig(), jobs: int = 1) -> SuiteReport:
    """Run the selected properties; results are listed in registration order
    whatever the number of workers."""
    props = selected(config)
    if jobs <= 1:
        ctx = Context(config)
        return SuiteReport(config, [run_property(p.name, config, ctx) for p in props])
    by_group: dict[str, list[str]] = {}
    for p in props:
        by_group.setdefault(p.group, []).append(p.name)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        done = {}
        for results in pool.map(_run_group, [(names, config) for names in by_group.values()]):
            for r in results:
                done[r.name] = r
    return SuiteReport(config, [done[p.name] for p in props])
