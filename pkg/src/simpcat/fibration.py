"""Fibres, a bounded check of the contiguity-lifting property, and essential
simplicial category relative to a finite universe of complexes.

Neither the lifting property nor Es can be decided by a finite search in
general.  Everything here quantifies over an explicit universe (a Corpus), and
results say so: a fibration verdict is "verified over the universe", and an Es
value is an upper bound on the true value that is exact for the universe.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .category import gscat_exact, gscat_upper, scat, scat_map
from .complex import SimplicialComplex, Subcomplex, are_isomorphic, full_subcomplex
from .contiguity import (
    SimplicialMap,
    _neighbor_assignments,
    compose,
    core,
    inclusion,
    null_decision,
    same_contiguity_class,
    simplicial_maps,
)
from .corpus import Corpus
from .errors import DisconnectedComplex, EmptyFiber, ResourceLimit
from .search import DEFAULT_LIMITS, SearchLimits

ES_SEMANTICS = "upper bound on Es(f); exact relative to universe"
MAX_MAPS_PER_PAIR = 2000


class _Unbounded:
    """Es of a null-class map: every composite is null, at every level."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Unbounded"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()


def _as_json(value):
    return "unbounded" if value is UNBOUNDED else value


# -- fibres ----------------------------------------------------------------------


def fiber(p: SimplicialMap, b: int) -> Subcomplex:
    """Subcomplex of simplices of ``E`` sent onto the single vertex ``b``."""
    mask = 0
    for v, w in enumerate(p.assignment):
        if w == b:
            mask |= 1 << v
    if not mask:
        raise EmptyFiber(f"nothing maps to {p.codomain.labels[b]}")
    return full_subcomplex(p.domain, mask)


def fibers_equivalent(p: SimplicialMap) -> bool:
    """All fibres connected with pairwise isomorphic cores."""
    cores = []
    for b in range(p.codomain.n_vertices):
        F = fiber(p, b).complex
        if not F.connected:
            raise DisconnectedComplex(f"fiber over {p.codomain.labels[b]} is disconnected")
        cores.append(core(F).core)
    return all(are_isomorphic(cores[0], C) is not None for C in cores[1:])


# -- lifting ---------------------------------------------------------------------


@dataclass(frozen=True)
class LiftCounterexample:
    """``f ~ g`` in one contiguity step, ``p o f_hat = f``, and no exact lift
    of ``g`` is in the class of ``f_hat`` (all ``lifts_searched`` were tried)."""

    K: SimplicialComplex
    f: SimplicialMap
    g: SimplicialMap
    f_hat: SimplicialMap
    lifts_searched: int

    def to_dict(self) -> dict:
        return {
            "K": self.K.to_dict(),
            "f": self.f.labelled(),
            "g": self.g.labelled(),
            "f_hat": self.f_hat.labelled(),
            "lifts_searched": self.lifts_searched,
        }


@dataclass(frozen=True)
class FibrationVerdict:
    status: str  # verified_over_universe | counterexample | resource_limited
    counterexample: Optional[LiftCounterexample] = None
    instances: int = 0
    reason: str = ""

    @property
    def verified(self) -> bool:
        return self.status == "verified_over_universe"

    def to_dict(self) -> dict:
        out = {"status": self.status, "instances": self.instances}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_dict()
        if self.reason:
            out["reason"] = self.reason
        return out


def _preimages(p: SimplicialMap) -> list[int]:
    pre = [0] * p.codomain.n_vertices
    for v, w in enumerate(p.assignment):
        pre[w] |= 1 << v
    return pre


def exact_lifts(p: SimplicialMap, f: SimplicialMap):
    """Maps ``f_hat: K -> E`` with ``p o f_hat = f``, lexicographically."""
    pre = _preimages(p)
    return simplicial_maps(f.domain, p.domain, [pre[w] for w in f.assignment])


def is_fibration_over(
    p: SimplicialMap, universe: Corpus, limits: SearchLimits = DEFAULT_LIMITS
) -> FibrationVerdict:
    """For every ``K`` in the universe, contiguous ``f ~ g: K -> B`` and exact
    lift ``f_hat`` of ``f``, look for an exact lift of ``g`` in the class of
    ``f_hat``.  One contiguity step suffices: lifting composes along chains."""
    E, B = p.domain, p.codomain
    if not E.connected or not B.connected:
        raise DisconnectedComplex("fibration check needs connected E and B")
    instances = 0
    try:
        for K in universe:
            for fa in simplicial_maps(K, B):
                f = SimplicialMap(K, B, fa)
                f_lifts = [SimplicialMap(K, E, a) for a in exact_lifts(p, f)]
                for ga in _neighbor_assignments(K, B, fa):
                    if ga == fa:
                        continue
                    g = SimplicialMap(K, B, ga)
                    g_lifts = [SimplicialMap(K, E, a) for a in exact_lifts(p, g)]
                    for f_hat in f_lifts:
                        instances += 1
                        if not _has_related_lift(f_hat, g_lifts, limits):
                            return FibrationVerdict(
                                "counterexample",
                                LiftCounterexample(K, f, g, f_hat, len(g_lifts)),
                                instances,
                            )
    except ResourceLimit as exc:
        return FibrationVerdict("resource_limited", None, instances, str(exc))
    return FibrationVerdict("verified_over_universe", None, instances)


def _has_related_lift(f_hat: SimplicialMap, g_lifts, limits) -> bool:
    E = f_hat.codomain
    # a lift contiguous to f_hat is the common case and needs no search
    for g_hat in g_lifts:
        if _contiguous(f_hat, g_hat, E):
            return True
    return any(same_contiguity_class(f_hat, g_hat, limits) is not None for g_hat in g_lifts)


def _contiguous(a: SimplicialMap, b: SimplicialMap, E: SimplicialComplex) -> bool:
    for m in a.domain.facet_masks:
        if not E.contains(a.image(m) | b.image(m)):
            return False
    return True


def check_fibration_inequalities(
    p: SimplicialMap, fiber_base: int, limits: SearchLimits = DEFAULT_LIMITS
) -> dict:
    """scat(E) <= (scat(i)+1)(scat(p)+1)-1 and scat(E) <= (scat(F)+1)(scat(B)+1)-1."""
    F = fiber(p, fiber_base)
    i = inclusion(F)
    scat_E = scat(p.domain, limits)[0]
    scat_i = scat_map(i, limits)[0]
    scat_p = scat_map(p, limits)[0]
    scat_F = scat(F.complex, limits)[0]
    scat_B = scat(p.codomain, limits)[0]
    map_bound = (scat_i + 1) * (scat_p + 1) - 1
    space_bound = (scat_F + 1) * (scat_B + 1) - 1
    return {
        "fiber_base": p.codomain.labels[fiber_base],
        "scat_E": scat_E,
        "scat_i": scat_i,
        "scat_p": scat_p,
        "scat_F": scat_F,
        "scat_B": scat_B,
        "map_bound": map_bound,
        "space_bound": space_bound,
        "map_inequality": scat_E <= map_bound,
        "space_inequality": scat_E <= space_bound,
    }


# -- essential category ------------------------------------------------------------


@dataclass(frozen=True)
class UniverseMember:
    complex: SimplicialComplex
    scat: int


@lru_cache(maxsize=None)
def universe_members(universe: Corpus, limits: SearchLimits = DEFAULT_LIMITS) -> tuple[UniverseMember, ...]:
    """Cores of the universe, one per isomorphism class, with their category.

    Testing cores only is sound: ``h ~ h o i o r`` for the core inclusion ``i``
    and retraction ``r``, so ``f o h`` is null iff ``f o h o i`` is.
    """
    cores: list[SimplicialComplex] = []
    for K in universe:
        C = core(K).core
        if not any(are_isomorphic(C, D) is not None for D in cores):
            cores.append(C)
    return tuple(UniverseMember(C, scat(C, limits)[0]) for C in cores)


def _sampled_maps(M: SimplicialComplex, K: SimplicialComplex, max_maps: int, seed: int):
    maps = []
    for count, a in enumerate(simplicial_maps(M, K)):
        maps.append(a)
        if count > 50 * max_maps:
            raise ResourceLimit("too many maps to sample from")
    if len(maps) <= max_maps:
        return maps
    rng = random.Random(seed)
    return sorted(rng.sample(maps, max_maps))


@dataclass(frozen=True)
class EsResult:
    value: object  # int or UNBOUNDED
    universe: Corpus = field(repr=False)
    n_max: int
    semantics: str = ES_SEMANTICS
    witness: Optional[tuple] = None  # (M, h) whose composite is not null, breaking value + 1

    def to_dict(self) -> dict:
        out = {"value": _as_json(self.value), "n_max": self.n_max, "semantics": self.semantics}
        if self.witness is not None:
            M, h = self.witness
            out["witness"] = {"M": M.to_dict(), "h": h.labelled()}
        return out


def _reduced(f: SimplicialMap) -> SimplicialMap:
    return compose(f, core(f.domain).inclusion)


def es_bounded(
    f: SimplicialMap, universe: Corpus, n_max: int = 3, limits: SearchLimits = DEFAULT_LIMITS
) -> EsResult:
    """Largest ``n <= n_max`` with ``f o h`` null for all ``h: M -> K``, ``M`` in
    the universe with ``scat(M) <= n``; Unbounded when ``f`` itself is null."""
    if not f.domain.connected or not f.codomain.connected:
        raise DisconnectedComplex("Es needs connected complexes")
    if null_decision(f, limits):
        return EsResult(UNBOUNDED, universe, n_max)
    fc = _reduced(f)
    members = universe_members(universe, limits)
    for n in range(n_max + 1):
        for m in members:
            if m.scat != n:
                continue
            for a in simplicial_maps(m.complex, fc.domain):
                h = SimplicialMap(m.complex, fc.domain, a)
                if not null_decision(compose(fc, h), limits):
                    return EsResult(n - 1, universe, n_max, witness=(m.complex, compose(core(f.domain).inclusion, h)))
    return EsResult(n_max, universe, n_max)


def _geometric_bound(M: SimplicialComplex) -> tuple[int, bool]:
    """``(value, exact)``: exact geometric category when small, else an upper bound."""
    try:
        return gscat_exact(M), True
    except ResourceLimit:
        return gscat_upper(M)[0], False


def es_equivalence_crosscheck(
    f: SimplicialMap, universe: Corpus, n: int, limits: SearchLimits = DEFAULT_LIMITS
) -> dict:
    """Evaluate the three characterisations of ``Es(f) >= n`` over the universe.

    (1) all ``h: M -> K`` with ``scat(M) <= n`` compose to null maps;
    (2) all ``h`` with ``scat(h) <= n`` do;
    (3) all ``h`` with ``gscat(M) <= n`` do.
    """
    fc = _reduced(f)
    K = fc.domain
    results = {"1": True, "2": True, "3": True}
    failures = {}
    undetermined = []
    for m in universe_members(universe, limits):
        g_value, g_exact = _geometric_bound(m.complex)
        for a in simplicial_maps(m.complex, K):
            h = SimplicialMap(m.complex, K, a)
            if null_decision(compose(fc, h), limits):
                continue
            record = {"M": m.complex.describe(), "h": h.labelled()}
            if m.scat <= n and results["1"]:
                results["1"] = False
                failures["1"] = record
            if results["2"] and scat_map(h, limits)[0] <= n:
                results["2"] = False
                failures["2"] = record
            if g_value <= n:
                if results["3"]:
                    results["3"] = False
                    failures["3"] = record
            elif not g_exact and m.scat <= n:
                # the true geometric category may still be <= n
                undetermined.append(m.complex.describe())
    agree = len(set(results.values())) == 1
    return {
        "n": n,
        "conditions": results,
        "agree": agree,
        "failures": failures,
        "undetermined": sorted(set(undetermined)),
    }


def _es_product(p, q):
    if p is UNBOUNDED or q is UNBOUNDED:
        return UNBOUNDED
    return (p + 1) * (q + 1) - 1


def es_composition_check(
    f: SimplicialMap,
    g: SimplicialMap,
    universe: Corpus,
    limits: SearchLimits = DEFAULT_LIMITS,
    n_max: int = 3,
    max_maps: int = MAX_MAPS_PER_PAIR,
    seed: int = 0,
) -> dict:
    """Test ``(g o f) o h ~ *`` for ``h: Z -> K`` with ``scat(Z)`` within the
    bound ``(Es(g)+1)(Es(f)+1)-1``.

    Es values here are universe-relative upper bounds, so a failure is a
    counterexample for the bounded values only, not for the true invariant.
    """
    p = es_bounded(f, universe, n_max, limits).value
    q = es_bounded(g, universe, n_max, limits).value
    bound = _es_product(p, q)
    gf = _reduced(compose(g, f))
    passed = failed = 0
    counterexamples = []
    for m in universe_members(universe, limits):
        if bound is not UNBOUNDED and m.scat > bound:
            continue
        for a in _sampled_maps(m.complex, gf.domain, max_maps, seed):
            h = SimplicialMap(m.complex, gf.domain, a)
            if null_decision(compose(gf, h), limits):
                passed += 1
            else:
                failed += 1
                if len(counterexamples) < 5:
                    counterexamples.append({"Z": m.complex.describe(), "h": h.labelled()})
    return {
        "es_f": _as_json(p),
        "es_g": _as_json(q),
        "bound": _as_json(bound),
        "passed": passed,
        "failed": failed,
        "counterexamples": counterexamples,
        "caveat": "bounded Es values overestimate the true invariant; failures are universe-relative",
    }
