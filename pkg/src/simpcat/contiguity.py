"""Simplicial maps, contiguity, contiguity classes and strong-collapse cores.

Class decisions reduce both complexes to their cores first: ``f ~ g`` holds
iff ``r_L f i_K ~ r_L g i_K`` between the cores, because ``i r ~ id`` on both
sides.  Chains found between the cores are lifted back to the original
complexes by pre/post-composing with the recorded inclusion/retraction chains,
so every answer comes with a chain that ``verify_chain`` can replay.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .complex import (
    SimplicialComplex,
    Subcomplex,
    are_isomorphic,
    bits,
    full_subcomplex,
    subcomplex_union,
)
from .errors import (
    AgreementFailure,
    BadParameter,
    DisconnectedComplex,
    DomainMismatch,
    NotSimplicial,
    ParentMismatch,
    ResourceLimit,
)
from .search import DEFAULT_LIMITS, SearchLimits, bfs_path, component, dedupe_consecutive

__all__ = [
    "SearchLimits",
    "SimplicialMap",
    "ContiguityChain",
    "ChainCheck",
    "CoreData",
    "validate_map",
    "identity",
    "inclusion",
    "constant_map",
    "compose",
    "restrict",
    "is_contiguous",
    "contiguous_assignments",
    "contiguity_neighbors",
    "same_contiguity_class",
    "is_null_class",
    "dominated_vertex",
    "core",
    "same_strong_homotopy_type",
    "strong_equivalence_inverse",
    "paste_maps",
    "verify_chain",
]


def image_mask(assignment, mask: int) -> int:
    m = 0
    for v in bits(mask):
        m |= 1 << assignment[v]
    return m


@dataclass(frozen=True)
class SimplicialMap:
    domain: SimplicialComplex
    codomain: SimplicialComplex
    assignment: tuple[int, ...]

    def __post_init__(self):
        a = tuple(self.assignment)
        object.__setattr__(self, "assignment", a)
        if len(a) != self.domain.n_vertices:
            raise BadParameter("assignment must be total on the domain vertices")
        if any(not 0 <= w < self.codomain.n_vertices for w in a):
            raise BadParameter("assignment leaves the codomain")
        for m in self.domain.facet_masks:
            if not self.codomain.contains(image_mask(a, m)):
                raise NotSimplicial(self.domain.simplex_labels(m))

    def __call__(self, v: int) -> int:
        return self.assignment[v]

    def __repr__(self):
        pairs = ", ".join(
            f"{self.domain.labels[v]}->{self.codomain.labels[w]}" for v, w in enumerate(self.assignment)
        )
        return f"SimplicialMap({pairs})"

    def image(self, mask: int) -> int:
        return image_mask(self.assignment, mask)

    @property
    def is_constant(self) -> bool:
        return len(set(self.assignment)) == 1

    def labelled(self) -> dict:
        return {
            self.domain.labels[v]: self.codomain.labels[w] for v, w in enumerate(self.assignment)
        }

    def to_dict(self) -> dict:
        return {
            "domain": self.domain.to_dict(),
            "codomain": self.codomain.to_dict(),
            "map": self.labelled(),
        }


def validate_map(domain: SimplicialComplex, codomain: SimplicialComplex, assignment) -> SimplicialMap:
    """Build a map from a sequence of vertex ids or a ``{label: label}`` dict."""
    if isinstance(assignment, dict):
        missing = set(domain.labels) - {str(k) for k in assignment}
        if missing:
            raise BadParameter(f"assignment missing vertices {sorted(missing)}")
        table = {str(k): v for k, v in assignment.items()}
        assignment = [codomain.vertex_id(table[lb]) for lb in domain.labels]
    return SimplicialMap(domain, codomain, tuple(assignment))


def identity(K: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(K, K, tuple(range(K.n_vertices)))


def constant_map(K: SimplicialComplex, L: SimplicialComplex, v: int = 0) -> SimplicialMap:
    if not 0 <= v < L.n_vertices:
        raise BadParameter(f"{v} is not a vertex of the codomain")
    return SimplicialMap(K, L, (v,) * K.n_vertices)


def compose(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    """``g o f``."""
    if f.codomain != g.domain:
        raise DomainMismatch("codomain of f differs from domain of g")
    ga = g.assignment
    return SimplicialMap(f.domain, g.codomain, tuple(ga[w] for w in f.assignment))


def restrict(f: SimplicialMap, U: Subcomplex) -> SimplicialMap:
    """Restriction to a subcomplex, as a map out of its standalone complex."""
    if U.parent != f.domain:
        raise DomainMismatch("subcomplex does not live in the domain")
    return SimplicialMap(U.complex, f.codomain, tuple(f.assignment[p] for p in U.embedding))


def inclusion(U: Subcomplex) -> SimplicialMap:
    return SimplicialMap(U.complex, U.parent, U.embedding)


NEIGHBOR_HARD_CAP = 1_000_000


# -- contiguity --------------------------------------------------------------


def contiguous_assignments(domain: SimplicialComplex, codomain: SimplicialComplex, a, b) -> bool:
    """The contiguity predicate: ``a(s) | b(s)`` is a simplex for every facet ``s``.

    Facets suffice because the codomain is closed under taking faces.
    """
    for m in domain.facet_masks:
        u = 0
        for v in bits(m):
            u |= (1 << a[v]) | (1 << b[v])
        if not codomain.contains(u):
            return False
    return True


def is_contiguous(f: SimplicialMap, g: SimplicialMap) -> bool:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise DomainMismatch("contiguity needs equal domain and codomain")
    return contiguous_assignments(f.domain, f.codomain, f.assignment, g.assignment)


@lru_cache(maxsize=500_000)
def _neighbor_assignments(dom: SimplicialComplex, cod: SimplicialComplex, a) -> tuple:
    """Memoised neighbour lists; class searches revisit the same small map spaces."""
    out = []
    for b in _enumerate_neighbors(dom, cod, a):
        out.append(b)
        if len(out) > NEIGHBOR_HARD_CAP:
            raise ResourceLimit(f"more than {NEIGHBOR_HARD_CAP} maps contiguous to one map")
    return tuple(out)


def _enumerate_neighbors(dom: SimplicialComplex, cod: SimplicialComplex, a) -> Iterator[tuple]:
    """Every assignment contiguous to ``a`` (itself included), in lexicographic order.

    Backtracks over vertices; the running union ``a(s) | b(s restricted to
    assigned vertices)`` of each facet must stay a simplex.
    """
    n = dom.n_vertices
    vf = dom.vertex_facets
    acc = [image_mask(a, m) for m in dom.facet_masks]
    contains = cod.contains
    cands = []
    for v in range(n):
        cs = []
        for w in range(cod.n_vertices):
            bit = 1 << w
            if all(contains(acc[i] | bit) for i in vf[v]):
                cs.append(w)
        cands.append(cs)
    out = [0] * n

    def rec(v):
        if v == n:
            b = tuple(out)
            if contiguous_assignments(dom, cod, a, b):
                yield b
            return
        fs = vf[v]
        for w in cands[v]:
            bit = 1 << w
            if not all(contains(acc[i] | bit) for i in fs):
                continue
            saved = [acc[i] for i in fs]
            for i in fs:
                acc[i] |= bit
            out[v] = w
            yield from rec(v + 1)
            for i, s in zip(fs, saved):
                acc[i] = s

    yield from rec(0)


def simplicial_maps(dom: SimplicialComplex, cod: SimplicialComplex, allowed=None) -> Iterator[tuple]:
    """Every simplicial assignment ``dom -> cod`` in lexicographic order.

    ``allowed[v]``, when given, is a bitmask of permitted images of ``v``.
    Each facet's partial image must stay a simplex while backtracking.
    """
    n = dom.n_vertices
    vf = dom.vertex_facets
    acc = [0] * dom.n_facets
    contains = cod.contains
    full = (1 << cod.n_vertices) - 1
    out = [0] * n

    def rec(v):
        if v == n:
            yield tuple(out)
            return
        fs = vf[v]
        for w in bits(full if allowed is None else allowed[v]):
            bit = 1 << w
            if not all(contains(acc[i] | bit) for i in fs):
                continue
            saved = [acc[i] for i in fs]
            for i in fs:
                acc[i] |= bit
            out[v] = w
            yield from rec(v + 1)
            for i, s in zip(fs, saved):
                acc[i] = s

    yield from rec(0)


def contiguity_neighbors(h: SimplicialMap, limits: SearchLimits = DEFAULT_LIMITS) -> Iterator[SimplicialMap]:
    """Every simplicial map contiguous to ``h``."""
    for count, b in enumerate(_enumerate_neighbors(h.domain, h.codomain, h.assignment), 1):
        if count > limits.max_neighbors:
            raise ResourceLimit("neighbour enumeration exceeded its budget")
        yield SimplicialMap(h.domain, h.codomain, b)


# -- chains ------------------------------------------------------------------


@dataclass(frozen=True)
class ContiguityChain:
    """``maps[i]`` and ``maps[i+1]`` are contiguous for every ``i``."""

    maps: tuple[SimplicialMap, ...]

    def __len__(self):
        return len(self.maps)

    @property
    def start(self) -> SimplicialMap:
        return self.maps[0]

    @property
    def end(self) -> SimplicialMap:
        return self.maps[-1]

    @property
    def domain(self) -> SimplicialComplex:
        return self.maps[0].domain

    @property
    def codomain(self) -> SimplicialComplex:
        return self.maps[0].codomain

    @classmethod
    def from_assignments(cls, dom, cod, seq) -> "ContiguityChain":
        return cls(tuple(SimplicialMap(dom, cod, a) for a in dedupe_consecutive(list(seq))))

    def reversed(self) -> "ContiguityChain":
        return ContiguityChain(self.maps[::-1])

    def then(self, other: "ContiguityChain") -> "ContiguityChain":
        if self.end != other.start:
            raise DomainMismatch("chains do not meet")
        return ContiguityChain(self.maps + other.maps[1:])

    def post(self, h: SimplicialMap) -> "ContiguityChain":
        """``h o f_i`` for every map of the chain."""
        return ContiguityChain(tuple(dedupe_consecutive([compose(h, f) for f in self.maps])))

    def pre(self, h: SimplicialMap) -> "ContiguityChain":
        """``f_i o h`` for every map of the chain."""
        return ContiguityChain(tuple(dedupe_consecutive([compose(f, h) for f in self.maps])))

    def to_dict(self) -> dict:
        return {"maps": [m.labelled() for m in self.maps]}


@dataclass(frozen=True)
class ChainCheck:
    ok: bool
    index: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_chain(chain: ContiguityChain, start: SimplicialMap = None, end: SimplicialMap = None) -> ChainCheck:
    """Independent replay of a chain certificate.

    Re-checks simpliciality of every map from scratch, the claimed endpoints,
    and contiguity of each consecutive pair.  ``index`` names the first
    offending map.
    """
    maps = chain.maps
    if not maps:
        return ChainCheck(False, 0, "empty chain")
    dom, cod = maps[0].domain, maps[0].codomain
    for i, m in enumerate(maps):
        if m.domain != dom or m.codomain != cod:
            return ChainCheck(False, i, "maps have different domain or codomain")
        a = m.assignment
        if len(a) != dom.n_vertices or any(not 0 <= w < cod.n_vertices for w in a):
            return ChainCheck(False, i, "assignment is not a vertex function")
        for f in dom.facet_masks:
            img = 0
            for v in bits(f):
                img |= 1 << a[v]
            if not any(img & g == img for g in cod.facet_masks):
                return ChainCheck(False, i, "map is not simplicial")
    if start is not None and maps[0] != start:
        return ChainCheck(False, 0, "chain does not start at the claimed map")
    if end is not None and maps[-1] != end:
        return ChainCheck(False, len(maps) - 1, "chain does not end at the claimed map")
    for i in range(len(maps) - 1):
        if not contiguous_assignments(dom, cod, maps[i].assignment, maps[i + 1].assignment):
            return ChainCheck(False, i + 1, "consecutive maps are not contiguous")
    return ChainCheck(True)


# -- cores -------------------------------------------------------------------


def dominated_vertex(K: SimplicialComplex) -> Optional[tuple[int, int]]:
    """Least pair ``(v, w)`` with ``w != v`` lying in every facet that contains ``v``."""
    return _dominated(K.facet_masks, K.vertex_mask)


def _dominated(facets, alive: int) -> Optional[tuple[int, int]]:
    for v in bits(alive):
        common = -1
        for m in facets:
            if m >> v & 1:
                common &= m
        common &= ~(1 << v)
        if common > 0:
            return v, (common & -common).bit_length() - 1
    return None


@dataclass(frozen=True)
class CoreData:
    complex: SimplicialComplex
    core: SimplicialComplex
    inclusion: SimplicialMap
    retraction: SimplicialMap
    removal_order: tuple[tuple[int, int], ...]
    idr_chain: ContiguityChain


def _maximal(masks):
    out = []
    for m in sorted(set(masks), key=lambda x: -bin(x).count("1")):
        if not any(m & k == m for k in out):
            out.append(m)
    return out


@lru_cache(maxsize=None)
def core(K: SimplicialComplex) -> CoreData:
    """Delete dominated vertices (least pair first) until none is left."""
    if not K.connected:
        raise DisconnectedComplex("core needs a connected complex")
    alive = K.vertex_mask
    facets = list(K.facet_masks)
    order = []
    while True:
        pair = _dominated(facets, alive)
        if pair is None:
            break
        v, w = pair
        order.append(pair)
        alive &= ~(1 << v)
        facets = _maximal(m & alive for m in facets)
    pointer = dict(order)
    sub = Subcomplex(K, tuple(facets))
    kept = sub.embedding
    local = {p: i for i, p in enumerate(kept)}

    def settle(v, deleted):
        while v in deleted:
            v = pointer[v]
        return v

    steps = [tuple(range(K.n_vertices))]
    deleted = set()
    for v, _ in order:
        deleted.add(v)
        steps.append(tuple(settle(u, deleted) for u in range(K.n_vertices)))
    core_complex = sub.complex
    retraction = SimplicialMap(K, core_complex, tuple(local[u] for u in steps[-1]))
    return CoreData(
        complex=K,
        core=core_complex,
        inclusion=SimplicialMap(core_complex, K, kept),
        retraction=retraction,
        removal_order=tuple(order),
        idr_chain=ContiguityChain.from_assignments(K, K, steps),
    )


def same_strong_homotopy_type(K: SimplicialComplex, L: SimplicialComplex) -> bool:
    return are_isomorphic(core(K).core, core(L).core) is not None


# -- class decision ------------------------------------------------------------


def _require_connected(K: SimplicialComplex, what: str):
    if not K.connected:
        raise DisconnectedComplex(f"{what} must be connected")


def _pieces(dom: SimplicialComplex):
    """Standalone components of ``dom`` with their embeddings."""
    if dom.connected:
        return [(dom, tuple(range(dom.n_vertices)))]
    out = []
    for comp in dom.components:
        sub = full_subcomplex(dom, comp)
        out.append((sub.complex, sub.embedding))
    return out


def _constant_walk(cod: SimplicialComplex, start: int, goal: int = 0) -> list[int]:
    """Shortest edge path of vertices from ``start`` to ``goal`` (least-id tie-break)."""
    prev = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == goal:
            break
        for w in bits(cod.adjacency[u]):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    path = [goal]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def _is_constant(a) -> bool:
    return all(x == a[0] for x in a)


def _collapse_image(dom: SimplicialComplex, cod: SimplicialComplex, a) -> Optional[list]:
    """If the image subcomplex of ``a`` is strong collapsible, push ``a``
    through its collapse; the result ends at a constant."""
    img = Subcomplex(cod, tuple(image_mask(a, m) for m in dom.facet_masks))
    A = img.complex
    if not A.connected:
        return None
    data = core(A)
    if data.core.n_vertices != 1:
        return None
    emb = img.embedding
    local = {p: i for i, p in enumerate(emb)}
    path = []
    for step in data.idr_chain.maps:
        s = step.assignment
        path.append(tuple(emb[s[local[w]]] for w in a))
    return path


def _connected_path(dom, cod, a, target, limits: SearchLimits, reduce: bool) -> Optional[list]:
    """Chain of assignments from ``a`` to ``target`` (or to some constant when
    ``target`` is None) over a connected domain."""
    if target is None and _is_constant(a):
        return [a]
    if not reduce:
        is_target = _is_constant if target is None else target.__eq__
        return bfs_path(a, is_target, lambda s: _neighbor_assignments(dom, cod, s), limits)
    if target is None:
        shortcut = _collapse_image(dom, cod, a)
        if shortcut is not None:
            return dedupe_consecutive(shortcut)
    ck, cl = core(dom), core(cod)
    iK, rK = ck.inclusion.assignment, ck.retraction.assignment
    iL, rL = cl.inclusion.assignment, cl.retraction.assignment

    def shrink(x):
        return tuple(rL[x[iK[u]]] for u in range(ck.core.n_vertices))

    def descend(x):
        # x ~ iL rL x ~ iL rL x iK rK, via the two idr chains
        out = [tuple(c.assignment[w] for w in x) for c in cl.idr_chain.maps]
        phi = out[-1]
        out.extend(tuple(phi[d.assignment[v]] for v in range(dom.n_vertices)) for d in ck.idr_chain.maps)
        return out

    start = shrink(a)
    if target is None:
        is_target = _is_constant
    else:
        is_target = shrink(target).__eq__
    core_path = bfs_path(
        start, is_target, lambda s: _neighbor_assignments(ck.core, cl.core, s), limits
    )
    if core_path is None:
        return None
    path = descend(a)
    path.extend(tuple(iL[s[rK[v]]] for v in range(dom.n_vertices)) for s in core_path)
    if target is not None:
        path.extend(reversed(descend(target)))
    return dedupe_consecutive(path)


@lru_cache(maxsize=200_000)
def _null_path(dom, cod, a, limits, reduce) -> Optional[tuple]:
    """Chain from ``a`` to the constant map at vertex 0 of ``cod``."""
    current = list(a)
    path = [tuple(current)]
    ends = []
    for piece, emb in _pieces(dom):
        sub_a = tuple(a[p] for p in emb)
        sub_path = _connected_path(piece, cod, sub_a, None, limits, reduce)
        if sub_path is None:
            return None
        for s in sub_path[1:]:
            for i, p in enumerate(emb):
                current[p] = s[i]
            path.append(tuple(current))
        ends.append((emb, sub_path[-1][0]))
    for emb, c in ends:
        for w in _constant_walk(cod, c)[1:]:
            for p in emb:
                current[p] = w
            path.append(tuple(current))
    return tuple(dedupe_consecutive(path))


def _class_path(dom, cod, a, b, limits, reduce) -> Optional[list]:
    current = list(a)
    path = [tuple(current)]
    for piece, emb in _pieces(dom):
        sub_path = _connected_path(
            piece, cod, tuple(a[p] for p in emb), tuple(b[p] for p in emb), limits, reduce
        )
        if sub_path is None:
            return None
        for s in sub_path[1:]:
            for i, p in enumerate(emb):
                current[p] = s[i]
            path.append(tuple(current))
    return dedupe_consecutive(path)


def same_contiguity_class(
    f: SimplicialMap, g: SimplicialMap, limits: SearchLimits = DEFAULT_LIMITS, reduce: bool = True
) -> Optional[ContiguityChain]:
    """A chain from ``f`` to ``g``, or None when they lie in different classes.

    ``reduce=False`` runs the naive search over the full map space.  Raises
    ResourceLimit if the budget is hit before the answer is settled.
    """
    if f.domain != g.domain or f.codomain != g.codomain:
        raise DomainMismatch("maps must share domain and codomain")
    _require_connected(f.codomain, "codomain")
    path = _class_path(f.domain, f.codomain, f.assignment, g.assignment, limits, reduce)
    if path is None:
        return None
    return ContiguityChain.from_assignments(f.domain, f.codomain, path)


_CORE_KEYS: dict = {}


def class_key(f: SimplicialMap, limits: SearchLimits = DEFAULT_LIMITS) -> tuple:
    """Canonical label of the contiguity class of ``f`` (connected domain).

    ``f ~ g`` iff ``r_L o f o i_K ~ r_L o g o i_K`` between the cores, so the
    label is the least core map in the class of the reduced map.  Whole core
    components are labelled at once and memoised.
    """
    _require_connected(f.domain, "domain")
    _require_connected(f.codomain, "codomain")
    ck, cl = core(f.domain), core(f.codomain)
    iK, rL = ck.inclusion.assignment, cl.retraction.assignment
    s = tuple(rL[f.assignment[iK[u]]] for u in range(ck.core.n_vertices))
    table = _CORE_KEYS.setdefault((ck.core, cl.core), {})
    if s not in table:
        comp = component(s, lambda x: _neighbor_assignments(ck.core, cl.core, x), limits)
        key = min(comp)
        for x in comp:
            table[x] = key
    return table[s]


def clear_caches():
    """Drop memoised cores, null chains and class labels."""
    core.cache_clear()
    _null_path.cache_clear()
    _neighbor_assignments.cache_clear()
    _CORE_KEYS.clear()


def null_decision(f: SimplicialMap, limits: SearchLimits = DEFAULT_LIMITS, reduce: bool = True) -> bool:
    """Boolean form of ``is_null_class`` (shares its cache)."""
    _require_connected(f.codomain, "codomain")
    return _null_path(f.domain, f.codomain, f.assignment, limits, reduce) is not None


def is_null_class(
    f: SimplicialMap, limits: SearchLimits = DEFAULT_LIMITS, reduce: bool = True
) -> Optional[ContiguityChain]:
    """Chain from ``f`` to the constant map at the least codomain vertex, or None."""
    _require_connected(f.codomain, "codomain")
    path = _null_path(f.domain, f.codomain, f.assignment, limits, reduce)
    if path is None:
        return None
    return ContiguityChain.from_assignments(f.domain, f.codomain, path)


# -- strong equivalences -----------------------------------------------------


def strong_equivalence_inverse(f: SimplicialMap, limits: SearchLimits = DEFAULT_LIMITS):
    """Search for ``g`` with ``g o f ~ id`` and ``f o g ~ id``.

    Returns ``(g, chain_gf, chain_fg)`` or None.  None is definitive when the
    cores are not isomorphic; otherwise it means no candidate passed within
    the budget.  Candidates are ``i_K o phi o r_L`` for maps ``phi`` between
    the cores, trying the inverse of the reduced map first.
    """
    K, L = f.domain, f.codomain
    _require_connected(K, "domain")
    _require_connected(L, "codomain")
    if not same_strong_homotopy_type(K, L):
        return None
    ck, cl = core(K), core(L)
    reduced = compose(cl.retraction, compose(f, ck.inclusion)).assignment
    n = cl.core.n_vertices
    candidates = []
    if sorted(reduced) == list(range(n)):
        inverse = [0] * n
        for v, w in enumerate(reduced):
            inverse[w] = v
        candidates.append(tuple(inverse))
    tried = 0
    for phi in itertools.chain(candidates, simplicial_maps(cl.core, ck.core)):
        tried += 1
        if tried > limits.max_states:
            return None
        try:
            core_map = SimplicialMap(cl.core, ck.core, tuple(phi))
        except NotSimplicial:
            continue
        g = compose(ck.inclusion, compose(core_map, cl.retraction))
        c1 = same_contiguity_class(compose(g, f), identity(K), limits)
        if c1 is None:
            continue
        c2 = same_contiguity_class(compose(f, g), identity(L), limits)
        if c2 is not None:
            return g, c1, c2
    return None


# -- pasting -----------------------------------------------------------------


def paste_maps(U: Subcomplex, f: SimplicialMap, V: Subcomplex, g: SimplicialMap):
    """Union of ``f: U -> L`` and ``g: V -> L`` agreeing on ``U n V``.

    Returns ``(U u V, f u g)``; the pasted map is validated, so a union that is
    not simplicial raises NotSimplicial instead of being assumed.
    """
    if U.parent != V.parent:
        raise ParentMismatch("parts live in different complexes")
    if f.domain != U.complex or g.domain != V.complex:
        raise DomainMismatch("maps are not defined on the given parts")
    if f.codomain != g.codomain:
        raise DomainMismatch("maps have different codomains")
    W = subcomplex_union(U, V)
    fu = dict(zip(U.embedding, f.assignment))
    gv = dict(zip(V.embedding, g.assignment))
    out = []
    for p in W.embedding:
        if p in fu and p in gv and fu[p] != gv[p]:
            raise AgreementFailure(U.parent.labels[p])
        out.append(fu[p] if p in fu else gv[p])
    return W, SimplicialMap(W.complex, f.codomain, tuple(out))
