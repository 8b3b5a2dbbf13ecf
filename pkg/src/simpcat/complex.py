"""Finite abstract simplicial complexes stored by their facets.

Vertices are dense integer ids ``0..n-1`` carrying string labels.  Simplices
are handled internally as integer bitmasks over vertex ids; the public
``facets`` view exposes them as frozensets.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Optional

from .errors import (
    BadParameter,
    EmptyInput,
    NotASimplex,
    ParentMismatch,
    ParseError,
    ResourceLimit,
)

SIMPLEX_CAP = 1 << 18
PRODUCT_VERTEX_CAP = 64
ISO_BUDGET = 2_000_000


def bits(mask: int):
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def submasks(mask: int):
    """All non-empty submasks of ``mask``."""
    s = mask
    while s:
        yield s
        s = (s - 1) & mask


def maximal_masks(masks: Iterable[int]) -> list[int]:
    """Drop duplicates and every mask contained in another one."""
    uniq = sorted(set(masks), key=lambda m: -bin(m).count("1"))
    kept: list[int] = []
    for m in uniq:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return kept


def facet_key(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


def default_labels(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(string.ascii_lowercase[:n])
    return tuple(f"v{i}" for i in range(n))


@dataclass(frozen=True)
class SimplicialComplex:
    """A finite complex given by its maximal simplices (facets)."""

    labels: tuple[str, ...]
    facet_masks: tuple[int, ...]

    def __post_init__(self):
        if not self.facet_masks:
            raise EmptyInput("a complex needs at least one facet")
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise BadParameter("vertex labels must be unique")
        covered = 0
        for m in self.facet_masks:
            if m <= 0 or m >> n:
                raise BadParameter(f"facet mask {m} out of range for {n} vertices")
            covered |= m
        if covered != (1 << n) - 1:
            raise BadParameter("every vertex must lie in some facet")
        ordered = tuple(sorted(self.facet_masks, key=facet_key))
        for i, a in enumerate(ordered):
            for b in ordered[i + 1:]:
                if a & b in (a, b):
                    raise BadParameter("facets must form an antichain")
        object.__setattr__(self, "facet_masks", ordered)

    def __repr__(self):
        return f"SimplicialComplex({self.describe()})"

    def describe(self) -> str:
        sep = "" if all(len(lb) == 1 for lb in self.labels) else " "
        parts = [sep.join(self.labels[v] for v in bits(m)) for m in self.facet_masks]
        return "<" + ", ".join(parts) + ">"

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def n_facets(self) -> int:
        return len(self.facet_masks)

    @property
    def vertex_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    @cached_property
    def facets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(bits(m)) for m in self.facet_masks)

    @cached_property
    def facet_vertex_lists(self) -> tuple[tuple[int, ...], ...]:
        return tuple(facet_key(m) for m in self.facet_masks)

    @cached_property
    def vertex_facets(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the indices of the facets containing it."""
        out: list[list[int]] = [[] for _ in self.labels]
        for i, m in enumerate(self.facet_masks):
            for v in bits(m):
                out[v].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def _small(self) -> bool:
        return sum(1 << bin(m).count("1") for m in self.facet_masks) <= SIMPLEX_CAP

    @property
    def simplex_count(self) -> int:
        return len(self.simplex_masks)

    @cached_property
    def simplex_masks(self) -> frozenset:
        if not self._small:
            raise ResourceLimit("simplex count exceeds cap")
        out = set()
        for m in self.facet_masks:
            out.update(submasks(m))
        return frozenset(out)

    def contains(self, mask: int) -> bool:
        """True iff the vertex set ``mask`` is a simplex."""
        if self._small:
            return mask in self.simplex_masks
        return any(mask & f == mask for f in self.facet_masks)

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Neighbour masks in the 1-skeleton."""
        adj = [0] * self.n_vertices
        for m in self.facet_masks:
            for v in bits(m):
                adj[v] |= m
        return tuple(a & ~(1 << v) for v, a in enumerate(adj))

    @cached_property
    def components(self) -> tuple[int, ...]:
        """Vertex masks of the connected components, ordered by least vertex."""
        seen = 0
        comps = []
        for v in range(self.n_vertices):
            if seen >> v & 1:
                continue
            comp = frontier = 1 << v
            while frontier:
                nxt = 0
                for u in bits(frontier):
                    nxt |= self.adjacency[u]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(comp)
        return tuple(comps)

    @property
    def connected(self) -> bool:
        return len(self.components) == 1

    @cached_property
    def _index(self) -> dict:
        return {lb: i for i, lb in enumerate(self.labels)}

    def vertex_id(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise BadParameter(f"unknown vertex {label!r}") from None

    def simplex_mask(self, simplex) -> int:
        """Mask of a simplex given as vertex ids, labels, or a mask."""
        if isinstance(simplex, int):
            return simplex
        m = 0
        for v in simplex:
            m |= 1 << (v if isinstance(v, int) else self.vertex_id(v))
        return m

    def simplex_labels(self, mask: int) -> list[str]:
        return sorted(self.labels[v] for v in bits(mask))

    def facet_index(self, mask: int) -> int:
        return self.facet_masks.index(mask)

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.labels),
            "facets": [self.simplex_labels(m) for m in self.facet_masks],
        }

    @classmethod
    def from_dict(cls, data) -> "SimplicialComplex":
        if not isinstance(data, dict):
            raise ParseError("complex must be a JSON object")
        unknown = set(data) - {"vertices", "facets"}
        if unknown:
            raise ParseError(f"unknown complex fields: {sorted(unknown)}")
        if "facets" not in data:
            raise ParseError("complex needs 'facets'")
        facets = data["facets"]
        if "vertices" not in data:
            return build_complex(facets)
        labels = [str(x) for x in data["vertices"]]
        index = {lb: i for i, lb in enumerate(labels)}
        if len(index) != len(labels):
            raise ParseError("duplicate vertex labels")
        masks = []
        for f in facets:
            try:
                masks.append(mask_of(index[str(x)] for x in f))
            except KeyError as exc:
                raise ParseError(f"facet mentions unknown vertex {exc}") from None
        if not masks or not all(masks):
            raise ParseError("facets must be non-empty")
        try:
            return cls(tuple(labels), tuple(maximal_masks(masks)))
        except BadParameter as exc:
            raise ParseError(str(exc)) from None


def _sort_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


def build_complex(facet_list, labels: Optional[Iterable] = None) -> SimplicialComplex:
    """Normalize a list of vertex sets into a complex.

    Redundant faces are absorbed by their cofaces, vertex names are densified
    (integers numerically, everything else by string order) unless an explicit
    ``labels`` order is given.
    """
    facet_list = [list(f) for f in facet_list]
    if not facet_list:
        raise EmptyInput("facet list is empty")
    if any(not f for f in facet_list):
        raise EmptyInput("facets must be non-empty")
    if labels is None:
        names = sorted({x for f in facet_list for x in f}, key=_sort_key)
    else:
        names = list(labels)
    index = {x: i for i, x in enumerate(names)}
    try:
        masks = [mask_of(index[x] for x in f) for f in facet_list]
    except KeyError as exc:
        raise BadParameter(f"vertex {exc} missing from labels") from None
    used = 0
    for m in masks:
        used |= m
    if used != (1 << len(names)) - 1:
        raise BadParameter("labels mention vertices that lie in no facet")
    return SimplicialComplex(tuple(str(x) for x in names), tuple(maximal_masks(masks)))


def all_simplices(K: SimplicialComplex, cap: int = SIMPLEX_CAP) -> set:
    """Every simplex of ``K`` exactly once, as frozensets of vertex ids."""
    total = sum(1 << len(f) for f in K.facets)
    if total > cap:
        raise ResourceLimit(f"simplex enumeration would exceed cap {cap}")
    return {frozenset(bits(m)) for m in K.simplex_masks}


def is_connected(K: SimplicialComplex) -> bool:
    return K.connected


def fresh_label(taken, base: str) -> str:
    label = base
    while label in taken:
        label += "'"
    return label


def cone(K: SimplicialComplex, apex: str = "v") -> SimplicialComplex:
    """Join a fresh apex (the last vertex id) to every facet."""
    apex = fresh_label(set(K.labels), apex)
    top = 1 << K.n_vertices
    return SimplicialComplex(K.labels + (apex,), tuple(m | top for m in K.facet_masks))


def product_vertex(K: SimplicialComplex, L: SimplicialComplex, x: int, y: int) -> int:
    """Vertex id of the pair ``(x, y)`` inside ``categorical_product(K, L)``."""
    return x * L.n_vertices + y


def categorical_product(
    K: SimplicialComplex, L: SimplicialComplex, cap: int = PRODUCT_VERTEX_CAP
) -> SimplicialComplex:
    """Categorical product: facets are ``sigma x tau`` over facet pairs."""
    nk, nl = K.n_vertices, L.n_vertices
    if nk * nl > cap:
        raise ResourceLimit(f"product would have {nk * nl} vertices (cap {cap})")
    labels = tuple(f"{a}·{b}" for a in K.labels for b in L.labels)
    facets = []
    for s in K.facet_masks:
        for t in L.facet_masks:
            m = 0
            for x in bits(s):
                row = x * nl
                for y in bits(t):
                    m |= 1 << (row + y)
            facets.append(m)
    return SimplicialComplex(labels, tuple(facets))


@dataclass(frozen=True)
class Subcomplex:
    """Downward closure of a set of simplices of ``parent``."""

    parent: SimplicialComplex
    generators: tuple[int, ...]

    def __post_init__(self):
        gens = maximal_masks(self.generators)
        for g in gens:
            if not self.parent.contains(g):
                raise NotASimplex(f"{self.parent.simplex_labels(g)} is not a simplex of the parent")
        object.__setattr__(self, "generators", tuple(sorted(gens, key=facet_key)))

    @property
    def empty(self) -> bool:
        return not self.generators

    @cached_property
    def vertex_mask(self) -> int:
        m = 0
        for g in self.generators:
            m |= g
        return m

    def contains(self, mask: int) -> bool:
        return any(mask & g == mask for g in self.generators)

    @cached_property
    def simplex_masks(self) -> frozenset:
        out = set()
        for g in self.generators:
            out.update(submasks(g))
        return frozenset(out)

    @cached_property
    def embedding(self) -> tuple[int, ...]:
        """Parent vertex id of each vertex of the standalone complex."""
        return tuple(bits(self.vertex_mask))

    @cached_property
    def complex(self) -> SimplicialComplex:
        """The subcomplex as a standalone complex, vertices in parent order."""
        if self.empty:
            raise EmptyInput("the empty subcomplex has no standalone complex")
        local = {p: i for i, p in enumerate(self.embedding)}
        labels = tuple(self.parent.labels[p] for p in self.embedding)
        facets = tuple(mask_of(local[p] for p in bits(g)) for g in self.generators)
        return SimplicialComplex(labels, facets)

    def facet_indices(self) -> tuple[int, ...]:
        """Indices of parent facets among the generators (facet-generated parts)."""
        return tuple(i for i, m in enumerate(self.parent.facet_masks) if m in self.generators)


def generated_subcomplex(K: SimplicialComplex, gens) -> Subcomplex:
    """Subcomplex generated by simplices given as vertex-id/label collections or masks."""
    return Subcomplex(K, tuple(K.simplex_mask(g) for g in gens))


def facet_subcomplex(K: SimplicialComplex, indices) -> Subcomplex:
    return Subcomplex(K, tuple(K.facet_masks[i] for i in indices))


def facet_subset_subcomplex(K: SimplicialComplex, subset_mask: int) -> Subcomplex:
    return Subcomplex(K, tuple(K.facet_masks[i] for i in bits(subset_mask)))


def whole(K: SimplicialComplex) -> Subcomplex:
    return Subcomplex(K, K.facet_masks)


def full_subcomplex(K: SimplicialComplex, vertex_mask: int) -> Subcomplex:
    """Subcomplex of all simplices with vertices in ``vertex_mask``."""
    return Subcomplex(K, tuple(m & vertex_mask for m in K.facet_masks if m & vertex_mask))


def _same_parent(A: Subcomplex, B: Subcomplex):
    if A.parent != B.parent:
        raise ParentMismatch("subcomplexes live in different complexes")


def subcomplex_union(A: Subcomplex, B: Subcomplex) -> Subcomplex:
    _same_parent(A, B)
    return Subcomplex(A.parent, A.generators + B.generators)


def subcomplex_intersection(A: Subcomplex, B: Subcomplex) -> Subcomplex:
    _same_parent(A, B)
    return Subcomplex(A.parent, tuple(a & b for a in A.generators for b in B.generators if a & b))


# -- isomorphism -----------------------------------------------------------


@dataclass(frozen=True)
class IsoWitness:
    """``bijection[v]`` is the image in the target of source vertex ``v``."""

    bijection: tuple[int, ...]


def _signatures(K: SimplicialComplex) -> list[tuple]:
    return [
        tuple(sorted(bin(K.facet_masks[i]).count("1") for i in K.vertex_facets[v]))
        for v in range(K.n_vertices)
    ]


def are_isomorphic(
    K: SimplicialComplex, L: SimplicialComplex, budget: int = ISO_BUDGET
) -> Optional[IsoWitness]:
    """Lexicographically least facet-preserving vertex bijection, or None."""
    n = K.n_vertices
    if n != L.n_vertices or K.n_facets != L.n_facets:
        return None
    sizes = sorted(bin(m).count("1") for m in K.facet_masks)
    if sizes != sorted(bin(m).count("1") for m in L.facet_masks):
        return None
    sk, sl = _signatures(K), _signatures(L)
    if sorted(sk) != sorted(sl):
        return None
    target = set(L.facet_masks)
    cands = [[w for w in range(n) if sl[w] == sk[v]] for v in range(n)]
    # facets that become fully assigned once vertex v is placed
    closing = [[] for _ in range(n)]
    for m in K.facet_masks:
        closing[max(bits(m))].append(m)
    image = [0] * n
    steps = 0

    def rec(v, used):
        nonlocal steps
        if v == n:
            return True
        for w in cands[v]:
            if used >> w & 1:
                continue
            steps += 1
            if steps > budget:
                raise ResourceLimit("isomorphism search budget exhausted")
            image[v] = w
            ok = True
            for m in closing[v]:
                if mask_of(image[u] for u in bits(m)) not in target:
                    ok = False
                    break
            if ok and rec(v + 1, used | 1 << w):
                return True
        return False

    if rec(0, 0):
        return IsoWitness(tuple(image))
    return None


# -- standard families -----------------------------------------------------


def standard_complex(family: str, n: int) -> SimplicialComplex:
    """Simplex, boundary of simplex, cycle, or path with canonical labels.

    ``simplex``/``boundary_of_simplex`` take the dimension ``n``; ``cycle`` and
    ``path`` take the number of vertices.
    """
    if family == "simplex":
        if n < 0:
            raise BadParameter("simplex dimension must be >= 0")
        return SimplicialComplex(default_labels(n + 1), ((1 << (n + 1)) - 1,))
    if family == "boundary_of_simplex":
        if n < 1:
            raise BadParameter("boundary of simplex needs dimension >= 1")
        full = (1 << (n + 1)) - 1
        return SimplicialComplex(default_labels(n + 1), tuple(full ^ (1 << i) for i in range(n + 1)))
    if family == "cycle":
        if n < 3:
            raise BadParameter("cycles need at least 3 vertices")
        return SimplicialComplex(
            default_labels(n), tuple((1 << i) | (1 << ((i + 1) % n)) for i in range(n))
        )
    if family == "path":
        if n < 1:
            raise BadParameter("paths need at least 1 vertex")
        if n == 1:
            return SimplicialComplex(default_labels(1), (1,))
        return SimplicialComplex(default_labels(n), tuple(3 << i for i in range(n - 1)))
    raise BadParameter(f"unknown family {family!r}")


@lru_cache(maxsize=None)
def point() -> SimplicialComplex:
    return SimplicialComplex(("a",), (1,))
