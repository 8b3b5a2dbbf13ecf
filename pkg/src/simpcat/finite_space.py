"""Finite T0-spaces as posets, the face-poset and order-complex functors, and
homotopy / LS category of finite spaces.

Open sets are down-sets; the minimal open set of ``x`` is ``U_x = {y <= x}``.
Homotopy classes of monotone maps are decided by search over single-point
moves (changing one value to a comparable one keeps maps homotopic, and such
moves generate the relation), after reducing domain and codomain to their
cores by removing beat points.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Optional

from .category import _maximal_down_closed, min_set_cover
from .complex import SimplicialComplex, bits, default_labels, mask_of
from .contiguity import ContiguityChain, SimplicialMap
from .errors import (
    BadParameter,
    DisconnectedComplex,
    DomainMismatch,
    NotMonotone,
    NotT0,
    ParseError,
    ResourceLimit,
)
from .search import DEFAULT_LIMITS, SearchLimits, bfs_path, dedupe_consecutive

FACE_POSET_CAP = 4096
MAX_POINTS = 8


@dataclass(frozen=True)
class FiniteSpace:
    """``down[x]`` is the bitmask of all points ``<= x`` (``x`` included)."""

    labels: tuple[str, ...]
    down: tuple[int, ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.down) != n:
            raise BadParameter("order table has the wrong size")
        if len(set(self.labels)) != n:
            raise BadParameter("element labels must be unique")
        for x in range(n):
            d = self.down[x]
            if not d >> x & 1 or d >> n:
                raise BadParameter("order must be reflexive and in range")
            for y in bits(d):
                if self.down[y] & ~d:
                    raise BadParameter("order must be transitive")
                if y != x and self.down[y] >> x & 1:
                    raise NotT0(f"{self.labels[x]} and {self.labels[y]} are identified")

    def __repr__(self):
        return f"FiniteSpace({len(self.labels)} points, {len(self.hasse)} covers)"

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def up(self) -> tuple[int, ...]:
        out = [0] * self.n
        for x in range(self.n):
            for y in bits(self.down[x]):
                out[y] |= 1 << x
        return tuple(out)

    def leq(self, x: int, y: int) -> bool:
        return bool(self.down[y] >> x & 1)

    @cached_property
    def hasse(self) -> tuple[tuple[int, int], ...]:
        """Covering pairs ``(lower, upper)``."""
        out = []
        for x in range(self.n):
            strict = self.down[x] & ~(1 << x)
            for y in bits(strict):
                if not any(self.down[z] >> y & 1 for z in bits(strict & ~(1 << y))):
                    out.append((y, x))
        return tuple(sorted(out))

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.n)]
        for y, x in self.hasse:
            out[x].append(y)
        return tuple(tuple(v) for v in out)

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.n)]
        for y, x in self.hasse:
            out[y].append(x)
        return tuple(tuple(v) for v in out)

    @cached_property
    def maximal_points(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if self.up[x] == 1 << x)

    @cached_property
    def components(self) -> tuple[int, ...]:
        seen = 0
        comps = []
        for x in range(self.n):
            if seen >> x & 1:
                continue
            comp = frontier = 1 << x
            while frontier:
                nxt = 0
                for u in bits(frontier):
                    nxt |= self.down[u] | self.up[u]
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

    def element(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise BadParameter(f"unknown element {label!r}") from None

    def to_dict(self) -> dict:
        return {
            "elements": list(self.labels),
            "covers": [[self.labels[a], self.labels[b]] for a, b in self.hasse],
        }

    @classmethod
    def from_dict(cls, data) -> "FiniteSpace":
        if not isinstance(data, dict) or set(data) - {"elements", "covers"}:
            raise ParseError("space must be an object with 'elements' and 'covers' only")
        try:
            return build_space(data["elements"], [tuple(p) for p in data.get("covers", [])])
        except KeyError as exc:
            raise ParseError(f"missing field {exc}") from None
        except BadParameter as exc:
            raise ParseError(str(exc)) from None


def build_space(elements, covers) -> FiniteSpace:
    """Poset from elements and ``(lower, upper)`` relations, transitively closed."""
    labels = [str(e) for e in elements]
    index = {lb: i for i, lb in enumerate(labels)}
    if len(index) != len(labels):
        raise BadParameter("duplicate elements")
    down = [1 << i for i in range(len(labels))]
    for lo, hi in covers:
        try:
            down[index[str(hi)]] |= 1 << index[str(lo)]
        except KeyError as exc:
            raise BadParameter(f"relation mentions unknown element {exc}") from None
    changed = True
    while changed:
        changed = False
        for x in range(len(labels)):
            acc = down[x]
            for y in bits(down[x]):
                acc |= down[y]
            if acc != down[x]:
                down[x] = acc
                changed = True
    for x in range(len(labels)):
        for y in bits(down[x] & ~(1 << x)):
            if down[y] >> x & 1:
                raise NotT0(f"{labels[x]} and {labels[y]} lie on a cycle")
    return FiniteSpace(tuple(labels), tuple(down))


def subspace(X: FiniteSpace, mask: int) -> tuple[FiniteSpace, tuple[int, ...]]:
    """Induced subposet on ``mask`` with its embedding."""
    emb = tuple(bits(mask))
    local = {p: i for i, p in enumerate(emb)}
    down = tuple(mask_of(local[q] for q in bits(X.down[p] & mask)) for p in emb)
    return FiniteSpace(tuple(X.labels[p] for p in emb), down), emb


def open_hull(X: FiniteSpace, points) -> int:
    """Union of the minimal open sets of ``points``."""
    m = 0
    for x in points:
        m |= X.down[x]
    return m


@dataclass(frozen=True)
class MonotoneMap:
    domain: FiniteSpace
    codomain: FiniteSpace
    assignment: tuple[int, ...]

    def __post_init__(self):
        a = tuple(self.assignment)
        object.__setattr__(self, "assignment", a)
        if len(a) != self.domain.n or any(not 0 <= w < self.codomain.n for w in a):
            raise BadParameter("assignment must be a total function into the codomain")
        for lo, hi in self.domain.hasse:
            if not self.codomain.leq(a[lo], a[hi]):
                raise NotMonotone(f"{self.domain.labels[lo]} <= {self.domain.labels[hi]} is not preserved")

    @property
    def is_constant(self) -> bool:
        return len(set(self.assignment)) == 1

    def labelled(self) -> dict:
        return {self.domain.labels[x]: self.codomain.labels[y] for x, y in enumerate(self.assignment)}

    def to_dict(self) -> dict:
        return {"domain": self.domain.to_dict(), "codomain": self.codomain.to_dict(), "map": self.labelled()}


def monotone_map(X: FiniteSpace, Y: FiniteSpace, assignment) -> MonotoneMap:
    if isinstance(assignment, dict):
        table = {str(k): v for k, v in assignment.items()}
        try:
            assignment = [Y.element(table[lb]) for lb in X.labels]
        except KeyError as exc:
            raise BadParameter(f"assignment misses {exc}") from None
    return MonotoneMap(X, Y, tuple(assignment))


def space_identity(X: FiniteSpace) -> MonotoneMap:
    return MonotoneMap(X, X, tuple(range(X.n)))


def compose_monotone(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    if f.codomain != g.domain:
        raise DomainMismatch("codomain of f differs from domain of g")
    return MonotoneMap(f.domain, g.codomain, tuple(g.assignment[y] for y in f.assignment))


def all_monotone_maps(X: FiniteSpace, Y: FiniteSpace) -> Iterator[tuple]:
    """Every monotone assignment, lexicographically, by backtracking on covers."""
    out = [0] * X.n
    # process points in a linear extension so lower covers are assigned first
    order = sorted(range(X.n), key=lambda x: (bin(X.down[x]).count("1"), x))

    def rec(k):
        if k == X.n:
            yield tuple(out)
            return
        x = order[k]
        allowed = (1 << Y.n) - 1
        for y in X.lower_covers[x]:
            allowed &= Y.up[out[y]]
        for c in bits(allowed):
            out[x] = c
            yield from rec(k + 1)

    yield from rec(0)


# -- functors ------------------------------------------------------------------


def _simplex_name(K: SimplicialComplex, mask: int) -> str:
    names = [K.labels[v] for v in bits(mask)]
    sep = "" if all(len(n) == 1 for n in names) else ","
    return sep.join(names)


@lru_cache(maxsize=None)
def _face_data(K: SimplicialComplex, cap: int = FACE_POSET_CAP):
    if len(K.simplex_masks) > cap:
        raise ResourceLimit(f"face poset would have more than {cap} points")
    simplices = sorted(K.simplex_masks, key=lambda s: (bin(s).count("1"), tuple(bits(s))))
    index = {s: i for i, s in enumerate(simplices)}
    down = []
    for s in simplices:
        down.append(mask_of(index[t] for t in simplices if t & s == t))
    space = FiniteSpace(tuple(_simplex_name(K, s) for s in simplices), tuple(down))
    return space, tuple(simplices), index


def face_poset(K: SimplicialComplex) -> FiniteSpace:
    """chi(K): the simplices of ``K`` ordered by inclusion."""
    return _face_data(K)[0]


def face_poset_simplices(K: SimplicialComplex) -> tuple[int, ...]:
    """Simplex mask of each point of ``face_poset(K)``."""
    return _face_data(K)[1]


def chi_map(f: SimplicialMap) -> MonotoneMap:
    """chi(f): a simplex goes to its image simplex."""
    X, src, _ = _face_data(f.domain)
    Y, _, index = _face_data(f.codomain)
    return MonotoneMap(X, Y, tuple(index[f.image(s)] for s in src))


def maximal_chains(X: FiniteSpace) -> list[int]:
    chains = []

    def walk(x, acc):
        ups = X.upper_covers[x]
        if not ups:
            chains.append(acc)
            return
        for y in ups:
            walk(y, acc | 1 << y)

    for x in range(X.n):
        if not X.lower_covers[x]:
            walk(x, 1 << x)
    return chains


def order_complex(X: FiniteSpace) -> SimplicialComplex:
    """K(X): vertices are the points, simplices the non-empty chains."""
    if not X.connected:
        raise DisconnectedComplex("order complex needs a connected space")
    return SimplicialComplex(X.labels, tuple(maximal_chains(X)))


def k_map(f: MonotoneMap) -> SimplicialMap:
    return SimplicialMap(order_complex(f.domain), order_complex(f.codomain), f.assignment)


# -- fences --------------------------------------------------------------------


def _comparison(Y: FiniteSpace, a, b) -> Optional[str]:
    if all(Y.leq(x, y) for x, y in zip(a, b)):
        return "<="
    if all(Y.leq(y, x) for x, y in zip(a, b)):
        return ">="
    return None


@dataclass(frozen=True)
class Fence:
    """Consecutive maps are pointwise comparable (uniformly ``<=`` or ``>=``)."""

    maps: tuple[MonotoneMap, ...]

    def __len__(self):
        return len(self.maps)

    @property
    def start(self) -> MonotoneMap:
        return self.maps[0]

    @property
    def end(self) -> MonotoneMap:
        return self.maps[-1]

    @classmethod
    def from_assignments(cls, X, Y, seq) -> "Fence":
        return cls(tuple(MonotoneMap(X, Y, a) for a in dedupe_consecutive(list(seq))))

    def to_dict(self) -> dict:
        return {"maps": [m.labelled() for m in self.maps]}


def _shortcut(Y: FiniteSpace, seq) -> list:
    """Drop intermediate maps whenever a later map is already comparable."""
    seq = dedupe_consecutive(list(seq))
    out, i = [seq[0]], 0
    while i < len(seq) - 1:
        j = len(seq) - 1
        while j > i + 1 and _comparison(Y, seq[i], seq[j]) is None:
            j -= 1
        out.append(seq[j])
        i = j
    return out


def verify_fence(fence: Fence, start: MonotoneMap = None, end: MonotoneMap = None) -> bool:
    maps = fence.maps
    if not maps:
        return False
    X, Y = maps[0].domain, maps[0].codomain
    for m in maps:
        if m.domain != X or m.codomain != Y:
            return False
        for lo, hi in X.hasse:
            if not Y.leq(m.assignment[lo], m.assignment[hi]):
                return False
    if start is not None and maps[0] != start:
        return False
    if end is not None and maps[-1] != end:
        return False
    return all(_comparison(Y, a.assignment, b.assignment) for a, b in zip(maps, maps[1:]))


# -- cores of finite spaces ------------------------------------------------------


def beat_point(X: FiniteSpace, alive: int = None) -> Optional[tuple[int, int]]:
    """Least ``(x, y)``: ``y`` is the maximum of the points strictly below ``x``
    (down beat point) or the minimum of those strictly above (up beat point)."""
    if alive is None:
        alive = (1 << X.n) - 1
    for x in bits(alive):
        below = X.down[x] & alive & ~(1 << x)
        for y in bits(below):
            if X.down[y] & below == below:
                return x, y
        above = X.up[x] & alive & ~(1 << x)
        for y in bits(above):
            if X.up[y] & above == above:
                return x, y
    return None


@dataclass(frozen=True)
class SpaceCore:
    space: FiniteSpace
    core: FiniteSpace
    inclusion: MonotoneMap
    retraction: MonotoneMap
    removal_order: tuple[tuple[int, int], ...]
    idr_fence: Fence


@lru_cache(maxsize=None)
def space_core(X: FiniteSpace) -> SpaceCore:
    """Remove beat points (least first) until the space is minimal."""
    if not X.connected:
        raise DisconnectedComplex("core needs a connected space")
    alive = (1 << X.n) - 1
    order = []
    while True:
        pair = beat_point(X, alive)
        if pair is None:
            break
        order.append(pair)
        alive &= ~(1 << pair[0])
    pointer = dict(order)
    steps = [tuple(range(X.n))]
    deleted = set()
    for x, _ in order:
        deleted.add(x)
        row = []
        for u in range(X.n):
            while u in deleted:
                u = pointer[u]
            row.append(u)
        steps.append(tuple(row))
    C, emb = subspace(X, alive)
    local = {p: i for i, p in enumerate(emb)}
    return SpaceCore(
        space=X,
        core=C,
        inclusion=MonotoneMap(C, X, emb),
        retraction=MonotoneMap(X, C, tuple(local[u] for u in steps[-1])),
        removal_order=tuple(order),
        idr_fence=Fence.from_assignments(X, X, steps),
    )


def _single_moves(X: FiniteSpace, Y: FiniteSpace, a) -> Iterator[tuple]:
    """Monotone maps differing from ``a`` at one point, by a comparable value."""
    full = (1 << Y.n) - 1
    for x in range(X.n):
        allowed = full
        for y in X.lower_covers[x]:
            allowed &= Y.up[a[y]]
        for y in X.upper_covers[x]:
            allowed &= Y.down[a[y]]
        cur = a[x]
        allowed &= (Y.up[cur] | Y.down[cur]) & ~(1 << cur)
        for c in bits(allowed):
            yield a[:x] + (c,) + a[x + 1:]


def _is_constant(a) -> bool:
    return all(x == a[0] for x in a)


def _pieces(X: FiniteSpace):
    if X.connected:
        return [(X, tuple(range(X.n)))]
    return [subspace(X, comp) for comp in X.components]


def _connected_fence(X, Y, a, target, limits, reduce) -> Optional[list]:
    if target is None and _is_constant(a):
        return [a]
    if not reduce:
        is_target = _is_constant if target is None else target.__eq__
        return bfs_path(a, is_target, lambda s: _single_moves(X, Y, s), limits)
    cx, cy = space_core(X), space_core(Y)
    iX, rX = cx.inclusion.assignment, cx.retraction.assignment
    iY, rY = cy.inclusion.assignment, cy.retraction.assignment

    def shrink(s):
        return tuple(rY[s[iX[u]]] for u in range(cx.core.n))

    def descend(s):
        out = [tuple(c.assignment[w] for w in s) for c in cy.idr_fence.maps]
        phi = out[-1]
        out.extend(tuple(phi[d.assignment[v]] for v in range(X.n)) for d in cx.idr_fence.maps)
        return out

    is_target = _is_constant if target is None else shrink(target).__eq__
    core_path = bfs_path(shrink(a), is_target, lambda s: _single_moves(cx.core, cy.core, s), limits)
    if core_path is None:
        return None
    path = descend(a)
    path.extend(tuple(iY[s[rX[v]]] for v in range(X.n)) for s in core_path)
    if target is not None:
        path.extend(reversed(descend(target)))
    return dedupe_consecutive(path)


def _constant_walk(Y: FiniteSpace, start: int, goal: int = 0) -> list[int]:
    prev = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == goal:
            break
        for w in bits((Y.down[u] | Y.up[u]) & ~(1 << u)):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    path = [goal]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


@lru_cache(maxsize=100_000)
def _null_fence(X, Y, a, limits, reduce) -> Optional[tuple]:
    current = list(a)
    path = [tuple(current)]
    ends = []
    for piece, emb in _pieces(X):
        sub = _connected_fence(piece, Y, tuple(a[p] for p in emb), None, limits, reduce)
        if sub is None:
            return None
        for s in sub[1:]:
            for i, p in enumerate(emb):
                current[p] = s[i]
            path.append(tuple(current))
        ends.append((emb, sub[-1][0]))
    for emb, c in ends:
        for w in _constant_walk(Y, c)[1:]:
            for p in emb:
                current[p] = w
            path.append(tuple(current))
    return tuple(dedupe_consecutive(path))


def homotopic(
    f: MonotoneMap, g: MonotoneMap, limits: SearchLimits = DEFAULT_LIMITS, reduce: bool = True
) -> Optional[Fence]:
    """A fence from ``f`` to ``g``, or None when they are not homotopic."""
    if f.domain != g.domain or f.codomain != g.codomain:
        raise DomainMismatch("maps must share domain and codomain")
    X, Y = f.domain, f.codomain
    if not Y.connected:
        raise DisconnectedComplex("codomain must be connected")
    current = list(f.assignment)
    path = [tuple(current)]
    for piece, emb in _pieces(X):
        sub = _connected_fence(
            piece, Y, tuple(f.assignment[p] for p in emb), tuple(g.assignment[p] for p in emb), limits, reduce
        )
        if sub is None:
            return None
        for s in sub[1:]:
            for i, p in enumerate(emb):
                current[p] = s[i]
            path.append(tuple(current))
    return Fence.from_assignments(X, Y, _shortcut(Y, path))


def null_homotopy(f: MonotoneMap, limits: SearchLimits = DEFAULT_LIMITS, reduce: bool = True) -> Optional[Fence]:
    """Fence from ``f`` to the constant map at the first codomain point, or None."""
    if not f.codomain.connected:
        raise DisconnectedComplex("codomain must be connected")
    path = _null_fence(f.domain, f.codomain, f.assignment, limits, reduce)
    if path is None:
        return None
    return Fence.from_assignments(f.domain, f.codomain, _shortcut(f.codomain, path))


# -- LS category of finite spaces ------------------------------------------------


@dataclass(frozen=True)
class OpenCover:
    """Open sets as unions of ``U_x`` over the listed maximal points."""

    map: MonotoneMap
    generators: tuple[tuple[int, ...], ...]
    fences: tuple[Fence, ...]

    @property
    def size(self) -> int:
        return len(self.generators)

    def to_dict(self) -> dict:
        X = self.map.domain
        return {
            "parts": [[X.labels[x] for x in g] for g in self.generators],
            "fences": [f.to_dict() for f in self.fences],
        }


def _restrict_monotone(f: MonotoneMap, mask: int) -> MonotoneMap:
    U, emb = subspace(f.domain, mask)
    return MonotoneMap(U, f.codomain, tuple(f.assignment[p] for p in emb))


def cat_map(
    f: MonotoneMap, limits: SearchLimits = DEFAULT_LIMITS, max_subsets: int = 1 << 16
) -> tuple[int, OpenCover]:
    """Least ``n`` such that ``n+1`` open sets with null-homotopic restrictions cover."""
    X, Y = f.domain, f.codomain
    if not X.connected or not Y.connected:
        raise DisconnectedComplex("spaces must be connected")
    tops = X.maximal_points
    memo: dict[int, bool] = {}

    def hull(s):
        return open_hull(X, (tops[i] for i in bits(s)))

    def good(s):
        if s not in memo:
            h = _restrict_monotone(f, hull(s))
            memo[s] = _null_fence(h.domain, h.codomain, h.assignment, limits, True) is not None
        return memo[s]

    maximal = _maximal_down_closed(len(tops), good, max_subsets)
    count, selection = min_set_cover(len(tops), maximal)
    gens, fences = [], []
    for i in selection:
        s = maximal[i]
        gens.append(tuple(tops[j] for j in bits(s)))
        fences.append(null_homotopy(_restrict_monotone(f, hull(s)), limits))
    return count - 1, OpenCover(f, tuple(gens), tuple(fences))


def cat_space(X: FiniteSpace, limits: SearchLimits = DEFAULT_LIMITS) -> tuple[int, OpenCover]:
    return cat_map(space_identity(X), limits)


def verify_open_cover(cover: OpenCover) -> bool:
    f = cover.map
    X = f.domain
    union = 0
    for gens, fence in zip(cover.generators, cover.fences):
        mask = open_hull(X, gens)
        union |= mask
        expected = _restrict_monotone(f, mask)
        if fence is None or not verify_fence(fence, start=expected) or not fence.end.is_constant:
            return False
    return len(cover.generators) == len(cover.fences) and union == (1 << X.n) - 1


# -- translating certificates between the two worlds ---------------------------


def chain_to_fence(chain: ContiguityChain) -> Fence:
    """chi of a contiguity chain: ``chi(f) <= chi(f) u chi(g) >= chi(g)`` per step."""
    X, src, _ = _face_data(chain.domain)
    Y, _, index = _face_data(chain.codomain)
    seq = []
    for f, g in zip(chain.maps, chain.maps[1:]):
        seq.append(tuple(index[f.image(s)] for s in src))
        seq.append(tuple(index[f.image(s) | g.image(s)] for s in src))
    last = chain.maps[-1]
    seq.append(tuple(index[last.image(s)] for s in src))
    return Fence.from_assignments(X, Y, seq)


def _single_point_steps(Y: FiniteSpace, X: FiniteSpace, a, b) -> list[tuple]:
    """Refine a comparable pair into moves that change one point at a time."""
    direction = _comparison(Y, a, b)
    if direction is None:
        raise BadParameter("fence step is not comparable")
    steps = [a]
    cur = list(a)
    while tuple(cur) != tuple(b):
        diff = [x for x in range(X.n) if cur[x] != b[x]]
        if direction == "<=":
            # a maximal differing point can be raised first
            x = next(x for x in diff if not any(y != x and X.leq(x, y) for y in diff))
        else:
            x = next(x for x in diff if not any(y != x and X.leq(y, x) for y in diff))
        cur[x] = b[x]
        steps.append(tuple(cur))
    return steps


def fence_to_chain(fence: Fence) -> ContiguityChain:
    """K of a fence, refined to single-point moves so each step is a contiguity."""
    X, Y = fence.start.domain, fence.start.codomain
    seq = [fence.maps[0].assignment]
    for f, g in zip(fence.maps, fence.maps[1:]):
        seq.extend(_single_point_steps(Y, X, f.assignment, g.assignment)[1:])
    return ContiguityChain.from_assignments(order_complex(X), order_complex(Y), seq)


# -- small posets ----------------------------------------------------------------


def _poset_form(n: int, down) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        form = [0] * n
        for x in range(n):
            form[perm[x]] = mask_of(perm[y] for y in bits(down[x]))
        form = tuple(form)
        if best is None or form < best:
            best = form
    return best


def enumerate_posets(max_points: int) -> list[FiniteSpace]:
    """Connected posets up to isomorphism with at most ``max_points`` points."""
    if max_points > MAX_POINTS:
        raise ResourceLimit(f"poset enumeration capped at {MAX_POINTS} points")
    out = []
    for n in range(1, max_points + 1):
        # every poset has a linear extension, so relations i < j suffice
        pairs = [(i, j) for j in range(n) for i in range(j)]
        closures = set()
        for chosen in range(1 << len(pairs)):
            down = [1 << i for i in range(n)]
            for k in bits(chosen):
                lo, hi = pairs[k]
                down[hi] |= down[lo]
            closures.add(tuple(down))
        forms = set()
        for down in closures:
            if FiniteSpace(default_labels(n), down).connected:
                forms.add(_poset_form(n, down))
        for form in sorted(forms):
            out.append(FiniteSpace(default_labels(n), form))
    return out
