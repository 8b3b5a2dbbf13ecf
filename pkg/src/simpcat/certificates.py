"""JSON documents for complexes, maps, spaces and witness certificates, and a
checker that replays certificates from the documents alone.

The checker rebuilds every object from JSON and uses only simpliciality and
the contiguity predicate; it never runs a search.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .category import Cover, FactorizationWitness
from .complex import SimplicialComplex, Subcomplex
from .contiguity import (
    ContiguityChain,
    SimplicialMap,
    compose,
    identity,
    restrict,
    validate_map,
    verify_chain,
)
from .errors import BadParameter, NotSimplicial, ParseError, SimpcatError
from .finite_space import Fence, FiniteSpace, monotone_map, verify_fence

CERTIFICATE_KINDS = ("chain", "cover", "factorization", "fence")


def dumps(doc) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def digest(doc) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


# -- plain documents ---------------------------------------------------------------


def load_complex(doc) -> SimplicialComplex:
    return SimplicialComplex.from_dict(doc)


def map_document(f: SimplicialMap) -> dict:
    return f.to_dict()


def load_map(doc) -> SimplicialMap:
    if not isinstance(doc, dict) or set(doc) != {"domain", "codomain", "map"}:
        raise ParseError("map file needs exactly 'domain', 'codomain' and 'map'")
    K = load_complex(doc["domain"])
    L = load_complex(doc["codomain"])
    return _map_between(K, L, doc["map"])


def _map_between(K, L, table) -> SimplicialMap:
    if not isinstance(table, dict):
        raise ParseError("a map must be an object from vertex to vertex")
    try:
        return validate_map(K, L, table)
    except BadParameter as exc:
        raise ParseError(str(exc)) from None


def load_space(doc) -> FiniteSpace:
    return FiniteSpace.from_dict(doc)


def load_monotone_map(doc):
    if not isinstance(doc, dict) or set(doc) != {"domain", "codomain", "map"}:
        raise ParseError("map file needs exactly 'domain', 'codomain' and 'map'")
    X, Y = load_space(doc["domain"]), load_space(doc["codomain"])
    try:
        return monotone_map(X, Y, doc["map"])
    except SimpcatError as exc:
        raise ParseError(str(exc)) from None


# -- emitting certificates ----------------------------------------------------------


def chain_certificate(chain: ContiguityChain) -> dict:
    return {
        "kind": "chain",
        "domain": chain.domain.to_dict(),
        "codomain": chain.codomain.to_dict(),
        "maps": [m.labelled() for m in chain.maps],
    }


def _part_generators(part: Subcomplex) -> list[list[str]]:
    return [part.parent.simplex_labels(g) for g in part.generators]


def cover_certificate(cover: Cover) -> dict:
    return {
        "kind": "cover",
        "geometric": cover.geometric,
        "map": cover.map.to_dict(),
        "parts": [_part_generators(p) for p in cover.parts],
        "chains": [[m.labelled() for m in c.maps] for c in cover.chains],
    }


def factorization_certificate(w: FactorizationWitness, f: SimplicialMap, n: int) -> dict:
    return {
        "kind": "factorization",
        "n": n,
        "map": f.to_dict(),
        "K_prime": w.K_prime.to_dict(),
        "ell": w.ell.labelled(),
        "g": w.g.labelled(),
        "gscat_parts": [_part_generators(p) for p in w.gscat_cover.parts],
        "gscat_chains": [[m.labelled() for m in c.maps] for c in w.gscat_cover.chains],
        "comm_chain": [m.labelled() for m in w.comm_chain.maps],
    }


def fence_certificate(fence: Fence) -> dict:
    return {
        "kind": "fence",
        "domain": fence.start.domain.to_dict(),
        "codomain": fence.start.codomain.to_dict(),
        "maps": [m.labelled() for m in fence.maps],
    }


# -- checking certificates -----------------------------------------------------------


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"valid": self.ok, "reason": self.reason}


def _fail(reason: str) -> CertificateCheck:
    return CertificateCheck(False, reason)


def _chain_between(K, L, tables) -> ContiguityChain:
    if not isinstance(tables, list) or not tables:
        raise ParseError("a chain needs a non-empty list of maps")
    return ContiguityChain(tuple(_map_between(K, L, t) for t in tables))


def _check_parts(f: SimplicialMap, parts_doc, chains_doc, geometric: bool) -> CertificateCheck:
    K = f.domain
    if not isinstance(parts_doc, list) or not isinstance(chains_doc, list):
        raise ParseError("'parts' and 'chains' must be lists")
    if len(parts_doc) != len(chains_doc):
        return _fail("number of parts and chains differ")
    covered = set()
    for j, (gens, tables) in enumerate(zip(parts_doc, chains_doc)):
        try:
            part = Subcomplex(K, tuple(K.simplex_mask(g) for g in gens))
        except SimpcatError as exc:
            return _fail(f"part {j}: {exc}")
        if part.empty:
            return _fail(f"part {j} is empty")
        expected = identity(part.complex) if geometric else restrict(f, part)
        chain = _chain_between(part.complex, expected.codomain, tables)
        if not chain.end.is_constant:
            return _fail(f"chain of part {j} does not end at a constant map")
        check = verify_chain(chain, start=expected)
        if not check:
            return _fail(f"chain of part {j}: {check.reason}")
        covered.update(m for m in K.facet_masks if part.contains(m))
    for m in K.facet_masks:
        if m not in covered:
            return _fail(f"facet {K.simplex_labels(m)} is not covered")
    return CertificateCheck(True)


def check_certificate(doc, kind: str = None) -> CertificateCheck:
    """Replay a certificate document; ``kind`` must match when given."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError("certificate must be an object with a 'kind'")
    if kind is not None and doc["kind"] != kind:
        return _fail(f"expected a {kind} certificate, got {doc['kind']}")
    try:
        return _CHECKERS[doc["kind"]](doc)
    except NotSimplicial as exc:
        return _fail(str(exc))
    except KeyError as exc:
        if doc["kind"] not in _CHECKERS:
            raise ParseError(f"unknown certificate kind {doc['kind']!r}") from None
        raise ParseError(f"certificate is missing {exc}") from None


def _check_chain(doc) -> CertificateCheck:
    K, L = load_complex(doc["domain"]), load_complex(doc["codomain"])
    check = verify_chain(_chain_between(K, L, doc["maps"]))
    return CertificateCheck(check.ok, check.reason)


def _check_cover(doc) -> CertificateCheck:
    f = load_map(doc["map"])
    geometric = bool(doc.get("geometric", False))
    if geometric and f != identity(f.domain):
        return _fail("a geometric cover must be for an identity map")
    return _check_parts(f, doc["parts"], doc["chains"], geometric)


def _check_factorization(doc) -> CertificateCheck:
    f = load_map(doc["map"])
    n = doc["n"]
    if not isinstance(n, int) or n < 0:
        raise ParseError("'n' must be a non-negative integer")
    Kp = load_complex(doc["K_prime"])
    ell = _map_between(f.domain, Kp, doc["ell"])
    g = _map_between(Kp, f.codomain, doc["g"])
    if len(doc["gscat_parts"]) > n + 1:
        return _fail(f"{len(doc['gscat_parts'])} collapsible parts exceed n + 1 = {n + 1}")
    parts = _check_parts(identity(Kp), doc["gscat_parts"], doc["gscat_chains"], True)
    if not parts:
        return parts
    comm = _chain_between(f.domain, f.codomain, doc["comm_chain"])
    check = verify_chain(comm, start=compose(g, ell), end=f)
    if not check:
        return _fail(f"commutation chain: {check.reason}")
    return CertificateCheck(True)


def _check_fence(doc) -> CertificateCheck:
    X, Y = load_space(doc["domain"]), load_space(doc["codomain"])
    maps = doc["maps"]
    if not isinstance(maps, list) or not maps:
        raise ParseError("a fence needs a non-empty list of maps")
    try:
        fence = Fence(tuple(monotone_map(X, Y, m) for m in maps))
    except SimpcatError as exc:
        return _fail(str(exc))
    return CertificateCheck(True) if verify_fence(fence) else _fail("consecutive maps are not comparable")


_CHECKERS = {
    "chain": _check_chain,
    "cover": _check_cover,
    "factorization": _check_factorization,
    "fence": _check_fence,
}
