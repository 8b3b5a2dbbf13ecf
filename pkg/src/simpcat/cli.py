"""Command-line interface.

Every command prints one report: the command echo, a digest of its inputs,
the results, witnesses (or the file they were written to), limit hits and
timing.  Exit status: 0 success, 1 bad input (or an invalid certificate / a
failed property), 2 unknown because a resource limit was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .category import build_factorization, gscat_exact, gscat_upper, scat_map
from .certificates import (
    CERTIFICATE_KINDS,
    chain_certificate,
    check_certificate,
    cover_certificate,
    digest,
    dumps,
    factorization_certificate,
    fence_certificate,
    load_complex,
    load_map,
    load_monotone_map,
    load_space,
)
from .complex import categorical_product, cone
from .contiguity import core, identity, same_contiguity_class
from .corpus import enumerate_corpus
from .errors import ParseError, ResourceLimit, SimpcatError
from .fibration import (
    check_fibration_inequalities,
    es_bounded,
    es_equivalence_crosscheck,
    fiber,
    fibers_equivalent,
    is_fibration_over,
)
from .finite_space import cat_map, cat_space, chi_map, face_poset, k_map, order_complex
from .search import SearchLimits
from .suite import GROUPS, SuiteConfig, run_suite

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2


class Unknown(Exception):
    """The answer could not be determined within the configured limits."""


# -- input ------------------------------------------------------------------------


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None


def _unwrap(doc, key: str):
    """Accept a bare document or a report whose results carry one (for pipes)."""
    if isinstance(doc, dict) and "results" in doc and isinstance(doc["results"], dict) and key in doc["results"]:
        return doc["results"][key]
    return doc


def _complex(path):
    return load_complex(_unwrap(_read_json(path), "complex"))


def _map(path):
    return load_map(_unwrap(_read_json(path), "map"))


def _space(path):
    return load_space(_unwrap(_read_json(path), "space"))


def _monotone(path):
    return load_monotone_map(_unwrap(_read_json(path), "map"))


def _vertex(K, label):
    return K.vertex_id(label)


# -- commands -------------------------------------------------------------------------
# each returns (inputs, results, witnesses)


def cmd_scat(args, limits):
    K = _complex(args.complex)
    n, cover = scat_map(identity(K), limits, args.max_subsets)
    return [K.to_dict()], {"scat": n, "cover_size": cover.size}, {"cover": cover_certificate(cover)}


def cmd_scat_map(args, limits):
    f = _map(args.map)
    n, cover = scat_map(f, limits, args.max_subsets)
    witnesses = {"cover": cover_certificate(cover)}
    if args.factorize:
        witnesses["factorization"] = factorization_certificate(build_factorization(f, cover), f, n)
    return [f.to_dict()], {"scat": n, "cover_size": cover.size}, witnesses


def cmd_gscat(args, limits):
    K = _complex(args.complex)
    n, cover = gscat_upper(K, args.max_subsets)
    results = {"gscat_upper": n}
    try:
        results["gscat_exact"] = gscat_exact(K)
    except ResourceLimit:
        results["gscat_exact"] = "unknown"
    return [K.to_dict()], results, {"cover": cover_certificate(cover)}


def cmd_core(args, limits):
    K = _complex(args.complex)
    data = core(K)
    results = {
        "complex": data.core.to_dict(),
        "removed": [[K.labels[v], K.labels[w]] for v, w in data.removal_order],
        "strong_collapsible": data.core.n_vertices == 1,
    }
    return [K.to_dict()], results, {"idr_chain": chain_certificate(data.idr_chain)}


def cmd_contiguous(args, limits):
    if len(args.map) != 2:
        raise ParseError("contiguous needs exactly two --map files")
    f, g = _map(args.map[0]), _map(args.map[1])
    chain = same_contiguity_class(f, g, limits)
    inputs = [f.to_dict(), g.to_dict()]
    if chain is None:
        return inputs, {"same_class": False, "verdict": "different classes"}, {}
    return inputs, {"same_class": True, "chain_length": len(chain)}, {"chain": chain_certificate(chain)}


def cmd_product(args, limits):
    if len(args.complex) != 2:
        raise ParseError("product needs exactly two --complex files")
    K, L = _complex(args.complex[0]), _complex(args.complex[1])
    P = categorical_product(K, L, cap=args.product_cap)
    return [K.to_dict(), L.to_dict()], {"complex": P.to_dict()}, {}


def cmd_cone(args, limits):
    K = _complex(args.complex)
    return [K.to_dict()], {"complex": cone(K, args.apex).to_dict()}, {}


def cmd_chi(args, limits):
    if args.map:
        f = _map(args.map)
        return [f.to_dict()], {"map": chi_map(f).to_dict()}, {}
    if not args.complex:
        raise ParseError("chi needs --complex or --map")
    K = _complex(args.complex)
    return [K.to_dict()], {"space": face_poset(K).to_dict()}, {}


def cmd_order_complex(args, limits):
    if args.map:
        f = _monotone(args.map)
        return [f.to_dict()], {"map": k_map(f).to_dict()}, {}
    if not args.space:
        raise ParseError("order-complex needs --space or --map")
    X = _space(args.space)
    return [X.to_dict()], {"complex": order_complex(X).to_dict()}, {}


def _open_cover_witness(cover):
    return {
        "parts": cover.to_dict()["parts"],
        "fences": [fence_certificate(f) for f in cover.fences],
    }


def cmd_cat_space(args, limits):
    X = _space(args.space)
    n, cover = cat_space(X, limits)
    return [X.to_dict()], {"cat": n}, {"cover": _open_cover_witness(cover)}


def cmd_cat_map(args, limits):
    f = _monotone(args.map)
    n, cover = cat_map(f, limits)
    return [f.to_dict()], {"cat": n}, {"cover": _open_cover_witness(cover)}


def cmd_fiber(args, limits):
    p = _map(args.map)
    F = fiber(p, _vertex(p.codomain, args.vertex))
    return [p.to_dict()], {"complex": F.complex.to_dict()}, {}


def cmd_fibration_check(args, limits):
    p = _map(args.map)
    universe = enumerate_corpus(args.universe)
    verdict = is_fibration_over(p, universe, limits)
    results = {"universe_max_vertices": args.universe, "verdict": verdict.to_dict()}
    if verdict.verified:
        results["fibers_equivalent"] = fibers_equivalent(p)
        base = _vertex(p.codomain, args.fiber_base) if args.fiber_base is not None else 0
        results["inequalities"] = check_fibration_inequalities(p, base, limits)
    elif verdict.status == "resource_limited":
        raise Unknown(verdict.reason)
    return [p.to_dict()], results, {}


def cmd_es(args, limits):
    f = _map(args.map)
    universe = enumerate_corpus(args.universe)
    res = es_bounded(f, universe, args.n_max, limits)
    results = {"universe_max_vertices": args.universe, "es": res.to_dict()}
    if args.crosscheck is not None:
        results["crosscheck"] = es_equivalence_crosscheck(f, universe, args.crosscheck, limits)
    return [f.to_dict()], results, {}


def cmd_generate(args, limits):
    corpus = enumerate_corpus(args.max_vertices, args.max_facets)
    by_n: dict[int, int] = {}
    for K in corpus:
        by_n[K.n_vertices] = by_n.get(K.n_vertices, 0) + 1
    results = {
        "max_vertices": args.max_vertices,
        "max_facets": args.max_facets,
        "count": len(corpus),
        "count_by_vertices": {str(k): v for k, v in sorted(by_n.items())},
        "complexes": [K.to_dict() for K in corpus],
    }
    return [], results, {}


def cmd_verify(args, limits):
    config = SuiteConfig(
        max_vertices=args.max_vertices,
        map_vertices=min(args.map_vertices, args.max_vertices),
        maps_per_pair=args.maps_per_pair,
        seed=args.seed,
        groups=tuple(args.suite or ()),
        limits=limits,
    )
    report = run_suite(config, jobs=args.jobs)
    body = report.to_dict(timing=False)
    if args.output and report.failed:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        for r in report.failed:
            for i, example in enumerate(r.failures):
                (out / f"counterexample-{r.name}-{i}.json").write_text(dumps(example))
    results = {
        "matrix": [
            {k: r[k] for k in ("name", "group", "status", "checked", "failed", "skipped", "notes")} for r in body["results"]
        ],
        "summary": body["summary"],
        "digest": body["digest"],
        "config": body["config"],
    }
    witnesses = {"counterexamples": {r.name: r.failures for r in report.failed}}
    return [], results, witnesses


def _certificates(doc, path=""):
    """Yield (path, certificate) for every certificate inside a bundle or report."""
    if isinstance(doc, dict):
        if doc.get("kind") in CERTIFICATE_KINDS:
            yield path or "certificate", doc
            return
        for key in sorted(doc):
            yield from _certificates(doc[key], f"{path}.{key}" if path else key)
    elif isinstance(doc, list):
        for i, item in enumerate(doc):
            yield from _certificates(item, f"{path}[{i}]")


def cmd_verify_certificate(args, limits):
    doc = _read_json(args.file)
    if isinstance(doc, dict) and "kind" in doc:
        return [doc], check_certificate(doc, args.kind).to_dict(), {}
    found = [(p, c) for p, c in _certificates(doc) if args.kind in (None, c["kind"])]
    if not found:
        raise ParseError(f"{args.file} holds no {args.kind or ''} certificate".replace("  ", " "))
    checks = {p: check_certificate(c).to_dict() for p, c in found}
    reasons = [f"{p}: {c['reason']}" for p, c in checks.items() if not c["valid"]]
    results = {"valid": not reasons, "reason": "; ".join(reasons), "checked": checks}
    return [doc], results, {}


COMMANDS = {
    "scat": cmd_scat,
    "scat-map": cmd_scat_map,
    "gscat": cmd_gscat,
    "core": cmd_core,
    "contiguous": cmd_contiguous,
    "product": cmd_product,
    "cone": cmd_cone,
    "chi": cmd_chi,
    "order-complex": cmd_order_complex,
    "cat-space": cmd_cat_space,
    "cat-map": cmd_cat_map,
    "fiber": cmd_fiber,
    "fibration-check": cmd_fibration_check,
    "es": cmd_es,
    "generate": cmd_generate,
    "verify": cmd_verify,
    "verify-certificate": cmd_verify_certificate,
}


# -- argument parsing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=1, help="worker processes (verify)")
    common.add_argument("--limits", help="JSON file with max_states / max_neighbors / max_subsets")
    common.add_argument("--output", help="write witnesses here (a directory for verify)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--max-states", type=int, help="states per class search")
    common.add_argument("--max-subsets", type=int, default=None, help="facet subsets per cover search")

    parser = argparse.ArgumentParser(prog="simpcat", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    add("scat", "simplicial category of a complex").add_argument("--complex", required=True)
    p = add("scat-map", "simplicial category of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--factorize", action="store_true", help="also emit a factorization witness")
    add("gscat", "geometric category bounds").add_argument("--complex", required=True)
    add("core", "strong collapse to the core").add_argument("--complex", required=True)
    add("contiguous", "decide whether two maps share a contiguity class").add_argument(
        "--map", action="append", required=True
    )
    p = add("product", "categorical product of two complexes")
    p.add_argument("--complex", action="append", required=True)
    p.add_argument("--product-cap", type=int, default=64)
    p = add("cone", "cone over a complex")
    p.add_argument("--complex", required=True)
    p.add_argument("--apex", default="v")
    p = add("chi", "face poset of a complex or a map")
    p.add_argument("--complex")
    p.add_argument("--map")
    p = add("order-complex", "order complex of a space or a monotone map")
    p.add_argument("--space")
    p.add_argument("--map")
    add("cat-space", "LS category of a finite space").add_argument("--space", required=True)
    add("cat-map", "LS category of a monotone map").add_argument("--map", required=True)
    p = add("fiber", "fibre of a map over a vertex")
    p.add_argument("--map", required=True)
    p.add_argument("--vertex", required=True)
    p = add("fibration-check", "lifting property over a bounded universe")
    p.add_argument("--map", required=True)
    p.add_argument("--universe", type=int, default=3, help="corpus vertex bound")
    p.add_argument("--fiber-base")
    p = add("es", "essential simplicial category relative to a universe")
    p.add_argument("--map", required=True)
    p.add_argument("--universe", type=int, default=4)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--crosscheck", type=int, help="also compare the three characterisations at this n")
    p = add("generate", "enumerate connected complexes up to isomorphism")
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--max-facets", type=int)
    p = add("verify", "run the property suite")
    p.add_argument("--max-vertices", type=int, default=5)
    p.add_argument("--map-vertices", type=int, default=4)
    p.add_argument("--maps-per-pair", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", action="append", choices=GROUPS)
    p = add("verify-certificate", "replay a certificate without searching")
    p.add_argument("--kind", choices=CERTIFICATE_KINDS)
    p.add_argument("file")
    return parser


def _limits(args) -> tuple[SearchLimits, int]:
    values = {}
    if args.limits:
        doc = _read_json(args.limits)
        if not isinstance(doc, dict) or set(doc) - {"max_states", "max_neighbors", "max_subsets"}:
            raise ParseError("limits file takes max_states, max_neighbors and max_subsets")
        values = dict(doc)
    if args.max_states is not None:
        values["max_states"] = args.max_states
    if args.max_subsets is not None:
        values["max_subsets"] = args.max_subsets
    max_subsets = values.pop("max_subsets", 1 << 16)
    return SearchLimits(**values), max_subsets


def _text(report: dict) -> str:
    lines = [f"command: {report['command']}"]

    def walk(prefix, value):
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}{k}.", value[k])
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            lines.append(f"{prefix[:-1]}: [{len(value)} entries]")
        else:
            lines.append(f"{prefix[:-1]}: {json.dumps(value, ensure_ascii=False)}")

    walk("", report["results"])
    if report.get("witness_file"):
        lines.append(f"witnesses: {report['witness_file']}")
    if report.get("error"):
        lines.append(f"error: {report['error']}")
    return "\n".join(lines) + "\n"


def _echo(args) -> dict:
    skip = {"func", "format", "output", "jobs"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"command": args.command, "args": _echo(args), "limit_hits": []}
    start = time.perf_counter()
    code = EXIT_OK
    try:
        limits, max_subsets = _limits(args)
        args.max_subsets = max_subsets
        inputs, results, witnesses = COMMANDS[args.command](args, limits)
        report["inputs_digest"] = digest(inputs)
        report["results"] = results
        if args.command == "generate" and args.output:
            Path(args.output).write_text(dumps(results))
            report["corpus_file"] = args.output
            results = {k: v for k, v in results.items() if k != "complexes"}
            report["results"] = results
        elif witnesses and args.output and args.command != "verify":
            Path(args.output).write_text(dumps(witnesses))
            report["witness_file"] = args.output
        else:
            report["witnesses"] = witnesses
        if args.command == "verify" and results["summary"].get("fail"):
            code = EXIT_INPUT
        if args.command == "verify-certificate" and not results["valid"]:
            code = EXIT_INPUT
    except (ResourceLimit, Unknown) as exc:
        report["results"] = {"value": "unknown"}
        report["limit_hits"].append(str(exc))
        report["error"] = f"resource limit reached: {exc}; raise --max-states or --max-subsets"
        code = EXIT_UNKNOWN
    except SimpcatError as exc:
        report["results"] = {}
        report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_INPUT
    report["digest"] = digest({k: v for k, v in report.items() if k != "timing"})
    report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    stdout.write(dumps(report) if args.format == "json" else _text(report))
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
