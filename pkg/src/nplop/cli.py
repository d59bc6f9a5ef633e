"""Command-line front end.

    nplop eval --structure NAME --op OP [--at LABEL] [--input FILE|JSON]
    nplop check [--manifest FILE] [--jobs N] [--max-instances N]
    nplop golden [--name NAME]

Exit status: 0 ok, 1 a check disagreed with its declared expectation,
2 usage, parse or precondition error.
"""

import argparse
import json
import os
import sys
from importlib import resources

from .axioms import AxiomCheck, minimal_counterexample, report_to_json, run_check
from .combinatorics import Cycle, LinearOrder, LinearSetPartition, SetPartition, cycle_cyc, cycle_lin, shuffles
from .freecomm import FreeCommNpl, FreeCommSquare, NestedElement, global_gamma, operadic_global
from .instances import arrowpi_global, pi_global
from .linear import LinComb, format_lincomb
from .polymap import EndOperad, PolymapNpl, PolynomialMap, end_compose, npl_partial, partial_evaluate, prelie
from .registry import get_morphism, get_product, get_structure
from .serialize import dumps, lincomb_document, map_document

OPS = ("compose", "npl", "square", "global", "unit", "transport", "lin", "cyc", "shuffle", "prelie", "evaluate")

MANIFEST_KEYS = {
    "structure", "params", "axiom", "expect", "max_size", "max_part", "max_instances",
    "samples", "seed", "max_blocks", "product", "morphism", "dim", "note",
}


class UsageError(ValueError):
    pass


def _variant(name, op):
    """Pick the structure whose own composition is the requested one."""
    if op == "npl":
        if name.startswith("E(") and ")/" in name:
            return name[:name.rindex(")/") + 1]
        return {"pi": "pi-npl", "arrow-pi": "arrow-pi-npl"}.get(name, name)
    if op == "square":
        return {"pi-npl": "pi", "arrow-pi-npl": "arrow-pi"}.get(name, name)
    return name


def _args(data, count, op):
    if not isinstance(data, list) or len(data) != count:
        raise UsageError(f"op {op!r} takes a JSON array of {count} argument(s)")
    return data


def _need_at(at, op):
    if at is None:
        raise UsageError(f"op {op!r} needs --at")
    return at


def _label(text):
    """Labels are integers when they look like integers, else strings."""
    if isinstance(text, int):
        return text
    try:
        return int(text)
    except ValueError:
        return text


def _is_map_structure(P):
    return isinstance(P, (PolymapNpl, EndOperad))


def _global(name, data):
    if not isinstance(data, dict):
        raise UsageError("op 'global' takes a JSON object")
    if name in ("pi", "pi-npl"):
        P = get_structure("pi")
        pi = SetPartition(_field(data, "pi"))
        tau = [[tuple(b) for b in group] for group in _field(data, "tau")]
        rhos = None
        if "rho" in data:
            rhos = {}
            for r in data["rho"]:
                part = SetPartition(r)
                rhos[tuple(sorted(part.ground))] = part
        return P, LinComb.single(pi_global(pi, tau, rhos))
    if name in ("arrow-pi", "arrow-pi-npl"):
        P = get_structure("arrow-pi")
        pi = SetPartition(_field(data, "pi"))
        rhos = {}
        for r in _field(data, "rho"):
            lsp = LinearSetPartition(r)
            rhos[tuple(sorted(lsp.ground))] = lsp
        return P, arrowpi_global(pi, _field(data, "tau"), rhos)
    P = get_structure(name)
    if isinstance(P, FreeCommSquare):
        return P, operadic_global(P.q, P.mu, NestedElement.from_json(P.q, data))
    if isinstance(P, FreeCommNpl):
        return P, global_gamma(P.q, NestedElement.from_json(P.q, data))
    raise UsageError(f"no global composition for structure {name!r}")


def _field(data, key):
    if key not in data:
        raise UsageError(f"missing field {key!r}")
    return data[key]


def _maps(data, count, op):
    return [PolynomialMap.from_json(a) for a in _args(data, count, op)]


def _points(data):
    if not isinstance(data, dict):
        raise UsageError("points are an object mapping slot to vector")
    return {_label(k): v for k, v in data.items()}


def evaluate(structure, op, data, at=None):
    """Run one operation; returns a JSON document.

    ``data`` is the decoded ``--input``: an array of arguments, or an
    object for ``global``.
    """
    if op not in OPS:
        raise UsageError(f"unknown op {op!r}; known: {', '.join(OPS)}")
    if op == "global":
        P, result = _global(structure, data)
        return lincomb_document(P, result)
    P = get_structure(_variant(structure, op))
    if _is_map_structure(P):
        tag = "end" if isinstance(P, EndOperad) else "polymap"
        if op in ("compose", "npl", "square"):
            g, f = _maps(data, 2, op)
            b = _need_at(at, op)
            return map_document(end_compose(g, b, f) if tag == "end" else npl_partial(g, b, f), tag)
        if op == "prelie":
            f, g = _maps(data, 2, op)
            return map_document(prelie(f, g), tag)
        if op == "evaluate":
            f, points = _args(data, 2, op)
            return map_document(partial_evaluate(PolynomialMap.from_json(f), _points(points)), tag)
        if op == "transport":
            f, sigma = _args(data, 2, op)
            return map_document(PolynomialMap.from_json(f).relabel(_points(sigma)), tag)
        raise UsageError(f"op {op!r} does not apply to polynomial maps")
    if op in ("compose", "npl", "square"):
        x, y = (P.parse_term(a) for a in _args(data, 2, op))
        return lincomb_document(P, P.compose(x, _need_at(at, op), y))
    if op == "unit":
        return lincomb_document(P, P.unit(_need_at(at, op)))
    if op == "transport":
        x, sigma = _args(data, 2, op)
        return lincomb_document(P, LinComb.single(P.transport(P.parse_term(x), _points(sigma))))
    if op == "lin":
        (c,) = _args(data, 1, op)
        return lincomb_document(get_structure("as+"), cycle_lin(Cycle(c)))
    if op == "cyc":
        (w,) = _args(data, 1, op)
        return lincomb_document(get_structure("cycles"), LinComb.single(cycle_cyc(LinearOrder(w))))
    if op == "shuffle":
        u, v = (LinearOrder(a) for a in _args(data, 2, op))
        if u.ground & v.ground:
            raise UsageError("shuffled words must be disjoint")
        return lincomb_document(get_structure("as+"), LinComb((w, 1) for w in shuffles(u, v)))
    raise UsageError(f"op {op!r} does not apply to structure {structure!r}")


def render_text(doc):
    """Human-readable form of an eval document."""
    if "map" in doc:
        return str(PolynomialMap.from_json(doc["map"]))
    P = get_structure(doc["structure"])
    comb = LinComb((P.parse_term(e["term"]), e["coeff"]) for e in doc["terms"])
    return format_lincomb(comb, P.format_term)


def _read_input(text):
    if text is None or text == "-":
        raw = sys.stdin.read()
    elif os.path.isfile(text):
        with open(text) as fh:
            raw = fh.read()
    else:
        raw = text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is neither a readable file nor valid JSON: {exc}") from None


def load_manifest(path=None):
    """Return the manifest's check entries; the bundled default when ``path`` is None."""
    if path is None:
        raw = resources.files("nplop").joinpath("manifests/default.json").read_text()
    else:
        with open(path) as fh:
            raw = fh.read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"manifest is not valid JSON: {exc}") from None
    entries = doc.get("checks") if isinstance(doc, dict) else doc
    if not isinstance(entries, list):
        raise UsageError("a manifest is an array of checks or an object with a 'checks' array")
    for i, e in enumerate(entries):
        if not isinstance(e, dict):
            raise UsageError(f"check #{i} is not an object")
        unknown = set(e) - MANIFEST_KEYS
        if unknown:
            raise UsageError(f"check #{i} has unknown keys {sorted(unknown)}")
        for key in ("structure", "axiom", "expect"):
            if key not in e:
                raise UsageError(f"check #{i} is missing {key!r}")
        if e["expect"] not in ("pass", "fail"):
            raise UsageError(f"check #{i}: expect must be 'pass' or 'fail'")
    return entries


def build_check(entry, max_instances=None):
    P = get_structure(entry["structure"], **entry.get("params", {}))
    kwargs = {k: entry[k] for k in ("max_size", "max_part", "max_instances", "samples", "seed", "max_blocks")
              if k in entry}
    if max_instances is not None:
        kwargs["max_instances"] = max_instances
    if "product" in entry:
        kwargs["product"] = get_product(entry["product"])
    if "morphism" in entry:
        dim = entry.get("dim", 1)
        kwargs["morphism"] = (get_morphism(entry["morphism"], dim), dim)
    return AxiomCheck(entry["axiom"], P, **kwargs)


def run_manifest(entries, jobs=1, max_instances=None):
    """Run every check; returns ``(entry, report, matched)`` triples."""
    out = []
    for entry in entries:
        report = run_check(build_check(entry, max_instances), jobs=jobs)
        out.append((entry, report, report.passed == (entry["expect"] == "pass")))
    return out


def _describe(value):
    if isinstance(value, LinComb):
        return format_lincomb(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}->{v}" for k, v in value.items()) + "}"
    return str(value)


def format_outcome(entry, report, matched):
    bounds = ", ".join(f"{k}={entry[k]}" for k in ("max_size", "max_part", "product", "morphism", "dim")
                       if k in entry)
    status = "pass" if report.passed else "fail"
    lines = [
        f"{'ok' if matched else 'MISMATCH':8} {report.structure} {report.axiom}"
        + (f" ({bounds})" if bounds else "")
        + f": {status}, expected {entry['expect']}; {report.instances} instances, "
        + f"{report.failure_count} failures" + (" [truncated]" if report.truncated else "")
    ]
    if report.failures:
        f = minimal_counterexample(report)
        inputs = ", ".join(f"{k}={_describe(v)}" for k, v in f.inputs.items())
        lines.append(f"         witness sizes {tuple(f.sizes)}: {inputs}")
        lines.append(f"         lhs - rhs = {_describe(f.difference)}")
    return "\n".join(lines)


def load_golden():
    raw = resources.files("nplop").joinpath("golden.json").read_text()
    return json.loads(raw)


def cmd_eval(args):
    doc = evaluate(args.structure, args.op, _read_input(args.input),
                   None if args.at is None else _label(args.at))
    print(render_text(doc) if args.format == "text" else dumps(doc))
    return 0


def cmd_check(args):
    entries = load_manifest(args.manifest)
    results = run_manifest(entries, jobs=args.jobs, max_instances=args.max_instances)
    mismatches = sum(not m for _, _, m in results)
    if args.format == "json":
        records = []
        for entry, report, matched in results:
            rec = report_to_json(report)
            rec.update(expect=entry["expect"], matched=matched)
            records.append(rec)
        print(dumps({"checks": records, "mismatches": mismatches}))
    else:
        for result in results:
            print(format_outcome(*result))
        print(f"{len(results)} checks, {mismatches} mismatches")
    return 1 if mismatches else 0


def cmd_golden(args):
    examples = load_golden()
    if args.name:
        examples = [e for e in examples if e["name"] == args.name]
        if not examples:
            raise UsageError(f"no golden example named {args.name!r}")
    for e in examples:
        doc = evaluate(e["structure"], e["op"], e["input"], e.get("at"))
        body = render_text(doc) if args.format == "text" else dumps(doc)
        print(f"{e['name']}: {body}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="nplop", description="Operads and nested pre-Lie operads on species.")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one operation on serialized inputs")
    ev.add_argument("--structure", required=True)
    ev.add_argument("--op", required=True, choices=OPS)
    ev.add_argument("--at", help="composition point (label)")
    ev.add_argument("--input", help="JSON file, inline JSON, or '-' for stdin (default)")
    ev.add_argument("--format", choices=("json", "text"), default="json")
    ev.set_defaults(func=cmd_eval)

    ck = sub.add_parser("check", help="run an axiom manifest")
    ck.add_argument("--manifest", help="manifest file (default: the bundled one)")
    ck.add_argument("--jobs", type=int, default=1)
    ck.add_argument("--max-instances", type=int)
    ck.add_argument("--format", choices=("json", "text"), default="text")
    ck.set_defaults(func=cmd_check)

    gd = sub.add_parser("golden", help="print the bundled golden examples")
    gd.add_argument("--name")
    gd.add_argument("--format", choices=("json", "text"), default="text")
    gd.set_defaults(func=cmd_golden)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError, KeyError, OSError) as exc:
        print(f"nplop: error: {exc}", file=sys.stderr)
        return 2
