"""Batch command line: ingest operator pools and ray families, run pipelines.

Subcommands
    contexts     build a context poset and export it (json / dot / table)
    dasein       outer and inner approximations of a projection or operator
    proposition  represent "quantity in delta" as a clopen sub-object
    truth        sieve-valued truth of a proposition in a given state
    arrow        quantity-arrow value tables
    ks           global-section search / obstruction report
    pl           propositional-language evaluation

Exit codes: 0 success, 1 domain error (JSON envelope on stderr), 2 usage
error.  Output is deterministic: maps are keyed by canonical context keys
and every emitter sorts its keys.
"""

import argparse
import json
import sys
from importlib import resources

import numpy as np

from .errors import InvalidInputError, ToposError
from .hermitian import BorelSet, matrix_from_json, matrix_to_json
from .contexts import build_poset, contexts_from_rays, generate_context, poset_to_dot
from .spectral import subset_from_projection
from .dasein import (
    daseinise_operator,
    daseinise_projection,
    represent_proposition,
)
from .logic import classify_truth, truth_object, truth_value
from .quantity import quantity_arrow
from .ks import find_global_sections
from . import pl as pl_mod


def _resolve(path):
    """Use the path as given, falling back to the bundled data directory."""
    import os

    if os.path.exists(path):
        return path
    bundled = resources.files("toposq").joinpath("data", path)
    if bundled.is_file():
        return str(bundled)
    raise InvalidInputError("input file not found", path=path)


def _load_json(path):
    with open(_resolve(path)) as fh:
        return json.load(fh)


def _load_matrix(path):
    return matrix_from_json(_load_json(path))


def _parse_delta(text):
    """Accept either [lo, hi] shorthand or a full interval-object list."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError("delta is not valid JSON: %s" % exc)
    if (isinstance(obj, list) and len(obj) == 2
            and all(isinstance(x, (int, float)) for x in obj)):
        return BorelSet.closed(obj[0], obj[1])
    return BorelSet.from_json(obj)


def _parse_state(text, dim):
    try:
        entries = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError("state is not valid JSON: %s" % exc)
    if not isinstance(entries, list) or len(entries) != dim:
        raise InvalidInputError("state must list one entry per dimension",
                                dim=dim)
    vec = np.zeros(dim, dtype=np.complex128)
    for i, item in enumerate(entries):
        if isinstance(item, (int, float)):
            vec[i] = float(item)
        elif isinstance(item, list) and len(item) == 2:
            vec[i] = float(item[0]) + 1j * float(item[1])
        else:
            raise InvalidInputError("state entry must be a number or [re, im]",
                                    index=i)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise InvalidInputError("state vector is zero")
    return vec / norm  # normalized here; the library itself is strict


def _build_poset(args):
    ctxs = []
    if args.rays:
        ctxs.extend(contexts_from_rays(_load_json(args.rays), eps=args.eps))
    for path in args.ops or ():
        obj = _load_json(path)
        # a list of matrices is a commuting pool generating one context
        pool = obj if isinstance(obj, list) else [obj]
        ctxs.append(generate_context([matrix_from_json(m) for m in pool],
                                     eps=args.eps))
    if not ctxs:
        raise InvalidInputError("no contexts: supply --rays and/or --ops")
    return build_poset(
        ctxs,
        close_under_intersection=not args.no_closure,
        include_trivial=args.include_trivial,
        eps=args.eps,
    )


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _table(rows, header):
    widths = [max(len(str(r[i])) for r in [header] + rows)
              for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_contexts(args):
    poset = _build_poset(args)
    if args.format == "dot":
        _emit(args, poset_to_dot(poset))
        return 0
    if args.format == "table":
        rows = [(k, poset[k].n_atoms,
                 " ".join(poset.strictly_below(k)) or "-")
                for k in poset.keys()]
        _emit(args, _table(rows, ("context", "atoms", "subcontexts")))
        return 0
    report = {
        "dim": poset.dim,
        "count": len(poset),
        "contexts": {
            k: {
                "n_atoms": poset[k].n_atoms,
                "atoms": [matrix_to_json(a) for a in poset[k].atoms],
            }
            for k in poset.keys()
        },
        "order": [[sub, sup] for sub, sup in poset.pairs()],
    }
    _emit_json(args, report)
    return 0


def cmd_dasein(args):
    from .hermitian import eigendecompose

    poset = _build_poset(args)
    per_context = {}
    summaries = {}
    if args.proj:
        p = _load_matrix(args.proj)
        for key in poset.keys():
            ctx = poset[key]
            outer = daseinise_projection(p, ctx, "outer", args.eps)
            inner = daseinise_projection(p, ctx, "inner", args.eps)
            out_set = sorted(subset_from_projection(outer, ctx, args.eps))
            in_set = sorted(subset_from_projection(inner, ctx, args.eps))
            per_context[key] = {
                "outer": matrix_to_json(outer),
                "inner": matrix_to_json(inner),
                "outer_subset": out_set,
                "inner_subset": in_set,
            }
            summaries[key] = ("{%s}" % ",".join(map(str, out_set)),
                              "{%s}" % ",".join(map(str, in_set)))
        subject = {"projection": matrix_to_json(p)}
    else:
        a = _load_matrix(args.op)
        for key in poset.keys():
            ctx = poset[key]
            outer = daseinise_operator(a, ctx, "outer", args.eps)
            inner = daseinise_operator(a, ctx, "inner", args.eps)
            per_context[key] = {
                "outer": matrix_to_json(outer),
                "inner": matrix_to_json(inner),
            }
            summaries[key] = tuple(
                " ".join("%.6g" % v for v in
                         eigendecompose(m, args.eps).eigenvalues)
                for m in (outer, inner))
        subject = {"operator": matrix_to_json(a)}
    if args.format == "table":
        rows = [(k, poset[k].n_atoms) + summaries[k] for k in poset.keys()]
        _emit(args, _table(rows, ("context", "atoms", "outer", "inner")))
        return 0
    report = dict(subject)
    report["contexts"] = per_context
    _emit_json(args, report)
    return 0


def cmd_proposition(args):
    poset = _build_poset(args)
    a = _load_matrix(args.op)
    delta = _parse_delta(args.delta)
    sub = represent_proposition(a, delta, poset, args.eps)
    if args.format == "dot":
        _emit(args, poset_to_dot(poset, selected=sub.parts))
        return 0
    if args.format == "table":
        rows = [(k, poset[k].n_atoms,
                 "{%s}" % ",".join(str(i) for i in sorted(sub.parts[k])))
                for k in poset.keys()]
        _emit(args, _table(rows, ("context", "atoms", "selected")))
        return 0
    _emit_json(args, {
        "operator": matrix_to_json(a),
        "delta": delta.to_json(),
        "subobject": sub.to_json(),
    })
    return 0


def cmd_truth(args):
    poset = _build_poset(args)
    a = _load_matrix(args.op)
    delta = _parse_delta(args.delta)
    psi = _parse_state(args.state, poset.dim)
    sub = represent_proposition(a, delta, poset, args.eps)
    report = classify_truth(truth_value(sub, truth_object(psi, poset, args.eps)))
    if args.format == "table":
        rows = [(k, " ".join(sorted(report.sieves[k])) or "-",
                 "maximal" if set(report.sieves[k]) == set(poset.down_set(k))
                 else ("empty" if not report.sieves[k] else "partial"))
                for k in poset.keys()]
        text = _table(rows, ("context", "sieve", "status"))
        _emit(args, text + "classification: %s\n" % report.classification)
        return 0
    _emit_json(args, report.to_json())
    return 0


def cmd_arrow(args):
    poset = _build_poset(args)
    a = _load_matrix(args.op)
    arrow = quantity_arrow(a, poset, args.mode, args.eps)
    if args.format == "table":
        rows = []
        for key in poset.keys():
            for i, f in enumerate(arrow[key]):
                funcs = {"paired": lambda f=f: f.nu.values}.get(
                    args.mode, lambda f=f: f.values)()
                for at, value in sorted(funcs.items()):
                    rows.append((key, i, at, "%.9g" % value))
        _emit(args, _table(rows, ("context", "atom", "at", "value")))
        return 0
    _emit_json(args, arrow.to_json())
    return 0


def cmd_ks(args):
    poset = _build_poset(args)
    result = find_global_sections(poset, limit=args.limit)
    if args.format == "table":
        rows = [(i, " ".join("%s=%d" % (k, sec[k]) for k in sorted(sec)))
                for i, sec in enumerate(result.sections)]
        text = _table(rows, ("#", "section")) if rows else ""
        text += ("sections: %d  exhausted: %s  closed: %s\n"
                 % (len(result.sections), result.exhausted, result.closed))
        _emit(args, text)
        return 0
    _emit_json(args, result.to_json())
    return 0


def cmd_pl(args):
    sentence = pl_mod.parse(args.sentence)
    if args.heyting:
        poset = build_poset(
            contexts_from_rays(_load_json(args.heyting), eps=args.eps),
            close_under_intersection=not args.no_closure,
            include_trivial=args.include_trivial,
            eps=args.eps,
        )
        spec = _load_json(args.valuation) if args.valuation else None
        if not spec or "base" not in spec or "sieves" not in spec:
            raise InvalidInputError(
                'heyting valuation file needs {"base": key, "sieves": {...}}')
        from .logic import Sieve

        base = spec["base"]
        valuation = {}
        for name, members in spec["sieves"].items():
            idx = int(name.lstrip("p"))
            valuation[idx] = Sieve(poset, base, members)
        sieve = pl_mod.eval_heyting(sentence, valuation, poset)
        _emit_json(args, {
            "sentence": pl_mod.pretty(sentence),
            "mode": "heyting",
            "base": base,
            "sieve": sorted(sieve.members),
            "is_top": sieve.is_maximal(),
        })
        return 0
    if args.valuation:
        raw = _load_json(args.valuation)
        valuation = {}
        for name, bit in raw.items():
            idx = int(str(name).lstrip("p"))
            valuation[idx] = 1 if bit else 0
        value = pl_mod.eval_classical(sentence, valuation)
        _emit_json(args, {
            "sentence": pl_mod.pretty(sentence),
            "mode": "classical",
            "value": value,
        })
        return 0
    _emit_json(args, {
        "sentence": pl_mod.pretty(sentence),
        "mode": "classical",
        "tautology": pl_mod.is_tautology(sentence),
    })
    return 0


# ---------------------------------------------------------------------------
# Argument wiring.


def _add_common(sub, rays_required=False, with_limit=False):
    sub.add_argument("--rays", required=rays_required,
                     help="ray-family JSON (bundled names like cabello18.json work)")
    sub.add_argument("--ops", action="append",
                     help="operator matrix JSON, one context per file; a "
                          "JSON list of matrices is a commuting pool")
    sub.add_argument("--eps", type=float, default=1e-9)
    sub.add_argument("--include-trivial", action="store_true")
    sub.add_argument("--no-closure", action="store_true")
    sub.add_argument("--format", choices=("json", "dot", "table"),
                     default="json")
    sub.add_argument("--out", help="write output here instead of stdout")
    if with_limit:
        sub.add_argument("--limit", type=int, default=16)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toposq",
        description="Topos-theoretic pipelines for finite quantum systems.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("contexts", help="build and export a context poset")
    _add_common(p)
    p.set_defaults(func=cmd_contexts)

    p = commands.add_parser("dasein", help="approximate a projection/operator")
    _add_common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--proj", help="projection matrix JSON")
    group.add_argument("--op", help="Hermitian matrix JSON")
    p.set_defaults(func=cmd_dasein)

    p = commands.add_parser("proposition",
                            help="represent 'quantity in delta' as a sub-object")
    _add_common(p)
    p.add_argument("--op", required=True)
    p.add_argument("--delta", required=True,
                   help='Borel set: "[lo, hi]" or interval-object list')
    p.set_defaults(func=cmd_proposition)

    p = commands.add_parser("truth", help="truth value of a proposition in a state")
    _add_common(p)
    p.add_argument("--op", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--state", required=True,
                   help="state vector JSON; normalized before use")
    p.set_defaults(func=cmd_truth)

    p = commands.add_parser("arrow", help="quantity-arrow value tables")
    _add_common(p)
    p.add_argument("--op", required=True)
    p.add_argument("--mode", choices=("outer", "inner", "paired"),
                   default="outer")
    p.set_defaults(func=cmd_arrow)

    p = commands.add_parser("ks", help="search for global sections")
    _add_common(p, with_limit=True)
    p.set_defaults(func=cmd_ks)

    p = commands.add_parser("pl", help="evaluate a PL sentence")
    _add_common(p)
    p.add_argument("--sentence", required=True)
    p.add_argument("--valuation", help="valuation JSON file")
    p.add_argument("--heyting",
                   help="ray-family JSON; evaluate over its poset")
    p.set_defaults(func=cmd_pl)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.eps <= 0:
        parser.error("--eps must be positive")
    try:
        return args.func(args)
    except ToposError as exc:
        sys.stderr.write(json.dumps({"error": exc.payload()},
                                    sort_keys=True, indent=2) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
