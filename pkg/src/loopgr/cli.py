"""Command-line front end: every operation on JSON input, for scripting.

Input is a JSON document from a path or stdin ("-"); output is JSON (default)
or an aligned text table.  Error classes map to fixed exit codes: schema 2,
precision 3, singular 4, domain 5.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import cartan, factorization, jsonio, p1bundles
from .errors import Error, SchemaError
from .rings import ArtinianRing
from .series import DEFAULT_PRECISION, LaurentSeries

MAX_PRECISION = 4096


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise SchemaError(f"cannot read input: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not valid JSON: {exc}") from exc


def _ring_of(doc):
    if not isinstance(doc, dict):
        raise SchemaError("top-level input must be a JSON object")
    return jsonio.ring_from_json(doc.get("ring"))


def _table(rows) -> str:
    rows = [[str(c) for c in r] for r in rows]
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows
    )


def _fmt_tuple(values) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


# -- command handlers: each returns (json_doc, text) -------------------------


def _cmd_stratum(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("loop",), ("ring",))
    loop = jsonio.loop_from_json(ring, fields["loop"])
    lam = cartan.stratum(loop, precision)
    return jsonio.cocharacter_to_json(lam), f"stratum  {_fmt_tuple(lam.entries)}"


def _cmd_coarse(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("loop",), ("ring",))
    loop = jsonio.loop_from_json(ring, fields["loop"])
    cs = cartan.coarse_stratum(loop, precision)
    text = "coarse stratum  " + "  ".join(_fmt_tuple(c.entries) for c in cs.orbit)
    return jsonio.coarse_to_json(cs), text


def _cmd_snf(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("loop",), ("ring",))
    loop = jsonio.loop_from_json(ring, fields["loop"])
    fact = cartan.smith_normal_form(loop, precision)
    out = {
        "u": jsonio.loop_to_json(fact.left),
        "lambda": list(fact.cocharacter.entries),
        "v": jsonio.loop_to_json(fact.right),
    }
    return out, f"cocharacter  {_fmt_tuple(fact.cocharacter.entries)}"


def _cmd_splitting(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("datum",), ("ring",))
    datum = jsonio.datum_from_json(ring, fields["datum"])
    st = p1bundles.splitting_type(datum, precision)
    rows = [["splitting type", _fmt_tuple(st.a), f"degree {st.degree()}"]]
    strata = p1bundles.strata_of(datum, precision)
    labels = [ring.scalar_str(p.r) for p in datum.points]
    if datum.infinity_loop is not None:
        labels.append("infinity")
    if labels:
        rows.append(["point", "stratum", ""])
        for label, lam in zip(labels, strata):
            rows.append([label, _fmt_tuple(lam.entries), ""])
    return jsonio.splitting_to_json(st), _table(rows)


def _cmd_h0(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("datum", "m"), ("ring",))
    datum = jsonio.datum_from_json(ring, fields["datum"])
    m = fields["m"]
    if not isinstance(m, int):
        raise SchemaError("h0: twist m must be an int")
    value = p1bundles.h0(datum, m, precision)
    return {"h0": value}, f"h0(twist {m})  {value}"


def _cmd_glue(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("datum",), ("ring",))
    datum = jsonio.datum_from_json(ring, fields["datum"])
    loops = list(datum.loops) + (
        [datum.infinity_loop] if datum.infinity_loop is not None else []
    )
    bounds = [lp.pole_bound(precision) for lp in loops]
    det_vals = [lp.det().valuation for lp in loops]
    out = {
        "datum": jsonio.datum_to_json(datum),
        "pole_bounds": bounds,
        "det_valuations": det_vals,
        "degree": -sum(det_vals),
    }
    text = _table(
        [["loops", str(len(loops))], ["pole bounds", str(bounds)], ["degree", str(-sum(det_vals))]]
    )
    return out, text


def _cmd_modify(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("datum", "point", "loop"), ("ring",))
    datum = jsonio.datum_from_json(ring, fields["datum"])
    point = jsonio.scalar_from_json(ring, fields["point"])
    loop = jsonio.loop_from_json(ring, fields["loop"])
    out = p1bundles.modify(datum, point, loop)
    return {"datum": jsonio.datum_to_json(out)}, f"datum now has {len(out.points)} points"


def _cmd_factor(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("loop",), ("ring",))
    loop = jsonio.loop_from_json(ring, fields["loop"])
    fact = factorization.factor_elementary(loop, precision)
    reconstructs = fact.product().agrees_with(loop)
    out = jsonio.factorization_to_json(fact)
    out["reconstructs"] = reconstructs
    text = _table(
        [["factors", str(len(fact))], ["reconstructs", str(reconstructs).lower()]]
    )
    return out, text


def _cmd_lift(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("factorization", "modulus_power"), ("ring",))
    fact = jsonio.factorization_from_json(ring, fields["factorization"])
    m = fields["modulus_power"]
    if not isinstance(m, int) or m < 1:
        raise SchemaError("lift: modulus_power must be a positive int")
    target = ArtinianRing(ring, m)
    lifted = factorization.lift_factorization(fact, target)
    out = {
        "ring": jsonio.ring_to_json(target),
        "factorization": jsonio.factorization_to_json(lifted),
    }
    return out, f"lifted {len(lifted)} factors over {target.name}"


def _cmd_extend(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("datum", "modulus_power"), ("ring", "perturb"))
    datum = jsonio.datum_from_json(ring, fields["datum"])
    m = fields["modulus_power"]
    if not isinstance(m, int) or m < 1:
        raise SchemaError("extend: modulus_power must be a positive int")
    target = ArtinianRing(ring, m)
    perturbations = None
    if fields.get("perturb"):
        perturbations = _random_perturbations(datum, target, seed, precision)
    out_datum = factorization.extend_point(datum, target, perturbations, precision)
    reduced = factorization.reduce_datum(out_datum)
    ok = all(a.agrees_with(b) for a, b in zip(reduced.loops, datum.loops))
    out = {
        "ring": jsonio.ring_to_json(target),
        "datum": jsonio.datum_to_json(out_datum),
        "reduces_to_input": ok,
    }
    return out, f"extended over {target.name}; reduces to input: {str(ok).lower()}"


def _random_perturbations(datum, target, seed, precision):
    """Seeded random maximal-ideal perturbations, one per lifted factor."""
    rng = random.Random(f"extend:{seed}")
    x = target.gen()
    out = {}
    for i, lp in enumerate(datum.loops):
        fact = factorization.factor_elementary(lp, precision)
        per = {}
        for j in range(len(fact.factors)):
            if rng.random() < 0.5:
                continue
            coeff = target.mul(x, target.from_base(datum.ring.random(rng)))
            per[j] = LaurentSeries.from_terms(target, [(rng.randint(-2, 2), coeff)])
        if per:
            out[i] = per
    return out


def _cmd_expand(doc, precision, seed):
    ring = _ring_of(doc)
    fields = jsonio._take(doc, "input", ("function", "center"), ("ring", "precision"))
    f = jsonio.function_from_json(ring, fields["function"])
    center = jsonio.scalar_from_json(ring, fields["center"])
    local = fields.get("precision", precision)
    if local is not None and not isinstance(local, int):
        raise SchemaError("expand: precision must be an int")
    s = f.expand_at(center, local)
    return {"series": jsonio.series_to_json(s)}, f"expansion  {s!r}"


_COMMANDS = {
    "stratum": _cmd_stratum,
    "coarse-stratum": _cmd_coarse,
    "snf": _cmd_snf,
    "splitting-type": _cmd_splitting,
    "h0": _cmd_h0,
    "glue": _cmd_glue,
    "modify": _cmd_modify,
    "factor": _cmd_factor,
    "lift": _cmd_lift,
    "extend": _cmd_extend,
    "expand": _cmd_expand,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loopgr",
        description="Exact computations with matrix loops and bundles on the line",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS) + ["batch"])
    parser.add_argument("input", nargs="?", default="-", help="input path or - for stdin")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--precision", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--batch", dest="batch_file", default=None, help="file of JSON-lines commands"
    )
    return parser


def _run_one(command: str, doc, precision, seed):
    if command not in _COMMANDS:
        raise SchemaError(f"unknown command {command!r}")
    return _COMMANDS[command](doc, precision, seed)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    precision = args.precision
    if precision is not None and not 1 <= precision <= MAX_PRECISION:
        print(f"error: --precision must be in [1, {MAX_PRECISION}]", file=sys.stderr)
        return 2
    try:
        if args.command == "batch" or args.batch_file:
            return _run_batch(args)
        doc = _load(args.input)
        out, text = _run_one(args.command, doc, precision, args.seed)
    except Error as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.format == "json":
        print(json.dumps(out, sort_keys=True))
    else:
        print(text)
    return 0


def _run_batch(args) -> int:
    path = args.batch_file or args.input
    try:
        lines = sys.stdin.read().splitlines() if path == "-" else open(path).read().splitlines()
    except OSError as exc:
        print(f"error[SchemaError]: cannot read batch file: {exc}", file=sys.stderr)
        return 2
    status = 0
    for index, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            entry = json.loads(line)
            fields = jsonio._take(entry, "batch entry", ("command", "input"), ("precision",))
            out, _ = _run_one(
                fields["command"], fields["input"], fields.get("precision", args.precision), args.seed
            )
            print(json.dumps({"index": index, "ok": True, "output": out}, sort_keys=True))
        except json.JSONDecodeError as exc:
            print(json.dumps({"index": index, "ok": False, "error": "SchemaError", "message": str(exc)}))
            status = status or 2
        except Error as exc:
            print(
                json.dumps(
                    {
                        "index": index,
                        "ok": False,
                        "error": type(exc).__name__,
                        "message": str(exc),
                    },
                    sort_keys=True,
                )
            )
            status = status or exc.exit_code
    return status


if __name__ == "__main__":
    sys.exit(main())
