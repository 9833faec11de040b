"""Command line front end.

    semiarith sweep --field "x^3+x^2-2*x-1" --units units.json --interval 0.5,10 --budget 12
    semiarith congruence report --gens sl2z.json --prime 7
    semiarith congruence growth --gens sl2z.json --primes 5,7,11,13
    semiarith quat experiment --field x --a 2 --b 3 --ideal 2 --bound 25
    semiarith quat slopes --field x --a 2 --b 3 --ideals 2,3,5 --bound 25
    semiarith group genus-two | ladder --n 6 | action --m 6
    semiarith certify --field "x^3+x^2-2*x-1" --unit 0,1,0 --budget 4

Errors are printed to stderr as JSON; exit code 2 for bad input, 3 for a
failed computation.  ``--config file.json`` supplies defaults for any flag.
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import sympy
from sympy.parsing.sympy_parser import (
    implicit_multiplication_application,
    parse_expr,
    standard_transformations,
)

from . import __version__
from .errors import EmptySample, SemiArithError, ValidationError

SWEEP_COLUMNS = ["unit_coords", "t", "length", "genus", "field_degree", "certificate_status",
                 "version", "precision", "budget"]


# parsing helpers

def parse_field(text):
    """Minimal polynomial from 'x^3+x^2-2*x-1' or low-first coefficients '-1,-2,1,1'."""
    from .numfield import make_field
    if isinstance(text, (list, tuple)):
        return make_field([int(c) for c in text])
    text = str(text).strip()
    if "x" in text:
        x = sympy.Symbol("x")
        try:
            expr = parse_expr(text.replace("^", "**"), {"x": x},
                              transformations=standard_transformations
                              + (implicit_multiplication_application,))
            poly = sympy.Poly(expr, x)
        except (sympy.SympifyError, sympy.PolynomialError, SyntaxError, TypeError) as e:
            raise ValidationError("cannot parse polynomial %r: %s" % (text, e))
        coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    else:
        coeffs = [int(c) for c in text.split(",")]
    return make_field(coeffs)


def parse_scalar(K, value):
    """Field element from an int, 'p/q', or a coordinate list."""
    if isinstance(value, (list, tuple)):
        return K([Fraction(str(c)) for c in value])
    text = str(value)
    if "," in text:
        return K([Fraction(c) for c in text.split(",")])
    return K(Fraction(text))


def parse_interval(text):
    parts = text.split(",") if isinstance(text, str) else list(text)
    if len(parts) != 2:
        raise ValidationError("interval must be 'a,b'")
    return Fraction(str(parts[0]).strip()), Fraction(str(parts[1]).strip())


def parse_int_list(text):
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x.strip()]


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ValidationError("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise ValidationError("%s is not valid JSON: %s" % (path, e))


def load_units(path, K):
    data = load_json(path)
    if isinstance(data, dict):
        data = data.get("units", [])
    return [parse_scalar(K, u) for u in data]


def load_generators(path):
    """{"field": ..., "matrices": [[[a, b], [c, d]], ...]}; entries are ints,
    'p/q' strings or coordinate lists."""
    from .numfield import QQ_FIELD
    data = load_json(path)
    K = parse_field(data["field"]) if "field" in data else QQ_FIELD
    mats = []
    for m in data["matrices"]:
        (a, b), (c, d) = m
        if K.degree == 1:
            mats.append(tuple(Fraction(str(x)) if not isinstance(x, list) else Fraction(str(x[0]))
                              for x in (a, b, c, d)))
        else:
            mats.append(tuple(parse_scalar(K, x) for x in (a, b, c, d)))
    return K, mats


def _check_precision(bits):
    if bits < 53 or bits & (bits - 1):
        raise ValidationError("precision must be a power of two >= 64")
    return bits


def _check_budget(n, name="budget"):
    if n < 1:
        raise ValidationError("%s must be >= 1" % name)
    return n


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv(rows, columns):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


# commands

def cmd_sweep(args):
    import mpmath
    from .grouptheory import DISTINGUISHED, surface_cover
    from .surfaces import density_sweep, realized_length_status

    K = parse_field(args.field)
    units = load_units(args.units, K)
    if not units:
        raise EmptySample("the unit list is empty")
    budget = _check_budget(args.budget)
    prec = _check_precision(args.precision)
    genus = args.genus
    cover = surface_cover(genus)
    if not cover.contains(cover.genus_two.to_parent(DISTINGUISHED)):
        raise ArithmeticError("distinguished element missing from the genus-%d cover" % genus)
    tol = mpmath.mpf(2) ** -prec
    res = density_sweep(K, units, parse_interval(args.interval), budget, genus=genus,
                        realize=False, tol=tol)
    rows = []
    for rec in res.records:
        if args.realize:
            rec.certificate_status = realized_length_status(rec.unit, rec.length)
        row = rec.csv_row()
        row.update(version=__version__, precision=prec, budget=budget)
        rows.append(row)
    gap = mpmath.nstr(res.max_gap, 20, strip_zeros=False)
    if args.format == "json":
        _write(_json({"records": rows, "max_gap": gap, "count": len(rows),
                      "interval": [str(x) for x in res.interval]}), args.output)
    else:
        summary = {c: "" for c in SWEEP_COLUMNS}
        summary.update(unit_coords="MAX_GAP", length=gap, genus=genus,
                       field_degree=K.degree, certificate_status="summary",
                       version=__version__, precision=prec, budget=budget)
        _write(_csv(rows + [summary], SWEEP_COLUMNS), args.output)
    return 0


def cmd_congruence_report(args):
    from .congruence import congruence_index
    from .numfield import prime_ideal_above
    K, gens = load_generators(args.gens)
    primes = prime_ideal_above(K, args.prime)
    if args.power is not None:
        primes = [P for P in primes if P.residue_degree == args.power]
    if not primes:
        raise ValidationError("no prime above %d with residue degree %s" % (args.prime, args.power))
    rep = congruence_index(gens, primes[0], base_area=Fraction(args.base_area),
                           word_budget=args.budget, cap=args.cap)
    out = rep.to_json()
    out.update(version=__version__, budget=args.budget)
    _write(_json(out), args.output)
    return 0


def cmd_congruence_growth(args):
    from .congruence import GROWTH_COLUMNS, fit_slope, growth_table
    K, gens = load_generators(args.gens)
    budget = _check_budget(args.budget)
    rows = growth_table(gens, parse_int_list(args.primes), budget, Fraction(args.base_area),
                        d=K.degree, K=K, cap=args.cap)
    slope = fit_slope(rows)
    table = []
    for r in rows:
        row = r.csv_row()
        row.update(version=__version__, budget=budget)
        table.append(row)
    cols = GROWTH_COLUMNS + ["version", "budget"]
    fit = "" if slope is None else "%.12g" % slope
    if args.format == "json":
        _write(_json({"rows": table, "fit_slope": fit}), args.output)
    else:
        summary = {c: "" for c in cols}
        summary.update(p="FIT_SLOPE", index=fit, status="summary", version=__version__,
                       budget=budget)
        _write(_csv(table + [summary], cols), args.output)
    return 0


def _algebra(args):
    from .quaternion import make_algebra
    K = parse_field(args.field)
    return make_algebra(K, parse_scalar(K, args.a), parse_scalar(K, args.b))


QUAT_COLUMNS = ["ideal", "N_I", "samples", "hyperbolic", "elliptic", "min_length", "bound",
                "violations", "gate_norm", "gate_torsion", "version", "bound_coeff"]


def cmd_quat_experiment(args):
    from .quaternion import systole_experiment
    A = _algebra(args)
    bound = _check_budget(args.bound, "bound")
    rep = systole_experiment(A, parse_scalar(A.base, args.ideal), bound)
    out = rep.to_json()
    if args.format == "csv":
        row = {"ideal": str(rep.ideal), "N_I": rep.N_I, "samples": rep.samples,
               "hyperbolic": rep.hyperbolic, "elliptic": rep.elliptic,
               "min_length": out["min_length"] or "", "bound": out["bound"],
               "violations": len(rep.violations),
               "gate_norm": int(rep.gate["norm"]["passed"]),
               "gate_torsion": int(rep.gate["torsion"]["passed"]),
               "version": __version__, "bound_coeff": bound}
        _write(_csv([row], QUAT_COLUMNS), args.output)
    else:
        out.update(version=__version__, bound_coeff=bound)
        _write(_json(out), args.output)
    return 1 if rep.violations and args.strict else 0


def cmd_quat_slopes(args):
    from .quaternion import slope_table
    A = _algebra(args)
    bound = _check_budget(args.bound, "bound")
    ideals = [parse_scalar(A.base, x) for x in str(args.ideals).split(";")] \
        if ";" in str(args.ideals) else [parse_scalar(A.base, x) for x in parse_int_list(args.ideals)]
    rows = slope_table(A, ideals, bound)
    cols = ["ideal", "N_I", "samples", "min_length", "bound", "violations", "gated", "status",
            "slope_norm", "slope_area", "target_surface", "version", "bound_coeff"]
    for r in rows:
        r.update(version=__version__, bound_coeff=bound)
        for k in ("slope_norm", "slope_area", "target_surface"):
            r[k] = "%.12g" % r[k]
    _write(_csv(rows, cols) if args.format == "csv" else _json(rows), args.output)
    return 0


def cmd_group(args):
    from .grouptheory import (
        DISTINGUISHED, ETA_ASSIGNMENT, abelianization_rank, build_perm_action,
        genus_two_kernel, is_power_of, isotropy_test, kernel_of_cyclic, reduced_words,
        word_to_str,
    )
    if args.verb == "genus-two":
        K = genus_two_kernel()
        P = K.tietze.presentation
        out = {"presentation": str(P), "rank": abelianization_rank(P),
               "c1c2": word_to_str(DISTINGUISHED, P.generators), "standard": K.tietze.standard,
               "index": K.index}
    elif args.verb == "ladder":
        P = genus_two_kernel().tietze.presentation
        out = []
        for n in range(2, args.n + 1):
            sub = kernel_of_cyclic(P, ETA_ASSIGNMENT, n)
            out.append({"n": n, "genus": n + 1, "index": sub.index,
                        "rank": abelianization_rank(sub.presentation),
                        "contains_xy2": sub.contains(DISTINGUISHED)})
    else:
        out = []
        for m in range(1, args.m + 1):
            act = build_perm_action(m)
            words = reduced_words(2, m)
            bad = [w for w in words if isotropy_test(act, w) and not is_power_of(w, 1)]
            out.append({"m": m, "points": act.size, "words": len(words),
                        "counterexamples": [word_to_str(w, ["x", "y"]) for w in bad]})
    _write(_json(out), args.output)
    return 0


def cmd_certify(args):
    from .hypgeom import build_hexagon_group
    from .surfaces import certify_semi_arithmetic, invariant_trace_field
    K = parse_field(args.field)
    u = parse_scalar(K, args.unit)
    group = build_hexagon_group(u)
    cert = certify_semi_arithmetic(group, _check_budget(args.budget))
    out = cert.to_json()
    if args.trace_field:
        F = invariant_trace_field(group, args.budget)
        out["invariant_trace_field"] = {"minpoly": [int(c) for c in F.minpoly],
                                        "degree": F.degree}
    out.update(version=__version__, budget=args.budget)
    _write(_json(out), args.output)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="semiarith", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="JSON file with default values for the flags")
    sub = p.add_subparsers(dest="command", required=True)

    def common(q, fmt="csv"):
        q.add_argument("--output", "-o", default="-")
        q.add_argument("--format", choices=["csv", "json"], default=fmt)

    s = sub.add_parser("sweep", help="lengths 2 arccosh(1 + 2u^2) over a unit sweep")
    s.add_argument("--field", required=True)
    s.add_argument("--units", required=True, help="JSON list of unit coordinates")
    s.add_argument("--interval", default="0.5,10")
    s.add_argument("--budget", type=int, default=12)
    s.add_argument("--genus", type=int, default=2)
    s.add_argument("--precision", type=int, default=128)
    s.add_argument("--realize", action="store_true",
                   help="evaluate C1 C2 in each hexagon group and compare lengths")
    common(s)
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("congruence", help="reduction modulo primes")
    csub = c.add_subparsers(dest="verb", required=True)
    r = csub.add_parser("report")
    r.add_argument("--gens", required=True)
    r.add_argument("--prime", type=int, required=True)
    r.add_argument("--power", type=int, default=None, help="residue degree of the prime")
    r.add_argument("--budget", type=int, default=8)
    r.add_argument("--base-area", default="1/3", help="area of the base orbifold over pi")
    r.add_argument("--cap", type=int, default=64)
    r.add_argument("--output", "-o", default="-")
    r.set_defaults(func=cmd_congruence_report)
    g = csub.add_parser("growth")
    g.add_argument("--gens", required=True)
    g.add_argument("--primes", default="5,7,11,13")
    g.add_argument("--budget", type=int, default=6)
    g.add_argument("--base-area", default="1/3")
    g.add_argument("--cap", type=int, default=64)
    common(g)
    g.set_defaults(func=cmd_congruence_growth)

    q = sub.add_parser("quat", help="quaternion algebra experiments")
    qsub = q.add_subparsers(dest="verb", required=True)
    for name, func in (("experiment", cmd_quat_experiment), ("slopes", cmd_quat_slopes)):
        e = qsub.add_parser(name)
        e.add_argument("--field", default="x")
        e.add_argument("--a", required=True)
        e.add_argument("--b", required=True)
        e.add_argument("--bound", type=int, default=25)
        if name == "experiment":
            e.add_argument("--ideal", required=True)
            e.add_argument("--strict", action="store_true",
                           help="exit 1 when a violation is found")
            common(e, "json")
        else:
            e.add_argument("--ideals", default="2,3,5",
                           help="comma separated integers, or ';' separated coordinate lists")
            common(e)
        e.set_defaults(func=func)

    gr = sub.add_parser("group", help="presentations, covers and the stabilizer check")
    gr.add_argument("verb", choices=["genus-two", "ladder", "action"])
    gr.add_argument("--n", type=int, default=6)
    gr.add_argument("--m", type=int, default=6)
    gr.add_argument("--output", "-o", default="-")
    gr.set_defaults(func=cmd_group)

    ce = sub.add_parser("certify", help="semi-arithmetic certificate of a hexagon group")
    ce.add_argument("--field", required=True)
    ce.add_argument("--unit", required=True, help="coordinates of the unit u")
    ce.add_argument("--budget", type=int, default=4)
    ce.add_argument("--trace-field", action="store_true")
    ce.add_argument("--output", "-o", default="-")
    ce.set_defaults(func=cmd_certify)
    return p


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    args = parser.parse_args(argv)
    if known.config:
        cfg = load_json(known.config)
        explicit = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv
                    if a.startswith("--")}
        for k, v in cfg.items():
            k = k.replace("-", "_")
            if k not in explicit and hasattr(args, k):
                setattr(args, k, v)
    return args


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except SemiArithError as e:
        sys.stderr.write(json.dumps(e.to_json()) + "\n")
        return e.exit_code
    except (ValueError, KeyError, TypeError) as e:
        sys.stderr.write(json.dumps({"error": "ValidationError", "message": str(e)}) + "\n")
        return 2
    except ArithmeticError as e:
        sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
