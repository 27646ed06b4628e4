"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (a non-birational input where
a birational one is required, a point off a family's base), 2 on parse
errors. ``--json`` emits one JSON document with sorted keys; exact
rationals are written as ``"num/den"`` strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import census as census_mod
from . import families as fam
from .fields import Field
from .grammar import ParseError, format_point, parse_family, parse_point, parse_tuple
from .maps import NotBirationalError, apply_to_point, certify_birational, compose, inverse
from .polyring import jacobian_det
from .wspace import distance_sq, fiber_distance_sq, normalize

PRESETS = ("example31", "nodal-cubic", "nodal-cubic-phi")


class DomainError(Exception):
    pass


def _ratio(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _field(args) -> Field:
    try:
        return Field.parse(args.field)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _dimension(args, text: str | None = None) -> int:
    n = args.n
    if n is None and text is not None:
        from .grammar import _bracket_body, _split_top
        body, _ = _bracket_body(text, "tuple")
        n = len(_split_top(body, ":", "tuple")) - 1
    if n is None or not 1 <= n <= 9:
        raise ParseError(f"dimension n must be in 1..9, got {n}")
    return n


def _tuple(args, text: str):
    F = _field(args)
    n = _dimension(args, text)
    return parse_tuple(text, F, n)


def _certified(t):
    f = certify_birational(t)
    if f is None:
        raise NotBirationalError(f"not birational: {t}")
    return f


# ---------------------------------------------------------------------------


def cmd_degree(args):
    t = _tuple(args, args.tuple)
    r = normalize(t)
    return {"formal_degree": t.d, "degree": r.degree, "reduced": str(r.reduced)}


def cmd_normalize(args):
    t = _tuple(args, args.tuple)
    r = normalize(t)
    return {"formal_degree": t.d, "degree": r.degree, "reduced": str(r.reduced),
            "cofactor": str(r.cofactor)}


def cmd_jacobian(args):
    t = _tuple(args, args.tuple)
    return {"jacobian": str(jacobian_det(t.components))}


def _map_doc(f):
    return {"forward": str(f.forward), "degree": f.degree, "inverse": str(f.inverse),
            "inverse_degree": f.inverse_degree, "cofactor": str(f.cofactor),
            "reverse_cofactor": str(f.reverse_cofactor)}


def cmd_check(args):
    t = _tuple(args, args.tuple)
    f = certify_birational(t)
    if f is None:
        return {"birational": False, "degree": normalize(t).degree}
    return {"birational": True, **_map_doc(f)}


def cmd_inverse(args):
    f = _certified(_tuple(args, args.tuple))
    return _map_doc(inverse(f))


def cmd_compose(args):
    f = _certified(_tuple(args, args.first))
    g = _certified(_tuple(args, args.second))
    h = compose(f, g)
    return {"formal_degree": f.degree * g.degree, **_map_doc(h)}


def cmd_apply(args):
    t = _tuple(args, args.tuple)
    pt = parse_point(args.point, t.field, t.n + 1)
    if not any(pt):
        raise ParseError(f"point {args.point!r} is the zero vector")
    img = apply_to_point(t, pt)
    return {"point": format_point(pt, t.field), "defined": img is not None,
            "image": format_point(img, t.field) if img is not None else None}


def _rational_only(t):
    if not t.field.is_rational:
        raise DomainError(f"distances need the rational field, got {t.field}")


def cmd_dist(args):
    p, q = _tuple(args, args.first), _tuple(args, args.second)
    _rational_only(p)
    try:
        v = distance_sq(p, q)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    return {"distance_sq": _ratio(v)}


def cmd_fiber_dist(args):
    t, g = _tuple(args, args.tuple), _tuple(args, args.target)
    _rational_only(t)
    try:
        v = fiber_distance_sq(t, g)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    return {"fiber_distance_sq": _ratio(v)}


def _family(args):
    F = _field(args)
    if args.preset:
        n = args.n or 2
        if args.preset == "example31":
            return fam.example31_family(n, F)
        nodal = fam.nodal_cubic_family(n, F)
        if args.preset == "nodal-cubic":
            return nodal
        return fam.pullback(nodal, fam.phi_parametrization(F))
    if not args.family:
        raise ParseError("give a family text or --preset")
    n = _dimension(args, args.family)
    return parse_family(args.family, F, n)


def _points(args, F):
    pts = []
    if args.points:
        pts = [parse_point(s, F.field, F.nparams) for s in args.points.split(";") if s.strip()]
    if getattr(args, "phi_count", None):
        if F.nparams != 3:
            raise ParseError("--phi-count needs a family over P^2")
        pts += fam.phi_points(args.phi_count, F.field)
    if not pts:
        raise ParseError("no parameter points given (use --points or --phi-count)")
    return pts


def _fam_call(fn, *a):
    try:
        return fn(*a)
    except fam.FamilyError as exc:
        raise DomainError(str(exc)) from None


def cmd_family(args):
    F = _family(args)
    pts = _points(args, F)
    field = F.field
    if args.action == "profile":
        prof = _fam_call(fam.degree_profile, F, pts)
        return {"family": str(F), "profile": [
            {"point": format_point(e.point, field), "degree": e.degree, "identity": e.is_identity}
            for e in prof]}
    if args.action == "specialize":
        out = []
        for pt in pts:
            t = _fam_call(fam.specialize, F, pt)
            r = normalize(t)
            out.append({"point": format_point(F.canonical(pt), field), "tuple": str(t),
                        "reduced": str(r.reduced), "degree": r.degree})
        return {"family": str(F), "specializations": out}
    out = []
    for pt in pts:
        t = _fam_call(fam.reduced_lift_at_point, F, pt)
        out.append({"point": format_point(F.canonical(pt), field), "lift": str(t),
                    "formal_degree": t.d})
    return {"family": str(F), "lifts": out}


def cmd_census(args):
    F = _field(args)
    if F.is_rational:
        raise ParseError("census needs a prime field, e.g. --field fp:2")
    if args.n is None or not 1 <= args.n <= 9:
        raise ParseError("census needs --n in 1..9")
    try:
        if args.action == "enumerate":
            r = census_mod.enumerate_hd(args.n, args.d, F.p, partitions=args.partitions,
                                        workers=args.workers, budget=args.budget)
        else:
            r = census_mod.sample_random(args.n, args.d, F.p, args.trials, args.seed,
                                         partitions=args.partitions, workers=args.workers)
    except census_mod.BudgetExceeded as exc:
        raise DomainError(str(exc)) from None
    return r.as_dict(timing=args.timing)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="'q' or 'fp:<prime>' (default q)")
    common.add_argument("--n", type=int, default=None, help="ambient dimension (1..9)")
    common.add_argument("--json", action="store_true", help="structured output")

    ap = argparse.ArgumentParser(prog="cremona", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, *positional, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for pos in positional:
            sp.add_argument(pos)
        sp.set_defaults(func=fn)
        return sp

    add("degree", cmd_degree, "tuple", help="true (reduced) degree of a tuple")
    add("normalize", cmd_normalize, "tuple", help="strip the common factor")
    add("jacobian", cmd_jacobian, "tuple", help="Jacobian determinant")
    add("check", cmd_check, "tuple", help="birationality with inverse certificate")
    add("inverse", cmd_inverse, "tuple", help="certified inverse")
    add("compose", cmd_compose, "first", "second", help="first o second")
    add("apply", cmd_apply, "tuple", "point", help="image of a point, e.g. 1:2:3")
    add("dist", cmd_dist, "first", "second", help="squared chordal distance in W_d")
    add("fiber-dist", cmd_fiber_dist, "tuple", "target",
        help="squared distance from a tuple to the fiber of a reduced map")

    fp = sub.add_parser("family", parents=[common], help="parametric families")
    fp.add_argument("action", choices=("profile", "specialize", "lift"))
    fp.add_argument("family", nargs="?", default=None)
    fp.add_argument("--preset", choices=PRESETS)
    fp.add_argument("--points", help="semicolon separated points, e.g. '1:1:2;0:0:1'")
    fp.add_argument("--phi-count", type=int, default=0,
                    help="add this many points phi(u:v) of the nodal cubic")
    fp.set_defaults(func=cmd_family)

    cp = sub.add_parser("census", parents=[common], help="finite-field census of H_d")
    cp.add_argument("action", choices=("enumerate", "sample"))
    cp.add_argument("--d", type=int, required=True)
    cp.add_argument("--partitions", type=int, default=1)
    cp.add_argument("--workers", type=int, default=1)
    cp.add_argument("--budget", type=int, default=census_mod.DEFAULT_BUDGET)
    cp.add_argument("--trials", type=int, default=1000)
    cp.add_argument("--seed", type=int, default=0)
    cp.add_argument("--timing", action="store_true", help="include wall-clock duration")
    cp.set_defaults(func=cmd_census)
    return ap


def _human(doc: dict, out) -> None:
    for k, v in doc.items():
        if isinstance(v, list):
            print(f"{k}:", file=out)
            for item in v:
                print("  " + ", ".join(f"{a}={b}" for a, b in item.items()), file=out)
        elif isinstance(v, dict):
            print(f"{k}: " + ", ".join(f"{a}={b}" for a, b in v.items()), file=out)
        else:
            print(f"{k}: {v}", file=out)
            if k in ("distance_sq", "fiber_distance_sq"):
                print(f"  (approx. {float(Fraction(v)):.12g})", file=out)


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return 2
    except (NotBirationalError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    if args.json:
        json.dump(doc, out, sort_keys=True)
        out.write("\n")
    else:
        _human(doc, out)
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
