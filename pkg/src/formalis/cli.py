"""``formalis`` command-line frontend.

Every subcommand prints one JSON report on stdout::

    {"command": ..., "inputs": ..., "result": ..., "caveats": [...], "timing": ms}

Exit codes: 0 finished (a failed property is still a finished run), 2 parse
error, 3 precondition violation, 4 resource cap.  Logging goes to stderr and
is controlled by ``FORMALIS_LOG`` (quiet, info, debug).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import __version__, goldens
from .closures import (OpenSubschemeSpec, counterexample_ring, counterexample_series, de_profile,
                       factorial_rule, invert_to_monomial, line_closure, ordinary_closure,
                       pseudo_closure, saturation_profile, search_polynomial_multiple)
from .exactpoly import ParseError, Poly, PolyError, TruncSeries, VarSpec, parse_poly, truncate
from .foliations import (XYZ, PfaffError, PfaffForm, SeparatrixError, algebraic_solution_search,
                         check_integrability, euler_residue, jouanolou_form,
                         line_validation, make_pfaff, separatrix_family, smooth_separatrix)
from .groebner import (GREVLEX, LEX, Ideal, ResourceCapError, buchberger, ideals_equal,
                       resource_limits, use_cache)
from .towers import (NONADIC_CAVEAT, PreconditionError, TowerError, Tower, adic_witness_test,
                     chevalley_dichotomy, load_tower)

log = logging.getLogger("formalis")

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_CAP = 0, 2, 3, 4

MODEL_CAVEAT = ("power-series rings are modelled levelwise by polynomial rings; "
                "results hold at the stated finite depth only")

REPRODUCIBLE = ("nonadic-xy", "embedded-points", "counterexample-series", "line-closure",
                "chevalley", "jouanolou-separatrix")


class CliParseError(ValueError):
    """Malformed command-line value (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise CliParseError(message)


def _setup_logging() -> None:
    level = os.environ.get("FORMALIS_LOG", "quiet").lower()
    levels = {"quiet": logging.CRITICAL + 1, "info": logging.INFO, "debug": logging.DEBUG}
    if level not in levels:
        level = "quiet"
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("formalis")
    root.handlers[:] = [handler]
    root.setLevel(levels[level])
    root.propagate = False


# -- argument helpers ---------------------------------------------------------

def _names(text: str) -> List[str]:
    return [s.strip() for s in text.split(",") if s.strip()] if text else []


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise CliParseError(f"not a rational number: {text!r}") from exc


def _point(text: str) -> List[Fraction]:
    parts = [_rational(s) for s in text.split(",")]
    if len(parts) != 3:
        raise CliParseError(f"expected three comma-separated rationals, got {text!r}")
    return parts


def _gens(text: str, ring: VarSpec) -> List[Poly]:
    return [parse_poly(g, ring) for g in _names(text)]


def _rule(text: str) -> Callable[[int], Fraction]:
    if text == "factorial":
        return factorial_rule
    if text.startswith("power:"):
        base = _rational(text.split(":", 1)[1])
        return lambda i: base ** (i * i)
    if text.startswith("list:"):
        vals = [_rational(s) for s in text.split(":", 1)[1].split(",")]
        def listed(i):
            if i > len(vals):
                raise PreconditionError(f"rule lists only {len(vals)} coefficients")
            return vals[i - 1]
        return listed
    raise CliParseError(f"unknown rule {text!r} (factorial, power:B, list:a1,a2,...)")


def _basis(I: Ideal) -> List[str]:
    return [str(g) for g in buchberger(I).basis]


def _form_arg(args) -> Sequence[Poly]:
    if args.jouanolou is not None:
        return jouanolou_form(args.jouanolou)
    if not args.w:
        raise CliParseError("give --jouanolou M or --w W1,W2,W3")
    comps = args.w.split(",")
    if len(comps) != 3:
        raise CliParseError(f"expected three comma-separated components, got {args.w!r}")
    return tuple(parse_poly(c, XYZ) for c in comps)


def _pfaff_arg(args) -> PfaffForm:
    form = _form_arg(args)
    if isinstance(form, PfaffForm):
        return form
    degrees = {c.total_degree() for c in form if not c.is_zero()}
    if len(degrees) != 1:
        raise PfaffError("components are not homogeneous of a common degree", None)
    return make_pfaff(degrees.pop(), *form)


def _series_ring(args) -> VarSpec:
    return VarSpec((args.x, args.t), invertible=(args.x,), series_var=args.t)


def _counterexample_f(args, N: int) -> TruncSeries:
    if args.f:
        spec = counterexample_ring()
        return truncate(parse_poly(args.f, spec), N)
    return counterexample_series(_rule(args.rule), N)


# -- subcommands ---------------------------------------------------------------

def cmd_parse(args):
    ring = VarSpec(_names(args.vars), _names(args.invertible), args.series_var)
    p = parse_poly(args.expr, ring)
    inputs = {"expr": args.expr, "ring": ring.to_json()}
    result = {"normalized": str(p), "total_degree": p.total_degree() if not p.is_zero() else None,
              "terms": [{"exponents": list(e), "coefficient": str(c)} for e, c in p.sorted_terms()]}
    return inputs, result, []


def cmd_gb(args):
    ring = VarSpec(_names(args.vars))
    I = Ideal(ring, [parse_poly(g, ring) for g in args.gens])
    order = LEX if args.order == "lex" else GREVLEX
    G = buchberger(I, order)
    return ({"ring": ring.to_json(), "gens": list(args.gens), "order": args.order},
            {"basis": [str(g) for g in G.basis], "unit": G.is_unit()}, [])


def cmd_closure(args):
    T = load_tower(args.tower)
    Y = OpenSubschemeSpec(parse_poly(args.f, T.ring), Ideal(T.ring, _gens(args.J, T.ring)))
    C = ordinary_closure(T, Y, args.level)
    inputs = {"tower": T.to_json(), "f": args.f, "J": _names(args.J), "level": args.level}
    return inputs, {"closure": _basis(C)}, [MODEL_CAVEAT]


def cmd_pseudo_closure(args):
    T = load_tower(args.tower)
    f = parse_poly(args.f, T.ring)
    Ys = [OpenSubschemeSpec(f, Ideal(T.ring, _gens(y, T.ring))) for y in args.Y]
    chain = pseudo_closure(T, Ys)
    inputs = {"tower": T.to_json(), "f": args.f, "Y": [_names(y) for y in args.Y]}
    return inputs, chain.to_json(), [MODEL_CAVEAT]


def cmd_adic_test(args):
    T = load_tower(args.tower)
    cand = Ideal(T.ring, _gens(args.candidate, T.ring))
    rep = adic_witness_test(T, cand, args.nmax, args.mmax)
    caveats = [] if rep.passed else [NONADIC_CAVEAT]
    inputs = {"tower": T.to_json(), "candidate": _names(args.candidate), "n_max": args.nmax}
    return inputs, rep.to_json(), caveats


def cmd_chevalley(args):
    T = load_tower(args.tower)
    m = Ideal(T.ring, _gens(args.m, T.ring))
    res = chevalley_dichotomy(T, m, args.nmax)
    inputs = {"tower": T.to_json(), "m": _names(args.m), "n_max": args.nmax}
    caveats = [MODEL_CAVEAT]
    if res.case != "cofinal":
        caveats.append("a finite-depth stable core is evidence for a nonzero intersection, not a proof")
    return inputs, res.to_json(), caveats


def cmd_invert(args):
    spec = _series_ring(args)
    f = truncate(parse_poly(args.f, spec), args.N)
    g, n = invert_to_monomial(f, args.N)
    result = {"n": n, **g.to_json()}
    if not any(k for _, k in g.terms):
        result["g"] = [str(c) for c in g.as_series().coeffs()]
    return {"f": args.f, "N": args.N, "ring": spec.to_json()}, result, []


def cmd_line_closure(args):
    spec = _series_ring(args)
    f = truncate(parse_poly(args.f, spec), args.N)
    C = line_closure(f, args.N)
    return ({"f": args.f, "N": args.N, "ring": spec.to_json()},
            {"ideal": _basis(C)}, [MODEL_CAVEAT])


def cmd_counterexample(args):
    f = counterexample_series(_rule(args.rule), args.N)
    return ({"rule": args.rule, "N": args.N},
            {"series": str(f), "coefficients": [str(c) for c in f.coeffs()]}, [])


def cmd_de_profile(args):
    spec = counterexample_ring()
    g = truncate(parse_poly(args.g, spec), args.N)
    prof = de_profile(None, g, args.N)
    return ({"g": args.g, "N": args.N},
            {**prof.to_json(), "descent_holds": prof.descent_holds()}, [])


def cmd_search_multiple(args):
    f = _counterexample_f(args, args.N)
    seed = parse_poly(args.seed, f.spec)
    out = search_polynomial_multiple(f, seed, args.N)
    inputs = {"f": str(f), "seed": args.seed, "N": args.N}
    if isinstance(out, TruncSeries):
        return inputs, {"found": True, "g": str(out), "product": str(truncate((out.poly * f.poly), args.N))}, [
            "only the canonical greedy branch is explored"]
    return inputs, {"found": False, "obstruction": out.to_json(), "certificate_checks": out.check(f)}, [
        "only the canonical greedy branch is explored"]


def cmd_saturation_profile(args):
    f = _counterexample_f(args, args.N_max)
    chain = saturation_profile(f, args.N_max, args.M)
    result = chain.to_json()
    result["monotone"] = chain.projection_monotone(args.M)
    result["strict"] = chain.projection_strict(args.M)
    result["stable_from"] = chain.projection_stable_from(args.M)
    return {"f": str(f), "N_max": args.N_max, "M": args.M}, result, [MODEL_CAVEAT]


def cmd_pfaff_check(args):
    form = _form_arg(args)
    comps = form.components if isinstance(form, PfaffForm) else tuple(form)
    degrees = {c.total_degree() for c in comps if not c.is_zero()}
    homogeneous = len(degrees) <= 1 and all(c.is_homogeneous() for c in comps)
    residue = euler_residue(comps)
    ok, res = check_integrability(comps)
    result = {"homogeneous": homogeneous, "degree": min(degrees) if degrees else None,
              "euler_residue": str(residue), "euler_ok": residue.is_zero(),
              "integrable": ok, "integrability_residual": str(res)}
    return {"w": [str(c) for c in comps]}, result, []


def cmd_darboux(args):
    w = _pfaff_arg(args)
    sols = algebraic_solution_search(w, args.degree)
    return ({"w": [str(c) for c in w.components], "degree": args.degree},
            {"solutions": [s.to_json() for s in sols]}, [])


def cmd_separatrix(args):
    form = _form_arg(args)
    comps = form.components if isinstance(form, PfaffForm) else form
    jet = smooth_separatrix(comps, _point(args.point), args.N)
    return ({"w": [str(c) for c in comps], "point": args.point, "N": args.N}, jet.to_json(), [])


def cmd_family(args):
    w = _pfaff_arg(args)
    fam = separatrix_family(w, _point(args.direction), args.N)
    return ({"w": [str(c) for c in w.components], "direction": args.direction, "N": args.N},
            fam.to_json(), ["pole orders at finite N are evidence about the limit, not a proof"])


# -- reproduce -------------------------------------------------------------------

def _check(name: str, expected, observed) -> dict:
    return {"name": name, "expected": expected, "observed": observed, "pass": expected == observed}


def _check_ideal(name: str, ring: VarSpec, expected: Sequence[str], observed: Ideal) -> dict:
    want = Ideal(ring, [parse_poly(g, ring) for g in expected])
    return {"name": name, "expected": list(expected), "observed": _basis(observed),
            "pass": ideals_equal(want, observed)}


def _tower(ring: VarSpec, chain: Sequence[Sequence[str]]) -> Tower:
    return Tower(ring, [Ideal(ring, [parse_poly(g, ring) for g in level]) for level in chain])


def _repro_nonadic_xy() -> List[dict]:
    gold = goldens.NONADIC_XY
    ring = VarSpec(("x", "y"))
    T = _tower(ring, gold["chain"])
    rep = adic_witness_test(T, Ideal(ring, _gens(",".join(gold["candidate"]), ring)), gold["n_max"])
    return [_check("forward witnesses", {str(k): v for k, v in gold["forward"].items()},
                   rep.to_json()["forward_witness"]),
            _check("failure m", gold["failure_m"], rep.forward_failure),
            _check("adic test fails", False, rep.passed)]


def _embedded_chain(points: Sequence[int]):
    ring = VarSpec(("x", "t"))
    x, t = Poly.var(ring, "x"), Poly.var(ring, "t")
    chain, prod = [], t
    for a in points:
        prod = prod * (x - a)
        chain.append(["t^2", str(prod)])
    return ring, chain


def _repro_embedded_points() -> List[dict]:
    gold = goldens.EMBEDDED_POINTS
    ring, chain = _embedded_chain(gold["points"])
    T = _tower(ring, chain)
    strict = all(not ideals_equal(T.chain[k], T.chain[k + 1]) for k in range(T.depth - 1))
    rep = adic_witness_test(T, T.level(1), gold["n_max"])
    Y = [OpenSubschemeSpec(Poly.constant(ring, 1), I) for I in T.chain]
    pc = pseudo_closure(T, Y)
    return [_check("chain strictly decreasing", True, strict),
            _check("failure m", gold["failure_m"], rep.forward_failure),
            _check("pseudo-closure stabilized_at", None, pc.stabilized_at)]


def _repro_counterexample_series() -> List[dict]:
    checks = []
    f = counterexample_series(factorial_rule, 8)
    spec = f.spec
    for E, (order, exponent) in goldens.COUNTEREXAMPLE_OBSTRUCTIONS.items():
        cert = search_polynomial_multiple(f, parse_poly(f"y^{E}", spec), 8)
        obs = (getattr(cert, "order", None), list(getattr(cert, "exponent", ())))
        checks.append(_check(f"seed y^{E} obstruction", [order, list(exponent)], list(obs)))
    ring = spec.polynomial()
    g6 = counterexample_series(factorial_rule, 6)
    chain = saturation_profile(g6, 6, 2)
    for N, I in chain.projections[2]:
        checks.append(_check_ideal(f"pi_2(J_{N})", ring, goldens.COUNTEREXAMPLE_PI2[N], I))
    checks.append(_check("pi_2 strictly decreasing", True, chain.projection_strict(2)))
    control = saturation_profile(truncate(parse_poly("y + x*t", spec), 5), 5, 2)
    checks.append(_check("control stabilizes at N = M", 2, control.projection_stable_from(2)))
    checks.append(_check_ideal("control pi_2", ring, goldens.POLYNOMIAL_CONTROL_PI2,
                               control.projections[2][-1][1]))
    return checks


def _repro_line_closure() -> List[dict]:
    spec = VarSpec(("x", "t"), invertible=("x",), series_var="t")
    checks = []
    for case in goldens.LINE_CLOSURES:
        f = truncate(parse_poly(case["f"], spec), case["N"])
        checks.append(_check_ideal(f"line_closure({case['f']}, {case['N']})", spec.polynomial(),
                                   case["ideal"], line_closure(f)))
    g, n = invert_to_monomial(truncate(parse_poly("x + t", spec), 6))
    checks.append(_check("inverse of x + t", [0, goldens.INVERSE_X_PLUS_T],
                         [n, [str(c) for c in g.as_series().coeffs()]]))
    return checks


def _repro_chevalley() -> List[dict]:
    gold = goldens.CHEVALLEY
    ring = VarSpec(("x", "y"))
    m = Ideal(ring, _gens("x, y", ring))
    powers = [m]
    for _ in range(9):
        powers.append(Ideal(ring, buchberger(powers[-1] * m).basis))
    T1 = Tower(ring, [powers[2 * n - 1] for n in range(1, 5)])
    r1 = chevalley_dichotomy(T1, m, 4)
    x = Ideal(ring, _gens("x", ring))
    T2 = Tower(ring, [x + powers[n - 1] for n in range(1, 6)])
    r2 = chevalley_dichotomy(T2, m, 4)
    return [_check("m^2n cofinal", "cofinal", r1.case),
            _check("m^2n witness", {str(k): v for k, v in gold["cofinal_witness"].items()},
                   r1.data.get("witness")),
            _check("(x) + m^n case", "stabilized_intersection", r2.case),
            _check("(x) + m^n generators", gold["intersection"], r2.data.get("generators")),
            _check("(x) + m^n stable_from", gold["stable_from"], r2.data.get("stable_from"))]


def _repro_jouanolou_separatrix() -> List[dict]:
    gold = goldens.JOUANOLOU3_POLE_PROFILE
    w = jouanolou_form(3)
    ok, _ = line_validation(w, (1, 1, 1))
    fam = separatrix_family(w, gold["direction"], gold["N"])
    point = smooth_separatrix(w.components, gold["direction"], gold["N"])
    sphere = smooth_separatrix(tuple(parse_poly(c, XYZ) for c in ("x", "y", "z")), (0, 0, 1), 5)
    return [_check("diagonal meets singular locus", False, ok),
            _check("axis", gold["axis"], fam.axis),
            _check("pole profile", gold["profile"], fam.pole_profile),
            _check("specialization at w = 1", True, fam.specialize(1) == point.coeffs),
            _check("sphere jet", goldens.SPHERE_JET, str(sphere.as_poly()))]


_REPRODUCERS: Dict[str, Callable[[], List[dict]]] = {
    "nonadic-xy": _repro_nonadic_xy,
    "embedded-points": _repro_embedded_points,
    "counterexample-series": _repro_counterexample_series,
    "line-closure": _repro_line_closure,
    "chevalley": _repro_chevalley,
    "jouanolou-separatrix": _repro_jouanolou_separatrix,
}


def cmd_reproduce(args):
    checks = _REPRODUCERS[args.name]()
    caveats = [NONADIC_CAVEAT] if args.name in ("nonadic-xy", "embedded-points") else []
    return ({"name": args.name},
            {"pass": all(c["pass"] for c in checks), "checks": checks}, caveats)


# -- wiring ------------------------------------------------------------------------

def _form_options(p):
    p.add_argument("--jouanolou", type=int, metavar="M", help="use the Jouanolou form of degree M")
    p.add_argument("--w", metavar="W1,W2,W3", help="form components in x, y, z, comma separated")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="formalis", description="Finite-depth formal-scheme and foliation experiments.")
    ap.add_argument("--version", action="version", version=f"formalis {__version__}")
    ap.add_argument("--cache", metavar="DIR", help="reuse reduced Gröbner bases stored in DIR")
    ap.add_argument("--deterministic", action="store_true",
                    help="report timing as 0 so reports are byte-identical")
    ap.add_argument("--max-degree", type=int, default=40)
    ap.add_argument("--max-pairs", type=int, default=200_000)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="normalize a polynomial")
    p.add_argument("--expr", required=True)
    p.add_argument("--vars", required=True)
    p.add_argument("--invertible", default="")
    p.add_argument("--series-var")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("gb", help="reduced Gröbner basis")
    p.add_argument("--vars", required=True)
    p.add_argument("--gens", nargs="+", required=True)
    p.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("closure", help="closure of V(J) in D(f) at one level")
    p.add_argument("--tower", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--J", default="")
    p.add_argument("--level", type=int, default=1)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("pseudo-closure", help="levelwise closures of a chain of open subschemes")
    p.add_argument("--tower", required=True)
    p.add_argument("--f", default="1")
    p.add_argument("--Y", action="append", required=True, help="generators at one level; repeat per level")
    p.set_defaults(func=cmd_pseudo_closure)

    p = sub.add_parser("adic-test", help="cofinality test against powers of a candidate")
    p.add_argument("--tower", required=True)
    p.add_argument("--candidate", required=True)
    p.add_argument("--nmax", type=int, default=4)
    p.add_argument("--mmax", type=int)
    p.set_defaults(func=cmd_adic_test)

    p = sub.add_parser("chevalley", help="cofinal versus stabilized intersection")
    p.add_argument("--tower", required=True)
    p.add_argument("--m", required=True, help="maximal ideal, e.g. 'x, y'")
    p.add_argument("--nmax", type=int, default=4)
    p.set_defaults(func=cmd_chevalley)

    for name, func, helptext in (("invert", cmd_invert, "invert a Laurent series to a monomial"),
                                 ("line-closure", cmd_line_closure, "contraction of (f) to k[x, t]")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--f", required=True)
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--x", default="x")
        p.add_argument("--t", default="t")
        p.set_defaults(func=func)

    p = sub.add_parser("counterexample", help="truncated counterexample series")
    p.add_argument("--rule", default="factorial")
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("de-profile", help="d, e, D, E sequences of a series in k[x^±, y][[t]]")
    p.add_argument("--g", required=True)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_de_profile)

    p = sub.add_parser("search-multiple", help="greedy search for a polynomial multiple")
    p.add_argument("--rule", default="factorial")
    p.add_argument("--f", help="explicit series instead of the counterexample")
    p.add_argument("--seed", default="1")
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_search_multiple)

    p = sub.add_parser("saturation-profile", help="J_N and its projections pi_M")
    p.add_argument("--rule", default="factorial")
    p.add_argument("--f", help="explicit series instead of the counterexample")
    p.add_argument("--N-max", dest="N_max", type=int, required=True)
    p.add_argument("--M", type=int, default=2)
    p.set_defaults(func=cmd_saturation_profile)

    p = sub.add_parser("pfaff-check", help="Euler relation and integrability")
    _form_options(p)
    p.set_defaults(func=cmd_pfaff_check)

    p = sub.add_parser("darboux", help="homogeneous algebraic solutions of fixed degree")
    _form_options(p)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_darboux)

    p = sub.add_parser("separatrix", help="smooth separatrix jet through a point")
    _form_options(p)
    p.add_argument("--point", required=True, help="a,b,c")
    p.add_argument("--N", type=int, default=5)
    p.set_defaults(func=cmd_separatrix)

    p = sub.add_parser("family", help="separatrix jets along a line with pole profile")
    _form_options(p)
    p.add_argument("--direction", required=True, help="a,b,c")
    p.add_argument("--N", type=int, default=4)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("reproduce", help="rerun a bundled experiment against its golden values")
    p.add_argument("name", choices=REPRODUCIBLE)
    p.set_defaults(func=cmd_reproduce)
    return ap


def _error_report(command: str, kind: str, message: str) -> dict:
    return {"command": command, "inputs": {}, "result": {"error": kind, "message": message},
            "caveats": [], "timing": 0}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    """Execute one command; the report goes to ``out`` (stdout by default)."""
    out = out or sys.stdout
    _setup_logging()
    argv = list(sys.argv[1:] if argv is None else argv)
    command = next((a for a in argv if not a.startswith("-")), "")
    try:
        args = build_parser().parse_args(argv)
    except CliParseError as exc:
        print(json.dumps(_error_report(command, "parse", str(exc)), indent=2), file=out)
        return EXIT_PARSE
    log.info("running %s", args.command)
    start = time.perf_counter()
    try:
        with resource_limits(args.max_degree, args.max_pairs), use_cache(args.cache):
            inputs, result, caveats = args.func(args)
    except Exception as exc:
        code, kind = _classify(exc)
        log.info("%s failed: %s", args.command, exc)
        print(json.dumps(_error_report(args.command, kind, str(exc)), indent=2), file=out)
        return code
    ms = 0 if args.deterministic else math.ceil((time.perf_counter() - start) * 1000)
    report = {"command": args.command, "inputs": inputs, "result": result,
              "caveats": caveats, "timing": ms}
    print(json.dumps(report, indent=2), file=out)
    return EXIT_OK


def _classify(exc: Exception):
    if isinstance(exc, (ParseError, CliParseError, json.JSONDecodeError)):
        return EXIT_PARSE, "parse"
    if isinstance(exc, ResourceCapError):
        return EXIT_CAP, "resource_cap"
    if isinstance(exc, (PreconditionError, TowerError, PfaffError, SeparatrixError, PolyError,
                        OSError, KeyError)):
        return EXIT_PRECONDITION, "precondition"
    raise exc


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
