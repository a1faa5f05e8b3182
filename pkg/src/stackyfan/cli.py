"""Command-line interface: the JSON fan-document format and result
rendering for every computation in the package.

Exit codes: 0 success, 1 domain error, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import arcspace, core, deltainv, refine, stacky
from .core import Fan
from .errors import ParseError, StackyFanError, ValidationError
from .qseries import (FracPoly, expand_laurent, format_poly, format_rational,
                      format_series, series_equal, substitute_reciprocal)
from .stacky import PiecewiseQLinear, StackyFan

DOCUMENT_FIELDS = ("rank", "rays", "weights", "cones", "support",
                   "divisors", "functionals")
SUPPORT_KINDS = ("complete", "convex", "general")


@dataclass(frozen=True)
class FanDocument:
    """The serialized form of a stacky fan plus optional named per-ray data."""

    rank: int
    rays: tuple
    weights: tuple
    cones: tuple        # maximal cones as ray-index tuples
    support: str
    divisors: tuple = ()     # pairs (name, tuple of rationals)
    functionals: tuple = ()  # pairs (name, tuple of rationals)

    def to_fan(self) -> Fan:
        return Fan.from_maximal(self.rank, self.rays, self.cones, self.support)

    def to_stacky_fan(self) -> StackyFan:
        fan = self.to_fan()
        report = core.validate_fan(fan)
        if not report.ok:
            raise ValidationError(report)
        return StackyFan(fan, self.weights)


def _rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"{path}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{path}: malformed rational {value!r}")
    raise ParseError(f"{path}: expected an integer or 'p/q' string")


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{path}: expected an integer")
    return value


def _int_list(value, path: str) -> tuple:
    if not isinstance(value, list):
        raise ParseError(f"{path}: expected a list")
    return tuple(_integer(x, f"{path}[{i}]") for i, x in enumerate(value))


def parse_fan_document(text: str) -> FanDocument:
    """Strict parse of the JSON fan document; unknown fields are rejected
    and the encoded fan is validated."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: line {exc.lineno}: {exc.msg}")
    if not isinstance(data, dict):
        raise ParseError("top level: expected an object")
    for key in data:
        if key not in DOCUMENT_FIELDS:
            raise ParseError(f"unknown field {key!r}")
    for key in ("rank", "rays", "weights", "cones", "support"):
        if key not in data:
            raise ParseError(f"missing field {key!r}")
    rank = _integer(data["rank"], "rank")
    if rank < 1:
        raise ParseError("rank: must be positive")
    if not isinstance(data["rays"], list):
        raise ParseError("rays: expected a list")
    rays = tuple(_int_list(r, f"rays[{i}]")
                 for i, r in enumerate(data["rays"]))
    for i, r in enumerate(rays):
        if len(r) != rank:
            raise ParseError(f"rays[{i}]: expected {rank} coordinates")
    weights = _int_list(data["weights"], "weights")
    if len(weights) != len(rays):
        raise ParseError("weights: length differs from rays")
    if any(a < 1 for a in weights):
        raise ParseError("weights: must be positive")
    if not isinstance(data["cones"], list):
        raise ParseError("cones: expected a list")
    cones = tuple(_int_list(c, f"cones[{i}]")
                  for i, c in enumerate(data["cones"]))
    for i, c in enumerate(cones):
        if any(j < 0 or j >= len(rays) for j in c):
            raise ParseError(f"cones[{i}]: ray index out of range")
    support = data["support"]
    if support not in SUPPORT_KINDS:
        raise ParseError(f"support: expected one of {', '.join(SUPPORT_KINDS)}")

    def named(key):
        block = data.get(key)
        if block is None:
            return ()
        if not isinstance(block, dict):
            raise ParseError(f"{key}: expected an object")
        out = []
        for name in block:
            values = block[name]
            if not isinstance(values, list) or len(values) != len(rays):
                raise ParseError(f"{key}.{name}: expected one value per ray")
            out.append((name, tuple(_rational(v, f"{key}.{name}[{i}]")
                                    for i, v in enumerate(values))))
        return tuple(out)

    doc = FanDocument(rank, rays, weights, cones, support,
                      named("divisors"), named("functionals"))
    doc.to_stacky_fan()  # validation side effect
    return doc


def _render_rational(x: Fraction):
    return x.numerator if x.denominator == 1 else str(x)


def render_document(doc: FanDocument) -> str:
    data = {
        "rank": doc.rank,
        "rays": [list(r) for r in doc.rays],
        "weights": list(doc.weights),
        "cones": [list(c) for c in doc.cones],
        "support": doc.support,
    }
    if doc.divisors:
        data["divisors"] = {name: [_render_rational(v) for v in values]
                            for name, values in doc.divisors}
    if doc.functionals:
        data["functionals"] = {name: [_render_rational(v) for v in values]
                               for name, values in doc.functionals}
    return json.dumps(data, indent=2) + "\n"


def document_of(sfan: StackyFan) -> FanDocument:
    return FanDocument(sfan.rank, sfan.fan.rays, sfan.weights,
                       tuple(c.ray_indices for c in sfan.fan.maximal_cones),
                       sfan.fan.support_kind)


# ---------------------------------------------------------------------------
# Rendering helpers


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else str(x)


def _fmt_vec(v) -> str:
    return "[" + ", ".join(_fmt(Fraction(x)) for x in v) + "]"


def _power(var: str, e: Fraction) -> str:
    e = Fraction(e)
    if e.denominator == 1:
        return f"{var}^{e.numerator}"
    return f"{var}^{{{e}}}"


def _resolve_functional(doc: FanDocument, sfan: StackyFan,
                        name: str) -> PiecewiseQLinear:
    if name == "zero":
        return stacky.zero_functional(sfan)
    for n, values in doc.functionals:
        if n == name:
            return PiecewiseQLinear(sfan, values)
    raise ParseError(f"unknown functional {name!r}")


def _resolve_divisor(doc: FanDocument, sfan: StackyFan,
                     name: str) -> arcspace.StackDivisor:
    if name == "zero":
        return arcspace.zero_divisor(sfan)
    if name == "canonical":
        return arcspace.canonical_divisor(sfan)
    for n, values in doc.divisors:
        if n == name:
            return arcspace.StackDivisor(sfan, values)
    raise ParseError(f"unknown divisor {name!r}")


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_validate(doc_text, args):
    try:
        parse_fan_document(doc_text)
    except ValidationError as exc:
        return 1, "\n".join(exc.report.violations) + "\n"
    return 0, "ok\n"


def _cmd_box(doc, sfan, args):
    lines = []
    for e in stacky.box_all(sfan):
        lines.append(f"cone {_fmt_vec(e.cone.ray_indices)}: "
                     f"point {_fmt_vec(e.point)}, "
                     f"q = {_fmt_vec(e.q)}, order {e.order}")
    return 0, "\n".join(lines) + "\n"


def _cmd_ages(doc, sfan, args):
    lines = []
    for e in stacky.box_all(sfan):
        lines.append(f"point {_fmt_vec(e.point)}: "
                     f"age {_fmt(stacky.age(sfan, e))}")
    return 0, "\n".join(lines) + "\n"


def _cmd_ehrhart(doc, sfan, args):
    data = deltainv.ehrhart_counts(sfan, args.max_m)
    lines = [f"f({m}) = {c}" for m, c in enumerate(data.counts)]
    return 0, "\n".join(lines) + "\n"


def _cmd_delta(doc, sfan, args):
    return 0, format_rational(deltainv.ehrhart_delta(sfan).value) + "\n"


def _cmd_weighted_delta(doc, sfan, args):
    lam = _resolve_functional(doc, sfan, args.lam)
    closed = deltainv.weighted_delta_closed(sfan, lam)
    out = format_rational(closed) + "\n"
    if args.series_cutoff is not None:
        cutoff = Fraction(args.series_cutoff)
        series = deltainv.weighted_delta_series(sfan, lam, cutoff)
        out += "series: " + format_series(series) + "\n"
    return 0, out


def _cmd_gamma(doc, sfan, args):
    var = "uv" if args.uv else "q"
    e = _resolve_divisor(doc, sfan, args.divisor)
    g = deltainv.gamma(sfan, e)
    out = format_rational(g, var) + "\n"
    if args.check_direct is not None:
        bound = Fraction(args.check_direct)
        direct = arcspace.gamma_truncated_direct(sfan, e, bound)
        closed = expand_laurent(substitute_reciprocal(g), direct.cutoff)
        if not series_equal(direct, closed):
            return 1, out + f"direct check (bound {_fmt(bound)}): FAILED\n"
        out += f"direct check (bound {_fmt(bound)}): ok\n"
    return 0, out


def _cmd_betti(doc, sfan, args):
    var = "uv" if args.uv else "q"
    betti = deltainv.orbifold_betti(sfan)
    lines = [f"{_power(var, e)}: {betti[e]}" for e in sorted(betti)]
    return 0, "\n".join(lines) + "\n"


def _cmd_symmetry(doc, sfan, args):
    lam = _resolve_functional(doc, sfan, args.lam)
    ok = deltainv.check_symmetry(sfan, lam)
    return 0, f"symmetric: {'true' if ok else 'false'}\n"


def _cmd_orbit_poset(doc, sfan, args):
    poset = arcspace.orbit_poset(sfan, Fraction(args.bound))
    points = sorted(lab.w for lab in poset.labels)
    covers = sorted(poset.covers)
    if args.json:
        data = {"labels": [list(p) for p in points],
                "covers": [[list(a), list(b)] for a, b in covers]}
        return 0, json.dumps(data, indent=2) + "\n"
    if args.dot:
        lines = ["digraph orbits {"]
        for p in points:
            lines.append(f'  "{_fmt_vec(p)}";')
        for a, b in covers:
            lines.append(f'  "{_fmt_vec(a)}" -> "{_fmt_vec(b)}";')
        lines.append("}")
        return 0, "\n".join(lines) + "\n"
    lines = [f"label {_fmt_vec(p)}" for p in points]
    lines += [f"cover {_fmt_vec(a)} -> {_fmt_vec(b)}" for a, b in covers]
    return 0, "\n".join(lines) + "\n"


def _cmd_refine_check(doc, sfan, args):
    with open(args.fine, encoding="utf-8") as fh:
        fine_doc = parse_fan_document(fh.read())
    fine = fine_doc.to_stacky_fan()
    witness = refine.is_stacky_refinement(fine, sfan)
    if witness is None:
        return 1, "refinement: no\n"
    out = "refinement: yes\n"
    if args.lam is not None:
        lam = _resolve_functional(doc, sfan, args.lam)
        ok = refine.check_invariance(sfan, lam, fine)
        out += f"invariance: {'true' if ok else 'false'}\n"
    return 0, out


def _cmd_subdivide(doc, sfan, args):
    try:
        w = tuple(int(x) for x in args.at.split(","))
    except ValueError:
        raise ParseError(f"--at: malformed lattice point {args.at!r}")
    result = refine.stellar_subdivide(sfan, w, args.weight)
    return 0, render_document(document_of(result))


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="stackyfan", description=__doc__)
    parser.add_argument("--uv", action="store_true",
                        help="render the motivic variable as uv instead of q")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("fan", help="path to a fan document (JSON)")
        p.set_defaults(func=func)
        return p

    add("validate", _cmd_validate, help="structural validation report")
    add("box", _cmd_box, help="box elements of every cone")
    add("ages", _cmd_ages, help="ages of all box elements")
    p = add("ehrhart", _cmd_ehrhart, help="lattice-point counts f(0..K)")
    p.add_argument("--max-m", type=int, required=True, metavar="K")
    add("delta", _cmd_delta, help="Ehrhart delta-polynomial")
    p = add("weighted-delta", _cmd_weighted_delta,
            help="weighted delta-vector (closed form)")
    p.add_argument("--lambda", dest="lam", required=True, metavar="NAME")
    p.add_argument("--series-cutoff", type=Fraction, metavar="C")
    p = add("gamma", _cmd_gamma, help="motivic integral Gamma(X, E)")
    p.add_argument("--divisor", required=True, metavar="NAME")
    p.add_argument("--check-direct", type=Fraction, metavar="BOUND")
    add("betti", _cmd_betti, help="orbifold Betti numbers")
    p = add("symmetry", _cmd_symmetry, help="palindromy of the delta-vector")
    p.add_argument("--lambda", dest="lam", required=True, metavar="NAME")
    p = add("orbit-poset", _cmd_orbit_poset, help="twisted-arc orbit poset")
    p.add_argument("--bound", type=Fraction, required=True, metavar="B")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true")
    p = add("refine-check", _cmd_refine_check,
            help="refinement predicate and invariance check")
    p.add_argument("--fine", required=True, metavar="FILE")
    p.add_argument("--lambda", dest="lam", metavar="NAME")
    p = add("subdivide", _cmd_subdivide, help="stellar subdivision at a point")
    p.add_argument("--at", required=True, metavar="x,y,..")
    p.add_argument("--weight", type=int, default=1, metavar="a")
    return parser


def run_command(argv) -> tuple:
    """Execute a CLI invocation; returns (exit code, rendered output)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        return 2, f"usage error: {exc}\n"
    try:
        with open(args.fan, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return 2, f"error: {exc}\n"
    if args.func is _cmd_validate:
        return _cmd_validate(text, args)
    try:
        doc = parse_fan_document(text)
        sfan = doc.to_stacky_fan()
        return args.func(doc, sfan, args)
    except ParseError as exc:
        return 2, f"error: {exc}\n"
    except StackyFanError as exc:
        return 1, f"error: {exc}\n"


def main() -> None:
    code, output = run_command(sys.argv[1:])
    sys.stdout.write(output)
    sys.exit(code)


if __name__ == "__main__":
    main()
