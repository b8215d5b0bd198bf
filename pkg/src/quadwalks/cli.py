"""Command-line front end.

Commands:

    quadwalks analyze   MODEL [--depth D] [--format F] [--out PATH]
    quadwalks expand    MODEL --order M [--start u,v] [--numerator PATH]
    quadwalks verify    MODEL --order M [--endpoint k,l] [--start u,v]
                              [--nmax N] [--precision BITS] [--out CSV]
    quadwalks decompose MODEL --order P [--shifted] [--max-m M]
    quadwalks count     MODEL --start u,v --end k,l --steps N

MODEL is a model file path or a bundled corpus name (e.g. ``gb``,
``simple``, ``tandem``).  Structured output is a deterministic key-value
tree with exact scalars; CSV (verify) is the only place decimals appear.

Exit codes: 0 success; 2 parse error; 3 degenerate model; 4 infinite
group; 5 certificate failure; 6 numerator singular at the saddle; 7
precision exhausted; 8 decomposition infeasible; 9 basis degree cap; 10
internal inconsistency; 11 unsupported request; 1 other errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import corpus, expansion, group, model as model_mod, oracle, polyharmonic, saddle
from .errors import (
    DecompositionInfeasible,
    DegenerateModel,
    EngineInconsistency,
    GroupInfinite,
    NoSolutionWithinDegreeBound,
    NotOrbitSummable,
    NotSmallSteps,
    NumeratorSingularAtSaddle,
    ParseError,
    PrecisionInsufficient,
    QuadwalksError,
)
from .field import serialize_scalar
from .laurent import RatFunc
from .model import Model

EXIT_CODES = {
    ParseError: 2,
    DegenerateModel: 3,
    GroupInfinite: 4,
    NotOrbitSummable: 5,
    NumeratorSingularAtSaddle: 6,
    PrecisionInsufficient: 7,
    DecompositionInfeasible: 8,
    NoSolutionWithinDegreeBound: 9,
    EngineInconsistency: 10,
    NotSmallSteps: 11,
    NotImplementedError: 11,
}


def _load_model(spec: str) -> Model:
    reg = corpus.registry()
    if spec in reg:
        return reg[spec]
    if not os.path.exists(spec):
        raise ParseError(f"no model file or bundled model named {spec!r}")
    return model_mod.load_model(spec)


def _load_numerator(path: str, model: Model) -> RatFunc:
    if path in corpus.BUILTIN_NUMERATORS:
        return corpus.BUILTIN_NUMERATORS[path]()
    variables = model_mod.poly_vars(model.dimension)
    with open(path, "r", encoding="utf-8") as fh:
        return RatFunc.parse(fh.read(), variables)


def _parse_point(text: str, dimension: int):
    try:
        point = tuple(int(p) for p in text.replace(",", " ").split())
    except ValueError as exc:
        raise ParseError(f"bad lattice point {text!r}") from exc
    if len(point) != dimension:
        raise ParseError(f"point {text!r} has wrong dimension (need {dimension})")
    return point


class Report:
    """Accumulates an ordered key/value tree with exact leaves."""

    def __init__(self):
        self.lines: list[tuple[int, str, str]] = []

    def add(self, key: str, value, indent: int = 0):
        self.lines.append((indent, key, value))

    def human(self) -> str:
        out = []
        for indent, key, value in self.lines:
            pad = "  " * indent
            out.append(f"{pad}{key}: {value}" if value != "" else f"{pad}{key}")
        return "\n".join(out) + "\n"

    def structured(self) -> str:
        # identical data; stable machine-oriented spelling
        out = []
        for indent, key, value in self.lines:
            out.append("." * indent + key.replace(" ", "_") + " = " + str(value))
        return "\n".join(out) + "\n"


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    model = _load_model(args.model)
    rep = Report()
    rep.add("model", model.name or args.model)
    rep.add("dimension", model.dimension)
    rep.add("steps", len(model.steps))
    diag = model_mod.diagnose(model)
    rep.add("drift", " ".join(serialize_scalar(x) for x in diag.drift))
    rep.add("nondegenerate", diag.nondegenerate)
    if not diag.nondegenerate:
        rep.add("error", "DegenerateModel")
        _emit(args, rep.human() if args.format == "human" else rep.structured())
        return EXIT_CODES[DegenerateModel]
    rep.add("period", diag.period)
    if diag.theta is not None:
        rep.add("theta cos", serialize_scalar(diag.theta.cos_value)
                if not hasattr(diag.theta.cos_value, "iv") else str(diag.theta.cos_value))
        rep.add("pi_over_theta", diag.pi_over_theta)
    status = 0
    if model.dimension == 2 and model.small_steps:
        try:
            elements = group.group_closure(model)
            rep.add("group order", len(elements))
            cert = group.certify_orbit_summable(model, depth=args.depth)
            rep.add("orbit summable", cert.passed)
            rep.add("certificate depth", cert.depth, 1)
            rep.add("certificate checks", cert.checked, 1)
            if not cert.passed:
                rep.add("counterexample", str(cert.counterexample), 1)
                status = EXIT_CODES[NotOrbitSummable]
        except GroupInfinite as exc:
            rep.add("group order", f"infinite ({exc})")
            status = EXIT_CODES[GroupInfinite]
    else:
        rep.add("group order", "not computed (needs 2-d small steps)")
    system = saddle.saddle_system(model)
    rep.add("dominant saddle", " ".join(serialize_scalar(x) for x in system.dominant))
    rep.add("gamma", serialize_scalar(system.gamma))
    rep.add("twists", len(system.twists))
    for i, tw in enumerate(system.twists):
        alphas = " ".join(str(a.exponent) for a in tw.alphas)
        rep.add(f"twist {i}", f"{alphas} | zeta {tw.zeta.exponent}", 1)
    _emit(args, rep.human() if args.format == "human" else rep.structured())
    return status


def _expansion_for(args, model: Model):
    numerator = None
    if getattr(args, "numerator", None):
        numerator = _load_numerator(args.numerator, model)
    elif model.name in corpus.BUILTIN_NUMERATORS:
        numerator = corpus.BUILTIN_NUMERATORS[model.name]()
    start = _parse_point(args.start, model.dimension) if args.start else None
    if numerator is None and model.dimension == 2 and model.small_steps:
        cert = group.certify_orbit_summable(model, *(start or (0, 0)), depth=args.depth)
        if not cert.passed:
            raise NotOrbitSummable(f"certificate failed: {cert.counterexample}")
    return expansion.assemble_expansion(
        model, numerator=numerator, order=args.order, start=start
    )


def cmd_expand(args) -> int:
    model = _load_model(args.model)
    exp = _expansion_for(args, model)
    if args.format == "structured":
        _emit(args, exp.serialize())
        return 0
    rep = Report()
    rep.add("model", model.name or args.model)
    rep.add("gamma", serialize_scalar(exp.gamma))
    rep.add("c", exp.c)
    rep.add("pi_power", exp.pi_power)
    rep.add("start", " ".join(map(str, exp.start)))
    rep.add("prefactor", " ".join(serialize_scalar(b) for b in exp.exp_prefactor))
    for i, tw in enumerate(exp.twists):
        alphas = " ".join(str(a.exponent) for a in tw.alphas)
        rep.add(f"twist {i}", f"{alphas} | zeta {tw.zeta.exponent}", 1)
    for p in range(1, exp.order + 1):
        rep.add(f"v_{p}", "", 0)
        for e, c in exp.v(p).iter_sorted():
            mono = "*".join(
                f"{v}^{a}" if a > 1 else v
                for v, a in zip(exp.endpoint_variables, e)
                if a
            )
            rep.add(mono or "1", serialize_scalar(c), 1)
    _emit(args, rep.human())
    return 0


def cmd_verify(args) -> int:
    model = _load_model(args.model)
    exp = _expansion_for(args, model)
    endpoint = _parse_point(args.endpoint, model.dimension) if args.endpoint else (0,) * model.dimension
    nmax = args.nmax
    table = oracle.count_paths(model, exp.start, nmax)
    n_values = range(max(1, nmax // 6), nmax + 1)
    report = oracle.convergence_diagnostics(
        exp, table, endpoint, order=args.order, n_values=n_values, precision=args.precision
    )
    _emit(args, report.to_csv())
    ok = report.passed(rel_tol=args.tolerance)
    if not ok:
        sys.stderr.write("verify: tolerance violated\n")
    return 0 if ok else 1


def cmd_decompose(args) -> int:
    model = _load_model(args.model)
    offset = 1 if args.shifted else 0
    mv = expansion.interpolate_vp(model, order=args.order)
    basis = polyharmonic.build_basis(
        model, max_n=args.order, max_m=args.max_m, origin_offset=offset
    )
    adjoint = polyharmonic.build_basis(
        model_mod.reverse(model), max_n=args.order, max_m=args.max_m, origin_offset=offset
    )
    rep = Report()
    rep.add("model", model.name or args.model)
    rep.add("order", args.order)
    rep.add("basis ladder", basis.ladder_checked)
    for p in range(1, args.order + 1):
        vp = mv.v(p)
        if args.shifted:
            vp = _shift_poly_down(vp)
        dec = polyharmonic.decompose(vp, basis, adjoint, p)
        rep.add(f"v_{p} decomposition", "")
        for (n, m, n2, m2), c in sorted(dec.coefficients.items()):
            rep.add(f"h_{n}^{m} x g_{n2}^{m2}", serialize_scalar(c), 1)
        rep.add("summands", dec.summand_count(), 1)
        rep.add("residual", 0, 1)
    _emit(args, rep.human() if args.format == "human" else rep.structured())
    return 0


def _shift_poly_down(poly):
    """Substitute w -> w - 1 in every variable (unshifted -> shifted)."""
    from .laurent import LaurentPoly

    out = LaurentPoly.constant(poly.vars, 0)
    n = len(poly.vars)
    for e, c in poly.terms.items():
        term = LaurentPoly.constant(poly.vars, c)
        for i, a in enumerate(e):
            unit = LaurentPoly(
                poly.vars,
                {tuple(1 if j == i else 0 for j in range(n)): Fraction(1), (0,) * n: Fraction(-1)},
            )
            term = term * unit ** a
        out = out + term
    return out


def cmd_count(args) -> int:
    model = _load_model(args.model)
    start = _parse_point(args.start, model.dimension)
    end = _parse_point(args.end, model.dimension)
    table = oracle.count_paths(model, start, args.steps)
    value = table.count(end, args.steps)
    _emit(args, serialize_scalar(value) + "\n")
    return 0


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadwalks",
        description="Exact asymptotics of orthant lattice walks via orbit sums",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("model", help="model file path or bundled model name")
        p.add_argument("--format", choices=("human", "structured"), default="human")
        p.add_argument("--out", help="write the report to a file")
        p.add_argument("--depth", type=int, default=8, help="certificate depth")

    p = sub.add_parser("analyze", help="diagnostics, group, certificate, saddle data")
    common(p)

    p = sub.add_parser("expand", help="asymptotic expansion of the walk counts")
    common(p)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--start", help="starting point, e.g. 0,0")
    p.add_argument("--numerator", help="numerator file for large-step/3-d models")

    p = sub.add_parser("verify", help="compare the expansion against exact counts")
    common(p)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--start", help="starting point")
    p.add_argument("--numerator")
    p.add_argument("--endpoint", help="endpoint, e.g. 0,0")
    p.add_argument("--nmax", type=int, default=120)
    p.add_argument("--precision", type=int, default=128, help="working precision (bits)")
    p.add_argument("--tolerance", type=float, default=1e-2)

    p = sub.add_parser("decompose", help="decompose coefficients over a ladder basis")
    common(p)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--max-m", type=int, default=3)
    p.add_argument("--shifted", action="store_true", help="work on the shifted quadrant")

    p = sub.add_parser("count", help="exact path count")
    common(p)
    p.add_argument("--start", required=True)
    p.add_argument("--end", required=True)
    p.add_argument("--steps", "-n", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "analyze": cmd_analyze,
        "expand": cmd_expand,
        "verify": cmd_verify,
        "decompose": cmd_decompose,
        "count": cmd_count,
    }[args.command]
    try:
        return handler(args)
    except QuadwalksError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_CODES.get(type(exc), 1)
    except NotImplementedError as exc:
        sys.stderr.write(f"unsupported: {exc}\n")
        return 11


if __name__ == "__main__":
    sys.exit(main())
