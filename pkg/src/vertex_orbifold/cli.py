"""Command-line driver: ``vertex-orbifold <command> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .algebras import heisenberg_virasoro, sugawara
from .coefficients import render_rational, render_scalar
from .dsl import DSLError, builtin_algebra, parse_algebra, parse_field
from .genericity import LimitError, orbifold_generators, structure_constants, large_level_limit
from .kernel import SpecError, nproduct, ope, wick
from .orbifold import (
    GeneratorSet,
    OrbifoldError,
    decouple,
    heisenberg_generating_set,
    primary_correct,
    strong_span_check,
)
from .suites import SL2_EXPECTED_POLES, SUITES, SuiteConfig, run_suite

BUILTIN_GENS = {
    "h1": ("heisenberg", 1, "w11"),
    "h2": ("heisenberg", 2, "w11"),
    "h2-w22": ("heisenberg", 2, "w22"),
    "h3": ("heisenberg", 3, "w11"),
    "sl2": ("sl2-eigen", None, None),
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument resolution


def load_algebra(text):
    """``heisenberg:N``, ``sl2``, ``sl2-eigen`` or a DSL file path."""
    if text.startswith("heisenberg:"):
        n = text.split(":", 1)[1]
        if not n.isdigit() or int(n) < 1:
            raise UsageError(f"bad heisenberg rank in {text!r}")
        return builtin_algebra("heisenberg", int(n))
    if text in ("sl2", "sl2-eigen"):
        return builtin_algebra(text)
    path = Path(text)
    if not path.is_file():
        raise UsageError(f"no such algebra or file: {text!r}")
    return parse_algebra(path.read_text(encoding="utf-8"))


def builtin_generators(name):
    if name not in BUILTIN_GENS:
        raise UsageError(f"unknown builtin generator set {name!r}; choose from {', '.join(BUILTIN_GENS)}")
    kind, n, conv = BUILTIN_GENS[name]
    if kind == "heisenberg":
        spec = builtin_algebra("heisenberg", n)
        fields, names = heisenberg_generating_set(spec, conv)
        return GeneratorSet(fields, names)
    return orbifold_generators(builtin_algebra("sl2-eigen"))


def resolve_generators(text, spec):
    """``builtin:NAME`` or a ';'-separated list of field expressions."""
    if text.startswith("builtin:"):
        gs = builtin_generators(text.split(":", 1)[1])
        if spec is not None and not spec.same_structure(gs.spec):
            raise UsageError("builtin generator set belongs to a different algebra")
        return gs
    if spec is None:
        raise UsageError("--algebra is required with an explicit generator list")
    parts = [p.strip() for p in text.split(";") if p.strip()]
    if not parts:
        raise UsageError("empty generator list")
    fields = [parse_field(p, spec) for p in parts]
    return GeneratorSet(fields, [f"g{i}" for i in range(1, len(fields) + 1)])


def _spec_arg(args, gs=None):
    if args.algebra:
        return load_algebra(args.algebra)
    if gs is not None:
        return gs.spec
    raise UsageError("--algebra is required")


def _field(spec, text):
    return parse_field(text, spec)


def _render(f):
    return str(f)


def _emit(args, text_lines, payload):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# commands


def cmd_ope(args):
    spec = _spec_arg(args)
    a, b = _field(spec, args.a), _field(spec, args.b)
    terms = ope(a, b)
    lines = [f"{n}: {_render(f)}" for n, f in terms] or ["regular"]
    _emit(args, lines, {"ope": {str(n): _render(f) for n, f in terms}})
    return 0


def cmd_nprod(args):
    spec = _spec_arg(args)
    f = nproduct(_field(spec, args.a), _field(spec, args.b), args.n)
    _emit(args, [_render(f)], {"n": args.n, "result": _render(f)})
    return 0


def cmd_wick(args):
    spec = _spec_arg(args)
    f = wick(_field(spec, args.a), _field(spec, args.b))
    _emit(args, [_render(f)], {"result": _render(f)})
    return 0


def cmd_decouple(args):
    spec = load_algebra(args.algebra) if args.algebra else None
    gs = resolve_generators(args.gens, spec)
    target = _field(gs.spec, args.target)
    res = decouple(target, gs)
    payload = res.to_json()
    payload["generators"] = {nm: _render(f) for nm, f in zip(gs.names, gs.fields)}
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    lines = [f"target: {_render(target)}"]
    if res.success:
        lines.append(f"= {res.render_expression()}")
        if res.denominators:
            lines.append("denominators: " + ", ".join(sorted(render_scalar(d) for d in res.denominators)))
    else:
        lines.append(f"no decoupling; residual {_render(res.residual)}")
    _emit(args, lines, payload)
    return 0 if res.success else 1


def _virasoro(spec):
    if spec.dual_coxeter is not None and spec.bilinear_form is not None and spec.symbolic_level:
        return sugawara(spec)
    if all(g.weight == 1 for g in spec.generators) and _is_heisenberg(spec):
        return heisenberg_virasoro(spec)
    raise UsageError("no Virasoro field known for this algebra")


def _is_heisenberg(spec):
    for (i, j), row in spec.table.items():
        if set(row) - {1} or (1 in row and set(row[1]) != {()}):
            return False
    return True


def cmd_primary(args):
    spec = _spec_arg(args)
    f = _field(spec, args.field)
    L = _virasoro(spec)
    if args.lower:
        gs = resolve_generators(args.lower, spec)
    else:
        w = f.weight()
        if _is_heisenberg(spec):
            fields, names = heisenberg_generating_set(spec)
        else:
            full = orbifold_generators(spec)
            fields, names = full.fields, full.names
        keep = [(x, nm) for x, nm in zip(fields, names) if x.weight() < w]
        if not keep:
            raise UsageError("no lower-weight generators; pass --lower")
        gs = GeneratorSet([x for x, _ in keep], [nm for _, nm in keep])
    res = primary_correct(f, L, gs)
    lines = [f"field: {_render(f)}"]
    if res.success:
        lines.append(f"correction: {res.render_correction() if res.correction else '0'}")
        lines.append(f"primary: {_render(res.corrected)}")
    else:
        lines.append("no primary correction in the ansatz space")
    payload = {
        "field": _render(f),
        "correction": res.render_correction() if res.correction else "0",
        "primary": _render(res.corrected) if res.success else None,
        "success": res.success,
    }
    _emit(args, lines, payload)
    return 0 if res.success else 1


def cmd_span(args):
    spec = load_algebra(args.algebra) if args.algebra else None
    gs = resolve_generators(args.gens, spec)
    rows = strong_span_check(gs, args.cutoff, witness=True)
    lines = []
    for r in rows:
        status = "full" if r.full else "deficient"
        line = f"weight {r.weight}: {r.spanned}/{r.ambient} {status} ({r.words} words, {r.certificate})"
        if r.witness is not None:
            line += f" missing {gs.spec.monomial(list(r.witness))}"
        lines.append(line)
    payload = {
        "generators": list(gs.names),
        "rows": [
            {"weight": r.weight, "spanned": r.spanned, "ambient": r.ambient, "words": r.words, "full": r.full}
            for r in rows
        ],
    }
    _emit(args, lines, payload)
    return 0 if all(r.full for r in rows) else 1


def cmd_poles(args):
    spec = load_algebra(args.algebra)
    sl2_like = spec.same_structure(builtin_algebra("sl2")) or spec.same_structure(builtin_algebra("sl2-eigen"))
    if args.gens:
        gs = resolve_generators(args.gens, spec)
    elif sl2_like:
        gs = builtin_generators("sl2")
    else:
        gs = GeneratorSet([spec.gen(i) for i in range(spec.rank)], [g.name for g in spec.generators])
    report = structure_constants(gs)
    poles = "{" + ", ".join(render_rational(p) for p in report.poles) + "}"
    lines = [f"generators: {', '.join(gs.names)}", f"products: {len(report.entries)}", f"poles: {poles}"]
    lines.append("residual factors: " + (", ".join(render_scalar(f) for f in report.residual_factors) or "none"))
    for p in report.poles:
        src = ", ".join(f"{a} o{n} {b}" for a, b, n in report.pole_sources[p])
        lines.append(f"  {render_rational(p)}: {src}")
    ok = report.success and not report.residual_factors
    if sl2_like and not args.gens:
        expected = tuple(sorted(SL2_EXPECTED_POLES))
        match = tuple(report.poles) == expected
        lines.append(
            "reference set {" + ", ".join(render_rational(p) for p in expected) + "}: " + ("match" if match else "MISMATCH")
        )
        ok = ok and match
    if report.failures:
        lines.append(f"failed products: {report.failures}")
    payload = report.to_json()
    payload["ok"] = ok
    _emit(args, lines, payload)
    return 0 if ok else 1


def cmd_limit(args):
    spec = load_algebra(args.algebra)
    try:
        rep = large_level_limit(spec)
    except LimitError as exc:
        _emit(args, [f"limit fails: {exc}"], {"ok": False, "error": str(exc)})
        return 1
    names = [g.name for g in rep.limit.generators]
    lines = ["limit OPE (Gram matrix):"]
    for i, row in enumerate(rep.limit.bilinear_form):
        lines.append(f"  {names[i]}: " + " ".join(str(x) for x in row))
    lines.append(f"coefficients checked: {rep.checked}")
    lines.append(f"matches Gram form: {'yes' if rep.matches_gram else 'no'}")
    payload = {
        "gram": [[str(x) for x in row] for row in rep.limit.bilinear_form],
        "generators": names,
        "checked": rep.checked,
        "ok": rep.matches_gram,
    }
    _emit(args, lines, payload)
    return 0 if rep.matches_gram else 1


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for nm in names:
        if nm not in SUITES:
            raise UsageError(f"unknown suite {nm!r}; choose from {', '.join(SUITES)} or all")
    cfg = SuiteConfig(cutoff=args.cutoff, k0=args.k0, oracle=not args.no_oracle)
    results = [run_suite(nm, cfg) for nm in names]
    lines = []
    for r in results:
        lines.extend(r.lines())
    payload = [r.to_json() for r in results] if len(results) > 1 else results[0].to_json()
    _emit(args, lines, payload)
    return 0 if all(r.ok for r in results) else 1


# ---------------------------------------------------------------------------


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="vertex-orbifold", description="Exact vertex algebra and orbifold computations.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def algebra_opt(sp, required=False):
        sp.add_argument("--algebra", required=required, help="heisenberg:N, sl2, sl2-eigen or a DSL file")
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    sp = sub.add_parser("ope", help="all singular products a o_n b")
    algebra_opt(sp, True)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.set_defaults(func=cmd_ope)

    sp = sub.add_parser("nprod", help="a o_n b for any integer n")
    algebra_opt(sp, True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.set_defaults(func=cmd_nprod)

    sp = sub.add_parser("wick", help="normally ordered product :a b:")
    algebra_opt(sp, True)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.set_defaults(func=cmd_wick)

    sp = sub.add_parser("decouple", help="express a field through generator words")
    algebra_opt(sp)
    sp.add_argument("--target", required=True)
    sp.add_argument("--gens", required=True, help="builtin:h1|h2|h2-w22|h3|sl2 or 'expr; expr; ...'")
    sp.add_argument("--out", help="write the JSON record here")
    sp.set_defaults(func=cmd_decouple)

    sp = sub.add_parser("primary", help="correct a field to a Virasoro primary")
    algebra_opt(sp, True)
    sp.add_argument("--field", required=True)
    sp.add_argument("--lower", help="ansatz generators (default: lower-weight builtin generators)")
    sp.set_defaults(func=cmd_primary)

    sp = sub.add_parser("span", help="per-weight strong generation check")
    algebra_opt(sp)
    sp.add_argument("--gens", required=True)
    sp.add_argument("--cutoff", type=int, required=True)
    sp.set_defaults(func=cmd_span)

    sp = sub.add_parser("poles", help="structure constants and their poles in k")
    algebra_opt(sp, True)
    sp.add_argument("--gens")
    sp.set_defaults(func=cmd_poles)

    sp = sub.add_parser("verify", help="run a named identity suite")
    sp.add_argument("--suite", required=True, help=", ".join(SUITES) + " or all")
    sp.add_argument("--cutoff", type=int, default=6)
    sp.add_argument("--k0", type=_fraction, default=Fraction(5))
    sp.add_argument("--no-oracle", action="store_true", help="skip the Fock-module re-verification")
    sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("limit", help="large-level limit of an affine algebra")
    algebra_opt(sp, True)
    sp.set_defaults(func=cmd_limit)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DSLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SpecError, OrbifoldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
