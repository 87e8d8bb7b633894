"""Command-line front end: ``hodge-bounds <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Optional, Sequence

from .algebra import HodgeVar, MultiPoly, format_rational
from .analysis import (
    InfeasibleProfile, QuadraticFormError, RegularityInapplicable, SearchCeilingExceeded,
    asymptotic_check, asymptotic_tsv, check_diamond, minimize_hodge_number, regularity_bound,
    solve_quadratic_bound,
)
from .derivative import HypothesisError, SeriesKind, chern_series
from .diamond import (
    DiamondError, HodgeDiamond, ManifoldProfile, ProfileError, canonical_var, parse_m, validate_diamond,
)
from .positivity import NONNEG, Constraint, build_catalog
from .reproduce import Verdict, reproduce_rows

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_PARSE = 2
EXIT_SYMMETRY = 3

_VAR_RE = re.compile(r"^\s*(?:h\s*\[?\s*(\d+)\s*,?\s*(\d+)\s*\]?|q)\s*$")


class UsageError(ValueError):
    pass


def parse_var(text: str) -> HodgeVar:
    """Accepts ``q``, ``h[1,2]``, ``h12`` or ``h1,2``."""
    m = _VAR_RE.match(text)
    if not m:
        raise UsageError(f"cannot parse Hodge variable {text!r}")
    if m.group(1) is None:
        return HodgeVar(0, 1)
    return HodgeVar(int(m.group(1)), int(m.group(2)))


def _profile(args, q_optional: bool = False) -> ManifoldProfile:
    try:
        m = parse_m(args.m)
    except ValueError:
        raise UsageError(f"invalid m {args.m!r}") from None
    q = args.q
    if q is None and not q_optional:
        raise UsageError("-q is required")
    albanese = None
    if getattr(args, "k", None) is not None or getattr(args, "f", None) is not None:
        if args.k is None or args.f is None:
            raise UsageError("-k and -f go together")
        albanese = (args.k, args.f)
    try:
        return ManifoldProfile(args.d, q, m, albanese)
    except ProfileError as exc:
        raise UsageError(str(exc)) from None


def _add_profile(p: argparse.ArgumentParser, q_required: bool = True) -> None:
    p.add_argument("-d", type=int, required=True, help="complex dimension")
    p.add_argument("-q", type=int, required=False, default=None,
                   help="irregularity" + ("" if q_required else " (omit for symbolic q)"))
    p.add_argument("-m", required=True, help="zero-locus invariant: integer in [1, d] or inf")
    p.add_argument("-k", type=int, default=None, help="generic Albanese fiber dimension")
    p.add_argument("-f", type=int, default=None, help="maximal Albanese fiber dimension")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# --- gen ---------------------------------------------------------------------


def _catalog_text(cat, fmt: str) -> str:
    cons = cat.constraints
    if fmt == "json":
        return _dump(cat.to_json())
    if fmt == "tsv":
        lines = ["p\trelation\texpr\thypotheses\tguard\tprovenance"]
        for c in cons:
            guard = "" if c.guard is None else f"{c.guard.rank} < {c.guard.below}"
            lines.append("\t".join([str(c.p), c.relation, str(c.expr), "; ".join(map(str, c.hypotheses)),
                                    guard, "; ".join(c.provenance)]))
        lines += [f"tail\t\t\t\t\t{t.label}" for t in cat.tails]
        return "\n".join(lines) + "\n"
    if fmt == "latex":
        lines = [f"% weight cap {cat.weight_cap}"]
        for c in cons:
            lines.append(f"{c.latex()} \\\\ % {'; '.join(c.provenance)}")
        lines += [f"% numeric check: {t.label}" for t in cat.tails]
        return "\n".join(lines) + "\n"
    lines = [f"# weight cap {cat.weight_cap}"]
    for c in cons:
        hyps = ", ".join(map(str, c.hypotheses))
        lines.append(f"[p={c.p}] {c.describe()}    ({hyps}) {{{'; '.join(c.provenance)}}}")
    lines += [f"[tail] {t.label}" for t in cat.tails]
    return "\n".join(lines) + "\n"


def cmd_gen(args) -> int:
    pf = _profile(args, q_optional=True)
    if pf.q is None and args.schur_cap is None:
        raise UsageError("symbolic q needs --schur-cap")
    ps = None
    if args.p != "all":
        try:
            k = int(args.p)
        except ValueError:
            raise UsageError(f"--p must be 'all' or an integer, got {args.p!r}") from None
        if not 0 <= k <= pf.d:
            raise UsageError(f"p={k} outside [0, {pf.d}]")
        ps = [k]
    cat = build_catalog(pf, args.schur_cap, ps)
    _emit(_catalog_text(cat, args.format), args.output)
    return EXIT_OK


# --- check -------------------------------------------------------------------


def cmd_check(args) -> int:
    try:
        with open(args.diamond, encoding="utf-8") as fh:
            dm = HodgeDiamond.loads(fh.read())
    except (OSError, DiamondError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    if dm.d != args.d:
        sys.stderr.write(f"error: diamond has dimension {dm.d}, profile has {args.d}\n")
        return EXIT_PARSE
    if args.q is None:
        args.q = dm[1, 0] if dm.d >= 1 else None
    pf = _profile(args)
    report = validate_diamond(dm, pf)
    if not report.valid:
        sys.stderr.write(f"error: {report}\n")
        return EXIT_SYMMETRY
    cat = build_catalog(pf, args.schur_cap)
    res = check_diamond(dm, pf, cat)
    if args.format == "json":
        _emit(_dump(res.to_json()), args.output)
    else:
        lines = [res.summary()]
        for r in res.violations():
            lines.append(f"VIOLATED {r.constraint.describe()}  margin {format_rational(r.margin)}"
                         f"  {{{'; '.join(r.constraint.provenance)}}}")
        for t in res.tails:
            for key, val, why in t.failures:
                lines.append(f"VIOLATED {t.tail.label} at {key}: {why} ({val})")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


# --- solve -------------------------------------------------------------------


def _series_kind(text: str) -> SeriesKind:
    try:
        return SeriesKind(text)
    except ValueError:
        raise UsageError(f"unknown series {text!r}") from None


def cmd_solve(args) -> int:
    target = parse_var(args.target)
    if args.expr is not None:
        try:
            expr = MultiPoly.parse(args.expr)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        d = args.d
        if d is not None:
            from .diamond import canonicalize
            expr = canonicalize(expr, d)
            target = _canonical(d, target)
    else:
        if args.series is None or args.p is None or args.index is None or args.d is None:
            raise UsageError("give --expr, or -d/-m with --series, --p and --index")
        pf = _profile(args, q_optional=True)
        cs = chern_series(_series_kind(args.series), pf, args.p, max(args.index + 1, 2))
        expr = cs.series[args.index]
        target = _canonical(pf.d, target)
    try:
        bound = solve_quadratic_bound(Constraint(expr, NONNEG), target)
    except QuadraticFormError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INFEASIBLE
    if args.format == "json":
        out = bound.to_json()
        out["side_conditions"] = list(bound.side_conditions)
        _emit(_dump(out), args.output)
    elif args.format == "latex":
        _emit(bound.latex() + "\n", args.output)
    else:
        _emit(str(bound) + "\n", args.output)
    return EXIT_OK


def _canonical(d: int, v: HodgeVar) -> HodgeVar:
    rep = canonical_var(d, v)
    if not isinstance(rep, HodgeVar):
        raise UsageError(f"{v} is the constant 1")
    return rep


# --- min ---------------------------------------------------------------------


def _parse_fix(items: Sequence[str]) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--fix expects VAR=VALUE, got {item!r}")
        name, val = item.split("=", 1)
        try:
            out[parse_var(name)] = int(val)
        except ValueError:
            raise UsageError(f"--fix value must be an integer, got {val!r}") from None
    return out


def cmd_min(args) -> int:
    pf = _profile(args)
    target = _canonical(pf.d, parse_var(args.target))
    try:
        res = minimize_hodge_number(target, pf, _parse_fix(args.fix), weight_cap=args.schur_cap,
                                    include_tails=not args.no_tails, sweep_radius=args.sweep_radius)
    except (SearchCeilingExceeded, InfeasibleProfile) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INFEASIBLE
    if args.format == "json":
        _emit(_dump(res.to_json()), args.output)
    else:
        lines = [f"min {res.target} = {res.value} (catalog-relative, weight cap {res.weight_cap})"]
        lines.append("witness: " + ", ".join(f"{v}={x}" for v, x in sorted(res.witness.items())))
        for c in res.binding:
            lines.append(f"binding: {c.describe()}  {{{'; '.join(c.provenance)}}}")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# --- series ------------------------------------------------------------------


def cmd_series(args) -> int:
    pf = _profile(args, q_optional=True)
    order = args.order if args.order is not None else pf.q
    if order is None:
        raise UsageError("symbolic q needs --order")
    dm = None
    if args.diamond:
        try:
            with open(args.diamond, encoding="utf-8") as fh:
                dm = HodgeDiamond.loads(fh.read())
        except (OSError, DiamondError) as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_PARSE
    cs = chern_series(_series_kind(args.kind), pf, args.p, order, dm)
    coeffs = [cs.series[i] for i in range(order)]
    if args.format == "json":
        _emit(_dump({"kind": args.kind, "p": args.p, "order": order, "rank": str(cs.rank),
                     "coefficients": [str(c) for c in coeffs]}), args.output)
    elif args.format == "latex":
        _emit("\n".join(f"c_{{{i}}} = {c.latex()} \\\\" for i, c in enumerate(coeffs)) + "\n", args.output)
    else:
        lines = [f"rank = {cs.rank}"] + [f"c_{i} = {c}" for i, c in enumerate(coeffs)]
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# --- reproduce ---------------------------------------------------------------


def cmd_reproduce(args) -> int:
    rows = reproduce_rows()
    if args.table != "all":
        rows = [r for r in rows if r.section == args.table]
    if args.format == "json":
        text = _dump([r.to_json() for r in rows])
    elif args.format == "tsv":
        lines = ["section\tlabel\td\tpublished\tengine\tverdict"]
        lines += [f"{r.section}\t{r.label}\t{r.d}\t{r.published}\t{r.engine}\t{r.verdict.value}" for r in rows]
        text = "\n".join(lines) + "\n"
    else:
        lines = []
        for r in rows:
            lines.append(f"{r.verdict.value:<11} {r.label}")
            lines.append(f"    published: {r.published}")
            lines.append(f"    engine:    {r.engine}")
            if r.note:
                lines.append(f"    note:      {r.note}")
        n = sum(r.verdict is Verdict.MATCH for r in rows)
        lines.append(f"{n}/{len(rows)} rows match")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if all(r.verdict is Verdict.MATCH for r in rows) else EXIT_INFEASIBLE


# --- regularity / asymptotics ---------------------------------------------------


def cmd_regularity(args) -> int:
    try:
        print(regularity_bound(args.d, args.p, args.k, args.f))
    except RegularityInapplicable as exc:
        print(str(exc))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return EXIT_OK


def cmd_asymptotic(args) -> int:
    target = parse_var(args.target)
    try:
        m = parse_m(args.m)
    except ValueError:
        raise UsageError(f"invalid m {args.m!r}") from None
    try:
        rows = asymptotic_check(args.d, m, target, args.q_values, weight_cap=args.schur_cap,
                                include_tails=args.tails)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(asymptotic_tsv(args.d, _canonical(args.d, target), rows), args.output)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hodge-bounds", description="Hodge-number inequalities for irregular Kähler manifolds.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="print the constraint catalog")
    _add_profile(p, q_required=False)
    p.add_argument("--p", default="all", help="form degree, or 'all'")
    p.add_argument("--schur-cap", type=int, default=None, help="largest partition weight (default min(q-1, 12))")
    p.add_argument("--format", choices=["json", "tsv", "latex", "text"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="test a diamond against the catalog")
    _add_profile(p, q_required=False)
    p.add_argument("--diamond", required=True, help='JSON file {"d": ..., "h": [[...], ...]}')
    p.add_argument("--schur-cap", type=int, default=None)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="closed-form bound from a degree-two constraint")
    p.add_argument("-d", type=int, default=None)
    p.add_argument("-q", type=int, default=None)
    p.add_argument("-m", default=None)
    p.add_argument("--target", required=True)
    p.add_argument("--expr", help="constraint polynomial, read as expr >= 0")
    p.add_argument("--series", choices=[k.value for k in SeriesKind])
    p.add_argument("--p", type=int)
    p.add_argument("--index", type=int)
    p.add_argument("--format", choices=["json", "latex", "text"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve, k=None, f=None)

    p = sub.add_parser("min", help="minimize one Hodge number")
    _add_profile(p)
    p.add_argument("--target", required=True)
    p.add_argument("--fix", action="append", default=[], metavar="VAR=VALUE")
    p.add_argument("--schur-cap", type=int, default=None)
    p.add_argument("--no-tails", action="store_true", help="skip numeric checks above the cap")
    p.add_argument("--sweep-radius", type=int, default=0)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_min)

    p = sub.add_parser("series", help="expand a Chern generating series")
    _add_profile(p, q_required=False)
    p.add_argument("--kind", choices=[k.value for k in SeriesKind], required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--order", type=int, default=None, help="truncation order (default q)")
    p.add_argument("--diamond", default=None, help="substitute a numeric diamond")
    p.add_argument("--format", choices=["json", "latex", "text"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("reproduce", help="engine derivations next to the published forms")
    p.add_argument("--table", choices=["first-order", "second-order", "rank", "all"], default="all")
    p.add_argument("--format", choices=["json", "tsv", "text"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("regularity", help="regularity bound d - p + l")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-f", type=int, required=True)
    p.set_defaults(func=cmd_regularity)

    p = sub.add_parser("asymptotic", help="minimized values against the asymptotic forms (TSV)")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-m", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--q-values", type=int, nargs="+", required=True)
    p.add_argument("--schur-cap", type=int, default=2)
    p.add_argument("--tails", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_asymptotic)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, HypothesisError, ProfileError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
