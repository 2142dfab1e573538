"""Command-line front end.

Example:
  frobstab rank-tl --r 2 --p 3 --l 2
  frobstab instab-tl --profile profile.json --p 3 --l 2 --ctx ctx.json
  frobstab selfcheck --grid full

Exit status: 0 ok, 1 internal invariant breach, 2 invalid input,
3 hypothesis not satisfied (re-run with --force to evaluate anyway).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .citations import Citation
from .errors import (
    FrobstabError,
    HypothesisError,
    InvariantError,
    SlopeOrderError,
    ValidationError,
)
from .forms import bound_bn_subsheaf, check_zi_instability, forms_recurrence, z1_hn, z1_profile
from .frobenius import (
    SheafStats,
    VarietyContext,
    bound_langer_gap,
    bound_pushforward_caseI,
    bound_pushforward_caseII,
    canonical_filtration_ranks,
    deg_pushforward_forms,
    mu_pushforward,
    pushforward_stats,
    stability_advisor,
)
from .hn import HNPolygon, SlopeProfile, dominates, normalize, polygon_of, profile_stats
from .rational import format_rational as fr
from .selfcheck import GRIDS, run_selfcheck
from .truncated import (
    bound_instab_tl,
    bound_tl2,
    dvec,
    instability_tl_exact,
    rank_tl,
    rank_tl_oracle,
    tl2_case_value,
    tl_decomposition,
    tl_extremes,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_HYPOTHESIS = 0, 1, 2, 3

FORCE_BANNER = "HYPOTHESES NOT SATISFIED: evaluated with --force"


def _load_json(arg: str):
    """Inline JSON (starting with ``{``) or a path to a JSON file."""
    text = arg if arg.lstrip().startswith("{") else None
    if text is None:
        path = Path(arg)
        if not path.is_file():
            raise ValidationError(f"no such JSON file: {arg}")
        text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {arg!r}: {exc}") from exc


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ValidationError(f"--{name.replace('_', '-')} is required for {args.command}")


def _profile(args) -> SlopeProfile:
    _need(args, "profile")
    return SlopeProfile.from_json(_load_json(args.profile))


def _ctx(args) -> VarietyContext:
    _need(args, "ctx")
    return VarietyContext.from_json(_load_json(args.ctx))


def _stats(profile: SlopeProfile) -> SheafStats:
    st = profile_stats(profile)
    return SheafStats(profile.total_rank, st.mu, st.instability)


def _bound(value: Fraction, citation: Citation, hypotheses: dict, forced: bool = False) -> dict:
    out = {"value": fr(value), "citation": citation.value, "hypotheses": hypotheses}
    if forced:
        out["warning"] = FORCE_BANNER
    return out


def _gated(fn, force: bool):
    """Run ``fn(force)``; on a hypothesis failure retry forced only if --force was given."""
    try:
        return fn(False), False
    except HypothesisError:
        if not force:
            raise
        return fn(True), True


def _case_one(ctx: VarietyContext, stats: SheafStats, force: bool) -> Fraction:
    if not force and not stats.semistable:
        raise HypothesisError("case I bound requires E slope semistable")
    return bound_pushforward_caseI(ctx, stats.rank, force=force)


# -- subcommands -------------------------------------------------------------


def cmd_rank_tl(args) -> dict:
    _need(args, "r", "p", "l")
    a = rank_tl(args.r, args.p, args.l)
    b = rank_tl_oracle(args.r, args.p, args.l)
    if a != b:
        raise InvariantError(f"rank formula {a} disagrees with enumeration {b}")
    return {"rank": str(a), "oracle": str(b), "agrees": a == b}


def cmd_decomp_tl(args) -> dict:
    _need(args, "p", "l")
    return tl_decomposition(_profile(args), args.p, args.l).to_json()


def cmd_instab_tl(args) -> dict:
    _need(args, "p", "l")
    prof = _profile(args)
    p, l, r = args.p, args.l, prof.total_rank
    hi, lo = tl_extremes(prof, p, l)
    i_e = profile_stats(prof).instability
    out = {
        "p": p,
        "l": l,
        "r": r,
        "dvec": list(dvec(r, p, l)),
        "mu_max": fr(hi),
        "mu_min": fr(lo),
        "instability": fr(instability_tl_exact(prof, p, l)),
        "profile_instability": fr(i_e),
        "case_value": fr(tl2_case_value(r, p, l, i_e)),
        "bound_tl2": _bound(
            bound_tl2(prof, p, l),
            Citation.TL2,
            {"blocks strongly semistable": "assumed"},
        ),
    }
    if args.ctx is not None:
        ctx = _ctx(args)
        if ctx.lmax_omega is None:
            raise ValidationError("context needs lmax_omega for the InstabTl bound")
        out["bound_instab_tl"] = _bound(
            bound_instab_tl(r, p, l, i_e, ctx.lmax_omega),
            Citation.INSTAB_TL,
            {"lmax_omega": fr(ctx.lmax_omega)},
        )
    return out


def cmd_bounds(args) -> dict:
    ctx = _ctx(args)
    stats = _stats(_profile(args))
    which = args.bound
    wanted = {"langer", "caseI", "caseII"} if which == "all" else {which}
    reports: dict = {}
    skipped: dict = {}
    hyp = {
        "mu_omega": fr(ctx.mu_omega),
        "omega_semistable": ctx.omega_semistable,
        "omega_strongly_semistable": ctx.omega_strongly_semistable,
    }

    if "langer" in wanted:
        if ctx.lmax_omega is None:
            if which != "all":
                raise ValidationError("context needs lmax_omega for the Langer gap bound")
            skipped["langer"] = "lmax_omega missing"
        else:
            reports["langer_gap"] = _bound(
                bound_langer_gap(stats.rank, ctx.p, stats.instability, ctx.lmax_omega),
                Citation.LANGER_GAP,
                {"lmax_omega": fr(ctx.lmax_omega)},
            )

    if "caseI" in wanted:
        try:
            val, forced = _gated(lambda f: _case_one(ctx, stats, f), args.force)
        except HypothesisError as exc:
            if which != "all":
                raise
            skipped["caseI"] = str(exc)
        else:
            h = dict(hyp, E_semistable=stats.semistable)
            reports["pushforward_caseI"] = _bound(val, Citation.DIIM_CASE_I, h, forced)

    if "caseII" in wanted:
        if ctx.lmax_omega is None or ctx.i_omega is None:
            if which != "all":
                raise ValidationError("context needs lmax_omega and i_omega for case II")
            skipped["caseII"] = "lmax_omega or i_omega missing"
        else:
            try:
                (per_l, total), forced = _gated(
                    lambda f: bound_pushforward_caseII(ctx, stats, force=f), args.force
                )
            except HypothesisError as exc:
                if which != "all":
                    raise
                skipped["caseII"] = str(exc)
            else:
                rep = _bound(total, Citation.INSTAB_DIRIM, hyp, forced)
                rep["per_l"] = [
                    {"l": l, "value": fr(v), "citation": Citation.TENSOR.value}
                    for l, v in enumerate(per_l)
                ]
                reports["pushforward_caseII"] = rep

    if not reports and skipped and which == "all" and not args.force:
        raise HypothesisError("no bound applies: " + "; ".join(f"{k}: {v}" for k, v in sorted(skipped.items())))
    return {
        "E": {"rank": str(stats.rank), "slope": fr(stats.slope), "instability": fr(stats.instability)},
        "context": ctx.to_json(),
        "bounds": reports,
        "skipped": skipped,
    }


def cmd_pushforward(args) -> dict:
    ctx = _ctx(args)
    stats = _stats(_profile(args))
    led = pushforward_stats(ctx, stats)
    m = args.m
    out = {
        "units": "absolute",
        "rank": str(led.rank),
        "slope": fr(led.slope),
        "degree": fr(led.degree),
        "iterated": {"m": m, "slope": fr(mu_pushforward(ctx, stats.slope, m))},
        "canonical_filtration": [
            {"l": s.l, "rank": str(s.rank), "slope": fr(stats.slope + s.slope_offset)}
            for s in canonical_filtration_ranks(ctx, stats.rank)
        ],
        "forms": [],
    }
    for i in range(ctx.n + 1):
        rk, deg = deg_pushforward_forms(ctx, i)
        out["forms"].append({"i": i, "rank": str(rk), "degree": fr(deg)})
    return out


def cmd_forms(args) -> dict:
    _need(args, "n", "p")
    table = forms_recurrence(args.n, args.p)
    out = table.to_json()
    out["units"] = "mu(Omega^1_X)"
    out["citation"] = Citation.BXZX.value
    if args.r is not None:
        out["bn_subsheaf_bound"] = _bound(
            bound_bn_subsheaf(args.n, args.p, args.r, 1),
            Citation.BNX,
            {"mu_omega": "> 0 assumed", "T^l(Omega^1) semistable": "assumed"},
        )
        out["bn_subsheaf_bound"]["r_b"] = args.r
    return out


def cmd_check_zi(args) -> dict:
    _need(args, "n", "p")
    n, p = args.n, args.p
    table = forms_recurrence(n, p)
    idx = [args.i] if args.i is not None else range(1, n)
    verdicts = []
    for i in idx:
        v = check_zi_instability(n, p, i, table).to_json()
        v["citation"] = Citation.INST_ZIX.value
        verdicts.append(v)
    out = {"n": n, "p": p, "units": "mu(Omega^1_X)", "verdicts": verdicts}
    if n >= 3:
        try:
            out["z1_filtration"] = {
                "polygon": z1_hn(n, p).to_json(),
                "citation": Citation.INST_ZIX.value,
            }
        except SlopeOrderError as exc:
            out["z1_filtration"] = {
                "error": str(exc),
                "profile": z1_profile(n, p).to_json(),
                "citation": Citation.INST_ZIX.value,
            }
    return out


def cmd_hnp(args) -> dict:
    prof = _profile(args)
    norm = normalize(prof)
    st = profile_stats(prof)
    poly = polygon_of(norm)
    out = {
        "normalized": norm.to_json(),
        "mu": fr(st.mu),
        "mu_max": fr(st.mu_max),
        "mu_min": fr(st.mu_min),
        "instability": fr(st.instability),
        "polygon": poly.to_json(),
    }
    if args.against is not None:
        data = _load_json(args.against)
        other = (
            HNPolygon.from_json(data)
            if "vertices" in data
            else polygon_of(normalize(SlopeProfile.from_json(data)))
        )
        out["against"] = other.to_json()
        out["dominates"] = dominates(poly, other)
        out["dominated_by"] = dominates(other, poly)
        out["dominates_equal_degree"] = dominates(poly, other, equal_degree=True)
    return out


def cmd_advisor(args) -> dict:
    ctx = _ctx(args)
    advice = stability_advisor(
        ctx,
        e_strongly_semistable=args.e_strongly_semistable,
        e_semistable=args.e_semistable,
        mu_max_omega_nonpositive=args.mu_max_omega_nonpositive,
    )
    return {
        "context": ctx.to_json(),
        "E": {"semistable": args.e_semistable, "strongly_semistable": args.e_strongly_semistable},
        "conclusions": [{"conclusion": a.conclusion, "citation": a.citation.value} for a in advice],
    }


def cmd_selfcheck(args) -> dict:
    return run_selfcheck(args.grid, args.seed)


COMMANDS = {
    "rank-tl": cmd_rank_tl,
    "decomp-tl": cmd_decomp_tl,
    "instab-tl": cmd_instab_tl,
    "bounds": cmd_bounds,
    "pushforward": cmd_pushforward,
    "forms": cmd_forms,
    "check-zi": cmd_check_zi,
    "hnp": cmd_hnp,
    "advisor": cmd_advisor,
    "selfcheck": cmd_selfcheck,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--force", action="store_true", help="evaluate outside stated hypotheses")

    ap = argparse.ArgumentParser(prog="frobstab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("rank-tl",):
            sp.add_argument("--r", type=int)
        if name in ("rank-tl", "decomp-tl", "instab-tl", "forms", "check-zi"):
            sp.add_argument("--p", type=int)
        if name in ("rank-tl", "decomp-tl", "instab-tl"):
            sp.add_argument("--l", type=int)
        if name in ("forms", "check-zi"):
            sp.add_argument("--n", type=int)
        if name == "forms":
            sp.add_argument("--r", type=int, help="rank of a subsheaf of F_*omega for the B^n bound")
        if name == "check-zi":
            sp.add_argument("--i", type=int)
        if name in ("decomp-tl", "instab-tl", "bounds", "pushforward", "hnp"):
            sp.add_argument("--profile", help="profile JSON file or inline JSON")
        if name in ("instab-tl", "bounds", "pushforward", "advisor"):
            sp.add_argument("--ctx", help="variety context JSON file or inline JSON")
        if name == "bounds":
            sp.add_argument("--bound", choices=("all", "langer", "caseI", "caseII"), default="all")
        if name == "pushforward":
            sp.add_argument("--m", type=int, default=1)
        if name == "hnp":
            sp.add_argument("--against", help="polygon or profile JSON to compare with")
        if name == "advisor":
            sp.add_argument("--e-semistable", action="store_true")
            sp.add_argument("--e-strongly-semistable", action="store_true")
            sp.add_argument("--mu-max-omega-nonpositive", action="store_true")
        if name == "selfcheck":
            sp.add_argument("--grid", choices=sorted(GRIDS), default="small")
            sp.add_argument("--seed", type=int, default=None)
    return ap


def render_json(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def render_table(report, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for key in sorted(report):
            val = report[key]
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                lines.append(render_table(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
    elif isinstance(report, list):
        for item in report:
            if isinstance(item, dict):
                flat = ", ".join(f"{k}={_scalar(item[k])}" for k in sorted(item) if not isinstance(item[k], (dict, list)))
                lines.append(f"{pad}- {flat}")
                nested = {k: v for k, v in item.items() if isinstance(v, (dict, list)) and v}
                if nested:
                    lines.append(render_table(nested, indent + 2))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(report)}")
    return "\n".join(lines)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def _failed(report: dict) -> bool:
    return "summary" in report and report["summary"].get("failed", 0) > 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except HypothesisError as exc:
        print(f"hypothesis not satisfied: {exc} (use --force to evaluate anyway)", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (ValidationError, FrobstabError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = render_json(report) if args.format == "json" else render_table(report)
    sys.stdout.write(out + "\n")
    return EXIT_INTERNAL if _failed(report) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
