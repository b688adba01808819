"""Dirichlet-improvability commands: di, singular, dichotomy."""

from __future__ import annotations

import logging

from commands import CommandBlueprint, CommandResult, arg, check_arity, int_range
from utils.improvability import DEFAULT_WINDOW, di_report, rationality_dichotomy_experiment, singular_probe

logger = logging.getLogger(__name__)

bp = CommandBlueprint("improvability", __name__)


@bp.command(
    "di",
    help="exact DI(k, e^-s) verdicts over a range of m",
    arguments=[
        arg("--d", type=int),
        arg("--k", type=int, default=1),
        arg("--s", type=int, required=True),
        arg("--m-range", type=int_range, required=True, help="a..b"),
        arg("--x", nargs="+", required=True),
    ],
)
def di(args, ctx) -> CommandResult:
    check_arity(args.x, args.d, "--x")
    lo, hi = args.m_range
    report = di_report(ctx.vector(args.x), args.k, args.s, lo, hi)
    caveats = [f"verdicts cover m={lo}..{hi} only"]
    return CommandResult(report.to_dict(), caveats, [v.to_dict() for v in report.verdicts])


@bp.command(
    "singular",
    help="improvability at every e^-s, s <= s_max (finite evidence for k-singularity)",
    arguments=[
        arg("--d", type=int),
        arg("--k", type=int, default=1),
        arg("--s-max", type=int, required=True),
        arg("--m-max", type=int, required=True),
        arg("--x", nargs="+", required=True),
    ],
)
def singular(args, ctx) -> CommandResult:
    check_arity(args.x, args.d, "--x")
    probe = singular_probe(ctx.vector(args.x), args.k, args.s_max, args.m_max)
    rows = [{"s": r.s, "improvable_from": r.improvable_from} for r in probe.reports]
    return CommandResult(probe.to_dict(), ["finite check, not a proof of singularity"], rows)


@bp.command(
    "dichotomy",
    help="DI verdicts against rationality for one series",
    arguments=[
        arg("--series", required=True),
        arg("--s", type=int, default=1),
        arg("--m-max", type=int, required=True),
        arg("--window", type=int, default=DEFAULT_WINDOW),
    ],
)
def dichotomy(args, ctx) -> CommandResult:
    report = rationality_dichotomy_experiment(ctx.series(args.series), args.s, args.m_max, window=args.window)
    rows = [
        {"m": v.m, "kernel": v.solvable, "cf": w.solvable}
        for v, w in zip(report.report.verdicts, report.cf_verdicts)
    ]
    return CommandResult(report.to_dict(), list(report.caveats), rows)
