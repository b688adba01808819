"""Dirichlet solvers on the command line."""

from __future__ import annotations

import logging

from commands import CommandBlueprint, CommandResult, arg, check_arity
from utils.dirichlet import MODES, enumerate_witnesses, solve_linear, solve_poly
from utils.errors import InvalidArgument

logger = logging.getLogger(__name__)

bp = CommandBlueprint("dirichlet", __name__)


@bp.command(
    "dirichlet",
    help="small-height solutions of the Dirichlet system",
    arguments=[
        arg("--n", type=int, help="number of series in --y"),
        arg("--d", type=int, help="dimension of --x"),
        arg("--k", type=int, default=1, help="total degree bound for --x"),
        arg("--m", type=int, required=True),
        arg("--mode", choices=MODES, default="Ht"),
        arg("--count", type=int, default=1, help="distinct witnesses to enumerate for --x"),
        arg("--y", nargs="+", help="series literals for the linear form"),
        arg("--x", nargs="+", help="series literals for the polynomial form"),
    ],
)
def dirichlet(args, ctx) -> CommandResult:
    if (args.y is None) == (args.x is None):
        raise InvalidArgument("pass exactly one of --y (linear form) or --x (polynomial form)")
    if args.y is not None:
        check_arity(args.y, args.n, "--y")
        solution = solve_linear(ctx.vector(args.y), args.m)
        caveats = [] if solution.err_exact else ["residual vanishes down to the literal floor"]
        return CommandResult(solution.to_dict(), caveats)

    check_arity(args.x, args.d, "--x")
    x = ctx.vector(args.x)
    if args.count > 1:
        solutions = enumerate_witnesses(x, args.k, args.count, args.mode)
        rows = [s.to_dict() for s in solutions]
        return CommandResult({"witnesses": rows}, rows=rows)
    solution = solve_poly(x, args.k, args.m, args.mode)
    caveats = [] if solution.err_exact else ["residual vanishes down to the literal floor"]
    return CommandResult(solution.to_dict(), caveats)
