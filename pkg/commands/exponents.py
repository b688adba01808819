"""Heights, k-VWA witnesses and Mahler-type exponents on the command line."""

from __future__ import annotations

import logging
from fractions import Fraction

from commands import CommandBlueprint, CommandResult, arg, check_arity
from utils.exponents import kvwa_search, mahler_label, monomial_basis, omega_k_lower, veronese, vwa_reduction
from utils.errors import InvalidArgument
from utils.literals import format_series

logger = logging.getLogger(__name__)

bp = CommandBlueprint("exponents", __name__)


@bp.command(
    "vwa",
    help="polynomials with |P(x)| < H(P)^-(N+s) up to a height cap",
    arguments=[
        arg("--d", type=int),
        arg("--k", type=int, default=1),
        arg("--s", type=int, default=1),
        arg("--h-max", type=int, required=True),
        arg("--x", nargs="+", required=True),
    ],
)
def vwa(args, ctx) -> CommandResult:
    check_arity(args.x, args.d, "--x")
    witnesses = kvwa_search(ctx.vector(args.x), args.k, args.s, args.h_max)
    rows = [w.to_dict() for w in witnesses]
    caveats = [f"H(P) <= e^{args.h_max} only; infinitely many witnesses cannot be shown by a finite search"]
    return CommandResult({"k": args.k, "s": args.s, "h_max": args.h_max, "witnesses": rows}, caveats, rows)


@bp.command(
    "omega",
    help="certified lower bound for omega_k at a height cap",
    arguments=[
        arg("--k", type=int, required=True),
        arg("--h-max", type=int, required=True),
        arg("--irreducible", action="store_true"),
        arg("--series", required=True),
    ],
)
def omega(args, ctx) -> CommandResult:
    estimate = omega_k_lower(ctx.series(args.series), args.k, args.h_max, irreducible_only=args.irreducible)
    caveats = ["lower bound only"]
    if not estimate.certified:
        caveats.append("vanishing checked only down to the available precision")
    return CommandResult(estimate.to_dict(), caveats, [estimate.to_dict()])


@bp.command(
    "mahler",
    help="omega_k / k trend for k <= k_max and the class it is consistent with",
    arguments=[
        arg("--k-max", type=int, required=True),
        arg("--h-max", type=int, required=True),
        arg("--threshold", default="2", help="largest omega_k / k still labelled S"),
        arg("--series", required=True),
    ],
)
def mahler(args, ctx) -> CommandResult:
    try:
        threshold = Fraction(args.threshold)
    except ValueError:
        raise InvalidArgument(f"--threshold must be a rational number, got {args.threshold!r}") from None
    report = mahler_label(ctx.series(args.series), args.k_max, args.h_max, threshold=threshold)
    result = report.to_dict()
    caveats = result.pop("caveats")
    return CommandResult(result, caveats, result["trend"])


@bp.command(
    "veronese",
    help="nonconstant monomials of x up to total degree k, optionally with the height reduction of a polynomial",
    arguments=[
        arg("--d", type=int),
        arg("--k", type=int, required=True),
        arg("--poly", help="polynomial in X (d = 1) or X1..Xd"),
        arg("--x", nargs="+", required=True),
    ],
)
def veronese_command(args, ctx) -> CommandResult:
    check_arity(args.x, args.d, "--x")
    x = ctx.vector(args.x)
    basis = monomial_basis(len(x), args.k)
    image = veronese(x, args.k)
    rows = [
        {"exponent": list(e), "value": format_series(value)} for e, value in zip(basis.exponents, image)
    ]
    result = {"d": basis.d, "k": basis.k, "N": basis.N, "monomials": rows}
    if args.poly:
        P = ctx.xpoly(args.poly, basis.d)
        reduction = vwa_reduction(P, args.k)
        err, exact = P.evaluate(x).magnitude()
        result["reduction"] = {
            "poly": P.to_literal(),
            "q": [c.to_literal() for c in P.basis_coefficients(basis)],
            "p": reduction.p.to_literal(),
            "q_norm_log": reduction.q_norm.to_json(),
            "height_log": reduction.height.to_json(),
            "height_tilde_log": reduction.height_tilde.to_json(),
            "holds": reduction.holds,
            "err_log": err.to_json(),
            "err_exact": exact,
        }
    return CommandResult(result, rows=rows)
