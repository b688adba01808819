"""`ffdioph measure ...`: Federer, (C, alpha)-good, nonplanar and sampling probes."""

from __future__ import annotations

import logging

from commands import CommandBlueprint, CommandResult, arg, check_arity, int_range
from utils.errors import InvalidArgument
from utils.improvability import di_frequency
from utils.measure_lab import (
    MIN_SAMPLES,
    UltraBall,
    exhaustive_ball_count,
    federer_monte_carlo,
    federer_ratio,
    good_fit,
    nonplanar_check,
    plant_zero,
    sample_ball,
    sprindzuk_probe,
    zero_vector,
)
from utils.exponents import monomial_basis
from utils.series_ring import LaurentPoly, Poly

logger = logging.getLogger(__name__)

bp = CommandBlueprint("measure", __name__, group="measure", help="empirical checks of the measure hypotheses")

EMPIRICAL = "empirical estimate on a seeded Haar sample"


@bp.command(
    "federer",
    help="log_q of mu(3B) / mu(B) for Haar balls",
    arguments=[
        arg("--d", type=int, required=True),
        arg("--j", type=int, default=0),
        arg("--count", type=int, default=0, help="Monte-Carlo samples (0: analytic value only)"),
        arg("--exhaustive", action="store_true", help="count truncated points one level below the ball"),
    ],
)
def federer(args, ctx) -> CommandResult:
    report = federer_ratio(args.d, args.j)
    result = report.to_dict()
    caveats = []
    if not report.matches_nominal:
        caveats.append(f"computed ratio q^{report.log_ratio} differs from the nominal doubling constant e^2 for d={args.d}")
    if args.count:
        result["monte_carlo"] = federer_monte_carlo(ctx.field, args.d, args.j, seed=ctx.seed, count=args.count).to_dict()
        caveats.append(EMPIRICAL)
    if args.exhaustive:
        result["exhaustive"] = exhaustive_ball_count(ctx.field, args.d, args.j, args.j).to_dict(ctx.field.q)
    return CommandResult(result, caveats)


@bp.command(
    "good",
    help="sublevel fractions of f = c_0 + sum c_i M_i and the fitted decay exponent",
    arguments=[
        arg("--d", type=int, required=True),
        arg("--k", type=int, required=True),
        arg("--j", type=int, default=0, help="ball radius e^j around 0"),
        arg("--count", type=int, default=10000),
        arg("--eps", type=int_range, default=(0, 4), help="t range a..b, epsilon = e^-t"),
        arg("--coeffs", nargs="+", help="N+1 Laurent literals, constant first (default: the first coordinate)"),
    ],
)
def good(args, ctx) -> CommandResult:
    basis = monomial_basis(args.d, args.k)
    field = ctx.field
    if args.coeffs:
        check_arity(args.coeffs, basis.N + 1, "--coeffs")
        coeffs = [ctx.laurent(text) for text in args.coeffs]
    else:
        coeffs = [LaurentPoly.zero(field)] * (basis.N + 1)
        coeffs[1 + basis.index((1,) + (0,) * (args.d - 1))] = LaurentPoly.from_poly(Poly.one(field))
    lo, hi = args.eps
    ball = UltraBall(zero_vector(field, args.d), args.j)
    fit = good_fit(basis, coeffs, ball, ctx.floor, ctx.seed, args.count, range(lo, hi + 1))
    rows = [{"eps_log": -t, "fraction": frac} for t, frac in fit.rows()]
    caveats = [EMPIRICAL, "C is reported as the empirical maximum only"]
    if fit.zero_mass:
        caveats.append("no sample fell in any sublevel set")
    return CommandResult(fit.to_dict(), caveats, rows)


@bp.command(
    "nonplanar",
    help="rank over F_q(T) of 1, M_1, ..., M_N on a Haar cloud",
    arguments=[
        arg("--d", type=int, required=True),
        arg("--k", type=int, required=True),
        arg("--j", type=int, default=0),
        arg("--count", type=int, default=MIN_SAMPLES // 10),
        arg("--plant", type=int, help="restrict the cloud to the hyperplane x_i = 0 (1-based i)"),
    ],
)
def nonplanar(args, ctx) -> CommandResult:
    basis = monomial_basis(args.d, args.k)
    ball = UltraBall(zero_vector(ctx.field, args.d), args.j)
    cloud = sample_ball(ball, ctx.floor, ctx.seed, args.count)
    if args.plant is not None:
        if not 1 <= args.plant <= args.d:
            raise InvalidArgument(f"--plant must lie in 1..{args.d}")
        cloud = plant_zero(cloud, args.plant - 1)
    report = nonplanar_check(basis, ball, cloud)
    return CommandResult(report.to_dict(), [EMPIRICAL])


@bp.command(
    "frequency",
    help="fraction of Haar samples for which DI(k, e^-s) is solvable at m",
    arguments=[
        arg("--d", type=int, required=True),
        arg("--k", type=int, default=1),
        arg("--s", type=int, default=1),
        arg("--m", type=int, required=True),
        arg("--count", type=int, default=100),
    ],
)
def frequency(args, ctx) -> CommandResult:
    result = di_frequency(ctx.field, args.d, args.k, args.s, args.m, seed=ctx.seed, count=args.count)
    return CommandResult(result, [EMPIRICAL, "no threshold epsilon_0 is asserted"])


@bp.command(
    "sprindzuk",
    help="omega_k lower bounds at Haar-sampled points",
    arguments=[
        arg("--k", type=int, required=True),
        arg("--h-max", type=int, required=True),
        arg("--count", type=int, default=20),
    ],
)
def sprindzuk(args, ctx) -> CommandResult:
    report = sprindzuk_probe(ctx.field, args.k, args.h_max, seed=ctx.seed, count=args.count)
    rows = [{"index": i, "exponent": e.exponent_text()} for i, e in enumerate(report.estimates)]
    return CommandResult(report.to_dict(), [EMPIRICAL, "lower bound only"], rows)
