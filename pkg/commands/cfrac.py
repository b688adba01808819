"""Continued fraction expansion of a single series."""

from __future__ import annotations

import logging

from commands import CommandBlueprint, CommandResult, arg
from utils.cfrac import cf_expand, convergents
from utils.errors import InvalidArgument

logger = logging.getLogger(__name__)

bp = CommandBlueprint("cfrac", __name__)


@bp.command(
    "cfrac",
    help="partial quotients and convergents",
    arguments=[
        arg("--series", required=True),
        arg("--terms", type=int, required=True, help="number of partial quotients a_1..a_n"),
    ],
)
def cfrac(args, ctx) -> CommandResult:
    if args.terms < 0:
        raise InvalidArgument("--terms must be nonnegative")
    expansion = cf_expand(ctx.series(args.series), args.terms, allow_partial=True)
    caveats = []
    if expansion.certified_terms < args.terms and not expansion.terminated:
        caveats.append(f"certified_terms={expansion.certified_terms}")
    conv = convergents(expansion, expansion.certified_terms + 1)
    rows = [
        {"n": c.index, "a": (expansion.a0 if c.index == 0 else expansion.quotients[c.index - 1]).to_literal(),
         "p": c.p.to_literal(), "q": c.q.to_literal(), "err_log": c.err.to_json()}
        for c in conv
    ]
    result = expansion.to_dict()
    result["convergents"] = [c.to_dict() for c in conv]
    return CommandResult(result, caveats, rows)
