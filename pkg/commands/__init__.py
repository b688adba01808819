"""
Command blueprints for the ffdioph CLI.

Each module under ``commands/`` exposes ``bp = CommandBlueprint(...)`` and
registers handlers with ``@bp.command(...)``; ``app.create_parser`` mounts
every blueprint on the argparse tree. A handler receives the parsed
namespace plus a ``CommandContext`` and returns a ``CommandResult``.
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from utils.errors import InvalidArgument
from utils.field_core import FiniteField
from utils.literals import parse_laurent, parse_series, parse_xpoly
from utils.series_ring import LaurentPoly, LaurentSeries, Vector
from utils.exponents import LambdaPolynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Argument:
    flags: Tuple[str, ...]
    options: Dict[str, Any]


def arg(*flags: str, **options: Any) -> Argument:
    return Argument(flags, options)


@dataclass(frozen=True)
class CommandContext:
    field: FiniteField
    seed: int
    floor: int

    def series(self, text: str) -> LaurentSeries:
        return parse_series(text, self.field, self.floor)

    def vector(self, texts: Sequence[str]) -> Vector:
        if not texts:
            raise InvalidArgument("at least one series literal is required")
        return Vector(tuple(self.series(text) for text in texts))

    def laurent(self, text: str) -> LaurentPoly:
        return parse_laurent(text, self.field)

    def xpoly(self, text: str, d: int) -> LambdaPolynomial:
        return parse_xpoly(text, self.field, d)


@dataclass
class CommandResult:
    result: Dict[str, Any]
    caveats: List[str] = dc_field(default_factory=list)
    rows: Optional[List[Dict[str, Any]]] = None


Handler = Callable[[argparse.Namespace, CommandContext], CommandResult]


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    handler: Handler
    arguments: Tuple[Argument, ...]


class CommandBlueprint:
    """A named group of commands; ``group`` nests them under one parent command."""

    def __init__(self, name: str, import_name: str, *, group: Optional[str] = None, help: str = ""):
        self.name = name
        self.import_name = import_name
        self.group = group
        self.help = help
        self.commands: List[Command] = []

    def command(self, name: str, *, help: str, arguments: Sequence[Argument] = ()) -> Callable[[Handler], Handler]:
        def decorator(handler: Handler) -> Handler:
            self.commands.append(Command(name, help, handler, tuple(arguments)))
            return handler

        return decorator

    def register(self, subparsers, parents: Sequence[argparse.ArgumentParser]) -> None:
        if self.group:
            group_parser = subparsers.add_parser(self.group, help=self.help)
            target = group_parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
            prefix = f"{self.group} "
        else:
            target, prefix = subparsers, ""
        for command in self.commands:
            parser = target.add_parser(command.name, help=command.help, parents=list(parents))
            for argument in command.arguments:
                parser.add_argument(*argument.flags, **argument.options)
            parser.set_defaults(handler=command.handler, command_name=prefix + command.name)
        logger.debug("Registered blueprint %s with %d commands", self.name, len(self.commands))


def int_range(text: str) -> Tuple[int, int]:
    """argparse type for ``a..b``."""
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range a..b, got {text!r}") from None


def check_arity(values: Sequence[Any], expected: Optional[int], flag: str) -> None:
    if expected is not None and len(values) != expected:
        raise InvalidArgument(f"{flag} expects {expected} values, got {len(values)}")
