from dotenv import load_dotenv
load_dotenv()

import argparse
import csv
import io
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from commands import CommandContext, CommandResult
from commands.cfrac import bp as cfrac_bp
from commands.dirichlet import bp as dirichlet_bp
from commands.exponents import bp as exponents_bp
from commands.improvability import bp as improvability_bp
from commands.measure import bp as measure_bp
from config.run_config import RunConfig, build_run_config, resolve_field
from config.settings import get_settings
from utils.errors import FFDiophError, FieldConfigError
from utils.field_core import get_field

logger = logging.getLogger("ffdioph")

GLOBAL_FLAGS = ("q", "p", "r", "modulus", "seed", "format", "floor")
EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


def _modulus(text: str):
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"modulus must be comma separated residues, got {text!r}") from None


def _global_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("field and run options")
    group.add_argument("--q", type=int, help="field size (a prime power)")
    group.add_argument("--p", type=int, help="characteristic")
    group.add_argument("--r", type=int, help="extension degree")
    group.add_argument("--modulus", type=_modulus, help="ascending residues of the defining polynomial")
    group.add_argument("--seed", type=int, default=0)
    group.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    group.add_argument("--floor", type=int, help="default precision floor (FFDIOPH_DEFAULT_FLOOR)")
    return parser


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffdioph", description="Diophantine approximation over F_q((1/T)) with exact arithmetic."
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    parents = [_global_parser()]
    dirichlet_bp.register(subparsers, parents)
    cfrac_bp.register(subparsers, parents)
    improvability_bp.register(subparsers, parents)
    exponents_bp.register(subparsers, parents)
    measure_bp.register(subparsers, parents)
    return parser


def _params(args: argparse.Namespace) -> Dict[str, Any]:
    skip = set(GLOBAL_FLAGS) | {"handler", "command", "command_name", "subcommand"}
    return {key: value for key, value in sorted(vars(args).items()) if key not in skip}


def render(document: Dict[str, Any], output_format: str, rows: Optional[List[Dict[str, Any]]] = None) -> str:
    if output_format == "pretty":
        return json.dumps(document, sort_keys=True, indent=2) + "\n"
    if output_format == "csv" and "result" in document:
        table = rows if rows is not None else [_scalars(document["result"])]
        buffer = io.StringIO()
        columns = sorted({key for row in table for key in row})
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in table:
            writer.writerow({key: _cell(row.get(key)) for key in columns})
        return buffer.getvalue()
    return json.dumps(document, sort_keys=True) + "\n"


def _scalars(result: Dict[str, Any]) -> Dict[str, Any]:
    return {key: value for key, value in result.items() if not isinstance(value, (dict, list))}


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def run(config: RunConfig, args: argparse.Namespace) -> CommandResult:
    """Dispatch one parsed command; FFDiophError propagates to the caller."""
    context = CommandContext(get_field(config.field), config.seed, config.default_floor)
    logger.info("Running %s with %s", config.command, config.params)
    return args.handler(args, context)


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        settings = get_settings()
    except ValidationError as e:
        out.write(render({"error": "usage", "message": f"invalid environment: {e}"}, "json"))
        return EXIT_USAGE
    logging.basicConfig(level=settings.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.q is not None and (args.p is not None or args.r is not None):
        out.write(render({"error": "usage", "message": "--q cannot be combined with --p/--r"}, "json"))
        return EXIT_USAGE

    try:
        field = resolve_field(args.q, args.p, args.r, args.modulus)
        config = build_run_config(
            field,
            args.command_name,
            _params(args),
            seed=args.seed,
            output_format=args.format,
            default_floor=args.floor,
        )
    except FieldConfigError as e:
        out.write(render(e.to_dict(), "json"))
        return EXIT_USAGE
    except ValidationError as e:
        out.write(render({"error": "usage", "message": str(e)}, "json"))
        return EXIT_USAGE

    try:
        outcome = run(config, args)
    except FFDiophError as e:
        logger.warning("%s failed: %s", config.command, e)
        out.write(render({"config": config.echo(), **e.to_dict()}, "json"))
        return EXIT_ERROR

    document = {"config": config.echo(), "log_base": "e", "result": outcome.result, "caveats": outcome.caveats}
    out.write(render(document, config.output_format, outcome.rows))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
