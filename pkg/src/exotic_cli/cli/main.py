"""
Main entry point for the CLI.
"""

import logging
from pathlib import Path
from typing import Optional

import click
from tabulate import tabulate

from exotic_cli.cli.darboux import darboux
from exotic_cli.cli.lib import echo_document, get_config, get_table, make_document
from exotic_cli.cli.periods import periods
from exotic_cli.cli.verify import verify
from exotic_cli.config import load_config
from exotic_cli.diagrams import DIAGRAM_CLASSES, enumerate_diagrams, prime_diagrams
from exotic_cli.exceptions import CLIError
from exotic_cli.exotic import compute_nu
from exotic_cli.lib import raise_cli_errors, setup_logging
from exotic_cli.periods import PERIOD_MODES
from exotic_cli.schemas import DiagramListingSchema, NuDocumentSchema

_logger = logging.getLogger(__name__)

FORMATS = ("pretty", "json")


@click.group()
@click.option("--loglevel", default="INFO")
@click.option(
    "--mzv-table",
    envvar="EXOTIC_MZV_TABLE",
    type=click.Path(dir_okay=False),
    default=None,
    help="YAML file with MZV relations",
)
@click.option("--workers", type=int, default=None, help="Size of the worker pool")
@click.option("--digits", type=int, default=None, help="Working precision for MZVs")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="Config file (defaults to the user config directory)",
)
@click.version_option()
@click.pass_context
@raise_cli_errors
def exotic_cli(  # pylint: disable=too-many-arguments
    ctx: click.core.Context,
    loglevel: str,
    mzv_table: Optional[str],
    workers: Optional[int],
    digits: Optional[int],
    config_path: Optional[str],
) -> None:
    """
    Build and check the exotic A-infinity operations on BV algebras.
    """
    setup_logging(loglevel)

    ctx.ensure_object(dict)

    ctx.obj["CONFIG"] = load_config(
        {"mzv_table": mzv_table, "workers": workers, "digits": digits},
        Path(config_path) if config_path else None,
    )


@click.command(name="enumerate")
@click.option("--n", "n", type=int, required=True, help="Number of sides of the polygon")
@click.option("--k", "k", type=int, default=None, help="Number of chords")
@click.option("--top", is_flag=True, default=False, help="Use k = n - 3")
@click.option(
    "--class",
    "diagram_class",
    type=click.Choice(DIAGRAM_CLASSES),
    default="all",
)
@click.option("--format", "output_format", type=click.Choice(FORMATS), default=None)
@click.pass_context
@raise_cli_errors
def enumerate_command(  # pylint: disable=too-many-arguments
    ctx: click.core.Context,
    n: int,
    k: Optional[int],
    top: bool,
    diagram_class: str,
    output_format: Optional[str],
) -> None:
    """
    List chord diagrams.
    """
    if top:
        k = n - 3
    if k is None:
        raise CLIError("Pass either ``--k`` or ``--top``", 2)
    output_format = output_format or get_config(ctx)["output_format"]

    diagrams = enumerate_diagrams(n, k, diagram_class)
    bracketings = {}
    if k == n - 3 and diagram_class == "prime" and n > 3:
        bracketings = {
            monomial.chords: bracketing for monomial, bracketing in prime_diagrams(n) if bracketing
        }

    if output_format == "json":
        document = make_document(
            "diagram_listing",
            {
                "n": n,
                "k": k,
                "class": diagram_class,
                "count": len(diagrams),
                "diagrams": [monomial.to_dict() for monomial in diagrams],
            },
        )
        echo_document(document, DiagramListingSchema)
        return

    rows = [
        (index + 1, str(monomial), str(bracketings.get(monomial.chords, "")))
        for index, monomial in enumerate(diagrams)
    ]
    click.echo(tabulate(rows, headers=["#", "chords", "bracketing"]))
    click.echo(f"{len(diagrams)} {diagram_class} diagrams with {k} chords on the {n}-gon")


@click.command()
@click.option("--n", "n", type=int, required=True, help="Arity of the operation")
@click.option("--format", "output_format", type=click.Choice(FORMATS), default=None)
@click.option(
    "--period-mode",
    type=click.Choice(PERIOD_MODES),
    default="symbolic_known",
    help="Use tabulated periods or integrate them",
)
@click.pass_context
@raise_cli_errors
def nu(  # pylint: disable=invalid-name
    ctx: click.core.Context,
    n: int,
    output_format: Optional[str],
    period_mode: str,
) -> None:
    """
    Print the exotic operation of arity ``n``.
    """
    config = get_config(ctx)
    output_format = output_format or config["output_format"]
    table = get_table(ctx) if period_mode == "numeric" else None
    operation = compute_nu(
        n,
        period_mode,
        table=table,
        workers=config["workers"],
        tol=config["tol"],
        seed=config["seed"],
    )

    if output_format == "json":
        document = make_document(
            "nu",
            {
                "n": n,
                "degree": operation.degree,
                "period_mode": period_mode,
                "terms": operation.printed_terms(),
            },
        )
        echo_document(document, NuDocumentSchema)
        return

    text = operation.pretty()
    if text:
        click.echo(text)


exotic_cli.add_command(enumerate_command, name="enumerate")
exotic_cli.add_command(nu, name="nu")
exotic_cli.add_command(periods)
exotic_cli.add_command(verify)
exotic_cli.add_command(darboux)
