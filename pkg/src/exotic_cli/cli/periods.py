"""
Commands for period integrals.
"""

import logging
from typing import Optional

import click
from tabulate import tabulate

from exotic_cli.cli.lib import echo_document, get_config, get_table, make_document
from exotic_cli.diagrams import prime_diagrams
from exotic_cli.exceptions import BudgetError, CLIError
from exotic_cli.lib import raise_cli_errors
from exotic_cli.mzv import format_mzv
from exotic_cli.periods import METHODS, attach_fit, integrate
from exotic_cli.schemas import PeriodDocumentSchema

_logger = logging.getLogger(__name__)


@click.group()
def periods() -> None:
    """
    Period integrals of prime forms.
    """


@click.command(name="integrate")
@click.option("--n", "n", type=int, required=True, help="Number of sides of the polygon")
@click.option(
    "--prime-index",
    type=int,
    default=1,
    help="1-based position of the prime form in canonical order",
)
@click.option("--method", type=click.Choice(METHODS), default="nested")
@click.option("--tol", type=float, default=None, help="Absolute error target")
@click.option("--seed", type=int, default=None, help="Seed for Monte Carlo sampling")
@click.option("--format", "output_format", type=click.Choice(["pretty", "json"]), default=None)
@click.pass_context
@raise_cli_errors
def integrate_command(  # pylint: disable=too-many-arguments
    ctx: click.core.Context,
    n: int,
    prime_index: int,
    method: str,
    tol: Optional[float],
    seed: Optional[int],
    output_format: Optional[str],
) -> None:
    """
    Integrate a prime form over the associahedron and fit the value.
    """
    config = get_config(ctx)
    tol = tol if tol is not None else config["tol"]
    seed = seed if seed is not None else config["seed"]
    output_format = output_format or config["output_format"]

    primes = prime_diagrams(n)
    if not 1 <= prime_index <= len(primes):
        raise CLIError(f"There are {len(primes)} prime forms for n={n}, got index {prime_index}", 2)
    monomial, bracketing = primes[prime_index - 1]

    try:
        result = integrate(monomial, method, tol, seed)
    except BudgetError as excinfo:
        click.echo(
            f"Best estimate {excinfo.best_estimate:.12g} +/- {excinfo.error_estimate:.2g}",
        )
        raise CLIError(str(excinfo), 1) from excinfo
    result = attach_fit(monomial, result, get_table(ctx))
    fitted = format_mzv(result.fitted) if result.fitted is not None else None

    if output_format == "json":
        document = make_document(
            "period",
            {
                "n": n,
                "prime_index": prime_index,
                "bracketing": str(bracketing) if bracketing else None,
                "method": method,
                "value": result.value,
                "error": result.error_estimate,
                "samples_or_depth": result.samples_or_depth,
                "fitted": fitted,
            },
        )
        echo_document(document, PeriodDocumentSchema)
        return

    rows = [
        ("prime form", str(monomial)),
        ("bracketing", str(bracketing) if bracketing else ""),
        ("method", method),
        ("value", f"{result.value:.12g}"),
        ("error", f"{result.error_estimate:.2g}"),
        ("samples or depth", result.samples_or_depth),
        ("fit", fitted or "none"),
    ]
    click.echo(tabulate(rows))


periods.add_command(integrate_command)
