"""
Commands for the Darboux representation.
"""

from typing import Optional

import click

from exotic_cli.cli.lib import echo_report, get_config
from exotic_cli.cli.verify import run_suite
from exotic_cli.lib import raise_cli_errors

DARBOUX_SUITES = ("bv-axioms", "nu5-match", "leibniz")


@click.group()
def darboux() -> None:
    """
    Checks of the polydifferential representation.
    """


@click.command()
@click.option("--suite", type=click.Choice(DARBOUX_SUITES), required=True)
@click.option("--d", "d", type=int, default=2, help="Number of Darboux pairs")
@click.option("--seed", type=int, default=None)
@click.option("--trials", type=int, default=None, help="Random trials per check")
@click.option("--format", "output_format", type=click.Choice(["pretty", "json"]), default=None)
@click.pass_context
@raise_cli_errors
def check(  # pylint: disable=too-many-arguments, invalid-name
    ctx: click.core.Context,
    suite: str,
    d: int,
    seed: Optional[int],
    trials: Optional[int],
    output_format: Optional[str],
) -> None:
    """
    Run a representation suite; exits with 1 if any check fails.
    """
    config = get_config(ctx)
    report = run_suite(
        suite,
        {"d": d, "seed": seed if seed is not None else config["seed"], "trials": trials},
    )
    echo_report(report, output_format or config["output_format"])


darboux.add_command(check, name="check")
