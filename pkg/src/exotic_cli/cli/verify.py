"""
The ``verify`` command.
"""

import inspect
import logging
from typing import Any, Dict, Optional

import click

from exotic_cli.cli.lib import echo_report, get_config, get_table
from exotic_cli.lib import raise_cli_errors
from exotic_cli.periods import PERIOD_MODES
from exotic_cli.typing import VerificationReport
from exotic_cli.verification import SUITES

_logger = logging.getLogger(__name__)


def run_suite(name: str, options: Dict[str, Any]) -> VerificationReport:
    """
    Run a suite with the options it understands; unset options keep the
    suite defaults.
    """
    function = SUITES[name]
    parameters = inspect.signature(function).parameters
    kwargs = {
        key: value for key, value in options.items() if key in parameters and value is not None
    }
    _logger.info("Running suite %s with %s", name, sorted(kwargs))
    return function(**kwargs)


@click.command()
@click.argument("suite", type=click.Choice(sorted(SUITES)))
@click.option("--max-n", type=int, default=None, help="Largest polygon to check")
@click.option("--n", "n", type=int, default=5, help="Arity for the derivation check")
@click.option("--max-arity", type=int, default=None, help="Largest A-infinity relation")
@click.option("--d", "d", type=int, default=2, help="Number of Darboux pairs")
@click.option("--trials", type=int, default=None, help="Random trials per check")
@click.option("--seed", type=int, default=None)
@click.option("--tol", type=float, default=None)
@click.option("--perturbation", type=float, default=None, help="Relative error injected into nu")
@click.option("--period-mode", type=click.Choice(PERIOD_MODES), default="symbolic_known")
@click.option("--format", "output_format", type=click.Choice(["pretty", "json"]), default=None)
@click.pass_context
@raise_cli_errors
def verify(  # pylint: disable=too-many-arguments, invalid-name
    ctx: click.core.Context,
    suite: str,
    max_n: Optional[int],
    n: int,
    max_arity: Optional[int],
    d: int,
    trials: Optional[int],
    seed: Optional[int],
    tol: Optional[float],
    perturbation: Optional[float],
    period_mode: str,
    output_format: Optional[str],
) -> None:
    """
    Run a verification suite; exits with 1 if any check fails.
    """
    config = get_config(ctx)
    options = {
        "max_n": max_n,
        "n": n,
        "max_arity": max_arity,
        "d": d,
        "trials": trials,
        "seed": seed if seed is not None else config["seed"],
        "tol": tol if tol is not None else config["tol"],
        "perturbation": perturbation,
        "period_mode": period_mode,
        "table": get_table(ctx) if period_mode == "numeric" else None,
    }
    report = run_suite(suite, options)
    echo_report(report, output_format or config["output_format"])
