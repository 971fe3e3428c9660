"""
Basic helper functions.
"""

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import wraps
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

import click
from rich.console import Console
from rich.logging import RichHandler

from exotic_cli.exceptions import CLIError, ExoticError

_logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def setup_logging(loglevel: str) -> None:
    """
    Setup basic logging.
    """
    level = getattr(logging, loglevel.upper(), None)
    if not isinstance(level, int):
        raise ValueError(f"Invalid log level: {loglevel}")

    logformat = "[%(asctime)s] %(levelname)s: %(name)s: %(message)s"
    logging.basicConfig(
        level=level,
        format=logformat,
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True))],
        force=True,
    )
    logging.captureWarnings(True)


def sort_with_sign(items: Sequence[T]) -> Tuple[Optional[Tuple[T, ...]], int]:
    """
    Sort odd generators, returning the sorted tuple and the permutation sign.

    Returns ``(None, 0)`` if a generator is repeated, since the square of an
    odd generator vanishes.
    """
    values = list(items)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(values)):
        j = i
        while j > 0 and values[j - 1] > values[j]:  # type: ignore
            values[j - 1], values[j] = values[j], values[j - 1]
            sign = -sign
            j -= 1
    for left, right in zip(values, values[1:]):
        if left == right:
            return None, 0
    return tuple(values), sign


def parallel_map(
    function: Callable[[T], R],
    items: Iterable[T],
    workers: int = 1,
) -> List[R]:
    """
    Map a function over items, optionally in a process pool.

    Results are returned in input order.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]

    _logger.debug("Dispatching %d items to %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))


def dict_merge(base: Dict[Any, Any], overrides: Dict[Any, Any]) -> None:
    """
    Recursive dict merge.
    """
    for k in overrides:  # pylint: disable=invalid-name
        if k in base and isinstance(base[k], dict) and isinstance(overrides[k], dict):
            dict_merge(base[k], overrides[k])
        else:
            base[k] = overrides[k]


def raise_cli_errors(function: Callable[..., Any]) -> Callable[..., Any]:
    """
    Decorator to catch any CLIError raised and exits the execution with an error code.

    Library errors are usage problems from the point of view of the CLI, so
    they exit with code 2.
    """

    @wraps(function)
    def wrapper(*args, **kwargs):
        try:
            return function(*args, **kwargs)
        except ExoticError as excinfo:
            click.echo(click.style(str(excinfo), fg="bright_red"))
            sys.exit(2)
        except CLIError as excinfo:
            click.echo(
                click.style(
                    str(excinfo),
                    fg="bright_red",
                ),
            )
            sys.exit(excinfo.exit_code)

    return wrapper
