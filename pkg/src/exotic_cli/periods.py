"""
Period integrals of prime forms over the associahedron.

Points of the open associahedron are parametrized by the simplex chart
``0 < t_1 < ... < t_{n-3} < 1`` with the gauge ``z_1 = 0``,
``z_{k+1} = t_k``, ``z_{n-1} = 1`` and ``z_n = oo``.
"""

import logging
import math
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from exotic_cli.diagrams import (
    Chord,
    ChordMonomial,
    PrimeBracketing,
    complete_crossing_pairs,
    is_prime,
    prime_diagrams,
)
from exotic_cli.exceptions import AmbiguousFitError, BudgetError, DomainError
from exotic_cli.lib import parallel_map
from exotic_cli.mzv import MZVExpr, RelationTable, evaluate, fit_mzv, parse_mzv

_logger = logging.getLogger(__name__)

METHODS = ("nested", "montecarlo")

PERIOD_MODES = ("symbolic_known", "numeric")

# evaluation points per vectorized batch
CHUNK_SIZE = 200_000

# step 2**-level of the tanh-sinh rules tried by the nested method
FIRST_LEVEL = 2
LAST_LEVEL = 12

# target accuracy when a period is missing from the table
RECOGNITION_TOLERANCE = 1e-7

# periods of the prime forms recognized from nested quadrature, keyed by
# their bracketing, with the sign of the bracketing reading order
KNOWN_PERIODS: Dict[str, str] = {
    "[[1,3],[2,4]]": "zeta(2)",
    "[[[1,3],4],[2,5]]": "zeta(3)",
    "[[1,3],[[2,4],5]]": "zeta(3)",
    "[[1,[2,4]],[3,5]]": "zeta(3)",
    "[[1,4],[2,[3,5]]]": "zeta(3)",
}


class SimplexPoint(NamedTuple):
    """
    A point ``0 < t_1 < ... < t_{n-3} < 1`` of the simplex chart.
    """

    n: int
    t: Tuple[float, ...]

    @classmethod
    def of(cls, n: int, t: Sequence[float]) -> "SimplexPoint":
        """
        Build a point, checking that it is interior.
        """
        values = tuple(float(value) for value in t)
        if len(values) != n - 3:
            raise DomainError(f"A point of X_{n} has {n - 3} coordinates, got {len(values)}")
        if not all(left < right for left, right in zip((0.0,) + values, values + (1.0,))):
            raise DomainError(f"{values} is not an interior point of the simplex")
        return cls(n, values)


class PeriodResult(NamedTuple):
    """
    A numeric period with its error estimate and optional MZV fit.
    """

    value: float
    error_estimate: float
    samples_or_depth: int
    fitted: Optional[MZVExpr] = None
    method: str = "nested"


def _positions(n: int, points: np.ndarray) -> np.ndarray:
    """
    Finite marked points ``z_1..z_{n-1}`` for a batch of simplex points.

    Column ``k`` holds ``z_k``; column 0 and column ``n`` are unused.
    """
    z = np.full((points.shape[0], n + 1), np.nan)  # pylint: disable=invalid-name
    z[:, 1] = 0.0
    z[:, 2 : n - 1] = points
    z[:, n - 1] = 1.0
    return z


def _factors(n: int, chord: Chord) -> Tuple[List[Tuple[int, int, int]], int]:
    """
    Finite linear factors of the cross-ratio of a chord.

    Returns ``(a, b, exponent)`` triples for ``(z_a - z_b)^exponent`` and the
    sign left over after cancelling the factors involving ``z_n``.
    """

    def succ(label: int) -> int:
        return label % n + 1

    i, j = chord.i, chord.j
    candidates = [
        (i, succ(j), 1),
        (succ(i), j, 1),
        (i, j, -1),
        (succ(i), succ(j), -1),
    ]
    finite = []
    sign = 1
    for a, b, exponent in candidates:  # pylint: disable=invalid-name
        if n in (a, b):
            # z_n - z_b ~ +z_n and z_a - z_n ~ -z_n
            sign *= 1 if a == n else -1
        else:
            finite.append((a, b, exponent))
    return finite, sign


def _coordinates(n: int, chord: Chord, z: np.ndarray) -> np.ndarray:  # pylint: disable=invalid-name
    finite, sign = _factors(n, chord)
    value = np.full(z.shape[0], float(sign))
    for a, b, exponent in finite:  # pylint: disable=invalid-name
        value = value * (z[:, a] - z[:, b]) ** exponent
    return value


def dihedral_coordinate(n: int, chord: Chord, point: SimplexPoint) -> float:
    """
    Evaluate the cross-ratio coordinate of a chord at a point.
    """
    if chord.n != n or point.n != n:
        raise DomainError("Chord and point must live on the same polygon")
    z = _positions(n, np.array([point.t]))  # pylint: disable=invalid-name
    return float(_coordinates(n, chord, z)[0])


def _log_jacobian(n: int, chord_list: Sequence[Chord], z: np.ndarray) -> np.ndarray:  # pylint: disable=invalid-name
    """
    Matrices of ``d log u_c / d t_b`` for a batch of points.
    """
    size = n - 3
    matrix = np.zeros((z.shape[0], len(chord_list), size))
    for row, chord in enumerate(chord_list):
        finite, _ = _factors(n, chord)
        for a, b, exponent in finite:  # pylint: disable=invalid-name
            difference = z[:, a] - z[:, b]
            # z_k depends on t_{k-1} only, for 2 <= k <= n-2
            if 2 <= a <= n - 2:
                matrix[:, row, a - 2] += exponent / difference
            if 2 <= b <= n - 2:
                matrix[:, row, b - 2] -= exponent / difference
    return matrix


def integrand_batch(monomial: ChordMonomial, points: np.ndarray) -> np.ndarray:
    """
    Vectorized ``integrand`` over an array of simplex points.
    """
    n = monomial.n
    z = _positions(n, points)  # pylint: disable=invalid-name
    return monomial.sign * np.linalg.det(_log_jacobian(n, monomial.chords, z))


def integrand(monomial: ChordMonomial, point: SimplexPoint) -> float:
    """
    Density of the top-degree form of a prime diagram at a point.

    Rows follow the order of the chords in the monomial, so reordering them
    flips the sign through the determinant.
    """
    if monomial.degree != monomial.n - 3:
        raise DomainError(f"{monomial} is not of top degree")
    return float(integrand_batch(monomial, np.array([point.t]))[0])


def _tanh_sinh_rule(level: int, reach: float = 3.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Tanh-sinh rule on ``(0, 1)`` with step ``2**-level``.

    Nodes crowd doubly exponentially toward both endpoints; at ``reach`` they
    sit about ``2e-14`` away from them.
    """
    step = 2.0**-level
    count = int(round(reach / step))
    t = step * np.arange(-count, count + 1)  # pylint: disable=invalid-name
    u = np.pi / 2 * np.sinh(t)  # pylint: disable=invalid-name
    nodes = 1 / (1 + np.exp(-2 * u))
    weights = step * np.pi / 2 * np.cosh(t) / (2 * np.cosh(u) ** 2)
    return nodes, weights


def _from_cube(cube: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Map the unit cube onto the simplex by ``t_m = y_m``, ``t_j = t_{j+1} y_j``.

    Returns the simplex points and the Jacobian of the map.
    """
    points = np.empty_like(cube)
    size = cube.shape[1]
    points[:, size - 1] = cube[:, size - 1]
    for index in range(size - 2, -1, -1):
        points[:, index] = points[:, index + 1] * cube[:, index]
    jacobian = np.prod(points[:, 1:], axis=1)
    return points, jacobian


def _grid_batches(nodes: np.ndarray, weights: np.ndarray, size: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    total = len(nodes) ** size
    for start in range(0, total, CHUNK_SIZE):
        flat = np.arange(start, min(start + CHUNK_SIZE, total))
        indices = np.array(np.unravel_index(flat, (len(nodes),) * size)).T
        yield nodes[indices], np.prod(weights[indices], axis=1)


def _nested_estimate(monomial: ChordMonomial, level: int) -> Tuple[float, int]:
    size = monomial.n - 3
    nodes, weights = _tanh_sinh_rule(level)
    total = 0.0
    for cube, weight in _grid_batches(nodes, weights, size):
        points, jacobian = _from_cube(cube)
        values = weight * jacobian * integrand_batch(monomial, points)
        total += float(np.sum(values[np.isfinite(values)]))
    return total, len(nodes) ** size


def _integrate_nested(monomial: ChordMonomial, tol: float, max_points: int) -> PeriodResult:
    """
    Tensor tanh-sinh rules over the cube, halving the step until two
    successive estimates agree.
    """
    size = monomial.n - 3
    previous: Optional[float] = None
    error = math.inf
    best = 0.0
    for level in range(FIRST_LEVEL, LAST_LEVEL + 1):
        if len(_tanh_sinh_rule(level)[0]) ** size > max_points:
            break
        best, _ = _nested_estimate(monomial, level)
        if previous is not None:
            error = abs(best - previous)
            _logger.debug("Level %d: %.12g (delta %.3g)", level, best, error)
            if error <= tol:
                return PeriodResult(best, error, level, method="nested")
        previous = best

    raise BudgetError(
        f"Nested quadrature for {monomial} did not reach {tol:g}",
        best_estimate=best,
        error_estimate=error,
    )


def _integrate_montecarlo(
    monomial: ChordMonomial,
    tol: float,
    seed: int,
    max_samples: int,
) -> PeriodResult:
    """
    Sample the cube uniformly, after a cosine change of variables that
    flattens the logarithmic singularities on the faces.
    """
    size = monomial.n - 3
    rng = np.random.default_rng(seed)
    count = 0
    total = 0.0
    total_squares = 0.0
    first_batch = 50_000
    batch = first_batch
    estimate, error = 0.0, math.inf
    while count < max_samples:
        uniform = rng.random((batch, size))
        cube = (1 - np.cos(np.pi * uniform)) / 2
        weight = np.prod(np.pi / 2 * np.sin(np.pi * uniform), axis=1)
        points, jacobian = _from_cube(cube)
        values = weight * jacobian * integrand_batch(monomial, points)
        values = values[np.isfinite(values)]
        count += len(values)
        total += float(np.sum(values))
        total_squares += float(np.sum(values**2))
        estimate = total / count
        variance = max(total_squares / count - estimate**2, 0.0)
        error = math.sqrt(variance / count)
        if count >= 2 * first_batch and error <= tol:
            return PeriodResult(estimate, error, count, method="montecarlo")
        batch = min(2 * batch, max_samples - count) or batch

    raise BudgetError(
        f"Monte Carlo for {monomial} did not reach {tol:g}",
        best_estimate=estimate,
        error_estimate=error,
    )


def integrate(  # pylint: disable=too-many-arguments
    monomial: ChordMonomial,
    method: str = "nested",
    tol: float = 1e-6,
    seed: int = 7,
    max_points: int = 60_000_000,
    max_samples: int = 20_000_000,
) -> PeriodResult:
    """
    Integrate the form of a prime diagram over the associahedron.

    Raises ``BudgetError``, carrying the best estimate, when the tolerance
    is not met within the budget.
    """
    if monomial.degree != monomial.n - 3 or not is_prime(monomial):
        raise DomainError(f"{monomial} is not a top-degree prime diagram")
    if method not in METHODS:
        raise DomainError(f"Unknown integration method: {method}")

    _logger.info("Integrating %s with %s (tol %g)", monomial, method, tol)
    if method == "nested":
        result = _integrate_nested(monomial, tol, max_points)
    else:
        result = _integrate_montecarlo(monomial, tol, seed, max_samples)
    _logger.info("Period of %s: %.12g +/- %.2g", monomial, result.value, result.error_estimate)
    return result


def attach_fit(
    monomial: ChordMonomial,
    result: PeriodResult,
    table: Optional[RelationTable] = None,
    denom_bound: int = 100,
) -> PeriodResult:
    """
    Recognize a numeric period at weight ``n - 3``.

    When no combination fits, or several do, ``fitted`` is ``None``.
    """
    fit_tol = max(3 * result.error_estimate, 1e-12)
    try:
        fitted = fit_mzv(result.value, monomial.n - 3, fit_tol, denom_bound, table)
    except AmbiguousFitError as excinfo:
        _logger.warning("%s", excinfo)
        fitted = None
    if fitted is None:
        _logger.warning("No MZV fit for the period of %s", monomial)
    return result._replace(fitted=fitted)


def period(  # pylint: disable=too-many-arguments
    monomial: ChordMonomial,
    method: str = "nested",
    tol: float = 1e-6,
    seed: int = 7,
    table: Optional[RelationTable] = None,
    denom_bound: int = 100,
) -> PeriodResult:
    """
    Integrate, then fit the value to multiple zeta values.
    """
    return attach_fit(monomial, integrate(monomial, method, tol, seed), table, denom_bound)


def _integrate_item(item: Tuple[ChordMonomial, str, float, int]) -> PeriodResult:
    monomial, method, tol, seed = item
    return integrate(monomial, method, tol, seed)


def integrate_all(
    n: int,
    method: str = "nested",
    tol: float = 1e-6,
    seed: int = 7,
    workers: int = 1,
) -> List[PeriodResult]:
    """
    Integrate every top-degree prime form, in canonical order.
    """
    items = [(monomial, method, tol, seed) for monomial, _ in prime_diagrams(n)]
    return parallel_map(_integrate_item, items, workers)


@lru_cache(maxsize=None)
def _recognized_period(diagram: ChordMonomial) -> PeriodResult:
    """
    Period of a prime diagram, tabulated or recognized from nested quadrature.

    When the tolerance is out of reach the best estimate is fitted with the
    estimated error.
    """
    for candidate, bracketing in prime_diagrams(diagram.n):
        if candidate.chords == diagram.chords and str(bracketing) in KNOWN_PERIODS:
            known = parse_mzv(KNOWN_PERIODS[str(bracketing)]).scale(candidate.sign * diagram.sign)
            return PeriodResult(float(evaluate(known)), 0.0, 0, known, "known")

    _logger.info("No tabulated period for %s, integrating", diagram)
    try:
        result = integrate(diagram, tol=RECOGNITION_TOLERANCE)
    except BudgetError as excinfo:
        _logger.warning("%s", excinfo)
        result = PeriodResult(excinfo.best_estimate, excinfo.error_estimate, 0)
        if not math.isfinite(result.error_estimate):
            return result
    return attach_fit(diagram, result)


def known_period(monomial: ChordMonomial) -> MZVExpr:
    """
    Period of a prime form, relative to the sign of ``monomial``.

    Forms missing from ``KNOWN_PERIODS`` are integrated once and fitted.
    """
    for diagram, _ in prime_diagrams(monomial.n):
        if diagram.chords != monomial.chords:
            continue
        fitted = _recognized_period(diagram).fitted
        if fitted is None:
            raise DomainError(f"No MZV fit for the period of {monomial}")
        return fitted.scale(monomial.sign * diagram.sign)
    raise DomainError(f"{monomial} is not a top-degree prime diagram")


def relation_residual(n: int, point: SimplexPoint) -> float:
    """
    Largest violation of ``1 = prod_A u + prod_B u`` over completely crossing
    pairs at a point.
    """
    residual = 0.0
    for first, second in complete_crossing_pairs(n):
        left = math.prod(dihedral_coordinate(n, chord, point) for chord in first)
        right = math.prod(dihedral_coordinate(n, chord, point) for chord in second)
        residual = max(residual, abs(1 - left - right))
    return residual


def prime_periods(  # pylint: disable=too-many-arguments
    n: int,
    period_mode: str = "symbolic_known",
    method: str = "nested",
    tol: float = 1e-6,
    seed: int = 7,
    table: Optional[RelationTable] = None,
    workers: int = 1,
) -> List[Tuple[ChordMonomial, Optional[PrimeBracketing], PeriodResult]]:
    """
    Periods of all top-degree prime forms, in canonical order.

    ``symbolic_known`` reads the tabulated values and integrates the forms
    missing from the table once; ``numeric`` integrates every form and fits
    the results.
    """
    if period_mode not in PERIOD_MODES:
        raise DomainError(f"Unknown period mode: {period_mode}")
    primes = prime_diagrams(n)
    if period_mode == "symbolic_known":
        results = [_recognized_period(monomial) for monomial, _ in primes]
    else:
        results = [
            attach_fit(monomial, result, table)
            for (monomial, _), result in zip(primes, integrate_all(n, method, tol, seed, workers))
        ]
    return [(monomial, bracketing, result) for (monomial, bracketing), result in zip(primes, results)]
