"""
Verification suites behind ``exotic-cli verify`` and ``exotic-cli darboux check``.

Every suite returns a ``VerificationReport``; a suite passes when all of its
checks pass.
"""

import logging
from typing import Callable, Dict, List

import numpy as np

from exotic_cli.arnold import cofree_dimension, joint_kernel_dimension, prime_count, quotient_rank
from exotic_cli.darboux import (
    GradedPoly,
    NuOperator,
    OddSymplecticContext,
    apply_graph,
    bv_axiom_residuals,
    leibniz_witness,
    symplectic_transform,
)
from exotic_cli.diagrams import Chord, chords, enumerate_diagrams
from exotic_cli.exceptions import DomainError
from exotic_cli.exotic import (
    CHAIN_LEVEL_CAVEAT,
    FINITE_D_CAVEAT,
    ainfty_check,
    compute_nu,
    derivation_check,
    nu_chain,
    random_inputs,
)
from exotic_cli.graphs import GraphMonomial, b, cyclic_tau, gamma_generator, s, well_definedness_defect
from exotic_cli.typing import CheckPayload, VerificationReport

_logger = logging.getLogger(__name__)


def _passed(checks: List[CheckPayload]) -> bool:
    return all(check["passed"] for check in checks)


def appendix_suite(max_n: int = 9) -> VerificationReport:
    """
    Check the cyclic compatibility of the chord images.

    For every ``4 <= n <= max_n`` and ``2 <= r <= n - 2`` the shift of the
    image of ``delta_{r-1,n-1}`` is the image of ``delta_{r,n}``, and the two
    complementary arcs of every chord give the same chain.
    """
    if not 4 <= max_n <= 12:
        raise DomainError(f"max_n must be between 4 and 12, got {max_n}")
    checks: List[CheckPayload] = []
    for n in range(4, max_n + 1):
        failures = []
        for r in range(2, n - 1):  # pylint: disable=invalid-name
            shifted = cyclic_tau(gamma_generator(n, Chord.of(n, r - 1, n - 1)))
            if shifted != gamma_generator(n, Chord.of(n, r, n)):
                failures.append(r)
        checks.append(
            {
                "name": f"cyclic_{n}",
                "passed": not failures,
                "residual": float(len(failures)),
                "detail": f"r in 2..{n - 2}",
                **({"witness": {"r": failures}} if failures else {}),
            },
        )
        defects = [str(chord) for chord in chords(n) if not well_definedness_defect(n, chord).is_zero()]
        checks.append(
            {
                "name": f"arcs_{n}",
                "passed": not defects,
                "residual": float(len(defects)),
                "detail": "complementary arcs agree after elimination",
                **({"witness": {"chords": defects}} if defects else {}),
            },
        )
    return {"suite": "appendix", "passed": _passed(checks), "checks": checks, "caveats": []}


def bases_suite(max_n: int = 7) -> VerificationReport:
    """
    Compare the diagram counts with independently computed ranks.
    """
    if not 4 <= max_n <= 8:
        raise DomainError(f"max_n must be between 4 and 8, got {max_n}")
    checks: List[CheckPayload] = []
    for n in range(4, max_n + 1):
        for k in range(0, n - 2):
            gravity = len(enumerate_diagrams(n, k, "gravity"))
            rank = quotient_rank(n, k)
            primes = prime_count(n, k)
            kernel = joint_kernel_dimension(n, k)
            cofree = cofree_dimension(n, k)
            checks.append(
                {
                    "name": f"gravity_{n}_{k}",
                    "passed": gravity == rank == cofree,
                    "residual": float(abs(gravity - rank) + abs(gravity - cofree)),
                    "detail": f"gravity={gravity} rank={rank} cofree={cofree}",
                },
            )
            checks.append(
                {
                    "name": f"prime_{n}_{k}",
                    "passed": primes == kernel,
                    "residual": float(abs(primes - kernel)),
                    "detail": f"prime={primes} kernel={kernel}",
                },
            )
        _logger.info("Checked the bases for n=%d", n)
    return {"suite": "bases", "passed": _passed(checks), "checks": checks, "caveats": []}


def _unimodular(rng: np.random.Generator, d: int) -> List[List[int]]:  # pylint: disable=invalid-name
    matrix = [[1 if row == column else 0 for column in range(d)] for row in range(d)]
    for row in range(d):
        for column in range(row + 1, d):
            matrix[row][column] = int(rng.integers(-2, 3))
    return matrix


def bv_axioms_suite(d: int = 2, trials: int = 100, seed: int = 7) -> VerificationReport:  # pylint: disable=invalid-name
    """
    Check the BV identities and affine symplectic invariance, exactly.
    """
    context = OddSymplecticContext.of(d)
    rng = np.random.default_rng(seed)
    checks: List[CheckPayload] = []
    for name, residual in bv_axiom_residuals(context, rng, trials).items():
        checks.append(
            {
                "name": name,
                "passed": residual == 0,
                "residual": residual,
                "detail": f"{trials} random trials on d={d}",
            },
        )

    worst = 0.0
    graphs = [GraphMonomial(3, (b(1, 2),)), GraphMonomial(3, (s(1),)), GraphMonomial(3, (s(2),))]
    for _ in range(max(trials // 10, 1)):
        matrix = _unimodular(rng, d)
        shift = [int(value) for value in rng.integers(-2, 3, size=d)]
        inputs = random_inputs(context, rng, 2)
        moved = [symplectic_transform(poly, matrix, shift) for poly in inputs]
        for graph in graphs:
            difference = apply_graph(graph, moved) - symplectic_transform(
                apply_graph(graph, inputs),
                matrix,
                shift,
            )
            worst = max(worst, difference.max_abs())
    checks.append(
        {
            "name": "symplectic_invariance",
            "passed": worst == 0,
            "residual": worst,
            "detail": "single edge and tadpole graphs under affine symplectic maps",
        },
    )
    return {"suite": "bv-axioms", "passed": _passed(checks), "checks": checks, "caveats": []}


def nu5_match_suite(  # pylint: disable=invalid-name
    d: int = 2,
    trials: int = 50,
    seed: int = 7,
    tol: float = 1e-8,
) -> VerificationReport:
    """
    Compare the Darboux formula for ``nu_5`` with the operation assembled
    from its printed class.
    """
    darboux = NuOperator.build(5)
    operadic = NuOperator(5, nu_chain(compute_nu(5)))
    context = OddSymplecticContext.of(d)
    rng = np.random.default_rng(seed)
    worst = 0.0
    exact = True
    witness = None
    for _ in range(trials):
        inputs = random_inputs(context, rng, 4)
        difference = darboux(inputs) - operadic(inputs)
        exact = exact and difference.is_zero()
        residual = difference.residual()
        if residual > worst:
            worst = residual
            witness = [str(poly) for poly in inputs]
    checks: List[CheckPayload] = [
        {
            "name": "nu5_operator",
            "passed": worst <= tol,
            "residual": worst,
            "detail": f"{trials} random trials on d={d}; exact={exact}",
            **({"witness": witness} if witness else {}),
        },
    ]
    return {
        "suite": "nu5-match",
        "passed": _passed(checks),
        "checks": checks,
        "caveats": [FINITE_D_CAVEAT.format(d=d), CHAIN_LEVEL_CAVEAT],
    }


def leibniz_suite(d: int = 2, trials: int = 20, seed: int = 7, max_n: int = 6) -> VerificationReport:  # pylint: disable=invalid-name
    """
    Check the Leibniz expansion behind the cyclic representation, exactly.
    """
    context = OddSymplecticContext.of(d)
    rng = np.random.default_rng(seed)
    checks: List[CheckPayload] = []
    for n in range(3, max_n + 1):
        worst = 0.0
        for _ in range(trials):
            inputs: List[GradedPoly] = random_inputs(context, rng, n - 1)
            worst = max(worst, leibniz_witness(n, inputs).max_abs())
        checks.append(
            {
                "name": f"leibniz_{n}",
                "passed": worst == 0,
                "residual": worst,
                "detail": f"{trials} random trials on d={d}",
            },
        )
    return {"suite": "leibniz", "passed": _passed(checks), "checks": checks, "caveats": []}


SUITES: Dict[str, Callable[..., VerificationReport]] = {
    "appendix": appendix_suite,
    "bases": bases_suite,
    "ainfty": ainfty_check,
    "derivation": derivation_check,
    "bv-axioms": bv_axioms_suite,
    "nu5-match": nu5_match_suite,
    "leibniz": leibniz_suite,
}
