"""
The exotic operations and the identity checks run through the Darboux
representation.
"""

import logging
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence

import numpy as np

from exotic_cli.darboux import (
    GradedPoly,
    NuOperator,
    OddSymplecticContext,
    OperatorValue,
    bracket,
    random_poly,
)
from exotic_cli.diagrams import ChordMonomial, PrimeBracketing
from exotic_cli.exceptions import DomainError
from exotic_cli.graphs import (
    BVClassVector,
    GraphChain,
    Key,
    extract_bv,
    pretty_print_bv,
    prime_chain,
    render_word,
    representative_chain,
)
from exotic_cli.lib import parallel_map
from exotic_cli.mzv import Monomial, MZVExpr, RelationTable, evaluate, format_mzv
from exotic_cli.periods import prime_periods
from exotic_cli.typing import CheckPayload, VerificationReport

_logger = logging.getLogger(__name__)

FINITE_D_CAVEAT = (
    "Identities are checked as operators on polynomials in {d} pairs of Darboux "
    "variables; passing is evidence for the operadic identity, not a proof."
)
CHAIN_LEVEL_CAVEAT = (
    "Class coefficients are read off the chain from normal-form words; no "
    "reduction in homology is performed."
)


class ExoticTerm(NamedTuple):
    """
    The contribution of a single prime form: its period times its class.
    """

    prime: ChordMonomial
    bracketing: Optional[PrimeBracketing]
    coefficient: Optional[MZVExpr]
    value: float
    g: BVClassVector  # pylint: disable=invalid-name


class ExoticOperation:
    """
    The operation of arity ``n``, as a sum over prime forms.
    """

    def __init__(self, n: int, terms: Sequence[ExoticTerm], period_mode: str = "symbolic_known"):
        self.n = n
        self.terms = list(terms)
        self.period_mode = period_mode

    @property
    def is_product(self) -> bool:
        """
        Whether this is the binary product.
        """
        return self.n == 3

    @property
    def degree(self) -> int:
        """
        Degree of the operation.
        """
        return 3 - self.n

    @property
    def is_symbolic(self) -> bool:
        """
        Whether every period was recognized as an MZV combination.
        """
        return all(term.coefficient is not None for term in self.terms)

    def combined(self) -> Dict[Key, Any]:
        """
        Coefficient of every normal-form word, summed over prime forms.

        Coefficients are ``MZVExpr`` when all periods were fitted, floats
        otherwise.
        """
        symbolic = self.is_symbolic
        words: Dict[Key, Any] = {}
        for term in self.terms:
            weight = term.coefficient if symbolic else term.value
            for key, value in term.g.terms.items():
                contribution = weight * value
                words[key] = words[key] + contribution if key in words else contribution
        return {key: value for key, value in words.items() if value != 0}

    def common_factor(self) -> Optional[Monomial]:
        """
        The MZV monomial shared by every coefficient, if there is a single one.
        """
        if not self.is_symbolic:
            return None
        monomials = {monomial for value in self.combined().values() for monomial in value.terms}
        return monomials.pop() if len(monomials) == 1 else None

    def pretty(self) -> str:
        """
        Render the operation in bracket notation.
        """
        if self.is_product:
            return "m(1,2)"
        combined = self.combined()
        if not combined:
            return ""
        factor = self.common_factor()
        if factor is not None:
            rational = BVClassVector(self.n, {key: value.terms[factor] for key, value in combined.items()})
            prefix = format_mzv(MZVExpr({factor: 1}))
            return f"{prefix}*({pretty_print_bv(rational)})" if factor else pretty_print_bv(rational)
        return pretty_print_bv(BVClassVector(self.n, combined))

    def printed_terms(self) -> List[Dict[str, Any]]:
        """
        Printed words with their display-signed coefficients, in canonical order.
        """
        if self.is_product:
            return [{"word": "m(1,2)", "coefficient": {"text": "1", "value": 1.0}}]
        terms = []
        combined = self.combined()
        for key in sorted(combined):
            word, sign = render_word(self.n, key)
            value = combined[key] * sign
            if isinstance(value, MZVExpr):
                coefficient = {"text": format_mzv(value), "value": _numeric(value)}
            else:
                coefficient = {"text": repr(float(value)), "value": float(value)}
            terms.append({"word": word, "coefficient": coefficient})
        return terms


def _numeric(expr: MZVExpr) -> float:
    return float(evaluate(expr))


def compute_gP(prime: ChordMonomial) -> BVClassVector:  # pylint: disable=invalid-name
    """
    The class paired with a prime form.

    This is the sum over all top-degree monomials ``c`` of the coefficient of
    ``prime`` in ``regularize(kz(c))`` times ``extract_bv(gamma_chain(c))``.
    """
    if prime.degree != prime.n - 3:
        raise DomainError(f"{prime} is not of top degree")
    return extract_bv(prime_chain(prime))


def compute_nu(  # pylint: disable=too-many-arguments
    n: int,
    period_mode: str = "symbolic_known",
    table: Optional[RelationTable] = None,
    workers: int = 1,
    method: str = "nested",
    tol: float = 1e-6,
    seed: int = 7,
) -> ExoticOperation:
    """
    Pair the period of every prime form with its class.
    """
    if n < 3:
        raise DomainError(f"Operations start at n=3, got {n}")
    if n == 3:
        return ExoticOperation(3, [], period_mode)
    if n == 4:
        return ExoticOperation(4, [], period_mode)

    periods = prime_periods(n, period_mode, method, tol, seed, table, workers)
    classes = parallel_map(compute_gP, [monomial for monomial, _, _ in periods], workers)
    terms = [
        ExoticTerm(monomial, bracketing, result.fitted, result.value, g)
        for (monomial, bracketing, result), g in zip(periods, classes)
    ]
    _logger.info("Assembled nu_%d from %d prime forms", n, len(terms))
    return ExoticOperation(n, terms, period_mode)


def nu_chain(operation: ExoticOperation) -> Dict[Monomial, GraphChain]:
    """
    Representative chains of an operation, one per MZV monomial.
    """
    if operation.is_product:
        return {(): GraphChain.unit(3)}
    pieces: Dict[Monomial, GraphChain] = {}
    for term in operation.terms:
        coefficient = term.coefficient
        if coefficient is None:
            raise DomainError(f"The period of {term.prime} has no MZV fit")
        chain = representative_chain(term.g)
        for monomial, value in coefficient.terms.items():
            scaled = chain.scale(value)
            pieces[monomial] = pieces[monomial] + scaled if monomial in pieces else scaled
    return pieces


def random_inputs(
    context: OddSymplecticContext,
    rng: np.random.Generator,
    count: int,
) -> List[GradedPoly]:
    """
    Random homogeneous inputs of degree between 0 and ``min(d, 2)``.
    """
    top = min(context.d, 2)
    return [random_poly(context, rng, int(rng.integers(0, top + 1))) for _ in range(count)]


def delta_closed_poly(context: OddSymplecticContext, rng: np.random.Generator) -> GradedPoly:
    """
    A random homogeneous polynomial killed by the odd Laplacian.

    Monomials pairing ``p_mu`` with ``q^mu`` are dropped.
    """
    poly = random_poly(context, rng, int(rng.integers(0, min(context.d, 2) + 1)), terms=4)
    terms = {
        exponents: value
        for exponents, value in poly.terms.items()
        if not any(exponents[context.q(mu)] and exponents[context.p(mu)] for mu in range(context.d))
    }
    if not terms:
        return random_poly(context, rng, 0)
    return GradedPoly(context, terms)


def _apply_to_value(
    operator: NuOperator,
    inputs: Sequence[GradedPoly],
    position: int,
    value: OperatorValue,
) -> OperatorValue:
    """
    Apply an operator with one slot filled by an MZV-valued polynomial.
    """
    result = OperatorValue(value.context)
    for monomial, poly in value.terms.items():
        arguments = list(inputs[:position]) + [poly] + list(inputs[position:])
        result = result + operator(arguments).times(MZVExpr({monomial: 1}))
    return result


def ainfty_residual(operators: Mapping[int, NuOperator], inputs: Sequence[GradedPoly]) -> OperatorValue:
    """
    The A-infinity relation on ``len(inputs)`` inputs, with ``mu_k`` the
    operator on ``k`` inputs.

    The summand for ``mu_{r+1+t}(1^r, mu_s, 1^t)`` carries the sign
    ``(-1)^(r + s t)`` times the Koszul sign of ``mu_s`` passing the first
    ``r`` inputs.
    """
    count = len(inputs)
    context = inputs[0].context
    degrees = [poly.degree for poly in inputs]
    total = OperatorValue(context)
    for inner_arity in range(2, count):
        inner = operators[inner_arity]
        if not inner.pieces:
            continue
        for r in range(count - inner_arity + 1):  # pylint: disable=invalid-name
            t = count - inner_arity - r  # pylint: disable=invalid-name
            outer = operators[r + 1 + t]
            if not outer.pieces:
                continue
            sign = (-1) ** (r + inner_arity * t) * (-1) ** (inner.degree * sum(degrees[:r]))
            value = inner(inputs[r : r + inner_arity])
            rest = list(inputs[:r]) + list(inputs[r + inner_arity :])
            total = total + _apply_to_value(outer, rest, r, value).scale(sign)
    return total


def _check(name: str, residual: float, tol: float, detail: str, witness: Any = None) -> CheckPayload:
    check: CheckPayload = {
        "name": name,
        "passed": residual <= tol,
        "residual": residual,
        "detail": detail,
    }
    if witness is not None and residual > tol:
        check["witness"] = witness
    return check


def _report(suite: str, checks: List[CheckPayload], caveats: List[str]) -> VerificationReport:
    return {
        "suite": suite,
        "passed": all(check["passed"] for check in checks),
        "checks": checks,
        "caveats": caveats,
    }


def ainfty_check(  # pylint: disable=too-many-arguments, too-many-locals
    max_arity: int = 7,
    d: int = 2,  # pylint: disable=invalid-name
    trials: int = 20,
    tol: float = 1e-8,
    seed: int = 7,
    perturbation: float = 0.0,
    period_mode: str = "symbolic_known",
    table: Optional[RelationTable] = None,
) -> VerificationReport:
    """
    Check the A-infinity relations up to ``max_arity`` on random inputs.

    The relation of arity ``a`` has ``a - 1`` inputs and uses the operations
    of arity below ``a``. A non-zero ``perturbation`` moves the periods of
    alternate prime forms apart, which breaks the relations from arity 7 on
    by an amount proportional to it.
    """
    if not 4 <= max_arity <= 8:
        raise DomainError(f"Arity must be between 4 and 8, got {max_arity}")

    operators = {
        k: NuOperator.build(k + 1, period_mode, table, perturbation)
        for k in range(2, max_arity - 1)
    }
    context = OddSymplecticContext.of(d)
    rng = np.random.default_rng(seed)
    checks = []
    for arity in range(4, max_arity + 1):
        worst = 0.0
        witness = None
        for trial in range(trials):
            inputs = random_inputs(context, rng, arity - 1)
            residual = ainfty_residual(operators, inputs).residual()
            _logger.debug("Arity %d, trial %d: residual %.3g", arity, trial, residual)
            if residual > worst:
                worst = residual
                witness = [str(poly) for poly in inputs]
        checks.append(
            _check(
                f"arity_{arity}",
                worst,
                tol,
                f"{trials} random trials on d={d}",
                witness,
            ),
        )
        _logger.info("A-infinity relation of arity %d: residual %.3g", arity, worst)
    return _report("ainfty", checks, [FINITE_D_CAVEAT.format(d=d), CHAIN_LEVEL_CAVEAT])


def derivation_residual(
    operator: NuOperator,
    hamiltonian: GradedPoly,
    inputs: Sequence[GradedPoly],
) -> OperatorValue:
    """
    ``{f, nu(g_1..g_k)} - sum_i (+-) nu(g_1, .., {f, g_i}, .., g_k)``.

    The sign of the ``i``-th term is ``(-1)^((|f| - 1)(|nu| + |g_1| + .. + |g_{i-1}|))``.
    """
    shift = hamiltonian.degree - 1
    value = operator(inputs)
    total = OperatorValue(
        value.context,
        {monomial: bracket(hamiltonian, poly) for monomial, poly in value.terms.items()},
    )
    passed = operator.degree
    for index, poly in enumerate(inputs):
        arguments = list(inputs)
        arguments[index] = bracket(hamiltonian, poly)
        sign = (-1) ** (shift * passed)
        total = total - operator(arguments).scale(sign)
        passed += poly.degree
    return total


def derivation_check(  # pylint: disable=too-many-arguments
    n: int,
    d: int = 2,  # pylint: disable=invalid-name
    trials: int = 20,
    tol: float = 1e-8,
    seed: int = 7,
    period_mode: str = "symbolic_known",
    table: Optional[RelationTable] = None,
) -> VerificationReport:
    """
    Check that brackets with Laplacian-closed polynomials are derivations of
    the operation of arity ``n``.
    """
    if not 3 <= n <= 6:
        raise DomainError(f"Derivation checks run for 3 <= n <= 6, got {n}")
    operator = NuOperator.build(n, period_mode, table)
    context = OddSymplecticContext.of(d)
    rng = np.random.default_rng(seed)
    worst = 0.0
    witness = None
    for _ in range(trials):
        hamiltonian = delta_closed_poly(context, rng)
        inputs = random_inputs(context, rng, n - 1)
        residual = derivation_residual(operator, hamiltonian, inputs).residual()
        if residual > worst:
            worst = residual
            witness = {"f": str(hamiltonian), "inputs": [str(poly) for poly in inputs]}
    checks = [_check(f"derivation_{n}", worst, tol, f"{trials} random trials on d={d}", witness)]
    return _report("derivation", checks, [FINITE_D_CAVEAT.format(d=d)])
