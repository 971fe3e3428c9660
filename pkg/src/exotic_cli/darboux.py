"""
Polydifferential operators on polynomials in odd Darboux coordinates.

The algebra is generated by ``q^1..q^d`` and ``p_1..p_d`` with
``|p_mu| = 1 - |q^mu|``. Variables ``0..d-1`` are the ``q``'s and
``d..2d-1`` the ``p``'s. A monomial is an exponent tuple, read as the product
of its variables in index order.
"""

import itertools
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from exotic_cli.exceptions import DomainError
from exotic_cli.graphs import GraphChain, GraphGenerator, GraphMonomial, prime_chain
from exotic_cli.mzv import Monomial, MZVExpr, RelationTable, evaluate, format_monomial
from exotic_cli.periods import prime_periods

_logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class OddSymplecticContext(NamedTuple):
    """
    Number of conjugate pairs and the degrees of the ``q`` variables.
    """

    d: int
    q_degrees: Tuple[int, ...]

    @classmethod
    def of(cls, d: int, q_degrees: Optional[Sequence[int]] = None) -> "OddSymplecticContext":
        """
        Build a context, defaulting to ``|q| = 0`` and ``|p| = 1``.
        """
        if d < 1:
            raise DomainError(f"Need at least one pair of variables, got d={d}")
        degrees = tuple(q_degrees) if q_degrees is not None else (0,) * d
        if len(degrees) != d:
            raise DomainError(f"Expected {d} degrees, got {len(degrees)}")
        return cls(d, degrees)

    @property
    def size(self) -> int:
        """
        Total number of variables.
        """
        return 2 * self.d

    def q(self, mu: int) -> int:  # pylint: disable=invalid-name
        """
        Index of ``q^mu`` (0-based ``mu``).
        """
        return mu

    def p(self, mu: int) -> int:  # pylint: disable=invalid-name
        """
        Index of ``p_mu`` (0-based ``mu``).
        """
        return self.d + mu

    def degree(self, var: int) -> int:
        """
        Degree of a variable.
        """
        if var < self.d:
            return self.q_degrees[var]
        return 1 - self.q_degrees[var - self.d]

    def name(self, var: int) -> str:
        """
        Printable name of a variable.
        """
        return f"q{var + 1}" if var < self.d else f"p{var - self.d + 1}"


@lru_cache(maxsize=None)
def _parities(context: OddSymplecticContext) -> Tuple[int, ...]:
    return tuple(context.degree(var) % 2 for var in range(context.size))


def _monomial_degree(context: OddSymplecticContext, exponents: Exponents) -> int:
    return sum(exponent * context.degree(var) for var, exponent in enumerate(exponents) if exponent)


def _multiply_monomials(
    context: OddSymplecticContext,
    left: Exponents,
    right: Exponents,
) -> Tuple[Optional[Exponents], int]:
    """
    Product of two monomials with the sign of moving odd factors into place.
    """
    parities = _parities(context)
    sign = 1
    for var, exponent in enumerate(right):
        if not exponent or not parities[var]:
            continue
        if left[var]:
            return None, 0
        passed = sum(left[other] for other in range(var + 1, context.size) if parities[other])
        if passed % 2:
            sign = -sign
    return tuple(a + b for a, b in zip(left, right)), sign


class GradedPoly:
    """
    A polynomial in graded-commutative variables with rational coefficients.
    """

    def __init__(self, context: OddSymplecticContext, terms: Optional[Mapping[Exponents, Scalar]] = None):
        self.context = context
        self.terms: Dict[Exponents, Fraction] = {}
        parities = _parities(context)
        for exponents, value in (terms or {}).items():
            if len(exponents) != context.size:
                raise DomainError(f"Monomial {exponents} does not match d={context.d}")
            if any(exponent > 1 for var, exponent in enumerate(exponents) if parities[var]):
                continue
            if value:
                self.terms[tuple(exponents)] = Fraction(value)

    @classmethod
    def constant(cls, context: OddSymplecticContext, value: Scalar = 1) -> "GradedPoly":
        """
        A constant polynomial.
        """
        return cls(context, {(0,) * context.size: value})

    @classmethod
    def variable(cls, context: OddSymplecticContext, var: int) -> "GradedPoly":
        """
        A single variable.
        """
        exponents = [0] * context.size
        exponents[var] = 1
        return cls(context, {tuple(exponents): 1})

    def _check(self, other: "GradedPoly") -> None:
        if self.context != other.context:
            raise DomainError("Polynomials live in different contexts")

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        self._check(other)
        terms = dict(self.terms)
        for exponents, value in other.terms.items():
            terms[exponents] = terms.get(exponents, Fraction(0)) + value
        return GradedPoly(self.context, terms)

    def __neg__(self) -> "GradedPoly":
        return self.scale(-1)

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        return self + (-other)

    def scale(self, factor: Scalar) -> "GradedPoly":
        """
        Multiply by a rational number.
        """
        return GradedPoly(self.context, {key: value * factor for key, value in self.terms.items()})

    def __mul__(self, other: "GradedPoly") -> "GradedPoly":
        self._check(other)
        terms: Dict[Exponents, Fraction] = {}
        for left, left_value in self.terms.items():
            for right, right_value in other.terms.items():
                product, sign = _multiply_monomials(self.context, left, right)
                if product is None:
                    continue
                terms[product] = terms.get(product, Fraction(0)) + sign * left_value * right_value
        return GradedPoly(self.context, terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def __repr__(self) -> str:
        return f"GradedPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exponents in sorted(self.terms):
            value = self.terms[exponents]
            factors = [
                self.context.name(var) + (f"^{exponent}" if exponent > 1 else "")
                for var, exponent in enumerate(exponents)
                if exponent
            ]
            body = "*".join(factors)
            if not body:
                text = str(abs(value))
            elif abs(value) == 1:
                text = body
            else:
                text = f"{abs(value)}*{body}"
            sign = "-" if value < 0 else "+"
            parts.append(f"{sign} {text}" if parts else ("-" if value < 0 else "") + text)
        return " ".join(parts)

    def is_zero(self) -> bool:
        """
        Whether the polynomial vanishes.
        """
        return not self.terms

    def max_abs(self) -> float:
        """
        Largest coefficient in absolute value.
        """
        return float(max((abs(value) for value in self.terms.values()), default=0))

    def homogeneous_parts(self) -> Dict[int, "GradedPoly"]:
        """
        Split into parts of fixed degree.
        """
        parts: Dict[int, Dict[Exponents, Fraction]] = {}
        for exponents, value in self.terms.items():
            parts.setdefault(_monomial_degree(self.context, exponents), {})[exponents] = value
        return {degree: GradedPoly(self.context, terms) for degree, terms in parts.items()}

    def parity_parts(self) -> Dict[int, "GradedPoly"]:
        """
        Split into even and odd parts.
        """
        parts: Dict[int, Dict[Exponents, Fraction]] = {}
        for exponents, value in self.terms.items():
            parts.setdefault(_monomial_degree(self.context, exponents) % 2, {})[exponents] = value
        return {parity: GradedPoly(self.context, terms) for parity, terms in parts.items()}

    @property
    def degree(self) -> int:
        """
        Degree of a homogeneous polynomial; zero counts as degree 0.
        """
        degrees = set(self.homogeneous_parts())
        if len(degrees) > 1:
            raise DomainError(f"{self} is not homogeneous")
        return degrees.pop() if degrees else 0

    def derivative(self, var: int) -> "GradedPoly":
        """
        Left derivative in a variable.
        """
        parities = _parities(self.context)
        terms: Dict[Exponents, Fraction] = {}
        for exponents, value in self.terms.items():
            exponent = exponents[var]
            if not exponent:
                continue
            if parities[var]:
                passed = sum(exponents[other] for other in range(var) if parities[other])
                factor = -1 if passed % 2 else 1
            else:
                factor = exponent
            lowered = exponents[:var] + (exponent - 1,) + exponents[var + 1 :]
            terms[lowered] = terms.get(lowered, Fraction(0)) + factor * value
        return GradedPoly(self.context, terms)

    def substitute(self, images: Sequence["GradedPoly"]) -> "GradedPoly":
        """
        Replace every variable by a polynomial of the same degree.
        """
        result = GradedPoly(self.context)
        for exponents, value in self.terms.items():
            product = GradedPoly.constant(self.context, value)
            for var, exponent in enumerate(exponents):
                for _ in range(exponent):
                    product = product * images[var]
            result = result + product
        return result


def mul(f: GradedPoly, g: GradedPoly) -> GradedPoly:  # pylint: disable=invalid-name
    """
    Graded-commutative product.
    """
    return f * g


def delta(f: GradedPoly) -> GradedPoly:  # pylint: disable=invalid-name
    """
    The odd Laplacian ``sum_mu d/dp_mu d/dq^mu``.
    """
    context = f.context
    result = GradedPoly(context)
    for mu in range(context.d):  # pylint: disable=invalid-name
        result = result + f.derivative(context.q(mu)).derivative(context.p(mu))
    return result


def bracket(f: GradedPoly, g: GradedPoly) -> GradedPoly:  # pylint: disable=invalid-name
    """
    The bracket ``Delta(fg) - Delta(f) g - (-1)^|f| f Delta(g)``.
    """
    result = GradedPoly(f.context)
    delta_g = delta(g)
    for degree, part in f.homogeneous_parts().items():
        term = delta(part * g) - delta(part) * g - (part * delta_g).scale((-1) ** degree)
        result = result + term
    return result


Tensor = List[Tuple[Fraction, Tuple[GradedPoly, ...]]]


def _parity(poly: GradedPoly) -> int:
    parts = poly.parity_parts()
    if len(parts) > 1:
        raise DomainError(f"{poly} has mixed parity")
    return next(iter(parts), 0)


def _split_parities(tensor: Tensor) -> Tensor:
    split: Tensor = []
    for value, factors in tensor:
        options = [list(factor.parity_parts().values()) or [factor] for factor in factors]
        for choice in itertools.product(*options):
            split.append((value, tuple(choice)))
    return split


def _partial(tensor: Tensor, factor: int, var: int) -> Tensor:
    """
    Apply a derivative to one tensor factor, with the Koszul sign of passing
    the factors in front of it.
    """
    result: Tensor = []
    for value, factors in _split_parities(tensor):
        if not 0 <= factor < len(factors):
            raise DomainError(f"Factor {factor + 1} is out of range 1..{len(factors)}")
        context = factors[factor].context
        passed = sum(_parity(other) for other in factors[:factor])
        sign = -1 if _parities(context)[var] and passed % 2 else 1
        derived = factors[factor].derivative(var)
        if not derived.is_zero():
            result.append((value * sign, factors[:factor] + (derived,) + factors[factor + 1 :]))
    return result


def d_edge(i: int, j: int) -> Callable[[Tensor], Tensor]:  # pylint: disable=invalid-name
    """
    Operator pairing factors ``i`` and ``j`` (1-based).
    """
    if not 1 <= i < j:
        raise DomainError(f"Invalid edge ({i}, {j})")

    def operator(tensor: Tensor) -> Tensor:
        result: Tensor = []
        if not tensor:
            return result
        context = tensor[0][1][0].context
        for mu in range(context.d):  # pylint: disable=invalid-name
            for first, second in ((i, j), (j, i)):
                derived = _partial(tensor, second - 1, context.q(mu))
                result += _partial(derived, first - 1, context.p(mu))
        return result

    return operator


def d_tadpole(k: int) -> Callable[[Tensor], Tensor]:  # pylint: disable=invalid-name
    """
    Operator applying the odd Laplacian to factor ``k`` (1-based).
    """
    if k < 1:
        raise DomainError(f"Invalid tadpole {k}")

    def operator(tensor: Tensor) -> Tensor:
        result: Tensor = []
        if not tensor:
            return result
        context = tensor[0][1][0].context
        for mu in range(context.d):  # pylint: disable=invalid-name
            derived = _partial(tensor, k - 1, context.q(mu))
            result += _partial(derived, k - 1, context.p(mu))
        return result

    return operator


def multiply(tensor: Tensor) -> GradedPoly:
    """
    Multiply out the factors of every tensor term and sum.
    """
    if not tensor:
        raise DomainError("Cannot multiply an empty tensor without a context")
    context = tensor[0][1][0].context
    result = GradedPoly(context)
    for value, factors in tensor:
        product = GradedPoly.constant(context, value)
        for factor in factors:
            product = product * factor
        result = result + product
    return result


class GraphEvaluator:
    """
    Evaluate graph operators on a fixed input tuple.

    Inputs are split into parity-homogeneous parts, and derivatives of each
    part are cached by the sequence of variables applied, so evaluating many
    graphs on the same inputs is cheap.
    """

    def __init__(self, inputs: Sequence[GradedPoly]):
        if not inputs:
            raise DomainError("Graph operators need at least one input")
        self.context = inputs[0].context
        for poly in inputs:
            if poly.context != self.context:
                raise DomainError("Inputs live in different contexts")
        self.inputs = list(inputs)
        self.parts = [sorted(poly.parity_parts().items()) for poly in inputs]
        self._cache: Dict[Tuple[int, int, Tuple[int, ...]], GradedPoly] = {}

    def _derived(self, factor: int, part: int, sequence: Tuple[int, ...]) -> GradedPoly:
        key = (factor, part, sequence)
        if key not in self._cache:
            if sequence:
                self._cache[key] = self._derived(factor, part, sequence[:-1]).derivative(sequence[-1])
            else:
                self._cache[key] = self.parts[factor][part][1]
        return self._cache[key]

    def _choices(self, generator: GraphGenerator) -> List[Tuple[int, int, int]]:
        count = len(self.inputs)
        if max(generator.indices()) > count:
            raise DomainError(f"Generator {generator} needs more than {count} inputs")
        if generator.is_edge:
            orientations = [(generator.i, generator.j), (generator.j, generator.i)]
        else:
            orientations = [(generator.i, generator.i)]
        return [(first - 1, second - 1, mu) for first, second in orientations for mu in range(self.context.d)]

    def word(self, generators: Sequence[GraphGenerator]) -> GradedPoly:
        """
        Apply ``m o D_{g_1} o ... o D_{g_r}``, with ``D_{g_r}`` acting first.
        """
        context = self.context
        parities = _parities(context)
        count = len(self.inputs)
        choices = [self._choices(generator) for generator in generators]
        result = GradedPoly(context)
        if any(not part for part in self.parts):
            return result

        for part_choice in itertools.product(*(range(len(part)) for part in self.parts)):
            start = [self.parts[factor][part][0] for factor, part in enumerate(part_choice)]
            for assignment in itertools.product(*choices):
                current = list(start)
                sequences: List[List[int]] = [[] for _ in range(count)]
                sign = 1
                for p_factor, q_factor, mu in reversed(assignment):  # pylint: disable=invalid-name
                    for factor, var in ((q_factor, context.q(mu)), (p_factor, context.p(mu))):
                        if parities[var] and sum(current[:factor]) % 2:
                            sign = -sign
                        current[factor] ^= parities[var]
                        sequences[factor].append(var)

                factors = []
                for factor in range(count):
                    derived = self._derived(factor, part_choice[factor], tuple(sequences[factor]))
                    if derived.is_zero():
                        break
                    factors.append(derived)
                else:
                    product = GradedPoly.constant(context, sign)
                    for derived in factors:
                        product = product * derived
                    result = result + product
        return result

    def chain(self, chain: GraphChain) -> GradedPoly:
        """
        Apply every word of a chain, weighted by its coefficient.
        """
        result = GradedPoly(self.context)
        for key, value in chain.terms.items():
            result = result + self.word(key).scale(value)
        return result


def apply_graph(graph: GraphMonomial, inputs: Sequence[GradedPoly]) -> GradedPoly:
    """
    Evaluate the operator of a signed graph word on ``n - 1`` inputs.
    """
    if len(inputs) != graph.n - 1:
        raise DomainError(f"A graph for n={graph.n} takes {graph.n - 1} inputs, got {len(inputs)}")
    return GraphEvaluator(inputs).word(graph.generators).scale(graph.sign)


def apply_chain(chain: GraphChain, inputs: Sequence[GradedPoly]) -> GradedPoly:
    """
    Evaluate the operator of a chain on ``n - 1`` inputs.
    """
    if len(inputs) != chain.n - 1:
        raise DomainError(f"A chain for n={chain.n} takes {chain.n - 1} inputs, got {len(inputs)}")
    return GraphEvaluator(inputs).chain(chain)


class OperatorValue:
    """
    The value of an operator with MZV coefficients: a polynomial per MZV
    monomial.
    """

    def __init__(self, context: OddSymplecticContext, terms: Optional[Mapping[Monomial, GradedPoly]] = None):
        self.context = context
        self.terms: Dict[Monomial, GradedPoly] = {}
        for monomial, poly in (terms or {}).items():
            key = tuple(sorted(monomial))
            total = self.terms[key] + poly if key in self.terms else poly
            if total.is_zero():
                self.terms.pop(key, None)
            else:
                self.terms[key] = total

    @classmethod
    def rational(cls, poly: GradedPoly) -> "OperatorValue":
        """
        A value with a rational coefficient.
        """
        return cls(poly.context, {(): poly})

    def __add__(self, other: "OperatorValue") -> "OperatorValue":
        terms = dict(self.terms)
        for monomial, poly in other.terms.items():
            terms[monomial] = terms[monomial] + poly if monomial in terms else poly
        return OperatorValue(self.context, terms)

    def __sub__(self, other: "OperatorValue") -> "OperatorValue":
        return self + other.scale(-1)

    def scale(self, factor: Scalar) -> "OperatorValue":
        """
        Multiply by a rational number.
        """
        return OperatorValue(self.context, {key: poly.scale(factor) for key, poly in self.terms.items()})

    def times(self, coefficient: MZVExpr) -> "OperatorValue":
        """
        Multiply by an MZV expression, formally.
        """
        terms: Dict[Monomial, GradedPoly] = {}
        for monomial, poly in self.terms.items():
            for other, value in coefficient.terms.items():
                key = tuple(sorted(monomial + other))
                scaled = poly.scale(value)
                terms[key] = terms[key] + scaled if key in terms else scaled
        return OperatorValue(self.context, terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorValue):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        return "OperatorValue({" + ", ".join(
            f"{format_monomial(key)}: {poly}" for key, poly in sorted(self.terms.items())
        ) + "})"

    def is_zero(self) -> bool:
        """
        Whether every polynomial vanishes.
        """
        return not self.terms

    def reduce(self, table: RelationTable) -> "OperatorValue":
        """
        Rewrite MZV monomials through a relation table.
        """
        terms: Dict[Monomial, GradedPoly] = {}
        for monomial, poly in self.terms.items():
            for key, value in table.reduce(MZVExpr({monomial: 1})).terms.items():
                scaled = poly.scale(value)
                terms[key] = terms[key] + scaled if key in terms else scaled
        return OperatorValue(self.context, terms)

    def numeric(self, digits: int = 15) -> Dict[Exponents, float]:
        """
        Collapse MZV coefficients to floats.
        """
        values: Dict[Exponents, float] = {}
        for monomial, poly in self.terms.items():
            weight = float(evaluate(MZVExpr({monomial: 1}), digits))
            for exponents, value in poly.terms.items():
                values[exponents] = values.get(exponents, 0.0) + weight * float(value)
        return values

    def residual(self, digits: int = 15) -> float:
        """
        Largest numeric coefficient in absolute value.
        """
        return max((abs(value) for value in self.numeric(digits).values()), default=0.0)


class NuOperator:
    """
    The operator of arity ``n`` in Darboux coordinates: a graph chain per
    MZV monomial.
    """

    def __init__(self, n: int, pieces: Mapping[Monomial, GraphChain]):
        self.n = n
        self.pieces = dict(pieces)

    @property
    def degree(self) -> int:
        """
        Degree of the operator on ``n - 1`` inputs.
        """
        return 3 - self.n

    @classmethod
    def build(  # pylint: disable=too-many-arguments
        cls,
        n: int,
        period_mode: str = "symbolic_known",
        table: Optional[RelationTable] = None,
        perturbation: float = 0.0,
        **period_options,
    ) -> "NuOperator":
        """
        Pair every prime form's period with its chain ``sum_c <reg(c), P> gamma(c)``.

        A non-zero ``perturbation`` scales the period of the ``k``-th prime
        form by ``1 + (-1)**k * perturbation``. With a single prime form this
        only rescales the operator.
        """
        if n < 3:
            raise DomainError(f"Operators start at n=3, got {n}")
        if n == 3:
            return cls(3, {(): GraphChain.unit(3)})
        if n == 4:
            return cls(4, {})

        pieces: Dict[Monomial, GraphChain] = {}
        results = prime_periods(n, period_mode, table=table, **period_options)
        for index, (prime, _, result) in enumerate(results):
            chain = prime_chain(prime)
            coefficient = result.fitted
            if coefficient is None:
                _logger.warning("Using the numeric period of %s", prime)
                coefficient = MZVExpr({(): Fraction(result.value)})
            if perturbation:
                coefficient = coefficient.scale(1 + (-1) ** index * Fraction(str(perturbation)))
            for monomial, value in coefficient.terms.items():
                scaled = chain.scale(value)
                pieces[monomial] = pieces[monomial] + scaled if monomial in pieces else scaled
        _logger.info("Built the n=%d operator with %d coefficient classes", n, len(pieces))
        return cls(n, pieces)

    def __call__(self, inputs: Sequence[GradedPoly]) -> OperatorValue:
        if len(inputs) != self.n - 1:
            raise DomainError(f"nu_{self.n} takes {self.n - 1} inputs, got {len(inputs)}")
        context = inputs[0].context
        evaluator = GraphEvaluator(inputs)
        terms = {monomial: evaluator.chain(chain) for monomial, chain in self.pieces.items()}
        return OperatorValue(context, terms)


def nu_operator(
    n: int,
    inputs: Sequence[GradedPoly],
    period_mode: str = "symbolic_known",
    table: Optional[RelationTable] = None,
) -> OperatorValue:
    """
    Evaluate the arity ``n`` operation of the Darboux formula on inputs.
    """
    return NuOperator.build(n, period_mode, table)(inputs)


def leibniz_witness(n: int, inputs: Sequence[GradedPoly]) -> GradedPoly:
    """
    Difference of the two sides of the Leibniz expansion
    ``d/dp (f_1 ... f_{n-2} d/dq g)``, summed over the pairs.

    The last input plays the role of ``g``; the result is zero.
    """
    if len(inputs) != n - 1:
        raise DomainError(f"Expected {n - 1} inputs, got {len(inputs)}")
    context = inputs[0].context
    *factors, last = inputs
    difference = GradedPoly(context)
    for mu in range(context.d):  # pylint: disable=invalid-name
        p_var = context.p(mu)
        inner = last.derivative(context.q(mu))
        tensor: Tensor = [(Fraction(1), tuple(factors) + (inner,))]
        left = _product(context, list(factors) + [inner]).derivative(p_var)
        right = GradedPoly(context)
        for index in range(len(factors) + 1):
            derived = _partial(tensor, index, p_var)
            if derived:
                right = right + multiply(derived)
        difference = difference + left - right
    return difference


def _product(context: OddSymplecticContext, factors: Iterable[GradedPoly]) -> GradedPoly:
    result = GradedPoly.constant(context)
    for factor in factors:
        result = result * factor
    return result


def random_poly(  # pylint: disable=too-many-arguments
    context: OddSymplecticContext,
    rng: np.random.Generator,
    degree: int = 0,
    terms: int = 3,
    max_exponent: int = 3,
    max_coefficient: int = 3,
) -> GradedPoly:
    """
    A random homogeneous polynomial with small integer coefficients.

    Even variables get exponents up to ``max_exponent``; odd ones at most 1.
    """
    parities = _parities(context)
    found: Dict[Exponents, int] = {}
    for _ in range(200 * terms):
        if len(found) >= terms:
            break
        exponents = tuple(
            int(rng.integers(0, 2 if parities[var] else max_exponent + 1))
            for var in range(context.size)
        )
        if _monomial_degree(context, exponents) != degree:
            continue
        value = int(rng.integers(1, max_coefficient + 1)) * (1 if rng.random() < 0.5 else -1)
        found[exponents] = value
    if not found:
        raise DomainError(f"No monomials of degree {degree} for d={context.d}")
    return GradedPoly(context, found)


def _to_fraction(value: sympy.Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def symplectic_transform(
    poly: GradedPoly,
    matrix: Sequence[Sequence[Scalar]],
    shift: Optional[Sequence[Scalar]] = None,
) -> GradedPoly:
    """
    Substitute ``q -> A q + c`` and ``p -> A^{-T} p``.

    This preserves the odd symplectic form, so it commutes with the odd
    Laplacian and the bracket.
    """
    context = poly.context
    d = context.d  # pylint: disable=invalid-name
    if len(set(context.q_degrees)) > 1:
        raise DomainError("Linear changes of variables need equal q degrees")
    forward = sympy.Matrix(d, d, lambda row, column: sympy.Rational(str(Fraction(matrix[row][column]))))
    if forward.det() == 0:
        raise DomainError("The matrix is not invertible")
    dual = forward.inv().T
    shift = shift or [0] * d
    if shift and any(shift) and context.q_degrees[0] != 0:
        raise DomainError("Only degree 0 coordinates can be shifted")

    images = []
    for row in range(d):
        image = GradedPoly.constant(context, Fraction(shift[row]))
        for column in range(d):
            image = image + GradedPoly.variable(context, context.q(column)).scale(
                _to_fraction(forward[row, column]),
            )
        images.append(image)
    for row in range(d):
        image = GradedPoly(context)
        for column in range(d):
            image = image + GradedPoly.variable(context, context.p(column)).scale(
                _to_fraction(dual[row, column]),
            )
        images.append(image)
    return poly.substitute(images)


def bv_axiom_residuals(
    context: OddSymplecticContext,
    rng: np.random.Generator,
    trials: int = 10,
) -> Dict[str, float]:
    """
    Largest coefficient of each BV identity over random homogeneous inputs.

    All residuals are exactly zero when the sign conventions are coherent.
    """
    residuals = {
        "delta_squared": 0.0,
        "bracket_symmetry": 0.0,
        "bracket_leibniz": 0.0,
        "bracket_jacobi": 0.0,
        "delta_bracket": 0.0,
    }
    max_degree = min(context.d, 2)
    for _ in range(trials):
        a, b, c = (  # pylint: disable=invalid-name
            random_poly(context, rng, int(rng.integers(0, max_degree + 1))) for _ in range(3)
        )
        da, db = a.degree, b.degree  # pylint: disable=invalid-name
        checks = {
            "delta_squared": delta(delta(a)),
            "bracket_symmetry": bracket(b, a) - bracket(a, b).scale((-1) ** (da * db)),
            "bracket_leibniz": bracket(a, b * c)
            - bracket(a, b) * c
            - (b * bracket(a, c)).scale((-1) ** ((da - 1) * db)),
            "bracket_jacobi": bracket(a, bracket(b, c))
            - bracket(bracket(a, b), c).scale((-1) ** (da + 1))
            - bracket(b, bracket(a, c)).scale((-1) ** ((da - 1) * (db - 1))),
            "delta_bracket": delta(bracket(a, b))
            + bracket(delta(a), b)
            + bracket(a, delta(b)).scale((-1) ** da),
        }
        for name, value in checks.items():
            residuals[name] = max(residuals[name], value.max_abs())
    return residuals
