"""
Multiple zeta values: formal expressions, numerics and relation tables.

Words follow the convention ``zeta(k_1,...,k_r) = sum_{0<n_1<...<n_r}
1/(n_1^k_1 ... n_r^k_r)``, so convergence needs ``k_r >= 2``.
"""

import itertools
import logging
import math
import os
import re
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import mpmath
import yaml
from marshmallow import ValidationError

from exotic_cli.config import MAX_DIGITS
from exotic_cli.exceptions import AmbiguousFitError, DomainError, PrecisionError, RelationTableError
from exotic_cli.schemas import RelationTableSchema

_logger = logging.getLogger(__name__)

DEFAULT_TABLE = Path(__file__).parent / "data" / "mzv_relations.yaml"

TABLE_ENVVAR = "EXOTIC_MZV_TABLE"

# numeric tolerance for the self-validation of relation tables
VALIDATION_TOLERANCE = 1e-10


class MZVWord(NamedTuple):
    """
    A convergent multiple zeta value.
    """

    exponents: Tuple[int, ...]

    @classmethod
    def of(cls, *exponents: int) -> "MZVWord":
        """
        Build and validate a word.
        """
        if not exponents or any(k < 1 for k in exponents) or exponents[-1] < 2:
            raise DomainError(f"zeta{exponents} is not a convergent word")
        return cls(tuple(exponents))

    @property
    def weight(self) -> int:
        """
        Sum of the exponents.
        """
        return sum(self.exponents)

    @property
    def depth(self) -> int:
        """
        Number of exponents.
        """
        return len(self.exponents)

    def __str__(self) -> str:
        return "zeta(" + ",".join(str(k) for k in self.exponents) + ")"


Monomial = Tuple[MZVWord, ...]
Scalar = Union[int, Fraction]


def monomial_weight(monomial: Monomial) -> int:
    """
    Weight of a product of words.
    """
    return sum(word.weight for word in monomial)


def format_monomial(monomial: Monomial) -> str:
    """
    Render a monomial, grouping repeated words as powers.
    """
    if not monomial:
        return "1"
    parts = []
    for word, group in itertools.groupby(monomial):
        power = len(list(group))
        parts.append(f"{word}^{power}" if power > 1 else str(word))
    return "*".join(parts)


class MZVExpr:
    """
    A rational combination of products of multiple zeta values.
    """

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        self.terms: Dict[Monomial, Fraction] = {}
        for monomial, value in (terms or {}).items():
            key = tuple(sorted(monomial))
            total = self.terms.get(key, Fraction(0)) + Fraction(value)
            if total:
                self.terms[key] = total
            else:
                self.terms.pop(key, None)

    @classmethod
    def one(cls) -> "MZVExpr":
        """
        The unit.
        """
        return cls({(): 1})

    @classmethod
    def zeta(cls, *exponents: int) -> "MZVExpr":
        """
        A single word with coefficient 1.
        """
        return cls({(MZVWord.of(*exponents),): 1})

    def __add__(self, other: "MZVExpr") -> "MZVExpr":
        terms = dict(self.terms)
        for monomial, value in other.terms.items():
            terms[monomial] = terms.get(monomial, Fraction(0)) + value
        return MZVExpr(terms)

    def __neg__(self) -> "MZVExpr":
        return self.scale(-1)

    def __sub__(self, other: "MZVExpr") -> "MZVExpr":
        return self + (-other)

    def scale(self, factor: Scalar) -> "MZVExpr":
        """
        Multiply by a rational number.
        """
        return MZVExpr({monomial: value * factor for monomial, value in self.terms.items()})

    def __mul__(self, other: Union["MZVExpr", Scalar]) -> "MZVExpr":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        terms: Dict[Monomial, Fraction] = {}
        for (left, left_value), (right, right_value) in itertools.product(
            self.terms.items(),
            other.terms.items(),
        ):
            monomial = tuple(sorted(left + right))
            terms[monomial] = terms.get(monomial, Fraction(0)) + left_value * right_value
        return MZVExpr(terms)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MZVExpr.one().scale(other)
        if not isinstance(other, MZVExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"MZVExpr({format_mzv(self)!r})"

    def __str__(self) -> str:
        return format_mzv(self)

    def is_zero(self) -> bool:
        """
        Whether every coefficient vanishes.
        """
        return not self.terms

    def weights(self) -> List[int]:
        """
        Sorted weights of the monomials present.
        """
        return sorted({monomial_weight(monomial) for monomial in self.terms})


def _check_digits(digits: int) -> None:
    if not 1 <= digits <= MAX_DIGITS:
        raise PrecisionError(
            f"Cannot evaluate to {digits} digits, the cap is {MAX_DIGITS}",
            extra={"digits": digits},
        )


def _letters(exponents: Sequence[int]) -> Tuple[int, ...]:
    """
    Encode a word as an iterated integral, read from 1 down to 0.

    ``0`` stands for ``dt/t`` and ``1`` for ``dt/(1-t)``.
    """
    letters: List[int] = []
    for k in reversed(exponents):
        letters += [0] * (k - 1) + [1]
    return tuple(letters)


def _exponents(letters: Sequence[int]) -> Tuple[int, ...]:
    blocks = []
    zeros = 0
    for letter in letters:
        if letter == 0:
            zeros += 1
        else:
            blocks.append(zeros + 1)
            zeros = 0
    return tuple(reversed(blocks))


def _polylog_half(exponents: Tuple[int, ...], terms: int) -> mpmath.mpf:
    """
    Nested series of a multiple polylogarithm at ``1/2``.

    The largest summation index carries the power of ``1/2``.
    """
    if not exponents:
        return mpmath.mpf(1)
    values = [mpmath.mpf(0)] + [mpmath.mpf(1) / mpmath.mpf(m) ** exponents[0] for m in range(1, terms)]
    for k in exponents[1:]:
        partial = mpmath.mpf(0)
        nested = [mpmath.mpf(0)] * terms
        for m in range(1, terms):
            nested[m] = partial / mpmath.mpf(m) ** k
            partial += values[m]
        values = nested
    half = mpmath.mpf(1) / 2
    return mpmath.fsum(values[m] * half**m for m in range(1, terms))


@lru_cache(maxsize=None)
def mzv_value(word: MZVWord, digits: int = 15) -> mpmath.mpf:
    """
    Evaluate a word numerically.

    Depth one uses ``mpmath.zeta``. Deeper words split the iterated integral
    at ``1/2``: the piece near 1 is mapped to a piece near 0 by ``t -> 1-t``,
    and both pieces are geometrically convergent series.
    """
    _check_digits(digits)
    with mpmath.workdps(digits + 10):
        if word.depth == 1:
            return +mpmath.zeta(word.exponents[0])

        terms = int((digits + 10) * math.log2(10)) + 20
        letters = _letters(word.exponents)
        total = mpmath.mpf(0)
        for cut in range(len(letters) + 1):
            head = tuple(1 - letter for letter in reversed(letters[:cut]))
            tail = letters[cut:]
            total += _polylog_half(_exponents(head), terms) * _polylog_half(_exponents(tail), terms)
        return +total


def evaluate(expr: MZVExpr, digits: int = 15) -> mpmath.mpf:
    """
    Numeric value of an expression.
    """
    _check_digits(digits)
    with mpmath.workdps(digits + 10):
        total = mpmath.mpf(0)
        for monomial, value in expr.terms.items():
            product = mpmath.mpf(value.numerator) / value.denominator
            for word in monomial:
                product *= mzv_value(word, digits)
            total += product
        return +total


class RelationTable:
    """
    Per-weight bases and rewriting rules for monomials.
    """

    def __init__(
        self,
        basis: Optional[Mapping[int, Sequence[Monomial]]] = None,
        relations: Optional[Mapping[Monomial, MZVExpr]] = None,
        source: Optional[str] = None,
    ):
        self.basis: Dict[int, List[Monomial]] = {
            weight: list(monomials) for weight, monomials in (basis or {}).items()
        }
        self.relations: Dict[Monomial, MZVExpr] = dict(relations or {})
        self.source = source

    @classmethod
    def empty(cls) -> "RelationTable":
        """
        A table that leaves every product formal.
        """
        return cls(source="formal")

    @property
    def weights(self) -> List[int]:
        """
        Weights covered by the table.
        """
        return sorted(self.basis)

    def reduce(self, expr: MZVExpr) -> MZVExpr:
        """
        Rewrite monomials of covered weights in the basis.
        """
        result = MZVExpr()
        for monomial, value in expr.terms.items():
            if monomial in self.relations:
                result = result + self.relations[monomial].scale(value)
                continue
            weight = monomial_weight(monomial)
            if weight in self.basis and monomial not in self.basis[weight]:
                _logger.debug("No relation for %s at weight %d", format_monomial(monomial), weight)
            result = result + MZVExpr({monomial: value})
        return result

    def validate(self, digits: int = 15, tol: float = VALIDATION_TOLERANCE) -> None:
        """
        Check every relation numerically.
        """
        for weight, monomials in self.basis.items():
            for monomial in monomials:
                if monomial_weight(monomial) != weight:
                    raise RelationTableError(
                        f"Basis element {format_monomial(monomial)} does not have weight {weight}",
                    )
        for monomial, image in self.relations.items():
            if image.weights() not in ([], [monomial_weight(monomial)]):
                raise RelationTableError(
                    f"Relation for {format_monomial(monomial)} mixes weights",
                )
            residual = evaluate(MZVExpr({monomial: 1}) - image, digits)
            if abs(residual) > tol:
                raise RelationTableError(
                    f"Relation {format_monomial(monomial)} = {image} fails numerically",
                    extra={"residual": float(residual)},
                )
        _logger.debug("Validated %d relations from %s", len(self.relations), self.source)


def parse_monomial(text: str) -> Monomial:
    """
    Parse a product such as ``zeta(2)^2*zeta(3)``.
    """
    text = text.strip()
    if text == "1":
        return ()
    words: List[MZVWord] = []
    for factor in text.split("*"):
        match = re.fullmatch(r"\s*zeta\(([\d,\s]+)\)(?:\^(\d+))?\s*", factor)
        if not match:
            raise DomainError(f"Cannot parse MZV factor {factor!r}")
        word = MZVWord.of(*(int(k) for k in match.group(1).split(",")))
        words += [word] * int(match.group(2) or 1)
    return tuple(sorted(words))


_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?)?\s*((?:zeta\([\d,\s]+\)(?:\^\d+)?)(?:\s*\*\s*zeta\([\d,\s]+\)(?:\^\d+)?)*)?",
)


def parse_mzv(text: str) -> MZVExpr:
    """
    Parse an expression such as ``5/2*zeta(4) - zeta(2)^2``.
    """
    text = text.strip()
    if text in {"", "0"}:
        return MZVExpr()
    terms: Dict[Monomial, Fraction] = {}
    position = 0
    while position < len(text):
        match = _TERM.match(text, position)
        if not match or match.end() == position or not (match.group(2) or match.group(3)):
            raise DomainError(f"Cannot parse MZV expression {text!r}")
        if position and not match.group(1):
            raise DomainError(f"Missing operator in {text!r}")
        sign = -1 if match.group(1) == "-" else 1
        coefficient = Fraction(match.group(2) or 1) * sign
        monomial = parse_monomial(match.group(3)) if match.group(3) else ()
        terms[monomial] = terms.get(monomial, Fraction(0)) + coefficient
        position = match.end()
    return MZVExpr(terms)


def format_mzv(expr: MZVExpr) -> str:
    """
    Render an expression, eg, ``5/2*zeta(4)``.
    """
    if not expr.terms:
        return "0"
    parts = []
    for monomial in sorted(expr.terms, key=lambda monomial: (monomial_weight(monomial), monomial)):
        value = expr.terms[monomial]
        magnitude = abs(value)
        if not monomial:
            body = str(magnitude)
        elif magnitude == 1:
            body = format_monomial(monomial)
        else:
            body = f"{magnitude}*{format_monomial(monomial)}"
        if not parts:
            parts.append(("-" if value < 0 else "") + body)
        else:
            parts.append((" - " if value < 0 else " + ") + body)
    return "".join(parts)


def load_relation_table(path: Optional[Path] = None, digits: int = 15) -> RelationTable:
    """
    Load and validate a relation table.

    Without an explicit path the ``EXOTIC_MZV_TABLE`` environment variable
    is used, falling back to the packaged weight 4 table.
    """
    if path is None:
        path = Path(os.environ[TABLE_ENVVAR]) if os.environ.get(TABLE_ENVVAR) else DEFAULT_TABLE
    _logger.info("Loading MZV relations from %s", path)
    try:
        with open(path, encoding="utf-8") as input_:
            payload = yaml.load(input_, Loader=yaml.SafeLoader)
        contents = RelationTableSchema().load(payload or {})
    except (OSError, yaml.YAMLError, ValidationError) as excinfo:
        raise RelationTableError(f"Unable to load relation table {path}: {excinfo}") from excinfo

    basis: Dict[int, List[Monomial]] = {}
    relations: Dict[Monomial, MZVExpr] = {}
    try:
        for entry in contents["weights"]:
            basis[entry["weight"]] = [parse_monomial(text) for text in entry["basis"]]
            for text, combination in entry["relations"].items():
                relations[parse_monomial(text)] = MZVExpr(
                    {parse_monomial(str(word)): Fraction(str(value)) for value, word in combination},
                )
    except (DomainError, ValueError, ZeroDivisionError) as excinfo:
        raise RelationTableError(f"Malformed relation table {path}: {excinfo}") from excinfo

    table = RelationTable(basis, relations, str(path))
    table.validate(digits)
    return table


@lru_cache(maxsize=1)
def default_table() -> RelationTable:
    """
    The packaged table, loaded once.
    """
    return load_relation_table(DEFAULT_TABLE)


def mzv_mul(a: MZVExpr, b: MZVExpr, table: Optional[RelationTable] = None) -> MZVExpr:  # pylint: disable=invalid-name
    """
    Multiply two expressions and reduce covered weights through the table.
    """
    table = default_table() if table is None else table
    return table.reduce(a * b)


def _candidates(
    target: float,
    values: Sequence[float],
    tol: float,
    denom_bound: int,
    coefficient_bound: int,
) -> Iterable[Tuple[Fraction, ...]]:
    """
    Rational coefficient vectors with a common denominator up to the bound.
    """
    for denominator in range(1, denom_bound + 1):
        ranges = [
            range(-coefficient_bound * denominator, coefficient_bound * denominator + 1)
            for _ in values[:-1]
        ]
        for numerators in itertools.product(*ranges):
            rest = target * denominator - sum(p * v for p, v in zip(numerators, values))
            last = round(rest / values[-1])
            coefficients = tuple(Fraction(p, denominator) for p in (*numerators, last))
            approximation = sum(float(c) * v for c, v in zip(coefficients, values))
            if abs(approximation - target) <= tol:
                yield coefficients


def fit_mzv(  # pylint: disable=too-many-arguments
    x: float,  # pylint: disable=invalid-name
    weight: int,
    tol: float = 1e-9,
    denom_bound: int = 100,
    table: Optional[RelationTable] = None,
    coefficient_bound: int = 10,
) -> Optional[MZVExpr]:
    """
    Recognize a real number as a rational combination of basis words.

    Returns ``None`` when nothing matches, and raises ``AmbiguousFitError``
    when two different combinations match.
    """
    table = default_table() if table is None else table
    if abs(x) <= tol:
        return MZVExpr()
    if weight == 0:
        basis: List[Monomial] = [()]
    elif weight in table.basis:
        basis = table.basis[weight]
    else:
        raise DomainError(f"No basis for weight {weight} in {table.source}")

    values = [float(evaluate(MZVExpr({monomial: 1}))) for monomial in basis]
    found = set(_candidates(float(x), values, tol, denom_bound, coefficient_bound))
    if not found:
        _logger.debug("No rational fit for %s at weight %d", x, weight)
        return None
    if len(found) > 1:
        options = sorted(found)
        raise AmbiguousFitError(
            f"{x} has {len(options)} fits at weight {weight}",
            extra={"candidates": [[str(c) for c in option] for option in options[:5]]},
        )
    (coefficients,) = found
    return MZVExpr(dict(zip(basis, coefficients)))
