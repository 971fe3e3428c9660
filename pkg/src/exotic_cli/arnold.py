"""
The form algebra on chords: relations, gravity reduction and residues.

Forms are kept as maps from canonical chord tuples to exact rationals. The
algebra is the free graded-commutative algebra on odd generators, one per
chord, modulo the quadratic relations attached to completely crossing pairs.
"""

import itertools
import logging
import threading
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Set, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices.sdm import SDM

from exotic_cli.diagrams import (
    Chord,
    ChordMonomial,
    canonicalize,
    chords,
    cocompose,
    complete_crossing_pairs,
    enumerate_diagrams,
    is_gravity,
    is_prime,
    split_pieces,
    tesselations,
)
from exotic_cli.exceptions import DomainError, ReductionError

_logger = logging.getLogger(__name__)

Key = Tuple[Chord, ...]
Scalar = Union[int, Fraction]


class FormExpr:
    """
    A rational combination of chord monomials in the form algebra.
    """

    def __init__(self, n: int, terms: Optional[Mapping[Key, Scalar]] = None):
        self.n = n
        self.terms: Dict[Key, Fraction] = {}
        for key, value in (terms or {}).items():
            if value:
                self.terms[key] = Fraction(value)

    @classmethod
    def from_monomial(
        cls,
        monomial: Optional[ChordMonomial],
        coefficient: Scalar = 1,
        n: Optional[int] = None,
    ) -> "FormExpr":
        """
        Build the form of a single (possibly vanishing) monomial.
        """
        if monomial is None:
            if n is None:
                raise DomainError("A vanishing monomial needs an explicit polygon size")
            return cls(n)
        return cls(monomial.n, {monomial.chords: monomial.sign * Fraction(coefficient)})

    @classmethod
    def generator(cls, chord: Chord) -> "FormExpr":
        """
        The degree one form attached to a chord.
        """
        return cls(chord.n, {(chord,): 1})

    def _new(self, terms: Mapping[Key, Scalar]) -> "FormExpr":
        return FormExpr(self.n, terms)

    def _check(self, other: "FormExpr") -> None:
        if self.n != other.n:
            raise DomainError(f"Forms live on different polygons: {self.n} != {other.n}")

    def __add__(self, other: "FormExpr") -> "FormExpr":
        self._check(other)
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = terms.get(key, Fraction(0)) + value
        return self._new(terms)

    def __neg__(self) -> "FormExpr":
        return self._new({key: -value for key, value in self.terms.items()})

    def __sub__(self, other: "FormExpr") -> "FormExpr":
        return self + (-other)

    def scale(self, factor: Scalar) -> "FormExpr":
        """
        Multiply every coefficient by a scalar.
        """
        return self._new({key: value * factor for key, value in self.terms.items()})

    def __mul__(self, other: "FormExpr") -> "FormExpr":
        self._check(other)
        terms: Dict[Key, Fraction] = {}
        for left, left_value in self.terms.items():
            for right, right_value in other.terms.items():
                product = canonicalize(self.n, left + right)
                if product is None:
                    continue
                terms[product.chords] = (
                    terms.get(product.chords, Fraction(0))
                    + product.sign * left_value * right_value
                )
        return FormExpr(self.n, terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormExpr):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.n}, {self.terms!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            body = "".join(f"a{chord.i},{chord.j}" for chord in key) or "1"
            parts.append(f"{self.terms[key]}*{body}")
        return " + ".join(parts)

    def is_zero(self) -> bool:
        """
        Return whether all coefficients vanish.
        """
        return not self.terms

    @property
    def degrees(self) -> Set[int]:
        """
        Degrees of the monomials present.
        """
        return {len(key) for key in self.terms}

    def coefficient(self, monomial: ChordMonomial) -> Fraction:
        """
        Coefficient of a signed monomial, eg, of ``-a14a35`` when its sign is -1.
        """
        return self.terms.get(monomial.chords, Fraction(0)) * monomial.sign


class GravityVector(FormExpr):
    """
    A form expanded in the gravity-diagram basis.
    """

    def __init__(self, n: int, degree: int, terms: Optional[Mapping[Key, Scalar]] = None):
        super().__init__(n, terms)
        self.degree = degree

    def _new(self, terms: Mapping[Key, Scalar]) -> "GravityVector":
        return type(self)(self.n, self.degree, terms)


class PrimeVector(GravityVector):
    """
    A form expanded in the prime-diagram basis.
    """


class FormTensor:
    """
    A rational combination of pairs of chord monomials on two polygons.
    """

    def __init__(
        self,
        left_n: int,
        right_n: int,
        terms: Optional[Mapping[Tuple[Key, Key], Scalar]] = None,
    ):
        self.left_n = left_n
        self.right_n = right_n
        self.terms: Dict[Tuple[Key, Key], Fraction] = {
            key: Fraction(value) for key, value in (terms or {}).items() if value
        }

    def add_term(self, key: Tuple[Key, Key], value: Scalar) -> None:
        """
        Accumulate a coefficient, dropping it if it cancels.
        """
        total = self.terms.get(key, Fraction(0)) + value
        if total:
            self.terms[key] = total
        else:
            self.terms.pop(key, None)

    def is_zero(self) -> bool:
        """
        Return whether all coefficients vanish.
        """
        return not self.terms


class DihedralElement(NamedTuple):
    """
    A dihedral symmetry: an optional flip followed by a rotation.

    The rotation sends ``i`` to ``i + rotation`` and the flip sends ``i`` to
    ``n - 1 - i``, both modulo ``n``.
    """

    rotation: int = 0
    reflect: bool = False

    def apply(self, n: int, label: int) -> int:
        """
        Image of a corner label.
        """
        if self.reflect:
            label = n - 1 - label
        return (label + self.rotation - 1) % n + 1


def _monomials(n: int, k: int) -> List[Key]:
    return list(itertools.combinations(chords(n), k))


def relation_generator(n: int, first: Iterable[Chord], second: Iterable[Chord]) -> FormExpr:
    """
    Return ``(sum over A)(sum over B)`` for a completely crossing pair.
    """
    left = FormExpr(n, {(chord,): 1 for chord in first})
    right = FormExpr(n, {(chord,): 1 for chord in second})
    return left * right


def relation_space(n: int, k: int) -> List[FormExpr]:
    """
    Return a spanning set of the degree ``k`` part of the relation ideal.
    """
    if k < 0:
        raise DomainError(f"Degree must be non-negative, got {k}")
    if k < 2:
        return []

    generators = [relation_generator(n, *pair) for pair in complete_crossing_pairs(n)]
    relations = []
    for key in _monomials(n, k - 2):
        prefix = FormExpr(n, {key: 1})
        for generator in generators:
            relation = prefix * generator
            if not relation.is_zero():
                relations.append(relation)
    return relations


def _to_sdm(rows: List[Dict[int, Fraction]], columns: int) -> SDM:
    elements = {}
    for index, row in enumerate(rows):
        entries = {
            column: QQ(value.numerator, value.denominator)
            for column, value in row.items()
            if value
        }
        if entries:
            elements[index] = entries
    return SDM(elements, (len(rows), columns), QQ)


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def matrix_rank(rows: List[Dict[int, Fraction]], columns: int) -> int:
    """
    Return the rank of a sparse rational matrix.
    """
    if not rows or not columns:
        return 0
    _, pivots = _to_sdm(rows, columns).rref()
    return len(pivots)


class Echelon(NamedTuple):
    """
    Rewriting rules from non-gravity monomials to the gravity basis.
    """

    gravity: Set[Key]
    rewrite: Dict[Key, Dict[Key, Fraction]]


def _build_echelon(n: int, k: int) -> Echelon:
    monomials = _monomials(n, k)
    gravity = [key for key in monomials if is_gravity(ChordMonomial(n, key))]
    gravity_set = set(gravity)
    non_gravity = [key for key in monomials if key not in gravity_set]
    columns = non_gravity + gravity
    index = {key: position for position, key in enumerate(columns)}

    rows = [
        {index[key]: value for key, value in relation.terms.items()}
        for relation in relation_space(n, k)
    ]
    _logger.debug(
        "Row reducing %d relations on %d monomials (n=%d, k=%d)",
        len(rows),
        len(columns),
        n,
        k,
    )

    rewrite: Dict[Key, Dict[Key, Fraction]] = {}
    if rows:
        reduced, pivots = _to_sdm(rows, len(columns)).rref()
        if set(pivots) != set(range(len(non_gravity))):
            raise ReductionError(
                f"Relations do not match the gravity basis for n={n}, k={k}",
                extra={"pivots": len(pivots), "non_gravity": len(non_gravity)},
            )
        for row in reduced.values():
            pivot = min(row)
            rewrite[columns[pivot]] = {
                columns[column]: -_to_fraction(value)
                for column, value in row.items()
                if column != pivot
            }
    elif non_gravity:
        raise ReductionError(f"No relations, but non-gravity monomials for n={n}, k={k}")

    return Echelon(gravity_set, rewrite)


class EchelonCache:
    """
    Initialize-once cache of echelon forms keyed by ``(n, k)``.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._entries: Dict[Tuple[int, int], Echelon] = {}

    def get(self, n: int, k: int) -> Echelon:
        """
        Return the echelon form, building it on first use.
        """
        with self._lock:
            if (n, k) not in self._entries:
                self._entries[(n, k)] = _build_echelon(n, k)
            return self._entries[(n, k)]

    def clear(self) -> None:
        """
        Drop every cached entry.
        """
        with self._lock:
            self._entries.clear()


ECHELONS = EchelonCache()


def _degree_of(form: FormExpr) -> int:
    degrees = form.degrees
    if len(degrees) > 1:
        raise DomainError(f"Form is not homogeneous: degrees {sorted(degrees)}")
    return degrees.pop() if degrees else 0


def reduce_to_gravity(form: FormExpr, degree: Optional[int] = None) -> GravityVector:
    """
    Expand a homogeneous form in the gravity basis.
    """
    k = _degree_of(form) if degree is None else degree
    if k < 2 or form.is_zero():
        return GravityVector(form.n, k, form.terms)

    echelon = ECHELONS.get(form.n, k)
    terms: Dict[Key, Fraction] = {}
    for key, value in form.terms.items():
        if key in echelon.gravity:
            terms[key] = terms.get(key, Fraction(0)) + value
            continue
        for target, factor in echelon.rewrite[key].items():
            terms[target] = terms.get(target, Fraction(0)) + value * factor
    return GravityVector(form.n, k, terms)


def regularize(form: FormExpr) -> PrimeVector:
    """
    Project a form onto the span of prime diagrams.
    """
    reduced = reduce_to_gravity(form)
    return PrimeVector(
        reduced.n,
        reduced.degree,
        {
            key: value
            for key, value in reduced.terms.items()
            if is_prime(ChordMonomial(reduced.n, key))
        },
    )


def residue_form(form: FormExpr, chord: Chord) -> FormTensor:
    """
    Take the derivative along a chord, then split the polygon along it.
    """
    left_n = form.n - (chord.j - chord.i) + 1
    right_n = chord.j - chord.i + 1
    result = FormTensor(left_n, right_n)
    for key, value in form.terms.items():
        if chord not in key:
            continue
        position = key.index(chord)
        rest = key[:position] + key[position + 1 :]
        split = cocompose(ChordMonomial(form.n, rest, (-1) ** position), chord)
        if split is None:
            continue
        left, right = split
        result.add_term((left.chords, right.chords), value * left.sign * right.sign)
    return result


def reduce_tensor(tensor: FormTensor) -> FormTensor:
    """
    Expand both factors of a tensor in their gravity bases.
    """
    result = FormTensor(tensor.left_n, tensor.right_n)
    for (left, right), value in tensor.terms.items():
        left_vector = reduce_to_gravity(FormExpr(tensor.left_n, {left: 1}), len(left))
        right_vector = reduce_to_gravity(FormExpr(tensor.right_n, {right: 1}), len(right))
        for left_key, left_value in left_vector.terms.items():
            for right_key, right_value in right_vector.terms.items():
                result.add_term((left_key, right_key), value * left_value * right_value)
    return result


def kz(monomial: ChordMonomial) -> FormExpr:  # pylint: disable=invalid-name
    """
    Substitute the form of each chord for the dual Lie generator.
    """
    return FormExpr.from_monomial(monomial)


def dihedral_action(form: FormExpr, element: DihedralElement) -> FormExpr:
    """
    Relabel chord endpoints by a dihedral symmetry.
    """
    n = form.n
    terms: Dict[Key, Fraction] = {}
    for key, value in form.terms.items():
        image = canonicalize(
            n,
            [
                Chord.of(n, element.apply(n, chord.i), element.apply(n, chord.j))
                for chord in key
            ],
        )
        if image is None:  # pragma: no cover
            continue
        terms[image.chords] = terms.get(image.chords, Fraction(0)) + image.sign * value
    return FormExpr(n, terms)


def quotient_rank(n: int, k: int) -> int:
    """
    Dimension of the degree ``k`` part of the form algebra.

    This is computed directly from the relations, without using the gravity
    basis.
    """
    monomials = _monomials(n, k)
    index = {key: position for position, key in enumerate(monomials)}
    rows = [
        {index[key]: value for key, value in relation.terms.items()}
        for relation in relation_space(n, k)
    ]
    return len(monomials) - matrix_rank(rows, len(monomials))


def joint_kernel_dimension(n: int, k: int) -> int:
    """
    Dimension of the common kernel of all residues on the degree ``k`` part.
    """
    gravity = enumerate_diagrams(n, k, "gravity")
    columns: Dict[Tuple[Chord, Key, Key], int] = {}
    rows = []
    for monomial in gravity:
        row: Dict[int, Fraction] = {}
        form = FormExpr(n, {monomial.chords: 1})
        for chord in monomial.chords:
            reduced = reduce_tensor(residue_form(form, chord))
            for (left, right), value in reduced.terms.items():
                column = columns.setdefault((chord, left, right), len(columns))
                row[column] = row.get(column, Fraction(0)) + value
        rows.append(row)
    return len(gravity) - matrix_rank(rows, len(columns))


def prime_count(n: int, k: int) -> int:
    """
    Number of prime diagrams with ``k`` chords; the triangle counts once in degree 0.
    """
    if n == 3:
        return 1 if k == 0 else 0
    if not 0 <= k <= n - 3:
        return 0
    return len(enumerate_diagrams(n, k, "prime"))


def cofree_dimension(n: int, k: int) -> int:
    """
    Count tesselation-indexed products of prime-diagram dimensions in degree ``k``.

    Each tesselation contributes one degree per chord; the remaining degree is
    distributed over the pieces it cuts out.
    """
    total = 0
    for tesselation in tesselations(n):
        remaining = k - len(tesselation.chords)
        if remaining < 0:
            continue
        # polynomial product of the per-piece prime counts
        counts = {0: 1}
        for size in split_pieces(n, tesselation.chords):
            updated: Dict[int, int] = {}
            for degree, count in counts.items():
                for extra in range(0, max(size - 3, 0) + 1):
                    if degree + extra > remaining:
                        break
                    value = prime_count(size, extra)
                    if value:
                        updated[degree + extra] = updated.get(degree + extra, 0) + count * value
            counts = updated
        total += counts.get(remaining, 0)
    return total


def integrality_defects(n: int) -> List[Tuple[Key, Fraction]]:
    """
    Return non-integral coefficients of ``regularize(kz(m))`` in top degree.

    Integrality is an observation rather than a theorem, so defects are
    logged instead of raised.
    """
    defects = []
    for monomial in enumerate_diagrams(n, n - 3, "all"):
        for key, value in regularize(kz(monomial)).terms.items():
            if value.denominator != 1:
                _logger.warning("Non-integral coefficient %s for %s at %s", value, monomial, key)
                defects.append((key, value))
    return defects
