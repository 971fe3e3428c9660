"""
Tests for ``exotic_cli.arnold``.
"""

from fractions import Fraction

import pytest

from exotic_cli.arnold import (
    ECHELONS,
    DihedralElement,
    FormExpr,
    FormTensor,
    cofree_dimension,
    dihedral_action,
    integrality_defects,
    joint_kernel_dimension,
    kz,
    prime_count,
    quotient_rank,
    reduce_tensor,
    reduce_to_gravity,
    regularize,
    relation_generator,
    relation_space,
    residue_form,
)
from exotic_cli.diagrams import (
    Chord,
    ChordMonomial,
    canonicalize,
    enumerate_diagrams,
    is_gravity,
)
from exotic_cli.exceptions import DomainError


def alpha(n: int, *pairs) -> FormExpr:
    """
    Helper to build a product of generators.
    """
    form = FormExpr(n, {(): 1})
    for i, j in pairs:
        form = form * FormExpr.generator(Chord(n, i, j))
    return form


def test_form_expr() -> None:
    """
    Test ``FormExpr`` arithmetic.
    """
    a13 = FormExpr.generator(Chord(5, 1, 3))
    a14 = FormExpr.generator(Chord(5, 1, 4))
    assert (a13 * a13).is_zero()
    assert a14 * a13 == (a13 * a14).scale(-1)
    assert (a13 * a14).degrees == {2}
    assert (a13 - a13).is_zero()
    assert str(a13 * a14) == "1*a1,3a1,4"
    assert str(FormExpr(5)) == "0"

    with pytest.raises(DomainError) as excinfo:
        a13 + FormExpr.generator(Chord(6, 1, 3))
    assert str(excinfo.value) == "Forms live on different polygons: 5 != 6"


def test_form_expr_from_monomial() -> None:
    """
    Test ``FormExpr.from_monomial`` and ``FormExpr.coefficient``.
    """
    monomial = ChordMonomial(5, (Chord(5, 1, 4), Chord(5, 3, 5)), -1)
    form = FormExpr.from_monomial(monomial, 2)
    assert form.terms == {monomial.chords: Fraction(-2)}
    assert form.coefficient(monomial) == 2
    assert form.coefficient(monomial._replace(sign=1)) == -2
    assert kz(monomial) == FormExpr.from_monomial(monomial)

    assert FormExpr.from_monomial(None, n=5).is_zero()
    with pytest.raises(DomainError) as excinfo:
        FormExpr.from_monomial(None)
    assert str(excinfo.value) == "A vanishing monomial needs an explicit polygon size"


def test_relation_generator() -> None:
    """
    Test ``relation_generator``.
    """
    assert relation_generator(4, [Chord(4, 1, 3)], [Chord(4, 2, 4)]) == alpha(4, (1, 3), (2, 4))
    assert relation_space(4, 1) == []
    assert relation_space(4, 2) == [alpha(4, (1, 3), (2, 4))]

    with pytest.raises(DomainError) as excinfo:
        relation_space(4, -1)
    assert str(excinfo.value) == "Degree must be non-negative, got -1"


def test_quotient_rank() -> None:
    """
    Test ``quotient_rank``.
    """
    assert quotient_rank(4, 0) == 1
    assert quotient_rank(4, 1) == 2
    assert quotient_rank(4, 2) == 0
    assert quotient_rank(5, 1) == 5
    assert quotient_rank(5, 2) == 6


def test_joint_kernel_dimension() -> None:
    """
    Test ``joint_kernel_dimension``.
    """
    assert joint_kernel_dimension(5, 0) == 1
    assert joint_kernel_dimension(5, 1) == 0
    assert joint_kernel_dimension(5, 2) == 1


def test_prime_count() -> None:
    """
    Test ``prime_count``.
    """
    assert prime_count(3, 0) == 1
    assert prime_count(3, 1) == 0
    assert prime_count(4, 1) == 0
    assert prime_count(5, 2) == 1
    assert prime_count(5, 7) == 0
    assert prime_count(6, 3) == 4


def test_cofree_dimension() -> None:
    """
    Test ``cofree_dimension``.
    """
    assert cofree_dimension(4, 1) == 2
    assert cofree_dimension(5, 1) == 5
    assert cofree_dimension(5, 2) == 6


@pytest.mark.parametrize("n", [5, 6])
def test_gravity_counts(n: int) -> None:
    """
    Test that gravity diagrams match the rank of the form algebra.
    """
    for k in range(n - 2):
        gravity = len(enumerate_diagrams(n, k, "gravity"))
        assert gravity == quotient_rank(n, k) == cofree_dimension(n, k)
        assert prime_count(n, k) == joint_kernel_dimension(n, k)


def test_reduce_to_gravity() -> None:
    """
    Test ``reduce_to_gravity``.
    """
    gravity = alpha(5, (1, 4), (3, 5))
    assert reduce_to_gravity(gravity).terms == gravity.terms

    for monomial in enumerate_diagrams(5, 2, "all"):
        reduced = reduce_to_gravity(FormExpr.from_monomial(monomial))
        assert reduced.degree == 2
        assert all(is_gravity(ChordMonomial(5, key)) for key in reduced.terms)

    with pytest.raises(DomainError) as excinfo:
        reduce_to_gravity(FormExpr(5, {(): 1, (Chord(5, 1, 3),): 1}))
    assert str(excinfo.value) == "Form is not homogeneous: degrees [0, 1]"


def test_regularize() -> None:
    """
    Test ``regularize``.
    """
    result = regularize(alpha(5, (1, 3), (2, 4)))
    assert result.terms == {(Chord(5, 1, 4), Chord(5, 3, 5)): -1}

    # non-prime gravity monomials are dropped
    assert regularize(alpha(5, (1, 3), (1, 4))).is_zero()
    assert regularize(alpha(5, (1, 4), (3, 5))).terms == {(Chord(5, 1, 4), Chord(5, 3, 5)): 1}


@pytest.mark.parametrize(
    "first,second,expected",
    [
        ((3, 5), (1, 4), 1),
        ((2, 5), (1, 4), -1),
        ((2, 4), (1, 3), -1),
        ((2, 4), (3, 5), 1),
        ((2, 5), (1, 3), 1),
    ],
)
def test_regularize_pentagon(first, second, expected: int) -> None:
    """
    Test ``regularize`` of ``kz`` on the pentagon, against ``a35 * a14``.
    """
    prime = regularize(kz(canonicalize(5, [Chord(5, 3, 5), Chord(5, 1, 4)])))
    result = regularize(kz(canonicalize(5, [Chord(5, *first), Chord(5, *second)])))
    assert result.terms == {key: expected * value for key, value in prime.terms.items()}
    assert prime.terms == {(Chord(5, 1, 4), Chord(5, 3, 5)): -1}


@pytest.mark.slow
def test_gravity_counts_heptagon() -> None:
    """
    Test the form algebra of the heptagon against its Poincare polynomial.
    """
    for k, expected in enumerate([1, 14, 71, 154, 120]):
        gravity = len(enumerate_diagrams(7, k, "gravity"))
        assert gravity == expected == quotient_rank(7, k) == cofree_dimension(7, k)
        assert prime_count(7, k) == joint_kernel_dimension(7, k)


def test_residue_form() -> None:
    """
    Test ``residue_form``.
    """
    tensor = residue_form(alpha(5, (1, 3), (1, 4)), Chord(5, 1, 3))
    assert (tensor.left_n, tensor.right_n) == (4, 3)
    assert tensor.terms == {((Chord(4, 1, 3),), ()): 1}

    assert residue_form(alpha(5, (1, 4), (3, 5)), Chord(5, 1, 4)).is_zero()
    assert residue_form(alpha(5, (1, 4), (3, 5)), Chord(5, 2, 4)).is_zero()


def test_reduce_tensor() -> None:
    """
    Test ``reduce_tensor``.
    """
    tensor = residue_form(alpha(5, (1, 3), (1, 4)), Chord(5, 1, 3))
    assert reduce_tensor(tensor).terms == tensor.terms

    crossing = FormTensor(5, 3, {((Chord(5, 1, 3), Chord(5, 2, 4)), ()): 1})
    reduced = reduce_tensor(crossing)
    assert reduced.terms[((Chord(5, 1, 4), Chord(5, 3, 5)), ())] == -1
    assert all(is_gravity(ChordMonomial(5, left)) and right == () for left, right in reduced.terms)


def test_dihedral_action() -> None:
    """
    Test ``dihedral_action``.
    """
    assert DihedralElement(rotation=1).apply(5, 5) == 1
    assert DihedralElement(reflect=True).apply(5, 1) == 3

    a13 = FormExpr.generator(Chord(4, 1, 3))
    assert dihedral_action(a13, DihedralElement(rotation=1)) == FormExpr.generator(Chord(4, 2, 4))
    assert dihedral_action(a13, DihedralElement(rotation=4)) == a13

    a14 = FormExpr.generator(Chord(5, 1, 4))
    assert dihedral_action(a14, DihedralElement(reflect=True)) == FormExpr.generator(
        Chord(5, 3, 5),
    )


def test_integrality_defects() -> None:
    """
    Test ``integrality_defects``.
    """
    assert integrality_defects(5) == []


def test_echelon_cache() -> None:
    """
    Test ``EchelonCache``.
    """
    ECHELONS.clear()
    echelon = ECHELONS.get(5, 2)
    assert len(echelon.gravity) == 6
    assert len(echelon.rewrite) == 4
    assert ECHELONS.get(5, 2) is echelon
