"""
Tests for ``exotic_cli.exotic``.
"""

import numpy as np
import pytest

from exotic_cli.darboux import GradedPoly, NuOperator, OddSymplecticContext, delta
from exotic_cli.diagrams import Chord, ChordMonomial
from exotic_cli.exceptions import DomainError
from exotic_cli.exotic import (
    ainfty_check,
    ainfty_residual,
    compute_gP,
    compute_nu,
    delta_closed_poly,
    derivation_check,
    derivation_residual,
    nu_chain,
    random_inputs,
)
from exotic_cli.graphs import GraphChain
from exotic_cli.mzv import MZVExpr, MZVWord

NU5 = {
    "{1,3}{2,4}": "zeta(2)",
    "{1,{2,3}}4": "zeta(2)",
    "1{{2,3},4}": "-zeta(2)",
    "{1,2}{3,4}": "-zeta(2)",
    "{1,3}Δ(2)4": "zeta(2)",
    "1{2,4}Δ(3)": "-zeta(2)",
    "12{Δ(3),4}": "-zeta(2)",
    "{1,Δ(2)}34": "zeta(2)",
    "1{2,3}Δ(4)": "zeta(2)",
    "Δ(1){2,3}4": "-zeta(2)",
    "Δ(1)2{3,4}": "zeta(2)",
    "{1,2}3Δ(4)": "-zeta(2)",
    "Δ(1)Δ(2)34": "zeta(2)",
    "12Δ(3)Δ(4)": "zeta(2)",
    "Δ(1)23Δ(4)": "-zeta(2)",
}


def test_compute_nu_low_arity() -> None:
    """
    Test ``compute_nu`` for the product and the vanishing arity 4 operation.
    """
    product = compute_nu(3)
    assert product.is_product
    assert product.pretty() == "m(1,2)"
    assert product.printed_terms() == [{"word": "m(1,2)", "coefficient": {"text": "1", "value": 1.0}}]
    assert nu_chain(product) == {(): GraphChain.unit(3)}

    empty = compute_nu(4)
    assert empty.terms == []
    assert empty.pretty() == ""
    assert empty.printed_terms() == []
    assert empty.degree == -1

    with pytest.raises(DomainError) as excinfo:
        compute_nu(2)
    assert str(excinfo.value) == "Operations start at n=3, got 2"


def test_compute_nu_pentagon() -> None:
    """
    Test the 15 terms of the arity 5 operation.
    """
    operation = compute_nu(5)
    assert operation.is_symbolic
    assert operation.degree == -2
    assert operation.common_factor() == (MZVWord.of(2),)
    assert operation.pretty().startswith("zeta(2)*(")

    printed = {term["word"]: term["coefficient"]["text"] for term in operation.printed_terms()}
    assert printed == NU5

    values = {term["coefficient"]["value"] for term in operation.printed_terms()}
    assert all(abs(abs(value) - np.pi**2 / 6) < 1e-12 for value in values)


def test_compute_nu_hexagon() -> None:
    """
    Test the bracket-bracket terms of the arity 6 operation.
    """
    operation = compute_nu(6)
    assert len(operation.terms) == 4
    assert operation.common_factor() == (MZVWord.of(3),)
    assert [term.coefficient for term in operation.terms] == [MZVExpr.zeta(3)] * 4

    printed = {term["word"]: term["coefficient"]["text"] for term in operation.printed_terms()}
    assert printed["{{1,3},4}{2,5}"] == "zeta(3)"
    assert printed["{1,3}{{2,4},5}"] == "2*zeta(3)"
    assert printed["{1,{2,4}}{3,5}"] == "2*zeta(3)"
    assert printed["{1,4}{2,{3,5}}"] == "zeta(3)"


def test_compute_gP_hexagon() -> None:  # pylint: disable=invalid-name
    """
    Test that every hexagon class leads with the word of its bracketing.
    """
    classes = {str(term.bracketing): term.g.printed_terms() for term in compute_nu(6).terms}
    words = ["{{1,3},4}{2,5}", "{1,3}{{2,4},5}", "{1,{2,4}}{3,5}", "{1,4}{2,{3,5}}"]
    expected = {
        "[[[1,3],4],[2,5]]": {"{{1,3},4}{2,5}": 1, "{1,3}{{2,4},5}": 1},
        "[[1,3],[[2,4],5]]": {"{1,3}{{2,4},5}": 1},
        "[[1,[2,4]],[3,5]]": {"{1,{2,4}}{3,5}": 1},
        "[[1,4],[2,[3,5]]]": {"{1,{2,4}}{3,5}": 1, "{1,4}{2,{3,5}}": 1},
    }
    assert sorted(classes) == sorted(expected)
    for bracketing, printed in classes.items():
        assert {word: printed[word] for word in words if word in printed} == expected[bracketing]



def test_compute_gP() -> None:  # pylint: disable=invalid-name
    """
    Test ``compute_gP``.
    """
    operation = compute_nu(5)
    (term,) = operation.terms
    assert compute_gP(term.prime) == term.g
    assert len(term.g) == 15

    with pytest.raises(DomainError) as excinfo:
        compute_gP(ChordMonomial(5, (Chord(5, 1, 3),)))
    assert str(excinfo.value) == "{1,3} is not of top degree"


def test_nu_chain() -> None:
    """
    Test ``nu_chain`` on the arity 5 operation.
    """
    pieces = nu_chain(compute_nu(5))
    assert list(pieces) == [(MZVWord.of(2),)]
    assert pieces[(MZVWord.of(2),)].n == 5


def test_random_inputs() -> None:
    """
    Test ``random_inputs``.
    """
    context = OddSymplecticContext.of(2)
    inputs = random_inputs(context, np.random.default_rng(1), 5)
    assert len(inputs) == 5
    assert all(0 <= poly.degree <= 2 for poly in inputs)


@pytest.mark.parametrize("seed", range(5))
def test_delta_closed_poly(seed: int) -> None:
    """
    Test ``delta_closed_poly``.
    """
    context = OddSymplecticContext.of(2)
    poly = delta_closed_poly(context, np.random.default_rng(seed))
    assert not poly.is_zero()
    assert delta(poly).is_zero()


def test_ainfty_residual_associativity() -> None:
    """
    Test that the product alone satisfies the arity 4 relation.
    """
    context = OddSymplecticContext.of(2)
    inputs = random_inputs(context, np.random.default_rng(4), 3)
    assert ainfty_residual({2: NuOperator.build(3)}, inputs).is_zero()


def test_derivation_residual_constant() -> None:
    """
    Test that constants act trivially.
    """
    context = OddSymplecticContext.of(2)
    inputs = random_inputs(context, np.random.default_rng(6), 4)
    constant = GradedPoly.constant(context, 3)
    assert derivation_residual(NuOperator.build(5), constant, inputs).is_zero()


def test_ainfty_check() -> None:
    """
    Test ``ainfty_check`` up to arity 6.
    """
    report = ainfty_check(max_arity=6, trials=3)
    assert report["suite"] == "ainfty"
    assert report["passed"]
    assert [check["name"] for check in report["checks"]] == ["arity_4", "arity_5", "arity_6"]
    assert all(check["residual"] < 1e-8 for check in report["checks"])
    assert len(report["caveats"]) == 2
    assert "2 pairs of Darboux variables" in report["caveats"][0]


@pytest.mark.slow
def test_ainfty_check_perturbation() -> None:
    """
    Test that perturbed periods break the arity 7 relation proportionally.
    """
    report = ainfty_check(max_arity=7, trials=2, perturbation=0.01)
    assert not report["passed"]
    *lower, arity_7 = report["checks"]
    assert all(check["passed"] for check in lower)
    assert not arity_7["passed"]
    assert len(arity_7["witness"]) == 6

    doubled = ainfty_check(max_arity=7, trials=2, perturbation=0.02)
    assert doubled["checks"][-1]["residual"] == pytest.approx(2 * arity_7["residual"], rel=1e-6)


def test_ainfty_check_perturbation_pentagon() -> None:
    """
    Test that perturbing the single pentagon period only rescales the
    operation, so the relations up to arity 6 still hold.
    """
    report = ainfty_check(max_arity=6, trials=3, perturbation=0.01)
    assert report["passed"]


def test_ainfty_check_errors() -> None:
    """
    Test ``ainfty_check`` argument validation.
    """
    with pytest.raises(DomainError) as excinfo:
        ainfty_check(max_arity=3)
    assert str(excinfo.value) == "Arity must be between 4 and 8, got 3"

    with pytest.raises(DomainError) as excinfo:
        ainfty_check(max_arity=9)
    assert str(excinfo.value) == "Arity must be between 4 and 8, got 9"


@pytest.mark.parametrize(
    "n,trials",
    [(3, 20), (5, 3), pytest.param(6, 20, marks=pytest.mark.slow)],
)
def test_derivation_check(n: int, trials: int) -> None:
    """
    Test ``derivation_check``.
    """
    report = derivation_check(n, trials=trials)
    assert report["suite"] == "derivation"
    assert report["passed"]
    (check,) = report["checks"]
    assert check["name"] == f"derivation_{n}"
    assert "witness" not in check


def test_derivation_check_errors() -> None:
    """
    Test ``derivation_check`` argument validation.
    """
    with pytest.raises(DomainError) as excinfo:
        derivation_check(7)
    assert str(excinfo.value) == "Derivation checks run for 3 <= n <= 6, got 7"


@pytest.mark.slow
def test_ainfty_check_arity_7() -> None:
    """
    Test the arity 7 relation, which brings in the arity 6 operation.
    """
    report = ainfty_check(max_arity=7, trials=20)
    assert report["passed"]
    assert report["checks"][-1]["name"] == "arity_7"
    assert report["checks"][-1]["residual"] < 1e-8


@pytest.mark.slow
def test_ainfty_check_arity_8() -> None:
    """
    Test the arity 8 relation, where the square of the arity 5 operation
    meets the arity 7 one.
    """
    report = ainfty_check(max_arity=8, trials=1, tol=1e-6)
    assert report["checks"][-1]["name"] == "arity_8"
    assert report["passed"]
