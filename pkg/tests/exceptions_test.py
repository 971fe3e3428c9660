"""
Tests for ``exotic_cli.exceptions``.
"""

from exotic_cli.exceptions import BudgetError, DomainError, ErrorLevel


def test_error_payload() -> None:
    """
    Test the structured payload of library errors.
    """
    error = DomainError("Polygons need at least 4 sides, got 3", extra={"n": 3})
    assert error.errors == [
        {
            "message": "Polygons need at least 4 sides, got 3",
            "error_type": "DOMAIN_ERROR",
            "level": ErrorLevel.ERROR,
            "extra": {"n": 3},
        },
    ]


def test_budget_error() -> None:
    """
    Test ``BudgetError``.
    """
    error = BudgetError("Did not converge", best_estimate=1.2, error_estimate=0.1)
    assert error.best_estimate == 1.2
    assert error.error_estimate == 0.1
    assert error.errors[0]["error_type"] == "BUDGET_ERROR"
    assert error.errors[0]["extra"] == {"best_estimate": 1.2, "error_estimate": 0.1}
