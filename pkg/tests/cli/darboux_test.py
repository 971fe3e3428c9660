"""
Tests for ``exotic_cli.cli.darboux``.
"""

import json

from click.testing import CliRunner

from exotic_cli.cli.main import exotic_cli
from exotic_cli.schemas import ReportSchema


def test_check_bv_axioms() -> None:
    """
    Test ``darboux check`` on the BV identities.
    """
    runner = CliRunner()
    result = runner.invoke(
        exotic_cli,
        ["--loglevel", "ERROR", "darboux", "check", "--suite", "bv-axioms", "--trials", "5"],
        catch_exceptions=False,
    )
    assert result.exit_code == 0
    assert "symplectic_invariance" in result.output
    assert result.output.strip().splitlines()[-1] == "Suite bv-axioms passed"


def test_check_nu5_match_json() -> None:
    """
    Test ``darboux check`` comparing the two forms of the arity 5 operation.
    """
    runner = CliRunner()
    result = runner.invoke(
        exotic_cli,
        [
            "--loglevel",
            "ERROR",
            "darboux",
            "check",
            "--suite",
            "nu5-match",
            "--trials",
            "2",
            "--format",
            "json",
        ],
        catch_exceptions=False,
    )
    assert result.exit_code == 0
    document = json.loads(result.output)
    assert ReportSchema().validate(document) == {}
    assert document["suite"] == "nu5-match"
    assert [check["name"] for check in document["checks"]] == ["nu5_operator"]


def test_check_unknown_suite() -> None:
    """
    Test that only representation suites are accepted.
    """
    runner = CliRunner()
    result = runner.invoke(exotic_cli, ["darboux", "check", "--suite", "bases"])
    assert result.exit_code == 2
    assert "Invalid value for '--suite'" in result.output
