"""
Helpers shared by the CLI commands.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Type

import click
from marshmallow import Schema
from tabulate import tabulate

from exotic_cli.exceptions import CLIError
from exotic_cli.mzv import RelationTable, load_relation_table
from exotic_cli.schemas import SCHEMA_VERSION, ReportSchema
from exotic_cli.typing import RunConfig, VerificationReport

_logger = logging.getLogger(__name__)


def get_config(ctx: click.core.Context) -> RunConfig:
    """
    Return the run config stored by the main group.
    """
    return ctx.obj["CONFIG"]


def get_table(ctx: click.core.Context) -> RelationTable:
    """
    Load the MZV relation table once per invocation.
    """
    if "TABLE" not in ctx.obj:
        config = get_config(ctx)
        path = Path(config["mzv_table"]) if config.get("mzv_table") else None
        ctx.obj["TABLE"] = load_relation_table(path, config["digits"])
    return ctx.obj["TABLE"]


def make_document(kind: str, payload: Dict[str, Any]) -> Dict[str, Any]:
    """
    Add the versioned header to a document.
    """
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **payload}


def echo_document(document: Dict[str, Any], schema: Type[Schema]) -> None:
    """
    Validate a document against its schema and print it as JSON.
    """
    errors = schema().validate(document)
    if errors:
        raise CLIError(f"Refusing to emit an invalid document: {errors}", 1)
    click.echo(json.dumps(document, indent=2, sort_keys=True))


def echo_report(report: VerificationReport, output_format: str) -> None:
    """
    Print a verification report and exit with 1 if it failed.
    """
    if output_format == "json":
        echo_document(make_document("report", dict(report)), ReportSchema)
    else:
        rows = [
            (
                check["name"],
                "pass" if check["passed"] else "FAIL",
                check.get("residual"),
                check.get("detail", ""),
            )
            for check in report["checks"]
        ]
        click.echo(tabulate(rows, headers=["check", "status", "residual", "detail"]))
        for caveat in report["caveats"]:
            click.echo(f"Note: {caveat}")
        status = "passed" if report["passed"] else "failed"
        click.echo(f"Suite {report['suite']} {status}")

    if not report["passed"]:
        raise CLIError(f"Verification suite {report['suite']} failed", 1)
