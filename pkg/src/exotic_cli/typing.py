"""
Custom types.
"""

from typing import Any, List, Optional

from typing_extensions import TypedDict


class RunConfig(TypedDict, total=False):
    """
    Resolved settings for a single CLI run.
    """

    tol: float
    seed: int
    mzv_table: Optional[str]
    output_format: str
    workers: int
    digits: int


class CheckPayload(TypedDict, total=False):
    """
    The outcome of a single check inside a verification suite.
    """

    name: str
    passed: bool
    residual: float
    detail: str
    witness: Any


class VerificationReport(TypedDict):
    """
    Schema for the report of a verification suite.
    """

    suite: str
    passed: bool
    checks: List[CheckPayload]
    caveats: List[str]
