"""
Fixtures for ``exotic_cli``.
"""

import pytest

from exotic_cli.mzv import RelationTable, default_table


@pytest.fixture(scope="session")
def table() -> RelationTable:
    """
    The packaged MZV relation table.
    """
    return default_table()
