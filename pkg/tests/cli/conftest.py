"""
Fixtures for the CLI tests.
"""

from pathlib import Path

import pytest


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> Path:
    """
    Point the user config file at an empty temporary directory.
    """
    path = tmp_path / "config.yaml"
    monkeypatch.setattr("exotic_cli.config.get_config_path", lambda: path)
    monkeypatch.delenv("EXOTIC_MZV_TABLE", raising=False)
    return path
