"""Shared fixtures and the acceptance-criterion summary hook."""

from __future__ import annotations

from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[1]
GOLDEN_DIR = REPO_ROOT / "golden"

_ACCEPTANCE: list[tuple[int, str, bool]] = []


def record_acceptance(number: int, description: str, ok: bool) -> None:
    _ACCEPTANCE.append((number, description, ok))


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, ok in sorted(_ACCEPTANCE):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {number:>2}: {status}  {description}")
