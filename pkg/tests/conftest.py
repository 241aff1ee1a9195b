from __future__ import annotations

import json
from importlib import resources

import pytest

from umwelt_lab.runner.mock_server import MockModelServer


def data_path(name: str):
    return resources.files("umwelt_lab.data").joinpath(name)


def load_jsonl(name: str) -> list[dict]:
    return [json.loads(line) for line in data_path(name).read_text("utf-8").splitlines() if line.strip()]


@pytest.fixture
def api_key(monkeypatch):
    monkeypatch.setenv("UMWELT_TEST_KEY", "test-secret")
    return "UMWELT_TEST_KEY"


@pytest.fixture
def mock_server():
    """Factory: start a mock endpoint with the given responder; stopped at teardown."""
    servers = []

    def start(responder):
        srv = MockModelServer(responder).start()
        servers.append(srv)
        return srv

    yield start
    for srv in servers:
        srv.stop()


# ---- acceptance summary: one line per criterion -------------------------------

_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    label = dict(report.user_properties).get("criterion")
    if label is None:
        return
    if report.when == "call" or report.outcome == "failed":
        if report.outcome == "failed" or label not in _ACCEPTANCE:
            _ACCEPTANCE[label] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{_ACCEPTANCE[label]}  {label}")
