from importlib import resources

import pytest

from headvisor.circuit import load_circuit, to_profile

CIRCUITS = ("t1", "t2", "t3", "t4", "t5", "t6", "t7")

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def bundled(name: str):
    text = resources.files("headvisor").joinpath("circuits", f"{name}.json").read_text("utf-8")
    return to_profile(load_circuit(text))


@pytest.fixture(scope="session")
def circuits():
    return {name: bundled(name) for name in CIRCUITS}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
