import numpy as np
import pytest

from refprob import device_from_design, mub_qubit, sic_qubit, stabilizer_states


@pytest.fixture(scope="session")
def mub_device():
    return device_from_design(mub_qubit())


@pytest.fixture(scope="session")
def stab_device():
    return device_from_design(stabilizer_states(2))


@pytest.fixture(scope="session")
def sic_device():
    return device_from_design(sic_qubit())


@pytest.fixture(params=["mub", "stab"])
def design3_device(request, mub_device, stab_device):
    return {"mub": mub_device, "stab": stab_device}[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
