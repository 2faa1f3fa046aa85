import numpy as np
import pytest

from qmedshield.cipher import KeySet, keygen
from qmedshield.samples import gradient_texture, phantom


@pytest.fixture(scope="session")
def key():
    return keygen(bytes(range(32)))


@pytest.fixture(scope="session")
def reference_key():
    """Quantum logistic seeds x0=0.5, y0=0.05, z0=0.02 (the key-sensitivity setup)."""
    ks = [0.11, 0.27, 0.5, 0.5, 0.1, 0.05, 0.3, 0.55, 0.8, 0.42,
          0.13, 0.38, 0.61, 0.9, 0.2, 0.47, 0.72, 0.99]
    return KeySet(k=tuple(ks), r=0.3141592653589793)


@pytest.fixture(scope="session")
def phantom256():
    return phantom(256)


@pytest.fixture(scope="session")
def gradient256():
    return gradient_texture(256, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# Acceptance criteria register one verdict line each; they are echoed at the
# end of the run so they show up even when output capture is on.
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def verdict():
    def record(number: int, passed: bool | None, detail: str) -> None:
        status = "N/A " if passed is None else ("PASS" if passed else "FAIL")
        line = f"criterion {number:>2}: {status}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
