import numpy as np
import pytest

from redbundle.models import build_model


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def oscillator():
    return build_model("oscillator", {"sigma": "poly:0,0.1", "F": "const:0.5"})


@pytest.fixture
def heavytop():
    return build_model("heavytop", {})


_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record a criterion outcome; the line is printed now and again in the terminal summary."""

    def record(label: str, passed: bool, detail: str) -> bool:
        line = f"{label}: {'PASS' if passed else 'FAIL'} ({detail})"
        print(line)
        _ACCEPTANCE[label] = (passed, detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: (len(s.split()[1]), s)):
        passed, detail = _ACCEPTANCE[label]
        terminalreporter.write_line(f"{label}: {'PASS' if passed else 'FAIL'} ({detail})")
