import numpy as np
import pytest

from cesaro.core import Sequence, WeightFunction


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_sequence(rng, size=4000):
    """Complex sequence given by a random lookup table (indices 1..size)."""
    table = rng.normal(size=size + 1) + 1j * rng.normal(size=size + 1)
    table[0] = np.nan
    return Sequence(lambda ks: table[ks], "random")


def random_monotone_weight(rng):
    """Random increasing or decreasing weight on (0, 1]."""
    a, e = rng.uniform(0.2, 3.0), rng.uniform(0.1, 3.0)
    if rng.random() < 0.5:
        return WeightFunction(lambda x: a * x**e, "increasing", f"{a}x^{e}")
    return WeightFunction(lambda x: a * (1 - x) ** e + 0.5, "decreasing", f"{a}(1-x)^{e}+0.5")


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion, then assert."""

    def record(number, title, ok, detail=""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
