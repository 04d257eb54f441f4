import numpy as np
import pytest

from rangedim.bipartite import BipartiteDims, DensityOperator


def random_matrix(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_state(rng, dA, dB, rank=None):
    n = dA * dB
    g = random_matrix(rng, n, rank or n)
    m = g @ g.conj().T
    return DensityOperator(BipartiteDims(dA, dB), m / np.trace(m).real)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


# -- acceptance summary -----------------------------------------------------

_CRITERIA: list[str] = []


@pytest.fixture
def record_criterion():
    def record(number: int, passed: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        _CRITERIA.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
