import numpy as np
import pytest

from wmono.lin import DensityMatrix, PureState
from wmono.wclass import paper_state

ACCEPTANCE_LINES = []


@pytest.fixture
def paper():
    return paper_state()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def bell_state() -> PureState:
    return PureState(2, np.array([1, 0, 0, 1]) / np.sqrt(2))


def random_pure(rng, num_qubits) -> PureState:
    z = rng.standard_normal(2 ** num_qubits) + 1j * rng.standard_normal(2 ** num_qubits)
    return PureState.from_amplitudes(z, normalize=True)


def random_density(rng, num_qubits, rank=None) -> DensityMatrix:
    d = 2 ** num_qubits
    rank = rank or d
    z = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = z @ z.conj().T
    return DensityMatrix((2,) * num_qubits, rho / np.trace(rho).real)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
