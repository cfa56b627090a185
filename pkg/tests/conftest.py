import numpy as np
import pytest

from cqexp import CQChannel


def random_density_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random state from a Ginibre square."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_channel(k: int, d: int, rng: np.random.Generator) -> CQChannel:
    return CQChannel.from_states([random_density_matrix(d, rng) for _ in range(k)])


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20250808)


@pytest.fixture
def bsc_channel() -> CQChannel:
    return CQChannel.from_stochastic_matrix([[0.9, 0.1], [0.1, 0.9]])


@pytest.fixture
def orthogonal_pair() -> CQChannel:
    zero = np.array([[1, 0], [0, 0]], dtype=complex)
    one = np.array([[0, 0], [0, 1]], dtype=complex)
    return CQChannel.from_states([zero, one])


@pytest.fixture
def pure_pair() -> CQChannel:
    """Nonorthogonal pure outputs: the computational |0> and the diagonal |+>."""
    zero = np.array([[1, 0], [0, 0]], dtype=complex)
    plus = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    return CQChannel.from_states([zero, plus])


@pytest.fixture
def identical_outputs(rng) -> CQChannel:
    rho = random_density_matrix(2, rng)
    return CQChannel.from_states([rho, rho.copy()])
