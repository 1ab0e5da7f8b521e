import numpy as np
import pytest

from nonclassicality.fock import FockVector


def random_state(rng, dim=24, occupied=12):
    """Random normalized vector supported on the lowest ``occupied`` levels."""
    amps = np.zeros(dim, dtype=complex)
    amps[:occupied] = rng.normal(size=occupied) + 1j * rng.normal(size=occupied)
    amps /= np.linalg.norm(amps)
    return FockVector(amps)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
