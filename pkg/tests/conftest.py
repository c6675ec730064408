import numpy as np
import pytest

from hadamard_forge import multiset_match


def random_phases(rng, n):
    return np.exp(2j * np.pi * rng.random(n))


def assert_spectrum(values, expected, tol=1e-8):
    values = np.asarray(values, dtype=complex).ravel()
    expected = np.asarray(expected, dtype=complex).ravel()
    assert multiset_match(values, expected, tol), (
        f"spectra differ beyond {tol}:\n  got      {np.sort_complex(values)}"
        f"\n  expected {np.sort_complex(expected)}"
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
