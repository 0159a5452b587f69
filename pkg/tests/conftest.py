import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from addrep.sieve import Range, sieve_mobius, sieve_primes, sieve_squarefree
from addrep.thetadata import load_table


@pytest.fixture(scope="session")
def primes_1e6() -> np.ndarray:
    return sieve_primes(Range(2, 10**6 + 1)).primes


@pytest.fixture(scope="session")
def flags_1e6() -> np.ndarray:
    return sieve_squarefree(Range(0, 10**6 + 1)).flags


@pytest.fixture(scope="session")
def primes_1e4() -> np.ndarray:
    return sieve_primes(Range(2, 10**4 + 1)).primes


@pytest.fixture(scope="session")
def flags_1e4() -> np.ndarray:
    return sieve_squarefree(Range(0, 10**4 + 1)).flags


@pytest.fixture(scope="session")
def mobius_100() -> np.ndarray:
    return sieve_mobius(Range(1, 101)).values


@pytest.fixture(scope="session")
def placeholder_table():
    from addrep.cli import bundled_table_path

    return load_table(bundled_table_path())
