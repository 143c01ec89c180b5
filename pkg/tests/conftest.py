import json
from pathlib import Path

import numpy as np
import pytest

from rsengine.automorphic import delta, trivial
from rsengine.characters import character


@pytest.fixture(scope="session")
def delta_rep():
    return delta(10**5)


@pytest.fixture(scope="session")
def delta_big():
    """Delta with Satake data past 2.24e6, enough for the 1e6 short-interval window."""
    return delta(2_300_000)


@pytest.fixture(scope="session")
def triv():
    return trivial()


@pytest.fixture(scope="session")
def chi5():
    """Odd character of order 4 mod 5 with chi(2) = i."""
    chi = character(5, 1)
    assert chi.order == 4 and chi.parity == 1
    return chi


@pytest.fixture(scope="session")
def chi8():
    """Even quadratic character of conductor 8."""
    chi = character(8, 1)
    assert chi.order == 2 and chi.conductor == 8 and chi.parity == 0
    return chi


def simple_sieve(limit: int) -> np.ndarray:
    """Plain sieve of Eratosthenes, kept separate from the library's segmented sieve."""
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return np.array([i for i in range(limit + 1) if flags[i]], dtype=np.int64)


@pytest.fixture(scope="session")
def ceilings():
    """Values frozen by tests/oracles/register_oracles.py."""
    return json.loads((Path(__file__).parent / "oracles" / "ceilings.json").read_text())
