
import numpy as np
import pytest

from qdgraph.algebra import FactoredRational
from qdgraph.families import jacobi_qd, jacobi_zeros, laguerre_qd, laguerre_zeros


def quartic() -> FactoredRational:
    """q = -(z**4 - 1): the four simple zeros +-1, +-i."""
    return FactoredRational(-1.0, [(1, 1), (-1, 1), (1j, 1), (-1j, 1)])


def quartic_f() -> FactoredRational:
    """f = z**4 - 1, so that q = -f."""
    return FactoredRational(1.0, [(1, 1), (-1, 1), (1j, 1), (-1j, 1)])


def laguerre(C):
    a, b = laguerre_zeros(C)
    return laguerre_qd(C), a, b


def jacobi(A, B):
    a, b = jacobi_zeros(A, B)
    return jacobi_qd(A, B), a, b


def segment_points(a, b, n=2001):
    return a + (b - a) * np.linspace(0.0, 1.0, n)


@pytest.fixture
def q4():
    return quartic()


@pytest.fixture
def f4():
    return quartic_f()
