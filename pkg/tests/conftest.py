import numpy as np
import pytest

from permlcu import kernels
from permlcu.birkhoff import BirkhoffDecomposition, Term
from permlcu.permutation import Permutation

# worked example: S = 1/6 [...] = 1/6 P1 + 1/6 P2 + 1/3 P3 + 1/3 P4
WORKED_S = np.array([[1, 4, 0, 1], [2, 1, 3, 0], [2, 1, 1, 2], [1, 0, 2, 3]], dtype=float) / 6.0
# one-line maps under M[p(j), j] = 1
WORKED_P1 = Permutation((3, 2, 1, 0))
WORKED_P2 = Permutation((0, 1, 2, 3))
WORKED_P3 = Permutation((1, 0, 3, 2))
WORKED_P4 = Permutation((2, 0, 1, 3))
WORKED_WEIGHTS = (1 / 6, 1 / 6, 1 / 3, 1 / 3)


@pytest.fixture
def worked_s():
    return WORKED_S.copy()


@pytest.fixture
def worked_decomposition():
    perms = (WORKED_P1, WORKED_P2, WORKED_P3, WORKED_P4)
    return BirkhoffDecomposition(4, tuple(Term(w, p) for w, p in zip(WORKED_WEIGHTS, perms)), 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param
