import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permlcu.birkhoff import (
    BirkhoffDecomposition,
    Term,
    birkhoff_decompose,
    marcus_ree_bound,
    perfect_matching,
    random_doubly_stochastic,
    reconstruct,
    truncate,
)
from permlcu.errors import DomainError, InfeasibleError, NumericalDegradationError
from permlcu.permutation import Permutation, matrix_of

from .conftest import WORKED_S


def brute_force_matchings(support):
    n = support.shape[0]
    return [p for p in itertools.permutations(range(n)) if all(support[p[j], j] for j in range(n))]


class TestPerfectMatching:
    def test_diagonal(self, backend):
        assert perfect_matching(np.eye(5, dtype=bool), backend=backend).is_identity()

    def test_worked_support(self, backend):
        support = WORKED_S > 0
        assert not support[0, 2] and not support[1, 3] and not support[3, 1]
        p = perfect_matching(support, backend=backend)
        assert p.map in brute_force_matchings(support)
        # frozen output of the row-then-column augmenting search
        assert p.map == (3, 2, 1, 0)

    def test_forced_edge(self, backend):
        support = WORKED_S > 0
        for r, c in zip(*np.nonzero(support)):
            p = perfect_matching(support, (r, c), backend=backend)
            assert p[c] == r
            assert p.map in brute_force_matchings(support)

    def test_infeasible(self, backend):
        with pytest.raises(InfeasibleError):
            perfect_matching(np.array([[1, 1], [0, 0]], dtype=bool), backend=backend)

    def test_forced_edge_outside_support(self):
        with pytest.raises(DomainError):
            perfect_matching(np.eye(2, dtype=bool), (0, 1))

    def test_random_supports_match_brute_force(self, rng, backend):
        for _ in range(200):
            n = int(rng.integers(1, 7))
            support = rng.random((n, n)) < 0.5
            found = brute_force_matchings(support)
            if found:
                assert perfect_matching(support, backend=backend).map in found
            else:
                with pytest.raises(InfeasibleError):
                    perfect_matching(support, backend=backend)


class TestDecompose:
    def test_permutation_matrix(self):
        p = Permutation((2, 0, 3, 1))
        d = birkhoff_decompose(matrix_of(p))
        assert d.k == 1
        assert d.terms[0] == Term(1.0, p)

    def test_uniform_two_by_two(self):
        d = birkhoff_decompose(np.full((2, 2), 0.5))
        assert sorted((t.weight, t.perm.map) for t in d.terms) == [(0.5, (0, 1)), (0.5, (1, 0))]

    def test_worked_matrix(self, worked_s):
        d = birkhoff_decompose(worked_s, tol=1e-12, record_history=True)
        assert d.residual_norm <= 1e-12
        assert d.k <= 10
        assert abs(d.weights.sum() - 1) <= 1e-9
        assert np.abs(reconstruct(d) - worked_s).max() <= 1e-12
        assert all(b < a for a, b in zip(d.history, d.history[1:]))

    def test_rejects_non_doubly_stochastic(self):
        with pytest.raises(DomainError):
            birkhoff_decompose(np.array([[0.6, 0.4], [0.5, 0.5]]))

    def test_explicit_kmax_returns_partial(self, worked_s):
        d = birkhoff_decompose(worked_s, k_max=2)
        assert d.k == 2
        assert d.residual_norm > 0.1

    def test_deterministic(self, rng):
        S = random_doubly_stochastic(8, 10, rng)
        assert birkhoff_decompose(S) == birkhoff_decompose(S)

    def test_backends_agree(self, rng):
        from permlcu import kernels

        if "numba" not in kernels.available_backends():
            pytest.skip("numba not installed")
        S = random_doubly_stochastic(16, 20, rng)
        assert birkhoff_decompose(S, backend="numpy") == birkhoff_decompose(S, backend="numba")

    def test_degradation_when_support_breaks(self):
        # doubly stochastic only to 1e-8; after one term the residual support
        # {(0,0), (0,1), (1,0)} has no perfect matching through (0,0)
        e = 5e-9
        S = np.array([[0.5 + e, 0.5], [0.5, 0.5 - e]])
        with pytest.raises(NumericalDegradationError) as exc:
            birkhoff_decompose(S, tol=1e-12)
        assert exc.value.partial.k == 1
        assert exc.value.partial.terms[0].weight == pytest.approx(0.5 - e)

    @pytest.mark.parametrize("n", [4, 8, 16])
    def test_random_properties(self, rng, n):
        for _ in range(20):
            S = random_doubly_stochastic(n, int(rng.integers(1, 2 * n + 1)), rng)
            d = birkhoff_decompose(S, tol=1e-12, record_history=True)
            assert d.k <= marcus_ree_bound(n)
            assert d.residual_norm <= 1e-10
            assert abs(d.weights.sum() - 1) <= 1e-9
            assert np.all(d.weights > 0)
            assert np.abs(reconstruct(d) - S).max() <= 1e-8
            assert all(b < a for a, b in zip(d.history, d.history[1:]))

    def test_residual_never_negative(self, rng):
        S = random_doubly_stochastic(8, 12, rng)
        R = S.copy()
        for t in birkhoff_decompose(S).terms:
            R -= t.weight * matrix_of(t.perm)
            assert R.min() >= -1e-12


class TestReconstruct:
    def test_worked_rhs(self, worked_decomposition, worked_s):
        assert np.abs(reconstruct(worked_decomposition) - worked_s).max() <= 1e-15

    def test_single_identity(self):
        d = BirkhoffDecomposition(3, (Term(1.0, Permutation.identity(3)),))
        np.testing.assert_array_equal(reconstruct(d), np.eye(3))

    def test_empty(self):
        np.testing.assert_array_equal(reconstruct(BirkhoffDecomposition(3)), np.zeros((3, 3)))


class TestTruncate:
    def test_keep_two_of_worked_example(self, worked_decomposition):
        t, bound = truncate(worked_decomposition, keep=2)
        assert [x.weight for x in t.terms] == [1 / 3, 1 / 3]
        assert bound == pytest.approx(1 / 3)
        dev = np.abs(reconstruct(worked_decomposition) - reconstruct(t)).max()
        # the dropped identity and anti-diagonal touch disjoint cells
        assert dev == pytest.approx(1 / 6, abs=1e-15)
        assert dev <= bound

    def test_keep_all(self, worked_decomposition):
        t, bound = truncate(worked_decomposition, keep=4)
        assert bound == 0
        np.testing.assert_array_equal(reconstruct(t), reconstruct(worked_decomposition))

    def test_min_weight_at_max(self, worked_decomposition):
        t, bound = truncate(worked_decomposition, min_weight=1 / 3 - 1e-12)
        assert t.k == 2
        assert bound == pytest.approx(1 - 2 / 3)
        t, bound = truncate(worked_decomposition, min_weight=1 / 3 + 1e-12)
        assert t.k == 0
        assert bound == pytest.approx(1.0)

    def test_keep_zero(self, worked_decomposition):
        with pytest.raises(DomainError):
            truncate(worked_decomposition, keep=0)

    def test_bound_is_tight_for_overlapping_terms(self):
        # both dropped terms fix 0, so cell (0, 0) loses their full mass
        d = BirkhoffDecomposition(
            3,
            (
                Term(0.4, Permutation((1, 0, 2))),
                Term(0.3, Permutation((0, 2, 1))),
                Term(0.3, Permutation((0, 1, 2))),
            ),
        )
        t, bound = truncate(d, keep=1)
        dev = np.abs(reconstruct(d) - reconstruct(t))
        assert bound == pytest.approx(0.6)
        assert dev.max() == pytest.approx(bound, abs=1e-15)
        assert dev[0, 0] == dev.max()

    def test_random_bound(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 9))
            d = birkhoff_decompose(random_doubly_stochastic(n, int(rng.integers(1, 2 * n + 1)), rng))
            t, bound = truncate(d, keep=int(rng.integers(1, d.k + 1)))
            assert np.abs(reconstruct(d) - reconstruct(t)).max() <= bound + 1e-15


def test_json_round_trip(worked_decomposition):
    d2 = BirkhoffDecomposition.from_dict(worked_decomposition.to_dict())
    assert d2 == worked_decomposition
    assert set(worked_decomposition.to_dict()) == {"n", "residual", "terms"}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 4, 6, 8]))
def test_residual_stays_nonnegative(seed, n):
    rng = np.random.default_rng(seed)
    S = random_doubly_stochastic(n, int(rng.integers(1, 2 * n + 1)), rng)
    full = birkhoff_decompose(S)
    for k in range(1, full.k + 1):
        partial = birkhoff_decompose(S, k_max=k)
        assert (S - reconstruct(partial)).min() >= -1e-14
        assert all(t.weight > 0 for t in partial.terms)
