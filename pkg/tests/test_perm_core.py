import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from permrd import config
from permrd.errors import OracleScaleError
from permrd.perm_core import (
    IndexSet,
    InversionVector,
    Permutation,
    all_permutations_array,
    chebyshev_distance,
    compose,
    distance,
    distance_matrix,
    distances_to_code,
    enumerate_permutations,
    identity,
    invariance_report,
    inverse,
    inversion_vector_to_perm,
    kendall_distance,
    parse_permutation,
    perm_to_inversion_vector,
    restrict_positions,
    restrict_values,
    reversal,
)

SIGMA = Permutation([6, 1, 3, 5, 2, 4])


def perm_strategy(max_n=9):
    return st.integers(1, max_n).flatmap(lambda n: st.permutations(list(range(1, n + 1)))).map(Permutation)


def perm_pair(max_n=9):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(
            st.permutations(list(range(1, n + 1))),
            st.permutations(list(range(1, n + 1))),
        )
    )


class TestBasics:
    def test_identity(self):
        assert identity(3) == Permutation([1, 2, 3])
        assert identity(1) == Permutation([1])
        assert kendall_distance(identity(6), identity(6)) == 0

    def test_compose(self):
        assert compose([2, 1, 3], [2, 1, 3]) == identity(3)
        assert compose(SIGMA, identity(6)) == SIGMA
        assert compose(SIGMA, inverse(SIGMA)) == identity(6)
        # (p o q)(i) = p(q(i))
        p, q = Permutation([2, 3, 1]), Permutation([3, 1, 2])
        assert compose(p, q) == Permutation([p(q(i)) for i in (1, 2, 3)])

    def test_inverse(self):
        assert inverse([2, 3, 1]) == Permutation([3, 1, 2])
        assert inverse(identity(5)) == identity(5)
        for p in enumerate_permutations(4):
            assert inverse(inverse(p)) == p

    def test_validation(self):
        for bad in ([1, 1], [0, 1], [2, 3], []):
            with pytest.raises(ValueError):
                Permutation(bad)
        with pytest.raises(ValueError):
            compose([1, 2], [1, 2, 3])

    def test_one_indexed_call_and_str(self):
        assert SIGMA(1) == 6 and SIGMA(6) == 4
        assert str(SIGMA) == "[6,1,3,5,2,4]"
        assert SIGMA.n == 6

    def test_reversal(self):
        assert reversal(4) == Permutation([4, 3, 2, 1])


class TestDistances:
    def test_examples(self):
        assert kendall_distance([2, 1, 3], [1, 2, 3]) == 1
        assert kendall_distance([3, 2, 1], [1, 2, 3]) == 3
        assert chebyshev_distance([3, 2, 1], [1, 2, 3]) == 2
        assert chebyshev_distance(SIGMA, identity(6)) == 5

    @pytest.mark.parametrize("n", range(1, 7))
    def test_kendall_max_is_binom(self, n):
        assert max(kendall_distance(p, identity(n)) for p in enumerate_permutations(n)) == n * (n - 1) // 2

    def test_kendall_equals_bfs_on_s4(self):
        bfs = oracles.adjacent_swap_distances(4)
        assert len(bfs) == 24
        for p, d in bfs.items():
            assert kendall_distance(p, identity(4)) == d
        # and between arbitrary pairs, via right-translation of the BFS tree
        for p, q in itertools.product(bfs, repeat=2):
            assert kendall_distance(p, q) == oracles.kendall(p, q)

    @given(perm_pair())
    def test_against_definitions(self, pq):
        p, q = pq
        assert kendall_distance(p, q) == oracles.kendall(p, q)
        assert chebyshev_distance(p, q) == oracles.chebyshev(p, q)

    @pytest.mark.parametrize("metric", ["kendall", "chebyshev"])
    @pytest.mark.parametrize("n", range(1, 6))
    def test_metric_axioms_exhaustive(self, metric, n):
        ps = list(enumerate_permutations(n))
        D = {(p, q): distance(metric, p, q) for p in ps for q in ps}
        for (p, q), d in D.items():
            assert d >= 0
            assert (d == 0) == (p == q)
            assert d == D[q, p]
        if n <= 4:
            for p, q, r in itertools.product(ps, repeat=3):
                assert D[p, r] <= D[p, q] + D[q, r]
        else:
            rng = np.random.default_rng(0)
            idx = rng.integers(0, len(ps), size=(20000, 3))
            for i, j, k in idx:
                p, q, r = ps[i], ps[j], ps[k]
                assert D[p, r] <= D[p, q] + D[q, r]

    @pytest.mark.parametrize("metric", ["kendall", "chebyshev"])
    @pytest.mark.parametrize("n", range(1, 6))
    def test_ball_size_independent_of_center(self, metric, n):
        ps = list(enumerate_permutations(n))
        diam = n * (n - 1) // 2 if metric == "kendall" else n - 1
        for r in range(diam + 1):
            sizes = {sum(distance(metric, s, c) <= r for s in ps) for c in ps}
            assert len(sizes) == 1

    def test_invariance_sides(self):
        rep = invariance_report(4)
        assert rep["kendall"] == {"left": True, "right": False}
        assert rep["chebyshev"] == {"left": False, "right": True}

    @pytest.mark.parametrize("metric", ["kendall", "chebyshev"])
    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_distance_matrix_matches_scalar(self, metric, n):
        P = all_permutations_array(n)
        M = distance_matrix(metric, P, P)
        f = oracles.METRIC[metric]
        rows = [tuple(r) for r in P.tolist()]
        for i, p in enumerate(rows):
            for j, q in enumerate(rows):
                assert M[i, j] == f(p, q)
        code = P[[0, len(rows) - 1]]
        np.testing.assert_array_equal(distances_to_code(metric, P, code), M[:, [0, len(rows) - 1]].min(axis=1))

    def test_array_is_lexicographic(self):
        P = all_permutations_array(4)
        assert [tuple(r) for r in P.tolist()] == oracles.perms(4)


class TestInversionVectors:
    def test_examples(self):
        assert perm_to_inversion_vector(identity(5)) == InversionVector([0] * 5)
        assert sum(perm_to_inversion_vector([3, 2, 1])) == 3

    @pytest.mark.parametrize("n", range(1, 7))
    def test_bijection(self, n):
        images = set()
        for p in enumerate_permutations(n):
            x = perm_to_inversion_vector(p)
            assert all(0 <= xi <= i for i, xi in enumerate(x))
            assert inversion_vector_to_perm(x) == p
            assert sum(x) == kendall_distance(p, identity(n))
            images.add(x)
        assert len(images) == len(list(itertools.product(*[range(i) for i in range(1, n + 1)])))

    def test_bad_vector(self):
        with pytest.raises(ValueError):
            InversionVector([0, 2])

    @given(perm_strategy())
    def test_round_trip(self, p):
        assert inversion_vector_to_perm(perm_to_inversion_vector(p)) == p


class TestRestriction:
    def test_worked_example(self):
        assert restrict_positions(SIGMA, {3, 5, 6}) == Permutation([2, 1, 3])
        assert restrict_values(SIGMA, {3, 5, 6}) == Permutation([3, 1, 2])

    def test_examples(self):
        assert restrict_positions(SIGMA, range(1, 7)) == SIGMA
        assert restrict_positions(identity(6), {2, 5}) == identity(2)
        assert restrict_values(identity(6), {1, 4, 6}) == identity(3)
        assert restrict_values([4, 3, 2, 1], {2, 4}) == Permutation([2, 1])

    def test_index_set_validation(self):
        with pytest.raises(ValueError):
            IndexSet(3, [])
        with pytest.raises(ValueError):
            IndexSet(3, [4])
        with pytest.raises(ValueError):
            restrict_values(SIGMA, IndexSet(5, [1]))

    def test_duality_exhaustive_s5(self):
        subsets = [s for k in range(1, 6) for s in itertools.combinations(range(1, 6), k)]
        for p in enumerate_permutations(5):
            for A in subsets:
                assert restrict_values(p, A) == inverse(restrict_positions(inverse(p), A))


class TestEnumeration:
    def test_small(self):
        ps = list(enumerate_permutations(3))
        assert len(ps) == 6
        assert ps[0] == Permutation([1, 2, 3]) and ps[-1] == Permutation([3, 2, 1])
        assert ps == sorted(ps)

    @pytest.mark.parametrize("n,count", [(5, 120), (8, 40320)])
    def test_counts(self, n, count):
        assert sum(1 for _ in enumerate_permutations(n)) == count

    def test_cap(self, monkeypatch):
        with pytest.raises(OracleScaleError):
            next(enumerate_permutations(config.ENUMERATION_CAP + 1))
        monkeypatch.setattr(config, "ENUMERATION_CAP", 2)
        with pytest.raises(OracleScaleError):
            next(enumerate_permutations(3))


class TestParsing:
    @given(perm_strategy(12))
    def test_round_trip(self, p):
        assert parse_permutation(str(p)) == p

    def test_whitespace_and_errors(self):
        assert parse_permutation(" [ 2 , 1 ] ") == Permutation([2, 1])
        for bad in ("2,1", "[]", "[1,,2]", "[1,1]"):
            with pytest.raises(ValueError):
                parse_permutation(bad)
