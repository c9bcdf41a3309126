import pytest
from hypothesis import given
from hypothesis import strategies as st

from spehpoles import orbits
from spehpoles.exact import Matrix, inverse, jordan_partition, partitions_of, rank
from spehpoles.suites import orbit_checks

# The 7x7 support matrix of the worked example, block sizes 1,2,1,2,1:
# a column (1,0) at block (2,1), I_2 at block (4,2) and a row (1,0) at block (5,4).
WORKED_ALPHA = Matrix([
    [0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0],
])

all_partitions = st.integers(1, 10).flatmap(lambda n: st.sampled_from(list(partitions_of(n))))


class TestParse:
    @pytest.mark.parametrize("p, k, m, n", [
        ((4, 2, 1), 2, (2, 1), (1, 0)),
        ((4, 2, 2, 1), 2, (3, 1), (1, 0)),
        ((2,), 1, (1,), (0,)),
        ((1, 1, 1), 1, (0,), (3,)),
        ((5, 3, 3, 2), 3, (1, 0, 0), (3, 3, 1)),
    ])
    def test_examples(self, p, k, m, n):
        d = orbits.parse_partition(p)
        assert (d.k, d.m, d.n) == (k, m, n)

    @given(all_partitions)
    def test_round_trip(self, p):
        assert orbits.parse_partition(p).partition() == p


class TestWeightsAndRoots:
    def test_weights(self):
        assert orbits.torus_weights((4, 2, 1)) == (3, 1, 1, 0, -1, -1, -3)
        assert orbits.torus_weights((2, 2)) == (1, 1, -1, -1)
        assert orbits.torus_weights((1,) * 5) == (0,) * 5

    def test_radical_composition(self):
        assert orbits.radical_composition((4, 2, 1)) == (1, 0, 2, 1, 2, 0, 1)
        assert orbits.nonzero_parts(orbits.radical_composition((4, 2, 1))) == (1, 2, 1, 2, 1)
        assert orbits.radical_composition((2,)) == (1, 0, 1)
        assert orbits.nonzero_parts(orbits.radical_composition((1,) * 4)) == (4,)

    def test_root_set_sizes(self):
        # 21 pairs minus the two equal-weight pairs; then minus four gap-one pairs
        big, small = orbits.root_sets((4, 2, 1))
        assert (len(big), len(small)) == (19, 15)
        assert orbits.root_sets((1, 1, 1)) == (frozenset(), frozenset())

    @pytest.mark.parametrize("p", [(2, 2, 2), (4, 4), (2,), (3, 3), (1, 1)])
    def test_rectangular_radicals_coincide(self, p):
        big, small = orbits.root_sets(p)
        assert big == small


class TestSupportMatrix:
    def test_worked_example(self):
        assert orbits.support_matrix((4, 2, 1)) == WORKED_ALPHA
        assert jordan_partition(WORKED_ALPHA) == (4, 2, 1)

    def test_small_cases(self):
        assert orbits.support_matrix((2,)) == Matrix.unit(2, 1, 0)
        assert orbits.support_matrix((1, 1, 1)) == Matrix.zeros(3)

    @given(all_partitions)
    def test_alpha_has_weight_minus_two(self, p):
        w = orbits.torus_weights(p)
        alpha = orbits.support_matrix(p)
        assert all(w[i] - w[j] == -2 for i, j in alpha.support())
        assert jordan_partition(alpha) == p


class TestStabilizerAndPolarization:
    def test_stabilizer_shapes(self):
        assert orbits.stabilizer_shape((4, 2, 1)) == [1, 1, 1]
        assert orbits.stabilizer_shape((2, 2)) == [2]
        assert orbits.stabilizer_shape((1,) * 4) == [4]

    @given(all_partitions)
    def test_stabilizer_sizes_are_multiplicities(self, p):
        assert sorted(orbits.stabilizer_shape(p)) == sorted(p.count(x) for x in set(p))

    def test_stabilizer_embedding_commutes(self):
        p = (3, 3, 1, 1)
        alpha = orbits.support_matrix(p)
        for index, size in enumerate(orbits.stabilizer_shape(p)):
            g = Matrix.identity(size) + Matrix.unit(size, 0, size - 1).scale(5) if size > 1 else Matrix([[7]])
            big_g = orbits.stabilizer_embedding(p, index, g)
            assert big_g @ alpha @ inverse(big_g) == alpha

    def test_heisenberg_dims(self):
        assert orbits.heisenberg_dim((4, 2, 1)) == 2
        assert orbits.heisenberg_dim((2, 1)) == 1
        assert orbits.heisenberg_dim((3, 3, 3)) == 0

    def test_polarization_of_worked_example(self):
        xs, ys = orbits.polarization((4, 2, 1))
        assert len(xs) == len(ys) == 2
        _, _, pairing = orbits.pairing_matrix((4, 2, 1))
        assert rank(pairing) == 2

    def test_symplectic_pair_on_basis(self):
        p = (4, 2, 1)
        (x, _), (y, _) = sorted(orbits.polarization(p)[0]), sorted(orbits.polarization(p)[1])
        ident = Matrix.identity(7)
        value = orbits.symplectic_pair(p, ident + Matrix.unit(7, *x), ident + Matrix.unit(7, *y))
        assert value == orbits.pairing_matrix(p)[2][0, 0]

    @given(all_partitions)
    def test_every_partition_invariant(self, p):
        failed = [name for name, ok in orbit_checks(p, neutral=sum(p) <= 7).items() if not ok]
        assert not failed


class TestWhittakerPairs:
    def test_standard_triple(self):
        triple = orbits.neutral_completion(Matrix.unit(2, 1, 0))
        assert triple.h == Matrix([[1, 0], [0, -1]])
        assert triple.beta == Matrix.unit(2, 0, 1)

    def test_worked_example_is_neutral(self):
        triple = orbits.neutral_completion(WORKED_ALPHA)
        assert triple.relations_hold()
        assert triple.whittaker_pair().weights == (3, 1, 1, 0, -1, -1, -3)

    def test_rejects_non_nilpotent(self):
        with pytest.raises(ValueError):
            orbits.neutral_completion(Matrix.identity(2))

    def test_hook_pair(self):
        pair = orbits.hook_whittaker_pair(5, 3)
        assert pair.weights == (2, 2, 2, 0, -2)
        assert jordan_partition(pair.alpha) == (3, 1, 1)

    def test_nprime_examples(self):
        # the hook pair for (4, 2) has no gap-one roots; N' is the radical of type (3, 1)
        assert orbits.nprime_subgroup(orbits.hook_whittaker_pair(4, 2)) == {(0, 3), (1, 3), (2, 3)}
        zero = orbits.WhittakerPair((2, 1, 0), Matrix.zeros(3))
        assert orbits.nprime_subgroup(zero) == {(0, 1), (0, 2), (1, 2)}

    def test_pair_validation(self):
        with pytest.raises(ValueError):
            orbits.WhittakerPair((1, 0), Matrix.unit(2, 1, 0))
