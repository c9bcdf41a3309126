import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spehpoles import exchange, orbits
from spehpoles.exact import Matrix, jordan_partition

perms = st.integers(2, 6).flatmap(lambda n: st.tuples(st.permutations(range(n)), st.permutations(range(n))))


def upper_datum(n: int, chain_len: int) -> exchange.CharacterDatum:
    return exchange.character_from_chain(n, exchange.upper_triangular(n), list(range(chain_len)))


class TestCharacterTransport:
    def test_identity(self):
        c = upper_datum(4, 4)
        assert exchange.conjugate_character(c, Matrix.identity(4)) == c

    def test_value_convention(self):
        # psi(v) = psi(v[0,1] + v[1,2]) is stored as support entries (1,0), (2,1)
        c = upper_datum(3, 3)
        assert c.support.support() == {(1, 0), (2, 1)}
        assert c.value((0, 1)) == 1 and c.value((0, 2)) == 0

    @given(perms)
    def test_functorial(self, pair):
        g_img, h_img = pair
        n = len(g_img)
        g, h = Matrix.permutation(list(g_img)), Matrix.permutation(list(h_img))
        c = upper_datum(n, n)
        assert exchange.conjugate_character(c, g @ h) == exchange.conjugate_character(
            exchange.conjugate_character(c, h), g)

    @pytest.mark.parametrize("p", [(4, 2, 1), (3, 3, 1, 1), (2, 2, 1)])
    def test_stabilizer_fixes_character(self, p):
        _, n2 = orbits.root_sets(p)
        c = exchange.CharacterDatum(n2, orbits.support_matrix(p))
        for index, size in enumerate(orbits.stabilizer_shape(p)):
            g = Matrix([[2 if i == j == 0 else int(i == j) for j in range(size)] for i in range(size)])
            assert exchange.conjugate_character(c, orbits.stabilizer_embedding(p, index, g)) == c

    def test_rejects_singular(self):
        with pytest.raises(ValueError):
            exchange.conjugate_character(upper_datum(2, 2), Matrix.zeros(2))


class TestRootSets:
    def test_bracket(self):
        assert exchange.bracket((0, 1), (1, 2)) == [((0, 2), 1)]
        assert exchange.is_abelian({(0, 2), (1, 2)})
        assert not exchange.is_abelian({(0, 1), (1, 2)})
        assert exchange.is_group(exchange.upper_triangular(4))


class TestHookPlans:
    @pytest.mark.parametrize("ell, k", [(5, 3), (6, 2), (4, 1), (7, 7), (8, 4)])
    def test_derivative(self, ell, k):
        report = exchange.verify_derivative_exchange(ell, k)
        assert report.all_pass, report.failures()
        assert report.final_character == exchange.derivative_datum(ell, k)

    @pytest.mark.parametrize("ell, k", [(5, 3), (6, 2), (4, 1), (7, 7), (8, 4)])
    def test_mirror(self, ell, k):
        report = exchange.verify_mirror_derivative_exchange(ell, k)
        assert report.all_pass, report.failures()
        assert report.final_character == exchange.mirror_derivative_datum(ell, k)

    def test_trivial_hook_has_no_exchange(self):
        report = exchange.verify_derivative_exchange(5, 1)
        assert not any(step.label.startswith("exchange") for step in report.steps)

    def test_odd_closed_form(self):
        # (5, 3): the accumulated conjugation swaps the first two 2-blocks
        w = exchange._block_matrix((2, 2, 1), (2, 2, 1), {(0, 1): 1, (1, 0): 1, (2, 2): 1})
        assert w == Matrix.permutation([2, 3, 0, 1, 4])
        report = exchange.verify_derivative_exchange(5, 3)
        assert report.steps[-1].checks["product_matches_closed_form"]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            exchange.verify_derivative_exchange(3, 4)


class TestRectangularPlans:
    def test_two_by_two(self):
        report = exchange.verify_rectangular_exchange(2, 2)
        assert report.all_pass, report.failures()
        # superdiagonal pattern (1, 0, 1)
        assert report.final_character.support == Matrix.from_positions(4, [(1, 0), (3, 2)])

    def test_stage_obstructions(self):
        report = exchange.verify_rectangular_exchange(2, 3)
        assert report.all_pass, report.failures()
        notes = [n for step in report.steps for n in step.notes if n.startswith("obstruction orbit")]
        assert notes[0].startswith("obstruction orbit (3, 1, 1, 1)")
        assert notes[1].startswith("obstruction orbit (3, 2, 1)")

    @pytest.mark.parametrize("k, r", [(3, 2), (1, 5), (4, 3), (2, 6)])
    def test_passes(self, k, r):
        report = exchange.verify_rectangular_exchange(k, r)
        assert report.all_pass, report.failures()


class TestInvariance:
    @pytest.mark.parametrize("k, r, expected", [(2, 3, (3, 2, 1)), (3, 2, (4, 2)), (1, 3, (2, 1)), (4, 2, (5, 3))])
    def test_obstruction_type(self, k, r, expected):
        assert jordan_partition(exchange.invariance_obstruction(k, r).alpha) == expected
        report = exchange.verify_rectangular_invariance(k, r, 20, seed=3)
        assert report.all_pass, report.failures()

    def test_samples_are_special_linear(self):
        rng = random.Random(0)
        for _ in range(10):
            a = exchange.random_special_linear(3, rng)
            assert a.is_integral()
            # determinant one: the inverse is integral too
            assert exchange.inverse(a).is_integral()

    def test_r_one_disables_obstruction(self):
        report = exchange.verify_rectangular_invariance(3, 1, 5)
        assert report.all_pass
        assert any("disabled" in n for n in report.notes)
