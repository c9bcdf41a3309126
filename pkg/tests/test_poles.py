from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spehpoles import poles
from spehpoles.exact import LinearForm, Matrix
from spehpoles.poles import Cell, LAxioms, RatioProduct

F = Fraction


def ratio(nums, dens) -> RatioProduct:
    """Products written as lists of (constant, slope) pairs for L(constant + slope*s)."""
    return RatioProduct.build([LinearForm(c, a) for c, a in nums], [LinearForm(c, a) for c, a in dens])


BASE = ratio([(0, 2)], [(1, 2)])  # L(2s) / L(2s+1)


class TestCells:
    def test_small_enumerations(self):
        assert poles.enumerate_cells(1, 1) == [Cell(1, (1,), (1,)), Cell(2, (0, 1), (1, 0))]
        assert len(poles.enumerate_cells(2, 1)) == 3
        assert len(poles.enumerate_cells(2, 2)) == 6

    @pytest.mark.parametrize("m1, m2", [(a, m - a) for m in range(1, 11) for a in range(0, m + 1)])
    def test_count_is_binomial(self, m1, m2):
        assert len(poles.enumerate_cells(m1, m2)) == comb(m1 + m2, m1)

    def test_order_is_lexicographic(self):
        cells = poles.enumerate_cells(3, 2)
        assert cells == sorted(cells, key=lambda c: (c.r, c.a, c.b))

    @pytest.mark.parametrize("r, a, b", [(2, (1, 1), (0, 1)), (2, (1, 0), (1, 1)), (1, (0,), (0,))])
    def test_invalid_cells(self, r, a, b):
        with pytest.raises(ValueError):
            Cell(r, a, b)

    def test_weyl_matrix(self):
        cell = Cell(2, (0, 1), (1, 0))
        assert poles.cell_weyl_matrix(cell, 1) == Matrix([[0, 1], [1, 0]])
        assert poles.cell_weyl_matrix(cell, 2) == Matrix.permutation([2, 3, 0, 1])

    def test_eta(self):
        assert poles.eta_permutation(Cell(2, (0, 1), (1, 0))).image == (1, 0)
        # r = 1: reversal inside each group only, no cross pairs
        assert poles.eta_permutation(Cell(1, (2,), (1,))).image == (1, 0, 2)
        assert poles.cross_inversions(Cell(1, (2,), (2,)), through_reversal=True) == []
        cell = Cell(2, (1, 1), (1, 0))
        assert len(poles.cross_inversions(cell)) == 1
        assert len(poles.cross_inversions(cell, through_reversal=True)) == 1


class TestCFunctions:
    def test_base_case(self):
        cell = Cell(2, (0, 1), (1, 0))
        assert poles.gk_ratio(cell, 1, 1) == BASE
        assert poles.closed_form_c(cell, 1, 1) == BASE
        assert BASE.render() == "L(2s) / L(2s + 1)"

    def test_trivial_cell(self):
        assert poles.gk_ratio(Cell(1, (3,), (2,)), 3, 2).is_empty()
        assert poles.closed_form_c(Cell(1, (3,), (2,)), 3, 2).is_empty()

    def test_two_two_middle_cell(self):
        # i = 1, j = 1: numerator 2s - 2 + 1, denominator 2s - 2 + a_2 + 1
        assert poles.closed_form_c(Cell(2, (1, 1), (1, 1)), 2, 2) == ratio([(-1, 2)], [(0, 2)])

    def test_open_cell(self):
        # (2, 1): j = 1 only, numerator 2s - 3/2 + 1, denominator 2s - 3/2 + 2 + 1
        prod = poles.gk_ratio(poles.open_cell(2, 1), 2, 1)
        assert prod == ratio([(F(-1, 2), 2)], [(F(3, 2), 2)])
        assert poles.open_cell_display(2, 1, 2) == prod
        assert poles.open_cell_display(2, 1, 1) != prod

    def test_reversed_letters_give_a_different_product(self):
        cell = Cell(2, (0, 1), (1, 1))
        assert poles.gk_ratio(cell, 1, 2) == ratio([(F(-1, 2), 2)], [(F(1, 2), 2)])
        assert poles.gk_ratio(cell, 1, 2, through_reversal=True) == ratio([(F(1, 2), 2)], [(F(3, 2), 2)])

    def test_gk_matches_closed_form_up_to_eight(self):
        for m in range(2, 9):
            for m1 in range(1, m):
                for cell in poles.enumerate_cells(m1, m - m1):
                    assert poles.gk_ratio(cell, m1, m - m1) == poles.closed_form_c(cell, m1, m - m1)

    def test_build_cancels(self):
        prod = ratio([(0, 2), (1, 2)], [(1, 2), (2, 2)])
        assert prod == ratio([(0, 2)], [(2, 2)])

    def test_sizes_are_checked(self):
        with pytest.raises(ValueError):
            poles.gk_ratio(Cell(2, (0, 1), (1, 0)), 2, 1)


class TestCertificates:
    def test_base_case(self):
        assert poles.pole_certificate(BASE, F(1, 2)) == poles.PoleCertificate(F(1, 2), 1, "exact", ())
        assert poles.pole_certificate(BASE, F(3, 4)) == poles.PoleCertificate(F(3, 4), 0, "exact", ())

    def test_indeterminate_below_threshold(self):
        cert = poles.pole_certificate(BASE, F(1, 4))
        assert cert.status == "indeterminate"
        assert cert.offending == (LinearForm(0, 2),)

    def test_open_cell_is_simple_at_m_over_4(self):
        for m in range(2, 9):
            for m1 in range(1, m):
                cert = poles.pole_certificate(poles.gk_ratio(poles.open_cell(m1, m - m1), m1, m - m1), F(m, 4))
                assert (cert.order, cert.status) == (1, "exact")

    def test_axioms(self):
        with pytest.raises(ValueError):
            LAxioms(pole_point=F(1, 2), nonvanishing_threshold=1)
        double = LAxioms(pole_order=2)
        assert poles.pole_certificate(BASE, F(1, 2), double).order == 2

    @given(st.lists(st.tuples(st.integers(-6, 6), st.integers(1, 3)), max_size=4),
           st.lists(st.tuples(st.integers(-6, 6), st.integers(1, 3)), max_size=4),
           st.tuples(st.integers(-6, 6), st.integers(1, 3)),
           st.integers(0, 12))
    def test_common_factor_leaves_order_unchanged(self, nums, dens, extra, quarter):
        point = F(quarter, 4)
        base = RatioProduct(tuple(LinearForm(c, a) for c, a in nums), tuple(LinearForm(c, a) for c, a in dens))
        f = LinearForm(*extra)
        padded = RatioProduct(base.numerators + (f,), base.denominators + (f,))
        assert poles.pole_certificate(padded, point).order == poles.pole_certificate(base, point).order

    @pytest.mark.parametrize("m1, m2", [(a, m - a) for m in range(2, 9) for a in range(1, m)])
    def test_no_poles_right_of_m_over_4(self, m1, m2):
        for shift in (F(1, 4), F(1, 2), F(3)):
            for cell in poles.enumerate_cells(m1, m2):
                cert = poles.pole_certificate(poles.gk_ratio(cell, m1, m2), F(m1 + m2, 4) + shift)
                assert (cert.order, cert.status) == (0, "exact")


class TestRightmostScan:
    @pytest.mark.parametrize("m1, m2, top", [(1, 1, F(1, 2)), (2, 1, F(3, 4)), (2, 2, F(1))])
    def test_examples(self, m1, m2, top):
        report = poles.rightmost_pole_scan(m1, m2)
        assert report.passed, report.failures()
        assert report.max_candidate == top

    def test_reversed_letters_keep_the_rightmost_pole(self):
        for m in range(2, 9):
            for m1 in range(1, m):
                m2 = m - m1
                prods = [poles.gk_ratio(c, m1, m2, through_reversal=True) for c in poles.enumerate_cells(m1, m2)]
                assert max(p for prod in prods for p in poles.candidate_poles(prod)) == F(m, 4)


class TestCharacters:
    def test_one_one(self):
        ex = poles.character_exponents(Cell(1, (1,), (1,)), 1, 1, 1)
        assert ex.forms == (LinearForm(1, 2),)
        assert poles.character_exponents(Cell(1, (1,), (1,)), 1, 1, 3).forms == (LinearForm(3, 6),)
        # a_1 = b_r = 0: trivial exactly when 2 s0 - 1 = 2 - 2
        assert poles.character_exponents(Cell(2, (0, 1), (1, 0)), 1, 1, 1).forms == (LinearForm(1, -2),)

    def test_hand_computed_cell(self):
        # (1, 2), a = (0, 1), b = (1, 1): modulus 1, 0, -1; carried slots 3, 1, 2
        ex = poles.character_exponents(Cell(2, (0, 1), (1, 1)), 1, 2, 1)
        assert ex.forms == (LinearForm(3), LinearForm(F(3, 2), 2))
        assert poles.first_exponent_corrected(Cell(2, (0, 1), (1, 1)), 1, 2, 1) == LinearForm(3)
        cmp = poles.compare_first_exponent(Cell(2, (0, 1), (1, 1)), 1, 2, 1)
        assert cmp.case == "a1=0,br>0" and cmp.closed_form == LinearForm(2) and not cmp.agrees

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_first_closed_form(self, n):
        for m in range(2, 9):
            for m1 in range(1, m):
                for cell in poles.enumerate_cells(m1, m - m1):
                    cmp = poles.compare_first_exponent(cell, m1, m - m1, n)
                    if cmp.case != "a1=0,br>0":
                        assert cmp.agrees, cell
                    else:
                        assert cmp.direct == poles.first_exponent_corrected(cell, m1, m - m1, n)

    def test_trivial_solutions_one_one(self):
        sols = poles.trivial_character_solutions(1, 1, 1)
        assert sols == {Cell(1, (1,), (1,)): frozenset({F(-1, 2)}), Cell(2, (0, 1), (1, 0)): frozenset({F(1, 2)})}

    def test_nothing_trivial_left_of_m_over_4(self):
        for n in (1, 2, 3):
            for m in range(2, 9):
                for m1 in range(1, m):
                    for sol in poles.trivial_character_solutions(m1, m - m1, n).values():
                        assert sol is not None
                        assert all(not 0 <= s < F(m, 4) for s in sol)

    @pytest.mark.parametrize("k, n", [(1, 1), (2, 1), (3, 2), (4, 3)])
    def test_vanishing_at_zero(self, k, n):
        report = poles.vanishing_at_zero_report(k, n)
        assert report.verdict == "consistent-vanishing"
        assert (poles.KEYS_SHAHIDI_NOTE in report.notes) == (k == 1)

    def test_solver(self):
        ex = poles.CharacterExponents(Cell(1, (1,), (1,)), (LinearForm(0), LinearForm(0)))
        assert poles.solve_trivial(ex) is None
        ex = poles.CharacterExponents(Cell(1, (1,), (1,)), (LinearForm(-1, 2), LinearForm(-2, 4)))
        assert poles.solve_trivial(ex) == {F(1, 2)}
        ex = poles.CharacterExponents(Cell(1, (1,), (1,)), (LinearForm(-1, 2), LinearForm(1, 1)))
        assert poles.solve_trivial(ex) == frozenset()
