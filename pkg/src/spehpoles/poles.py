"""Constant-term cells, c-functions, pole certificates and character exponents
for the Eisenstein series induced from Delta(tau, m1)|.|^s x Delta(tau, m2)|.|^-s.

A cell (a, b) lists r segments; segment i holds a_i letters of the first
Speh block followed by b_i letters of the second.  Letters are the m = m1+m2
blocks of size n of the Levi subgroup GL_n^m.  All L-factors are
L(tau x tau^vee, .) and are represented only by their argument, a linear
form in s.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

from .exact import BlockPermutation, Composition, LinearForm, Matrix, Rational, as_rational

NORMALIZED_OPERATOR_NOTE = ("normalized intertwining operators are holomorphic and "
                            "nonvanishing in the relevant range (Moeglin-Waldspurger, imported)")
KEYS_SHAHIDI_NOTE = ("rank-one base case: the intertwining operator at s=0 acts by -1 "
                     "(Keys-Shahidi, imported)")


# ----------------------------------------------------------------------------
# cells
# ----------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Cell:
    r: int
    a: Composition
    b: Composition

    def __post_init__(self) -> None:
        if len(self.a) != self.r or len(self.b) != self.r:
            raise ValueError("a and b must have length r")
        if any(x < 0 for x in self.a + self.b):
            raise ValueError("cell entries must be non-negative")
        if any(self.a[i] + self.b[i] < 1 for i in range(self.r)):
            raise ValueError("every segment must be nonempty")
        if any(self.b[i] < 1 for i in range(self.r - 1)):
            raise ValueError("b_i >= 1 is required before the last segment")
        if any(self.a[i] < 1 for i in range(1, self.r)):
            raise ValueError("a_i >= 1 is required after the first segment")

    @property
    def m1(self) -> int:
        return sum(self.a)

    @property
    def m2(self) -> int:
        return sum(self.b)

    def label(self) -> str:
        return f"r={self.r} a={self.a} b={self.b}"

    def letters(self) -> list[tuple[str, int, int]]:
        """(group, segment, index within the segment's group letters), in position order."""
        out = []
        for i in range(self.r):
            out.extend(("a", i, t) for t in range(self.a[i]))
            out.extend(("b", i, t) for t in range(self.b[i]))
        return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for x in range(total + 1):
        for rest in _compositions(total - x, parts - 1):
            yield (x,) + rest


@lru_cache(maxsize=None)
def _cells(m1: int, m2: int) -> tuple[Cell, ...]:
    out = []
    for r in range(1, m1 + m2 + 1):
        for a in _compositions(m1, r):
            if any(x < 1 for x in a[1:]):
                continue
            for b in _compositions(m2, r):
                if any(x < 1 for x in b[:-1]):
                    continue
                if all(a[i] + b[i] >= 1 for i in range(r)):
                    out.append(Cell(r, a, b))
    return tuple(sorted(out))


def enumerate_cells(m1: int, m2: int) -> list[Cell]:
    """All cells of the constant term, ordered by (r, a, b)."""
    if m1 < 0 or m2 < 0:
        raise ValueError("m1, m2 must be non-negative")
    return list(_cells(m1, m2))


def expected_cell_count(m1: int, m2: int) -> int:
    return comb(m1 + m2, m1) if m1 + m2 else 0


def _slots(cell: Cell) -> list[int]:
    """Inducing slot (0-based) of each position: first group, then second."""
    m1 = cell.m1
    a_before = [sum(cell.a[:i]) for i in range(cell.r)]
    b_before = [sum(cell.b[:i]) for i in range(cell.r)]
    out = []
    for group, i, t in cell.letters():
        out.append(a_before[i] + t if group == "a" else m1 + b_before[i] + t)
    return out


def cell_weyl_matrix(cell: Cell, n: int = 1) -> Matrix:
    """The block permutation matrix w with w[slot, position] = I_n."""
    return BlockPermutation((n,) * (cell.m1 + cell.m2), tuple(_slots(cell))).matrix()


def eta_permutation(cell: Cell) -> BlockPermutation:
    """Letter -> position after reversing each inducing group (image is 0-based)."""
    m1, m2 = cell.m1, cell.m2
    reverse = [m1 - 1 - p if p < m1 else m1 + m2 - 1 - (p - m1) for p in range(m1 + m2)]
    image = [0] * (m1 + m2)
    for pos, slot in enumerate(_slots(cell)):
        image[reverse[slot]] = pos
    return BlockPermutation((1,) * (m1 + m2), tuple(image))


def slot_permutation(cell: Cell) -> BlockPermutation:
    """Inducing slot -> position (image is 0-based), with no reversal inside the groups."""
    image = [0] * (cell.m1 + cell.m2)
    for pos, slot in enumerate(_slots(cell)):
        image[slot] = pos
    return BlockPermutation((1,) * (cell.m1 + cell.m2), tuple(image))


def cross_inversions(cell: Cell, through_reversal: bool = False) -> list[tuple[int, int]]:
    """Inverted index pairs (i, j), 0-based, with i in the first group and j in the second.

    Indices are inducing slots by default; with ``through_reversal`` they are
    letters of ``eta_permutation``.
    """
    m1 = cell.m1
    perm = eta_permutation(cell) if through_reversal else slot_permutation(cell)
    return [(i, j) for i, j in perm.inversions() if i < m1 <= j]


# ----------------------------------------------------------------------------
# ratio products of L-factors
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioProduct:
    """prod L(num) / prod L(den) with arguments as linear forms in s."""

    numerators: tuple[LinearForm, ...] = ()
    denominators: tuple[LinearForm, ...] = ()

    @classmethod
    def build(cls, numerators: Iterable[LinearForm], denominators: Iterable[LinearForm]) -> "RatioProduct":
        num, den = Counter(numerators), Counter(denominators)
        common = num & den
        num -= common
        den -= common
        return cls(tuple(sorted(num.elements())), tuple(sorted(den.elements())))

    def simplified(self) -> "RatioProduct":
        return RatioProduct.build(self.numerators, self.denominators)

    def times(self, other: "RatioProduct") -> "RatioProduct":
        return RatioProduct.build(self.numerators + other.numerators,
                                  self.denominators + other.denominators)

    def is_empty(self) -> bool:
        return not self.numerators and not self.denominators

    def render(self, symbol: str = "s") -> str:
        if self.is_empty():
            return "1"

        def side(forms: tuple[LinearForm, ...]) -> str:
            if not forms:
                return "1"
            return " ".join(f"L({f.render(symbol)})" for f in forms)

        return f"{side(self.numerators)} / {side(self.denominators)}"

    def __str__(self) -> str:
        return self.render()


def _form(constant: Rational, slope: Rational = 2) -> LinearForm:
    return LinearForm(constant, slope)


def gk_ratio(cell: Cell, m1: int, m2: int, through_reversal: bool = False) -> RatioProduct:
    """Gindikin-Karpelevich product over cross inversions, after cancellation.

    The inverted pair i <= m1 < m1 + t contributes
    L(u_i - u_{m1+t}) / L(u_i - u_{m1+t} + 1) with
    u_i = (m1+1-2i)/2 + s and u_{m1+t} = (m2+1-2t)/2 - s.
    By default i and t index inducing slots, which reproduces ``closed_form_c``.
    ``through_reversal`` indexes them by the letters of ``eta_permutation``
    instead; the two products differ on most cells with r >= 2.
    """
    _check_cell(cell, m1, m2)
    num, den = [], []
    for i, j in cross_inversions(cell, through_reversal):
        li, t = i + 1, j - m1 + 1
        diff = _form(Fraction(m1 + 1 - 2 * li, 2) - Fraction(m2 + 1 - 2 * t, 2))
        num.append(diff)
        den.append(diff + 1)
    return RatioProduct.build(num, den)


def closed_form_c(cell: Cell, m1: int, m2: int) -> RatioProduct:
    """The double product over i < r and j <= b_i, taken literally."""
    _check_cell(cell, m1, m2)
    half = Fraction(m1 + m2, 2)
    num, den = [], []
    for i in range(cell.r - 1):
        b_before = sum(cell.b[:i])
        a_after = sum(cell.a[i + 1:])
        for j in range(1, cell.b[i] + 1):
            num.append(_form(-half + b_before + j))
            den.append(_form(-half + a_after + b_before + j))
    return RatioProduct.build(num, den)


def open_cell(m1: int, m2: int) -> Cell:
    """The cell supported on the open Bruhat cell: all of the second block first."""
    return Cell(2, (0, m1), (m2, 0))


def open_cell_display(m1: int, m2: int, shift: int) -> RatioProduct:
    """prod_{j<=m2} L(2s - m/2 + j) / L(2s - m/2 + shift + j)."""
    half = Fraction(m1 + m2, 2)
    return RatioProduct.build([_form(-half + j) for j in range(1, m2 + 1)],
                              [_form(-half + shift + j) for j in range(1, m2 + 1)])


def _check_cell(cell: Cell, m1: int, m2: int) -> None:
    if (cell.m1, cell.m2) != (m1, m2):
        raise ValueError(f"cell {cell.label()} does not have sizes ({m1}, {m2})")


# ----------------------------------------------------------------------------
# pole certificates
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class LAxioms:
    """Standing facts about L(tau x tau^vee, z) on the real line.

    A pole of order ``pole_order`` at ``pole_point``; holomorphic and nonzero
    for real z >= ``nonvanishing_threshold`` away from the pole.
    """

    pole_point: Rational = Fraction(1)
    pole_order: int = 1
    nonvanishing_threshold: Rational = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pole_point", as_rational(self.pole_point))
        object.__setattr__(self, "nonvanishing_threshold", as_rational(self.nonvanishing_threshold))
        if self.pole_order < 1:
            raise ValueError("pole order must be positive")
        if self.pole_point < self.nonvanishing_threshold:
            raise ValueError("pole point must not lie below the nonvanishing threshold")


@dataclass(frozen=True)
class PoleCertificate:
    point: Rational
    order: int
    status: str  # "exact" or "indeterminate"
    offending: tuple[LinearForm, ...] = ()

    @property
    def exact(self) -> bool:
        return self.status == "exact"


def pole_certificate(prod: RatioProduct, s0: Rational, ax: LAxioms = LAxioms()) -> PoleCertificate:
    """Order of the product at s0 under the axioms.

    Numerator arguments hitting the pole point count +1, denominator ones -1.
    Arguments below the threshold make the verdict indeterminate.
    """
    s0 = as_rational(s0)
    order = 0
    offending = []
    for sign, forms in ((1, prod.numerators), (-1, prod.denominators)):
        for f in forms:
            value = f(s0)
            if value == ax.pole_point:
                order += sign * ax.pole_order
            if value < ax.nonvanishing_threshold:
                offending.append(f)
    status = "indeterminate" if offending else "exact"
    return PoleCertificate(s0, order, status, tuple(offending))


def candidate_poles(prod: RatioProduct, ax: LAxioms = LAxioms()) -> list[Rational]:
    """Points where some numerator argument equals the pole point."""
    out = set()
    for f in prod.numerators:
        root = (f - ax.pole_point).root()
        if root is not None:
            out.add(root)
    return sorted(out)


@dataclass
class RightmostPoleReport:
    m1: int
    m2: int
    expected: Rational
    max_candidate: Rational | None
    certificates: list[tuple[Cell, PoleCertificate]]
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]


def rightmost_pole_scan(m1: int, m2: int, ax: LAxioms = LAxioms()) -> RightmostPoleReport:
    """Certify that m/4 is the rightmost candidate pole and that it is simple."""
    if m1 < 1 or m2 < 1:
        raise ValueError("need m1, m2 >= 1")
    point = Fraction(m1 + m2, 4)
    candidates: list[Rational] = []
    certs = []
    for cell in enumerate_cells(m1, m2):
        prod = gk_ratio(cell, m1, m2)
        candidates.extend(candidate_poles(prod, ax))
        certs.append((cell, pole_certificate(prod, point, ax)))
    top = max(candidates) if candidates else None
    report = RightmostPoleReport(m1, m2, point, top, certs)
    report.checks["max_candidate_is_m_over_4"] = top == point
    report.checks["no_candidate_beyond"] = all(c <= point for c in candidates)
    report.checks["all_certificates_exact"] = all(c.exact for _, c in certs)
    report.checks["all_orders_at_most_one"] = all(c.order <= 1 for _, c in certs)
    report.checks["some_order_exactly_one"] = any(c.order == 1 for _, c in certs)
    return report


# ----------------------------------------------------------------------------
# character exponents
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class CharacterExponents:
    cell: Cell
    forms: tuple[LinearForm, ...]  # linear forms in s0, one per c_1 .. c_{m-1}


def carried_positions(cell: Cell) -> list[int]:
    """1-based central-character slot reached by each position's coordinate c_q.

    Segments are met in reverse order while letters inside a segment keep
    their order: the t-th a-letter of segment i lands in slot
    a_{i+1} + ... + a_r + t, the t-th b-letter in m1 + b_{i+1} + ... + b_r + t.
    """
    m1 = cell.m1
    out = []
    for group, i, t in cell.letters():
        if group == "a":
            out.append(sum(cell.a[i + 1:]) + t + 1)
        else:
            out.append(m1 + sum(cell.b[i + 1:]) + t + 1)
    return out


def _chi_weight(p: int, m1: int, m2: int, n: int) -> LinearForm:
    if p <= m1:
        return LinearForm(Fraction(n * (2 * p - 1 - m1), 2), n)
    j = p - m1
    return LinearForm(Fraction(n * (2 * j - 1 - m2), 2), -n)


def character_exponents(cell: Cell, m1: int, m2: int, n: int) -> CharacterExponents:
    """Exponents n_q(a, b, s0) of |c_q|, q < m, after eliminating c_m."""
    _check_cell(cell, m1, m2)
    m = m1 + m2
    totals = []
    for q, p in enumerate(carried_positions(cell), start=1):
        modulus = LinearForm(Fraction(n * (m + 1 - 2 * q), 2))
        totals.append(modulus + _chi_weight(p, m1, m2, n))
    last = totals[-1]
    return CharacterExponents(cell, tuple(t - last for t in totals[:-1]))


def first_exponent_closed_form(cell: Cell, m1: int, m2: int, n: int) -> tuple[str, LinearForm]:
    """The reference closed form for n_1 in the case the cell falls into.

    Cases: "a1>0,br>0", "a1>0,br=0", "a1=0,br>0", "a1=0,br=0".
    """
    m = m1 + m2
    a1, ar, b1, br = cell.a[0], cell.a[-1], cell.b[0], cell.b[-1]
    three_halves = Fraction(3 * m, 2)
    if a1 >= 1 and br >= 1:
        return "a1>0,br>0", LinearForm(n * (three_halves - (a1 + br)), 2 * n)
    if a1 >= 1:
        return "a1>0,br=0", LinearForm(n * (m1 - (a1 + ar) + m))
    if br >= 1:
        return "a1=0,br>0", LinearForm(n * (m1 - (b1 + br) + m))
    return "a1=0,br=0", LinearForm(n * (three_halves - (ar + b1)), -2 * n)


def first_exponent_corrected(cell: Cell, m1: int, m2: int, n: int) -> LinearForm:
    """n_1 for a cell with a_1 = 0 and b_r >= 1: n(m2 - (b_1 + b_r) + m).

    Direct computation puts m2 where the reference case formula has m1.
    """
    if cell.a[0] != 0 or cell.b[-1] < 1:
        raise ValueError("formula applies only when a_1 = 0 and b_r >= 1")
    return LinearForm(n * (m2 - (cell.b[0] + cell.b[-1]) + m1 + m2))


@dataclass(frozen=True)
class ClosedFormComparison:
    cell: Cell
    case: str
    direct: LinearForm
    closed_form: LinearForm

    @property
    def agrees(self) -> bool:
        return self.direct == self.closed_form


def compare_first_exponent(cell: Cell, m1: int, m2: int, n: int) -> ClosedFormComparison | None:
    """Direct n_1 against the reference case formula; None when m < 2."""
    ex = character_exponents(cell, m1, m2, n)
    if not ex.forms:
        return None
    case, closed = first_exponent_closed_form(cell, m1, m2, n)
    return ClosedFormComparison(cell, case, ex.forms[0], closed)


def solve_trivial(ex: CharacterExponents) -> frozenset[Rational] | None:
    """Values of s0 making every exponent vanish; None if they all vanish identically."""
    roots = set()
    for f in ex.forms:
        if f.slope == 0:
            if f.constant != 0:
                return frozenset()
        else:
            roots.add(f.root())
    if not roots:
        return None if all(f.is_zero() for f in ex.forms) else frozenset()
    if len(roots) > 1:
        return frozenset()
    return frozenset(roots)


def trivial_character_solutions(m1: int, m2: int, n: int) -> dict[Cell, frozenset[Rational] | None]:
    """For each cell, the s0 at which its central character is trivial."""
    if m1 < 1 or m2 < 1:
        raise ValueError("need m1, m2 >= 1")
    return {cell: solve_trivial(character_exponents(cell, m1, m2, n))
            for cell in enumerate_cells(m1, m2)}


def solution_contains(sol: frozenset[Rational] | None, s0: Rational) -> bool:
    return sol is None or s0 in sol


@dataclass
class VanishingReport:
    k: int
    n: int
    verdict: str  # "consistent-vanishing" or "inconsistent"
    trivial_cells: list[Cell]
    notes: list[str]


def vanishing_at_zero_report(k: int, n: int) -> VanishingReport:
    """Scan the cells of (k, k) for a central character trivial at s0 = 0."""
    if k < 1:
        raise ValueError("need k >= 1")
    sols = trivial_character_solutions(k, k, n)
    trivial = [cell for cell, sol in sols.items() if solution_contains(sol, Fraction(0))]
    notes = [NORMALIZED_OPERATOR_NOTE]
    if k == 1:
        notes.append(KEYS_SHAHIDI_NOTE)
    verdict = "consistent-vanishing" if not trivial else "inconsistent"
    return VanishingReport(k, n, verdict, trivial, notes)


def cells_summary(m1: int, m2: int) -> list[tuple[Cell, RatioProduct, RatioProduct]]:
    """(cell, gk product, closed-form product) for every cell."""
    return [(c, gk_ratio(c, m1, m2), closed_form_c(c, m1, m2)) for c in enumerate_cells(m1, m2)]


def as_cell(r: int, a: Sequence[int], b: Sequence[int]) -> Cell:
    return Cell(r, tuple(a), tuple(b))
