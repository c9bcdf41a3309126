"""Results for the series attached to a pair of Speh data (n, m1, m2):
the descent recursion with its holomorphy gates, the pole list, the
vanishing verdict at zero, residual orbits, unramified exponent multisets
and segment linkage.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .exact import Partition, Scalar, as_partition, as_rational, dominance_leq
from .poles import VanishingReport, vanishing_at_zero_report

DESCENT_NOTE = ("descent carries the (m1, m2) Eisenstein series to the (m1-1, m2-1) one "
                "with a |det| twist, holomorphic where the gate holds (imported)")
UNRAMIFIED_BOUND_NOTE = ("orbit equality rests on the unramified-constituent bound at one good "
                         "place (Liu-Xu, imported); only the exponent coincidence is checked")
GENERIC_ORBIT_NOTE = "generic orbit bound for induced representations (imported)"


class InconsistencyError(RuntimeError):
    """A recursion gate or closed-form comparison failed."""


@dataclass(frozen=True, order=True)
class SpehSpec:
    """Cuspidal block size n and the two Speh lengths.

    (0, 0) is allowed: it is the trivial datum that (1, 1) descends to.
    """

    n: int
    m1: int
    m2: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.m1 < 0 or self.m2 < 0:
            raise ValueError("m1 and m2 must be non-negative")

    @property
    def m(self) -> int:
        return self.m1 + self.m2

    @property
    def depth(self) -> int:
        return min(self.m1, self.m2)

    def swapped(self) -> "SpehSpec":
        return SpehSpec(self.n, self.m2, self.m1)


@dataclass(frozen=True)
class DescentResult:
    child: SpehSpec
    det_twist: Fraction
    region_bound: Fraction
    variant: str  # "D" or "D'"

    def admits(self, s: Scalar) -> bool:
        return 2 * as_rational(s) >= self.region_bound


def descend(spec: SpehSpec, variant: str | None = None) -> DescentResult:
    """One descent step.  The variant defaults to D when m1 >= m2 and D' otherwise."""
    if spec.depth < 1:
        raise ValueError(f"no descent available for {spec}: min(m1, m2) = 0")
    if variant is None:
        variant = "D" if spec.m1 >= spec.m2 else "D'"
    child = SpehSpec(spec.n, spec.m1 - 1, spec.m2 - 1)
    if variant == "D":
        return DescentResult(child, Fraction(2 * spec.n - 1, 2), Fraction(spec.m2 - spec.m1, 2), "D")
    if variant == "D'":
        return DescentResult(child, Fraction(1 - 2 * spec.n, 2), Fraction(spec.m1 - spec.m2, 2), "D'")
    raise ValueError(f"unknown descent variant {variant!r}")


@dataclass(frozen=True)
class GateRecord:
    """A pole point of a child spec checked against the parent's descent region."""

    spec: SpehSpec
    variant: str
    point: Fraction
    bound: Fraction
    satisfied: bool
    tight: bool


@dataclass(frozen=True)
class PoleTrace:
    spec: SpehSpec
    poles: tuple[tuple[Fraction, int], ...]
    gates: tuple[GateRecord, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def tight_gates(self) -> tuple[GateRecord, ...]:
        return tuple(g for g in self.gates if g.tight)


def expected_poles(spec: SpehSpec) -> list[tuple[Fraction, int]]:
    """The points m/4 - i/2 for 0 <= i < min(m1, m2), each simple."""
    return [(Fraction(spec.m, 4) - Fraction(i, 2), 1) for i in range(spec.depth)]


@lru_cache(maxsize=None)
def pole_trace(spec: SpehSpec) -> PoleTrace:
    """Poles in Re(s) > 0 by recursion on the descent, with every gate recorded.

    A point is passed up from the child only if it lies in the parent's
    descent region; a point outside raises ``InconsistencyError``.
    """
    if spec.depth == 0:
        return PoleTrace(spec, (), ())
    step = descend(spec)
    below = pole_trace(step.child)
    gates = list(below.gates)
    for point, _ in below.poles:
        ok = step.admits(point)
        gates.append(GateRecord(spec, step.variant, point, step.region_bound, ok, 2 * point == step.region_bound))
        if not ok:
            raise InconsistencyError(
                f"{spec}: child pole {point} violates 2s >= {step.region_bound} for {step.variant}")
    poles = ((Fraction(spec.m, 4), 1),) + below.poles
    if list(poles) != expected_poles(spec):
        raise InconsistencyError(f"{spec}: recursion gives {poles}, expected {expected_poles(spec)}")
    return PoleTrace(spec, poles, tuple(gates), (DESCENT_NOTE,))


def pole_list(spec: SpehSpec) -> list[tuple[Fraction, int]]:
    return list(pole_trace(spec).poles)


@dataclass(frozen=True)
class ZeroValueVerdict:
    spec: SpehSpec
    verdict: str  # "vanishes" or "no-claim"
    evidence: VanishingReport | None


def value_at_zero(spec: SpehSpec) -> ZeroValueVerdict:
    """Vanishing at s = 0 is claimed exactly when m1 = m2 >= 1."""
    if spec.m1 == spec.m2 >= 1:
        return ZeroValueVerdict(spec, "vanishes", vanishing_at_zero_report(spec.m1, spec.n))
    return ZeroValueVerdict(spec, "no-claim", None)


def generic_orbit_bound(n: int, parts: Iterable[int]) -> Partition:
    """((kn)^{m_1}, ((k-1)n)^{m_2 - m_1}, ..., n^{m_k - m_{k-1}}) for sorted m_1 <= ... <= m_k."""
    lengths = sorted(parts)
    if not lengths or any(x < 1 for x in lengths):
        raise ValueError("parts must be a nonempty list of positive integers")
    k = len(lengths)
    out: list[int] = []
    previous = 0
    for idx, length in enumerate(lengths):
        out += [(k - idx) * n] * (length - previous)
        previous = length
    return as_partition(out)


def residual_orbit(spec: SpehSpec, i: int) -> Partition:
    """((2n)^i, n^{m-2i}) for the residue at m/4 - i/2."""
    if not 0 <= i < spec.depth:
        raise ValueError(f"i = {i} outside 0..{spec.depth - 1}")
    return as_partition([2 * spec.n] * i + [spec.n] * (spec.m - 2 * i))


def residual_orbit_checks(spec: SpehSpec, i: int) -> dict[str, bool]:
    orbit = residual_orbit(spec, i)
    checks = {
        "size": sum(orbit) == spec.n * spec.m,
        "below_generic_bound": dominance_leq(orbit, generic_orbit_bound(spec.n, (spec.m1, spec.m2))),
    }
    if i >= 1:
        child = descend(spec).child
        checks["descent_recursion"] = orbit == (2 * spec.n,) + residual_orbit(child, i - 1)
    return checks


@dataclass(frozen=True)
class SatakeMultiset:
    """Multiset of (orbit index, exponent shift) pairs."""

    entries: Counter

    def __add__(self, other: "SatakeMultiset") -> "SatakeMultiset":
        return SatakeMultiset(self.entries + other.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SatakeMultiset) and +self.entries == +other.entries

    def __len__(self) -> int:
        return sum(self.entries.values())

    def sorted_entries(self) -> list[tuple[int, Fraction]]:
        return sorted(self.entries.elements(), key=lambda e: (e[0], -e[1]))


def speh_exponents(n: int, length: int, shift: Scalar) -> SatakeMultiset:
    shift = as_rational(shift)
    return SatakeMultiset(Counter(
        (j, Fraction(length - 1, 2) - a + shift) for j in range(1, n + 1) for a in range(length)))


def pole_point(spec: SpehSpec, i: int) -> Fraction:
    return Fraction(spec.m, 4) - Fraction(i, 2)


def satake_sides(spec: SpehSpec, i: int) -> tuple[SatakeMultiset, SatakeMultiset]:
    """Exponents of the induced datum at s(i) and of the twisted Speh product it should match."""
    if not 0 <= i < spec.depth:
        raise ValueError(f"i = {i} outside 0..{spec.depth - 1}")
    s = pole_point(spec, i)
    left = speh_exponents(spec.n, spec.m1, s) + speh_exponents(spec.n, spec.m2, -s)
    twist = Fraction(spec.m1 - spec.m2, 4)
    right = (speh_exponents(spec.n, spec.m - i, twist)
             + speh_exponents(spec.n, i, twist + Fraction(spec.m2 - spec.m1, 2)))
    return left, right


def coincidence_check(spec: SpehSpec, i: int) -> bool:
    left, right = satake_sides(spec, i)
    return left == right


@dataclass(frozen=True)
class SegmentPair:
    s: Fraction
    m1: int
    m2: int

    def first(self) -> frozenset[Fraction]:
        return frozenset(Fraction(self.m1 - 1, 2) + self.s - a for a in range(self.m1))

    def second(self) -> frozenset[Fraction]:
        return frozenset(Fraction(self.m2 - 1, 2) - self.s - b for b in range(self.m2))


def segments_linked(pair: SegmentPair) -> bool:
    x, y = pair.first(), pair.second()
    if (2 * pair.s + Fraction(pair.m2 - pair.m1, 2)).denominator != 1:
        return False
    if x <= y or y <= x:
        return False
    union = sorted(x | y)
    return all(b - a == 1 for a, b in zip(union, union[1:]))


def linked_points(m1: int, m2: int, bound: Scalar) -> set[Fraction]:
    """Linked values of s on the grid t/4 with 0 < t/4 <= bound."""
    bound = as_rational(bound)
    top = int(4 * bound)
    return {Fraction(t, 4) for t in range(1, top + 1)
            if segments_linked(SegmentPair(Fraction(t, 4), m1, m2))}
