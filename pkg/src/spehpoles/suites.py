"""Verification sweeps over every invariant the engines promise, shared by the
``verify`` command and the acceptance tests."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterator

from . import exchange, orbits, poles, theorems
from .exact import Matrix, inverse, jordan_partition, partitions_of, rank

SUITE_NAMES = ("orbit", "exchange", "cfun", "characters", "theorems", "satake")


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, instance: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(instance)

    def note(self, text: str) -> None:
        if text not in self.findings:
            self.findings.append(text)


# ----------------------------------------------------------------------------
# orbit structures
# ----------------------------------------------------------------------------

def _root_pairing(alpha: Matrix, a: tuple[int, int], b: tuple[int, int]) -> Fraction:
    """tr(alpha [E_a, E_b]) for elementary matrices E_a, E_b."""
    (i, j), (k, l) = a, b
    return Fraction((alpha[l, i] if j == k else 0) - (alpha[j, k] if l == i else 0))


def _gl_generators(size: int) -> Iterator[Matrix]:
    yield Matrix([[2 if i == j == 0 else int(i == j) for j in range(size)] for i in range(size)])
    if size >= 2:
        yield Matrix.identity(size) + Matrix.unit(size, 0, 1)
        yield Matrix.permutation([(i + 1) % size for i in range(size)])


def orbit_checks(p: tuple[int, ...], neutral: bool = True) -> dict[str, bool]:
    """Every partition-level invariant for one partition."""
    weights = orbits.torus_weights(p)
    alpha = orbits.support_matrix(p)
    big, small = orbits.root_sets(p)
    n_p = orbits.heisenberg_dim(p)
    xs, ys = orbits.polarization(p)
    checks = {
        "round_trip": orbits.parse_partition(p).partition() == p,
        "jordan_type": jordan_partition(alpha) == p,
        "whittaker_gap": all(weights[i] - weights[j] == -2 for i, j in alpha.support()),
        "heisenberg_count": len(big) - len(small) == 2 * n_p,
        "polarization_sizes": len(xs) == len(ys) == n_p,
        "polarization_in_gap_one": (xs | ys) <= big - small,
        "x_abelian": orbits.positions_commute(xs),
        "y_abelian": orbits.positions_commute(ys),
        "x_isotropic": all(_root_pairing(alpha, a, b) == 0 for a in xs for b in xs),
        "y_isotropic": all(_root_pairing(alpha, a, b) == 0 for a in ys for b in ys),
        "pairing_rank": rank(orbits.pairing_matrix(p)[2]) == n_p,
        "nprime_is_n2": orbits.nprime_subgroup(orbits.WhittakerPair(weights, alpha)) == small,
    }
    stabilizes = True
    for index, size in enumerate(orbits.stabilizer_shape(p)):
        for g in _gl_generators(size):
            big_g = orbits.stabilizer_embedding(p, index, g)
            stabilizes &= big_g @ alpha @ inverse(big_g) == alpha
    checks["stabilizer_fixes_alpha"] = stabilizes
    if neutral:
        triple = orbits.neutral_completion(alpha)
        checks["neutral_triple"] = triple.relations_hold()
        checks["neutral_weights"] = sorted(triple.whittaker_pair().weights, reverse=True) == list(weights)
    return checks


def orbit_suite(max_size: int) -> SuiteResult:
    res = SuiteResult("orbit")
    for ell in range(1, max_size + 1):
        for p in partitions_of(ell):
            for name, ok in orbit_checks(p, neutral=ell <= 8).items():
                res.record(ok, f"partition {','.join(map(str, p))}: {name}")
    return res


# ----------------------------------------------------------------------------
# exchange plans
# ----------------------------------------------------------------------------

def _record_plan(res: SuiteResult, report: exchange.PlanReport) -> None:
    res.record(report.all_pass, f"{report.name}: {'; '.join(report.failures()[:3])}")
    for text in report.notes:
        res.note(text)


def exchange_suite(max_size: int, seed: int = 0, samples: int = 20) -> SuiteResult:
    res = SuiteResult("exchange")
    for ell in range(1, max_size + 1):
        for k in range(1, ell + 1):
            _record_plan(res, exchange.verify_derivative_exchange(ell, k))
            _record_plan(res, exchange.verify_mirror_derivative_exchange(ell, k))
    bound = max_size + 4
    for k in range(1, bound + 1):
        for r in range(1, bound // k + 1):
            _record_plan(res, exchange.verify_rectangular_exchange(k, r))
            if r >= 2:
                _record_plan(res, exchange.verify_rectangular_invariance(k, r, samples, seed))
    res.note(exchange.EXCHANGE_LEMMA_NOTE)
    res.note(exchange.ORBIT_COMPARISON_NOTE)
    return res


# ----------------------------------------------------------------------------
# c-functions and poles
# ----------------------------------------------------------------------------

def _splits(low: int, high: int) -> Iterator[tuple[int, int]]:
    for m in range(low, high + 1):
        for m1 in range(1, m):
            yield m1, m - m1


def cfun_suite(max_size: int) -> SuiteResult:
    res = SuiteResult("cfun")
    for m1, m2 in _splits(2, max_size):
        for cell in poles.enumerate_cells(m1, m2):
            res.record(poles.gk_ratio(cell, m1, m2) == poles.closed_form_c(cell, m1, m2),
                       f"({m1},{m2}) cell {cell.label()}: GK product differs from closed form")
    for m1, m2 in _splits(2, max_size + 2):
        res.record(len(poles.enumerate_cells(m1, m2)) == comb(m1 + m2, m1), f"({m1},{m2}): cell count")
        report = poles.rightmost_pole_scan(m1, m2)
        res.record(report.passed, f"({m1},{m2}) rightmost pole: {report.failures()}")
    for m1, m2 in _splits(2, max_size):
        if m1 != m2:
            shown = poles.open_cell_display(m1, m2, m2)
            if poles.gk_ratio(poles.open_cell(m1, m2), m1, m2) != shown:
                res.note("open-cell product has denominator shift m1, not m2, when m1 != m2")
    res.note(poles.NORMALIZED_OPERATOR_NOTE)
    return res


def characters_suite(max_size: int) -> SuiteResult:
    res = SuiteResult("characters")
    mismatched = 0
    for n in (1, 2, 3):
        for m1, m2 in _splits(2, max_size):
            bound = Fraction(m1 + m2, 4)
            for cell, sol in poles.trivial_character_solutions(m1, m2, n).items():
                inside = sol is None or any(0 <= s0 < bound for s0 in sol)
                res.record(not inside, f"n={n} ({m1},{m2}) cell {cell.label()}: trivial at {sol}")
                cmp = poles.compare_first_exponent(cell, m1, m2, n)
                if cmp.case == "a1=0,br>0":
                    corrected = poles.first_exponent_corrected(cell, m1, m2, n)
                    res.record(cmp.direct == corrected,
                               f"n={n} ({m1},{m2}) cell {cell.label()}: corrected case formula")
                    mismatched += not cmp.agrees
                else:
                    res.record(cmp.agrees, f"n={n} ({m1},{m2}) cell {cell.label()}: case {cmp.case}")
        for k in range(1, max_size // 2 + 1):
            report = poles.vanishing_at_zero_report(k, n)
            res.record(report.verdict == "consistent-vanishing", f"n={n} k={k}: vanishing at zero")
            for text in report.notes:
                res.note(text)
    if mismatched:
        res.note(f"reference formula for a1=0, br>0 uses m1 where direct computation gives m2 "
                 f"({mismatched} cells differ)")
    return res


# ----------------------------------------------------------------------------
# theorem level
# ----------------------------------------------------------------------------

def theorems_suite(max_size: int) -> SuiteResult:
    res = SuiteResult("theorems")
    for n in (1, 2, 3):
        for m1, m2 in _splits(2, max_size + 2):
            spec = theorems.SpehSpec(n, m1, m2)
            try:
                trace = theorems.pole_trace(spec)
            except theorems.InconsistencyError as err:
                res.record(False, str(err))
                continue
            res.record(list(trace.poles) == theorems.expected_poles(spec), f"{spec}: pole list")
            res.record(all(g.satisfied for g in trace.gates), f"{spec}: descent gates")
            if trace.tight_gates:
                res.note(f"{spec}: descent gate attained with equality")
            for i in range(spec.depth):
                for name, ok in theorems.residual_orbit_checks(spec, i).items():
                    res.record(ok, f"{spec} i={i}: {name}")
            down = theorems.descend(spec, "D")
            mirror = theorems.descend(spec.swapped(), "D'")
            res.record(mirror.child == down.child.swapped() and mirror.det_twist == -down.det_twist,
                       f"{spec}: twist bookkeeping")
            verdict = theorems.value_at_zero(spec)
            expected = "vanishes" if m1 == m2 else "no-claim"
            res.record(verdict.verdict == expected, f"{spec}: value at zero")
    res.note(theorems.DESCENT_NOTE)
    res.note(theorems.GENERIC_ORBIT_NOTE)
    return res


def satake_suite(max_size: int) -> SuiteResult:
    res = SuiteResult("satake")
    for n in (1, 2, 3):
        for m1, m2 in _splits(2, max_size):
            spec = theorems.SpehSpec(n, m1, m2)
            for i in range(spec.depth):
                res.record(theorems.coincidence_check(spec, i), f"{spec} i={i}: exponent coincidence")
    for m1, m2 in _splits(2, max_size + 2):
        points = {p for p, _ in theorems.pole_list(theorems.SpehSpec(1, m1, m2))}
        res.record(theorems.linked_points(m1, m2, m1 + m2) == points, f"({m1},{m2}): linkage")
    res.note(theorems.UNRAMIFIED_BOUND_NOTE)
    return res


def _runners(max_size: int, seed: int) -> dict[str, Callable[[], SuiteResult]]:
    return {
        "orbit": lambda: orbit_suite(max_size),
        "exchange": lambda: exchange_suite(max_size, seed),
        "cfun": lambda: cfun_suite(max_size),
        "characters": lambda: characters_suite(max_size),
        "theorems": lambda: theorems_suite(max_size),
        "satake": lambda: satake_suite(max_size),
    }


def run_suites(names: list[str], max_size: int, seed: int = 0) -> list[SuiteResult]:
    if max_size < 2:
        raise ValueError("max_size must be at least 2")
    runners = _runners(max_size, seed)
    results = []
    for name in names:
        start = time.perf_counter()
        result = runners[name]()
        result.seconds = time.perf_counter() - start
        results.append(result)
    return results
