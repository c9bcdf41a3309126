"""Command-line front end.

Every command builds a report with three parts: an echo of the command, a
payload and a list of findings (imported facts and formula mismatches).
``--json`` prints the report as one JSON document; rationals are "p/q"
strings.  Exit status: 0 success, 1 failed verification or inconsistency,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import exchange, orbits, poles, suites, theorems
from .exact import (
    LinearForm,
    Matrix,
    format_partition,
    format_rational,
    jordan_partition,
    parse_partition_text,
    parse_rational,
    rank_sequence,
)


@dataclass
class Report:
    command: str
    flags: dict[str, Any]
    payload: dict[str, Any]
    text: list[str]
    findings: list[str] = field(default_factory=list)
    ok: bool = True

    def as_json(self) -> dict[str, Any]:
        return {
            "command": {"name": self.command, "flags": jsonable(self.flags)},
            "ok": self.ok,
            "payload": jsonable(self.payload),
            "findings": list(self.findings),
        }


def jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, LinearForm):
        return value.render()
    if isinstance(value, Matrix):
        return [[jsonable(x) for x in row] for row in value.tolist()]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_json(report: Report) -> str:
    return json.dumps(report.as_json(), indent=2, ensure_ascii=False) + "\n"


def render_text(report: Report) -> str:
    lines = list(report.text)
    lines.append(f"verdict: {'pass' if report.ok else 'FAIL'}")
    if report.findings:
        lines.append("findings:")
        lines += [f"  - {f}" for f in report.findings]
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def _orbit_data(args: argparse.Namespace) -> Report:
    p = args.partition
    d = orbits.parse_partition(p)
    alpha = orbits.support_matrix(p)
    big, small = orbits.root_sets(p)
    xs, ys = orbits.polarization(p)
    payload = {
        "partition": p,
        "k": d.k, "m": d.m, "n": d.n,
        "weights": orbits.torus_weights(p),
        "radical_composition": orbits.radical_composition(p),
        "root_set_sizes": {"N": len(big), "N2": len(small)},
        "alpha": alpha,
        "alpha_jordan_type": jordan_partition(alpha),
        "stabilizer_shape": orbits.stabilizer_shape(p),
        "heisenberg_dim": orbits.heisenberg_dim(p),
        "polarization_sizes": {"X": len(xs), "Y": len(ys)},
    }
    text = [
        f"partition {format_partition(p)}: k={d.k} m={d.m} n={d.n}",
        f"weights {payload['weights']}",
        f"radical composition {payload['radical_composition']}",
        f"|N| = {len(big)}, |N2| = {len(small)}, heisenberg dim = {payload['heisenberg_dim']}",
        f"stabilizer shape {payload['stabilizer_shape']}, polarization |X| = {len(xs)}, |Y| = {len(ys)}",
        "alpha:", alpha.pretty(),
        f"jordan type of alpha {format_partition(payload['alpha_jordan_type'])}",
    ]
    return Report("orbit-data", {"partition": format_partition(p)}, payload, text,
                  ok=payload["alpha_jordan_type"] == p)


def _jordan(args: argparse.Namespace) -> Report:
    source = sys.stdin.read() if args.matrix == "-" else Path(args.matrix).read_text()
    a = Matrix.from_text(source)
    seq = rank_sequence(a)
    part = jordan_partition(a)
    payload = {"rows": a.rows, "cols": a.cols, "rank_sequence": seq, "partition": part}
    text = [f"rank sequence {seq}", f"jordan type {format_partition(part)}"]
    return Report("jordan", {"matrix": args.matrix}, payload, text)


def _constant_term(args: argparse.Namespace) -> Report:
    rows, text, agree = [], [], True
    for cell, gk, closed in poles.cells_summary(args.m1, args.m2):
        same = gk == closed
        agree &= same
        rows.append({"cell": cell.label(), "r": cell.r, "a": cell.a, "b": cell.b,
                     "c_function": gk.render(), "closed_form": closed.render(), "agree": same})
        text.append(f"{cell.label():<28} c(s) = {gk.render()}{'' if same else '  [closed form: ' + closed.render() + ']'}")
    flags = {"m1": args.m1, "m2": args.m2, "n": args.n}
    return Report("constant-term", flags, {"cells": rows, "all_agree": agree}, text,
                  [poles.NORMALIZED_OPERATOR_NOTE], ok=agree)


def _certificate_rows(m1: int, m2: int, at: Fraction) -> tuple[list[dict[str, Any]], list[str]]:
    rows, text = [], []
    for cell in poles.enumerate_cells(m1, m2):
        prod = poles.gk_ratio(cell, m1, m2)
        cert = poles.pole_certificate(prod, at)
        rows.append({"cell": cell.label(), "c_function": prod.render(), "order": cert.order,
                     "status": cert.status, "offending": list(cert.offending)})
        extra = f" offending {[f.render() for f in cert.offending]}" if cert.offending else ""
        text.append(f"{cell.label():<28} order {cert.order} ({cert.status}){extra}")
    return rows, text


def _poles(args: argparse.Namespace) -> Report:
    flags = {"n": args.n, "m1": args.m1, "m2": args.m2}
    if args.at is not None:
        flags["at"] = format_rational(args.at)
        rows, text = _certificate_rows(args.m1, args.m2, args.at)
        findings = [poles.NORMALIZED_OPERATOR_NOTE]
        if any(r["status"] == "indeterminate" for r in rows):
            findings.append("some certificates are indeterminate: arguments fall below the "
                            "nonvanishing threshold")
        top = max(r["order"] for r in rows)
        text.append(f"maximal order at {format_rational(args.at)}: {top}")
        return Report("poles", flags, {"point": args.at, "certificates": rows, "max_order": top},
                      text, findings)
    spec = theorems.SpehSpec(args.n, args.m1, args.m2)
    trace = theorems.pole_trace(spec)
    points = [{"point": p, "order": o} for p, o in trace.poles]
    gates = [{"spec": [g.spec.m1, g.spec.m2], "variant": g.variant, "point": g.point,
              "bound": g.bound, "satisfied": g.satisfied, "tight": g.tight} for g in trace.gates]
    listing = ", ".join(f"{format_rational(p)} ({'simple' if o == 1 else f'order {o}'})"
                        for p, o in trace.poles) or "none"
    text = [f"poles: {listing}"]
    text += [f"  gate ({g['spec'][0]},{g['spec'][1]}) {g['variant']}: 2*{format_rational(g['point'])} "
             f">= {format_rational(g['bound'])} {'ok' if g['satisfied'] else 'VIOLATED'}"
             f"{' (equality)' if g['tight'] else ''}" for g in gates]
    findings = list(trace.notes)
    findings += [f"gate attained with equality at {format_rational(g.point)}" for g in trace.tight_gates]
    return Report("poles", flags, {"poles": points, "gates": gates}, text, findings)


def _characters(args: argparse.Namespace) -> Report:
    flags = {"m1": args.m1, "m2": args.m2, "n": args.n}
    if args.s0 is not None:
        flags["s0"] = format_rational(args.s0)
    rows, text = [], []
    mismatched = 0
    for cell, sol in poles.trivial_character_solutions(args.m1, args.m2, args.n).items():
        ex = poles.character_exponents(cell, args.m1, args.m2, args.n)
        row: dict[str, Any] = {"cell": cell.label(),
                               "exponents": [f.render("s0") for f in ex.forms],
                               "trivial_at": "all s0" if sol is None else sorted(sol)}
        line = f"{cell.label():<28} exponents [{', '.join(row['exponents'])}]"
        if args.s0 is not None:
            values = [f(args.s0) for f in ex.forms]
            row["values"] = values
            row["trivial"] = all(v == 0 for v in values)
            line += f" at s0={format_rational(args.s0)}: {'trivial' if row['trivial'] else 'nontrivial'}"
        else:
            shown = "all s0" if sol is None else ", ".join(map(format_rational, sorted(sol))) or "never"
            line += f" trivial at: {shown}"
        cmp = poles.compare_first_exponent(cell, args.m1, args.m2, args.n)
        if cmp is not None:
            row["first_exponent_case"] = cmp.case
            row["case_formula_agrees"] = cmp.agrees
            mismatched += not cmp.agrees
        rows.append(row)
        text.append(line)
    findings = [poles.NORMALIZED_OPERATOR_NOTE]
    if mismatched:
        findings.append(f"reference first-exponent formula differs from direct computation on "
                        f"{mismatched} cells (case a1=0, br>0 needs m2 in place of m1)")
    return Report("characters", flags, {"cells": rows}, text, findings)


def _spec(args: argparse.Namespace) -> theorems.SpehSpec:
    return theorems.SpehSpec(args.n, args.m1, args.m2)


def _orbit(args: argparse.Namespace) -> Report:
    spec = _spec(args)
    orbit = theorems.residual_orbit(spec, args.i)
    checks = theorems.residual_orbit_checks(spec, args.i)
    bound = theorems.generic_orbit_bound(spec.n, (spec.m1, spec.m2))
    payload = {"point": theorems.pole_point(spec, args.i), "orbit": orbit, "generic_bound": bound,
               "checks": checks}
    text = [f"residue at s = {format_rational(payload['point'])}: orbit {format_partition(orbit)}",
            f"generic bound {format_partition(bound)}"]
    text += [f"  {name}: {'ok' if ok else 'FAIL'}" for name, ok in checks.items()]
    flags = {"n": args.n, "m1": args.m1, "m2": args.m2, "i": args.i}
    return Report("orbit", flags, payload, text,
                  [theorems.GENERIC_ORBIT_NOTE, theorems.UNRAMIFIED_BOUND_NOTE, theorems.DESCENT_NOTE],
                  ok=all(checks.values()))


def _satake(args: argparse.Namespace) -> Report:
    spec = _spec(args)
    left, right = theorems.satake_sides(spec, args.i)
    same = left == right

    def entries(ms: theorems.SatakeMultiset) -> list[list[Any]]:
        return [[j, shift] for j, shift in ms.sorted_entries()]

    payload = {"point": theorems.pole_point(spec, args.i), "induced": entries(left),
               "residue": entries(right), "coincide": same}
    text = [f"s = {format_rational(payload['point'])}",
            "induced: " + " ".join(f"({j},{format_rational(x)})" for j, x in left.sorted_entries()),
            "residue: " + " ".join(f"({j},{format_rational(x)})" for j, x in right.sorted_entries()),
            f"coincide: {same}"]
    flags = {"n": args.n, "m1": args.m1, "m2": args.m2, "i": args.i}
    return Report("satake", flags, payload, text, [theorems.UNRAMIFIED_BOUND_NOTE], ok=same)


def _linkage(args: argparse.Namespace) -> Report:
    points = sorted(theorems.linked_points(args.m1, args.m2, args.max))
    text = ["linked at: " + (", ".join(map(format_rational, points)) or "none")]
    flags = {"m1": args.m1, "m2": args.m2, "max": format_rational(args.max)}
    return Report("linkage", flags, {"linked_points": points}, text)


def _verify(args: argparse.Namespace) -> Report:
    names = list(suites.SUITE_NAMES) if args.suite == "all" else [args.suite]
    results = suites.run_suites(names, args.max_size, args.seed)
    payload, text, findings = {}, [], []
    for res in results:
        payload[res.name] = {"checked": res.checked, "failed": len(res.failures),
                             "first_failure": res.failures[0] if res.failures else None}
        text.append(f"{res.name:<11} {res.checked - len(res.failures)}/{res.checked} passed "
                    f"({res.seconds:.2f} s)")
        if res.failures:
            text.append(f"  minimal failing instance: {res.failures[0]}")
        findings += [f for f in res.findings if f not in findings]
    flags = {"suite": args.suite, "max_size": args.max_size, "seed": args.seed}
    return Report("verify", flags, payload, text, findings, ok=all(r.passed for r in results))


# ----------------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(text)
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise ValueError(text)
    return value


def _partition(text: str) -> tuple[int, ...]:
    return parse_partition_text(text)


_positive.__name__ = "positive integer"
_non_negative.__name__ = "non-negative integer"
_partition.__name__ = "partition"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spehpoles", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable[[argparse.Namespace], Report],
                help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--json", action="store_true", help="emit the report as JSON")
        p.set_defaults(handler=handler)
        return p

    def m_pair(p: argparse.ArgumentParser, lower: Callable[[str], int] = _positive) -> None:
        p.add_argument("--m1", type=lower, required=True)
        p.add_argument("--m2", type=lower, required=True)

    p = command("orbit-data", _orbit_data, "partition data: weights, root sets, alpha, stabilizer")
    p.add_argument("--partition", type=_partition, required=True, help="e.g. 4,2,2,1")

    p = command("jordan", _jordan, "Jordan type of a nilpotent matrix read from a file")
    p.add_argument("matrix", help="matrix file ('rows cols' then entries), or - for stdin")

    p = command("constant-term", _constant_term, "cells of the constant term with their c-functions")
    m_pair(p, _non_negative)
    p.add_argument("--n", type=_positive, default=1)

    p = command("poles", _poles, "pole list with descent gates, or per-cell certificates with --at")
    m_pair(p, _non_negative)
    p.add_argument("--n", type=_positive, default=1)
    p.add_argument("--at", type=parse_rational, help="rational point p/q for certificates")

    p = command("characters", _characters, "central character exponents and triviality")
    m_pair(p)
    p.add_argument("--n", type=_positive, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--s0", type=parse_rational, help="evaluate at this rational point")
    mode.add_argument("--symbolic", action="store_true", help="solve for s0 (default)")

    for name, handler, help_text in (("orbit", _orbit, "orbit of the residue at m/4 - i/2"),
                                     ("satake", _satake, "unramified exponent coincidence at m/4 - i/2")):
        p = command(name, handler, help_text)
        p.add_argument("--n", type=_positive, required=True)
        m_pair(p)
        p.add_argument("--i", type=_non_negative, required=True)

    p = command("linkage", _linkage, "points s in (0, max] where the two segments are linked")
    m_pair(p)
    p.add_argument("--max", type=parse_rational, required=True)

    p = command("verify", _verify, "run the verification suites")
    p.add_argument("--suite", choices=list(suites.SUITE_NAMES) + ["all"], default="all")
    p.add_argument("--max-size", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.handler(args)
    except theorems.InconsistencyError as err:
        print(f"inconsistency: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"{parser.prog} {args.command}: error: {err}", file=sys.stderr)
        return 2
    sys.stdout.write(render_json(report) if args.json else render_text(report))
    return 0 if report.ok else 1


def main() -> None:
    sys.exit(run())
