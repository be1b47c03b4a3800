"""Deterministic acceptance checks behind the ``selftest`` CLI command.

Each check prints one PASS/FAIL line; seeds are fixed so two runs produce
byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds as bounds_mod
from .inequalities import (
    METHODS,
    Observable,
    eval_kcbs_temporal,
    eval_pm,
    eval_transformed_bell,
)
from .noise import fit_visibility, load_measured_table, visibility_summary
from .report import emit_bounds, emit_report
from .scattering import (
    correlator_direct,
    correlator_scattering,
    random_correlation_spec,
    random_dichotomic,
)
from .sequential import correlator_sequential, two_time_formula
from .states import bell_phi_plus, haar_random_state, mixed_state

PM_THEORY = (1.0, 1.0, 1.0, 1.0, 1.0, -1.0)


@dataclass(frozen=True)
class CheckResult:
    index: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.index} {self.name}: {self.detail}"


def check_pm_state_independent() -> CheckResult:
    worst_sum = 0.0
    worst_term = 0.0
    states = [haar_random_state(2, np.random.default_rng(seed)) for seed in range(100)]
    states.append(mixed_state(np.eye(4) / 4))
    for state in states:
        for method in METHODS:
            rep = eval_pm(state, method)
            worst_sum = max(worst_sum, abs(rep.sum - 6.0))
            for (_, value), theory in zip(rep.terms, PM_THEORY):
                worst_term = max(worst_term, abs(value - theory))
    ok = worst_sum <= 1e-9 and worst_term <= 1e-9
    return CheckResult(
        1,
        "pm-state-independent",
        ok,
        f"101 states x 3 methods, max|sum-6|={worst_sum:.3e}, max term dev={worst_term:.3e}",
    )


def check_scattering_direct_equivalence() -> CheckResult:
    worst = 0.0
    for seed in range(200):
        rng = np.random.default_rng(1000 + seed)
        n = int(rng.integers(1, 3))
        slots = int(rng.integers(1, 4))
        spec = random_correlation_spec(n, slots, rng)
        state = haar_random_state(n, rng)
        worst = max(worst, abs(correlator_scattering(state, spec) - correlator_direct(state, spec)))
    ok = worst < 1e-10
    return CheckResult(
        2, "scattering-direct-equivalence", ok, f"200 random specs, max gap={worst:.3e}"
    )


def check_sequential_two_time() -> CheckResult:
    worst = 0.0
    for seed in range(100):
        rng = np.random.default_rng(2000 + seed)
        state = haar_random_state(1, rng)
        x = Observable(matrix=random_dichotomic(rng), dichotomic=True, label="X")
        y = Observable(matrix=random_dichotomic(rng), dichotomic=True, label="Y")
        worst = max(
            worst,
            abs(correlator_sequential(state, (x, y)) - two_time_formula(state, x, y)),
        )
    ok = worst < 1e-10
    return CheckResult(3, "sequential-two-time-formula", ok, f"100 random pairs, max gap={worst:.3e}")


def check_bell_violation() -> CheckResult:
    expected_term = float(np.cos(4 * np.pi / 5))
    expected_sum = 5 * expected_term
    worst_term = worst_constraint = worst_sum = 0.0
    violated = True
    for method in METHODS:
        rep = eval_transformed_bell(bell_phi_plus(), method)
        worst_sum = max(worst_sum, abs(rep.sum - expected_sum))
        worst_term = max(worst_term, max(abs(v - expected_term) for _, v in rep.terms))
        worst_constraint = max(worst_constraint, max(abs(v - 1.0) for _, v in rep.constraints))
        violated = violated and rep.violated and rep.classical_bound == -3.0
    ok = worst_term <= 1e-9 and worst_sum <= 1e-8 and worst_constraint <= 1e-9 and violated
    return CheckResult(
        4,
        "transformed-bell-violation",
        ok,
        f"terms dev={worst_term:.3e}, sum dev={worst_sum:.3e}, "
        f"constraint dev={worst_constraint:.3e}, violated={violated}",
    )


def check_bound_recovery() -> CheckResult:
    tsirelson = -5 * math.cos(math.pi / 5)
    contextual_target = 5 - 4 * math.sqrt(5)
    bell = bounds_mod.tsirelson_search_bell()
    temporal = bounds_mod.temporal_bound_kcbs()
    contextual = bounds_mod.contextual_bound_kcbs()
    gap = contextual.optimum - temporal.optimum
    ok = (
        abs(bell.optimum - tsirelson) <= 1e-5
        and abs(temporal.optimum - bell.optimum) <= 1e-4
        and abs(contextual.optimum - contextual_target) <= 1e-4
        and gap > 0.05
    )
    return CheckResult(
        5,
        "bound-recovery",
        ok,
        f"bell={bell.optimum:.9f}, temporal={temporal.optimum:.9f}, "
        f"contextual={contextual.optimum:.9f}, gap={gap:.6f}",
    )


def check_kcbs_closed_form() -> CheckResult:
    state = haar_random_state(1, np.random.default_rng(7))
    worst = 0.0
    floor_ok = True
    for theta in np.linspace(0.0, 2 * np.pi, 50):
        rep = eval_kcbs_temporal(state, float(theta), method="sequential")
        worst = max(worst, abs(rep.sum - (1 + 4 * np.cos(theta))))
        floor_ok = floor_ok and rep.sum >= -3.0 - 1e-9
    ok = worst <= 1e-9 and floor_ok
    return CheckResult(
        6,
        "kcbs-closed-form",
        ok,
        f"50 angles, max|sum-(1+4cos)|={worst:.3e}, never below -3: {floor_ok}",
    )


def check_pentagon_scan() -> CheckResult:
    scan = bounds_mod.pentagon_scan()
    arg = scan.argument
    pair_min = arg["pairwise"]["minimum"]
    inv_min = arg["invasive"]["minimum"]
    at = arg["at_cos_theta_-0.75"]
    flagged = arg["unreproduced_reference_minimum"] == -2.25 and "note" in arg
    ok = (
        abs(pair_min - (-2.0)) <= 1e-6
        and abs(arg["pairwise"]["argmin_theta"] - math.pi) <= 1e-6
        and abs(inv_min - (-2.0)) <= 1e-6
        and abs(at["pairwise"] - (-0.5)) <= 1e-6
        and abs(at["invasive"] - (-1.839844)) <= 1e-6
        and flagged
    )
    return CheckResult(
        7,
        "pentagon-scan",
        ok,
        f"pairwise min={pair_min:.6f}, invasive min={inv_min:.6f}, "
        f"at cos=-3/4: {at['pairwise']:.6f}/{at['invasive']:.6f}, flagged={flagged}",
    )


def check_visibility_fit() -> CheckResult:
    synthetic = [(1.0, 3, 0.9 ** 3), (-1.0, 3, -(0.9 ** 3)), (1.0, 1, 0.9), (1.0, 2, 0.9 ** 2)]
    v_round = fit_visibility(synthetic)
    summary = visibility_summary("pm")
    rows = load_measured_table("pm")
    ok = (
        abs(v_round - 0.9) <= 1e-5
        and abs(summary["model_sum"] - 4.667) <= 0.15
        and len(rows) == 6
    )
    return CheckResult(
        8,
        "visibility-fit",
        ok,
        f"round-trip v={v_round:.6f}, table v={summary['visibility']:.6f}, "
        f"model sum={summary['model_sum']:.6f} vs 4.667",
    )


def _representative_reports() -> str:
    chunks = []
    chunks.append(emit_report(eval_pm(mixed_state(np.eye(4) / 4), "direct"), "json"))
    chunks.append(emit_report(eval_transformed_bell(bell_phi_plus(), "scattering"), "csv"))
    chunks.append(
        emit_report(
            eval_kcbs_temporal(haar_random_state(1, np.random.default_rng(3)), math.acos(-0.75), "sequential"),
            "table",
        )
    )
    chunks.append(emit_bounds([bounds_mod.pentagon_scan()], "json"))
    return "".join(chunks)


def check_determinism() -> CheckResult:
    first = _representative_reports()
    second = _representative_reports()
    ok = first == second
    return CheckResult(
        9, "determinism", ok, f"two in-process emissions byte-identical: {ok} ({len(first)} bytes)"
    )


ALL_CHECKS = (
    check_pm_state_independent,
    check_scattering_direct_equivalence,
    check_sequential_two_time,
    check_bell_violation,
    check_bound_recovery,
    check_kcbs_closed_form,
    check_pentagon_scan,
    check_visibility_fit,
    check_determinism,
)


def run_selftest() -> tuple[list[CheckResult], bool]:
    results = [check() for check in ALL_CHECKS]
    return results, all(r.passed for r in results)


def selftest_text() -> tuple[str, bool]:
    results, ok = run_selftest()
    lines = [r.line() for r in results]
    lines.append(f"selftest: {'ALL PASS' if ok else 'FAILURES PRESENT'} ({len(results)} checks)")
    return "\n".join(lines) + "\n", ok
