"""Report emission (table, structured JSON text, CSV) and parsing.

The CSV schema is fixed: header ``inequality,term,theory,value,method``, one
row per term, then a closing ``SUM`` row carrying the classical bound and the
combination value. Numbers are printed with six decimals and a point
separator regardless of locale. JSON keeps full float precision so that
parsing it back reproduces the report field for field.
"""

from __future__ import annotations

import dataclasses
import json

from .bounds import BoundResult
from .inequalities import InequalityReport, is_violated
from .noise import NoiseModel, apply_visibility


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def emit_csv(report: InequalityReport) -> str:
    if not report.terms:
        raise ValueError("refusing to emit a report without terms")
    lines = ["inequality,term,theory,value,method"]
    for (label, value), theory in zip(report.terms, report.term_predictions):
        lines.append(f"{report.name},{label},{_fmt(theory)},{_fmt(value)},{report.method}")
    lines.append(
        f"{report.name},SUM,{_fmt(report.classical_bound)},{_fmt(report.sum)},{report.method}"
    )
    return "\n".join(lines) + "\n"


def emit_json(report: InequalityReport) -> str:
    payload = dataclasses.asdict(report)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def parse_report_json(text: str) -> InequalityReport:
    raw = json.loads(text)
    return InequalityReport(
        name=raw["name"],
        method=raw["method"],
        terms=tuple((label, float(v)) for label, v in raw["terms"]),
        term_signs=tuple(float(s) for s in raw["term_signs"]),
        term_predictions=tuple(float(p) for p in raw["term_predictions"]),
        blocks_per_term=tuple(int(b) for b in raw["blocks_per_term"]),
        sum=float(raw["sum"]),
        classical_bound=float(raw["classical_bound"]),
        bound_direction=raw["bound_direction"],
        quantum_prediction=None if raw["quantum_prediction"] is None else float(raw["quantum_prediction"]),
        violated=bool(raw["violated"]),
        constraints=None
        if raw["constraints"] is None
        else tuple((label, float(v)) for label, v in raw["constraints"]),
        constraints_satisfied=raw["constraints_satisfied"],
    )


def emit_table(report: InequalityReport) -> str:
    width = max(len(label) for label, _ in report.terms)
    width = max(width, len("term"))
    lines = [
        f"inequality: {report.name}    method: {report.method}",
        f"{'term'.ljust(width)}  {'theory':>12}  {'value':>12}",
    ]
    for (label, value), theory in zip(report.terms, report.term_predictions):
        lines.append(f"{label.ljust(width)}  {_fmt(theory):>12}  {_fmt(value):>12}")
    if report.constraints is not None:
        lines.append("side conditions (expected 1):")
        for label, value in report.constraints:
            lines.append(f"{label.ljust(width)}  {'':>12}  {_fmt(value):>12}")
        lines.append(f"side conditions satisfied: {report.constraints_satisfied}")
    bound = f"{report.bound_direction} {_fmt(report.classical_bound)}"
    prediction = "" if report.quantum_prediction is None else f"    quantum prediction: {_fmt(report.quantum_prediction)}"
    lines.append(f"sum: {_fmt(report.sum)}    classical bound: {bound}{prediction}")
    lines.append(f"verdict: {'VIOLATED' if report.violated else 'not violated'}")
    return "\n".join(lines) + "\n"


def emit_report(report: InequalityReport, fmt: str) -> str:
    if fmt == "csv":
        return emit_csv(report)
    if fmt == "json":
        return emit_json(report)
    if fmt == "table":
        return emit_table(report)
    raise ValueError(f"unknown format {fmt!r}")


def with_noise(ideal: InequalityReport, noisy: InequalityReport, model: NoiseModel) -> InequalityReport:
    """Degrade a report: values from the depolarized evaluation scaled by the
    per-block visibility; the ideal values stay in the theory column."""
    values = tuple(
        apply_visibility(value, blocks, model.block_visibility_v)
        for (_, value), blocks in zip(noisy.terms, noisy.blocks_per_term)
    )
    total = float(sum(s * v for s, v in zip(ideal.term_signs, values)))
    constraints = None
    if noisy.constraints is not None:
        constraints = tuple(
            (label, apply_visibility(value, 1, model.block_visibility_v))
            for label, value in noisy.constraints
        )
    return dataclasses.replace(
        ideal,
        terms=tuple((label, v) for (label, _), v in zip(ideal.terms, values)),
        term_predictions=tuple(v for _, v in ideal.terms),
        sum=total,
        violated=is_violated(total, ideal.classical_bound, ideal.bound_direction),
        constraints=constraints,
        constraints_satisfied=None
        if constraints is None
        else all(abs(v - 1.0) <= 1e-6 for _, v in constraints),
    )


def emit_bound_json(results: list[BoundResult]) -> str:
    payload = [dataclasses.asdict(r) for r in results]
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def emit_bound_csv(results: list[BoundResult]) -> str:
    lines = ["target,optimum,converged,iterations,tolerance"]
    for r in results:
        lines.append(f"{r.target},{_fmt(r.optimum)},{r.converged},{r.iterations},{r.tolerance:g}")
    return "\n".join(lines) + "\n"


def emit_bound_table(results: list[BoundResult]) -> str:
    lines = [f"{'target':<16}  {'optimum':>12}  {'converged':>9}  {'iterations':>10}"]
    for r in results:
        lines.append(f"{r.target:<16}  {_fmt(r.optimum):>12}  {str(r.converged):>9}  {r.iterations:>10}")
    for r in results:
        if r.target == "pentagon-lg":
            at = r.argument["at_cos_theta_-0.75"]
            lines.append(
                "pentagon-lg readings at cos(theta)=-3/4: "
                f"pairwise {_fmt(at['pairwise'])}, invasive {_fmt(at['invasive'])}"
            )
            lines.append(
                f"pentagon-lg note: {r.argument['note']} "
                f"(reference {_fmt(r.argument['unreproduced_reference_minimum'])})"
            )
    return "\n".join(lines) + "\n"


def emit_bounds(results: list[BoundResult], fmt: str) -> str:
    if fmt == "csv":
        return emit_bound_csv(results)
    if fmt == "json":
        return emit_bound_json(results)
    if fmt == "table":
        return emit_bound_table(results)
    raise ValueError(f"unknown format {fmt!r}")
