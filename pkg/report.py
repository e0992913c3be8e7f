"""
Report Rendering Module.
Turns exact results into stable text: CSV curves, aligned tables and
the per-command summaries printed by the CLI.
"""

import csv
import io
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence

from composition import Reduction
from config import CSV_HEADER, RATE_DECIMAL_DIGITS
from density import DensityReport
from density_engine import ClassifyResult, CrosscheckResult, PartitionResult
from lasso_lab import CurveRow, DensityCurve, GrowthRow


def rate_decimal(rate: Fraction) -> str:
    """Presentation-only decimal with RATE_DECIMAL_DIGITS significant digits."""
    with localcontext() as ctx:
        ctx.prec = RATE_DECIMAL_DIGITS
        value = Decimal(rate.numerator) / Decimal(rate.denominator)
    return format(value, "f")


def _table(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    cells = [list(header)] + [[str(cell) for cell in row] for row in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(header))]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(row, widths)) for row in cells]
    return "\n".join(line.rstrip() for line in lines) + "\n"


# ─── Curves ──────────────────────────────────────────────────────────────────

def curve_csv(rows: Iterable[CurveRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        rate = row.rate
        writer.writerow([row.n, row.count, row.total, rate.numerator, rate.denominator, rate_decimal(rate)])
    return buffer.getvalue()


def curve_table(rows: Iterable[CurveRow]) -> str:
    return _table(
        ("n", "count", "total", "rate", "decimal"),
        ((row.n, row.count, row.total, row.rate, rate_decimal(row.rate)) for row in rows),
    )


def render_curve(curve: DensityCurve | Sequence[CurveRow], output_format: str) -> str:
    rows = list(curve)
    return curve_csv(rows) if output_format == "csv" else curve_table(rows)


def render_growth(rows: Iterable[GrowthRow]) -> str:
    return _table(
        ("n", "growth", "universal"),
        ((row.n, "-" if row.growth is None else row.growth, row.universal) for row in rows),
    )


# ─── Command Summaries ───────────────────────────────────────────────────────

def render_classify(result: ClassifyResult) -> str:
    lines = [
        f"formula:     {result.formula}",
        f"syntactic:   {result.syntactic.value}",
        f"convergence: {result.convergence}",
    ]
    if result.convergence.density is not None:
        lines.append(f"density:     {result.convergence.density} ({rate_decimal(result.convergence.density)})")
    return "\n".join(lines) + "\n"


def render_count(row: CurveRow) -> str:
    return (
        f"n:     {row.n}\n"
        f"count: {row.count}\n"
        f"total: {row.total}\n"
        f"rate:  {row.rate} ({rate_decimal(row.rate)})\n"
    )


def render_density_report(report: DensityReport) -> str:
    lines = []
    if report.asymptotic_density is not None:
        density = report.asymptotic_density
        lines.append(f"density:  {density} ({rate_decimal(density)})")
    lines.append(f"positive: {str(report.positive).lower()}")
    below = report.below_one if isinstance(report.below_one, str) else str(report.below_one).lower()
    lines.append(f"belowOne: {below}")
    for entry in report.terminal_sccs:
        reach = "" if entry.probability is None else f" reach {entry.probability}"
        lines.append(f"terminal SCC {entry.scc}: {entry.role}{reach}")
    return "\n".join(lines) + "\n"


def render_partition(result: PartitionResult) -> str:
    counts = result.counts
    body = _table(
        ("class", "count", "rate"),
        (
            (kind.value, count, Fraction(count, counts.total))
            for kind, count in counts.as_dict().items()
        ),
    )
    check = "ok" if result.bounds_hold else "VIOLATED"
    return (
        f"n: {counts.n}  total: {counts.total}\n"
        + body
        + f"r(n): {result.rate} ({rate_decimal(result.rate)})\n"
        + f"bounds: {counts.base_model_rate} <= {result.rate} <= "
        + f"{1 - counts.base_non_model_rate}: {check}\n"
    )


def render_reduction(reduction: Reduction) -> str:
    lines = [f"  {step}" for step in reduction.trace]
    lines.insert(0, "trace:")
    lines.append(f"residual: {reduction.residual}")
    lines.append(f"class:    {reduction.convergence}")
    density = reduction.convergence.density
    if density is not None:
        lines.append(f"density:  {density} ({rate_decimal(density)})")
    if reduction.offending is not None:
        lines.append(f"unclassified leaf: {reduction.offending}")
    return "\n".join(lines) + "\n"


def render_crosscheck(result: CrosscheckResult) -> str:
    body = _table(
        ("n", "disagreements", "models", "total", "rate", "|r(n)-r_inf|"),
        (
            (
                row.n, row.disagreements, row.models, row.total, row.rate,
                "-" if row.gap is None else rate_decimal(row.gap),
            )
            for row in result.rows
        ),
    )
    lines = [f"formula: {result.formula}"]
    if result.asymptotic is not None:
        lines.append(f"r_inf:   {result.asymptotic}")
    text = "\n".join(lines) + "\n" + body
    if result.witness is not None:
        text += f"first disagreement: {result.witness.format(result.alphabet)}\n"
    return text + ("agreement: yes\n" if result.agrees else "agreement: NO\n")
