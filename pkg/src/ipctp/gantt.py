"""Per-crane timeline rendering for solutions (plain text and SVG)."""

from __future__ import annotations

from .instance import Instance
from .schedule import Solution


def _qc_spans(instance: Instance, solution: Solution, crane: int):
    for ship in solution.qc_sequences.get(crane, ()):
        start = solution.qc_start[ship]
        yield ship, start, start + instance.shipment(ship).qc_time


def _yc_spans(instance: Instance, solution: Solution, crane: int):
    for ship in solution.yc_sequences.get(crane, ()):
        start = solution.yc_start[ship]
        yield ship, start, start + instance.shipment(ship).yc_time


def render_text(instance: Instance, solution: Solution) -> str:
    lines = []
    for crane in sorted(solution.qc_sequences):
        spans = " ".join(
            f"{ship}:[{start},{end})"
            for ship, start, end in _qc_spans(instance, solution, crane)
        )
        lines.append(f"QC {crane} | {spans}")
    for crane in sorted(solution.yc_sequences):
        spans = " ".join(
            f"{ship}:[{start},{end})"
            for ship, start, end in _yc_spans(instance, solution, crane)
        )
        lines.append(f"YC {crane} | {spans}")
    lines.append(f"objective {solution.objective} ({solution.status})")
    return "\n".join(lines) + "\n"


def render_svg(instance: Instance, solution: Solution, scale: float = 4.0) -> str:
    rows: list[tuple[str, list[tuple[int, int, int]]]] = []
    for crane in sorted(solution.qc_sequences):
        rows.append((f"QC {crane}", list(_qc_spans(instance, solution, crane))))
    for crane in sorted(solution.yc_sequences):
        rows.append((f"YC {crane}", list(_yc_spans(instance, solution, crane))))

    horizon = max(
        (end for _, spans in rows for _, _, end in spans), default=1
    )
    row_height, label_width, pad = 24, 60, 4
    width = label_width + int(horizon * scale) + 2 * pad
    height = len(rows) * row_height + 2 * pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
    ]
    for row_no, (label, spans) in enumerate(rows):
        y = pad + row_no * row_height
        parts.append(
            f'<text x="{pad}" y="{y + 16}" font-size="12" '
            f'font-family="monospace">{label}</text>'
        )
        fill = "#4c78a8" if label.startswith("QC") else "#f58518"
        for ship, start, end in spans:
            x = label_width + start * scale
            w = max((end - start) * scale, 1)
            parts.append(
                f'<rect x="{x:.1f}" y="{y + 2}" width="{w:.1f}" '
                f'height="{row_height - 6}" fill="{fill}" stroke="black"/>'
            )
            parts.append(
                f'<text x="{x + 2:.1f}" y="{y + 16}" font-size="10" '
                f'fill="white" font-family="monospace">{ship}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
