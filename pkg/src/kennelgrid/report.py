"""File outputs: ranking tables, layout files, floor plans, convergence plots.

Every writer is deterministic for identical inputs; floats are serialized
with repr so values round-trip exactly through the CSV and JSON files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

from .access import DistanceField, UNREACHABLE
from .config import RenderOptions, ParseError, ValidationError
from .ga import GenerationLog
from .model import (
    CRITERIA_NAMES,
    Chromosome,
    CriteriaVector,
    Orientation,
    Placement,
    ShelterSpec,
    derive_grid_dims,
    obstacle_grid,
    OBSTACLE,
    span_cells,
)
from .placement import feasibility_violations, footprint
from .topsis import RankedPopulation


def _num(value: float | int) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def write_ranking_csv(path: Path, ranked: RankedPopulation) -> None:
    """Table shaped like id, AC, LSP, ASP, CF, IC, score, score_rescaled."""
    rescaled = ranked.rescaled()
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["id", *CRITERIA_NAMES, "score", "score_rescaled"])
        for row, scaled in zip(ranked.rows, rescaled):
            writer.writerow(
                [
                    row.id,
                    *(_num(v) for v in row.criteria.as_tuple()),
                    _num(row.closeness),
                    _num(scaled),
                ]
            )


def write_convergence_csv(path: Path, logs: Sequence[GenerationLog]) -> None:
    header = ["iteration", "best_id"]
    for name in CRITERIA_NAMES:
        lower = name.lower()
        header += [f"{lower}_best", f"{lower}_mean", f"{lower}_median"]
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for entry in logs:
            row: list[str] = [str(entry.iteration), entry.best_id]
            for stats in entry.stats():
                row += [_num(stats.best), _num(stats.mean), _num(stats.median)]
            writer.writerow(row)


def layout_to_dict(chrom: Chromosome, spec: ShelterSpec) -> dict:
    """Layout as JSON data carrying both cell and meter coordinates."""
    x, y = derive_grid_dims(spec)
    r = spec.resolution_m
    return {
        "resolution_m": r,
        "grid": {"x": x, "y": y},
        "placements": [
            {
                "x": p.x,
                "y": p.y,
                "orientation": p.orientation.value,
                "x_m": p.x * r,
                "y_m": p.y * r,
            }
            for p in chrom.placements
        ],
    }


def write_layout_json(path: Path, chrom: Chromosome, spec: ShelterSpec) -> None:
    path.write_text(json.dumps(layout_to_dict(chrom, spec), indent=2) + "\n")


def load_layout(path: str | Path, spec: ShelterSpec) -> Chromosome:
    """Read a layout file and audit it against the shelter.

    Cell coordinates are authoritative; the meter fields are derived
    convenience values and ignored on input.
    """
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    try:
        placements = tuple(
            Placement(int(p["x"]), int(p["y"]), Orientation(p["orientation"]))
            for p in data["placements"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed layout file: {exc}") from exc
    violations = feasibility_violations(placements, spec)
    if violations:
        raise ValidationError("; ".join(violations))
    return Chromosome(placements, str(data.get("id", "layout")))


def _trace_path(field: DistanceField, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Greedy descent from a cell to the nearest entrance (distance 0)."""
    d = field.at(start)
    if d == UNREACHABLE:
        return []
    path = [start]
    x, y = start
    while d > 0:
        for nx, ny in ((x, y + 1), (x + 1, y), (x, y - 1), (x - 1, y)):
            if field.at((nx, ny)) == d - 1:
                x, y, d = nx, ny, d - 1
                path.append((x, y))
                break
        else:
            break
    return path


def render_layout_svg(
    chrom: Chromosome,
    spec: ShelterSpec,
    options: RenderOptions,
    field: DistanceField | None = None,
) -> str:
    """Floor plan as an SVG 1.1 document.

    Shelter outline, door openings, columns, one rectangle per cage with a
    tick on its door edge, plus optional shortest-path overlays. Output is
    byte-deterministic for identical inputs.
    """
    x_cells, y_cells = derive_grid_dims(spec)
    s = options.px_per_cell
    width = x_cells * s
    height = y_cells * s
    margin = s

    def px(cx: float, cy: float) -> tuple[float, float]:
        # SVG y grows downward; the grid's y grows north.
        return (margin + cx * s, margin + (y_cells - cy) * s)

    parts: list[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width + 2 * margin}" height="{height + 2 * margin}">'
    )
    parts.append(
        f'<rect x="{margin}" y="{margin}" width="{width}" height="{height}" '
        f'fill="white" stroke="black" stroke-width="2"/>'
    )
    cells = obstacle_grid(spec)
    for cx in range(x_cells):
        for cy in range(y_cells):
            if cells[cx, cy] == OBSTACLE:
                left, top = px(cx, cy + 1)
                parts.append(
                    f'<rect x="{left:.1f}" y="{top:.1f}" width="{s}" height="{s}" '
                    f'fill="dimgray"/>'
                )
    for door in spec.doors:
        a, b = span_cells(
            door.offset_m, door.offset_m + door.width_m, spec.resolution_m
        )
        if door.wall.horizontal:
            row = 0 if door.wall.value == "south" else y_cells
            (x1, y1), (x2, _) = px(a, row), px(b, row)
            parts.append(
                f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y1:.1f}" '
                f'stroke="seagreen" stroke-width="6"/>'
            )
        else:
            col = 0 if door.wall.value == "west" else x_cells
            (x1, y1), (_, y2) = px(col, a), px(col, b)
            parts.append(
                f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x1:.1f}" y2="{y2:.1f}" '
                f'stroke="seagreen" stroke-width="6"/>'
            )
    if field is not None and options.show_paths:
        for p in chrom.placements:
            trace = _trace_path(field, footprint(p, spec).access)
            if len(trace) > 1:
                points = " ".join(
                    f"{mx:.1f},{my:.1f}"
                    for mx, my in (px(cx + 0.5, cy + 0.5) for cx, cy in trace)
                )
                parts.append(
                    f'<polyline points="{points}" fill="none" '
                    f'stroke="orange" stroke-width="1"/>'
                )
    for p in chrom.placements:
        fp = footprint(p, spec)
        bx0, by0, bx1, by1 = fp.body
        left, top = px(bx0, by1)
        parts.append(
            f'<rect class="cage" x="{left:.1f}" y="{top:.1f}" '
            f'width="{(bx1 - bx0) * s}" height="{(by1 - by0) * s}" '
            f'fill="lightsteelblue" stroke="navy" stroke-width="1"/>'
        )
        # Tick on the door edge of the body.
        if p.orientation is Orientation.UP:
            (tx1, ty1), (tx2, ty2) = px(bx0, by1), px(bx1, by1)
        elif p.orientation is Orientation.DOWN:
            (tx1, ty1), (tx2, ty2) = px(bx0, by0), px(bx1, by0)
        elif p.orientation is Orientation.RIGHT:
            (tx1, ty1), (tx2, ty2) = px(bx1, by0), px(bx1, by1)
        else:
            (tx1, ty1), (tx2, ty2) = px(bx0, by0), px(bx0, by1)
        parts.append(
            f'<line x1="{tx1:.1f}" y1="{ty1:.1f}" x2="{tx2:.1f}" y2="{ty2:.1f}" '
            f'stroke="crimson" stroke-width="3"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_layout_svg(
    path: Path,
    chrom: Chromosome,
    spec: ShelterSpec,
    options: RenderOptions,
    field: DistanceField | None = None,
) -> None:
    path.write_text(render_layout_svg(chrom, spec, options, field))


def write_convergence_png(path: Path, logs: Sequence[GenerationLog]) -> None:
    """Two-panel convergence figure: accessible cages and confrontation."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    iterations = [entry.iteration for entry in logs]
    fig, (ax_ac, ax_cf) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for ax, name, series in ((ax_ac, "accessible cages", [e.ac for e in logs]),
                             (ax_cf, "confrontation score", [e.cf for e in logs])):
        ax.plot(iterations, [s.best for s in series], label="best", marker="o", ms=3)
        ax.plot(iterations, [s.mean for s in series], label="mean")
        ax.plot(iterations, [s.median for s in series], label="median", ls="--")
        ax.set_ylabel(name)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best", fontsize=8)
    ax_cf.set_xlabel("iteration")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def format_criteria(vector: CriteriaVector) -> str:
    """Stable key=value line used by the evaluate command."""
    parts = [
        f"{name}={_num(value)}"
        for name, value in zip(CRITERIA_NAMES, vector.as_tuple())
    ]
    return " ".join(parts)
