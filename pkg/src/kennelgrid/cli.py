"""Command-line interface.

Subcommands: optimize, evaluate, rank, count-placements, render. Exit codes:
0 success, 2 configuration problem, 3 I/O failure, 4 internal invariant
violation. KENNELGRID_LOG (error|info|debug) sets stderr verbosity.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import math
import os
import sys
from pathlib import Path

from . import __version__
from .access import build_distance_field, entrance_cells, NoEntranceError, unreachable_field
from .config import (
    ConfigError,
    ParseError,
    ScenarioConfig,
    ValidationError,
    load_config,
)
from .ga import LayoutEvaluator, evolve
from .model import CriteriaVector, LayoutError, derive_grid_dims, rasterize
from .placement import count_placements_brute_force, count_placements_closed_form
from .report import (
    format_criteria,
    load_layout,
    write_convergence_csv,
    write_convergence_png,
    write_layout_json,
    write_layout_svg,
    write_ranking_csv,
)
from .topsis import RankedPopulation, criteria_from_weights, rank, validate_criteria

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def _setup_logging() -> None:
    level = os.environ.get("KENNELGRID_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(
        stream=sys.stderr,
        level=levels.get(level, logging.ERROR),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _load_scenario(args: argparse.Namespace) -> ScenarioConfig:
    config = load_config(args.config)
    ga = config.ga
    if getattr(args, "seed", None) is not None:
        ga = dataclasses.replace(ga, seed=args.seed)
    if getattr(args, "iterations", None) is not None:
        ga = dataclasses.replace(ga, iterations=args.iterations)
    config = dataclasses.replace(config, ga=ga)
    if getattr(args, "out", None) is not None:
        config = dataclasses.replace(config, output_dir=args.out)
    return config


def cmd_optimize(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    final_population: list = []

    def observer(iteration, population, ranked_pop):
        final_population[:] = population

    ranked, logs = evolve(config.shelter, config.ga, observer=observer)
    best_id = ranked.rows[0].id
    best = {ch.id: ch for ch in final_population}[best_id]
    written: list[Path] = []
    try:
        ranking_path = out_dir / "ranking.csv"
        write_ranking_csv(ranking_path, ranked)
        written.append(ranking_path)

        convergence_path = out_dir / "convergence.csv"
        write_convergence_csv(convergence_path, logs)
        written.append(convergence_path)

        layout_path = out_dir / "best_layout.json"
        write_layout_json(layout_path, best, config.shelter)
        written.append(layout_path)

        grid = rasterize(best, config.shelter)
        try:
            field = build_distance_field(grid, entrance_cells(config.shelter))
        except NoEntranceError:
            field = unreachable_field(derive_grid_dims(config.shelter))
        svg_path = out_dir / "best_layout.svg"
        write_layout_svg(svg_path, best, config.shelter, config.render, field)
        written.append(svg_path)

        png_path = out_dir / "convergence.png"
        write_convergence_png(png_path, logs)
        written.append(png_path)
    except Exception:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    print(f"best={best_id} ac={ranked.rows[0].criteria.ac} out={out_dir}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    chrom = load_layout(args.layout, config.shelter)
    vector = LayoutEvaluator(config.shelter).evaluate(chrom)
    print(format_criteria(vector))
    return EXIT_OK


def _parse_weights(text: str) -> tuple[float, ...]:
    try:
        weights = tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad weights {text!r}: {exc}") from exc
    criteria = criteria_from_weights(weights)
    try:
        validate_criteria(criteria)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return weights


def cmd_rank(args: argparse.Namespace) -> int:
    weights = _parse_weights(args.weights)
    criteria = criteria_from_weights(weights)
    try:
        with open(args.matrix, newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None:
                raise ValidationError("matrix file is empty")
            rows = [row for row in reader if row]
    except OSError as exc:
        raise ParseError(f"cannot read {args.matrix}: {exc}") from exc
    entries = []
    for row in rows:
        if len(row) != 6:
            raise ValidationError(
                f"matrix rows need id plus 5 criteria values, got {len(row)} fields"
            )
        try:
            # Keep integral values as ints so the echoed table stays clean.
            values = [
                int(f) if (f := float(v)).is_integer() else f for v in row[1:]
            ]
        except ValueError as exc:
            raise ValidationError(f"bad matrix value in row {row!r}") from exc
        if not all(math.isfinite(v) for v in values):
            raise ValidationError(f"non-finite matrix value in row {row!r}")
        entries.append((row[0], CriteriaVector(*values)))
    ranked = rank(entries, criteria)
    output = _ranked_csv_lines(header, ranked)
    if args.out:
        Path(args.out).write_text("\n".join(output) + "\n")
    else:
        for line in output:
            print(line)
    return EXIT_OK


def _ranked_csv_lines(header: list[str], ranked: RankedPopulation) -> list[str]:
    lines = [",".join([*header, "score", "score_rescaled"])]
    for row, scaled in zip(ranked.rows, ranked.rescaled()):
        values = [row.id] + [repr(v) if isinstance(v, float) else str(v)
                             for v in row.criteria.as_tuple()]
        lines.append(",".join([*values, repr(row.closeness), repr(scaled)]))
    return lines


def cmd_count_placements(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    closed = count_placements_closed_form(config.shelter)
    brute = count_placements_brute_force(config.shelter)
    print(f"closed_form={closed}")
    print(f"brute_force={brute}")
    print(f"agree={'true' if closed == brute else 'false'}")
    return EXIT_OK if closed == brute else EXIT_INTERNAL


def cmd_render(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    render = config.render
    if args.px_per_cell is not None:
        render = dataclasses.replace(render, px_per_cell=args.px_per_cell)
    chrom = load_layout(args.layout, config.shelter)
    grid = rasterize(chrom, config.shelter)
    try:
        field = build_distance_field(grid, entrance_cells(config.shelter))
    except NoEntranceError:
        field = unreachable_field(derive_grid_dims(config.shelter))
    out = Path(args.out) if args.out else Path(args.layout).with_suffix(".svg")
    write_layout_svg(out, chrom, config.shelter, render, field)
    print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kennelgrid",
        description="Synthesize and score animal-shelter cage layouts.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="run the layout search")
    p_opt.add_argument("--config", required=True)
    p_opt.add_argument("--seed", type=int, default=None)
    p_opt.add_argument("--iterations", type=int, default=None)
    p_opt.add_argument("--out", default=None)
    p_opt.set_defaults(func=cmd_optimize)

    p_eval = sub.add_parser("evaluate", help="score a saved layout")
    p_eval.add_argument("--config", required=True)
    p_eval.add_argument("--layout", required=True)
    p_eval.set_defaults(func=cmd_evaluate)

    p_rank = sub.add_parser("rank", help="rank a criteria matrix CSV")
    p_rank.add_argument("--matrix", required=True)
    p_rank.add_argument("--weights", required=True,
                        help="five signed weights, e.g. 0.9,-0.02,-0.02,-0.03,-0.03")
    p_rank.add_argument("--out", default=None)
    p_rank.set_defaults(func=cmd_rank)

    p_count = sub.add_parser(
        "count-placements", help="single-cage placement count, two ways"
    )
    p_count.add_argument("--config", required=True)
    p_count.set_defaults(func=cmd_count_placements)

    p_render = sub.add_parser("render", help="draw a layout as SVG")
    p_render.add_argument("--layout", required=True)
    p_render.add_argument("--config", required=True)
    p_render.add_argument("--px-per-cell", type=int, default=None)
    p_render.add_argument("--out", default=None)
    p_render.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, ConfigError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LayoutError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
