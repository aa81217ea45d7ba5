"""``relcli``: run reliability analyses on a JSON model file.

Exit codes: 0 success, 1 I/O failure, 2 parse/validation failure,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from linkrel import mcsim, metrics
from linkrel.errors import (
    DomainError,
    HazardUndefinedError,
    ModelValidationError,
    NoSolutionError,
    QuadratureError,
)
from linkrel.modelfile import ModelSpec, bundled_model_path, dump_model, load_model
from linkrel.numerics import Grid
from linkrel.rbd import SystemModel, failure_before, system_survival, with_retransmission

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_REPORT_TIMES = (0.5, 1.0, 2.0, 5.0)


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _grid(spec: ModelSpec, args) -> Grid:
    base = spec.grid or metrics.DEFAULT_GRID
    t_max = args.grid_tmax if getattr(args, "grid_tmax", None) is not None else base.t_max
    steps = args.grid_steps if getattr(args, "grid_steps", None) is not None else base.steps
    try:
        return Grid(t_max, steps)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _retransmissions(spec: ModelSpec, args) -> int:
    k = getattr(args, "retransmissions", None)
    if k is None:
        k = spec.retransmissions or 0
    if k < 0:
        raise UsageError("--retransmissions must be >= 0")
    return k


def _variants(spec: ModelSpec, args) -> list[tuple[str, SystemModel, int]]:
    k = _retransmissions(spec, args)
    out = [("baseline", spec.model, 1)]
    if k > 0:
        out.append(("retransmission", with_retransmission(spec.model, k + 1), k + 1))
    return out


def _curve_rows(model: SystemModel, grid: Grid):
    curves = metrics.system_curves(model, grid)
    return zip(grid.points, curves["survival"].values, curves["hazard"].values, curves["pdf"].values)


# Subcommands -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    spec = load_model(args.model)
    grid = _grid(spec, args)
    deadlines = spec.deadlines if spec.deadlines is not None else metrics.DEFAULT_DEADLINES
    out = Path(args.out)
    summary = {
        "model": str(args.model),
        "grid": {"t_max": grid.t_max, "steps": grid.steps},
    }
    for label, model, copies in _variants(spec, args):
        mean = metrics.mean_tttf(model)
        block = {
            "transmissions": copies,
            "mean_tttf": mean.value,
            "mean_tttf_error": mean.error,
            "failure_before": [
                {"deadline": float(d), "probability": float(failure_before(model, d))}
                for d in deadlines
            ],
        }
        summary[label] = block
        name = "curves.csv" if label == "baseline" else f"curves_{label}.csv"
        write_atomic(out / name, csv_text(("t", "survival", "hazard", "pdf"), _curve_rows(model, grid)))
        print(f"{label}: mean TTTF = {mean.value:.6g} +/- {mean.error:.2g}")
    write_atomic(out / "summary.json", json_text(summary))
    return EXIT_OK


def cmd_importance(args) -> int:
    spec = load_model(args.model)
    grid = _grid(spec, args)
    model = spec.model
    out = Path(args.out)
    rows = metrics.importance_ranking(model, grid)
    write_atomic(
        out / "importance.csv",
        csv_text(
            ("t", "component", "birnbaum", "improvement"),
            ((r.t, r.component_name, r.birnbaum, r.improvement) for r in rows),
        ),
    )
    report_times = args.report_times or list(DEFAULT_REPORT_TIMES)
    ranked = metrics.ranked_at(model, report_times)
    summary = []
    for t in report_times:
        at_t = [r for r in ranked if r.t == float(t)]
        summary.append(
            {
                "t": float(t),
                "ranking": [
                    {"component": r.component_name, "birnbaum": r.birnbaum, "improvement": r.improvement}
                    for r in at_t
                ],
            }
        )
        print(f"t={float(t):g}: " + " > ".join(r.component_name for r in at_t))
    write_atomic(out / "importance_summary.json", json_text({"model": str(args.model), "report_times": summary}))
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = load_model(args.model)
    grid = _grid(spec, args)
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    try:
        cfg = mcsim.McConfig(args.samples, args.seed, args.chunk_size, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.out)
    summary = {"model": str(args.model), "n_samples": cfg.n_samples, "seed": cfg.seed}
    for label, model, copies in _variants(spec, args):
        res = mcsim.run(model, cfg, grid)
        analytic = np.asarray(system_survival(model, grid.points))
        emp = res.empirical_survival.values
        name = "simulation.csv" if label == "baseline" else f"simulation_{label}.csv"
        write_atomic(
            out / name,
            csv_text(
                ("t", "empirical_survival", "analytic_survival", "abs_deviation"),
                zip(grid.points, emp, analytic, np.abs(emp - analytic)),
            ),
        )
        analytic_mean = metrics.mean_tttf(model)
        summary[label] = {
            "transmissions": copies,
            "mean_tttf": res.mean_tttf,
            "std_error": res.std_error,
            "degenerate": res.degenerate,
            "analytic_mean_tttf": analytic_mean.value,
            "z_score": (res.mean_tttf - analytic_mean.value) / res.std_error if res.std_error > 0 else None,
            "max_abs_deviation": float(np.max(np.abs(emp - analytic))),
        }
        note = " (degenerate: single sample)" if res.degenerate else ""
        print(f"{label}: MC mean TTTF = {res.mean_tttf:.6g} +/- {res.std_error:.2g}{note}")
    write_atomic(out / "simulation.json", json_text(summary))
    return EXIT_OK


def cmd_export(args) -> int:
    text = dump_model(load_model(args.model))
    if args.out:
        write_atomic(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_example(args) -> int:
    sys.stdout.write(bundled_model_path().read_text(encoding="utf-8"))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relcli", description="Wireless link reliability analysis over block diagrams."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=True):
        p.add_argument("model", help="JSON model file")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        if grid:
            p.add_argument("--grid-tmax", type=float, default=None)
            p.add_argument("--grid-steps", type=int, default=None)

    p = sub.add_parser("analyze", help="survival/hazard/pdf curves, mean TTTF, deadline failures")
    common(p)
    p.add_argument("--retransmissions", type=int, default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("importance", help="Birnbaum and improvement importance")
    common(p)
    p.add_argument("--report-times", type=float, nargs="+", default=None)
    p.set_defaults(func=cmd_importance)

    p = sub.add_parser("simulate", help="Monte Carlo cross-check of the analytic survival")
    common(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--chunk-size", type=int, default=65536)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--retransmissions", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export", help="canonical re-serialization of a model file")
    p.add_argument("model")
    p.add_argument("--out", default=None, help="write to this file instead of stdout")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("example", help="print the bundled pathloss/shadowing/multipath model")
    p.set_defaults(func=cmd_example)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelValidationError as exc:
        for v in exc.violations:
            print(f"error: {v}", file=sys.stderr)
        return EXIT_INVALID
    except (UsageError, NoSolutionError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (QuadratureError, HazardUndefinedError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
