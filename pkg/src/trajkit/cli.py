"""Command-line surface.

Verbs: ``map``, ``hallmarks``, ``spectra``, ``theory lemma|eos|width``,
``train``. Every failure writes one machine-readable JSON line to stderr
and exits nonzero: 1 usage error, 2 data error, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import __version__, fixtures
from .ckptstore import DEFAULT_MEM_BUDGET, SelectionSpec, open_store
from .errors import NoMeasuresRequested, NonFiniteIterate, TrajkitError
from .hallmarks import (
    AngularMeasureKind,
    NormMeasureKind,
    angular_series,
    mds,
    mds_relative,
    norm_series,
)
from .heatmap import HeatmapStyle, render_svg
from .kernel import OriginSpec, compute_cosine_map, compute_gram
from .report import (
    AnalysisSummary,
    alignment_json,
    eos_json,
    lemma_report_json,
    write_matrix_csv,
    write_series_csv,
    write_spectrum_csv,
)
from .spectral import trajectory_spectra
from .theory import (
    QuadraticSpec,
    WidthSpec,
    eos_angle_sweep,
    lemma_bounds,
    simulate_quadratic,
    width_alignment,
)
from .trajgen import BlobSpec, TrainSpec, hyperparameter_grid, train


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise UsageError(message)


def _emit_error(code: str, detail: str) -> None:
    sys.stderr.write(json.dumps({"error": code, "detail": detail}) + "\n")


def _parse_origin(text: str) -> OriginSpec:
    if text == "absolute":
        return OriginSpec.absolute()
    if text.startswith("ckpt:"):
        try:
            return OriginSpec.checkpoint(int(text[5:]))
        except ValueError:
            pass
    raise UsageError(f"--origin must be 'absolute' or 'ckpt:IDX', got {text!r}")


def _selection(args) -> SelectionSpec:
    include = tuple(args.select) if args.select else ("**",)
    exclude = tuple(args.exclude) if args.exclude else ()
    return SelectionSpec(include_globs=include, exclude_globs=exclude)


def _add_store_flags(p) -> None:
    p.add_argument("--manifest", required=True)
    p.add_argument("--select", action="append", metavar="GLOB")
    p.add_argument("--exclude", action="append", metavar="GLOB")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--mem-budget", type=int, default=DEFAULT_MEM_BUDGET)


ANGULAR_NAMES = {m.value: m for m in AngularMeasureKind}
NORM_NAMES = {m.value: m for m in NormMeasureKind}
ALL_MEASURES = list(ANGULAR_NAMES) + list(NORM_NAMES)


def build_parser() -> _Parser:
    parser = _Parser(prog="trajkit", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("map", help="trajectory map CSV + SVG heatmap")
    _add_store_flags(p)
    p.add_argument("--origin", default="absolute")
    p.add_argument("--vmin", type=float, default=-1.0)
    p.add_argument("--vmax", type=float, default=1.0)
    p.add_argument("--cell-px", type=int, default=12)
    p.add_argument("--out", required=True)

    p = sub.add_parser("hallmarks", help="quantitative hallmark series + MDS summary")
    _add_store_flags(p)
    p.add_argument(
        "--measure",
        action="append",
        metavar="NAME",
        help=f"repeatable; one of {', '.join(ALL_MEASURES)} or 'all'",
    )
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("spectra", help="eigenvalues of K, K0, C, C0")
    _add_store_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("theory", help="numerical verification of the theory results")
    tsub = p.add_subparsers(dest="subcommand", required=True)
    for name in ("lemma", "eos", "width"):
        tp = tsub.add_parser(name)
        tp.add_argument("--params", help="JSON parameter file (defaults to the fixture)")
        tp.add_argument("--seed", type=int)
        tp.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train the MLP generator / hyperparameter grid")
    p.add_argument("--spec", help="JSON train spec (defaults to the fixture)")
    p.add_argument("--out", required=True)
    return parser


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_map(args) -> int:
    store = open_store(args.manifest, mem_budget=args.mem_budget)
    sel = _selection(args)
    origin = _parse_origin(args.origin)
    gram = compute_gram(store, origin, sel, threads=args.threads)
    cosmap = compute_cosine_map(gram)
    style = HeatmapStyle(v_min=args.vmin, v_max=args.vmax, cell_px=args.cell_px)
    out = _out_dir(args)
    write_matrix_csv(cosmap.values, cosmap.point_labels, out / "map.csv")
    (out / "map.svg").write_text(render_svg(cosmap.values, cosmap.point_labels, style))
    print(json.dumps({"n": cosmap.n, "origin": origin.describe(), "out": str(out)}))
    return 0


def cmd_hallmarks(args) -> int:
    store = open_store(args.manifest, mem_budget=args.mem_budget)
    sel = _selection(args)
    requested = args.measure or []
    if "all" in requested:
        requested = ALL_MEASURES
    if not requested:
        raise NoMeasuresRequested("pass --measure NAME (repeatable) or --measure all")
    out = _out_dir(args)

    from .kernel import trajectory_map

    summary = AnalysisSummary(
        manifest_path=str(args.manifest),
        n=store.n_points,
        p=store.selection_dim(sel),
    )
    summary.omega = mds(trajectory_map(store, sel, threads=args.threads)).omega
    if store.n_points >= 2:
        summary.omega0 = mds_relative(store, 0, sel, threads=args.threads).omega
    for name in requested:
        if name in ANGULAR_NAMES:
            series = angular_series(store, ANGULAR_NAMES[name], k=args.k, sel=sel)
        elif name in NORM_NAMES:
            series = norm_series(store, NORM_NAMES[name], k=args.k, sel=sel)
        else:
            raise UsageError(f"unknown measure {name!r}")
        path = out / f"{name}.csv"
        write_series_csv(series, path)
        summary.series_files[name] = str(path)
    summary.write(out / "summary.json")
    print(json.dumps({"omega": summary.omega, "omega0": summary.omega0, "out": str(out)}))
    return 0


def cmd_spectra(args) -> int:
    store = open_store(args.manifest, mem_budget=args.mem_budget)
    sel = _selection(args)
    spectra = trajectory_spectra(store, sel, threads=args.threads)
    out = _out_dir(args)
    for matrix_id, summary in spectra.items():
        write_spectrum_csv(summary, out / f"{matrix_id.value}.csv")
    print(json.dumps({"out": str(out), "n": store.n_points}))
    return 0


def _load_params(args) -> dict:
    if args.params:
        return json.loads(Path(args.params).read_text())
    return {}


def cmd_theory(args) -> int:
    out = _out_dir(args)
    params = _load_params(args)
    if args.subcommand == "lemma":
        steps = params.pop("steps", fixtures.LEMMA_STEPS)
        spec = _quadratic_from(params, fixtures.LEMMA_1D_PLAIN)
        out_path = out / "lemma.json"
        try:
            trace = simulate_quadratic(spec, steps)
        except NonFiniteIterate as exc:
            out_path.write_text(
                json.dumps({"error": exc.code, "detail": str(exc)}, indent=2) + "\n"
            )
            raise
        report = lemma_bounds(spec, trace)
        out_path.write_text(json.dumps(lemma_report_json(report), indent=2) + "\n")
        print(json.dumps({"pairs": len(report.pairs), "all_satisfied": report.all_satisfied}))
    elif args.subcommand == "eos":
        steps = params.pop("steps", fixtures.EOS_STEPS)
        grid = params.pop("eta_grid", list(fixtures.EOS_GRID))
        spec = _quadratic_from(params, fixtures.EOS_BASE)
        points = eos_angle_sweep(spec, grid, steps=steps)
        (out / "eos.json").write_text(json.dumps(eos_json(points), indent=2) + "\n")
        print(json.dumps({"points": len(points)}))
    else:
        defaults = dataclasses.asdict(fixtures.WIDTH_FIXTURE)
        defaults.update(params)
        if args.seed is not None:
            defaults["seed"] = args.seed
        curve = width_alignment(WidthSpec(**defaults))
        (out / "width.json").write_text(json.dumps(alignment_json(curve), indent=2) + "\n")
        print(json.dumps({"fitted_loglog_slope": curve.fitted_loglog_slope}))
    return 0


def _quadratic_from(params: dict, default: QuadraticSpec) -> QuadraticSpec:
    merged = dataclasses.asdict(default)
    merged.update(params)
    return QuadraticSpec(**merged)


def _train_spec_from(payload: dict) -> TrainSpec:
    merged = dataclasses.asdict(fixtures.TRAIN_FIXTURE)
    merged.update(payload)
    if isinstance(merged.get("data"), dict):
        merged["data"] = BlobSpec(**merged["data"])
    merged["eta_schedule"] = tuple(tuple(e) for e in merged.get("eta_schedule", ()))
    return TrainSpec(**merged)


def cmd_train(args) -> int:
    payload = json.loads(Path(args.spec).read_text()) if args.spec else {}
    spec = _train_spec_from(payload.get("train", {}))
    out = _out_dir(args)
    grid = payload.get("grid")
    if grid:
        variants = [(v["name"], float(v["mu"]), float(v["wd"])) for v in grid]
        results = hyperparameter_grid(spec, variants, out)
        report = {name: r.omega for name, r in results}
        (out / "grid.json").write_text(json.dumps(report, indent=2) + "\n")
        print(json.dumps(report))
    else:
        record = train(spec, out)
        print(
            json.dumps(
                {"final_loss": record.losses[-1] if record.losses else None,
                 "manifest": record.manifest_path}
            )
        )
    return 0


_DISPATCH = {
    "map": cmd_map,
    "hallmarks": cmd_hallmarks,
    "spectra": cmd_spectra,
    "theory": cmd_theory,
    "train": cmd_train,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        _emit_error("UsageError", str(exc))
        return 1
    except ValueError as exc:
        _emit_error("UsageError", str(exc))
        return 1
    except TrajkitError as exc:
        _emit_error(exc.code, str(exc))
        return exc.exit_code
    except OSError as exc:
        _emit_error("IoError", str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
