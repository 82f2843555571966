"""Command-line interface.

Single-invocation, file-in/file-out. Exit codes: 0 success, 2 bad usage or
configuration, 1 bad input data.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .coverage import (coverage_above, overlay_best_beam, percentile_value,
                       weighted_cdf)
from .errors import ConfigError, DataError
from .grid import solid_angle_weights
from .lossstats import gaussian_fit, loss_field, loss_stats
from .models import compare_models, model_preset
from .roi import (matched_r1_for_r5, roi_improvement, roi_r1, roi_r2, roi_r3,
                  roi_r4, roi_r5, write_roi_csv)
from .report import CONVENTIONS, write_report
from .scanio import parse_scan_csv, write_scan_csv
from .scenario import (build_patterns, list_bundled, load_bundled,
                       load_scenario, scenario_metadata, scenario_models)
from .svgplot import cdf_svg, heatmap_svg


def _resolve_scenario(ref: str):
    if Path(ref).is_file():
        return load_scenario(ref)
    return load_bundled(ref)


def _parse_float_list(text: str, what: str) -> tuple[float, ...]:
    try:
        items = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ConfigError(f"bad {what} list: {text!r}") from exc
    if not items:
        raise ConfigError(f"{what} list is empty")
    return items


def _load_modes(args) -> dict:
    """Per-mode pattern sets from --scan or --scenario."""
    if getattr(args, "scan", None):
        return parse_scan_csv(args.scan).modes
    if getattr(args, "scenario", None):
        return build_patterns(_resolve_scenario(args.scenario))
    raise ConfigError("one of --scan or --scenario is required")


def _free_blocked(modes: dict):
    if "freespace" not in modes:
        raise DataError("input provides no freespace mode")
    if "true_hand" not in modes:
        raise DataError("input provides no true_hand mode")
    free = overlay_best_beam(modes["freespace"]).pattern
    blocked = overlay_best_beam(modes["true_hand"]).pattern
    return free, blocked


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_synth(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    modes = build_patterns(scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_scan_csv(out / "scan.csv", modes)
    meta = dict(scenario_metadata(scenario), conventions=CONVENTIONS)
    _emit(meta, out / "scan_meta.json")
    return 0


def _cmd_overlay(args) -> int:
    modes = _load_modes(args)
    if args.mode not in modes:
        raise DataError(f"mode {args.mode!r} not present; have "
                        f"{', '.join(sorted(modes))}")
    overlay = overlay_best_beam(modes[args.mode])
    svg = heatmap_svg(overlay.pattern,
                      f"{args.mode} best-beam EIRP (dBm)")
    Path(args.out).write_text(svg)
    return 0


def _cmd_cdf(args) -> int:
    modes = _load_modes(args)
    weights = solid_angle_weights(next(iter(modes.values())).grid)
    curves = []
    for mode in sorted(modes):
        pattern = overlay_best_beam(modes[mode]).pattern
        curves.append((mode, weighted_cdf(pattern, weights)))
    if args.out:
        Path(args.out).write_text(
            cdf_svg(curves, "sphere coverage CDF", "best-beam EIRP (dBm)"))
    for mode, cdf in curves:
        if args.threshold is not None:
            pattern = overlay_best_beam(modes[mode]).pattern
            pct = coverage_above(pattern, weights, args.threshold)
            print(f"{mode}: {pct:.2f}% of sphere >= "
                  f"{args.threshold:g} dBm")
        if args.percentiles:
            for p in _parse_float_list(args.percentiles, "percentiles"):
                print(f"{mode}: p{p:g} = {percentile_value(cdf, p):.2f} dBm")
    return 0


def _cmd_roi(args) -> int:
    modes = _load_modes(args)
    free, blocked = _free_blocked(modes)
    weights = solid_angle_weights(free.grid)
    kind = args.roi_kind.lower()
    if kind == "r1":
        region = roi_r1(free, args.delta1)
        base = None
    elif kind == "r2":
        region = roi_r2(free, blocked, args.delta1, args.delta2)
        base = roi_r1(free, args.delta1)
    elif kind == "r3":
        region = roi_r3(free, blocked, args.delta1, args.delta3)
        base = roi_r1(free, args.delta1)
    elif kind == "r4":
        region = roi_r4(free, blocked, args.delta1, args.delta4)
        base = roi_r1(free, args.delta1)
    elif kind == "r5":
        region = roi_r5(free, blocked, args.delta5)
        base = matched_r1_for_r5(free, args.delta5)
    else:
        raise ConfigError(f"unknown --roi-kind {args.roi_kind!r}")
    payload = {"kind": region.kind, "params": region.params,
               "coverage_pct": region.coverage(weights),
               "conventions": CONVENTIONS}
    if base is not None:
        imp = roi_improvement(base, region, weights)
        payload["baseline_pct"] = imp.base_pct
        payload["improvement_abs_pct"] = imp.abs_pct
        payload["improvement_rel_pct"] = imp.rel_pct
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_roi_csv(region, out / "roi_mask.csv")
        _emit(payload, out / "roi.json")
    else:
        _emit(payload, None)
    return 0


def _cmd_stats(args) -> int:
    modes = _load_modes(args)
    free, blocked = _free_blocked(modes)
    weights = solid_angle_weights(free.grid)
    loss = loss_field(free, blocked)
    base = matched_r1_for_r5(free, args.delta5)
    enhanced = roi_r5(free, blocked, args.delta5)
    out = {}
    for label, region in (("r1_matched", base), ("r5", enhanced)):
        s = loss_stats(loss, region, weights)
        out[label] = {"mean_db": s.mean_db, "median_db": s.median_db,
                      "std_db": s.std_db, "sphere_pct": s.sphere_pct,
                      "n_points": s.n_points}
    fit = gaussian_fit(loss, enhanced, weights)
    out["gaussian_fit"] = {"family": fit.family, "mu": fit.mu,
                           "sigma": fit.sigma}
    out["delta5_dbm"] = args.delta5
    out["conventions"] = CONVENTIONS
    _emit(out, args.out)
    return 0


def _cmd_compare(args) -> int:
    modes = _load_modes(args)
    free, blocked = _free_blocked(modes)
    weights = solid_angle_weights(free.grid)
    region = roi_r5(free, blocked, args.delta5)
    candidates = {"true_hand": blocked}
    if getattr(args, "scenario", None) and not args.models:
        candidates.update(scenario_models(_resolve_scenario(args.scenario)))
    else:
        names = (args.models.split(",") if args.models
                 else ["prior-hand-15.3", "prior-body-8.5"])
        for name in names:
            name = name.strip()
            if name:
                candidates[name] = model_preset(name)
    report = compare_models(free, candidates, region, weights)
    payload = {
        "delta5_dbm": args.delta5,
        "percentiles": list(report.percentiles),
        "candidates": [
            {"name": c.name,
             "deltas_db": {f"{p:g}": c.deltas_db[p]
                           for p in sorted(c.deltas_db, reverse=True)}}
            for c in report.candidates],
        "crossovers": [{"a": x.name_a, "b": x.name_b,
                        "value_dbm": x.value_dbm}
                       for x in report.crossovers],
        "conventions": CONVENTIONS,
    }
    _emit(payload, args.out)
    return 0


def _cmd_report(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    write_report(scenario, args.out)
    print(f"report written to {args.out}")
    return 0


def _cmd_scenarios(args) -> int:
    for name in list_bundled():
        print(name)
    return 0


def _add_input_args(p) -> None:
    p.add_argument("--scan", help="scan archive CSV")
    p.add_argument("--scenario",
                   help="scenario JSON path or bundled scenario name")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beamblock",
        description="Spherical beam-pattern blockage analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth",
                       help="synthesize a scenario to scan CSV + metadata")
    p.add_argument("--scenario", required=True,
                   help="scenario JSON path or bundled scenario name")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("overlay", help="best-beam overlay heatmap SVG")
    _add_input_args(p)
    p.add_argument("--mode", default="freespace")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=_cmd_overlay)

    p = sub.add_parser("cdf", help="coverage CDF curves and percentiles")
    _add_input_args(p)
    p.add_argument("--out", help="output SVG path")
    p.add_argument("--threshold", type=float,
                   help="print coverage above this EIRP (dBm)")
    p.add_argument("--percentiles",
                   help="comma list, print these percentile values")
    p.set_defaults(func=_cmd_cdf)

    p = sub.add_parser("roi", help="region-of-interest coverage")
    _add_input_args(p)
    p.add_argument("--roi-kind", default="r5",
                   choices=["r1", "r2", "r3", "r4", "r5"])
    p.add_argument("--delta1", type=float, default=5.0,
                   help="dB below the free-space peak (R1)")
    p.add_argument("--delta2", type=float, default=5.0,
                   help="dB below the blocked peak (R2)")
    p.add_argument("--delta3", type=float, default=10.0,
                   help="dB below the free-space peak, blocked pattern (R3)")
    p.add_argument("--delta4", type=float, default=-35.0,
                   help="absolute blocked EIRP floor in dBm (R4)")
    p.add_argument("--delta5", type=float, default=-35.0,
                   help="absolute either-pattern EIRP floor in dBm (R5)")
    p.add_argument("--out",
                   help="output directory for mask CSV + coverage JSON "
                        "(default: JSON to stdout)")
    p.set_defaults(func=_cmd_roi)

    p = sub.add_parser("stats", help="blockage-loss statistics and fit")
    _add_input_args(p)
    p.add_argument("--delta5", type=float, default=-35.0,
                   help="absolute EIRP floor for the region (dBm)")
    p.add_argument("--out", help="output JSON path (default stdout)")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("compare", help="score blockage models vs measurement")
    _add_input_args(p)
    p.add_argument("--delta5", type=float, default=-35.0,
                   help="absolute EIRP floor for the region (dBm)")
    p.add_argument("--models", help="comma list of model presets")
    p.add_argument("--out", help="output JSON path (default stdout)")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("report", help="write the full study report bundle")
    p.add_argument("--scenario", required=True,
                   help="scenario JSON path or bundled scenario name")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("scenarios", help="list bundled scenarios")
    p.set_defaults(func=_cmd_scenarios)

    return parser


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
