"""Full study report bundle: CSV tables, JSON payload, SVG figures.

Every file is emitted with fixed formatting and sorted keys so a re-run of
the same scenario produces byte-identical output.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .coverage import PERCENTILE_CONVENTION, overlay_best_beam, weighted_cdf
from .grid import FLOOR_DB, solid_angle_weights, uniform_weights
from .lossstats import gaussian_fit, loss_field, loss_stats, study_summary
from .models import compare_models
from .roi import matched_r1_for_r5, roi_r5
from .scanio import write_scan_csv
from .scenario import Scenario, build_patterns, scenario_models
from .svgplot import cdf_svg, heatmap_svg

CONVENTIONS = {
    "percentile": PERCENTILE_CONVENTION,
    "weighting": "sin(theta) solid-angle weights over valid grid points",
    "invalid_points": "excluded from numerator and denominator of all "
                      "sphere percentages",
    "relative_improvement": "100 * (coverage(R5) - coverage(matched R1)) "
                            "/ coverage(matched R1)",
    "floor_db": FLOOR_DB,
}


@dataclass(frozen=True)
class _Analysis:
    modes: dict
    weights: object
    free: object
    hand: object
    enhanced: object
    loss: object
    fit: object
    payload: dict


def _stats_dict(stats) -> dict:
    return {"mean_db": stats.mean_db, "median_db": stats.median_db,
            "std_db": stats.std_db, "sphere_pct": stats.sphere_pct,
            "n_points": stats.n_points}


def _range_str(pair) -> str:
    if pair is None:
        return "n/a"
    return f"{pair[0]:.1f} to {pair[1]:.1f}"


def _analyze(scenario: Scenario) -> _Analysis:
    modes = build_patterns(scenario)
    free_set = modes["freespace"]
    hand_set = modes["true_hand"]
    weights = solid_angle_weights(scenario.grid)
    uweights = uniform_weights(scenario.grid)

    summary = study_summary(free_set, hand_set, scenario.thresholds_dbm,
                            scenario.percentiles)
    free = overlay_best_beam(free_set).pattern
    hand = overlay_best_beam(hand_set).pattern

    d5 = scenario.delta5_dbm
    base = matched_r1_for_r5(free, d5)
    enhanced = roi_r5(free, hand, d5)
    loss = loss_field(free, hand)
    fit = gaussian_fit(loss, enhanced, weights)

    candidates = {"true_hand": hand}
    candidates.update(scenario_models(scenario))
    comparison = compare_models(free, candidates, enhanced, weights)

    payload = {
        "scenario": {
            "name": scenario.name, "title": scenario.title,
            "subarray": scenario.subarray,
            "orientation": scenario.orientation, "grip": scenario.grip,
            "delta5_dbm": d5,
            "thresholds_dbm": list(scenario.thresholds_dbm),
            "percentiles": list(scenario.percentiles),
            "models": list(scenario.model_names),
            "n_beams": len(scenario.beams),
        },
        "conventions": CONVENTIONS,
        "headline": {
            "gross_loss_db": list(summary.gross_loss_db),
            "rel_coverage_lost_pct": list(summary.rel_lost_pct)
            if summary.rel_lost_pct else None,
            "roi_improvement_pct": list(summary.improvement_pct)
            if summary.improvement_pct else None,
        },
        "thresholds": [
            {"threshold_dbm": r.threshold_dbm,
             "free_pct": r.coverage.free_pct,
             "blocked_pct": r.coverage.blocked_pct,
             "abs_lost_pct": r.coverage.abs_lost_pct,
             "rel_lost_pct": r.coverage.rel_lost_pct,
             "r1_pct": r.r1_pct, "r5_pct": r.r5_pct,
             "improvement_abs_pct": r.improvement.abs_pct,
             "improvement_rel_pct": r.improvement.rel_pct}
            for r in summary.thresholds],
        "percentiles": [
            {"percentile": r.percentile, "free_dbm": r.free_dbm,
             "blocked_dbm": r.blocked_dbm, "loss_db": r.loss_db}
            for r in summary.percentiles],
        "roi_loss_stats": {
            "r1_matched": {
                "weighted": _stats_dict(loss_stats(loss, base, weights)),
                "unweighted": _stats_dict(loss_stats(loss, base, uweights)),
            },
            "r5": {
                "weighted": _stats_dict(loss_stats(loss, enhanced, weights)),
                "unweighted": _stats_dict(loss_stats(loss, enhanced,
                                                     uweights)),
            },
        },
        "gaussian_fit": {"family": fit.family, "mu": fit.mu,
                         "sigma": fit.sigma},
        "models": {
            "percentiles": list(comparison.percentiles),
            "candidates": [
                {"name": c.name,
                 "deltas_db": {f"{p:g}": c.deltas_db[p]
                               for p in sorted(c.deltas_db, reverse=True)}}
                for c in comparison.candidates],
            "crossovers": [
                {"a": x.name_a, "b": x.name_b, "value_dbm": x.value_dbm}
                for x in comparison.crossovers],
        },
    }

    if "phantom" in modes:
        body_summary = study_summary(free_set, modes["phantom"],
                                     scenario.thresholds_dbm,
                                     scenario.percentiles)
        payload["phantom"] = {
            "thresholds": [
                {"threshold_dbm": r.threshold_dbm,
                 "free_pct": r.coverage.free_pct,
                 "blocked_pct": r.coverage.blocked_pct,
                 "abs_lost_pct": r.coverage.abs_lost_pct,
                 "rel_lost_pct": r.coverage.rel_lost_pct}
                for r in body_summary.thresholds],
            "percentiles": [
                {"percentile": r.percentile, "loss_db": r.loss_db}
                for r in body_summary.percentiles],
        }
    return _Analysis(modes=modes, weights=weights, free=free, hand=hand,
                     enhanced=enhanced, loss=loss, fit=fit, payload=payload)


def build_report(scenario: Scenario) -> dict:
    """Compute the full report payload for a scenario."""
    return _analyze(scenario).payload


def write_report(scenario: Scenario, out_dir) -> dict:
    """Write the full bundle into ``out_dir``; returns the JSON payload."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    a = _analyze(scenario)
    payload = a.payload

    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["study", "subarray", "orientation", "grip",
                    "gross_loss_db", "rel_coverage_lost_pct",
                    "roi_improvement_pct"])
        h = payload["headline"]
        w.writerow([scenario.name, scenario.subarray, scenario.orientation,
                    scenario.grip, _range_str(h["gross_loss_db"]),
                    _range_str(h["rel_coverage_lost_pct"]),
                    _range_str(h["roi_improvement_pct"])])

    with open(out / "coverage.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["threshold_dbm", "free_pct", "blocked_pct",
                    "abs_lost_pct", "rel_lost_pct", "r1_pct", "r5_pct",
                    "improvement_abs_pct", "improvement_rel_pct"])
        for r in payload["thresholds"]:
            w.writerow([f"{r['threshold_dbm']:g}"] +
                       [("n/a" if r[k] is None else f"{r[k]:.4f}")
                        for k in ("free_pct", "blocked_pct", "abs_lost_pct",
                                  "rel_lost_pct", "r1_pct", "r5_pct",
                                  "improvement_abs_pct",
                                  "improvement_rel_pct")])

    with open(out / "percentiles.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["percentile", "free_dbm", "blocked_dbm", "loss_db"])
        for r in payload["percentiles"]:
            w.writerow([f"{r['percentile']:g}", f"{r['free_dbm']:.4f}",
                        f"{r['blocked_dbm']:.4f}", f"{r['loss_db']:.4f}"])

    with open(out / "summary.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

    write_scan_csv(out / "scan.csv", a.modes)

    title = scenario.title
    (out / "overlay_freespace.svg").write_text(
        heatmap_svg(a.free, f"{title}: free-space best-beam EIRP (dBm)"))
    (out / "overlay_true_hand.svg").write_text(
        heatmap_svg(a.hand, f"{title}: hand-blocked best-beam EIRP (dBm)"))
    curves = [("freespace", weighted_cdf(a.free, a.weights)),
              ("true_hand", weighted_cdf(a.hand, a.weights))]
    if "phantom" in a.modes:
        body = overlay_best_beam(a.modes["phantom"]).pattern
        (out / "overlay_phantom.svg").write_text(
            heatmap_svg(body, f"{title}: body-blocked best-beam EIRP (dBm)"))
        curves.append(("phantom", weighted_cdf(body, a.weights)))
    (out / "eirp_cdf.svg").write_text(
        cdf_svg(curves, f"{title}: sphere coverage CDF",
                "best-beam EIRP (dBm)"))
    loss_curve = [("loss over R5", weighted_cdf(a.loss, a.weights,
                                                mask=a.enhanced))]
    (out / "loss_cdf.svg").write_text(
        cdf_svg(loss_curve, f"{title}: blockage loss CDF",
                "blockage loss (dB)", gaussian=a.fit))
    return payload
