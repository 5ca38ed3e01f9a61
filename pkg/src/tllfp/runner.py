"""Run experiment configs and post-process their curves."""
from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, analytic, freefermion, manybody
from .curve import FpCurve
from .errors import ConfigError
from .io import atomic_write_text, resolve_workers
from .model import ModelParams


def model_of(config_or_meta):
    """Luttinger parameters for a config or a curve's metadata dict."""
    get = config_or_meta.get if isinstance(config_or_meta, dict) else lambda k, d=None: getattr(config_or_meta, k, d)
    beta = get("beta", math.inf)
    beta = math.inf if beta in (None, "inf") else float(beta)
    return ModelParams(delta=float(get("delta", 0.0)), J=float(get("J", 1.0)), sigma_h=float(get("sigma_h", 0.0)), beta=beta).luttinger()


def analytic_curve(L, alpha, g, u, k_max, times, beta=math.inf, schedule=None, meta=None):
    """FpCurve of the closed-form ratio (zero error bars)."""
    grid = analytic.ModeGrid(L, alpha)
    times = np.asarray(times, dtype=float)
    ks = tuple(range(1, k_max + 1))
    rows = []
    for k in ks:
        if schedule:
            lnr = analytic.multiquench_curve(grid, g, u, beta, k, analytic.QuenchSchedule(schedule), times)
        else:
            lnr = analytic.log_fp_ratio(grid, g, u, beta, k, times)
        rows.append(np.exp(lnr))
    mean = np.array(rows)
    return FpCurve(times, ks, mean, np.zeros_like(mean), 0, dict(meta or {}))


def simulate(config, workers=None):
    """Produce the FpCurve a config describes, without touching the disk."""
    times = config.time_grid()
    schedule = config.schedule or None
    workers = resolve_workers(workers if workers is not None else config.workers)
    if config.engine == "analytic":
        lp = model_of(config)
        curve = analytic_curve(config.L, config.alpha, lp.g, lp.u, config.k_max, times, config.beta, schedule)
    elif config.engine == "freefermion":
        curve = freefermion.estimate_fp(
            config.L, config.sigma_h, config.filter_order, config.k_max, times, config.n_dis,
            config.master_seed, J=config.J, schedule=schedule, workers=workers, boundary=config.boundary,
        )
    else:
        if schedule:
            raise ConfigError("the manybody engine does not run quench schedules")
        curve = manybody.estimate_fp_interacting(
            config.L, config.delta, config.sigma_h, config.filter_order, config.k_max, times,
            config.n_dis, config.master_seed, J=config.J, workers=workers, boundary=config.boundary,
        )
    curve.meta.update(config.to_dict())
    curve.meta.pop("workers", None)
    curve.meta.pop("output", None)
    return curve


@dataclass
class RunResult:
    curve: FpCurve
    csv_path: Path
    manifest: dict


def run(config, output=None, workers=None):
    """Simulate, then write ``output`` (CSV) and its JSON sidecar atomically."""
    from . import __version__

    output = Path(output or config.output or "curve.csv")
    start = time.perf_counter()
    curve = simulate(config, workers)
    curve.meta["curve_id"] = output.stem
    elapsed = time.perf_counter() - start
    digest = hashlib.sha256(curve.to_csv_text().encode()).hexdigest()
    manifest = {
        "config": config.to_dict(),
        "version": __version__,
        "wall_clock_s": round(elapsed, 3),
        "checksums": {output.name: digest},
    }
    curve.save(output, manifest)
    return RunResult(curve, output, manifest)


@dataclass
class Comparison:
    fit: analysis.AlphaFit
    mse_by_k: dict
    overlay: list  # rows (T, k, R_num, R_analytic)


def compare(curve, config=None, window=analysis.DEFAULT_WINDOW):
    """Fit alpha on k = 1 and overlay the analytic curves for all k.

    Model parameters come from ``config`` when given, else from the
    curve's metadata. The analytic side is evaluated on the numerical grid.
    """
    src = config if config is not None else curve.meta
    lp = model_of(src)
    L = int(src["L"] if isinstance(src, dict) else src.L)
    fit = analysis.fit_alpha(curve, L, lp.g, lp.u, window=window)
    fit.curve_id = curve.curve_id
    schedule = curve.meta.get("schedule") or None
    ref = analytic_curve(L, fit.alpha, lp.g, lp.u, max(curve.ks), curve.times, schedule=schedule)
    mse = {}
    for k in curve.ks:
        if schedule:
            mask = (curve.times >= window[0]) & (curve.times <= window[1])
            num, _ = curve.series(k)
            mse[k] = float(np.mean((np.log(num[mask]) - np.log(ref.series(k)[0][mask])) ** 2))
        else:
            mse[k] = analysis.log_residual_mse(curve, L, lp.g, lp.u, fit.alpha, k, window)
    overlay = []
    for j, t in enumerate(curve.times):
        for k in curve.ks:
            overlay.append((float(t), k, float(curve.series(k)[0][j]), float(ref.series(k)[0][j])))
    return Comparison(fit, mse, overlay)


ANALYSIS_COLUMNS = ("curve_id", "alpha", "mse", "k", "plateau", "plateau_err", "collapse_x", "collapse_y")


def collapse_rows(curve, window=analysis.DEFAULT_WINDOW, t_end=None, fraction=analysis.PLATEAU_FRACTION):
    """Alpha fit, plateaus and collapse coordinates of one curve as table rows."""
    lp = model_of(curve.meta)
    L = int(curve.meta["L"])
    fit = analysis.fit_alpha(curve, L, lp.g, lp.u, window=window)
    plateaus = analysis.extract_plateau(curve.window(None, t_end), fraction)
    pts = analysis.collapse_points(plateaus, fit.alpha, lp.g, L)
    return [
        (curve.curve_id, fit.alpha, fit.mse, p.k, plateaus[p.k].value, plateaus[p.k].error, p.x, p.y)
        for p in pts
    ]


def slope_rows(curve, fraction=analysis.PLATEAU_FRACTION):
    """Per-k multi-quench plateaus and their slope against m."""
    durations = curve.meta.get("schedule") or []
    if len(durations) < 2:
        raise ConfigError(f"curve {curve.curve_id!r} has no multi-quench schedule")
    schedule = analytic.QuenchSchedule(durations)
    per_k = analysis.segment_plateaus(curve, schedule, fraction)
    rows = []
    for k, pls in per_k.items():
        fit = analysis.multiquench_slope([p.value for p in pls], [p.error for p in pls])
        rows.append((curve.curve_id, k, [p.value for p in pls], fit.slope, fit.residual_norm))
    return rows


def table_text(header, rows):
    def cell(v):
        if isinstance(v, float):
            return format(v, ".10g")
        if isinstance(v, (list, tuple)):
            return ";".join(cell(x) for x in v)
        return str(v)

    lines = [",".join(header)]
    lines += [",".join(cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def write_table(path, header, rows):
    atomic_write_text(path, table_text(header, rows))
