"""Post-processing of FpCurves: UV-cutoff fits, plateaus, collapse, revivals.

All fits work on ln R, which weights decades of decay evenly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .analytic import ModeGrid, mode_weight, plateau_log_ratio

DEFAULT_WINDOW = (10.0, 50.0)
PLATEAU_FRACTION = 0.10
REVIVAL_THRESHOLD = 0.9


@dataclass
class AlphaFit:
    alpha: float
    window: tuple
    mse: float
    curve_id: str = ""
    at_zero: bool = False  # unconstrained minimum lies at alpha <= 0
    degenerate: bool = False  # objective does not depend on alpha
    n_points: int = 0


def _mode_terms(L, g, u, beta, k, times):
    """(times, modes) matrix of -1/2 ln(1 + k A_q(T)); ln R = terms @ exp(-alpha q)."""
    q = ModeGrid(L).momenta
    return -0.5 * np.log1p(k * mode_weight(q[None, :], np.asarray(times)[:, None], g, u, beta)), q


def fit_alpha(curve, L, g, u, beta=math.inf, window=DEFAULT_WINDOW, alpha_max=5.0, n_grid=401, k=1):
    """Least-squares UV cutoff from the k = 1 series.

    Minimizes mean((ln R_num - ln R_theory(alpha))^2) over the window by a
    grid scan on [0, alpha_max] followed by golden-section refinement of
    the best bracket. A minimum on the alpha = 0 edge is returned as 0 and
    flagged.
    """
    t_lo, t_hi = window
    times = curve.times
    if t_lo < times[0] - 1e-12 or t_hi > times[-1] + 1e-12:
        raise ValueError(f"window {window} outside curve range [{times[0]}, {times[-1]}]")
    mask = (times >= t_lo) & (times <= t_hi)
    if mask.sum() < 5:
        raise ValueError(f"fit window {window} holds {mask.sum()} points, need >= 5")
    mean, _ = curve.series(k)
    y = mean[mask]
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise ValueError("curve has non-finite or non-positive values inside the fit window")
    y = np.log(y)
    terms, q = _mode_terms(L, g, u, beta, k, times[mask])

    def objective(alpha):
        return float(np.mean((y - terms @ np.exp(-alpha * q)) ** 2))

    grid = np.linspace(0.0, alpha_max, n_grid)
    values = np.array([objective(a) for a in grid])
    cid = curve.meta.get("curve_id", "")
    if g == 0 or np.ptp(values) <= 1e-14 * max(values.max(), 1e-300):
        return AlphaFit(0.0, tuple(window), objective(0.0), cid, at_zero=True, degenerate=True, n_points=int(mask.sum()))
    i = int(np.argmin(values))
    if i == 0:
        return AlphaFit(0.0, tuple(window), values[0], cid, at_zero=True, n_points=int(mask.sum()))
    if i == n_grid - 1:
        return AlphaFit(alpha_max, tuple(window), values[-1], cid, n_points=int(mask.sum()))
    res = optimize.minimize_scalar(
        objective, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden", tol=1e-10
    )
    alpha, mse = float(res.x), float(res.fun)
    if mse > values[i]:
        alpha, mse = float(grid[i]), float(values[i])
    return AlphaFit(alpha, tuple(window), mse, cid, n_points=int(mask.sum()))


def log_residual_mse(curve, L, g, u, alpha, k, window=DEFAULT_WINDOW, beta=math.inf):
    """Mean squared ln R residual of series k against the analytic curve."""
    times = curve.times
    mask = (times >= window[0]) & (times <= window[1])
    mean, _ = curve.series(k)
    terms, q = _mode_terms(L, g, u, beta, k, times[mask])
    return float(np.mean((np.log(mean[mask]) - terms @ np.exp(-alpha * q)) ** 2))


class Plateau(NamedTuple):
    value: float  # mean ln R over the window
    error: float
    t_start: float
    t_end: float


class Revival(NamedTuple):
    present: bool
    time: float  # first re-crossing of the revival level
    peak_time: float  # maximum of R over the revival lobe
    level: float  # level that was re-crossed
    degenerate: bool  # no decay at all below threshold, no revival


def detect_revival(curve, threshold=REVIVAL_THRESHOLD, k=1):
    """First revival of R^(k) after the initial decay.

    The revival is the first time R climbs back above
    max(threshold * R(0), (R(0) + m) / 2), with m the running minimum.
    For decays deeper than 1 - threshold this is the plain threshold rule;
    for shallow decays (small disorder) the fixed threshold is never
    crossed and the half-depth of the dip takes over. The lobe peak is
    reported alongside.
    """
    r, _ = curve.series(k)
    t = curve.times
    r0 = r[0]
    run_min = np.minimum.accumulate(r)
    level = np.maximum(threshold * r0, 0.5 * (r0 + run_min))
    hits = np.flatnonzero((r >= level) & (run_min < level))
    if len(hits) == 0:
        return Revival(False, math.nan, math.nan, math.nan, bool(r.min() >= threshold * r0))
    start = hits[0]
    lvl = level[start]
    after = np.flatnonzero(r[start:] < lvl)
    stop = start + after[0] if len(after) else len(r)
    peak = start + int(np.argmax(r[start:stop]))
    return Revival(True, float(t[start]), float(t[peak]), float(lvl), False)


def extract_plateau(curve, fraction=PLATEAU_FRACTION, threshold=REVIVAL_THRESHOLD):
    """Mean ln R over the last ``fraction`` of the time points, for every k.

    The error takes the per-point errors stderr/R as fully correlated
    across the window (consecutive times share realizations), i.e. their
    average. Raises if the window overlaps a revival.
    """
    n = len(curve.times)
    width = max(1, int(math.ceil(fraction * n)))
    sl = slice(n - width, n)
    r1 = curve.mean[0]
    decayed = np.flatnonzero(r1 < threshold * r1[0])
    if len(decayed) and decayed[0] < n - width and np.any(r1[sl] > threshold * r1[0]):
        raise ValueError(
            f"plateau window [{curve.times[sl][0]:.4g}, {curve.times[-1]:.4g}] overlaps a revival "
            f"(R^(1) climbs back above {threshold} of its initial value)"
        )
    out = {}
    for k in curve.ks:
        lnr, err = curve.log_series(k)
        out[k] = Plateau(float(np.mean(lnr[sl])), float(np.mean(err[sl])), float(curve.times[sl][0]), float(curve.times[-1]))
    return out


def segment_plateaus(curve, schedule, fraction=PLATEAU_FRACTION):
    """Plateau of each quench segment, from the last ``fraction`` of its points.

    Returns {k: [Plateau for m = 1..M]}.
    """
    seg, _ = schedule.locate(curve.times)
    out = {k: [] for k in curve.ks}
    for j in range(schedule.m):
        idx = np.flatnonzero(seg == j)
        if len(idx) == 0:
            raise ValueError(f"no time points inside quench segment {j + 1}")
        width = max(1, int(math.ceil(fraction * len(idx))))
        sel = idx[-width:]
        for k in curve.ks:
            lnr, err = curve.log_series(k)
            out[k].append(Plateau(float(np.mean(lnr[sel])), float(np.mean(err[sel])), float(curve.times[sel[0]]), float(curve.times[sel[-1]])))
    return out


class CollapsePoint(NamedTuple):
    k: int
    x: float  # alpha g k
    y: float  # alpha ln R^(k)(inf)
    y_err: float
    y_ref: float  # alpha * closed-form plateau at the same x


def collapse_reference(x, L):
    """alpha ln R(inf) as a function of x = alpha g k only."""
    # plateau_log_ratio scales as 1/alpha at fixed alpha g k; alpha = 1 gives alpha * ln R
    return plateau_log_ratio(L, 1.0, x, 1)


def collapse_points(plateaus, alpha, g, L):
    """Collapse coordinates (alpha g k, alpha ln R) for each k, with the closed-form reference."""
    pts = []
    for k in sorted(plateaus):
        pl = plateaus[k]
        x = alpha * g * k
        y_ref = collapse_reference(x, L) if x > 0 else 0.0
        pts.append(CollapsePoint(int(k), x, alpha * pl.value, alpha * pl.error, y_ref))
    return pts


class SlopeFit(NamedTuple):
    slope: float
    residual_norm: float
    slope_error: float


def multiquench_slope(values, errors=None):
    """Least-squares slope through the origin of ln R_m against m = 1..M."""
    y = np.asarray(values, dtype=float)
    if len(y) < 2:
        raise ValueError("need plateaus for at least m = 1, 2")
    m = np.arange(1, len(y) + 1, dtype=float)
    slope = float(m @ y / (m @ m))
    resid = float(np.linalg.norm(y - slope * m))
    if errors is None:
        serr = math.nan
    else:
        # fully correlated errors across m (shared realizations): propagate linearly
        serr = float(abs(m @ np.asarray(errors, dtype=float)) / (m @ m))
    return SlopeFit(slope, resid, serr)
