"""Closed-form frame-potential ratios on the open-chain mode grid.

ln R^(k)(T) decays, saturates on a plateau fixed by alpha g k, and returns
exactly to zero at the grid period 2(L + 1)/u. At short times it follows a
power law; at late times the phase-averaged plateau has a Bessel closed
form, checked here against direct quadrature.
"""
import math

import numpy as np

from tllfp.analytic import (
    ModeGrid,
    log_fp_ratio,
    plateau_log_ratio,
    plateau_quadrature_oracle,
    revival_time,
    short_time_log_ratio,
)
from tllfp.model import ModelParams

L, alpha = 64, 0.08
lp = ModelParams(0.0, sigma_h=0.05).luttinger()
grid = ModeGrid(L, alpha)
T = np.array([0, 1, 5, 10, 25, 50, 100, 130])
for k in (1, 3, 5):
    print(f"k={k}", np.round(np.exp(log_fp_ratio(grid, lp.g, lp.u, math.inf, k, T)), 4))
print("revival times (estimate, exact):", revival_time(L, lp.u))

# short-time law needs the regulator to cut modes before the zone edge
big = ModeGrid(4096, 3.0)
Ts = np.array([0.5, 2.0, 8.0, 15.0])
print("\nshort times, full vs power law:")
print(np.round(log_fp_ratio(big, 1e-4, 1.0, math.inf, 1, Ts), 6))
print(np.round(short_time_log_ratio(4096, 3.0, 1e-4, 1.0, 1, Ts), 6))

print("\nplateau, Bessel form vs quadrature:")
for x in (1e-4, 1e-2, 1.0, 100.0):
    g = x / alpha
    print(f"alpha g k = {x:g}: {plateau_log_ratio(L, alpha, g):.10f}  {plateau_quadrature_oracle(L, alpha, g):.10f}")
