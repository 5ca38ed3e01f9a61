"""Closed-form frame-potential ratio of the disordered Luttinger liquid.

On an open chain of L sites the modes are q_n = pi n / (L + 1), n = 1..L,
each weighted by the UV regulator exp(-alpha q). With the mode kernel

    A_q(T) = (g / |q|) sin^2(u |q| T / 2) coth(beta u |q| / 2)

the normalized k-th frame potential is

    ln R^(k)(T) = -1/2 sum_q ln[1 + k A_q(T)] exp(-alpha |q|),

and independent quench segments simply add their contributions. The
remaining functions are limits of this sum: the short-time power law, the
late-time plateau (thermodynamic limit, Bessel-K0 closed form) and the
strong-disorder asymptote.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate, special

from .errors import NumericalError, RegimeError

EULER_GAMMA = float(np.euler_gamma)

# Max (times x modes) entries materialized at once.
_CHUNK = 1 << 22


@dataclass(frozen=True)
class ModeGrid:
    """Open-boundary momenta and their UV weights."""

    L: int
    alpha: float = 0.0

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")

    @property
    def momenta(self):
        return np.pi * np.arange(1, self.L + 1) / (self.L + 1)

    @property
    def weights(self):
        return np.exp(-self.alpha * self.momenta)

    @property
    def n_effective(self):
        """Number of effectively contributing modes, sum of the weights."""
        return float(self.weights.sum())


@dataclass(frozen=True)
class QuenchSchedule:
    durations: tuple

    def __init__(self, durations: Sequence[float]):
        durations = tuple(float(t) for t in durations)
        if not durations:
            raise ValueError("a quench schedule needs at least one segment")
        if any(t < 0 for t in durations):
            raise ValueError(f"durations must be non-negative, got {durations}")
        object.__setattr__(self, "durations", durations)

    @property
    def m(self):
        return len(self.durations)

    @property
    def boundaries(self):
        """Cumulative switching times tau_0 = 0, tau_1, ..., tau_m."""
        return np.concatenate([[0.0], np.cumsum(self.durations)])

    @property
    def total(self):
        return float(self.boundaries[-1])

    def locate(self, times):
        """Segment index (0-based) and local time for each total time.

        A time equal to a switching time tau_j is assigned to the end of
        segment j, not the start of segment j + 1.
        """
        times = np.asarray(times, dtype=float)
        if np.any(times < 0) or np.any(times > self.total * (1 + 1e-12) + 1e-12):
            raise ValueError("times must lie within [0, total schedule duration]")
        b = self.boundaries
        seg = np.searchsorted(b[1:], times, side="left")
        seg = np.minimum(seg, self.m - 1)
        return seg, times - b[seg]


def _coth_factor(x, beta):
    if math.isinf(beta):
        return np.ones_like(x)
    return 1.0 / np.tanh(beta * x / 2.0)


def mode_weight(q, T, g, u, beta=math.inf):
    """A_q(T) = (g/|q|) sin^2(u|q|T/2) coth(beta u|q|/2); broadcasts over q and T."""
    q = np.abs(np.asarray(q, dtype=float))
    if np.any(q == 0):
        raise ValueError("mode_weight is singular at q = 0")
    if u <= 0:
        raise ValueError(f"u must be positive, got {u}")
    if not beta > 0:
        raise ValueError(f"beta must be positive or infinite, got {beta}")
    T = np.asarray(T, dtype=float)
    return (g / q) * np.sin(u * q * T / 2.0) ** 2 * _coth_factor(u * q, beta)


def _mode_sum(grid, T, per_mode):
    """sum_q per_mode(q, T_chunk) * w_q, evaluated in chunks over T."""
    T = np.asarray(T, dtype=float)
    flat = np.atleast_1d(T).ravel()
    q = grid.momenta
    w = grid.weights
    out = np.empty(flat.shape)
    step = max(1, _CHUNK // len(q))
    for s in range(0, len(flat), step):
        out[s : s + step] = per_mode(q[None, :], flat[s : s + step, None]) @ w
    return out.reshape(T.shape) if T.ndim else out[0]


def log_fp_ratio(grid, g, u, beta, k, T):
    """ln R^(k)(T) on the discrete open-chain mode grid."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if g < 0:
        raise ValueError(f"g must be non-negative, got {g}")
    # k enters only through g k, so (g, k) and (g k, 1) agree bit for bit
    gk = g * k
    return _mode_sum(grid, T, lambda q, t: -0.5 * np.log1p(mode_weight(q, t, gk, u, beta)))


def multiquench_log_ratio(grid, g, u, beta, k, schedule):
    """ln R_m^(k) after a full schedule: the sum of single-quench values."""
    total = 0.0
    for T in schedule.durations:
        total = total + log_fp_ratio(grid, g, u, beta, k, T)
    return total


def multiquench_curve(grid, g, u, beta, k, schedule, times):
    """ln R^(k) along the total-time axis of a multi-quench protocol.

    Inside segment j the completed segments contribute their full values
    and the running segment contributes log_fp_ratio at its local time.
    """
    seg, local = schedule.locate(times)
    completed = np.concatenate(
        [[0.0], np.cumsum([log_fp_ratio(grid, g, u, beta, k, T) for T in schedule.durations])]
    )
    return completed[seg] + log_fp_ratio(grid, g, u, beta, k, local)


def short_time_log_ratio(L, alpha, g, u, k, T):
    """Power-law decay -(k L g / 8 pi) ln((alpha^2 + u^2 T^2) / alpha^2).

    Valid in the thermodynamic limit at zero temperature and weak disorder,
    when k A_q << 1 for all contributing modes.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    T = np.asarray(T, dtype=float)
    # k multiplies last so the value is exactly linear in k
    return k * (-(L * g / (8.0 * math.pi)) * np.log1p((u * T / alpha) ** 2))


def _plateau_bracket(x):
    """ln(x/4) + exp(x/2) K0(x/2) + gamma_E, stable for small x.

    For x < 2 the logarithms cancel analytically: with z = x/2 and the
    series K0(z) = -(ln(z/2) + gamma_E) I0(z) + sum_j (z^2/4)^j H_j / (j!)^2,
    the bracket becomes

        (ln(x/4) + gamma_E)(1 - e^z I0(z)) + e^z sum_j (z^2/4)^j H_j / (j!)^2.
    """
    if x >= 2.0:
        return math.log(x / 4.0) + float(special.k0e(x / 2.0)) + EULER_GAMMA
    z = x / 2.0
    t = z * z / 4.0
    term = 1.0
    harmonic = 0.0
    i0_minus_1 = 0.0
    tail = 0.0
    for j in range(1, 60):
        term *= t / (j * j)
        harmonic += 1.0 / j
        i0_minus_1 += term
        tail += term * harmonic
        if term < 1e-18 * max(i0_minus_1, 1e-300):
            break
    one_minus_ez_i0 = -math.expm1(z) - math.exp(z) * i0_minus_1
    return (math.log(x / 4.0) + EULER_GAMMA) * one_minus_ez_i0 + math.exp(z) * tail


def plateau_log_ratio(L, alpha, g, k=1):
    """Late-time plateau ln R^(k)(infinity) in the thermodynamic limit.

    -(L / 2 pi alpha) [ln(alpha g k / 4) + exp(alpha g k / 2) K0(alpha g k / 2) + gamma_E].
    The expression is 0/0 at g = 0, where the plateau is trivially 0, so
    g = 0 is rejected rather than evaluated.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if g <= 0 or k <= 0:
        raise ValueError("plateau_log_ratio needs g*k > 0; the g -> 0 limit is 0")
    return -(L / (2.0 * math.pi * alpha)) * _plateau_bracket(alpha * (g * k))


def theta_average(r):
    """(1/2pi) int_0^2pi ln(1 + r sin^2 theta) dtheta by quadrature."""
    # sin^2 has period pi and is symmetric about pi/2
    val, err = integrate.quad(lambda th: math.log1p(r * math.sin(th) ** 2), 0.0, math.pi / 2, epsabs=0.0, epsrel=1e-13, limit=200)
    return 2.0 * val / math.pi


def theta_average_closed(r):
    """Closed form 2 ln((1 + sqrt(1 + r)) / 2) of the phase average."""
    return 2.0 * math.log((1.0 + math.sqrt(1.0 + r)) / 2.0)


def plateau_quadrature_oracle(L, alpha, g, k=1, rtol=1e-10):
    """-(L / 4 pi^2) int_0^inf dq int_0^2pi dtheta e^{-alpha q} ln(1 + (gk/q) sin^2 theta).

    Nested adaptive quadrature of the double integral, kept independent of
    the Bessel closed form so it can serve as a test oracle. The q axis is
    mapped to s = ln q and split at the scales g k and 1/alpha.
    """
    if g < 0 or alpha <= 0:
        raise ValueError("need g >= 0 and alpha > 0")
    gk = g * k
    if gk == 0:
        return 0.0

    def inner(q):
        r = gk / q
        val, err = integrate.quad(
            lambda th: math.log1p(r * math.sin(th) ** 2), 0.0, math.pi / 2,
            epsabs=0.0, epsrel=1e-12, limit=200,
        )
        return 4.0 * val

    def integrand(s):
        q = math.exp(s)
        return q * math.exp(-alpha * q) * inner(q)

    s_hi = math.log(60.0 / alpha)
    s_lo = min(math.log(gk), -math.log(alpha)) - 40.0
    cuts = sorted({s_lo, math.log(gk), -math.log(alpha), s_hi})
    total = 0.0
    err_total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for a, b in zip(cuts[:-1], cuts[1:]):
            try:
                val, err = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=rtol, limit=400)
            except integrate.IntegrationWarning as exc:
                raise NumericalError(f"plateau quadrature did not converge on [{a:.3g}, {b:.3g}]: {exc}") from exc
            total += val
            err_total += err
        # beyond q = 60/alpha the integrand is below e^-60 of its scale
    if err_total > 1e3 * rtol * abs(total):
        raise NumericalError(f"plateau quadrature error estimate {err_total:.3g} for value {total:.6g}")
    return -(L / (4.0 * math.pi**2)) * total


def strong_disorder_log_ratio(grid, g, u, beta, T):
    """ln R^(1)(T) with ln(1 + A_q) replaced by ln A_q (g >> q).

    Raises RegimeError when some mode has sin^2(u q T / 2) < 1/g, where the
    logarithm of A_q no longer approximates ln(1 + A_q).
    """
    q = grid.momenta
    w = grid.weights
    T = np.asarray(T, dtype=float)
    s2 = np.sin(u * q * T[..., None] / 2.0) ** 2
    if g <= 0:
        raise ValueError("strong-disorder asymptote needs g > 0")
    if np.any(s2 < 1.0 / g):
        raise RegimeError(
            "strong-disorder asymptote breaks down: some mode has sin^2(uqT/2) < 1/g"
        )
    static = np.log((g / q) * _coth_factor(u * q, beta))
    return -0.5 * ((static + np.log(s2)) @ w)


class RevivalTimes(NamedTuple):
    estimate: float
    exact: float


def revival_time(L, u):
    """Revival estimate 2L/u and the exact grid period 2(L + 1)/u."""
    if L < 1 or u <= 0:
        raise ValueError("need L >= 1 and u > 0")
    return RevivalTimes(2.0 * L / u, 2.0 * (L + 1) / u)
