"""Random longitudinal fields and the binomial smoothing filter.

Raw site fields are i.i.d. N(0, sigma_h**2). The order-p filter convolves
them with the normalized binomial kernel c_m = C(p, m) / 2**p,

    h_filtered[i] = sum_m c_m h[i - m],

whose power spectrum is cos(q/2)**(2p) sigma_h**2: flat at q = 0 and with a
2p-th order zero at q = pi, which removes the 2k_F (backscattering)
component of the disorder.

Seeding
-------
Every realization is generated from its own substream. The substream for
``(master_seed, realization, role, segment)`` is
``numpy.random.SeedSequence(master_seed, spawn_key=(realization, role, segment))``
with role 0 for U and 1 for V; SeedSequence hashes the key tuple into a
PCG64 state. Normal deviates come from ``Generator.standard_normal``
(ziggurat). Substreams do not depend on the order in which realizations are
generated, so parallel runs reproduce serial ones bit for bit.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

ROLES = {"U": 0, "V": 1}

# Mirror conventions for the left edge, where h[i - m] runs off the chain.
#   "symmetric": mirror about the edge bond, h[-n] = h[n - 1]  (numpy "symmetric")
#   "reflect":   mirror about site 0,        h[-n] = h[n]      (numpy "reflect")
BOUNDARY_MODES = ("symmetric", "reflect")


@dataclass(frozen=True)
class FilterKernel:
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"filter order must be >= 0, got {self.order}")

    @property
    def coefficients(self):
        p = self.order
        return np.array([math.comb(p, m) for m in range(p + 1)], dtype=float) / 2.0**p

    def exact_coefficients(self):
        p = self.order
        return [Fraction(math.comb(p, m), 2**p) for m in range(p + 1)]


@dataclass(frozen=True)
class DisorderRealization:
    values: np.ndarray
    raw_seed: int
    filter_order: int
    sigma_h: float

    @property
    def L(self):
        return len(self.values)


def substream(master_seed, realization=0, role="U", segment=0):
    """SeedSequence for one (realization, role, segment) tuple."""
    role_id = ROLES[role] if isinstance(role, str) else int(role)
    return np.random.SeedSequence(
        int(master_seed), spawn_key=(int(realization), role_id, int(segment))
    )


def substream_seed(master_seed, realization=0, role="U", segment=0):
    """64-bit integer identifying the substream, recorded for provenance."""
    ss = substream(master_seed, realization, role, segment)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_raw_fields(L, sigma_h, seed):
    """Draw L i.i.d. N(0, sigma_h**2) fields.

    ``seed`` may be an int, a SeedSequence or a Generator.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if sigma_h < 0:
        raise ValueError(f"sigma_h must be non-negative, got {sigma_h}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return sigma_h * rng.standard_normal(L)


def apply_filter(h, p, boundary="symmetric"):
    """Order-p binomial filter with a mirrored left edge.

    The kernel only reaches to the left (h[i - m], m >= 0), so the right
    edge never needs an extension.
    """
    h = np.asarray(h, dtype=float)
    if p < 0:
        raise ValueError(f"filter order must be >= 0, got {p}")
    if boundary not in BOUNDARY_MODES:
        raise ValueError(f"boundary must be one of {BOUNDARY_MODES}, got {boundary!r}")
    if p == 0:
        return h.copy()
    if boundary == "reflect" and len(h) <= p:
        raise ValueError(f"reflect boundary needs L > p, got L={len(h)}, p={p}")
    padded = np.pad(h, (p, 0), mode=boundary)
    c = FilterKernel(p).coefficients
    L = len(h)
    out = np.zeros(L)
    for m in range(p + 1):
        out += c[m] * padded[p - m : p - m + L]
    return out


def filter_spectrum_theory(q, p, sigma_h):
    """cos(q/2)**(2p) * sigma_h**2."""
    return np.cos(np.asarray(q, dtype=float) / 2.0) ** (2 * p) * sigma_h**2


def generate_realization(
    L, sigma_h, p, master_seed, realization=0, role="U", segment=0, boundary="symmetric"
):
    ss = substream(master_seed, realization, role, segment)
    raw = sample_raw_fields(L, sigma_h, np.random.Generator(np.random.PCG64(ss)))
    return DisorderRealization(
        values=apply_filter(raw, p, boundary),
        raw_seed=int(ss.generate_state(1, dtype=np.uint64)[0]),
        filter_order=p,
        sigma_h=sigma_h,
    )


@dataclass(frozen=True)
class SpectrumEstimate:
    q: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    n_samples: int


def filter_spectrum_estimate(n_samples, L, p, sigma_h, seed, q=None, max_lag=None, boundary="symmetric"):
    """Monte Carlo estimate of S(q) = sum_r exp(-i q r) C(r) away from the edge.

    Each sample gives an unbiased autocovariance estimate C(r) for
    |r| <= max_lag on the translation-invariant bulk (sites >= p, where the
    mirrored edge no longer enters). The per-sample spectra are averaged and
    the standard error is their sample SD / sqrt(n_samples). The estimate is
    unbiased whenever max_lag >= p, since C(r) vanishes beyond the kernel
    support.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    if q is None:
        q = np.array([0.0, np.pi / 2, 3 * np.pi / 4, np.pi])
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if max_lag is None:
        max_lag = p + 2
    bulk = L - p
    if bulk <= max_lag:
        raise ValueError(f"bulk window of {bulk} sites too short for max_lag={max_lag}")
    rng = np.random.default_rng(seed)
    raw = sigma_h * rng.standard_normal((n_samples, L))
    filt = np.stack([apply_filter(row, p, boundary) for row in raw])[:, p:]
    n_pairs = bulk - max_lag
    # same number of pairs at every lag keeps the lags on an equal footing
    cov = np.empty((n_samples, max_lag + 1))
    for r in range(max_lag + 1):
        cov[:, r] = np.mean(filt[:, :n_pairs] * filt[:, r : r + n_pairs], axis=1)
    lags = np.arange(1, max_lag + 1)
    per_sample = cov[:, :1] + 2.0 * cov[:, 1:] @ np.cos(np.outer(lags, q))
    mean = per_sample.mean(axis=0)
    if n_samples > 1:
        stderr = per_sample.std(axis=0, ddof=1) / math.sqrt(n_samples)
    else:
        stderr = np.full_like(mean, np.nan)
    return SpectrumEstimate(q=q, mean=mean, stderr=stderr, n_samples=n_samples)


def write_realizations_csv(path, realizations):
    """Dump realizations as rows (index, site, value) for auditing."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "site", "value"])
        for idx, real in enumerate(realizations):
            for site, v in enumerate(real.values):
                w.writerow([idx, site, format(float(v), ".17g")])
