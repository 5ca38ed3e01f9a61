"""Microscopic XXZ parameters and their Luttinger-liquid counterparts.

Units: J sets the energy scale, lattice spacing and hbar are 1, so all
times are in units of 1/J. Inverse temperature ``math.inf`` denotes the
ground state; it is treated symbolically (coth -> 1) wherever it appears.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

INFINITE_BETA = math.inf


def bethe_params(delta, J=1.0):
    """Exact sound velocity and Luttinger parameter of the gapless XXZ chain.

    Uses eta = arccos(delta), K = pi / (2 (pi - eta)), u = J pi sin(eta) / (2 eta).

    >>> bethe_params(0.0)
    (1.0, 1.0)
    """
    if not -1.0 < delta < 1.0:
        raise ValueError(f"anisotropy must satisfy |delta| < 1, got {delta}")
    if J <= 0:
        raise ValueError(f"J must be positive, got {J}")
    if delta == 0.0:
        # eta = pi/2 exactly; avoid the rounding in arccos(0)
        return float(J), 1.0
    eta = math.acos(delta)
    K = math.pi / (2.0 * (math.pi - eta))
    u = J * math.pi * math.sin(eta) / (2.0 * eta)
    return u, K


def continuum_gamma(sigma_h):
    """Forward-scattering strength gamma = sigma_h**2 / pi**2."""
    if sigma_h < 0:
        raise ValueError(f"sigma_h must be non-negative, got {sigma_h}")
    return sigma_h**2 / math.pi**2


def coupling_g(u, K, gamma):
    """Dimensionless disorder coupling g = 8 pi K gamma / u**2."""
    if u <= 0:
        raise ValueError(f"u must be positive, got {u}")
    return 8.0 * math.pi * K * gamma / u**2


@dataclass(frozen=True)
class LuttingerParams:
    u: float
    K: float
    gamma: float
    g: float

    def __post_init__(self):
        if self.u <= 0 or self.K <= 0 or self.gamma < 0 or self.g < 0:
            raise ValueError(f"invalid Luttinger parameters {self}")


@dataclass(frozen=True)
class ModelParams:
    """Random-field XXZ chain: anisotropy, exchange, disorder width, beta."""

    delta: float
    J: float = 1.0
    sigma_h: float = 0.0
    beta: float = INFINITE_BETA

    def __post_init__(self):
        if not -1.0 < self.delta < 1.0:
            raise ValueError(f"anisotropy must satisfy |delta| < 1, got {self.delta}")
        if self.J <= 0:
            raise ValueError(f"J must be positive, got {self.J}")
        if self.sigma_h < 0:
            raise ValueError(f"sigma_h must be non-negative, got {self.sigma_h}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive or infinite, got {self.beta}")

    @property
    def zero_temperature(self):
        return math.isinf(self.beta)

    def luttinger(self):
        u, K = bethe_params(self.delta, self.J)
        gamma = continuum_gamma(self.sigma_h)
        return LuttingerParams(u=u, K=K, gamma=gamma, g=coupling_g(u, K, gamma))
