"""Dense exact diagonalization of the random-field XXZ chain at S^z_tot = 0.

    H = J sum_i (S^x_i S^x_{i+1} + S^y_i S^y_{i+1} + Delta S^z_i S^z_{i+1}) + sum_i h_i S^z_i

on an open chain. Fields commute with S^z_tot, so only the zero-
magnetization sector (dimension C(L, L/2)) is ever built. Bit i of a basis
state is the spin on site i (1 = up).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .curve import from_z2_samples
from .disorder import generate_realization
from .errors import NumericalError
from .io import ordered_map, resolve_workers

MAX_L = 14


@dataclass(frozen=True)
class SectorBasis:
    L: int
    states: np.ndarray  # sorted bitmasks with popcount L/2

    @classmethod
    def zero_magnetization(cls, L):
        if L % 2:
            raise ValueError(f"L must be even, got {L}")
        if L > MAX_L:
            raise ValueError(f"L = {L} exceeds the dense-ED limit L <= {MAX_L}")
        allstates = np.arange(1 << L, dtype=np.int64)
        pop = np.zeros_like(allstates)
        for i in range(L):
            pop += (allstates >> i) & 1
        return cls(L, allstates[pop == L // 2])

    @property
    def dim(self):
        return len(self.states)

    def index(self, states):
        idx = np.searchsorted(self.states, states)
        if np.any(self.states[np.minimum(idx, self.dim - 1)] != states):
            raise KeyError("state outside the sector")
        return idx

    def sz(self):
        """(dim, L) array of S^z eigenvalues +-1/2."""
        bits = (self.states[:, None] >> np.arange(self.L)) & 1
        return bits - 0.5


@dataclass
class SectorHamiltonian:
    matrix: np.ndarray
    basis: SectorBasis
    delta: float
    J: float
    fields: np.ndarray


def build_sector_hamiltonian(L, delta, J, fields, basis=None):
    fields = np.asarray(getattr(fields, "values", fields), dtype=float)
    if len(fields) != L:
        raise ValueError(f"need {L} fields, got {len(fields)}")
    if basis is None:
        basis = SectorBasis.zero_magnetization(L)
    elif basis.L != L:
        raise ValueError("basis built for a different L")
    sz = basis.sz()
    diag = J * delta * np.sum(sz[:, :-1] * sz[:, 1:], axis=1) + sz @ fields
    H = np.diag(diag)
    rows = np.arange(basis.dim)
    for i in range(L - 1):
        bi = (basis.states >> i) & 1
        bj = (basis.states >> (i + 1)) & 1
        flip = bi != bj
        partner = basis.states[flip] ^ ((1 << i) | (1 << (i + 1)))
        H[rows[flip], basis.index(partner)] += J / 2.0
    return SectorHamiltonian(H, basis, delta, J, fields)


class GroundState(NamedTuple):
    energy: float
    vector: np.ndarray
    gap: float
    degenerate: bool


def ground_state(H):
    """Lowest eigenpair; the first non-negligible amplitude is made positive."""
    mat = H.matrix if isinstance(H, SectorHamiltonian) else H
    e, v = np.linalg.eigh(mat)
    vec = v[:, 0].copy()
    first = np.flatnonzero(np.abs(vec) > 1e-12)[0]
    vec *= np.sign(vec[first])
    gap = float(e[1] - e[0]) if len(e) > 1 else math.inf
    degenerate = gap < 1e-10
    if degenerate:
        warnings.warn(f"ground state degenerate within {gap:.3g}", RuntimeWarning, stacklevel=2)
    return GroundState(float(e[0]), vec, gap, degenerate)


def _decompose(H):
    mat = H.matrix if isinstance(H, SectorHamiltonian) else H
    return np.linalg.eigh(mat)


def overlap_z_manybody(gs, H_U, H_V, T):
    """Z(T) = <gs| e^{-i H_U T} e^{+i H_V T} |gs>, i.e. Tr(rho W_U W_V^dag)."""
    vec = gs.vector if isinstance(gs, GroundState) else np.asarray(gs)
    eu, vu = _decompose(H_U)
    ev, vv = _decompose(H_V)
    cu = vu.T @ vec
    cv = vv.T @ vec
    M = vu.T @ vv
    t = np.atleast_1d(np.asarray(T, dtype=float))
    # <gs| e^{-iH_U t} = (e^{+iH_U t}|gs>)^dag
    bra = cu[None, :] * np.exp(-1j * np.outer(t, eu))
    ket = cv[None, :] * np.exp(1j * np.outer(t, ev))
    z = np.einsum("ta,ta->t", bra @ M, ket)
    return z if np.ndim(T) else z[0]


@dataclass(frozen=True)
class _Task:
    index: int
    L: int
    delta: float
    J: float
    sigma_h: float
    p: int
    master_seed: int
    boundary: str
    times: np.ndarray
    gs: np.ndarray


def _realization_z2(task):
    basis = SectorBasis.zero_magnetization(task.L)
    hs = []
    for role in ("U", "V"):
        f = generate_realization(task.L, task.sigma_h, task.p, task.master_seed, task.index, role, 0, task.boundary)
        hs.append(build_sector_hamiltonian(task.L, task.delta, task.J, f.values, basis))
    z2 = np.abs(overlap_z_manybody(task.gs, hs[0], hs[1], task.times)) ** 2
    if not np.all(np.isfinite(z2)) or z2.max() > (1.0 + 1e-8) ** 2:
        raise NumericalError(f"|Z|^2 = {z2.max()} exceeds 1", task.index)
    return z2


def estimate_fp_interacting(
    L, delta, sigma_h, p, k_max, time_grid, n_dis, master_seed, J=1.0, workers=None, boundary="symmetric"
):
    """Same estimator as freefermion.estimate_fp, with full many-body evolution."""
    if n_dis < 2:
        raise ValueError(f"n_dis must be >= 2, got {n_dis}")
    basis = SectorBasis.zero_magnetization(L)
    gs = ground_state(build_sector_hamiltonian(L, delta, J, np.zeros(L), basis))
    times = np.asarray(time_grid, dtype=float)
    tasks = [
        _Task(i, L, delta, J, sigma_h, p, int(master_seed), boundary, times, gs.vector)
        for i in range(n_dis)
    ]
    z2 = np.stack(ordered_map(_realization_z2, tasks, resolve_workers(workers)))
    meta = {
        "engine": "manybody",
        "L": L,
        "delta": delta,
        "J": J,
        "sigma_h": sigma_h,
        "filter_order": p,
        "boundary": boundary,
        "n_dis": n_dis,
        "master_seed": int(master_seed),
        "schedule": [],
    }
    return from_z2_samples(times, z2, k_max, meta)
