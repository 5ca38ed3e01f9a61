"""Exact Delta = 0 dynamics through the Jordan-Wigner map to free fermions.

The XX chain with longitudinal fields becomes the single-particle
Hamiltonian

    h = (J/2) (hopping on nearest-neighbour bonds) + diag(h_filtered).

The constant -1/2 sum_i h_i coming from S^z = n - 1/2 is dropped; it only
multiplies Z by a phase, and the frame potential depends on |Z| alone.

For a Slater determinant with orbitals C (L x N) and a Gaussian unitary
with single-particle matrix w, <Phi| W |Phi> = det(C^dag w C). The trace
overlap of the half-filled clean ground state is therefore

    Z(T) = det(C^dag exp(-i h_U T) exp(+i h_V T) C).

Each h is diagonalized once, h = V diag(e) V^T, which gives

    Z(T) = det(B_U^T diag(e^{-i e_U T}) M diag(e^{+i e_V T}) B_V),

with B_X = V_X^T C and M = V_U^T V_V, evaluated for a whole time grid in
batched form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import QuenchSchedule
from .curve import FpCurve, from_z2_samples
from .disorder import generate_realization
from .errors import NumericalError
from .io import ordered_map, resolve_workers

Z_TOLERANCE = 1e-8
_BATCH = 256


def build_hamiltonian(fields, J=1.0):
    """Tridiagonal single-particle matrix: J/2 hopping, fields on the diagonal."""
    fields = np.asarray(getattr(fields, "values", fields), dtype=float)
    L = len(fields)
    if L % 2:
        raise ValueError(f"L must be even (half filling), got {L}")
    hop = np.full(L - 1, J / 2.0)
    return np.diag(fields) + np.diag(hop, 1) + np.diag(hop, -1)


def clean_hamiltonian(L, J=1.0):
    return build_hamiltonian(np.zeros(L), J)


def ground_state_orbitals(h0):
    """The L/2 lowest eigenvectors of h0, each signed so its largest entry is positive."""
    L = h0.shape[0]
    if L % 2:
        raise ValueError(f"L must be even (half filling), got {L}")
    N = L // 2
    e, v = np.linalg.eigh(h0)
    if e[N] - e[N - 1] < 1e-12:
        raise NumericalError(f"Fermi level degenerate: gap {e[N] - e[N - 1]:.3g}")
    C = v[:, :N].copy()
    pivot = np.argmax(np.abs(C) > np.abs(C).max(axis=0) - 1e-12, axis=0)
    C *= np.sign(C[pivot, np.arange(N)])
    return C


def fermi_sea_energy(L, J=1.0):
    """Sum of the L/2 lowest clean OBC levels J cos(pi n / (L + 1))."""
    levels = np.sort(J * np.cos(np.pi * np.arange(1, L + 1) / (L + 1)))
    return float(levels[: L // 2].sum())


@dataclass
class _Spectral:
    energies: np.ndarray
    vectors: np.ndarray

    @classmethod
    def of(cls, h):
        e, v = np.linalg.eigh(h)
        return cls(e, v)

    def propagator(self, t):
        """exp(-i h t) as a dense matrix."""
        return (self.vectors * np.exp(-1j * self.energies * t)) @ self.vectors.T


def _det_curve(Bu, eu, M, ev, Bv, times):
    """det(Bu^dag diag(e^{-i eu t}) M diag(e^{i ev t}) Bv) for each t."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    out = np.empty(len(times), dtype=complex)
    BuH = Bu.conj().T
    for s in range(0, len(times), _BATCH):
        t = times[s : s + _BATCH]
        left = BuH[None, :, :] * np.exp(-1j * np.outer(t, eu))[:, None, :]
        right = np.exp(1j * np.outer(t, ev))[:, :, None] * Bv[None, :, :]
        out[s : s + _BATCH] = np.linalg.det((left @ M) @ right)
    return out


def overlap_z(C, hU, hV, T):
    """Trace overlap Z(T) = det(C^dag e^{-i hU T} e^{+i hV T} C); T may be an array."""
    su, sv = _Spectral.of(hU), _Spectral.of(hV)
    Bu = su.vectors.T @ C
    Bv = sv.vectors.T @ C
    M = su.vectors.T @ sv.vectors
    z = _det_curve(Bu, su.energies, M, sv.energies, Bv, T)
    return z if np.ndim(T) else z[0]


def multiquench_overlap_curve(C, schedule, hU_list, hV_list, times):
    """Z along the total-time axis of W_X = e^{-i h_{X,m} T_m} ... e^{-i h_{X,1} T_1}.

    Inside segment j the accumulated single-particle operator
    X_{j-1} = W_U^{(j-1)} W_V^{(j-1)dag} is sandwiched as
    e^{-i h_{U,j} s} X_{j-1} e^{+i h_{V,j} s}.
    """
    if not isinstance(schedule, QuenchSchedule):
        schedule = QuenchSchedule(schedule)
    if len(hU_list) != schedule.m or len(hV_list) != schedule.m:
        raise ValueError("need one (hU, hV) pair per quench segment")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    seg, local = schedule.locate(times)
    L = C.shape[0]
    X = np.eye(L, dtype=complex)
    out = np.empty(len(times), dtype=complex)
    for j, (hU, hV) in enumerate(zip(hU_list, hV_list)):
        su, sv = _Spectral.of(hU), _Spectral.of(hV)
        sel = seg == j
        if sel.any():
            Bu = su.vectors.T @ C
            Bv = sv.vectors.T @ C
            M = su.vectors.T @ X @ sv.vectors
            out[sel] = _det_curve(Bu, su.energies, M, sv.energies, Bv, local[sel])
        T = schedule.durations[j]
        X = su.propagator(T) @ X @ sv.propagator(T).conj().T
    return out


def multiquench_overlap_z(C, schedule, hU_list, hV_list):
    """Z at the end of the full schedule."""
    if not isinstance(schedule, QuenchSchedule):
        schedule = QuenchSchedule(schedule)
    return multiquench_overlap_curve(C, schedule, hU_list, hV_list, [schedule.total])[0]


@dataclass(frozen=True)
class _Task:
    index: int
    L: int
    J: float
    sigma_h: float
    p: int
    master_seed: int
    boundary: str
    durations: tuple  # empty for a single quench
    times: np.ndarray
    C: np.ndarray


def _fields(task, role, segment):
    return generate_realization(
        task.L, task.sigma_h, task.p, task.master_seed, task.index, role, segment, task.boundary
    )


def _realization_z2(task):
    if task.durations:
        m = len(task.durations)
        hU = [build_hamiltonian(_fields(task, "U", j), task.J) for j in range(m)]
        hV = [build_hamiltonian(_fields(task, "V", j), task.J) for j in range(m)]
        z = multiquench_overlap_curve(task.C, QuenchSchedule(task.durations), hU, hV, task.times)
    else:
        hU = build_hamiltonian(_fields(task, "U", 0), task.J)
        hV = build_hamiltonian(_fields(task, "V", 0), task.J)
        z = overlap_z(task.C, hU, hV, task.times)
    z2 = np.abs(z) ** 2
    worst = float(np.max(z2, initial=0.0))
    if not np.all(np.isfinite(z2)) or worst > (1.0 + Z_TOLERANCE) ** 2:
        raise NumericalError(f"|Z| = {math.sqrt(worst) if np.isfinite(worst) else worst} exceeds 1", task.index)
    return z2


def estimate_fp(
    L,
    sigma_h,
    p,
    k_max,
    time_grid,
    n_dis,
    master_seed,
    J=1.0,
    schedule=None,
    workers=None,
    boundary="symmetric",
):
    """Monte Carlo estimate of R^(k)(T) = E|Z(T)|^(2k), k = 1..k_max.

    Realization i uses disorder substreams (i, U, j) and (i, V, j) for each
    quench segment j. With a schedule, ``time_grid`` is total elapsed time.
    """
    if n_dis < 2:
        raise ValueError(f"n_dis must be >= 2, got {n_dis}")
    if L % 2:
        raise ValueError(f"L must be even, got {L}")
    times = np.asarray(time_grid, dtype=float)
    durations = ()
    if schedule is not None:
        schedule = schedule if isinstance(schedule, QuenchSchedule) else QuenchSchedule(schedule)
        durations = schedule.durations
    C = ground_state_orbitals(clean_hamiltonian(L, J))
    tasks = [
        _Task(i, L, J, sigma_h, p, int(master_seed), boundary, durations, times, C)
        for i in range(n_dis)
    ]
    z2 = np.stack(ordered_map(_realization_z2, tasks, resolve_workers(workers)))
    meta = {
        "engine": "freefermion",
        "L": L,
        "delta": 0.0,
        "J": J,
        "sigma_h": sigma_h,
        "filter_order": p,
        "boundary": boundary,
        "n_dis": n_dis,
        "master_seed": int(master_seed),
        "schedule": list(durations),
    }
    return from_z2_samples(times, z2, k_max, meta)
