"""FpCurve: a time grid with per-k estimates of R^(k)(T) and their errors.

On disk a curve is a long-format CSV with header ``T,k,R_mean,R_stderr,n_dis``
plus a JSON sidecar (same stem, ``.json``) carrying the configuration.
Floats are written with 17 significant digits so files round-trip exactly
and reruns are byte-comparable.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CSV_COLUMNS = ("T", "k", "R_mean", "R_stderr", "n_dis")


def _fmt(x):
    return format(float(x), ".17g")


@dataclass
class FpCurve:
    times: np.ndarray
    ks: tuple
    mean: np.ndarray  # (len(ks), len(times))
    stderr: np.ndarray
    n_dis: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.ks = tuple(int(k) for k in self.ks)
        self.mean = np.atleast_2d(np.asarray(self.mean, dtype=float))
        self.stderr = np.atleast_2d(np.asarray(self.stderr, dtype=float))
        shape = (len(self.ks), len(self.times))
        if self.mean.shape != shape or self.stderr.shape != shape:
            raise ValueError(f"mean/stderr must have shape {shape}")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    @property
    def curve_id(self):
        return self.meta.get("curve_id", "")

    def index(self, k):
        try:
            return self.ks.index(int(k))
        except ValueError:
            raise KeyError(f"curve has no k={k} series") from None

    def series(self, k):
        i = self.index(k)
        return self.mean[i], self.stderr[i]

    def log_series(self, k):
        """ln R and its propagated error stderr / R."""
        mean, err = self.series(k)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(mean), err / mean

    def window(self, t_lo=None, t_hi=None):
        """Sub-curve restricted to t_lo <= T <= t_hi."""
        mask = np.ones(len(self.times), bool)
        if t_lo is not None:
            mask &= self.times >= t_lo
        if t_hi is not None:
            mask &= self.times <= t_hi
        return FpCurve(self.times[mask], self.ks, self.mean[:, mask], self.stderr[:, mask], self.n_dis, dict(self.meta))

    def check_invariants(self):
        if np.any(self.mean < 0) or np.any(self.mean > 1 + 3 * self.stderr + 1e-12):
            raise ValueError("curve means leave [0, 1 + 3 stderr]")

    # --- serialization ---

    def to_csv_text(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for j, t in enumerate(self.times):
            for i, k in enumerate(self.ks):
                w.writerow([_fmt(t), k, _fmt(self.mean[i, j]), _fmt(self.stderr[i, j]), self.n_dis])
        return buf.getvalue()

    @classmethod
    def from_csv_text(cls, text, meta=None):
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty curve file")
        missing = set(CSV_COLUMNS) - set(rows[0])
        if missing:
            raise ValueError(f"curve file lacks columns {sorted(missing)}")
        times = sorted({float(r["T"]) for r in rows})
        ks = sorted({int(r["k"]) for r in rows})
        ti = {t: j for j, t in enumerate(times)}
        ki = {k: i for i, k in enumerate(ks)}
        mean = np.full((len(ks), len(times)), np.nan)
        err = np.full_like(mean, np.nan)
        for r in rows:
            i, j = ki[int(r["k"])], ti[float(r["T"])]
            mean[i, j] = float(r["R_mean"])
            err[i, j] = float(r["R_stderr"])
        if np.isnan(mean).any():
            raise ValueError("curve file has missing (T, k) entries")
        return cls(np.array(times), tuple(ks), mean, err, int(rows[0]["n_dis"]), dict(meta or {}))

    def save(self, path, manifest=None):
        """Write CSV and JSON sidecar; returns the CSV text written."""
        from .io import atomic_write_text

        path = Path(path)
        text = self.to_csv_text()
        atomic_write_text(path, text)
        sidecar = {"meta": self.meta}
        if manifest is not None:
            sidecar["manifest"] = manifest
        atomic_write_text(path.with_suffix(".json"), json.dumps(sidecar, indent=2, sort_keys=True, default=str) + "\n")
        return text

    @classmethod
    def load(cls, path):
        path = Path(path)
        meta = {}
        side = path.with_suffix(".json")
        if side.exists():
            meta = json.loads(side.read_text()).get("meta", {})
        return cls.from_csv_text(path.read_text(), meta)


def from_z2_samples(times, z2, k_max, meta=None):
    """Estimator R^(k) = mean |Z|^(2k) over realizations (rows of z2).

    At zero temperature F^(k)(0) = 1 exactly, so the mean is already the
    normalized ratio. All k reuse the same samples.
    """
    z2 = np.asarray(z2, dtype=float)
    n = z2.shape[0]
    if n < 2:
        raise ValueError("need at least two realizations for a standard error")
    ks = tuple(range(1, k_max + 1))
    powered = np.stack([z2**k for k in ks])
    mean = powered.mean(axis=1)
    stderr = powered.std(axis=1, ddof=1) / np.sqrt(n)
    return FpCurve(times, ks, mean, stderr, n, dict(meta or {}))
