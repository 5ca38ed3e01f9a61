"""Atomic file output and the ordered parallel map used by the estimators."""
from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

WORKERS_ENV = "TLLFP_WORKERS"


def atomic_write_text(path, text):
    """Write ``path`` via ``path.partial`` and an atomic rename.

    An interrupted write leaves only the ``.partial`` file behind.
    """
    path = Path(path)
    tmp = path.with_name(path.name + ".partial")
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def sha256_file(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def resolve_workers(workers=None):
    env = os.environ.get(WORKERS_ENV)
    if env:
        workers = int(env)
    if workers is None:
        workers = 1
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


def ordered_map(fn, items, workers=1, chunksize=4):
    """``[fn(x) for x in items]``, optionally across a process pool.

    Results come back in input order regardless of scheduling, so any
    reduction over them is deterministic.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
