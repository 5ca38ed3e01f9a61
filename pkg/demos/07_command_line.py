"""The batch front end, driven from Python.

Equivalent shell usage:

    tllfp run fig1b -o fig1b.csv
    tllfp compare fig1b.csv fig1b --window 10,40 -o overlay.csv
    tllfp revival fig1b.csv
    tllfp collapse fig1b.csv --t-end 40

Every run writes a CSV (T,k,R_mean,R_stderr,n_dis) plus a JSON sidecar with
the configuration echo, version, wall-clock and checksum.
"""
import json
import tempfile
from pathlib import Path

from tllfp.cli import main
from tllfp.config import load_config

print(load_config("fig1b").to_text())
with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "fig1b.csv"
    main(["run", "fig1b", "-o", str(out)])
    main(["revival", str(out)])
    main(["compare", str(out), "fig1b", "--window", "10,40", "-o", str(Path(tmp) / "overlay.csv")])
    print(json.dumps(json.loads(out.with_suffix(".json").read_text())["manifest"], indent=1))
