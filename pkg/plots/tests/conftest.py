"""Fixtures: produce the CSV inputs through the CLI, the only interface the
renderer consumes."""

import subprocess
import sys
from pathlib import Path

import pytest

PLOTS_DIR = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(PLOTS_DIR))

FIGS = [f"fig{i}" for i in range(1, 8)]


@pytest.fixture(scope="session")
def figure_csvs(tmp_path_factory) -> dict[str, Path]:
    outdir = tmp_path_factory.mktemp("csv")
    paths = {}
    for fig in FIGS:
        out = outdir / f"{fig}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "thermosub", "figure", fig,
             "--grid", "0.05:20:8", "--out", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, f"{fig}: {proc.stderr}"
        paths[fig] = out
    return paths
