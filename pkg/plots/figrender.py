"""Render the seven predefined CSV datasets to log-log figures.

Each recipe names the CSV columns it draws and whether a curve is a solid
result or a dashed reference. Rendering is a pure function of the CSV
contents: the same file yields the same curve count and axis ranges.
"""

from __future__ import annotations

import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

AXIS_MARGIN = 0.05

plt.rcParams.update({
    "figure.figsize": (7.0, 4.6),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 9,
})


class RenderError(Exception):
    """Bad input CSV or recipe mismatch."""


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    csv_path: str
    output_path: str
    ylabel: str
    styles: dict[str, str]  # column -> "solid" | "dashed"
    xlabel: str = "mean photon number"


# column draw order follows the CSV header; dashed curves are references
FIGURE_STYLES = {
    "fig1": ("quantum Fisher information", {
        "qfi_thermal": "dashed",
        "qfi_ideal_sub": "solid",
        "qfi_realistic": "solid",
    }),
    "fig2": ("homodyne Fisher information", {
        "fi_hom_thermal": "dashed",
        "fi_hom_subtracted": "solid",
        "fi_hom_added": "solid",
        "fi_hom_realistic": "solid",
        "qfi_thermal": "dashed",
    }),
    "fig3": ("heterodyne Fisher information", {
        "fi_het_thermal": "dashed",
        "fi_het_subtracted": "solid",
        "fi_het_added": "solid",
        "fi_het_realistic": "solid",
        "qfi_thermal": "dashed",
    }),
    "fig4": ("on-off Fisher information", {
        "fi_onoff_thermal": "dashed",
        "fi_onoff_subtracted": "solid",
        "fi_onoff_added": "solid",
        "fi_onoff_realistic": "solid",
        "ftot_photon_number": "solid",
        "qfi_thermal": "dashed",
    }),
    "fig5": ("total information, heterodyne branches", {
        "ftot_heterodyne": "solid",
        "fi_het_thermal": "dashed",
    }),
    "fig6": ("total information, on-off branches", {
        "ftot_onoff": "solid",
        "fi_onoff_thermal": "dashed",
        "fi_het_thermal": "dashed",
    }),
    "fig7": ("information-cost rate", {
        "rate_ps": "solid",
        "rate_0": "dashed",
    }),
}


def recipe_for(figure_id: str, csv_path: str, output_path: str) -> FigureRecipe:
    if figure_id not in FIGURE_STYLES:
        raise RenderError(f"unknown figure {figure_id!r}; expected one of {sorted(FIGURE_STYLES)}")
    ylabel, styles = FIGURE_STYLES[figure_id]
    return FigureRecipe(figure_id, csv_path, output_path, ylabel, styles)


def load_columns(recipe: FigureRecipe) -> dict[str, list[float]]:
    """Read the CSV and pull the lambda column plus every styled column."""
    try:
        with open(recipe.csv_path, newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise RenderError(f"cannot read {recipe.csv_path!r}: {exc}") from exc
    if not rows:
        raise RenderError(f"{recipe.csv_path}: empty file")
    header, body = rows[0], rows[1:]
    if not body:
        raise RenderError(f"{recipe.csv_path}: no data rows")
    missing = [c for c in ["lambda", *recipe.styles] if c not in header]
    if missing:
        raise RenderError(f"{recipe.csv_path}: missing columns {missing}")
    index = {name: header.index(name) for name in ["lambda", *recipe.styles]}
    data: dict[str, list[float]] = {name: [] for name in index}
    for row in body:
        for name, i in index.items():
            data[name].append(float(row[i]))
    return data


def build_figure(recipe: FigureRecipe):
    """Draw the figure; split out from :func:`render` so structure (axes,
    curve count) can be inspected without touching the filesystem."""
    data = load_columns(recipe)
    fig, ax = plt.subplots()
    lam = data["lambda"]
    for name, style in recipe.styles.items():
        if style == "dashed":
            ax.plot(lam, data[name], linestyle="--", color="gray", label=name)
        else:
            ax.plot(lam, data[name], linestyle="-", label=name)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.margins(AXIS_MARGIN)
    ax.set_xlabel(recipe.xlabel)
    ax.set_ylabel(recipe.ylabel)
    ax.legend()
    fig.tight_layout()
    return fig, ax


def render(recipe: FigureRecipe) -> Path:
    fig, _ = build_figure(recipe)
    out = Path(recipe.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 3:
        print("usage: render <figure_id> <csv> <output-image>", file=sys.stderr)
        return 1
    figure_id, csv_path, output_path = argv
    try:
        out = render(recipe_for(figure_id, csv_path, output_path))
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
