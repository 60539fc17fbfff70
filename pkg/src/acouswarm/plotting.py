"""SVG line plots rendered from emitted CSV files."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .reports import read_csv  # noqa: E402

plt.rcParams["svg.hashsalt"] = "acouswarm"


@dataclass(frozen=True)
class PlotSpec:
    x: str
    y: tuple[str, ...]
    group: str | None = None  # one line per distinct value of this column
    logx: bool = True
    logy: bool = True
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    vline: float | None = None  # x position of a vertical rule
    x_scale: float = 1.0  # display multiplier, e.g. 1e-3 for Hz -> kHz
    y_scale: float = 1.0


def emit_plot(csv_path: Path, spec: PlotSpec, svg_path: Path) -> Path:
    data = read_csv(csv_path)
    for col in (spec.x, *spec.y, *([spec.group] if spec.group else [])):
        if col not in data:
            raise KeyError(f"{csv_path}: missing column {col!r}")
    x = [float(v) * spec.x_scale for v in data[spec.x]]
    fig, ax = plt.subplots(figsize=(6, 4))
    groups = sorted(set(data[spec.group]), key=float) if spec.group else [None]
    for g in groups:
        idx = [i for i in range(len(x)) if g is None or data[spec.group][i] == g]
        for col in spec.y:
            ys = [float(data[col][i]) * spec.y_scale for i in idx]
            xs = [x[i] for i in idx]
            keep = [(a, b) for a, b in zip(xs, ys) if (not spec.logy or b > 0) and (not spec.logx or a > 0)]
            if not keep:
                continue
            label = col if g is None else f"{spec.group}={float(g):g}" + ("" if len(spec.y) == 1 else f" {col}")
            ax.plot(*zip(*keep), label=label)
    if spec.vline is not None:
        ax.axvline(spec.vline * spec.x_scale, color="k", linestyle="--", linewidth=1)
    ax.set_xscale("log" if spec.logx else "linear")
    ax.set_yscale("log" if spec.logy else "linear")
    ax.set_xlabel(spec.xlabel or spec.x)
    ax.set_ylabel(spec.ylabel or ", ".join(spec.y))
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(fontsize="small")
    fig.tight_layout()
    svg_path = Path(svg_path)
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return svg_path
