"""Delimited sample output and matplotlib figure rendering.

CSV files carry a two-column header (``x,f(x)`` or ``x,S_f(x)``) and one
row per sample with shortest round-trip numerals.  Figures are rendered
with matplotlib at 640x480 (6.4 x 4.8 inches, 100 dpi), a single
polyline over the samples and, where it makes sense, the diagonal in
grey.  Figures are presentational only; nothing asserts on them.
"""

from __future__ import annotations

import math
from pathlib import Path

from .errors import DomainViolation
from .expr import FunctionExpr
from .interval import Interval
from .jets import eval_point

FIG_SIZE = (6.4, 4.8)  # inches at 100 dpi = 640x480
SAMPLES = 512


def sample_function(f: FunctionExpr, window: Interval, n: int = SAMPLES,
                    transform=None) -> list[tuple[float, float]]:
    """n uniform samples of f (or transform(f, x)) over the window."""
    rows: list[tuple[float, float]] = []
    for i in range(n):
        x = window.lo + (window.width * i) / (n - 1)
        try:
            y = eval_point(f, x) if transform is None else transform(f, x)
        except DomainViolation:
            continue
        if math.isfinite(y):
            rows.append((x, y))
    return rows


def write_csv(path: str | Path, rows: list[tuple[float, float]],
              header: tuple[str, str] = ("x", "f(x)")) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{header[0]},{header[1]}\n")
        for x, y in rows:
            fh.write(f"{x!r},{y!r}\n")


def render_figure(path: str | Path, rows: list[tuple[float, float]],
                  title: str = "", diagonal: bool = True,
                  ylabel: str = "f(x)") -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=FIG_SIZE, dpi=100)
    xs = [r[0] for r in rows]
    ys = [r[1] for r in rows]
    if diagonal and xs:
        lo, hi = min(xs), max(xs)
        ax.plot([lo, hi], [lo, hi], color="0.7", linewidth=1.0, zorder=1)
    ax.plot(xs, ys, color="C0", linewidth=1.5, zorder=2)
    ax.set_xlabel("x")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.25)
    fmt = path.suffix.lstrip(".").lower() or "svg"
    fig.savefig(path, format=fmt)
    plt.close(fig)
