"""Batch table reproduction, delimited output, and figure rendering.

The three named parameter points studied throughout the package:

    toral      (p0, p1, p3) = (1, 4/25, 7/10)
    boundary2  (p0, p1, p3) = (7/10, 17/25, 0)
    interior   (p0, p1, p3) = (1/10, 3/5, 3/4)

table_rows sweeps ring sizes at one of these points and reports the
Parrondo p1-interval at its (p0, p3) together with mu_B and mu_C.
Writers emit RFC-4180 style CSV (header row, CRLF) or a JSON envelope
{command, config, columns, rows} that validates against
schemas/cli-output.schema.json.  Figures are rendered straight to
files through the Agg canvas; plotting never blocks on a display.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

from .chain import Params
from .means import mean_mixed, mean_rate
from .region import parrondo_interval

TABLE_PRESETS: dict[str, tuple[Fraction, Fraction, Fraction]] = {
    "toral": (Fraction(1), Fraction(4, 25), Fraction(7, 10)),
    "boundary2": (Fraction(7, 10), Fraction(17, 25), Fraction(0)),
    "interior": (Fraction(1, 10), Fraction(3, 5), Fraction(3, 4)),
}

TABLE_COLUMNS = ["n", "p1_lower", "p1_upper", "interval_empty", "mu_b", "mu_c"]


def preset_params(name: str) -> Params:
    try:
        p0, p1, p3 = TABLE_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown table preset {name!r}; choose from {sorted(TABLE_PRESETS)}")
    return Params(p0, p1, p1, p3)


def table_rows(
    name: str,
    nmax: int,
    nmin: int = 3,
    exact: bool = False,
    tol: float = 1e-9,
) -> list[list]:
    """Interval endpoints and profit rates for ring sizes nmin..nmax."""
    params = preset_params(name)
    rows = []
    for n in range(nmin, nmax + 1):
        iv = parrondo_interval(n, params.p0, params.p3, tol=tol)
        mu_b = mean_rate(n, params, exact=exact)
        mu_c = mean_mixed(n, params, exact=exact)
        rows.append(
            [
                n,
                None if iv.empty else iv.lower,
                None if iv.empty else iv.upper,
                iv.empty,
                mu_b,
                mu_c,
            ]
        )
    return rows


def format_value(v, exact: bool = False) -> str:
    """Fixed textual form: 6 significant digits, or the full rational."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    if isinstance(v, Fraction):
        return str(v) if exact else f"{float(v):.6g}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.6g}"


def write_csv(stream, columns: list[str], rows: list[list], exact: bool = False) -> None:
    writer = csv.writer(stream)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v, exact) for v in row])


def csv_text(columns: list[str], rows: list[list], exact: bool = False) -> str:
    buf = io.StringIO()
    write_csv(buf, columns, rows, exact)
    return buf.getvalue()


def _json_value(v, exact: bool):
    if v is None or isinstance(v, bool):
        return v
    if isinstance(v, Fraction):
        return str(v) if exact else float(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, str):
        return v
    return float(v)


def json_envelope(command: str, config: dict, columns: list[str], rows: list[list], exact: bool = False) -> dict:
    return {
        "command": command,
        "config": {k: _json_value(v, True) for k, v in config.items()},
        "columns": list(columns),
        "rows": [[_json_value(v, exact) for v in row] for row in rows],
    }


def json_text(command: str, config: dict, columns: list[str], rows: list[list], exact: bool = False) -> str:
    return json.dumps(json_envelope(command, config, columns, rows, exact), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# figures


def _figure(width=6.4, height=4.8):
    from matplotlib.figure import Figure

    return Figure(figsize=(width, height))


def plot_table(rows: list[list], path: str, title: str) -> str:
    """Profit rates against ring size, one panel per game."""
    ns = [r[0] for r in rows]
    mu_b = [float(r[4]) for r in rows]
    mu_c = [float(r[5]) for r in rows]
    fig = _figure(6.4, 6.0)
    ax_b, ax_c = fig.subplots(2, 1, sharex=True)
    ax_b.plot(ns, mu_b, "o-", color="#2c3e50")
    ax_b.axhline(0.0, color="gray", lw=0.8, ls=":")
    ax_b.set_ylabel("game B rate")
    ax_b.set_title(title)
    ax_c.plot(ns, mu_c, "s-", color="#b03a2e")
    ax_c.axhline(0.0, color="gray", lw=0.8, ls=":")
    ax_c.set_ylabel("mixed game rate")
    ax_c.set_xlabel("ring size n")
    for ax in (ax_b, ax_c):
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    return path


def plot_surface(values: np.ndarray, grid: int, path: str, which: str, n: int, slices: int = 4) -> str:
    """Heatmap panels of one profit rate over (p0, p3) at several p1 levels."""
    cube = values[:, 3].reshape(grid, grid, grid)  # [p0, p3, p1]
    picks = np.linspace(0, grid - 1, num=min(slices, grid), dtype=int)
    fig = _figure(3.2 * len(picks), 3.6)
    axes = fig.subplots(1, len(picks), squeeze=False)[0]
    vmax = float(np.abs(cube).max()) or 1.0
    im = None
    for ax, k in zip(axes, picks):
        plane = cube[:, :, k].T  # p3 on the vertical axis
        im = ax.imshow(
            plane,
            origin="lower",
            extent=(0, 1, 0, 1),
            cmap="RdBu_r",
            vmin=-vmax,
            vmax=vmax,
            interpolation="nearest",
        )
        ax.contour(
            np.linspace(0, 1, grid), np.linspace(0, 1, grid), plane, levels=[0.0],
            colors="k", linewidths=0.8,
        )
        p1 = (2 * k + 1) / (2 * grid)
        ax.set_title(f"p1 = {p1:.3f}", fontsize=9)
        ax.set_xlabel("p0")
    axes[0].set_ylabel("p3")
    fig.suptitle(f"{which} on a ring of {n}")
    fig.colorbar(im, ax=list(axes), shrink=0.85)
    fig.savefig(path, dpi=150)
    return path


def plot_trace(turns: np.ndarray, sums: np.ndarray, path: str, title: str) -> str:
    """Cumulative ensemble profit along one simulated run."""
    fig = _figure()
    ax = fig.add_subplot(111)
    ax.plot(turns, sums, lw=0.8, color="#2c3e50")
    ax.axhline(0.0, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("turn")
    ax.set_ylabel("cumulative profit")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    return path
