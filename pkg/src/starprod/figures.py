"""Matplotlib renderers for the CLI report paths.

Figures are written next to the delimited output with pinned PNG metadata
so identical runs produce identical bytes.
"""
from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

__all__ = ["save_sweep_figure", "save_verify_figure", "save_star_figure"]

_META = {"Software": "starprod"}


def _style(ax):
    ax.grid(True, alpha=0.3)
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)


def save_sweep_figure(path, hbars, residuals, slope):
    fig, ax = plt.subplots(figsize=(4.8, 3.4))
    hb = np.asarray(hbars, dtype=float)
    rs = np.asarray(residuals, dtype=float)
    ax.loglog(hb, rs, "o-", color="#1f6fb4", label="residual")
    if np.all(rs > 0):
        ref = rs[-1] * (hb / hb[-1]) ** 2
        ax.loglog(hb, ref, "--", color="#888888", label="slope 2 reference")
    ax.set_xlabel(r"$\hbar$")
    ax.set_ylabel("commutator residual")
    ax.set_title(f"fitted slope {slope:.3f}")
    ax.legend(frameon=False, fontsize=8)
    _style(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_META)
    plt.close(fig)


def save_verify_figure(path, rows):
    names = [r.name for r in rows]
    residuals = [max(r.residual, 1e-18) for r in rows]
    tols = [r.tolerance for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 0.5 * len(rows) + 1.6))
    y = np.arange(len(rows))
    colors = ["#2a9d5c" if r.status in ("pass", "report") else "#d03030" for r in rows]
    ax.barh(y, residuals, color=colors)
    for yi, t in zip(y, tols):
        if t is not None and t > 0:
            ax.plot([t, t], [yi - 0.4, yi + 0.4], color="black", lw=1)
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=7)
    ax.set_xscale("log")
    ax.set_xlabel("residual (bars) vs tolerance (ticks)")
    ax.invert_yaxis()
    _style(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_META)
    plt.close(fig)


def save_star_figure(path, rows):
    """Rows: (coords..., re, im, err, |C|). Scatter for points; image for grids."""
    arr = np.asarray([[*r] for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(4.8, 3.8))
    xs, ys = arr[:, 0], arr[:, 1]
    mag = np.hypot(arr[:, -4], arr[:, -3])
    n = int(round(np.sqrt(len(rows))))
    if n * n == len(rows) and len(rows) > 1:
        im = ax.imshow(
            mag.reshape(n, n).T,
            origin="lower",
            extent=[xs.min(), xs.max(), ys.min(), ys.max()],
            cmap="viridis",
        )
        fig.colorbar(im, ax=ax, label="|f*g|")
    else:
        sc = ax.scatter(xs, ys, c=mag, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="|f*g|")
    ax.set_xlabel("coordinate 1")
    ax.set_ylabel("coordinate 2")
    _style(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata=_META)
    plt.close(fig)
