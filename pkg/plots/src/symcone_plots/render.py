"""Render experiment output files into publication-style figures.

Consumes the CSV/JSON dialects written by the ``symcone`` harness and nothing
else; rendering never mutates the input files, and re-rendering a spec
produces the same images. Every figure is written as both PNG and SVG.
"""

from __future__ import annotations

import csv
import glob
import json
import math
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")  # batch tool; render off-screen

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams["svg.hashsalt"] = "symcone-plots"  # deterministic SVG ids

__all__ = ["FigureSpec", "render_regret", "render_levelcurves", "render_svm2d"]


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render.

    ``inputs`` lists the data files (regret: per-instance trajectory CSVs
    plus optionally an aggregate CSV; levelcurve: the level-curve CSV;
    svm2d: a game JSON). ``output_stem`` is the image path without extension.
    """

    kind: str
    inputs: tuple[str, ...]
    output_stem: str
    title: str = ""
    labels: tuple[str, str] = ("", "")


class RenderError(RuntimeError):
    """Missing or malformed input; no image is produced."""


def _require_inputs(spec: FigureSpec) -> None:
    if not spec.inputs:
        raise RenderError("no input files given")
    for path in spec.inputs:
        if not os.path.exists(path):
            raise RenderError(f"input file does not exist: {path}")


def _read_csv_columns(path: str) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RenderError(f"empty CSV: {path}") from None
        rows = list(reader)
    if not rows:
        raise RenderError(f"CSV has no data rows: {path}")
    cols = {}
    for j, name in enumerate(header):
        cols[name] = np.array(
            [float(r[j]) if r[j] != "" else math.nan for r in rows], dtype=float
        )
    return cols


def _save(fig, stem: str) -> list[str]:
    os.makedirs(os.path.dirname(stem) or ".", exist_ok=True)
    paths = [f"{stem}.png", f"{stem}.svg"]
    fig.savefig(paths[0])
    fig.savefig(paths[1], metadata={"Date": None})  # drop timestamp: idempotent bytes
    plt.close(fig)
    return paths


# ---------------------------------------------------------------------------
# Regret curves with the bound overlay
# ---------------------------------------------------------------------------


def build_regret_figure(spec: FigureSpec):
    """One translucent curve per instance plus the bound from the bound column."""
    _require_inputs(spec)
    instance_files = [p for p in spec.inputs if "aggregate" not in os.path.basename(p)]
    aggregate = [p for p in spec.inputs if "aggregate" in os.path.basename(p)]
    if not instance_files:
        raise RenderError("no instance CSVs among the inputs")

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for path in instance_files:
        cols = _read_csv_columns(path)
        if "regret" not in cols or "t" not in cols:
            raise RenderError(f"not a regret trajectory CSV: {path}")
        ax.plot(cols["t"], cols["regret"], color="tab:blue", alpha=0.25, linewidth=0.8)

    # The bound is read from a bound column, never recomputed here.
    if aggregate:
        agg = _read_csv_columns(aggregate[0])
        t, bound = agg["t"], agg["bound"]
    else:
        cols = _read_csv_columns(instance_files[0])
        key = "bound_doubling" if "bound_doubling" in cols else "bound_optimized"
        t, bound = cols["t"], cols[key]
    ax.plot(t, bound, color="tab:red", linewidth=1.8, label="theoretical bound")

    ax.set_xlabel(spec.labels[0] or "t")
    ax.set_ylabel(spec.labels[1] or "regret")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="upper left")
    fig.tight_layout()
    return fig


def render_regret(spec: FigureSpec) -> list[str]:
    return _save(build_regret_figure(spec), spec.output_stem)


# ---------------------------------------------------------------------------
# Entropy / divergence level curves over the half-disk slice
# ---------------------------------------------------------------------------


def build_levelcurve_figure(spec: FigureSpec):
    """Side-by-side contour panels of the phi and bregman columns."""
    _require_inputs(spec)
    cols = _read_csv_columns(spec.inputs[0])
    for key in ("u1", "u2", "phi", "bregman"):
        if key not in cols:
            raise RenderError("not a level-curve CSV (expected u1,u2,phi,bregman)")

    u1 = np.unique(cols["u1"])
    u2 = np.unique(cols["u2"])
    n1, n2 = len(u1), len(u2)
    if n1 * n2 != len(cols["u1"]):
        raise RenderError("level-curve CSV is not a full grid")
    phi = cols["phi"].reshape(n1, n2)
    breg = cols["bregman"].reshape(n1, n2)

    fig, axes = plt.subplots(1, 2, figsize=(10, 4.4))
    for ax, values, name in ((axes[0], phi, "entropy"), (axes[1], breg, "divergence")):
        cs = ax.contourf(u1, u2, values.T, levels=24, cmap="viridis")
        ax.contour(u1, u2, values.T, levels=12, colors="white", linewidths=0.4)
        fig.colorbar(cs, ax=ax, shrink=0.9)
        flat = np.nanargmin(values)
        i, j = np.unravel_index(flat, values.shape)
        ax.plot(u1[i], u2[j], "r*", markersize=10, label="minimum")
        ax.set_title(f"{name} (min at ({u1[i]:.2f}, {u2[j]:.2f}))")
        ax.set_xlabel(spec.labels[0] or "u1")
        ax.set_ylabel(spec.labels[1] or "u2")
        ax.set_aspect("equal")
        ax.legend(loc="lower left", fontsize=8)
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    return fig


def render_levelcurves(spec: FigureSpec) -> list[str]:
    return _save(build_levelcurve_figure(spec), spec.output_stem)


# ---------------------------------------------------------------------------
# 2-D margin-game classifier
# ---------------------------------------------------------------------------


def build_svm2d_figure(spec: FigureSpec):
    """Point cloud plus the generating and learned directions from a game JSON."""
    _require_inputs(spec)
    with open(spec.inputs[0]) as fh:
        game = json.load(fh)
    for key in ("points", "generating_direction", "learned_direction"):
        if key not in game:
            raise RenderError("not a game JSON (missing direction/point fields)")
    points = np.asarray(game["points"], dtype=float)
    w = np.asarray(game["generating_direction"], dtype=float)
    x_bar = np.asarray(game["learned_direction"], dtype=float)
    if points.shape[1] != 2 or w.shape != (2,) or x_bar.shape != (2,):
        raise RenderError("classifier figures need a 2-D instance")

    cosine = float(np.dot(w, x_bar) / (np.linalg.norm(w) * np.linalg.norm(x_bar)))

    fig, ax = plt.subplots(figsize=(5.2, 5.2))
    ax.scatter(points[:, 0], points[:, 1], s=6, color="0.6", alpha=0.5, label="data")
    ax.annotate(
        "", xy=tuple(w), xytext=(0, 0), arrowprops=dict(color="tab:orange", width=1.6)
    )
    ax.annotate(
        "", xy=tuple(x_bar), xytext=(0, 0), arrowprops=dict(color="tab:blue", width=1.6)
    )
    ax.plot([], [], color="tab:orange", label="generating direction")
    ax.plot([], [], color="tab:blue", label="learned direction")
    circle = plt.Circle((0, 0), 1.0, fill=False, color="0.8", linestyle="--")
    ax.add_patch(circle)
    ax.set_xlim(-1.15, 1.15)
    ax.set_ylim(-1.15, 1.15)
    ax.set_aspect("equal")
    ax.legend(loc="lower left", fontsize=8)
    ax.set_title(spec.title or f"cosine(learned, generating) = {cosine:.4f}")
    fig.tight_layout()
    return fig


def render_svm2d(spec: FigureSpec) -> list[str]:
    return _save(build_svm2d_figure(spec), spec.output_stem)


# ---------------------------------------------------------------------------
# Input discovery
# ---------------------------------------------------------------------------


def discover_inputs(kind: str, in_dir: str) -> tuple[str, ...]:
    """Locate the data files a figure kind expects inside a harness output dir."""
    if kind == "regret":
        files = sorted(glob.glob(os.path.join(in_dir, "instance_*.csv")))
        files += sorted(glob.glob(os.path.join(in_dir, "aggregate.csv")))
        return tuple(files)
    if kind == "levelcurve":
        return tuple(sorted(glob.glob(os.path.join(in_dir, "level_curves.csv"))))
    if kind == "svm2d":
        return tuple(sorted(glob.glob(os.path.join(in_dir, "game_*.json"))))
    raise RenderError(f"unknown figure kind {kind!r}")
