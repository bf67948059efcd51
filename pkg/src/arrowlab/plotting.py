"""Figures written by ``arrowlab ... --plot DIR`` (matplotlib, Agg backend)."""

from __future__ import annotations

import os

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def hasse_covers(L) -> list[tuple[int, int]]:
    """Cover pairs ``(x, y)`` with ``x < y`` and nothing strictly between."""
    E = np.arange(L.size)
    le = np.asarray(L.leq(E[:, None], E[None, :]), dtype=bool)
    lt = le & ~np.eye(L.size, dtype=bool)
    between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
    return [tuple(map(int, p)) for p in np.argwhere(lt & ~between)]


def plot_hasse(pref, path: str) -> str:
    plt = _pyplot()
    n = pref.size
    depth = np.array([0 if x == pref.cycle else len(pref.element(x).strict_pairs()) for x in range(n)])
    depth[pref.cycle] = depth.max() + 1
    pos = {}
    for d in np.unique(depth):
        row = np.flatnonzero(depth == d)
        for k, x in enumerate(row):
            pos[int(x)] = (k - (len(row) - 1) / 2, -d)
    fig, ax = plt.subplots(figsize=(max(6, 0.9 * max(np.bincount(depth))), 5))
    for x, y in hasse_covers(pref):
        (x0, y0), (x1, y1) = pos[x], pos[y]
        ax.plot([x0, x1], [y0, y1], color="0.6", lw=0.8, zorder=1)
    for x, (px, py) in pos.items():
        ax.text(px, py, pref.label(x), ha="center", va="center", fontsize=8,
                bbox={"boxstyle": "round", "fc": "white", "ec": "0.3"}, zorder=2)
    ax.set_axis_off()
    ax.set_title(f"Extended preference lattice, m={pref.alts.m} ({n} elements)")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _grid(rows, cols, cells, colors, title, path):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(2.2 + 2.6 * len(cols), 0.8 + 0.7 * len(rows)))
    ax.set_axis_off()
    table = ax.table(cellText=cells, rowLabels=rows, colLabels=cols, cellColours=colors,
                     cellLoc="center", loc="center")
    table.scale(1, 1.8)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_table2(rep, path: str) -> str:
    labels = {"always": "yes", "never": "no", "satisfiable": "Satisfiable"}
    rows = ["Quasi-Gödel sentence", "Quasi-consistency and quasi-completeness"]
    cols = ["No dictator", f"Dictator at {rep.i}"]
    cells, colors = [], []
    for row in ("godel", "both"):
        line, shade = [], []
        for col in ("no_dictator", "dictator"):
            c = rep.cell(row, col)
            line.append(f"{labels[c['claim']]} ({c['satisfied']}/{c['total']})")
            shade.append("#cdeccd" if c["verified"] else "#f4c7c3")
        cells.append(line)
        colors.append(shade)
    return _grid(rows, cols, cells, colors, "Overlap of the quasi conditions", path)


def plot_audit(report, path: str) -> str:
    flags = [("unanimity", report.unanimity), ("IIA", report.iia),
             ("unrestricted domain", report.unrestricted_domain),
             ("never cycles", report.never_cycles),
             ("non-dictatorship", report.dictator_at is None)]
    rows = [k for k, _ in flags]
    cells = [["holds" if v else "fails"] for _, v in flags]
    colors = [["#cdeccd" if v else "#f4c7c3"] for _, v in flags]
    return _grid(rows, [report.rule], cells, colors, f"Audit, m={report.m}, N={report.N}", path)


def save_figures(directory: str, *, pref=None, table2=None, audit=None) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    out = []
    if pref is not None:
        out.append(plot_hasse(pref, os.path.join(directory, f"hasse_m{pref.alts.m}.png")))
    if table2 is not None:
        out.append(plot_table2(table2, os.path.join(directory, "table2.png")))
    if audit is not None:
        out.append(plot_audit(audit, os.path.join(directory, "audit.png")))
    return out
