"""Render verification reports as pass/fail grid figures next to CSV rows."""
from __future__ import annotations

import csv
from pathlib import Path

from .reports import CheckResult, report_csv_rows


def write_report_csv(results: list[CheckResult], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerows(report_csv_rows(results))
    return path


def render_report_grid(results: list[CheckResult], path: str | Path, title: str) -> Path:
    """One matplotlib panel per check name: green/red cells over the (r, s)
    grid, a one-cell strip for checks without a grid position."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.colors import ListedColormap
    from matplotlib.patches import Patch

    names = []
    for res in results:
        if res.name not in names:
            names.append(res.name)
    fig, axes = plt.subplots(1, len(names), figsize=(3.2 * len(names), 3.0), squeeze=False)
    cmap = ListedColormap(["#c62828", "#2e7d32"])
    for ax, name in zip(axes[0], names):
        cells = [res for res in results if res.name == name]
        gridded = [res for res in cells if res.r is not None and res.s is not None]
        if gridded:
            max_r = max(res.r for res in gridded)
            max_s = max(res.s for res in gridded)
            grid = [[0.5] * (max_s + 1) for _ in range(max_r + 1)]
            for res in gridded:
                grid[res.r][res.s] = 1.0 if res.passed else 0.0
            ax.imshow(grid, cmap=cmap, vmin=0.0, vmax=1.0, origin="lower")
            ax.set_xlabel("s")
            ax.set_ylabel("r")
            ax.set_xticks(range(max_s + 1))
            ax.set_yticks(range(max_r + 1))
        else:
            ok = all(res.passed for res in cells)
            ax.imshow([[1.0 if ok else 0.0]], cmap=cmap, vmin=0.0, vmax=1.0)
            ax.set_xticks([])
            ax.set_yticks([])
        ax.set_title(name, fontsize=9)
    fig.suptitle(title)
    fig.legend(
        handles=[Patch(color="#2e7d32", label="pass"), Patch(color="#c62828", label="fail")],
        loc="lower right",
    )
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
