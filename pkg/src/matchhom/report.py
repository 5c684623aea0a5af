"""Figure rendering for the report paths.

The table and inequality commands can render their delimited output as a
matplotlib figure next to it: the homology table as a grid of group labels
(torsion rows highlighted), the GF(3) dimension table as growth curves.
matplotlib is imported lazily with the Agg backend so headless runs work.
"""

from __future__ import annotations


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_table_figure(table: dict, path) -> None:
    """Grid of group strings per (n, d), highlighting torsion cells."""
    plt = _plt()
    rows = table["rows"]
    degrees = sorted({rec["degree"] for row in rows for rec in row["records"]
                      if rec["free_rank"] or rec["torsion"]})
    if not degrees:
        degrees = [0]
    fig, ax = plt.subplots(
        figsize=(1.6 + 1.35 * len(degrees), 0.9 + 0.42 * len(rows)))
    ax.set_axis_off()
    which = "M_n" if table["which"] == "mn" else "M_n - e"
    ax.set_title(f"Reduced homology of {which} over {table['ring']}")
    cell_text, cell_colors = [], []
    for row in rows:
        by_deg = {rec["degree"]: rec for rec in row["records"]}
        line, colors = [], []
        for d in degrees:
            rec = by_deg.get(d)
            if rec is None or (rec["free_rank"] == 0 and not rec["torsion"]):
                line.append("-")
                colors.append("white")
            else:
                line.append(rec["group"])
                colors.append("#ffe8c8" if rec["torsion"] else "#e8f0fe")
        cell_text.append(line)
        cell_colors.append(colors)
    tab = ax.table(
        cellText=cell_text,
        cellColours=cell_colors,
        rowLabels=[f"n={row['n']}" for row in rows],
        colLabels=[f"d={d}" for d in degrees],
        loc="center",
        cellLoc="center",
    )
    tab.auto_set_font_size(False)
    tab.set_fontsize(9)
    tab.scale(1.0, 1.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_inequality_figure(report: dict, path) -> None:
    """GF(3) dimensions and their recursion bounds per degree."""
    plt = _plt()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    by_d: dict[int, list] = {}
    for row in report["rows"]:
        if row["beta"] or row["alpha"]:
            by_d.setdefault(row["d"], []).append(row)
    for d, rows in sorted(by_d.items()):
        ns = [r["n"] for r in rows]
        ax.plot(ns, [r["beta"] for r in rows], "o-", label=f"dim H_{d} (full)")
        ax.plot(ns, [r["alpha"] for r in rows], "s--",
                label=f"dim H_{d} (minus edge)")
    ax.set_xlabel("n")
    ax.set_ylabel("dimension over GF(3)")
    ax.set_yscale("symlog")
    ax.set_title("GF(3) homology dimensions and recursion data")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
