"""Render theory figures from spameq CSV files.

Each figure id names the chart drawn from one subcommand's CSV output.
The scripts never recompute model quantities: they plot exactly the
columns the engine emitted. Rendering is deterministic (fixed style, no
timestamps), so re-rendering a CSV reproduces the image byte for byte.

Usage: spameq-plot CSV FIGURE_ID OUTPUT
"""

from __future__ import annotations

import csv
import sys
from typing import Callable, Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams.update(
    {
        "figure.dpi": 120,
        "savefig.dpi": 120,
        "svg.hashsalt": "spameq-plots",
        "font.size": 9,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "lines.linewidth": 1.6,
    }
)

Row = Dict[str, str]


class SchemaMismatch(Exception):
    """CSV header does not carry the columns the figure needs."""


class EmptySeries(Exception):
    """CSV has a header but no data rows."""


def _read_rows(csv_path: str, required: Sequence[str]) -> List[Row]:
    with open(csv_path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [name for name in required if name not in header]
        if missing:
            raise SchemaMismatch(
                f"missing columns: {', '.join(missing)}; found: {', '.join(header)}"
            )
        rows = list(reader)
    if not rows:
        raise EmptySeries("CSV contains no data rows")
    return rows


def _floats(rows: Sequence[Row], name: str) -> List[float]:
    return [float(row[name]) for row in rows]


def _groups(rows: Sequence[Row], keys: Sequence[str]) -> List[Tuple[Tuple[str, ...], List[Row]]]:
    order: List[Tuple[str, ...]] = []
    bucket: Dict[Tuple[str, ...], List[Row]] = {}
    for row in rows:
        key = tuple(row[k] for k in keys)
        if key not in bucket:
            bucket[key] = []
            order.append(key)
        bucket[key].append(row)
    return [(key, bucket[key]) for key in order]


def _render_spam_volume(rows: Sequence[Row]):
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.4, 6.0), sharex=True)
    bmax = _floats(rows, "bmax")
    top.plot(bmax, _floats(rows, "spam_count"), color="tab:red")
    top.set_ylabel("equilibrium spam count")
    bottom.plot(bmax, _floats(rows, "rho_spam"), color="tab:purple")
    bottom.set_ylabel("spam share of included gas")
    bottom.set_xlabel("block size")
    fig.suptitle("Spam volume and spam gas share vs block size")
    return fig


def _render_welfare_levels(rows: Sequence[Row]):
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.6))
    bmax = _floats(rows, "bmax")
    panels = (
        ("user welfare", "w_user", "w_user0"),
        ("validator revenue", "revenue", "revenue0"),
        ("network externality", "externality", "externality0"),
    )
    for ax, (title, spam_col, base_col) in zip(axes, panels):
        ax.plot(bmax, _floats(rows, spam_col), label="with spam")
        ax.plot(bmax, _floats(rows, base_col), "--", label="no spam")
        ax.set_title(title)
        ax.set_xlabel("block size")
    axes[0].legend()
    fig.tight_layout()
    return fig


def _render_welfare_deltas(rows: Sequence[Row]):
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.6))
    bmax = _floats(rows, "bmax")
    panels = (
        ("user welfare impact", "delta_w", "tab:blue"),
        ("validator revenue impact", "delta_r", "tab:green"),
        ("externality impact", "delta_e", "tab:orange"),
    )
    for ax, (title, col, color) in zip(axes, panels):
        ax.plot(bmax, _floats(rows, col), color=color)
        ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_title(title)
        ax.set_xlabel("block size")
    fig.tight_layout()
    return fig


def _render_pfo_volume(rows: Sequence[Row]):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (n, v), series in _groups(rows, ("n", "v")):
        style = "--" if n == "1" else "-"
        ax.plot(
            _floats(series, "bmax"),
            _floats(series, "total_spam"),
            style,
            label=f"n={n}, v={v}",
        )
    ax.set_xlabel("block size")
    ax.set_ylabel("equilibrium spam count")
    ax.set_title("Spam volume under priority-fee ordering")
    ax.legend()
    fig.tight_layout()
    return fig


def _render_pfo_location(rows: Sequence[Row]):
    fig, ax = plt.subplots(figsize=(5.4, 5.0))
    for (n, v), series in _groups(rows, ("n", "v")):
        ax.plot(
            _floats(series, "position"),
            _floats(series, "cum_spam_share"),
            label=f"n={n}, v={v}",
        )
    ax.plot([0.0, 1.0], [0.0, 1.0], "k--", linewidth=0.9, label="uniform")
    ax.set_xlabel("position within included gas")
    ax.set_ylabel("cumulative spam gas share")
    ax.set_title("Location of spam within the block")
    ax.legend()
    fig.tight_layout()
    return fig


def _render_pfo_welfare(rows: Sequence[Row]):
    fig, axes = plt.subplots(1, 4, figsize=(15.0, 3.6))
    panels = (
        ("user welfare", "w_user", "w_user0"),
        ("validator revenue", "revenue", "revenue0"),
        ("network externality", "externality", "externality0"),
        ("welfare + revenue", "w_plus_r", "w_plus_r0"),
    )
    groups = _groups(rows, ("n", "v"))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for ax, (title, spam_col, base_col) in zip(axes, panels):
        for color, ((n, v), series) in zip(colors, groups):
            bmax = _floats(series, "bmax")
            ax.plot(bmax, _floats(series, spam_col), color=color, label=f"v={v}")
            ax.plot(bmax, _floats(series, base_col), "--", color=color)
        ax.set_title(title)
        ax.set_xlabel("block size")
    axes[0].legend()
    fig.tight_layout()
    return fig


def _render_scaling(rows: Sequence[Row]):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (rule,), series in _groups(rows, ("rule",)):
        style = "--" if rule == "plateau" else "-"
        label = rule
        if rule == "mmus" and series[0].get("eta"):
            label = f"mmus (eta={series[0]['eta']})"
        ax.plot(_floats(series, "lam"), _floats(series, "rho_spam"), style, label=label)
    ax.set_xlabel("demand scale")
    ax.set_ylabel("spam share of included gas")
    ax.set_title("Spam share under demand scaling")
    ax.legend()
    fig.tight_layout()
    return fig


def _render_scaling_pfo(rows: Sequence[Row]):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (rule, n, v), series in _groups(rows, ("rule", "n", "v")):
        if rule == "pfo":
            style = "--" if n == "1" else "-"
            label = f"pfo n={n}, v={v}"
        else:
            style = "--"
            label = rule
        ax.plot(_floats(series, "lam"), _floats(series, "rho_spam"), style, label=label)
    ax.set_xlabel("demand scale")
    ax.set_ylabel("spam share of included gas")
    ax.set_title("Spam share under demand scaling and priority-fee ordering")
    ax.legend()
    fig.tight_layout()
    return fig


def _render_design_mmus(rows: Sequence[Row]):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(_floats(rows, "bmax"), _floats(rows, "m_user"), label="marginal user share")
    eta = float(rows[0]["eta"])
    star = float(rows[0]["bmax_star"])
    plateau = float(rows[0]["b_plat"])
    ax.axhline(eta, color="tab:gray", linestyle=":", label=f"target eta={eta:g}")
    ax.axvline(star, color="tab:red", linestyle="--", label=f"chosen bmax={star:g}")
    ax.axvline(plateau, color="tab:green", linestyle="--", label=f"plateau={plateau:g}")
    ax.set_xlabel("block size")
    ax.set_ylabel("user share of marginal capacity")
    ax.set_title("Block-size rule from the minimum marginal user share")
    ax.legend()
    fig.tight_layout()
    return fig


_FIGURES: Dict[str, Tuple[Tuple[str, ...], Callable]] = {
    "spam-volume": (("bmax", "spam_count", "rho_spam"), _render_spam_volume),
    "welfare-levels": (
        ("bmax", "w_user", "w_user0", "revenue", "revenue0", "externality", "externality0"),
        _render_welfare_levels,
    ),
    "welfare-deltas": (("bmax", "delta_w", "delta_r", "delta_e"), _render_welfare_deltas),
    "pfo-volume": (("bmax", "n", "v", "total_spam"), _render_pfo_volume),
    "pfo-location": (("n", "v", "position", "cum_spam_share"), _render_pfo_location),
    "pfo-welfare": (
        (
            "bmax", "n", "v", "w_user", "w_user0", "revenue", "revenue0",
            "externality", "externality0", "w_plus_r", "w_plus_r0",
        ),
        _render_pfo_welfare,
    ),
    "scaling": (("lam", "rule", "rho_spam"), _render_scaling),
    "scaling-pfo": (("lam", "rule", "n", "v", "rho_spam"), _render_scaling_pfo),
    "design-mmus": (("bmax", "m_user", "eta", "bmax_star", "b_plat"), _render_design_mmus),
}

FIGURE_IDS = tuple(_FIGURES)


def render(csv_path: str, figure_id: str, out_path: str) -> None:
    """Render one figure id from its CSV into ``out_path``.

    Raises SchemaMismatch or EmptySeries without writing anything when the
    CSV does not match the figure's subcommand output.
    """
    if figure_id not in _FIGURES:
        raise SchemaMismatch(
            f"unknown figure id {figure_id!r}; known: {', '.join(FIGURE_IDS)}"
        )
    required, builder = _FIGURES[figure_id]
    rows = _read_rows(csv_path, required)
    fig = builder(rows)
    try:
        if out_path.endswith(".png"):
            fig.savefig(out_path, metadata={"Software": "spameq-plots"})
        elif out_path.endswith(".pdf"):
            fig.savefig(out_path, metadata={"CreationDate": None})
        else:
            fig.savefig(out_path)
    finally:
        plt.close(fig)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if len(argv) != 3:
        print("usage: spameq-plot CSV FIGURE_ID OUTPUT", file=sys.stderr)
        print(f"figure ids: {', '.join(FIGURE_IDS)}", file=sys.stderr)
        return 2
    csv_path, figure_id, out_path = argv
    try:
        render(csv_path, figure_id, out_path)
    except SchemaMismatch as exc:
        print(f"schema mismatch: {exc}", file=sys.stderr)
        return 2
    except EmptySeries as exc:
        print(f"empty series: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
