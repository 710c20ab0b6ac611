"""Render every figure id from engine-emitted CSV; check the location curve."""

import csv
import subprocess
import sys
from pathlib import Path

import pytest

from spameq_plots import FIGURE_IDS, render
from spameq_plots.render import EmptySeries, SchemaMismatch, main


def engine(*args):
    result = subprocess.run(
        [sys.executable, "-m", "spameq.cli", *args], capture_output=True, text=True
    )
    assert result.returncode == 0, result.stderr
    return result


@pytest.fixture(scope="module")
def csv_dir(tmp_path_factory):
    """CSV inputs for all nine figures, produced by the engine CLI."""
    base = tmp_path_factory.mktemp("csv")
    sweep = base / "sweep.csv"
    engine("sweep-bmax", "--from", "200", "--to", "1600", "--step", "25",
           "--out", str(sweep))
    pfo = base / "pfo.csv"
    engine("pfo", "--n", "50,1", "--v", "0,1",
           "--from", "600", "--to", "1400", "--step", "200", "--out", str(pfo))
    cdf = base / "cdf.csv"
    engine("pfo-cdf", "--n", "500", "--v", "1", "--out", str(cdf))
    scale = base / "scale.csv"
    engine("scale", "--rule", "plateau,mmus", "--eta", "0.6",
           "--lambdas", "1,2,5,10", "--out", str(scale))
    scale_pfo = base / "scale_pfo.csv"
    engine("scale", "--rule", "pfo", "--n", "50,1", "--v", "0,1",
           "--lambdas", "1,2", "--out", str(scale_pfo))
    design = base / "design.csv"
    engine("design-bmax", "--eta", "0.6", "--from", "500", "--to", "1400",
           "--step", "25", "--out", str(design))
    return {
        "spam-volume": sweep,
        "welfare-levels": sweep,
        "welfare-deltas": sweep,
        "pfo-volume": pfo,
        "pfo-location": cdf,
        "pfo-welfare": pfo,
        "scaling": scale,
        "scaling-pfo": scale_pfo,
        "design-mmus": design,
    }


@pytest.mark.parametrize("figure_id", FIGURE_IDS)
def test_every_figure_renders(figure_id, csv_dir, tmp_path):
    out = tmp_path / f"{figure_id}.png"
    render(str(csv_dir[figure_id]), figure_id, str(out))
    assert out.exists()
    assert out.stat().st_size > 0


def test_rendering_is_deterministic(csv_dir, tmp_path):
    first = tmp_path / "one.png"
    second = tmp_path / "two.png"
    render(str(csv_dir["spam-volume"]), "spam-volume", str(first))
    render(str(csv_dir["spam-volume"]), "spam-volume", str(second))
    assert first.read_bytes() == second.read_bytes()


def test_location_curve_weakly_below_diagonal(csv_dir):
    # full-priority participation pushes spam toward the back of the block
    with open(csv_dir["pfo-location"], newline="") as handle:
        rows = [row for row in csv.DictReader(handle) if row["v"] == "1"]
    assert rows
    for row in rows:
        assert float(row["cum_spam_share"]) <= float(row["position"]) + 1e-9


def test_schema_mismatch_is_reported(csv_dir, tmp_path):
    out = tmp_path / "wrong.png"
    with pytest.raises(SchemaMismatch, match="missing columns"):
        render(str(csv_dir["pfo-location"]), "spam-volume", str(out))
    assert not out.exists()


def test_cli_exit_codes(csv_dir, tmp_path):
    out = tmp_path / "fig.png"
    assert main([str(csv_dir["scaling"]), "scaling", str(out)]) == 0
    assert out.exists()
    assert main([str(csv_dir["scaling"]), "spam-volume", str(out)]) == 2
    assert main([str(csv_dir["scaling"]), "no-such-figure", str(out)]) == 2
    assert main(["only-two", "args"]) == 2


def test_empty_series_writes_nothing(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("bmax,spam_count,rho_spam\n")
    out = tmp_path / "empty.png"
    with pytest.raises(EmptySeries):
        render(str(empty), "spam-volume", str(out))
    assert not out.exists()
    assert main([str(empty), "spam-volume", str(out)]) == 1


def test_unknown_figure_lists_known_ids(tmp_path):
    bogus = tmp_path / "any.csv"
    bogus.write_text("a\n1\n")
    with pytest.raises(SchemaMismatch, match="known:"):
        render(str(bogus), "mystery", str(tmp_path / "x.png"))


def test_all_nine_ids_registered():
    assert sorted(FIGURE_IDS) == sorted(
        [
            "spam-volume",
            "welfare-levels",
            "welfare-deltas",
            "pfo-volume",
            "pfo-location",
            "pfo-welfare",
            "scaling",
            "scaling-pfo",
            "design-mmus",
        ]
    )


def test_figures_directory_workflow(csv_dir, tmp_path):
    # end-to-end: render the full set the way the docs describe
    out_dir = tmp_path / "figures"
    out_dir.mkdir()
    for figure_id in FIGURE_IDS:
        target = out_dir / f"{figure_id}.png"
        assert main([str(csv_dir[figure_id]), figure_id, str(target)]) == 0
    assert len(list(out_dir.glob("*.png"))) == len(FIGURE_IDS)
