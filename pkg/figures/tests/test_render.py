import subprocess
from pathlib import Path

import pytest

from nz_figures import FigureJob, SchemaError, render
from nz_figures.render import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    """Generate the three CSVs once through the primary CLI (the only
    interface this package consumes)."""
    out = tmp_path_factory.mktemp("csv")
    for fid, extra in ((1, []), (2, []), (3, ["--rel-tol", "1e-5"])):
        subprocess.run(
            ["nz", "figure", "--id", str(fid), "--out", str(out / f"fig{fid}.csv"),
             *extra],
            check=True, capture_output=True)
    return out


def test_fig1_renders_with_inset(csv_dir, tmp_path):
    job = FigureJob(str(csv_dir / "fig1.csv"), 1, str(tmp_path / "fig1.png"))
    summary = render(job)
    data = Path(job.out_path).read_bytes()
    assert data[:8] == PNG_MAGIC
    assert summary["main_points"] == 400
    assert summary["inset_points"] == 200
    # the inset spans [0, 3] in r/a, covering the cubic rise to the edge
    assert summary["inset_x_range"][0] == 0.0
    assert summary["inset_x_range"][1] == pytest.approx(3.0)


def test_fig2_renders_arrows(csv_dir, tmp_path):
    job = FigureJob(str(csv_dir / "fig2.csv"), 2, str(tmp_path / "fig2.png"),
                    arrow_stride=2)
    summary = render(job)
    assert Path(job.out_path).read_bytes()[:8] == PNG_MAGIC
    assert summary["grid_points"] == 41 * 41
    assert summary["arrows"] == 21 * 21


def test_fig3_five_markers_and_fit(csv_dir, tmp_path):
    job = FigureJob(str(csv_dir / "fig3.csv"), 3, str(tmp_path / "fig3.png"))
    summary = render(job)
    assert Path(job.out_path).read_bytes()[:8] == PNG_MAGIC
    assert summary["markers"] == 5
    # the re-fitted through-origin coefficient matches the CSV's fit column
    rows = (csv_dir / "fig3.csv").read_text().splitlines()[1:]
    z0, _, _, fit0 = rows[0].split(",")
    assert summary["fit_coefficient"] == pytest.approx(
        float(fit0) / float(z0) ** 2, rel=1e-9)


def test_rendering_is_deterministic(csv_dir, tmp_path):
    p1, p2 = tmp_path / "a.png", tmp_path / "b.png"
    render(FigureJob(str(csv_dir / "fig3.csv"), 3, str(p1)))
    render(FigureJob(str(csv_dir / "fig3.csv"), 3, str(p2)))
    assert p1.read_bytes() == p2.read_bytes()


def test_schema_mismatch_names_missing_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("r_over_b,wrong_name\n1.0,2.0\n")
    with pytest.raises(SchemaError, match="enclosed_charge"):
        render(FigureJob(str(bad), 1, str(tmp_path / "no.png")))


def test_cli_exit_codes(csv_dir, tmp_path):
    ok = main(["--id", "3", "--csv", str(csv_dir / "fig3.csv"),
               "--out", str(tmp_path / "cli3.png")])
    assert ok == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("Z,element\n2,He\n")
    assert main(["--id", "3", "--csv", str(bad),
                 "--out", str(tmp_path / "no.png")]) == 1


def test_wrong_figure_id_rejected(tmp_path):
    with pytest.raises(ValueError):
        FigureJob("x.csv", 4, "y.png")
