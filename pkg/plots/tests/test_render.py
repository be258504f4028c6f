import os
import subprocess
import sys

import pytest

from symcone_plots.render import (
    FigureSpec,
    RenderError,
    build_levelcurve_figure,
    build_regret_figure,
    build_svm2d_figure,
    discover_inputs,
    render_levelcurves,
    render_regret,
    render_svm2d,
)
from symcone_plots.cli import main


def _symcone(*args: str) -> None:
    # The plotting package talks to the experiment tool only through its
    # command line and output files.
    subprocess.run([sys.executable, "-m", "symcone.cli", *args], check=True)


@pytest.fixture(scope="session")
def harness_outputs(tmp_path_factory):
    root = tmp_path_factory.mktemp("harness")
    cone = root / "cone"
    curves = root / "curves"
    game = root / "game"
    _symcone(
        "regret-cone", "--seed", "3", "--out", str(cone), "--preset", "orthant5-soc5",
        "--instances", "8", "--horizon", "128",
    )
    _symcone("level-curves", "--seed", "3", "--out", str(curves), "--resolution", "41")
    _symcone(
        "svm-game", "--seed", "3", "--out", str(game), "--dims", "2", "3",
        "--horizons", "60", "--instances", "2", "--n-points", "150",
    )
    return {"cone": cone, "curves": curves, "game": game}


# ---------------------------------------------------------------------------
# Regret figures
# ---------------------------------------------------------------------------


def test_regret_figure_elements(harness_outputs):
    inputs = discover_inputs("regret", str(harness_outputs["cone"]))
    fig = build_regret_figure(FigureSpec("regret", inputs, "unused"))
    ax = fig.axes[0]
    # 8 translucent instance curves plus exactly one bound curve.
    assert len(ax.lines) == 8 + 1
    bound = ax.lines[-1]
    regret_final = max(line.get_ydata()[-1] for line in ax.lines[:-1])
    assert bound.get_ydata()[-1] > regret_final


def test_regret_files_written(harness_outputs, tmp_path):
    inputs = discover_inputs("regret", str(harness_outputs["cone"]))
    paths = render_regret(FigureSpec("regret", inputs, str(tmp_path / "regret")))
    assert sorted(os.path.splitext(p)[1] for p in paths) == [".png", ".svg"]
    for p in paths:
        assert os.path.getsize(p) > 0


def test_regret_requires_instances(tmp_path):
    with pytest.raises(RenderError):
        build_regret_figure(FigureSpec("regret", (), str(tmp_path / "x")))
    with pytest.raises(RenderError):
        build_regret_figure(
            FigureSpec("regret", (str(tmp_path / "missing.csv"),), str(tmp_path / "x"))
        )


def test_regret_rejects_malformed_csv(tmp_path):
    bad = tmp_path / "instance_000.csv"
    bad.write_text("a,b\n1,2\n")
    with pytest.raises(RenderError):
        build_regret_figure(FigureSpec("regret", (str(bad),), str(tmp_path / "x")))


# ---------------------------------------------------------------------------
# Level curves
# ---------------------------------------------------------------------------


def test_levelcurve_minima(harness_outputs):
    inputs = discover_inputs("levelcurve", str(harness_outputs["curves"]))
    fig = build_levelcurve_figure(FigureSpec("levelcurve", inputs, "unused"))
    # Two contour panels; the divergence minimum marker sits at the reference
    # point and the entropy minimum at the slice center.
    titles = [ax.get_title() for ax in fig.axes if ax.get_title()]
    assert any("entropy" in t and "(0.00, 0.00)" in t for t in titles)
    assert any("divergence" in t for t in titles)

    # Numeric check straight from the marker coordinates.
    markers = [
        line for ax in fig.axes for line in ax.lines if line.get_marker() == "*"
    ]
    coords = sorted((float(m.get_xdata()[0]), float(m.get_ydata()[0])) for m in markers)
    assert coords[0] == (0.0, 0.0)
    ref = coords[1]
    assert abs(ref[0] - 0.21) <= 0.013 and abs(ref[1] - 0.28) <= 0.013  # one grid cell


def test_levelcurve_files(harness_outputs, tmp_path):
    inputs = discover_inputs("levelcurve", str(harness_outputs["curves"]))
    paths = render_levelcurves(FigureSpec("levelcurve", inputs, str(tmp_path / "lc")))
    for p in paths:
        assert os.path.getsize(p) > 0


def test_levelcurve_rejects_wrong_columns(tmp_path):
    bad = tmp_path / "level_curves.csv"
    bad.write_text("x,y\n0,0\n")
    with pytest.raises(RenderError):
        build_levelcurve_figure(FigureSpec("levelcurve", (str(bad),), "unused"))


# ---------------------------------------------------------------------------
# 2-D classifier figures
# ---------------------------------------------------------------------------


def test_svm2d_figure(harness_outputs, tmp_path):
    games = discover_inputs("svm2d", str(harness_outputs["game"]))
    two_d = [p for p in games if "_d2_" in os.path.basename(p) or "d2" in os.path.basename(p)]
    assert two_d
    fig = build_svm2d_figure(FigureSpec("svm2d", (two_d[0],), "unused"))
    ax = fig.axes[0]
    assert "cosine" in ax.get_title()
    assert len(ax.collections) >= 1  # point cloud
    assert len(ax.texts) >= 2  # two direction arrows (annotations)
    paths = render_svm2d(FigureSpec("svm2d", (two_d[0],), str(tmp_path / "svm")))
    for p in paths:
        assert os.path.getsize(p) > 0


def test_svm2d_rejects_higher_dimensions(harness_outputs):
    games = discover_inputs("svm2d", str(harness_outputs["game"]))
    three_d = [p for p in games if "d3" in os.path.basename(p)]
    assert three_d
    with pytest.raises(RenderError):
        build_svm2d_figure(FigureSpec("svm2d", (three_d[0],), "unused"))


def test_svm2d_missing_file_errors(tmp_path):
    with pytest.raises(RenderError):
        build_svm2d_figure(FigureSpec("svm2d", (str(tmp_path / "game.json"),), "unused"))


# ---------------------------------------------------------------------------
# Invariants and the command line
# ---------------------------------------------------------------------------


def test_rendering_never_mutates_inputs(harness_outputs, tmp_path):
    inputs = discover_inputs("regret", str(harness_outputs["cone"]))
    before = {p: open(p, "rb").read() for p in inputs}
    render_regret(FigureSpec("regret", inputs, str(tmp_path / "r")))
    after = {p: open(p, "rb").read() for p in inputs}
    assert before == after


def test_rerendering_is_idempotent(harness_outputs, tmp_path):
    inputs = discover_inputs("levelcurve", str(harness_outputs["curves"]))
    first = render_levelcurves(FigureSpec("levelcurve", inputs, str(tmp_path / "lc")))
    snapshot = {p: open(p, "rb").read() for p in first}
    second = render_levelcurves(FigureSpec("levelcurve", inputs, str(tmp_path / "lc")))
    assert first == second
    for p in second:
        assert open(p, "rb").read() == snapshot[p]


def test_cli_renders_all_kinds(harness_outputs, tmp_path):
    out = tmp_path / "figs"
    assert main(["regret", "--in", str(harness_outputs["cone"]), "--out", str(out)]) == 0
    assert main(["levelcurve", "--in", str(harness_outputs["curves"]), "--out", str(out)]) == 0
    # The classifier command picks out the 2-D games and skips the d=3 trace.
    assert main(["svm2d", "--in", str(harness_outputs["game"]), "--out", str(out)]) == 0
    assert (out / "regret.png").exists() and (out / "regret.svg").exists()
    assert (out / "level_curves.png").exists()
    assert list(out.glob("game_d2_*.png"))
    assert not list(out.glob("game_d3_*.png"))


def test_cli_empty_directory_errors(tmp_path, capsys):
    assert main(["regret", "--in", str(tmp_path), "--out", str(tmp_path)]) == 1
    assert "no regret inputs" in capsys.readouterr().err
