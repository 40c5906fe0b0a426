from pgstrat.model import SimConfig, run
from pgstrat.plotting import plot_grid, plot_z_series


def test_plots_are_written(tmp_path):
    a = run(SimConfig(seed=1)).z_series
    b = run(SimConfig(seed=2, initial_mix=1.0)).z_series
    p = plot_z_series(a, tmp_path / "z.png", title="cascade")
    assert p.read_bytes()[:4] == b"\x89PNG"
    g = plot_grid({"one": [a, a], "two": [b]}, tmp_path / "grid.png", ncols=3)
    assert g.stat().st_size > 1000
