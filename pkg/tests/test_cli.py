import json

import pandas as pd
import pytest

from dyadpot.cli import EXIT_CONFIG, EXIT_NUMERICAL, build_parser, main


def _write_config(directory, name, data):
    path = directory / name
    path.write_text(json.dumps(data))
    return str(path)


def _log_text(log_dir):
    return "".join(path.read_text(encoding="utf-8") for path in log_dir.glob("*.log*"))


def _run(tmp_path, *args):
    return main(list(args), log_dir=str(tmp_path / "logs"))


def test_parser_rejects_unknown_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["spectrum", "--config", "x.json"])


def test_usage_error_returns_code(tmp_path):
    assert _run(tmp_path, "dyadic") == 2


def test_dyadic_command(tmp_path):
    config = _write_config(tmp_path, "square.json", {
        "shape": {"kind": "rectangle", "bounds": [0.0, 0.0, 1.0, 1.0]},
        "levels": {"min": 2, "max": 4},
        "root": {"level": 2, "index": [2, 2]},
    })
    out = tmp_path / "out"
    assert _run(tmp_path, "dyadic", "--config", config, "--output", str(out), "--svg") == 0
    frame = pd.read_csv(out / "dyadic_metrics.csv")
    assert list(frame["level"]) == [2, 3, 4]
    assert list(frame["n_cubes"]) == [4, 36, 196]
    assert (out / "region_level3.json").exists()
    assert (out / "dyadic.svg").read_text().startswith("<svg")


def test_np_spectrum_on_packaged_disk(tmp_path):
    out = tmp_path / "out"
    assert _run(tmp_path, "np-spectrum", "--config", "disk256.json", "--output", str(out)) == 0
    frame = pd.read_csv(out / "np_spectrum.csv")
    assert list(frame.columns) == ["level", "N_panels", "c_plus", "c_minus", "ext_norm_int", "ext_norm_ext",
                                   "calderon_residual"]
    assert frame["N_panels"][0] == 256
    assert frame["c_plus"][0] == pytest.approx(0.5, rel=0.02)


def test_solve_command(tmp_path):
    out = tmp_path / "out"
    assert _run(tmp_path, "solve", "--config", "solve_disk.json", "--output", str(out), "--ppm") == 0
    summary = json.loads((out / "solve_summary.json").read_text())
    assert summary["jumps"]["trace_residual"] <= 1e-4
    frame = pd.read_csv(out / "solve_field.csv")
    assert list(frame.columns) == ["x", "y", "u", "ux", "uy"]
    trace = pd.read_csv(out / "solve_trace.csv")
    assert list(trace.columns) == ["vertex_id", "value"]
    assert list(pd.read_csv(out / "solve_density.csv").columns) == ["panel_id", "value"]
    assert trace["value"].abs().max() > 0.0
    assert (out / "solve.ppm").exists()


def test_neumann_series_is_deterministic(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    for out in (first, second):
        assert _run(tmp_path, "neumann-series", "--config", "neumann_disk.json", "--output", str(out)) == 0
    text = (first / "neumann_series.csv").read_text()
    assert text == (second / "neumann_series.csv").read_text()
    frame = pd.read_csv(first / "neumann_series.csv")
    assert set(frame["trace"]) == {"cos_theta", "random_0", "random_1", "random_2"}
    assert len(frame) == 4 * 21
    assert (frame["error"] <= frame["remainder_bound"] * (1.0 + 1e-9) + 1e-12).all()


def test_cauchy_command(tmp_path):
    out = tmp_path / "out"
    assert _run(tmp_path, "cauchy", "--config", "cauchy_square.json", "--output", str(out)) == 0
    frame = pd.read_csv(out / "cauchy.csv")
    assert list(frame.columns) == ["x", "y", "re_phi", "im_phi", "cr_residual", "re_decomposition",
                                   "im_decomposition"]
    summary = json.loads((out / "cauchy_summary.json").read_text())
    assert summary["holomorphy_direct"] <= 1e-9


def test_converge_command(tmp_path):
    config = _write_config(tmp_path, "sweep.json", {
        "shape": {"kind": "square"},
        "levels": [2, 3],
        "root": {"level": 2, "index": [2, 2]},
        "data": {"trace": "re_z2"},
        "windows": {"interior": [0.4, 0.4, 0.6, 0.6], "exterior": [1.3, -0.2, 1.6, 0.2]},
        "pitch": 0.05,
        "terms": 5,
    })
    out = tmp_path / "out"
    assert _run(tmp_path, "converge", "--config", config, "--output", str(out)) == 0
    frame = pd.read_csv(out / "converge.csv")
    assert list(frame["level"]) == [2, 3]
    assert "diff_double_interior" in frame.columns
    assert json.loads((out / "converge.json").read_text())["config"]["levels"] == [2, 3]


def test_missing_config_exits_with_config_code(tmp_path):
    assert _run(tmp_path, "dyadic", "--config", "no_such_file.json", "--output", str(tmp_path)) == EXIT_CONFIG


def test_bad_shape_names_operation(tmp_path):
    config = _write_config(tmp_path, "bad.json", {"shape": {"kind": "ellipse"}, "level": 3})
    assert _run(tmp_path, "dyadic", "--config", config, "--output", str(tmp_path / "out")) == EXIT_CONFIG
    assert "cli.load_shape" in _log_text(tmp_path / "logs")


def test_bad_window_exits_with_config_code(tmp_path):
    config = _write_config(tmp_path, "window.json", {
        "shape": {"kind": "square"},
        "levels": [2, 3],
        "data": {"trace": "re_z2"},
        "windows": {"interior": [0.0, 0.0, 1.0, 1.0]},
    })
    assert _run(tmp_path, "converge", "--config", config, "--output", str(tmp_path / "out")) == EXIT_CONFIG
    assert "converge.run_sweep" in _log_text(tmp_path / "logs")


def test_non_finite_data_exits_with_numerical_code(tmp_path):
    # the point source pole sits on a mesh vertex
    config = _write_config(tmp_path, "pole.json", {
        "mesh": {"kind": "rectangle", "bounds": [3.0, 2.0, 4.0, 3.0], "panels_per_side": 2},
        "data": {"trace": "point_source"},
    })
    assert _run(tmp_path, "solve", "--config", config, "--output", str(tmp_path / "out")) == EXIT_NUMERICAL
    assert "boundary_space.sample_trace" in _log_text(tmp_path / "logs")
