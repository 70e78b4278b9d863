import json

import numpy as np
import pandas as pd
import pytest
import shapely
from PIL import Image

from dyadpot.boundary.density import DensityFn
from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.boundary.trace import TraceFn
from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.koch import KochPrefractal, KochSnowflake
from dyadpot.dyadic.shapes import Disk, OpenRectangle, SimplePolygon
from dyadpot.errors import ConfigError, ShapeSpecError
from dyadpot.export.save import (gray_levels, heat_colors, load_density_csv, load_trace_csv, save_csv,
                                 save_density_csv, save_json, save_ppm, save_svg, save_trace_csv)
from dyadpot.loader.config import DEFAULT_SEED, ConfigLoader, parse_config
from dyadpot.loader.shape import ShapeLoader


def test_packaged_square_config():
    config = ConfigLoader("square.json").config
    assert isinstance(config.shape, OpenRectangle)
    assert config.levels == tuple(range(2, 9))
    assert config.root == DyadicIndex(2, 2, 2)
    assert config.windows["metrics"] == (-0.25, -0.25, 1.25, 1.25)
    assert config.seed == DEFAULT_SEED


def test_packaged_koch_config():
    sweep = ConfigLoader("koch.json").config.sweep_config()
    assert isinstance(sweep.shape, KochSnowflake)
    assert sweep.levels == (3, 4, 5, 6, 7)
    assert sweep.density_mode == "normal"
    assert sweep.interior_window == (-0.1, -0.1, 0.1, 0.1)
    assert sweep.terms == 20


def test_packaged_mesh_configs():
    mesh, region = ConfigLoader("disk256.json").config.build_mesh()
    assert mesh.n_panels == 256
    assert region is None
    mesh, _ = ConfigLoader("cauchy_square.json").config.build_mesh()
    assert mesh.n_panels == 128
    config = ConfigLoader("neumann_disk.json").config
    assert (config.terms, config.random_traces, config.seed) == (20, 3, 42)


def test_region_mesh_from_config():
    config = parse_config({"shape": {"kind": "square"}, "level": 3, "root": {"level": 2, "index": [2, 2]}})
    mesh, region = config.build_mesh()
    assert region.level == 3
    assert mesh.n_panels == 24
    assert config.all_levels() == (3,)


def test_config_path_resolution(tmp_path, monkeypatch):
    path = tmp_path / "local.json"
    path.write_text(json.dumps({"shape": {"kind": "disk", "radius": 0.5}, "levels": [4, 3]}))
    monkeypatch.chdir(tmp_path)
    config = ConfigLoader("local.json").config
    assert isinstance(config.shape, Disk)
    assert config.levels == (4, 3)
    with pytest.raises(FileNotFoundError):
        ConfigLoader("missing.json")


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"shape\": ")
    with pytest.raises(ConfigError):
        ConfigLoader(str(path))


@pytest.mark.parametrize("raw", [
    [1, 2],
    {"level": "three"},
    {"windows": {"interior": [1.0, 0.0, 0.0, 1.0]}},
    {"mesh": {"kind": "sphere"}},
    {"root": {"level": 2}},
])
def test_malformed_configs(raw):
    with pytest.raises(ConfigError):
        parse_config(raw)


def test_missing_levels_and_shape():
    config = parse_config({})
    with pytest.raises(ConfigError):
        config.all_levels()
    with pytest.raises(ConfigError):
        config.require_shape("cli.main")


def test_shape_loader_kinds():
    assert isinstance(ShapeLoader({"kind": "koch", "generation": 2}).shape, KochPrefractal)
    polygon = ShapeLoader({"kind": "polygon", "vertices": [[0, 0], [2, 0], [0, 1]]}).shape
    assert isinstance(polygon, SimplePolygon)
    rect = ShapeLoader({"kind": "rectangle", "bounds": [-1, -1, 1, 2]}).shape
    assert rect.bounding_box() == (-1.0, -1.0, 1.0, 2.0)


def test_flat_shape_entries():
    disk = parse_config({"shape": "disk", "center": [0, 0], "radius": 2.0}).shape
    assert isinstance(disk, Disk)
    assert disk.radius == 2.0
    koch = parse_config({"shape": "koch", "side": 1.0, "generation": 6, "levels": [3, 4]}).shape
    assert isinstance(koch, KochPrefractal)
    assert koch.generation == 6
    assert isinstance(parse_config({"shape": "koch"}).shape, KochSnowflake)
    polygon = parse_config({"shape": "polygon", "vertices": [[0, 0], [2, 0], [0, 1]]}).shape
    assert isinstance(polygon, SimplePolygon)
    with pytest.raises(ShapeSpecError):
        parse_config({"shape": "ellipse", "radius": 1.0})


@pytest.mark.parametrize("spec", [{"kind": "ellipse"}, {"radius": 1.0}, {"kind": "polygon"},
                                  {"kind": "koch", "side": -1.0}])
def test_shape_loader_errors(spec):
    with pytest.raises(ShapeSpecError) as info:
        ShapeLoader(spec)
    assert "cli.load_shape" in info.value.describe()


def test_csv_keeps_every_digit(tmp_path):
    path = save_csv([{"level": 3, "value": 0.1}, {"level": 4, "value": 1.0 / 3.0}], tmp_path / "out" / "rows.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "level,value"
    assert lines[1] == "3,0.10000000000000001"
    assert float(lines[2].split(",")[1]) == 1.0 / 3.0
    frame = pd.read_csv(path)
    assert list(frame["level"]) == [3, 4]


def test_json_converts_numpy(tmp_path):
    path = save_json({"n": np.int64(3), "values": np.array([0.5, 1.5]), "flag": np.bool_(True)}, tmp_path / "a.json")
    assert json.loads(path.read_text()) == {"n": 3, "values": [0.5, 1.5], "flag": True}


def test_svg_output(tmp_path):
    path = save_svg([shapely.box(0, 0, 1, 1), shapely.LineString([(0, 0), (2, 1)])], tmp_path / "a.svg", size=400)
    text = path.read_text()
    assert text.startswith("<svg")
    assert 'width="400"' in text
    assert "<path" in text or "<polyline" in text


def test_heat_colors():
    colors = heat_colors(np.array([-2.0, 0.0, 2.0]))
    assert colors.tolist() == [[0, 0, 255], [255, 255, 255], [255, 0, 0]]


def test_gray_levels():
    assert gray_levels(np.array([-2.0, 0.0, 2.0])).tolist() == [[0, 0, 0], [128, 128, 128], [255, 255, 255]]
    assert gray_levels(np.full(2, 3.0)).tolist() == [[128, 128, 128]] * 2


def test_gray_ppm_is_default(tmp_path):
    grid = np.array([[0.0, 1.0], [np.nan, 3.0]])
    with Image.open(save_ppm(grid, tmp_path / "gray.ppm")) as image:
        assert image.getpixel((1, 1)) == (85, 85, 85)
        assert image.getpixel((1, 0)) == (255, 255, 255)
        assert image.getpixel((0, 0)) == (0, 0, 0)
        assert image.getpixel((0, 1)) == (0, 0, 0)
    with pytest.raises(ValueError):
        save_ppm(grid, tmp_path / "bad.ppm", colormap="jet")


def test_ppm_orientation_and_nan(tmp_path):
    grid = np.array([[1.0, 0.0, np.nan], [0.0, -1.0, 0.0]])
    path = save_ppm(grid, tmp_path / "grid.ppm", colormap="heat")
    with Image.open(path) as image:
        assert image.size == (3, 2)
        assert image.getpixel((0, 1)) == (255, 0, 0)
        assert image.getpixel((2, 1)) == (0, 0, 0)
        assert image.getpixel((1, 0)) == (0, 0, 255)


def test_trace_and_density_csv(tmp_path):
    mesh = BoundaryMesh.regular_polygon(12)
    rng = np.random.default_rng(42)
    f = TraceFn(mesh, rng.normal(size=mesh.n_vertices))
    g = DensityFn(mesh, rng.normal(size=mesh.n_panels) + 1j * rng.normal(size=mesh.n_panels))
    trace_path = save_trace_csv(f, tmp_path / "trace.csv")
    density_path = save_density_csv(g, tmp_path / "density.csv")
    assert trace_path.read_text().splitlines()[0] == "vertex_id,value"
    assert density_path.read_text().splitlines()[0] == "panel_id,value_real,value_imag"
    assert np.array_equal(load_trace_csv(mesh, trace_path).values, f.values)
    assert np.array_equal(load_density_csv(mesh, density_path).values, g.values)
    with pytest.raises(ConfigError):
        load_trace_csv(BoundaryMesh.regular_polygon(8), trace_path)
