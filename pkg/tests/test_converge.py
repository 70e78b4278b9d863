import numpy as np
import pytest

from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.boundary.trace import TraceFn
from dyadpot.converge.config import SweepConfig
from dyadpot.converge.fields import FIELDS, complex_data, get_field
from dyadpot.converge.sweep import cauchy_sweep, run_sweep
from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.koch import KochSnowflake
from dyadpot.dyadic.region import default_root, dyadic_approximation
from dyadpot.dyadic.shapes import OpenRectangle
from dyadpot.errors import ConfigError, WindowViolation
from dyadpot.operators.assemble import assemble
from dyadpot.operators.neumann_poincare import contraction_constant, neumann_series

UNIT_SQUARE = OpenRectangle(0.0, 0.0, 1.0, 1.0)


def _square_config(**kwargs):
    settings = dict(
        shape=UNIT_SQUARE,
        levels=(4, 2, 3),
        root=DyadicIndex(2, 2, 2),
        trace_field="re_z2",
        density_field="point_source",
        density_mode="normal",
        interior_window=(0.4, 0.4, 0.6, 0.6),
        exterior_window=(1.3, -0.2, 1.6, 0.2),
        pitch=0.05,
        terms=10,
    )
    settings.update(kwargs)
    return SweepConfig(**settings)


@pytest.fixture(scope="module")
def square_report():
    return run_sweep(_square_config())


@pytest.mark.parametrize("name", sorted(FIELDS))
def test_reference_gradients(name):
    field = get_field(name)
    points = np.array([[0.3, 0.2], [-0.4, 0.7], [1.2, -0.5]])
    h = 1e-6
    ex, ey = np.array([h, 0.0]), np.array([0.0, h])
    fd = np.column_stack([(field(points + ex) - field(points - ex)) / (2 * h),
                          (field(points + ey) - field(points - ey)) / (2 * h)])
    assert np.allclose(field.gradient(points), fd, atol=1e-6)


def test_unknown_field():
    with pytest.raises(ConfigError):
        get_field("re_z9")


def test_complex_data():
    sample = complex_data("re_z2", "im_z2")
    assert sample(np.array([[1.0, 2.0]]))[0] == pytest.approx((1.0 + 2.0j) ** 2)
    assert complex_data(None, "im_z")(np.array([[1.0, 2.0]]))[0] == pytest.approx(2.0j)


def test_sweep_config_validation():
    config = _square_config()
    assert config.levels == (2, 3, 4)
    assert set(config.windows()) == {"interior", "exterior"}
    assert config.window_for_metrics() == pytest.approx((-0.125, -0.125, 1.125, 1.125))
    with pytest.raises(ValueError):
        _square_config(levels=())
    with pytest.raises(ValueError):
        _square_config(density_mode="tangent")


def test_square_sweep_rows(square_report):
    assert square_report.levels == [2, 3, 4]
    assert square_report.is_finite()
    h = 2.0 ** -np.array([2, 3, 4])
    assert square_report.column("n_cubes") == pytest.approx((2 ** np.array([2, 3, 4]) - 2) ** 2)
    assert square_report.column("area") == pytest.approx((1.0 - 2.0 * h) ** 2)
    assert square_report.column("hausdorff_boundary") == pytest.approx(h, rel=1e-9)
    assert np.all(square_report.column("compact_contained") == 1.0)
    assert np.all(square_report.column("c_plus") < 1.0)
    bound = square_report.column("neumann_remainder_bound")
    assert np.all(square_report.column("neumann_error") <= bound * (1.0 + 1e-9) + 1e-12)


def test_square_sweep_differences(square_report):
    frame = square_report.to_frame()
    for column in ("diff_single", "diff_double", "diff_np_double"):
        for window in ("interior", "exterior"):
            assert f"{column}_{window}" in frame.columns
    diff = square_report.column("diff_double_interior")
    # first entry is the seminorm of u_2 itself
    assert diff[2] < diff[1]
    assert square_report.to_dict()["config"]["levels"] == [2, 3, 4]


def test_interior_window_must_fit_coarsest_level():
    with pytest.raises(WindowViolation):
        run_sweep(_square_config(interior_window=(0.1, 0.1, 0.5, 0.5)))


def test_exterior_window_must_miss_shape():
    with pytest.raises(WindowViolation):
        run_sweep(_square_config(exterior_window=(0.9, 0.4, 1.3, 0.6)))


def test_cauchy_sweep_columns():
    report = cauchy_sweep(_square_config(levels=(2, 3), cauchy_real="re_z2", cauchy_imag="im_z2"))
    frame = report.to_frame()
    for column in ("decomposition_residual", "holomorphy_direct", "holomorphy_decomposition",
                   "diff_cauchy_real_interior", "diff_cauchy_imag_exterior"):
        assert column in frame.columns
    assert np.all(report.column("holomorphy_direct") <= 1e-9)
    assert "c_plus" not in frame.columns


def test_cauchy_sweep_needs_data():
    with pytest.raises(ValueError):
        cauchy_sweep(_square_config())


KOCH_LEVELS = (3, 4, 5, 6, 7)


@pytest.fixture(scope="module")
def koch_report():
    config = SweepConfig(
        shape=KochSnowflake(),
        levels=KOCH_LEVELS,
        trace_field="re_z2",
        density_field="re_z",
        density_mode="normal",
        interior_window=(-0.1, -0.1, 0.1, 0.1),
        exterior_window=(0.8, -0.2, 1.2, 0.2),
        pitch=0.02,
        terms=30,
        cauchy_real="re_z2",
        cauchy_imag="im_z2",
    )
    return run_sweep(config)


@pytest.mark.slow
def test_koch_sweep_geometry(koch_report):
    assert koch_report.is_finite()
    assert koch_report.levels == list(KOCH_LEVELS)
    assert np.all(np.diff(koch_report.column("n_panels")) > 0)
    assert np.all(koch_report.column("monotone_vs_previous") == 1.0)
    h = 2.0 ** -np.array(KOCH_LEVELS, dtype=float)
    assert np.all(koch_report.column("hausdorff_boundary") <= np.sqrt(2.0) * h)


@pytest.mark.slow
def test_koch_sweep_contraction(koch_report):
    c_plus = koch_report.column("c_plus")
    c_minus = koch_report.column("c_minus")
    min_ratio = koch_report.column("min_ratio_plus")
    assert np.all(c_plus < 1.0)
    assert c_plus.max() <= 0.99
    assert np.all(min_ratio >= 1.0 - c_plus - 0.05)
    assert np.all(min_ratio >= 1.0 - c_minus - 1e-9)
    errors = koch_report.column("neumann_error")
    assert np.all(errors <= koch_report.column("neumann_remainder_bound") * (1.0 + 1e-9) + 1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("column", ["diff_double_interior", "diff_single_interior"])
def test_koch_sweep_differences_shrink(koch_report, column):
    # the first row is the level-3 field itself, not a difference
    diffs = koch_report.column(column)[1:]
    assert np.all(diffs > 0.0)
    assert diffs[-1] <= diffs[-2]
    assert diffs[0] >= 4.0 * diffs[-1]


@pytest.mark.slow
def test_koch_sweep_holomorphy(koch_report):
    residual = koch_report.column("holomorphy_decomposition")
    assert np.all(koch_report.column("holomorphy_direct") <= 1e-9)
    # non-increasing up to a small relative slack
    assert np.all(np.diff(residual) <= 0.05 * residual[:-1])


@pytest.mark.slow
def test_koch_neumann_series_on_random_traces(rng):
    region = dyadic_approximation(KochSnowflake(), default_root(KochSnowflake(), 3), 7)
    mesh = BoundaryMesh.from_region(region)
    ops = assemble(mesh)
    contraction = contraction_constant(ops, "+")
    assert contraction.c <= 0.99
    for _ in range(10):
        f = TraceFn(mesh, rng.normal(size=mesh.n_vertices))
        for terms in (0, 10, 20, 30):
            series = neumann_series(ops, f, "+", terms=terms, contraction=contraction)
            assert series.error(ops) <= series.remainder_bound * (1.0 + 1e-9) + 1e-12
