"""
Level sweeps over dyadic approximations.

Each level is built independently (region, mesh, operators, data, potentials);
successive-difference columns are then filled in level order on the fixed
windows, where fields of different meshes can be compared directly.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from dyadpot.boundary.density import DensityFn, normal_flux, panel_average
from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.boundary.trace import TraceFn, sample_trace
from dyadpot.cauchy.diagnostics import holomorphy_residual
from dyadpot.cauchy.field import CauchyField, generalized_cauchy
from dyadpot.converge.config import SweepConfig
from dyadpot.converge.fields import complex_data, get_field
from dyadpot.dyadic.metrics import SetMetrics, set_convergence_metrics
from dyadpot.dyadic.region import DyadicRegion, default_root, dyadic_approximation
from dyadpot.errors import NonFinite
from dyadpot.logger import Logger as log
from dyadpot.operators.assemble import OperatorSet, assemble
from dyadpot.operators.calderon import calderon
from dyadpot.operators.neumann_poincare import contraction_constant, neumann_series, np_apply
from dyadpot.operators.steklov import extension_norms
from dyadpot.parallel import map_chunks
from dyadpot.transmission.solution import TransmissionSolution
from dyadpot.transmission.window import window_grid, window_seminorm

# holomorphy probes per window side
HOLOMORPHY_PROBES = 4


@dataclass
class LevelState:
    """Objects built for one level, kept for the cross-level columns"""
    region: DyadicRegion
    mesh: BoundaryMesh
    ops: OperatorSet
    solution: TransmissionSolution
    np_solution: TransmissionSolution
    cauchy: Optional[CauchyField] = None
    row: Dict = field(default_factory=dict)


@dataclass
class SweepReport:
    """One row per level, ordered by level"""
    config: SweepConfig
    rows: List[Dict]

    @property
    def levels(self) -> List[int]:
        return [row["level"] for row in self.rows]

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows], dtype=float)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def to_dict(self) -> Dict:
        return {"config": self.config.to_dict(), "rows": self.rows}

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.to_frame().astype(float).to_numpy())))


def _trace_data(config: SweepConfig, mesh: BoundaryMesh) -> TraceFn:
    if config.trace_field is None:
        return TraceFn(mesh, np.zeros(mesh.n_vertices))
    return sample_trace(mesh, get_field(config.trace_field))


def _density_data(config: SweepConfig, mesh: BoundaryMesh) -> DensityFn:
    if config.density_field is None:
        return DensityFn(mesh, np.zeros(mesh.n_panels))
    reference = get_field(config.density_field)
    if config.density_mode == "normal":
        return normal_flux(mesh, reference.gradient)
    return panel_average(mesh, reference)


def _holomorphy_points(config: SweepConfig) -> np.ndarray:
    windows = list(config.windows().values())
    points = []
    for x0, y0, x1, y1 in windows:
        pitch = max(x1 - x0, y1 - y0) / HOLOMORPHY_PROBES
        points.append(window_grid((x0, y0, x1, y1), pitch)[0])
    return np.concatenate(points, axis=0) if points else np.empty((0, 2))


def _build_level(config: SweepConfig, root, level: int, with_operators: bool = True) -> LevelState:
    log.header_message(f"level {level}")
    region = dyadic_approximation(config.shape, root, level)
    mesh = BoundaryMesh.from_region(region, merge_collinear=config.merge_collinear)
    ops = assemble(mesh, quadrature_order=config.quadrature_order)
    f = _trace_data(config, mesh)
    g = _density_data(config, mesh)
    state = LevelState(
        region=region,
        mesh=mesh,
        ops=ops,
        solution=TransmissionSolution(mesh, f, g),
        np_solution=TransmissionSolution(mesh, np_apply(ops, f), DensityFn(mesh, np.zeros(mesh.n_panels))),
    )
    state.row.update({"level": level, "n_cubes": len(region), "n_panels": mesh.n_panels})
    if with_operators:
        c_plus = contraction_constant(ops, "+")
        c_minus = contraction_constant(ops, "-")
        e_int, e_ext = extension_norms(ops)
        series = neumann_series(ops, f, "+", terms=config.terms, contraction=c_plus)
        state.row.update({
            "c_plus": c_plus.c,
            "c_minus": c_minus.c,
            "min_ratio_plus": c_plus.min_ratio,
            "ext_norm_int": e_int,
            "ext_norm_ext": e_ext,
            "neumann_remainder_bound": series.remainder_bound,
            "neumann_error": series.error(ops),
            "calderon_residual": calderon(ops).idempotence_residual(),
        })
    return state


def _add_cauchy(config: SweepConfig, state: LevelState, probes: np.ndarray) -> None:
    data = complex_data(config.cauchy_real, config.cauchy_imag)
    f = TraceFn(state.mesh, data(state.mesh.vertices))
    state.cauchy = generalized_cauchy(state.ops, f)
    row = {"decomposition_residual": 0.0, "holomorphy_direct": 0.0, "holomorphy_decomposition": 0.0}
    if len(probes):
        gap = np.abs(state.cauchy.decomposition(probes) - state.cauchy.direct(probes))
        scale = max(float(np.abs(f.values).max(initial=0.0)), np.finfo(float).tiny)
        row["decomposition_residual"] = float(gap.max()) / scale
        row["holomorphy_direct"] = holomorphy_residual(state.cauchy, probes, mode="direct")
        row["holomorphy_decomposition"] = holomorphy_residual(state.cauchy, probes, mode="decomposition")
    state.row.update(row)


def _build_levels(config: SweepConfig, with_operators: bool) -> List[LevelState]:
    root = config.root if config.root is not None else default_root(config.shape, config.levels[0])
    coarsest = dyadic_approximation(config.shape, root, config.levels[0])
    config.check_windows(coarsest)
    levels = list(config.levels)
    parts = map_chunks(lambda s: [_build_level(config, root, k, with_operators) for k in levels[s]],
                       len(levels), chunk_size=1)
    return [state for part in parts for state in part]


def _difference_columns(config: SweepConfig, states: List[LevelState], columns: Dict[str, tuple]) -> None:
    """Window seminorms of u_k - u_(k-1), or of u_k at the first level"""
    for name, window in config.windows().items():
        for column, (getter, part) in columns.items():
            previous = None
            for state in states:
                current = getter(state)
                value = window_seminorm(current, previous, window, config.pitch, part=part)
                state.row[f"{column}_{name}"] = value
                previous = current


def _geometry_columns(config: SweepConfig, states: List[LevelState]) -> None:
    window = config.window_for_metrics()
    previous = None
    for state in states:
        metrics: SetMetrics = set_convergence_metrics(state.region, config.shape, window, previous=previous)
        state.row.update({key: value for key, value in metrics.to_dict().items() if key != "level"})
        state.row["area"] = state.region.area
        previous = state.region


def _finish(config: SweepConfig, states: List[LevelState], operation: str) -> SweepReport:
    rows = []
    for state in states:
        row = {key: (float(value) if isinstance(value, (bool, np.bool_)) else value) for key, value in state.row.items()}
        rows.append(row)
    report = SweepReport(config=config, rows=rows)
    if not report.is_finite():
        raise NonFinite("sweep report holds non-finite entries", operation=operation)
    return report


def run_sweep(config: SweepConfig) -> SweepReport:
    """
    Geometry, operator and potential diagnostics for every level of a sweep.

    :param config: SweepConfig
    :return: SweepReport
    """
    log.parameter("sweep levels", list(config.levels))
    states = _build_levels(config, with_operators=True)
    _geometry_columns(config, states)
    _difference_columns(config, states, {
        "diff_single": (lambda s: s.solution, "single"),
        "diff_double": (lambda s: s.solution, "double"),
        "diff_np_double": (lambda s: s.np_solution, "double"),
    })
    if config.has_cauchy_data:
        _cauchy_columns(config, states)
    report = _finish(config, states, "converge.run_sweep")
    log.message(f"sweep over levels {list(config.levels)} finished with {len(report.rows)} rows")
    return report


def _cauchy_columns(config: SweepConfig, states: List[LevelState]) -> None:
    probes = _holomorphy_points(config)
    if not len(probes):
        log.warning("no windows configured; Cauchy residual columns stay at zero")
    for state in states:
        _add_cauchy(config, state, probes)
    _difference_columns(config, states, {
        "diff_cauchy_real": (lambda s: s.cauchy.real_part, "full"),
        "diff_cauchy_imag": (lambda s: s.cauchy.imag_part, "full"),
    })


def cauchy_sweep(config: SweepConfig) -> SweepReport:
    """
    Decomposition residuals and window differences of the generalized Cauchy
    integral along a sweep.

    :param config: SweepConfig with cauchy_real and/or cauchy_imag set
    :return: SweepReport
    """
    if not config.has_cauchy_data:
        raise ValueError("cauchy_sweep needs complex data (cauchy_real / cauchy_imag)")
    states = _build_levels(config, with_operators=False)
    _cauchy_columns(config, states)
    return _finish(config, states, "converge.cauchy_sweep")
