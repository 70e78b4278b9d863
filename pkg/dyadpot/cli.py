"""
Command line entry point.

    dyadpot <command> --config file.json [--output dir] [--svg] [--ppm] [--threads n]

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from dyadpot.boundary.density import DensityFn, normal_flux, panel_average
from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.boundary.trace import TraceFn, sample_trace
from dyadpot.cauchy.diagnostics import (
    MIN_PROBE_DISTANCE,
    boundary_distance,
    cauchy_riemann_defect,
    holomorphy_residual,
    np_cauchy_identity_check,
)
from dyadpot.cauchy.field import generalized_cauchy
from dyadpot.converge.fields import complex_data, get_field
from dyadpot.converge.sweep import cauchy_sweep, run_sweep
from dyadpot.dyadic.loops import region_polygon
from dyadpot.dyadic.metrics import set_convergence_metrics
from dyadpot.errors import ConfigError, DyadpotError, NumericalError
from dyadpot.export.save import (save_csv, save_density_csv, save_json, save_ppm, save_svg,
                                 save_trace_csv)
from dyadpot.loader.config import CommandConfig, ConfigLoader
from dyadpot.logger import Logger as log
from dyadpot.logger import setup_logging
from dyadpot.operators.assemble import assemble
from dyadpot.operators.calderon import calderon
from dyadpot.operators.neumann_poincare import contraction_constant, neumann_series
from dyadpot.operators.steklov import extension_norms
from dyadpot.parallel import set_threads
from dyadpot.project import __project__, __version__
from dyadpot.transmission.jumps import jump_check
from dyadpot.transmission.solution import solve_transmission
from dyadpot.transmission.window import window_grid

COMMANDS = ("dyadic", "solve", "np-spectrum", "neumann-series", "cauchy", "converge")

# pixels per side of PPM heat maps
PPM_RESOLUTION = 256

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=__project__, description="Dyadic approximation and layer potentials")
    parser.add_argument("--version", action="version", version=f"{__project__} {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="JSON configuration file")
    parser.add_argument("--output", default="output", help="output directory")
    parser.add_argument("--svg", action="store_true", help="also write SVG drawings of regions and meshes")
    parser.add_argument("--ppm", action="store_true", help="also write PPM heat maps of computed fields")
    parser.add_argument("--threads", type=int, default=1, help="worker pool size")
    return parser


def _trace(config: CommandConfig, mesh: BoundaryMesh) -> TraceFn:
    if config.trace_field is None:
        return TraceFn(mesh, np.zeros(mesh.n_vertices))
    return sample_trace(mesh, get_field(config.trace_field))


def _density(config: CommandConfig, mesh: BoundaryMesh) -> DensityFn:
    if config.density_field is None:
        return DensityFn(mesh, np.zeros(mesh.n_panels))
    reference = get_field(config.density_field)
    if config.density_mode == "normal":
        return normal_flux(mesh, reference.gradient)
    return panel_average(mesh, reference)


def _probe_points(config: CommandConfig) -> np.ndarray:
    """Explicit points, else cell midpoints of every configured window"""
    if config.points:
        return np.asarray(config.points, dtype=float)
    grids = [window_grid(rect, config.pitch)[0] for name, rect in sorted(config.windows.items()) if name != "metrics"]
    if not grids:
        raise ConfigError("configuration needs 'points' or 'windows'", operation="cli.main")
    return np.concatenate(grids, axis=0)


def _heat_grid(mesh: BoundaryMesh, evaluate: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Field values on a square pixel grid around the mesh, NaN on boundary pixels"""
    x0, y0, x1, y1 = mesh.polygon().bounds
    pad = 0.25 * max(x1 - x0, y1 - y0)
    side = max(x1 - x0, y1 - y0) + 2.0 * pad
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    h = side / PPM_RESOLUTION
    offsets = (np.arange(PPM_RESOLUTION) + 0.5) * h - 0.5 * side
    gx, gy = np.meshgrid(cx + offsets, cy + offsets)
    points = np.column_stack([gx.ravel(), gy.ravel()])
    values = np.full(len(points), np.nan)
    keep = boundary_distance(mesh, points) > 0.5 * h
    values[keep] = np.real(evaluate(points[keep]))
    return values.reshape(PPM_RESOLUTION, PPM_RESOLUTION)


def run_dyadic(config: CommandConfig, output: Path, svg: bool, ppm: bool) -> List[Path]:
    shape = config.require_shape("dyadic_geometry.dyadic_approximation")
    window = config.windows.get("metrics") or config.sweep_config().window_for_metrics()
    rows, written, previous, regions = [], [], None, []
    for level in config.all_levels():
        region = config.region(level)
        metrics = set_convergence_metrics(region, shape, window, previous=previous)
        row = {"level": level, "n_cubes": len(region), "area": region.area}
        row.update({key: value for key, value in metrics.to_dict().items() if key != "level"})
        rows.append(row)
        written.append(save_json(region.to_dict(), output / f"region_level{level}.json"))
        regions.append(region)
        previous = region
    written.append(save_csv(rows, output / "dyadic_metrics.csv"))
    if svg:
        finest = 2.0 ** -(max(config.all_levels()) + 3)
        geometries = [shape.polygon(finest)] + [region_polygon(r) for r in regions]
        written.append(save_svg(geometries, output / "dyadic.svg"))
    return written


def run_solve(config: CommandConfig, output: Path, svg: bool, ppm: bool) -> List[Path]:
    mesh, region = config.build_mesh()
    f, g = _trace(config, mesh), _density(config, mesh)
    sol = solve_transmission(mesh, f, g)
    report = jump_check(sol)
    summary = {"mesh": mesh.to_dict(), "jumps": report.to_dict()}
    written = [
        save_json(summary, output / "solve_summary.json"),
        save_trace_csv(f, output / "solve_trace.csv"),
        save_density_csv(g, output / "solve_density.csv"),
    ]
    if config.points or config.windows:
        sample = sol.sample(_probe_points(config))
        written.append(save_csv(sample.to_frame(), output / "solve_field.csv"))
    if svg:
        written.append(save_svg([mesh.polygon()] + ([region_polygon(region)] if region is not None else []),
                                output / "solve.svg"))
    if ppm:
        written.append(save_ppm(_heat_grid(mesh, sol.values), output / "solve.ppm"))
    return written


def _spectrum_row(level: int, mesh: BoundaryMesh, quadrature_order: int) -> Dict:
    ops = assemble(mesh, quadrature_order=quadrature_order)
    e_int, e_ext = extension_norms(ops)
    return {
        "level": level,
        "N_panels": mesh.n_panels,
        "c_plus": contraction_constant(ops, "+").c,
        "c_minus": contraction_constant(ops, "-").c,
        "ext_norm_int": e_int,
        "ext_norm_ext": e_ext,
        "calderon_residual": calderon(ops).idempotence_residual(),
    }


def run_np_spectrum(config: CommandConfig, output: Path, svg: bool, ppm: bool) -> List[Path]:
    meshes = []
    if config.mesh.kind == "region":
        for level in config.all_levels():
            meshes.append((level, config.build_mesh(level)[0]))
    else:
        meshes.append((config.level if config.level is not None else 0, config.build_mesh()[0]))
    rows = [_spectrum_row(level, mesh, config.quadrature_order) for level, mesh in meshes]
    written = [save_csv(rows, output / "np_spectrum.csv")]
    if svg:
        written.append(save_svg([mesh.polygon() for _, mesh in meshes], output / "np_spectrum.svg"))
    return written


def run_neumann_series(config: CommandConfig, output: Path, svg: bool, ppm: bool) -> List[Path]:
    mesh, _ = config.build_mesh()
    ops = assemble(mesh, quadrature_order=config.quadrature_order)
    contraction = contraction_constant(ops, config.sign)
    traces = []
    if config.trace_field is not None:
        traces.append((config.trace_field, _trace(config, mesh)))
    rng = np.random.default_rng(config.seed)
    for i in range(config.random_traces):
        traces.append((f"random_{i}", TraceFn(mesh, rng.standard_normal(mesh.n_vertices))))
    if not traces:
        raise ConfigError("neumann-series needs 'data.trace' or 'random_traces'", operation="cli.main")

    rows, final = [], None
    for name, f in traces:
        for terms in range(config.terms + 1):
            series = neumann_series(ops, f, config.sign, terms=terms, contraction=contraction)
            rows.append({
                "trace": name,
                "terms": terms,
                "c": series.c,
                "error": series.error(ops),
                "remainder_bound": series.remainder_bound,
            })
            if final is None and terms == config.terms:
                final = series
    written = [save_csv(rows, output / "neumann_series.csv")]
    first = traces[0][1]
    nodes = {
        "x": mesh.vertices[:, 0],
        "y": mesh.vertices[:, 1],
        "f": first.values,
        "partial_sum": final.partial_sum.values,
        "direct": final.direct.values,
    }
    written.append(save_csv([dict(zip(nodes, values)) for values in zip(*nodes.values())],
                            output / "neumann_partial_sum.csv"))
    if svg:
        written.append(save_svg([mesh.polygon()], output / "neumann_series.svg"))
    return written


def run_cauchy(config: CommandConfig, output: Path, svg: bool, ppm: bool) -> List[Path]:
    if not (config.cauchy_real or config.cauchy_imag):
        raise ConfigError("cauchy needs 'data.cauchy' with 'real' and/or 'imag'", operation="cli.main")
    mesh, _ = config.build_mesh()
    ops = assemble(mesh, quadrature_order=config.quadrature_order)
    data = complex_data(config.cauchy_real, config.cauchy_imag)
    field = generalized_cauchy(ops, TraceFn(mesh, data(mesh.vertices)))
    points = _probe_points(config)

    direct = field.direct(points)
    decomposed = field.decomposition(points)
    grad_u, grad_v = field.direct_gradients(points)
    frame = {
        "x": points[:, 0],
        "y": points[:, 1],
        "re_phi": direct.real,
        "im_phi": direct.imag,
        "cr_residual": cauchy_riemann_defect(grad_u, grad_v),
        "re_decomposition": decomposed.real,
        "im_decomposition": decomposed.imag,
    }
    written = [save_csv([dict(zip(frame, values)) for values in zip(*frame.values())], output / "cauchy.csv")]

    far = points[boundary_distance(mesh, points) >= MIN_PROBE_DISTANCE * mesh.diameter]
    if len(far) < len(points):
        log.warning(f"{len(points) - len(far)} probe points too close to the boundary for holomorphy residuals")
    summary = {
        "n_panels": mesh.n_panels,
        "np_cauchy_identity": np_cauchy_identity_check(ops, field.f.real),
        "decomposition_gap": float(np.abs(direct - decomposed).max(initial=0.0)),
        "holomorphy_direct": holomorphy_residual(field, far, "direct") if len(far) else None,
        "holomorphy_decomposition": holomorphy_residual(field, far, "decomposition") if len(far) else None,
    }
    written.append(save_json(summary, output / "cauchy_summary.json"))
    if svg:
        written.append(save_svg([mesh.polygon()], output / "cauchy.svg"))
    if ppm:
        written.append(save_ppm(_heat_grid(mesh, field.direct), output / "cauchy.ppm"))
    return written


def run_converge(config: CommandConfig, output: Path, svg: bool, ppm: bool) -> List[Path]:
    sweep = config.sweep_config()
    if sweep.trace_field is None and sweep.density_field is None and sweep.has_cauchy_data:
        report = cauchy_sweep(sweep)
    else:
        report = run_sweep(sweep)
    written = [
        save_csv(report.to_frame(), output / "converge.csv"),
        save_json(report.to_dict(), output / "converge.json"),
    ]
    if svg:
        shape = sweep.shape
        geometries = [shape.polygon(2.0 ** -(sweep.levels[-1] + 3))]
        geometries += [region_polygon(config.region(k)) for k in sweep.levels]
        written.append(save_svg(geometries, output / "converge.svg"))
    return written


RUNNERS = {
    "dyadic": run_dyadic,
    "solve": run_solve,
    "np-spectrum": run_np_spectrum,
    "neumann-series": run_neumann_series,
    "cauchy": run_cauchy,
    "converge": run_converge,
}


def main(argv: Optional[List[str]] = None, log_dir: Optional[str] = None) -> int:
    """
    Run one command and return its exit code.

    :param argv: arguments without the program name, default sys.argv[1:]
    :param log_dir: directory for the rotating log file
    :return: int 0, 2 (configuration) or 3 (numerical)
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging(log_dir=log_dir)
    log.header_message(f"{__project__} {args.command}")
    try:
        set_threads(args.threads)
        config = ConfigLoader(args.config).config
        output = Path(args.output)
        written = RUNNERS[args.command](config, output, args.svg, args.ppm)
    except FileNotFoundError as exc:
        log.error(f"cli.load_config: {exc}")
        return EXIT_CONFIG
    except np.linalg.LinAlgError as exc:
        log.error(f"cli.main: {exc}")
        return EXIT_NUMERICAL
    except ValueError as exc:
        log.error(f"cli.main: {exc}")
        return EXIT_CONFIG
    except ConfigError as exc:
        log.error(exc.describe())
        return EXIT_CONFIG
    except NumericalError as exc:
        log.error(exc.describe())
        return EXIT_NUMERICAL
    except DyadpotError as exc:
        log.error(exc.describe())
        return EXIT_CONFIG
    for path in written:
        log.parameter("wrote", str(path))
    return 0
