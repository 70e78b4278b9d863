import json
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np
import pandas as pd
from PIL import Image
from shapely.geometry.base import BaseGeometry

from dyadpot.boundary.density import DensityFn
from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.boundary.trace import TraceFn
from dyadpot.errors import ConfigError

PathLike = Union[str, Path]

# 17 significant digits round-trip every double
FLOAT_FORMAT = "%.17g"


def _to_builtin(value):
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return _to_builtin(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def save_json(data: Dict, output_path: PathLike) -> Path:
    """Save a JSON document, numpy values converted to Python ones"""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", encoding="utf-8") as f:
        json.dump(_to_builtin(data), f, indent=2)
        f.write("\n")
    return output_path


def save_csv(rows: Union[pd.DataFrame, Sequence[Dict]], output_path: PathLike) -> Path:
    """Save rows with a header and every float at 17 significant digits"""
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows))
    frame.to_csv(output_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return output_path


def _svg_element(geometry: BaseGeometry, stroke: float, color: str) -> str:
    if geometry.geom_type in ("Polygon", "MultiPolygon"):
        return geometry.svg(scale_factor=stroke, fill_color=color, opacity=0.5)
    return geometry.svg(scale_factor=stroke, stroke_color=color)


def save_svg(geometries: Iterable[BaseGeometry], output_path: PathLike, size: int = 800,
             colors: Sequence[str] = ("#66cc99", "#ff3333", "#3366ff")) -> Path:
    """
    Draw shapely geometries into one SVG file, y axis pointing up.

    :param geometries: shapely geometries, drawn in order
    :param output_path: path of the .svg file
    :param size: int pixel width of the image
    :param colors: fill colours cycled over the geometries
    :return: Path
    """
    geometries: List[BaseGeometry] = [g for g in geometries if g is not None and not g.is_empty]
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    if geometries:
        bounds = np.array([g.bounds for g in geometries])
        x0, y0 = bounds[:, 0].min(), bounds[:, 1].min()
        x1, y1 = bounds[:, 2].max(), bounds[:, 3].max()
    else:
        x0, y0, x1, y1 = 0.0, 0.0, 1.0, 1.0
    pad = 0.05 * max(x1 - x0, y1 - y0, 1e-12)
    x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
    height = int(round(size * (y1 - y0) / (x1 - x0)))
    stroke = (x1 - x0) / size
    body = "".join(_svg_element(g, stroke, colors[i % len(colors)]) for i, g in enumerate(geometries))
    with open(output_path, "w", encoding="utf-8") as f:
        f.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{height}" '
            f'viewBox="{x0!r} {y0!r} {x1 - x0!r} {y1 - y0!r}">\n'
            f'<g transform="matrix(1,0,0,-1,0,{y0 + y1!r})">{body}</g>\n</svg>\n'
        )
    return output_path


def heat_colors(values: np.ndarray) -> np.ndarray:
    """Blue-white-red RGB bytes symmetric about zero"""
    values = np.real(np.asarray(values, dtype=complex))
    scale = float(np.abs(values).max(initial=0.0)) or 1.0
    t = np.clip(values / scale, -1.0, 1.0)
    rgb = np.empty(values.shape + (3,))
    rgb[..., 0] = np.where(t < 0, 1.0 + t, 1.0)
    rgb[..., 1] = 1.0 - np.abs(t)
    rgb[..., 2] = np.where(t > 0, 1.0 - t, 1.0)
    return np.round(255.0 * rgb).astype(np.uint8)


def gray_levels(values: np.ndarray) -> np.ndarray:
    """RGB bytes with equal channels, black at the minimum and white at the maximum"""
    values = np.real(np.asarray(values, dtype=complex))
    lo, hi = (float(values.min()), float(values.max())) if values.size else (0.0, 0.0)
    t = (values - lo) / (hi - lo) if hi > lo else np.full(values.shape, 0.5)
    level = np.round(255.0 * np.clip(t, 0.0, 1.0)).astype(np.uint8)
    return np.repeat(level[..., None], 3, axis=-1)


COLORMAPS = {"gray": gray_levels, "heat": heat_colors}


def save_ppm(grid: np.ndarray, output_path: PathLike, colormap: str = "gray") -> Path:
    """
    Save a (ny, nx) field grid as a binary PPM image, first row at the bottom.

    ``colormap`` is "gray" or the signed blue-white-red "heat" map. NaN cells
    (for example on the boundary) are drawn black.
    """
    if colormap not in COLORMAPS:
        raise ValueError(f"unknown colormap {colormap!r}; choose from {sorted(COLORMAPS)}")
    grid = np.asarray(grid)
    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    mask = ~np.isfinite(grid)
    finite = np.where(mask, np.nan, np.real(grid))
    fill = float(np.nanmin(finite)) if (~mask).any() else 0.0
    pixels = COLORMAPS[colormap](np.where(mask, fill, grid))
    pixels[mask] = 0
    Image.fromarray(np.ascontiguousarray(pixels[::-1])).save(output_path, format="PPM")
    return output_path


def _element_frame(id_name: str, values: np.ndarray) -> pd.DataFrame:
    values = np.asarray(values)
    frame = pd.DataFrame({id_name: np.arange(len(values))})
    if np.iscomplexobj(values):
        frame["value_real"] = values.real
        frame["value_imag"] = values.imag
    else:
        frame["value"] = values
    return frame


def save_trace_csv(f: TraceFn, output_path: PathLike) -> Path:
    """Nodal values as ``vertex_id,value`` (``value_real,value_imag`` for complex data)"""
    return save_csv(_element_frame("vertex_id", f.values), output_path)


def save_density_csv(g: DensityFn, output_path: PathLike) -> Path:
    """Panel values as ``panel_id,value`` (``value_real,value_imag`` for complex data)"""
    return save_csv(_element_frame("panel_id", g.values), output_path)


def _read_values(path: PathLike, id_name: str, count: int) -> np.ndarray:
    frame = pd.read_csv(path)
    if id_name not in frame or len(frame) != count or not np.array_equal(frame[id_name], np.arange(count)):
        raise ConfigError(f"{path} does not hold {count} rows indexed by {id_name}", operation="cli.load_data")
    if "value" in frame:
        return frame["value"].to_numpy(dtype=float)
    return frame["value_real"].to_numpy(dtype=float) + 1j * frame["value_imag"].to_numpy(dtype=float)


def load_trace_csv(mesh: BoundaryMesh, path: PathLike, gauged: bool = False) -> TraceFn:
    return TraceFn(mesh, _read_values(path, "vertex_id", mesh.n_vertices), gauged=gauged)


def load_density_csv(mesh: BoundaryMesh, path: PathLike, gauged: bool = False) -> DensityFn:
    return DensityFn(mesh, _read_values(path, "panel_id", mesh.n_panels), gauged=gauged)
