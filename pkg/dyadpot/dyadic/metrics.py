"""
Set convergence metrics of a dyadic region against its shape.
"""

from dataclasses import asdict, dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
import shapely
from scipy.spatial import cKDTree
from shapely.geometry.base import BaseGeometry

from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.loops import region_polygon
from dyadpot.dyadic.region import DyadicRegion
from dyadpot.dyadic.shapes import CubeClass, ShapeOracle, cube_box
from dyadpot.errors import WindowEmpty
from dyadpot.logger import Logger as log
from dyadpot.parallel import map_chunks

Window = Union[BaseGeometry, Tuple[float, float, float, float]]

# the area integrand is resolved this many levels below the region level
AREA_DEPTH = 4
# boundary sampling pitch is 2^-(k + SAMPLE_DEPTH)
SAMPLE_DEPTH = 3


@dataclass
class SetMetrics:
    """Distances between Omega_k and Omega restricted to a window"""
    level: int
    hausdorff_boundary: float
    hausdorff_symmetric: float
    area_symdiff: float
    compact_contained: bool
    monotone_vs_previous: bool

    def to_dict(self) -> Dict:
        return asdict(self)


def as_window(window: Window) -> BaseGeometry:
    if isinstance(window, BaseGeometry):
        return window
    return shapely.box(*window)


def boundary_samples(geometry: BaseGeometry, pitch: float) -> np.ndarray:
    """Boundary vertices after segmentizing every ring to ``pitch``"""
    if geometry.is_empty:
        return np.empty((0, 2))
    dense = shapely.segmentize(geometry.boundary, pitch)
    return shapely.get_coordinates(dense)


def directed_hausdorff(source: np.ndarray, target: np.ndarray) -> float:
    if len(source) == 0 or len(target) == 0:
        return float("inf") if len(source) else 0.0
    distances, _ = cKDTree(target).query(source)
    return float(distances.max())


def _window_cubes(window: BaseGeometry, level: int):
    x0, y0, x1, y1 = window.bounds
    scale = 2.0 ** level
    return [DyadicIndex(level, i, j)
            for i in range(int(np.floor(x0 * scale)), int(np.ceil(x1 * scale)))
            for j in range(int(np.floor(y0 * scale)), int(np.ceil(y1 * scale)))]


def _midpoint_area(shape: ShapeOracle, window: BaseGeometry, idx: DyadicIndex, depth: int) -> float:
    """Midpoint-rule area of shape and window inside one cube"""
    m = 2 ** depth
    h = idx.size / m
    x0, y0, _, _ = idx.bounds()
    offsets = (np.arange(m) + 0.5) * h
    xs, ys = np.meshgrid(x0 + offsets, y0 + offsets, indexing="ij")
    pts = np.column_stack([xs.ravel(), ys.ravel()])
    inside = shape.contains_points(pts) & shapely.contains_xy(window, pts[:, 0], pts[:, 1])
    return float(inside.sum()) * h * h


def area_symdiff(region: DyadicRegion, shape: ShapeOracle, window: Window) -> float:
    """
    Area of (shape minus region) inside the window.

    Cubes are classified from level 0 downwards. Inside cubes are integrated
    exactly with the region subtracted; cubes still Crossing at the region level
    are resolved by the midpoint rule AREA_DEPTH levels deeper.
    """
    window = as_window(window)
    shapely.prepare(window)
    k = region.level
    region_boxes = [cube_box(c) for c in region.cubes]
    region_areas = shapely.area(shapely.intersection(region_boxes, window)) if region_boxes else np.empty(0)

    ij = region.index_array()

    def region_sums(level: int) -> Dict[Tuple[int, int], float]:
        """Region area in window per level-``level`` ancestor"""
        if not len(ij):
            return {}
        keys, inverse = np.unique(ij >> (k - level), axis=0, return_inverse=True)
        sums = np.bincount(inverse.ravel(), weights=region_areas, minlength=len(keys))
        return {(int(a), int(b)): float(s) for (a, b), s in zip(keys, sums)}

    total = 0.0
    pending = [c for c in _window_cubes(window, 0) if window.intersects(cube_box(c))]
    crossing_leaves = []
    for level in range(0, k + 1):
        classes = map_chunks(lambda s, cubes=pending: [shape.classify_cube(c) for c in cubes[s]],
                             len(pending), chunk_size=64)
        classes = [cls for part in classes for cls in part]
        sums = region_sums(level)
        nxt = []
        for idx, cls in zip(pending, classes):
            if cls is CubeClass.OUTSIDE or (level == k and idx in region):
                continue
            if cls is CubeClass.INSIDE:
                total += cube_box(idx).intersection(window).area - sums.get(idx.index, 0.0)
            elif level < k:
                nxt.extend(c for c in idx.children() if window.intersects(cube_box(c)))
            else:
                crossing_leaves.append(idx)
        pending = sorted(nxt)

    parts = map_chunks(
        lambda s: sum(_midpoint_area(shape, window, c, AREA_DEPTH) for c in crossing_leaves[s]),
        len(crossing_leaves), chunk_size=32,
    )
    total += float(sum(parts))
    return max(total, 0.0)


def set_convergence_metrics(
    region: DyadicRegion,
    shape: ShapeOracle,
    window: Window,
    compact_probe: Optional[Sequence[Sequence[float]]] = None,
    previous: Optional[DyadicRegion] = None,
) -> SetMetrics:
    """
    Hausdorff, area and exhaustion diagnostics of one level.

    ``hausdorff_boundary`` is the largest distance from the boundary of
    region-in-window to the boundary of shape-in-window, both sampled at pitch
    2^-(k+3); ``hausdorff_symmetric`` also takes the reverse direction.

    :param region: DyadicRegion
    :param shape: ShapeOracle
    :param window: shapely geometry or (xmin, ymin, xmax, ymax)
    :param compact_probe: points asserted to lie in the shape
    :param previous: DyadicRegion of a coarser level from the same root
    :return: SetMetrics
    """
    window = as_window(window)
    pitch = 2.0 ** -(region.level + SAMPLE_DEPTH)
    poly = region_polygon(region)
    clipped = poly if window.contains(poly) else poly.intersection(window)
    if clipped.is_empty or clipped.area == 0.0:
        raise WindowEmpty(f"window {window.bounds} does not meet the level {region.level} region",
                          operation="dyadic_geometry.set_convergence_metrics")
    reference = shape.clip(window, pitch)

    region_pts = boundary_samples(clipped, pitch)
    shape_pts = boundary_samples(reference, pitch)
    forward = directed_hausdorff(region_pts, shape_pts)
    backward = directed_hausdorff(shape_pts, region_pts)

    probe = np.asarray(compact_probe if compact_probe is not None else [], dtype=float).reshape(-1, 2)
    contained = bool(shapely.contains_xy(poly, probe[:, 0], probe[:, 1]).all()) if len(probe) else True
    monotone = True if previous is None else previous.is_subset_of(region)

    metrics = SetMetrics(
        level=region.level,
        hausdorff_boundary=forward,
        hausdorff_symmetric=max(forward, backward),
        area_symdiff=area_symdiff(region, shape, window),
        compact_contained=contained,
        monotone_vs_previous=monotone,
    )
    log.parameter(f"level {region.level} hausdorff_boundary", metrics.hausdorff_boundary)
    log.parameter(f"level {region.level} area_symdiff", metrics.area_symdiff)
    return metrics
