"""
Koch snowflake and its prefractal polygons.

Cube classification never builds the full prefractal: edges are refined only
while the triangle that bounds all their later generations (base angles 30
degrees, outward) meets the cube. Untouched edges are left coarse, which changes
the polygon only inside their triangles and therefore nowhere near the cube.
"""

from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import shapely
from shapely.geometry import Polygon
from shapely.geometry.base import BaseGeometry

from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.shapes import EPS_GEOM, BoundingBox, CubeClass, ShapeOracle

SQRT3_6 = np.sqrt(3.0) / 6.0
MAX_POLYGON_GENERATION = 9


def initial_triangle(side: float, center: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """Counterclockwise equilateral triangle as (starts, ends) edge arrays"""
    radius = side / np.sqrt(3.0)
    angles = np.pi / 2.0 + 2.0 * np.pi * np.arange(3) / 3.0
    pts = np.column_stack([center[0] + radius * np.cos(angles), center[1] + radius * np.sin(angles)])
    return pts, np.roll(pts, -1, axis=0)


def _outward(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Apex of the outward bump / bounding triangle over each edge"""
    d = b - a
    return 0.5 * (a + b) + SQRT3_6 * np.column_stack([d[:, 1], -d[:, 0]])


def koch_children(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Replace each edge by its four Koch sub-edges, keeping chain order"""
    d = b - a
    p1 = a + d / 3.0
    p3 = a + 2.0 * d / 3.0
    p2 = _outward(a, b)
    starts = np.stack([a, p1, p2, p3], axis=1).reshape(-1, 2)
    ends = np.stack([p1, p2, p3, b], axis=1).reshape(-1, 2)
    return starts, ends


def refine_edges(a: np.ndarray, b: np.ndarray, mask: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Refine the masked edges in place of the chain"""
    if not mask.any():
        return a, b
    ca, cb = koch_children(a[mask], b[mask])
    counts = np.where(mask, 4, 1)
    offsets = np.cumsum(counts) - counts
    out_a = np.empty((counts.sum(), 2))
    out_b = np.empty_like(out_a)
    keep = ~mask
    out_a[offsets[keep]] = a[keep]
    out_b[offsets[keep]] = b[keep]
    pos = (offsets[mask][:, None] + np.arange(4)).ravel()
    out_a[pos] = ca
    out_b[pos] = cb
    return out_a, out_b


def prefractal_vertices(side: float, center: Sequence[float], generation: int) -> np.ndarray:
    a, b = initial_triangle(side, center)
    for _ in range(generation):
        a, b = koch_children(a, b)
    return a


class KochSnowflake(ShapeOracle):
    """
    Open Koch snowflake (limit set) with counterclockwise triangle of side ``side``
    centred at ``center``.

    ``classify_cube`` probes prefractals up to ``max_probe_depth`` (default: cube
    level + 4); cubes still undecided there are Crossing. ``contains_points`` uses
    the prefractal of generation ``point_generation``.
    """

    kind = "koch"

    def __init__(
        self,
        side: float = 1.0,
        center: Sequence[float] = (0.0, 0.0),
        max_probe_depth: Optional[int] = None,
        point_generation: int = 8,
    ):
        if side <= 0:
            raise ValueError(f"Koch side must be positive, got {side}")
        self.side = float(side)
        self.center = np.asarray(center, dtype=float)
        self.max_probe_depth = max_probe_depth
        self.point_generation = point_generation
        self._polygons: Dict[int, Polygon] = {}

    @property
    def generation(self) -> Optional[int]:
        return None

    def _probe_depth(self, idx: DyadicIndex) -> int:
        if self.max_probe_depth is not None:
            return self.max_probe_depth
        return idx.level + 4

    def prefractal(self, generation: int) -> Polygon:
        """Prepared prefractal polygon P_m, cached per generation"""
        if generation not in self._polygons:
            poly = Polygon(prefractal_vertices(self.side, self.center, generation))
            shapely.prepare(poly)
            self._polygons[generation] = poly
        return self._polygons[generation]

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        poly = self.prefractal(self._point_generation())
        return shapely.contains_xy(poly, points[:, 0], points[:, 1])

    def _point_generation(self) -> int:
        return self.point_generation

    def classify_cube(self, idx: DyadicIndex) -> CubeClass:
        return self._classify(idx, self._probe_depth(idx), exact=False)

    def _classify(self, idx: DyadicIndex, depth: int, exact: bool) -> CubeClass:
        x0, y0, x1, y1 = idx.bounds()
        x0, y0, x1, y1 = x0 - EPS_GEOM, y0 - EPS_GEOM, x1 + EPS_GEOM, y1 + EPS_GEOM
        box = shapely.box(x0, y0, x1, y1)
        cx, cy = idx.center()
        a, b = initial_triangle(self.side, self.center)
        for m in range(depth + 1):
            apex = _outward(a, b)
            lo = np.minimum(np.minimum(a, b), apex)
            hi = np.maximum(np.maximum(a, b), apex)
            touch = (lo[:, 0] <= x1) & (hi[:, 0] >= x0) & (lo[:, 1] <= y1) & (hi[:, 1] >= y0)
            center_in = bool(shapely.contains_xy(Polygon(a), cx, cy))
            if not touch.any():
                return CubeClass.INSIDE if center_in else CubeClass.OUTSIDE
            lines = shapely.linestrings(np.stack([a[touch], b[touch]], axis=1))
            hit = bool(shapely.intersects(lines, box).any())
            if not hit and center_in:
                return CubeClass.INSIDE
            if exact and m == depth:
                # the polygon itself is the set: no later generations
                return CubeClass.CROSSING if hit else CubeClass.OUTSIDE
            if m < depth:
                a, b = refine_edges(a, b, touch)
        return CubeClass.CROSSING

    def bounding_box(self) -> BoundingBox:
        # the snowflake lies in the hexagram of its triangle, radius side/sqrt(3)
        r = self.side / np.sqrt(3.0)
        cx, cy = self.center
        return cx - r, cy - r, cx + r, cy + r

    def polygon(self, pitch: float) -> BaseGeometry:
        m = int(np.ceil(np.log(self.side / pitch) / np.log(3.0))) if pitch < self.side else 0
        return self.prefractal(min(max(m, 0), MAX_POLYGON_GENERATION))

    def reference_point(self) -> np.ndarray:
        return self.center.copy()

    def to_dict(self) -> Dict:
        return {"shape": self.kind, "side": self.side, "center": self.center.tolist()}


class KochPrefractal(KochSnowflake):
    """Interior of the generation-``m`` prefractal polygon P_m"""

    def __init__(self, generation: int, side: float = 1.0, center: Sequence[float] = (0.0, 0.0)):
        if generation < 0:
            raise ValueError(f"Koch generation must be >= 0, got {generation}")
        super().__init__(side=side, center=center, max_probe_depth=generation)
        self._generation = int(generation)

    @property
    def generation(self) -> Optional[int]:
        return self._generation

    def _point_generation(self) -> int:
        return self._generation

    def classify_cube(self, idx: DyadicIndex) -> CubeClass:
        return self._classify(idx, self._generation, exact=True)

    def polygon(self, pitch: float) -> BaseGeometry:
        return self.prefractal(self._generation)

    def to_dict(self) -> Dict:
        data = super().to_dict()
        data["generation"] = self._generation
        return data
