"""
Shape oracles for open sets in the plane.

A shape answers two questions: is a point in the open set, and how does a
closed dyadic cube sit relative to it (Inside, Outside or Crossing). Inside
means the closed cube lies in the open set, Outside means the closed cube misses
its closure. Everything undecided is Crossing.
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Dict, Sequence, Tuple

import numpy as np
import shapely
from shapely.geometry import Polygon
from shapely.geometry.base import BaseGeometry
from shapely.geometry.polygon import orient

from dyadpot.dyadic.index import DyadicIndex

EPS_GEOM = 1e-12

BoundingBox = Tuple[float, float, float, float]


class CubeClass(Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    CROSSING = "crossing"


def cube_box(idx: DyadicIndex, inflate: float = 0.0) -> BaseGeometry:
    x0, y0, x1, y1 = idx.bounds()
    return shapely.box(x0 - inflate, y0 - inflate, x1 + inflate, y1 + inflate)


class ShapeOracle(ABC):
    """Membership and cube classification for a bounded open set"""

    kind = "shape"

    @abstractmethod
    def contains_points(self, points: np.ndarray) -> np.ndarray:
        """Open-set membership for an (n, 2) array of points"""

    def contains_point(self, point: Sequence[float]) -> bool:
        return bool(self.contains_points(np.asarray(point, dtype=float).reshape(1, 2))[0])

    @abstractmethod
    def classify_cube(self, idx: DyadicIndex) -> CubeClass:
        """Inside / Outside / Crossing for the closed cube"""

    @abstractmethod
    def bounding_box(self) -> BoundingBox:
        """Box containing the closure"""

    @abstractmethod
    def polygon(self, pitch: float) -> BaseGeometry:
        """Polygon with vertices on the boundary spaced at most ``pitch`` apart"""

    def clip(self, window: BaseGeometry, pitch: float) -> BaseGeometry:
        """Polygonal approximation of the shape intersected with ``window``"""
        poly = self.polygon(pitch)
        if window.contains(poly):
            return poly
        return poly.intersection(window)

    def reference_point(self) -> np.ndarray:
        x0, y0, x1, y1 = self.bounding_box()
        return np.array([0.5 * (x0 + x1), 0.5 * (y0 + y1)])

    def to_dict(self) -> Dict:
        return {"shape": self.kind}


class Disk(ShapeOracle):
    """Open disk"""

    kind = "disk"

    def __init__(self, center: Sequence[float] = (0.0, 0.0), radius: float = 1.0):
        if radius <= 0:
            raise ValueError(f"disk radius must be positive, got {radius}")
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        d = np.hypot(points[:, 0] - self.center[0], points[:, 1] - self.center[1])
        return d < self.radius

    def classify_cube(self, idx: DyadicIndex) -> CubeClass:
        x0, y0, x1, y1 = idx.bounds()
        cx, cy = self.center
        far = np.hypot(max(abs(x0 - cx), abs(x1 - cx)), max(abs(y0 - cy), abs(y1 - cy)))
        if far < self.radius - EPS_GEOM:
            return CubeClass.INSIDE
        near = np.hypot(max(x0 - cx, 0.0, cx - x1), max(y0 - cy, 0.0, cy - y1))
        if near > self.radius + EPS_GEOM:
            return CubeClass.OUTSIDE
        return CubeClass.CROSSING

    def bounding_box(self) -> BoundingBox:
        cx, cy = self.center
        r = self.radius
        return cx - r, cy - r, cx + r, cy + r

    def polygon(self, pitch: float) -> BaseGeometry:
        n = max(16, int(np.ceil(2.0 * np.pi * self.radius / pitch)))
        theta = 2.0 * np.pi * np.arange(n) / n
        return Polygon(np.column_stack([self.center[0] + self.radius * np.cos(theta),
                                        self.center[1] + self.radius * np.sin(theta)]))

    def reference_point(self) -> np.ndarray:
        return self.center.copy()

    def to_dict(self) -> Dict:
        return {"shape": self.kind, "center": self.center.tolist(), "radius": self.radius}


class OpenRectangle(ShapeOracle):
    """Open axis-aligned rectangle (xmin, xmax) x (ymin, ymax)"""

    kind = "rectangle"

    def __init__(self, xmin: float, ymin: float, xmax: float, ymax: float):
        if not (xmax > xmin and ymax > ymin):
            raise ValueError(f"empty rectangle {(xmin, ymin, xmax, ymax)}")
        self.xmin, self.ymin, self.xmax, self.ymax = map(float, (xmin, ymin, xmax, ymax))

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        x, y = points[:, 0], points[:, 1]
        return (x > self.xmin) & (x < self.xmax) & (y > self.ymin) & (y < self.ymax)

    def classify_cube(self, idx: DyadicIndex) -> CubeClass:
        x0, y0, x1, y1 = idx.bounds()
        if (x0 > self.xmin + EPS_GEOM and x1 < self.xmax - EPS_GEOM
                and y0 > self.ymin + EPS_GEOM and y1 < self.ymax - EPS_GEOM):
            return CubeClass.INSIDE
        if (x1 < self.xmin - EPS_GEOM or x0 > self.xmax + EPS_GEOM
                or y1 < self.ymin - EPS_GEOM or y0 > self.ymax + EPS_GEOM):
            return CubeClass.OUTSIDE
        return CubeClass.CROSSING

    def bounding_box(self) -> BoundingBox:
        return self.xmin, self.ymin, self.xmax, self.ymax

    def polygon(self, pitch: float) -> BaseGeometry:
        return shapely.box(self.xmin, self.ymin, self.xmax, self.ymax, ccw=True)

    def to_dict(self) -> Dict:
        return {"shape": self.kind, "bounds": [self.xmin, self.ymin, self.xmax, self.ymax]}


class SimplePolygon(ShapeOracle):
    """
    Interior of a simple polygon.

    A closed cube is Inside when all four corners are strictly inside and no
    polygon edge meets the cube, which is shapely's ``contains_properly``.
    """

    kind = "polygon"

    def __init__(self, vertices: Sequence[Sequence[float]]):
        vertices = np.asarray(vertices, dtype=float)
        if vertices.ndim != 2 or vertices.shape[0] < 3 or vertices.shape[1] != 2:
            raise ValueError("a polygon needs at least three 2D vertices")
        poly = Polygon(vertices)
        if not poly.is_valid or poly.area <= 0:
            raise ValueError("polygon vertices do not describe a simple polygon")
        self._polygon = orient(poly, sign=1.0)
        self._boundary = self._polygon.exterior
        shapely.prepare(self._polygon)
        self.vertices = np.asarray(self._polygon.exterior.coords)[:-1]

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        return shapely.contains_xy(self._polygon, points[:, 0], points[:, 1])

    def classify_cube(self, idx: DyadicIndex) -> CubeClass:
        box = cube_box(idx)
        if self._polygon.contains_properly(box) and self._boundary.distance(box) > EPS_GEOM:
            return CubeClass.INSIDE
        if self._polygon.distance(box) > EPS_GEOM:
            return CubeClass.OUTSIDE
        return CubeClass.CROSSING

    def bounding_box(self) -> BoundingBox:
        return tuple(self._polygon.bounds)

    def polygon(self, pitch: float) -> BaseGeometry:
        return self._polygon

    def reference_point(self) -> np.ndarray:
        point = self._polygon.representative_point()
        return np.array([point.x, point.y])

    def to_dict(self) -> Dict:
        return {"shape": self.kind, "vertices": self.vertices.tolist()}
