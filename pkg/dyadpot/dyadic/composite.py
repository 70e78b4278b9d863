"""
Shapes built from other shapes: complements, intersections and dyadic regions.
"""

from typing import Dict, Optional, Sequence

import numpy as np
import shapely
from shapely.geometry.base import BaseGeometry

from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.loops import region_polygon
from dyadpot.dyadic.region import DyadicRegion, default_root, dyadic_approximation
from dyadpot.dyadic.shapes import BoundingBox, CubeClass, OpenRectangle, ShapeOracle, cube_box


class ComplementShape(ShapeOracle):
    """
    Open complement of a shape's closure.

    The complement is unbounded; ``frame`` only bounds its polygonal
    representation and defaults to the shape's box grown by its diameter.
    """

    kind = "complement"

    def __init__(self, shape: ShapeOracle, frame: Optional[BoundingBox] = None):
        self.shape = shape
        if frame is None:
            x0, y0, x1, y1 = shape.bounding_box()
            pad = max(x1 - x0, y1 - y0)
            frame = (x0 - pad, y0 - pad, x1 + pad, y1 + pad)
        self.frame = tuple(float(v) for v in frame)

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        return ~self.shape.contains_points(points)

    def classify_cube(self, idx: DyadicIndex) -> CubeClass:
        cls = self.shape.classify_cube(idx)
        if cls is CubeClass.INSIDE:
            return CubeClass.OUTSIDE
        if cls is CubeClass.OUTSIDE:
            return CubeClass.INSIDE
        return CubeClass.CROSSING

    def bounding_box(self) -> BoundingBox:
        return self.frame

    def polygon(self, pitch: float) -> BaseGeometry:
        return shapely.box(*self.frame).difference(self.shape.polygon(pitch))

    def reference_point(self) -> np.ndarray:
        x0, y0, x1, y1 = self.shape.bounding_box()
        return np.array([x1 + 0.5 * (self.frame[2] - x1), 0.5 * (y0 + y1)])

    def to_dict(self) -> Dict:
        return {"shape": self.kind, "of": self.shape.to_dict(), "frame": list(self.frame)}


class IntersectionShape(ShapeOracle):
    """Intersection of two open sets"""

    kind = "intersection"

    def __init__(self, first: ShapeOracle, second: ShapeOracle):
        self.first = first
        self.second = second

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        return self.first.contains_points(points) & self.second.contains_points(points)

    def classify_cube(self, idx: DyadicIndex) -> CubeClass:
        a = self.first.classify_cube(idx)
        if a is CubeClass.OUTSIDE:
            return a
        b = self.second.classify_cube(idx)
        if b is CubeClass.OUTSIDE:
            return b
        if a is CubeClass.INSIDE and b is CubeClass.INSIDE:
            return CubeClass.INSIDE
        return CubeClass.CROSSING

    def bounding_box(self) -> BoundingBox:
        a, b = self.first.bounding_box(), self.second.bounding_box()
        return max(a[0], b[0]), max(a[1], b[1]), min(a[2], b[2]), min(a[3], b[3])

    def polygon(self, pitch: float) -> BaseGeometry:
        return self.first.polygon(pitch).intersection(self.second.polygon(pitch))

    def to_dict(self) -> Dict:
        return {"shape": self.kind, "of": [self.first.to_dict(), self.second.to_dict()]}


class RegionShape(ShapeOracle):
    """Interior of a dyadic region, classified exactly on dyadic coordinates"""

    kind = "region"

    def __init__(self, region: DyadicRegion):
        self.region = region
        self._polygon = region_polygon(region)
        shapely.prepare(self._polygon)

    def contains_points(self, points: np.ndarray) -> np.ndarray:
        return shapely.contains_xy(self._polygon, points[:, 0], points[:, 1])

    def classify_cube(self, idx: DyadicIndex) -> CubeClass:
        box = cube_box(idx)
        if self._polygon.contains_properly(box):
            return CubeClass.INSIDE
        if not self._polygon.intersects(box):
            return CubeClass.OUTSIDE
        return CubeClass.CROSSING

    def bounding_box(self) -> BoundingBox:
        return tuple(self._polygon.bounds)

    def polygon(self, pitch: float) -> BaseGeometry:
        return self._polygon

    def reference_point(self) -> np.ndarray:
        return self.region.root.center()

    def to_dict(self) -> Dict:
        return {"shape": self.kind, "region": self.region.to_dict()}


def exterior_approximation(
    shape: ShapeOracle,
    box: BoundingBox,
    level: int,
    root: Optional[DyadicIndex] = None,
) -> DyadicRegion:
    """
    Dyadic approximation of the complement of the shape's closure inside an open box.

    :param shape: ShapeOracle
    :param box: (xmin, ymin, xmax, ymax) containing the shape's closure
    :param level: int
    :param root: DyadicIndex, default the level cube at the middle of the box's left margin
    :return: DyadicRegion
    """
    outside = IntersectionShape(ComplementShape(shape, frame=box), OpenRectangle(*box))
    if root is None:
        x0, y0, x1, y1 = shape.bounding_box()
        point = np.array([0.5 * (box[0] + x0), 0.5 * (y0 + y1)])
        root = DyadicIndex.containing(point, level)
    return dyadic_approximation(outside, root, level)


def approximations(shape: ShapeOracle, levels: Sequence[int], root: Optional[DyadicIndex] = None):
    """Regions for consecutive levels from a shared root"""
    levels = list(levels)
    if root is None:
        root = default_root(shape, levels[0])
    return [dyadic_approximation(shape, root, k) for k in levels]
