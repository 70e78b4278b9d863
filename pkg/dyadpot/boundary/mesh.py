"""
Closed polygonal boundary meshes.

Vertices are numbered loop by loop; panel p of a loop runs from vertex p to the
next vertex of the same loop, so there are as many panels as vertices. The
domain lies to the left of every panel and the outward normal is the tangent
turned clockwise.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from shapely.geometry import MultiPolygon, Polygon
from shapely.geometry.base import BaseGeometry

from dyadpot.dyadic.loops import boundary_loops, signed_area
from dyadpot.dyadic.region import DyadicRegion
from dyadpot.errors import DegeneratePanel

# relative to the mesh diameter
MIN_PANEL_LENGTH = 1e-14


@dataclass(frozen=True, eq=False)
class BoundaryMesh:
    """Oriented closed loops of straight panels"""
    vertices: np.ndarray
    loop_offsets: Tuple[int, ...]
    starts: np.ndarray = field(init=False, repr=False)
    ends: np.ndarray = field(init=False, repr=False)
    lengths: np.ndarray = field(init=False, repr=False)
    tangents: np.ndarray = field(init=False, repr=False)
    normals: np.ndarray = field(init=False, repr=False)
    midpoints: np.ndarray = field(init=False, repr=False)
    start_ids: np.ndarray = field(init=False, repr=False)
    end_ids: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        vertices = np.ascontiguousarray(self.vertices, dtype=float)
        vertices.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        start_ids = np.arange(len(vertices))
        end_ids = np.empty_like(start_ids)
        bounds = list(self.loop_offsets) + [len(vertices)]
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            end_ids[lo:hi] = np.roll(np.arange(lo, hi), -1)
        a, b = vertices[start_ids], vertices[end_ids]
        d = b - a
        lengths = np.hypot(d[:, 0], d[:, 1])
        scale = max(np.ptp(vertices[:, 0]), np.ptp(vertices[:, 1]), 1.0)
        bad = np.flatnonzero(lengths <= MIN_PANEL_LENGTH * scale)
        if bad.size:
            raise DegeneratePanel(f"panel {int(bad[0])} has length {lengths[bad[0]]:g}",
                                  operation="boundary_space.BoundaryMesh")
        tangents = d / lengths[:, None]
        for name, value in (
            ("starts", a), ("ends", b), ("lengths", lengths), ("tangents", tangents),
            ("normals", np.column_stack([tangents[:, 1], -tangents[:, 0]])),
            ("midpoints", 0.5 * (a + b)), ("start_ids", start_ids), ("end_ids", end_ids),
        ):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_panels(self) -> int:
        return len(self.lengths)

    @property
    def n_loops(self) -> int:
        return len(self.loop_offsets)

    @property
    def total_length(self) -> float:
        return float(self.lengths.sum())

    @property
    def diameter(self) -> float:
        x0, y0 = self.vertices.min(axis=0)
        x1, y1 = self.vertices.max(axis=0)
        return float(np.hypot(x1 - x0, y1 - y0))

    def loops(self) -> List[np.ndarray]:
        bounds = list(self.loop_offsets) + [self.n_vertices]
        return [self.vertices[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:])]

    def same_as(self, other: "BoundaryMesh") -> bool:
        return self is other or (
            self.loop_offsets == other.loop_offsets
            and self.vertices.shape == other.vertices.shape
            and bool(np.array_equal(self.vertices, other.vertices))
        )

    def polygon(self) -> BaseGeometry:
        """Closed domain bounded by the loops"""
        loops = self.loops()
        shells = [l for l in loops if signed_area(l) > 0]
        holes = [Polygon(l) for l in loops if signed_area(l) < 0]
        polygons = []
        for shell in shells:
            outer = Polygon(shell)
            inner = [h.exterior.coords for h in holes if outer.contains(h.representative_point())]
            polygons.append(Polygon(shell, holes=inner))
        return polygons[0] if len(polygons) == 1 else MultiPolygon(polygons)

    def refine(self, factor: int = 2) -> "BoundaryMesh":
        """Split every panel into ``factor`` equal panels"""
        if factor < 1:
            raise ValueError(f"refinement factor must be >= 1, got {factor}")
        s = np.arange(factor) / factor
        loops = []
        for loop in self.loops():
            nxt = np.roll(loop, -1, axis=0)
            pts = loop[:, None, :] + s[None, :, None] * (nxt - loop)[:, None, :]
            loops.append(pts.reshape(-1, 2))
        return BoundaryMesh.from_loops(loops, orient=False)

    def to_dict(self) -> Dict:
        return {
            "n_loops": self.n_loops,
            "n_panels": self.n_panels,
            "loops": [l.tolist() for l in self.loops()],
        }

    @classmethod
    def from_loops(cls, loops: Sequence[Sequence[Sequence[float]]], orient: bool = True) -> "BoundaryMesh":
        """
        Mesh from vertex loops (closing vertex not repeated).

        With ``orient`` the loop of largest area is made counterclockwise and
        every other loop clockwise.

        :param loops: list of (n, 2) vertex arrays
        :param orient: bool
        :return: BoundaryMesh
        """
        arrays = []
        for loop in loops:
            arr = np.asarray(loop, dtype=float).reshape(-1, 2)
            if len(arr) > 1 and np.array_equal(arr[0], arr[-1]):
                arr = arr[:-1]
            if len(arr) < 3:
                raise DegeneratePanel(f"a boundary loop needs at least 3 vertices, got {len(arr)}",
                                      operation="boundary_space.BoundaryMesh")
            arrays.append(arr)
        if orient:
            areas = [signed_area(a) for a in arrays]
            outer = int(np.argmax(np.abs(areas)))
            arrays = [a if (areas[i] > 0) == (i == outer) else a[::-1] for i, a in enumerate(arrays)]
            arrays.insert(0, arrays.pop(outer))
        offsets = tuple(int(v) for v in np.cumsum([0] + [len(a) for a in arrays[:-1]]))
        return cls(vertices=np.concatenate(arrays, axis=0), loop_offsets=offsets)

    @classmethod
    def from_region(cls, region: DyadicRegion, merge_collinear: bool = False) -> "BoundaryMesh":
        return cls.from_loops(boundary_loops(region, merge_collinear=merge_collinear), orient=False)

    @classmethod
    def regular_polygon(
        cls, n: int, radius: float = 1.0, center: Sequence[float] = (0.0, 0.0), phase: float = 0.0
    ) -> "BoundaryMesh":
        """Counterclockwise regular n-gon inscribed in a circle, first vertex at angle ``phase``"""
        theta = phase + 2.0 * np.pi * np.arange(n) / n
        pts = np.column_stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)])
        return cls.from_loops([pts], orient=False)

    @classmethod
    def rectangle(
        cls, xmin: float, ymin: float, xmax: float, ymax: float, panels_per_side: int = 1
    ) -> "BoundaryMesh":
        """Counterclockwise rectangle starting at its lower-left corner"""
        s = np.arange(panels_per_side) / panels_per_side
        corners = np.array([[xmin, ymin], [xmax, ymin], [xmax, ymax], [xmin, ymax]], dtype=float)
        nxt = np.roll(corners, -1, axis=0)
        pts = corners[:, None, :] + s[None, :, None] * (nxt - corners)[:, None, :]
        return cls.from_loops([pts.reshape(-1, 2)], orient=False)

    @classmethod
    def from_polygon(cls, polygon: BaseGeometry, pitch: Optional[float] = None) -> "BoundaryMesh":
        """Mesh of a shapely polygon's rings, optionally segmentized to ``pitch``"""
        if isinstance(polygon, MultiPolygon):
            raise DegeneratePanel("a multipolygon has more than one outer boundary",
                                  operation="boundary_space.BoundaryMesh")
        if pitch is not None:
            polygon = polygon.segmentize(pitch)
        rings = [polygon.exterior] + list(polygon.interiors)
        return cls.from_loops([np.asarray(r.coords)[:-1] for r in rings], orient=True)
