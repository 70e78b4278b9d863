from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import shapely

from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.loops import region_polygon
from dyadpot.dyadic.region import DyadicRegion
from dyadpot.dyadic.shapes import ShapeOracle
from dyadpot.errors import WindowViolation

Rect = Tuple[float, float, float, float]

DENSITY_MODES = ("values", "normal")


@dataclass
class SweepConfig:
    """Everything a level sweep needs; windows are fixed across levels"""
    shape: ShapeOracle
    levels: Tuple[int, ...]
    root: Optional[DyadicIndex] = None
    trace_field: Optional[str] = "re_z2"
    density_field: Optional[str] = None
    density_mode: str = "values"
    interior_window: Optional[Rect] = None
    exterior_window: Optional[Rect] = None
    metrics_window: Optional[Rect] = None
    pitch: float = 0.02
    terms: int = 20
    quadrature_order: int = 8
    merge_collinear: bool = False
    cauchy_real: Optional[str] = None
    cauchy_imag: Optional[str] = None

    def __post_init__(self):
        self.levels = tuple(sorted(int(k) for k in self.levels))
        if not self.levels:
            raise ValueError("a sweep needs at least one level")
        if self.density_mode not in DENSITY_MODES:
            raise ValueError(f"density_mode must be one of {DENSITY_MODES}, got {self.density_mode!r}")

    @property
    def has_cauchy_data(self) -> bool:
        return bool(self.cauchy_real or self.cauchy_imag)

    def windows(self) -> Dict[str, Rect]:
        out = {}
        if self.interior_window is not None:
            out["interior"] = tuple(self.interior_window)
        if self.exterior_window is not None:
            out["exterior"] = tuple(self.exterior_window)
        return out

    def window_for_metrics(self) -> Rect:
        if self.metrics_window is not None:
            return tuple(self.metrics_window)
        x0, y0, x1, y1 = self.shape.bounding_box()
        margin = 0.125 * max(x1 - x0, y1 - y0)
        return x0 - margin, y0 - margin, x1 + margin, y1 + margin

    def check_windows(self, coarsest: DyadicRegion) -> None:
        """
        Interior window compactly inside the coarsest region (so inside every
        finer one) and exterior window away from the shape's closure.
        """
        if self.interior_window is not None:
            box = shapely.box(*self.interior_window)
            if not region_polygon(coarsest).contains_properly(box):
                raise WindowViolation(f"interior window {list(self.interior_window)} is not compactly inside "
                                      f"the level {coarsest.level} region", operation="converge.run_sweep")
        if self.exterior_window is not None:
            box = shapely.box(*self.exterior_window)
            closure = self.shape.polygon(2.0 ** -(self.levels[-1] + 3))
            if box.distance(closure) <= 0.0:
                raise WindowViolation(f"exterior window {list(self.exterior_window)} meets the shape",
                                      operation="converge.run_sweep")

    def to_dict(self) -> Dict:
        return {
            "shape": self.shape.to_dict(),
            "levels": list(self.levels),
            "root": self.root.to_list() if self.root is not None else None,
            "trace_field": self.trace_field,
            "density_field": self.density_field,
            "density_mode": self.density_mode,
            "interior_window": list(self.interior_window) if self.interior_window else None,
            "exterior_window": list(self.exterior_window) if self.exterior_window else None,
            "pitch": self.pitch,
            "terms": self.terms,
            "quadrature_order": self.quadrature_order,
            "cauchy": [self.cauchy_real, self.cauchy_imag] if self.has_cauchy_data else None,
        }
