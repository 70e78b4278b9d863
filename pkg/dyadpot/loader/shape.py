from typing import Dict, Optional

from dyadpot.dyadic.koch import KochPrefractal, KochSnowflake
from dyadpot.dyadic.shapes import Disk, OpenRectangle, ShapeOracle, SimplePolygon
from dyadpot.errors import ShapeSpecError

# keys read from the top level of a config when "shape" names the kind
FLAT_KEYS = ("center", "radius", "bounds", "vertices", "side", "generation")


class ShapeLoader:
    """Builds a shape oracle from its JSON description"""

    def __init__(self, spec: Dict):
        if not isinstance(spec, dict) or "kind" not in spec:
            raise ShapeSpecError(f"shape spec needs a 'kind' entry, got {spec!r}", operation="cli.load_shape")
        self.spec = spec
        self.shape = None
        self._load_shape()

    @classmethod
    def from_config(cls, raw: Dict) -> Optional[ShapeOracle]:
        """
        Shape of a whole config: either ``{"shape": {"kind": ...}}`` or the flat
        ``{"shape": "disk", "center": [0, 0], "radius": 1.0}`` form.
        """
        if "shape" not in raw:
            return None
        spec = raw["shape"]
        if isinstance(spec, str):
            spec = {"kind": spec, **{key: raw[key] for key in FLAT_KEYS if key in raw}}
        return cls(spec).shape

    def _load_shape(self):
        parsers = {
            "disk": self._parse_disk,
            "rectangle": self._parse_rectangle,
            "square": self._parse_rectangle,
            "polygon": self._parse_polygon,
            "koch": self._parse_koch,
        }
        kind = self.spec["kind"]
        if kind not in parsers:
            raise ShapeSpecError(f"unknown shape kind {kind!r}; choose from {sorted(parsers)}",
                                 operation="cli.load_shape")
        try:
            self.shape = parsers[kind]()
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeSpecError(f"malformed {kind} shape: {exc}", operation="cli.load_shape") from exc

    def _parse_disk(self) -> ShapeOracle:
        return Disk(center=tuple(self.spec.get("center", (0.0, 0.0))), radius=float(self.spec.get("radius", 1.0)))

    def _parse_rectangle(self) -> ShapeOracle:
        """``bounds`` [xmin, ymin, xmax, ymax]; the unit square by default"""
        xmin, ymin, xmax, ymax = (float(v) for v in self.spec.get("bounds", (0.0, 0.0, 1.0, 1.0)))
        return OpenRectangle(xmin, ymin, xmax, ymax)

    def _parse_polygon(self) -> ShapeOracle:
        return SimplePolygon(self.spec["vertices"])

    def _parse_koch(self) -> ShapeOracle:
        side = float(self.spec.get("side", 1.0))
        center = tuple(self.spec.get("center", (0.0, 0.0)))
        generation = self.spec.get("generation")
        if generation is None:
            return KochSnowflake(side=side, center=center)
        return KochPrefractal(int(generation), side=side, center=center)
