import json
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.converge.config import SweepConfig
from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.region import DyadicRegion, default_root, dyadic_approximation
from dyadpot.dyadic.shapes import ShapeOracle
from dyadpot.errors import ConfigError
from dyadpot.loader.shape import ShapeLoader

Rect = Tuple[float, float, float, float]

MESH_KINDS = ("region", "regular_polygon", "rectangle", "polygon")

DEFAULT_SEED = 42


@dataclass
class MeshSpec:
    """How the boundary mesh of a single-level command is produced"""
    kind: str = "region"
    n: int = 256
    radius: float = 1.0
    center: Tuple[float, float] = (0.0, 0.0)
    bounds: Rect = (0.0, 0.0, 1.0, 1.0)
    panels_per_side: int = 1
    pitch: Optional[float] = None
    refine: int = 1


@dataclass
class CommandConfig:
    """Typed view of one JSON configuration file"""
    raw: Dict
    shape: Optional[ShapeOracle] = None
    root: Optional[DyadicIndex] = None
    level: Optional[int] = None
    levels: Tuple[int, ...] = ()
    mesh: MeshSpec = field(default_factory=MeshSpec)
    trace_field: Optional[str] = None
    density_field: Optional[str] = None
    density_mode: str = "values"
    cauchy_real: Optional[str] = None
    cauchy_imag: Optional[str] = None
    windows: Dict[str, Rect] = field(default_factory=dict)
    points: List[Tuple[float, float]] = field(default_factory=list)
    pitch: float = 0.02
    terms: int = 20
    sign: str = "+"
    seed: int = DEFAULT_SEED
    random_traces: int = 0
    quadrature_order: int = 8
    merge_collinear: bool = False

    def require_shape(self, operation: str) -> ShapeOracle:
        if self.shape is None:
            raise ConfigError("configuration has no 'shape' entry", operation=operation)
        return self.shape

    def all_levels(self) -> Tuple[int, ...]:
        if self.levels:
            return self.levels
        if self.level is not None:
            return (self.level,)
        raise ConfigError("configuration needs 'level' or 'levels'", operation="cli.main")

    def region(self, level: int) -> DyadicRegion:
        shape = self.require_shape("dyadic_geometry.dyadic_approximation")
        root = self.root if self.root is not None else default_root(shape, min(self.all_levels()))
        return dyadic_approximation(shape, root, level)

    def build_mesh(self, level: Optional[int] = None) -> Tuple[BoundaryMesh, Optional[DyadicRegion]]:
        """Mesh of the configured kind; region meshes use ``level`` (default the finest)"""
        spec = self.mesh
        region = None
        if spec.kind == "region":
            region = self.region(level if level is not None else max(self.all_levels()))
            mesh = BoundaryMesh.from_region(region, merge_collinear=self.merge_collinear)
        elif spec.kind == "regular_polygon":
            mesh = BoundaryMesh.regular_polygon(spec.n, radius=spec.radius, center=spec.center)
        elif spec.kind == "rectangle":
            mesh = BoundaryMesh.rectangle(*spec.bounds, panels_per_side=spec.panels_per_side)
        else:
            pitch = spec.pitch or 0.05
            mesh = BoundaryMesh.from_polygon(self.require_shape("boundary_space.BoundaryMesh").polygon(pitch), pitch)
        if spec.refine > 1:
            mesh = mesh.refine(spec.refine)
        return mesh, region

    def sweep_config(self) -> SweepConfig:
        return SweepConfig(
            shape=self.require_shape("converge.run_sweep"),
            levels=self.all_levels(),
            root=self.root,
            trace_field=self.trace_field,
            density_field=self.density_field,
            density_mode=self.density_mode,
            interior_window=self.windows.get("interior"),
            exterior_window=self.windows.get("exterior"),
            metrics_window=self.windows.get("metrics"),
            pitch=self.pitch,
            terms=self.terms,
            quadrature_order=self.quadrature_order,
            merge_collinear=self.merge_collinear,
            cauchy_real=self.cauchy_real,
            cauchy_imag=self.cauchy_imag,
        )


class ConfigLoader:
    """Loads and parses JSON configuration files"""

    def __init__(self, path: str):
        # Resolve the path against the working directory, then the package
        if not os.path.isabs(path):
            if os.path.exists(path):
                path = os.path.abspath(path)
            else:
                package_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
                path = os.path.abspath(os.path.join(package_dir, "examples", path))

        if not os.path.exists(path):
            raise FileNotFoundError(f"config file not found: {path}")

        self.path = path
        self.config = None
        self._load_config()

    def _load_config(self):
        try:
            with open(self.path, "r", encoding="utf-8") as f:
                raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{self.path} is not valid JSON: {exc}", operation="cli.load_config") from exc
        self.config = parse_config(raw)


def parse_config(raw: Dict) -> CommandConfig:
    """Typed CommandConfig from an already decoded JSON object"""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object", operation="cli.load_config")
    try:
        data = raw.get("data", {})
        cauchy = data.get("cauchy", {})
        return CommandConfig(
            raw=raw,
            shape=ShapeLoader.from_config(raw),
            root=_parse_root(raw.get("root")),
            level=int(raw["level"]) if "level" in raw else None,
            levels=_parse_levels(raw.get("levels")),
            mesh=_parse_mesh(raw.get("mesh", {})),
            trace_field=data.get("trace"),
            density_field=data.get("density"),
            density_mode=data.get("density_mode", "values"),
            cauchy_real=cauchy.get("real"),
            cauchy_imag=cauchy.get("imag"),
            windows={name: _parse_rect(rect) for name, rect in raw.get("windows", {}).items()},
            points=[(float(x), float(y)) for x, y in raw.get("points", [])],
            pitch=float(raw.get("pitch", 0.02)),
            terms=int(raw.get("terms", 20)),
            sign=str(raw.get("sign", "+")),
            seed=int(raw.get("seed", DEFAULT_SEED)),
            random_traces=int(raw.get("random_traces", 0)),
            quadrature_order=int(raw.get("quadrature_order", 8)),
            merge_collinear=bool(raw.get("merge_collinear", False)),
        )
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed configuration: {exc}", operation="cli.load_config") from exc


def _parse_root(spec) -> Optional[DyadicIndex]:
    """``{"level": l, "index": [j1, j2]}``"""
    if spec is None:
        return None
    j1, j2 = spec["index"]
    return DyadicIndex(int(spec["level"]), int(j1), int(j2))


def _parse_levels(spec) -> Tuple[int, ...]:
    """A list of levels or ``{"min": a, "max": b}``"""
    if spec is None:
        return ()
    if isinstance(spec, dict):
        return tuple(range(int(spec["min"]), int(spec["max"]) + 1))
    return tuple(int(k) for k in spec)


def _parse_rect(spec) -> Rect:
    x0, y0, x1, y1 = (float(v) for v in spec)
    if not (x1 > x0 and y1 > y0):
        raise ValueError(f"empty window {spec}")
    return x0, y0, x1, y1


def _parse_mesh(spec: Dict) -> MeshSpec:
    kind = spec.get("kind", "region")
    if kind not in MESH_KINDS:
        raise ValueError(f"mesh kind must be one of {MESH_KINDS}, got {kind!r}")
    return MeshSpec(
        kind=kind,
        n=int(spec.get("n", 256)),
        radius=float(spec.get("radius", 1.0)),
        center=tuple(float(v) for v in spec.get("center", (0.0, 0.0))),
        bounds=_parse_rect(spec.get("bounds", (0.0, 0.0, 1.0, 1.0))),
        panels_per_side=int(spec.get("panels_per_side", 1)),
        pitch=float(spec["pitch"]) if "pitch" in spec else None,
        refine=int(spec.get("refine", 1)),
    )
