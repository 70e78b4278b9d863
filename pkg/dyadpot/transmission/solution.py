"""
Layer-potential representation u = S g - D f of the transmission problem.

With jumps taken as interior minus exterior, u has trace jump f and
normal-derivative jump g. The representation is explicit, so "solving" stores
the data and evaluation sums the closed-form panel integrals.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from dyadpot.boundary.density import DensityFn
from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.boundary.trace import TraceFn
from dyadpot.errors import GaugeViolation, MeshMismatch
from dyadpot.kernels.laplace import dlp_weights, grad_dlp_weights, grad_slp_weights, slp_weights
from dyadpot.logger import Logger as log
from dyadpot.parallel import map_points

# (points x panels) entries evaluated per chunk
FIELD_CHUNK_ENTRIES = 1 << 20

PARTS = ("full", "single", "double")


def layer_field(
    mesh: BoundaryMesh,
    trace: Optional[np.ndarray],
    density: Optional[np.ndarray],
    points: np.ndarray,
    gradient: bool = False,
) -> np.ndarray:
    """
    Values (or gradients) of S density + sum_q int K_dlp trace at points.

    The double layer term enters with a plus sign, so the result is S g - D f.

    :param mesh: BoundaryMesh
    :param trace: nodal values or None
    :param density: panel values or None
    :param points: (n, 2)
    :param gradient: bool return (n, 2) gradients instead of values
    :return: (n,) or (n, 2)
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    a = mesh.starts[None, :, :]
    b = mesh.ends[None, :, :]
    dtype = np.result_type(*(v for v in (trace, density, np.zeros(1)) if v is not None))

    def evaluate(pts: np.ndarray) -> np.ndarray:
        x = pts[:, None, :]
        shape = (len(pts), 2) if gradient else (len(pts),)
        out = np.zeros(shape, dtype=dtype)
        if density is not None:
            slp_c = (grad_slp_weights if gradient else slp_weights)(a, b, x)[0]
            out = out + (np.einsum("npd,p->nd", slp_c, density) if gradient else slp_c @ density)
        if trace is not None:
            _, dlp_a, dlp_b = (grad_dlp_weights if gradient else dlp_weights)(a, b, x)
            fs, fe = trace[mesh.start_ids], trace[mesh.end_ids]
            if gradient:
                out = out + np.einsum("npd,p->nd", dlp_a, fs) + np.einsum("npd,p->nd", dlp_b, fe)
            else:
                out = out + dlp_a @ fs + dlp_b @ fe
        return out

    chunk = max(1, FIELD_CHUNK_ENTRIES // max(mesh.n_panels, 1))
    return map_points(evaluate, points, chunk_size=chunk)


@dataclass(frozen=True, eq=False)
class FieldSample:
    """Values and exact gradients of a field on a point set"""
    points: np.ndarray
    values: np.ndarray
    gradients: np.ndarray
    window: Optional[Tuple[float, float, float, float]] = None
    cell_area: Optional[float] = None

    def seminorm(self) -> float:
        """Midpoint-rule Dirichlet seminorm over the window"""
        if self.cell_area is None:
            raise ValueError("field sample has no quadrature weights")
        return float(np.sqrt(self.cell_area * np.sum(np.abs(self.gradients) ** 2)))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "x": self.points[:, 0],
            "y": self.points[:, 1],
            "u": np.real(self.values),
            "ux": np.real(self.gradients[:, 0]),
            "uy": np.real(self.gradients[:, 1]),
        })


@dataclass(frozen=True, eq=False)
class TransmissionSolution:
    """u = S g - D f for gauged jump data on one mesh"""
    mesh: BoundaryMesh
    f: TraceFn
    g: DensityFn

    def _data(self, part: str):
        if part not in PARTS:
            raise ValueError(f"field part must be one of {PARTS}, got {part!r}")
        trace = None if part == "single" else self.f.values
        density = None if part == "double" else self.g.values
        sign = -1.0 if part == "double" else 1.0
        return trace, density, sign

    def values(self, points: np.ndarray, part: str = "full") -> np.ndarray:
        """Field values; ``part='double'`` gives D f and ``'single'`` gives S g"""
        trace, density, sign = self._data(part)
        return sign * layer_field(self.mesh, trace, density, points)

    def gradients(self, points: np.ndarray, part: str = "full") -> np.ndarray:
        trace, density, sign = self._data(part)
        return sign * layer_field(self.mesh, trace, density, points, gradient=True)

    def double_layer(self, points: np.ndarray) -> np.ndarray:
        """D f alone, with trace jump -f"""
        return self.values(points, part="double")

    def single_layer(self, points: np.ndarray) -> np.ndarray:
        return self.values(points, part="single")

    def sample(self, points: np.ndarray, part: str = "full", window=None, cell_area=None) -> FieldSample:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        return FieldSample(points=points, values=self.values(points, part), gradients=self.gradients(points, part),
                           window=window, cell_area=cell_area)


def solve_transmission(mesh: BoundaryMesh, f: TraceFn, g: DensityFn) -> TransmissionSolution:
    """
    Representation of the harmonic field with jumps ([Tr u], [d_n u]) = (f, g).

    :param mesh: BoundaryMesh
    :param f: TraceFn gauged
    :param g: DensityFn with zero total
    :return: TransmissionSolution
    """
    if not (f.mesh.same_as(mesh) and g.mesh.same_as(mesh)):
        raise MeshMismatch("jump data live on a different mesh", operation="transmission.solve_transmission")
    if not f.is_gauged():
        raise GaugeViolation("trace jump has nonzero mean", operation="transmission.solve_transmission")
    if not g.is_admissible():
        raise GaugeViolation("normal-derivative jump does not annihilate constants",
                             operation="transmission.solve_transmission")
    log.parameter("transmission panels", mesh.n_panels)
    return TransmissionSolution(mesh=mesh, f=f, g=g)
