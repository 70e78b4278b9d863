"""
Continuous piecewise-linear boundary traces.

Traces are elements of the trace space modulo constants; the gauge removes the
length-weighted mean.
"""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.errors import MeshMismatch, NonFinite

# |mean| <= GAUGE_TOL * max|value| counts as gauged
GAUGE_TOL = 1e-12

Field = Callable[[np.ndarray], np.ndarray]


def panel_integrals(mesh: BoundaryMesh, values: np.ndarray) -> np.ndarray:
    """Exact integral of the piecewise-linear function over each panel"""
    return 0.5 * mesh.lengths * (values[mesh.start_ids] + values[mesh.end_ids])


def trace_mean(mesh: BoundaryMesh, values: np.ndarray) -> Union[float, complex]:
    return panel_integrals(mesh, values).sum() / mesh.total_length


def gauge(mesh: BoundaryMesh, values: np.ndarray) -> np.ndarray:
    """Subtract the length-weighted mean"""
    values = np.asarray(values)
    return values - trace_mean(mesh, values)


@dataclass(frozen=True, eq=False)
class TraceFn:
    """Nodal values of a continuous piecewise-linear trace"""
    mesh: BoundaryMesh
    values: np.ndarray
    gauged: bool = True

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (self.mesh.n_vertices,):
            raise MeshMismatch(f"trace has {values.shape} values for {self.mesh.n_vertices} vertices",
                               operation="boundary_space.TraceFn")
        if self.gauged:
            values = gauge(self.mesh, values)
        object.__setattr__(self, "values", values)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def real(self) -> "TraceFn":
        return TraceFn(self.mesh, self.values.real.copy(), self.gauged)

    @property
    def imag(self) -> "TraceFn":
        return TraceFn(self.mesh, self.values.imag.copy(), self.gauged)

    def is_gauged(self) -> bool:
        scale = float(np.abs(self.values).max()) if self.values.size else 0.0
        return abs(trace_mean(self.mesh, self.values)) <= GAUGE_TOL * max(scale, np.finfo(float).tiny)

    def midpoint_values(self) -> np.ndarray:
        return 0.5 * (self.values[self.mesh.start_ids] + self.values[self.mesh.end_ids])

    def _check(self, other: "TraceFn") -> None:
        if not self.mesh.same_as(other.mesh):
            raise MeshMismatch("traces live on different meshes", operation="boundary_space.TraceFn")

    def __add__(self, other: "TraceFn") -> "TraceFn":
        self._check(other)
        return TraceFn(self.mesh, self.values + other.values, self.gauged and other.gauged)

    def __sub__(self, other: "TraceFn") -> "TraceFn":
        self._check(other)
        return TraceFn(self.mesh, self.values - other.values, self.gauged and other.gauged)

    def __mul__(self, scalar) -> "TraceFn":
        return TraceFn(self.mesh, self.values * scalar, self.gauged)

    __rmul__ = __mul__


def sample_trace(mesh: BoundaryMesh, field: Field, gauged: bool = True) -> TraceFn:
    """
    Nodal samples of a field defined near the boundary.

    :param mesh: BoundaryMesh
    :param field: vectorised callable (n, 2) -> (n,)
    :param gauged: bool subtract the mean
    :return: TraceFn
    """
    values = np.asarray(field(mesh.vertices))
    if values.shape != (mesh.n_vertices,):
        values = np.broadcast_to(values, (mesh.n_vertices,)).copy()
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise NonFinite(f"field is not finite at vertex {bad} {mesh.vertices[bad].tolist()}",
                        operation="boundary_space.sample_trace")
    return TraceFn(mesh, values, gauged=gauged)
