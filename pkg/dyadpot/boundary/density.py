"""
Piecewise-constant boundary densities and the density/trace pairing.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.boundary.trace import TraceFn, panel_integrals
from dyadpot.errors import MeshMismatch, NonFinite

# |sum value * length| <= ADMISSIBLE_TOL * sum |value| * length
ADMISSIBLE_TOL = 1e-12


def density_total(mesh: BoundaryMesh, values: np.ndarray) -> Union[float, complex]:
    return (np.asarray(values) * mesh.lengths).sum()


def gauge_density(mesh: BoundaryMesh, values: np.ndarray) -> np.ndarray:
    """Remove the mean so the density annihilates constants"""
    values = np.asarray(values)
    return values - density_total(mesh, values) / mesh.total_length


@dataclass(frozen=True, eq=False)
class DensityFn:
    """Per-panel constant density"""
    mesh: BoundaryMesh
    values: np.ndarray
    gauged: bool = True

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != (self.mesh.n_panels,):
            raise MeshMismatch(f"density has {values.shape} values for {self.mesh.n_panels} panels",
                               operation="boundary_space.DensityFn")
        if self.gauged:
            values = gauge_density(self.mesh, values)
        object.__setattr__(self, "values", values)

    @property
    def real(self) -> "DensityFn":
        return DensityFn(self.mesh, self.values.real.copy(), self.gauged)

    @property
    def imag(self) -> "DensityFn":
        return DensityFn(self.mesh, self.values.imag.copy(), self.gauged)

    def is_admissible(self) -> bool:
        scale = float((np.abs(self.values) * self.mesh.lengths).sum())
        return abs(density_total(self.mesh, self.values)) <= ADMISSIBLE_TOL * max(scale, np.finfo(float).tiny)

    def __add__(self, other: "DensityFn") -> "DensityFn":
        if not self.mesh.same_as(other.mesh):
            raise MeshMismatch("densities live on different meshes", operation="boundary_space.DensityFn")
        return DensityFn(self.mesh, self.values + other.values, self.gauged and other.gauged)

    def __mul__(self, scalar) -> "DensityFn":
        return DensityFn(self.mesh, self.values * scalar, self.gauged)

    __rmul__ = __mul__


def pair(g: DensityFn, f: TraceFn):
    """
    Duality pairing sum_p g_p * integral of f over panel p.

    :param g: DensityFn
    :param f: TraceFn
    :return: scalar
    """
    if not g.mesh.same_as(f.mesh):
        raise MeshMismatch("density and trace live on different meshes", operation="boundary_space.pair")
    return (g.values * panel_integrals(f.mesh, f.values)).sum()


def panel_average(
    mesh: BoundaryMesh,
    field: Callable[[np.ndarray], np.ndarray],
    order: int = 8,
    gauged: bool = True,
) -> DensityFn:
    """Gauss average of a scalar field over every panel"""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    s = 0.5 * (nodes + 1.0)
    pts = mesh.starts[:, None, :] + s[None, :, None] * (mesh.ends - mesh.starts)[:, None, :]
    values = np.asarray(field(pts.reshape(-1, 2))).reshape(mesh.n_panels, order)
    averages = 0.5 * values @ weights
    if not np.all(np.isfinite(averages)):
        raise NonFinite("field is not finite on the boundary", operation="boundary_space.panel_average")
    return DensityFn(mesh, averages, gauged=gauged)


def normal_flux(
    mesh: BoundaryMesh,
    gradient: Callable[[np.ndarray], np.ndarray],
    order: int = 8,
    gauged: bool = True,
    normals: Optional[np.ndarray] = None,
) -> DensityFn:
    """Panel averages of grad G . nu for a gradient field (n, 2) -> (n, 2)"""
    nu = mesh.normals if normals is None else normals
    nodes, weights = np.polynomial.legendre.leggauss(order)
    s = 0.5 * (nodes + 1.0)
    pts = mesh.starts[:, None, :] + s[None, :, None] * (mesh.ends - mesh.starts)[:, None, :]
    grads = np.asarray(gradient(pts.reshape(-1, 2))).reshape(mesh.n_panels, order, 2)
    flux = np.einsum("pqd,pd->pq", grads, nu)
    averages = 0.5 * flux @ weights
    if not np.all(np.isfinite(averages)):
        raise NonFinite("gradient is not finite on the boundary", operation="boundary_space.normal_flux")
    return DensityFn(mesh, averages, gauged=gauged)
