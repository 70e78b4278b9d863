"""
Direct Cauchy integral over a polygonal boundary.

Data are complex nodal values, linear along each panel. Off the boundary the
sum of panel closed forms is holomorphic; at panel midpoints the principal
value is taken panel by panel.
"""

from typing import Tuple, Union

import numpy as np

from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.boundary.trace import TraceFn
from dyadpot.errors import TargetOnPanel
from dyadpot.kernels.cauchy import cauchy_terms
from dyadpot.kernels.request import ON_PANEL_TOL
from dyadpot.parallel import map_chunks, map_points

CAUCHY_CHUNK_ENTRIES = 1 << 20


def _complex_points(points) -> np.ndarray:
    points = np.asarray(points)
    if np.iscomplexobj(points):
        return points.ravel()
    points = points.reshape(-1, 2).astype(float)
    return points[:, 0] + 1j * points[:, 1]


def _nodal(f: Union[TraceFn, np.ndarray]) -> np.ndarray:
    values = f.values if isinstance(f, TraceFn) else f
    return np.asarray(values, dtype=complex)


def _endpoints(mesh: BoundaryMesh) -> Tuple[np.ndarray, np.ndarray]:
    return mesh.starts[:, 0] + 1j * mesh.starts[:, 1], mesh.ends[:, 0] + 1j * mesh.ends[:, 1]


def _panels(mesh: BoundaryMesh, f: np.ndarray):
    a, b = _endpoints(mesh)
    return a, b, f[mesh.start_ids], f[mesh.end_ids]


def _on_boundary(mesh: BoundaryMesh, z: np.ndarray) -> np.ndarray:
    """Boolean per point: lies on some closed panel"""
    a, b = _endpoints(mesh)
    rel = (z[:, None] - a[None, :]) / (b - a)[None, :]
    on = (np.abs(rel.imag) <= ON_PANEL_TOL) & (rel.real >= -ON_PANEL_TOL) & (rel.real <= 1 + ON_PANEL_TOL)
    return on.any(axis=1)


def cauchy_evaluate(mesh: BoundaryMesh, f, points, derivative: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Values and z-derivatives of the Cauchy integral off the boundary.

    :param mesh: BoundaryMesh, counterclockwise outer loop
    :param f: complex nodal values or TraceFn
    :param points: (n, 2) real or (n,) complex
    :param derivative: bool also return derivatives (else zeros)
    :return: (values, derivatives)
    """
    z = _complex_points(points)
    a, b, fa, fb = _panels(mesh, _nodal(f))

    def evaluate(zc: np.ndarray) -> np.ndarray:
        if _on_boundary(mesh, zc).any():
            raise TargetOnPanel("Cauchy integral evaluated on the boundary; use the midpoint principal value",
                                operation="cauchy.cauchy_integral")
        vals, ders = cauchy_terms(a[None, :], b[None, :], fa[None, :], fb[None, :], zc[:, None])
        out = vals.sum(axis=1)
        if derivative:
            return np.column_stack([out, ders.sum(axis=1)])
        return np.column_stack([out, np.zeros_like(out)])

    chunk = max(1, CAUCHY_CHUNK_ENTRIES // mesh.n_panels)
    both = map_points(evaluate, z, chunk_size=chunk)
    return both[:, 0], both[:, 1]


def cauchy_integral(mesh: BoundaryMesh, f, points) -> np.ndarray:
    """(1/2 pi i) sum over panels of int f(zeta)/(zeta - z) dzeta at off-boundary points"""
    return cauchy_evaluate(mesh, f, points)[0]


def cauchy_principal_value(mesh: BoundaryMesh, f) -> np.ndarray:
    """Principal value of the Cauchy integral at every panel midpoint"""
    a, b, fa, fb = _panels(mesh, _nodal(f))
    z = mesh.midpoints[:, 0] + 1j * mesh.midpoints[:, 1]
    own = np.eye(mesh.n_panels, dtype=bool)

    def evaluate(rows: slice) -> np.ndarray:
        vals, _ = cauchy_terms(a[None, :], b[None, :], fa[None, :], fb[None, :], z[rows, None],
                               principal_value=own[rows])
        return vals.sum(axis=1)

    chunk = max(1, CAUCHY_CHUNK_ENTRIES // mesh.n_panels)
    return np.concatenate(map_chunks(evaluate, mesh.n_panels, chunk_size=chunk))
