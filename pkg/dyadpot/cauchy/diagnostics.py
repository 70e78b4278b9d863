import numpy as np
import shapely
from shapely.geometry import LinearRing

from dyadpot.boundary.trace import TraceFn
from dyadpot.cauchy.field import CauchyField
from dyadpot.cauchy.integral import cauchy_principal_value
from dyadpot.errors import MeshMismatch, TargetOnPanel
from dyadpot.logger import Logger as log
from dyadpot.operators.assemble import OperatorSet

# holomorphy probes keep this fraction of the mesh diameter from the boundary
MIN_PROBE_DISTANCE = 0.05

MODES = ("direct", "decomposition")


def _panel_gauge(lengths: np.ndarray, values: np.ndarray) -> np.ndarray:
    return values - (lengths @ values) / lengths.sum()


def np_cauchy_identity_check(ops: OperatorSet, f: TraceFn) -> float:
    """
    Largest deviation between Re PV Cauchy(f) at midpoints and the panel averages
    of -K f, both gauged to zero length-weighted mean.

    :param ops: OperatorSet
    :param f: real TraceFn
    :return: float max absolute residual
    """
    if not f.mesh.same_as(ops.mesh):
        raise MeshMismatch("trace and operators live on different meshes",
                           operation="cauchy.np_cauchy_identity_check")
    lengths = ops.mesh.lengths
    cauchy_side = cauchy_principal_value(ops.mesh, f.values.astype(complex)).real
    np_side = -(ops.K @ np.real(f.values)) / lengths
    residual = _panel_gauge(lengths, cauchy_side) - _panel_gauge(lengths, np_side)
    value = float(np.abs(residual).max(initial=0.0))
    log.parameter("NP-Cauchy identity residual", value)
    return value


def boundary_distance(mesh, points: np.ndarray) -> np.ndarray:
    """Distance of every point to the nearest panel"""
    probes = shapely.points(np.asarray(points, dtype=float).reshape(-1, 2))
    return np.min([shapely.distance(LinearRing(loop), probes) for loop in mesh.loops()], axis=0)


def cauchy_riemann_defect(grad_u: np.ndarray, grad_v: np.ndarray) -> np.ndarray:
    return np.abs(grad_u[:, 0] - grad_v[:, 1]) + np.abs(grad_u[:, 1] + grad_v[:, 0])


def holomorphy_residual(field: CauchyField, points: np.ndarray, mode: str = "direct") -> float:
    """
    Relative Cauchy-Riemann residual max(|u_x - v_y| + |u_y + v_x|) / max |grad|.

    :param field: CauchyField
    :param points: (n, 2) at least 0.05 diameters from the boundary
    :param mode: 'direct' or 'decomposition'
    :return: float
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    mesh = field.mesh
    distance = boundary_distance(mesh, points)
    limit = MIN_PROBE_DISTANCE * mesh.diameter
    if np.any(distance < limit):
        raise TargetOnPanel(f"holomorphy probe within {distance.min():.3g} of the boundary (need {limit:.3g})",
                            operation="cauchy.holomorphy_residual")
    if mode == "direct":
        grad_u, grad_v = field.direct_gradients(points)
    else:
        grad_u, grad_v = field.decomposition_gradients(points)
    residual = cauchy_riemann_defect(grad_u, grad_v)
    scale = float(np.max(np.abs(grad_u).sum(axis=1) + np.abs(grad_v).sum(axis=1), initial=0.0))
    value = float(residual.max(initial=0.0)) / max(scale, np.finfo(float).tiny)
    log.parameter(f"holomorphy residual ({mode})", value)
    return value
