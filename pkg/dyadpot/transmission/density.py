"""Single layer densities from boundary traces and back"""

import numpy as np

from dyadpot.boundary.density import DensityFn
from dyadpot.errors import SingularV
from dyadpot.operators.assemble import OperatorSet

RESIDUAL_TOL = 1e-8


def slp_density_from_trace(ops: OperatorSet, midpoint_values: np.ndarray) -> DensityFn:
    """
    Mean-zero density whose single layer trace matches the data modulo constants.

    :param ops: OperatorSet
    :param midpoint_values: (n_panels,) trace values at panel midpoints
    :return: DensityFn
    """
    values = np.asarray(midpoint_values)
    lengths = ops.mesh.lengths
    rhs = lengths * values
    g = ops.solve_V(rhs)
    misfit = rhs - ops.V @ g
    misfit = misfit - lengths * (lengths @ misfit) / (lengths @ lengths)
    scale = max(float(np.linalg.norm(rhs)), np.finfo(float).tiny)
    if float(np.linalg.norm(misfit)) > RESIDUAL_TOL * scale:
        raise SingularV(f"single layer solve residual {np.linalg.norm(misfit) / scale:.3g} exceeds {RESIDUAL_TOL:g}",
                        operation="transmission.slp_density_from_trace")
    return DensityFn(ops.mesh, g)


def trace_from_density(ops: OperatorSet, g: DensityFn) -> np.ndarray:
    """Panel averages of the single layer trace of g"""
    return (ops.V @ g.values) / ops.mesh.lengths
