"""
Generalized Cauchy integral through layer potentials.

For complex data f = f_R + i f_I the field is

    (-D f_R + S g_I) + i (S g_R - D f_I)

where S g_R carries the single layer part of the imaginary trace of the Cauchy
integral of f_R and S g_I the single layer part of minus the imaginary trace of
the Cauchy integral of f_I. Both densities come from V-inverting principal values
at panel midpoints.
"""

from dataclasses import dataclass
from typing import Dict, Tuple, Union

import numpy as np

from dyadpot.boundary.density import DensityFn
from dyadpot.boundary.trace import TraceFn
from dyadpot.cauchy.integral import cauchy_evaluate, cauchy_principal_value
from dyadpot.errors import MeshMismatch
from dyadpot.logger import Logger as log
from dyadpot.operators.assemble import OperatorSet
from dyadpot.transmission.density import slp_density_from_trace
from dyadpot.transmission.solution import TransmissionSolution


@dataclass(frozen=True, eq=False)
class CauchyField:
    """Direct and decomposed Cauchy integrals of one complex trace"""
    ops: OperatorSet
    f: TraceFn
    g_real: DensityFn
    g_imag: DensityFn
    real_part: TransmissionSolution
    imag_part: TransmissionSolution

    @property
    def mesh(self):
        return self.ops.mesh

    def decomposition(self, points: np.ndarray) -> np.ndarray:
        return self.real_part.values(points) + 1j * self.imag_part.values(points)

    def decomposition_gradients(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Gradients of the real and imaginary parts"""
        return self.real_part.gradients(points), self.imag_part.gradients(points)

    def direct(self, points: np.ndarray) -> np.ndarray:
        return cauchy_evaluate(self.mesh, self.f, points)[0]

    def direct_derivative(self, points: np.ndarray) -> np.ndarray:
        return cauchy_evaluate(self.mesh, self.f, points, derivative=True)[1]

    def direct_gradients(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Gradients of Re and Im of the direct integral from its z-derivative"""
        d = self.direct_derivative(points)
        return np.column_stack([d.real, -d.imag]), np.column_stack([d.imag, d.real])

    def pieces(self, points: np.ndarray) -> Dict[str, np.ndarray]:
        return {
            "minus_double_real": self.real_part.values(points, part="double") * -1.0,
            "single_imag_density": self.real_part.values(points, part="single"),
            "single_real_density": self.imag_part.values(points, part="single"),
            "minus_double_imag": self.imag_part.values(points, part="double") * -1.0,
        }


def _conjugate_density(ops: OperatorSet, values: np.ndarray) -> DensityFn:
    """Density of the single layer whose trace is Im PV Cauchy(values)"""
    pv = cauchy_principal_value(ops.mesh, values.astype(complex))
    return slp_density_from_trace(ops, pv.imag)


def generalized_cauchy(ops: OperatorSet, f: Union[TraceFn, np.ndarray]) -> CauchyField:
    """
    Layer-potential decomposition of the Cauchy integral of complex data.

    :param ops: OperatorSet on a single-loop mesh
    :param f: complex TraceFn or nodal values, gauged
    :return: CauchyField
    """
    if not isinstance(f, TraceFn):
        f = TraceFn(ops.mesh, np.asarray(f, dtype=complex))
    if not f.mesh.same_as(ops.mesh):
        raise MeshMismatch("Cauchy data live on a different mesh", operation="cauchy.generalized_cauchy")
    f_real, f_imag = f.real, f.imag
    g_real = _conjugate_density(ops, f_real.values)
    g_imag = _conjugate_density(ops, f_imag.values) * -1.0
    field = CauchyField(
        ops=ops,
        f=TraceFn(ops.mesh, f.values.astype(complex)),
        g_real=g_real,
        g_imag=g_imag,
        real_part=TransmissionSolution(ops.mesh, f_real, g_imag),
        imag_part=TransmissionSolution(ops.mesh, f_imag, g_real),
    )
    log.parameter("generalized cauchy density norm", float(np.abs(g_real.values).max(initial=0.0)))
    return field
