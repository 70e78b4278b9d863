"""
Poincare-Steklov forms, trace norms and extension-operator norms.

The interior and exterior forms are the energies of the harmonic extensions of
a trace; their sum is the V^-1 form of the jump-free extension.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
import scipy.linalg

from dyadpot.boundary.density import DensityFn
from dyadpot.boundary.trace import TraceFn
from dyadpot.errors import MeshMismatch, SingularForm
from dyadpot.logger import Logger as log
from dyadpot.operators.assemble import OperatorSet, symmetrize


@dataclass(frozen=True, eq=False)
class SteklovForms:
    """Symmetric matrices of the interior and exterior energy forms on traces"""
    interior: np.ndarray
    exterior: np.ndarray

    def q_interior(self, f: np.ndarray) -> float:
        return float(np.real(np.conj(f) @ self.interior @ f))

    def q_exterior(self, f: np.ndarray) -> float:
        return float(np.real(np.conj(f) @ self.exterior @ f))

    @property
    def total(self) -> np.ndarray:
        return self.interior + self.exterior


def steklov_forms(ops: OperatorSet) -> SteklovForms:
    """
    Interior form Pi^T V^-1 (Pi/2 + K) and exterior form Pi^T V^-1 (Pi/2 - K).

    :param ops: OperatorSet
    :return: SteklovForms
    """
    half = 0.5 * ops.Pi
    left = ops.V_inv_Pi.T
    interior = symmetrize(left @ (half + ops.K))
    exterior = symmetrize(left @ (half - ops.K))
    return SteklovForms(interior=interior, exterior=exterior)


def _values(ops: OperatorSet, f: TraceFn) -> np.ndarray:
    if not f.mesh.same_as(ops.mesh):
        raise MeshMismatch("trace and operators live on different meshes", operation="operators.trace_norms")
    return f.values


def trace_norms(ops: OperatorSet, f: TraceFn, forms: SteklovForms = None) -> Tuple[float, float, float]:
    """
    Interior, exterior and full trace norms of a gauged trace.

    :return: (||f||_Tr_i, ||f||_Tr_e, ||f||_Tr)
    """
    forms = forms or steklov_forms(ops)
    values = _values(ops, f)
    qi = max(forms.q_interior(values), 0.0)
    qe = max(forms.q_exterior(values), 0.0)
    return float(np.sqrt(qi)), float(np.sqrt(qe)), float(np.sqrt(qi + qe))


def extension_norms(ops: OperatorSet, forms: SteklovForms = None) -> Tuple[float, float]:
    """
    Norms of the harmonic extension operators from the interior and the exterior.

    With mu the generalized eigenvalues of (q_i, q_i + q_e) on the reduced trace
    space, sup q_e/q_i = 1/mu_min - 1 and sup q_i/q_e = 1/(1 - mu_max) - 1.

    :return: (||E_int||, ||E_ext||)
    """
    forms = forms or steklov_forms(ops)
    z = ops.reduced_basis
    a_int = symmetrize(z.T @ forms.interior @ z)
    b_tot = symmetrize(z.T @ ops.G @ z)
    try:
        mu = scipy.linalg.eigh(a_int, b_tot, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise SingularForm(f"V^-1 form is not positive definite on the reduced traces: {exc}",
                           operation="operators.extension_norms") from exc
    mu_min, mu_max = float(mu.min()), float(mu.max())
    if mu_min <= 0.0 or mu_max >= 1.0:
        raise SingularForm(f"interior/exterior energy ratio degenerates (mu in [{mu_min:g}, {mu_max:g}])",
                           operation="operators.extension_norms")
    e_int = float(np.sqrt(1.0 / mu_min))
    e_ext = float(np.sqrt(1.0 / (1.0 - mu_max)))
    log.parameter("extension norm interior", e_int)
    log.parameter("extension norm exterior", e_ext)
    return e_int, e_ext


def layer_potential_energies(ops: OperatorSet, f: TraceFn, g: DensityFn) -> Dict[str, float]:
    """
    Dirichlet energies of S g and D f over the plane and the norms of the data.

    ||S g||^2 = <g, V g> and ||D f||^2 = <W f, f>. The trace norm is the V^-1 form
    and the density norm its dual over the reduced trace space.
    """
    fv = _values(ops, f)
    gv = g.values
    s_energy = float(np.real(np.conj(gv) @ ops.V @ gv))
    d_energy = float(np.real(np.conj(fv) @ ops.W @ fv))
    return {
        "single_layer_energy": s_energy,
        "double_layer_energy": d_energy,
        "density_norm_sq": density_dual_norm_sq(ops, gv),
        "trace_norm_sq": float(np.real(np.conj(fv) @ ops.G @ fv)),
    }


def density_dual_norm_sq(ops: OperatorSet, g: np.ndarray) -> float:
    """sup over traces f of <g, f>^2 / ||f||^2_{V^-1}"""
    z = ops.reduced_basis
    y = z.T @ (ops.Pi.T @ np.asarray(g))
    gram = symmetrize(z.T @ ops.G @ z)
    return float(np.real(np.conj(y) @ scipy.linalg.solve(gram, y, assume_a="pos")))
