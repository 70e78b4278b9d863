"""
Calderon projectors on (trace, density) pairs.

For jumps (f, g) = ([Tr u], [d_n u]) of u = S g - D f the interior projector
returns (tr_i u, d_i u) and the exterior one (tr_e u, d_e u):

    C_i = I/2 + [[-K, V], [W, K*]],   C_e = C_i - I.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
import scipy.linalg

from dyadpot.boundary.density import DensityFn
from dyadpot.boundary.trace import TraceFn
from dyadpot.errors import MeshMismatch
from dyadpot.logger import Logger as log
from dyadpot.operators.assemble import OperatorSet, symmetrize

# smooth trace and density modes probed by the idempotence residual
SMOOTH_MODES = 16


@dataclass(frozen=True, eq=False)
class CalderonBlocks:
    """Blocks of M = [[-K, V], [W, K*]] as nodal/panel matrices"""
    ops: OperatorSet
    minus_K: np.ndarray
    V: np.ndarray
    W: np.ndarray
    K_adjoint: np.ndarray

    @property
    def size(self) -> Tuple[int, int]:
        return self.ops.mesh.n_vertices, self.ops.mesh.n_panels

    def apply_block(self, f: np.ndarray, g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.minus_K @ f + self.V @ g, self.W @ f + self.K_adjoint @ g

    def apply_interior_values(self, f: np.ndarray, g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        mf, mg = self.apply_block(f, g)
        return 0.5 * f + mf, 0.5 * g + mg

    def apply_exterior_values(self, f: np.ndarray, g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        mf, mg = self.apply_block(f, g)
        return mf - 0.5 * f, mg - 0.5 * g

    def apply_interior(self, f: TraceFn, g: DensityFn) -> Tuple[TraceFn, DensityFn]:
        self._check(f, g)
        tf, tg = self.apply_interior_values(f.values, g.values)
        return TraceFn(self.ops.mesh, tf), DensityFn(self.ops.mesh, tg)

    def apply_exterior(self, f: TraceFn, g: DensityFn) -> Tuple[TraceFn, DensityFn]:
        self._check(f, g)
        tf, tg = self.apply_exterior_values(f.values, g.values)
        return TraceFn(self.ops.mesh, tf), DensityFn(self.ops.mesh, tg)

    def _check(self, f: TraceFn, g: DensityFn) -> None:
        if not (f.mesh.same_as(self.ops.mesh) and g.mesh.same_as(self.ops.mesh)):
            raise MeshMismatch("Calderon data live on a different mesh", operation="operators.calderon")

    @cached_property
    def smooth_basis(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Lowest-frequency trace modes and smoothest density modes.

        Traces are the mean-zero eigenvectors of the arc-length stiffness
        T^T L T against the trace mass with the smallest eigenvalues; those
        stay clear of the kernel of Pi. Densities are the mean-zero modes with
        the largest V vs L2 quotient.
        """
        ops = self.ops
        z = scipy.linalg.null_space((ops.M_trace @ np.ones(ops.mesh.n_vertices))[None, :])
        m = min(SMOOTH_MODES, z.shape[1])
        stiffness = ops.T.T @ (ops.mesh.lengths[:, None] * ops.T)
        sz = symmetrize(z.T @ stiffness @ z)
        mz = symmetrize(z.T @ ops.M_trace @ z)
        _, evecs = scipy.linalg.eigh(sz, mz, subset_by_index=[0, m - 1])
        traces = z @ evecs

        y = scipy.linalg.null_space(ops.mesh.lengths[None, :])
        md = min(SMOOTH_MODES, y.shape[1])
        vy = symmetrize(y.T @ ops.V @ y)
        my = symmetrize(y.T @ (ops.M_density[:, None] * y))
        _, dvecs = scipy.linalg.eigh(vy, my, subset_by_index=[y.shape[1] - md, y.shape[1] - 1])
        return traces, y @ dvecs

    def idempotence_residual(self) -> float:
        """
        Largest ||(C_i^2 - C_i) x|| / ||x|| over smooth pairs x.

        Pairs are measured in the product of the V^-1 trace metric and the V
        density metric on mean-zero densities.
        """
        ops = self.ops
        traces, densities = self.smooth_basis
        nt, nd = traces.shape[1], densities.shape[1]
        f = np.hstack([traces, np.zeros((traces.shape[0], nd))])
        g = np.hstack([np.zeros((densities.shape[0], nt)), densities])
        c1f, c1g = self.apply_interior_values(f, g)
        c2f, c2g = self.apply_interior_values(c1f, c1g)
        rf, rg = c2f - c1f, c2g - c1g

        p = ops.density_gauge_matrix()
        v0 = symmetrize(p.T @ ops.V @ p)

        def gram(tf, tg):
            return symmetrize(tf.T @ ops.G @ tf + tg.T @ v0 @ tg)

        ratios = scipy.linalg.eigh(gram(rf, rg), gram(f, g), eigvals_only=True)
        residual = float(np.sqrt(max(ratios.max(), 0.0)))
        log.parameter("calderon idempotence residual", residual)
        return residual


def calderon(ops: OperatorSet) -> CalderonBlocks:
    """
    Wire the Calderon block operator from an assembled set.

    Traces map through the L2 projection onto piecewise-linear functions and
    densities through panel averages.
    """
    return CalderonBlocks(
        ops=ops,
        minus_K=-ops.solve_trace_mass(ops.K_trace),
        V=ops.solve_trace_mass(ops.V_trace),
        W=ops.solve_density_mass(ops.W_density),
        K_adjoint=ops.solve_density_mass(ops.K_density.T),
    )
