"""
Galerkin assembly of the boundary operators on a single closed loop.

Densities are piecewise constant on panels, traces piecewise linear on
vertices. Outer integrals use q-point Gauss rules on the test panel; inner
integrals are the exact panel formulas of ``dyadpot.kernels.laplace``. Columns
are assembled in fixed chunks of source panels so the result does not depend on
the thread count.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Tuple

import numpy as np
import scipy.linalg

from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.errors import MultiLoopUnsupported, SingularMass, SingularV
from dyadpot.kernels.laplace import dlp_weights, slp_weights
from dyadpot.logger import Logger as log
from dyadpot.parallel import map_chunks

# entries per chunk of (targets x source panels)
CHUNK_ENTRIES = 1 << 21
# reduced trace space keeps eigenvalues of G above this fraction of the largest
RANGE_TOL = 1e-10


def gauss_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]"""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """
    Assembled matrices on one mesh.

    ``V`` (panel x panel) single layer, ``K`` (panel x vertex) density-tested
    Neumann-Poincare pairing, ``W`` (vertex x vertex) hypersingular form,
    ``Pi`` (panel x vertex) pairing, ``T`` (panel x vertex) arc-length
    derivative. The remaining matrices are the trace-tested and panel-tested
    variants used by the Calderon blocks.
    """
    mesh: BoundaryMesh
    quadrature_order: int
    V: np.ndarray
    K: np.ndarray
    K_trace: np.ndarray
    K_density: np.ndarray
    V_trace: np.ndarray
    V_node: np.ndarray
    W: np.ndarray
    W_density: np.ndarray
    Pi: np.ndarray
    T: np.ndarray
    M_trace: np.ndarray
    M_density: np.ndarray

    @property
    def n(self) -> int:
        return self.mesh.n_panels

    @cached_property
    def _v_lu(self):
        lengths = self.mesh.lengths
        n = self.n
        aug = np.zeros((n + 1, n + 1))
        aug[:n, :n] = self.V
        aug[:n, n] = lengths
        aug[n, :n] = lengths
        lu, piv = scipy.linalg.lu_factor(aug, check_finite=False)
        pivots = np.abs(np.diag(lu))
        if not np.all(np.isfinite(lu)) or pivots.min() <= np.finfo(float).eps * pivots.max():
            raise SingularV(f"single layer matrix is singular on mean-zero densities ({n} panels)",
                            operation="operators.solve_V")
        return lu, piv

    def solve_V(self, rhs: np.ndarray) -> np.ndarray:
        """
        Mean-zero density g with V g = rhs up to a constant multiplier.

        :param rhs: (n,) or (n, m) panel-tested right-hand side
        :return: same shape as rhs
        """
        rhs = np.asarray(rhs)
        pad = np.zeros((1,) + rhs.shape[1:], dtype=rhs.dtype)
        sol = scipy.linalg.lu_solve(self._v_lu, np.concatenate([rhs, pad], axis=0), check_finite=False)
        return sol[: self.n]

    @cached_property
    def _mass_chol(self):
        try:
            return scipy.linalg.cho_factor(self.M_trace, check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise SingularMass(f"trace mass matrix is not positive definite: {exc}",
                               operation="operators.np_apply") from exc

    def solve_trace_mass(self, rhs: np.ndarray) -> np.ndarray:
        return scipy.linalg.cho_solve(self._mass_chol, rhs, check_finite=False)

    def solve_density_mass(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.asarray(rhs)
        return rhs / (self.M_density.reshape((-1,) + (1,) * (rhs.ndim - 1)))

    @cached_property
    def V_inv_Pi(self) -> np.ndarray:
        return self.solve_V(self.Pi)

    @cached_property
    def G(self) -> np.ndarray:
        """Trace-side V^-1 form Pi^T V^-1 Pi; constants span part of its kernel"""
        return symmetrize(self.Pi.T @ self.V_inv_Pi)

    @cached_property
    def reduced_basis(self) -> np.ndarray:
        """Orthonormal basis of the range of G, the traces with nonzero V^-1 norm"""
        evals, evecs = scipy.linalg.eigh(self.G)
        keep = evals > RANGE_TOL * evals.max()
        return evecs[:, keep]

    def density_gauge_matrix(self) -> np.ndarray:
        """Projection removing the length-weighted density mean"""
        lengths = self.mesh.lengths
        return np.eye(self.n) - np.outer(np.ones(self.n), lengths) / lengths.sum()

    def v_inverse_norm(self, values: np.ndarray) -> float:
        values = np.asarray(values)
        return float(np.sqrt(max(np.real(np.conj(values) @ self.G @ values), 0.0)))

    def matrices(self) -> Dict[str, np.ndarray]:
        return {"V": self.V, "K": self.K, "W": self.W, "Pi": self.Pi, "T": self.T}


def _column_block(mesh: BoundaryMesh, targets: np.ndarray, wl: np.ndarray, s: np.ndarray, cols: slice):
    """Contributions of the source panels in ``cols``"""
    n, q = wl.shape
    a = mesh.starts[cols][None, :, :]
    b = mesh.ends[cols][None, :, :]
    x = targets.reshape(-1, 1, 2)
    slp_c, _, _ = slp_weights(a, b, x)
    dlp_c, dlp_a, dlp_b = dlp_weights(a, b, x)
    shape = (n, q, -1)
    slp_c, dlp_c, dlp_a, dlp_b = (arr.reshape(shape) for arr in (slp_c, dlp_c, dlp_a, dlp_b))
    w_start = wl * (1.0 - s)
    w_end = wl * s

    def trace_tested(values):
        out = np.zeros((mesh.n_vertices, values.shape[-1]))
        out[mesh.start_ids] += np.einsum("pg,pgc->pc", w_start, values)
        out[mesh.end_ids] += np.einsum("pg,pgc->pc", w_end, values)
        return out

    v_node, _, _ = slp_weights(a, b, mesh.vertices[:, None, :])
    return {
        "V": np.einsum("pg,pgc->pc", wl, slp_c),
        "V_trace": trace_tested(slp_c),
        "V_node": v_node,
        "K_density": -np.einsum("pg,pgc->pc", wl, dlp_c),
        "K_a": -np.einsum("pg,pgc->pc", wl, dlp_a),
        "K_b": -np.einsum("pg,pgc->pc", wl, dlp_b),
        "Kt_a": -trace_tested(dlp_a),
        "Kt_b": -trace_tested(dlp_b),
    }


def assemble(mesh: BoundaryMesh, quadrature_order: int = 8) -> OperatorSet:
    """
    Assemble the operator set of a single-loop mesh.

    :param mesh: BoundaryMesh with one closed loop
    :param quadrature_order: int Gauss points per test panel
    :return: OperatorSet
    """
    if mesh.n_loops != 1:
        raise MultiLoopUnsupported(f"mesh has {mesh.n_loops} loops; the operator calculus needs one",
                                   operation="operators.assemble")
    n, nv = mesh.n_panels, mesh.n_vertices
    s, w = gauss_rule(quadrature_order)
    lengths = mesh.lengths
    wl = lengths[:, None] * w[None, :]
    targets = mesh.starts[:, None, :] + s[None, :, None] * (mesh.ends - mesh.starts)[:, None, :]

    chunk = max(1, CHUNK_ENTRIES // (n * quadrature_order))
    blocks = map_chunks(lambda cols: _column_block(mesh, targets, wl, s, cols), n, chunk_size=chunk)
    cat = {key: np.concatenate([blk[key] for blk in blocks], axis=1) for key in blocks[0]}

    K = np.zeros((n, nv))
    K[:, mesh.start_ids] += cat["K_a"]
    K[:, mesh.end_ids] += cat["K_b"]
    K_trace = np.zeros((nv, nv))
    K_trace[:, mesh.start_ids] += cat["Kt_a"]
    K_trace[:, mesh.end_ids] += cat["Kt_b"]

    T = np.zeros((n, nv))
    T[np.arange(n), mesh.start_ids] = -1.0 / lengths
    T[np.arange(n), mesh.end_ids] = 1.0 / lengths
    Pi = np.zeros((n, nv))
    Pi[np.arange(n), mesh.start_ids] = 0.5 * lengths
    Pi[np.arange(n), mesh.end_ids] = 0.5 * lengths
    M_trace = np.zeros((nv, nv))
    np.add.at(M_trace, (mesh.start_ids, mesh.start_ids), lengths / 3.0)
    np.add.at(M_trace, (mesh.end_ids, mesh.end_ids), lengths / 3.0)
    np.add.at(M_trace, (mesh.start_ids, mesh.end_ids), lengths / 6.0)
    np.add.at(M_trace, (mesh.end_ids, mesh.start_ids), lengths / 6.0)

    V = symmetrize(cat["V"])
    W = symmetrize(T.T @ V @ T)
    V_node = cat["V_node"]
    # panel integral of W f is the drop of V(T f) from start to end vertex
    W_density = (V_node[mesh.start_ids] - V_node[mesh.end_ids]) @ T

    ops = OperatorSet(
        mesh=mesh,
        quadrature_order=quadrature_order,
        V=V,
        K=K,
        K_trace=K_trace,
        K_density=cat["K_density"],
        V_trace=cat["V_trace"],
        V_node=V_node,
        W=W,
        W_density=W_density,
        Pi=Pi,
        T=T,
        M_trace=M_trace,
        M_density=lengths.copy(),
    )
    log.parameter("assembled panels", n)
    return ops
