"""
Neumann-Poincare operator, its contraction constants and Neumann series.

On traces the operator is the L2 projection onto piecewise-linear functions of
the density-tested double layer average. Contraction is measured in the V^-1
norm on the reduced trace space, where it is a norm.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from dyadpot.boundary.density import DensityFn
from dyadpot.boundary.trace import TraceFn, gauge
from dyadpot.errors import MeshMismatch, NotContractive, SingularForm
from dyadpot.logger import Logger as log
from dyadpot.operators.assemble import OperatorSet, symmetrize

SIGNS = {"+": 1.0, "-": -1.0}


def _sign(sign: str) -> float:
    if sign not in SIGNS:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return SIGNS[sign]


def np_matrix(ops: OperatorSet) -> np.ndarray:
    """Trace-side matrix M_trace^-1 K_trace"""
    return ops.solve_trace_mass(ops.K_trace)


def np_apply(ops: OperatorSet, f: TraceFn) -> TraceFn:
    """
    Neumann-Poincare operator applied to a trace, gauged.

    :param ops: OperatorSet
    :param f: TraceFn on ops.mesh
    :return: TraceFn
    """
    if not f.mesh.same_as(ops.mesh):
        raise MeshMismatch("trace and operators live on different meshes", operation="operators.np_apply")
    return TraceFn(ops.mesh, ops.solve_trace_mass(ops.K_trace @ f.values))


def np_adjoint_apply(ops: OperatorSet, g: DensityFn) -> DensityFn:
    """Adjoint operator on densities: panel averages of K* g"""
    if not g.mesh.same_as(ops.mesh):
        raise MeshMismatch("density and operators live on different meshes",
                           operation="operators.np_adjoint_apply")
    return DensityFn(ops.mesh, ops.solve_density_mass(ops.K_density.T @ g.values))


def contraction_operator(ops: OperatorSet, sign: str) -> np.ndarray:
    """Matrix of (1/2) I +- K on nodal traces"""
    return 0.5 * np.eye(ops.mesh.n_vertices) + _sign(sign) * np_matrix(ops)


@dataclass(frozen=True)
class Contraction:
    sign: str
    c: float
    min_ratio: float


def contraction_constant(ops: OperatorSet, sign: str = "+") -> Contraction:
    """
    Largest and smallest ||(I/2 +- K) f|| / ||f|| in the V^-1 norm.

    :param ops: OperatorSet
    :param sign: '+' or '-'
    :return: Contraction
    """
    z = ops.reduced_basis
    az = contraction_operator(ops, sign) @ z
    top = symmetrize(az.T @ ops.G @ az)
    bottom = symmetrize(z.T @ ops.G @ z)
    try:
        ratios = scipy.linalg.eigh(top, bottom, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise SingularForm(f"V^-1 Gram form is singular: {exc}", operation="operators.contraction_constant") from exc
    ratios = np.clip(ratios, 0.0, None)
    result = Contraction(sign=sign, c=float(np.sqrt(ratios.max())), min_ratio=float(np.sqrt(ratios.min())))
    log.parameter(f"contraction constant c{sign}", result.c)
    return result


@dataclass(frozen=True, eq=False)
class NeumannSeries:
    """Partial sum, a-priori remainder bound and direct solve"""
    partial_sum: TraceFn
    remainder_bound: float
    direct: TraceFn
    terms: int
    c: float

    def error(self, ops: OperatorSet) -> float:
        return ops.v_inverse_norm(self.partial_sum.values - self.direct.values)


def neumann_series(ops: OperatorSet, f: TraceFn, sign: str = "+", terms: int = 20,
                   contraction: Contraction = None) -> NeumannSeries:
    """
    sum_{l <= L} (I/2 +- K)^l f with the bound c^(L+1)/(1-c) ||f||.

    The series sums to (I/2 -+ K)^-1 f on the reduced trace space; parts of f
    with zero V^-1 norm are passed through unchanged.

    :param ops: OperatorSet
    :param f: TraceFn
    :param sign: '+' or '-'
    :param terms: int L >= 0
    :param contraction: precomputed Contraction for this sign
    :return: NeumannSeries
    """
    if terms < 0:
        raise ValueError(f"number of terms must be >= 0, got {terms}")
    contraction = contraction or contraction_constant(ops, sign)
    c = contraction.c
    if c >= 1.0:
        raise NotContractive(f"contraction constant c{sign} = {c:.6g} is not below 1",
                             operation="operators.neumann_series")
    z = ops.reduced_basis
    a = contraction_operator(ops, sign)
    coeffs = z.T @ f.values
    reduced = z.T @ a @ z

    term = coeffs
    tail = np.zeros_like(coeffs)
    for _ in range(terms):
        term = reduced @ term
        tail = tail + term
    values = f.values + gauge(ops.mesh, z @ tail) if terms else f.values.copy()

    direct_coeffs = np.linalg.solve(np.eye(z.shape[1]) - reduced, coeffs)
    direct = f.values + gauge(ops.mesh, z @ (direct_coeffs - coeffs))

    bound = c ** (terms + 1) / (1.0 - c) * ops.v_inverse_norm(f.values)
    log.parameter(f"neumann series remainder bound (L={terms})", bound)
    return NeumannSeries(
        partial_sum=TraceFn(ops.mesh, values, gauged=False),
        remainder_bound=float(bound),
        direct=TraceFn(ops.mesh, direct, gauged=False),
        terms=terms,
        c=c,
    )
