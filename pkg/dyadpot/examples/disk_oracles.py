"""
Disk oracles on a 256-gon

This script:
1. Assembles the boundary operators of a regular 256-gon
2. Reports contraction constants and extension norms (both close to 1/2 and sqrt 2)
3. Sums the Neumann series for cos(theta) and compares it with 2 cos(theta)
4. Evaluates the transmission field of cos(theta) inside and outside
"""

import numpy as np

from dyadpot.boundary.density import DensityFn
from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.boundary.trace import sample_trace
from dyadpot.converge.fields import get_field
from dyadpot.logger import Logger as log
from dyadpot.logger import setup_logging
from dyadpot.operators.assemble import assemble
from dyadpot.operators.neumann_poincare import contraction_constant, neumann_series
from dyadpot.operators.steklov import extension_norms
from dyadpot.transmission.solution import solve_transmission

if __name__ == "__main__":
    setup_logging()
    mesh = BoundaryMesh.regular_polygon(256)
    ops = assemble(mesh)

    log.parameter("c+", contraction_constant(ops, "+").c)
    log.parameter("c-", contraction_constant(ops, "-").c)
    log.parameter("extension norms", list(extension_norms(ops)))

    f = sample_trace(mesh, get_field("cos_theta"))
    series = neumann_series(ops, f, "+", terms=20)
    log.parameter("max |S_20 f - 2 f|", float(np.abs(series.partial_sum.values - 2.0 * f.values).max()))

    sol = solve_transmission(mesh, f, DensityFn(mesh, np.zeros(mesh.n_panels)))
    points = np.array([[0.5, 0.0], [2.0, 0.0]])
    log.parameter("u at r = 0.5 (expect 0.25)", float(sol.values(points[:1])[0]))
    log.parameter("u at r = 2 (expect -0.25)", float(sol.values(points[1:])[0]))
