"""
Jump relations probed off the boundary.

Jumps are measured at panel midpoints from x - d nu (interior) and x + d nu
(exterior) with d = eps * panel length, then extrapolated to d = 0 by
Richardson over eps, 2 eps, 4 eps.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from dyadpot.errors import ProbeTooClose
from dyadpot.logger import Logger as log
from dyadpot.transmission.solution import TransmissionSolution

EPS_SCHEDULE = (4e-3, 2e-3, 1e-3)
# probes must sit at least this many times SAFE_DISTANCE off the boundary
SAFE_FACTOR = 10.0
SAFE_DISTANCE = 1e-12


@dataclass
class JumpReport:
    """Extrapolated jumps at the probed midpoints and their residuals"""
    part: str
    panels: np.ndarray
    eps: Tuple[float, ...]
    trace_jump: np.ndarray
    flux_jump: np.ndarray
    expected_trace: np.ndarray
    expected_flux: np.ndarray
    trace_residual: float = field(init=False)
    flux_residual: float = field(init=False)

    def __post_init__(self):
        self.trace_residual = float(np.max(np.abs(self.trace_jump - self.expected_trace), initial=0.0))
        self.flux_residual = float(np.max(np.abs(self.flux_jump - self.expected_flux), initial=0.0))

    def to_dict(self):
        return {"part": self.part, "eps": list(self.eps),
                "trace_residual": self.trace_residual, "flux_residual": self.flux_residual}


def richardson(values: Sequence[np.ndarray]) -> np.ndarray:
    """Zero-distance limit from samples at 4 eps, 2 eps, eps (errors O(eps) + O(eps^2))"""
    j4, j2, j1 = values
    return (8.0 * j1 - 6.0 * j2 + j4) / 3.0


def jump_check(
    sol: TransmissionSolution,
    panels: Optional[Sequence[int]] = None,
    eps: Sequence[float] = EPS_SCHEDULE,
    part: str = "full",
) -> JumpReport:
    """
    Trace and normal-derivative jumps of a field at panel midpoints.

    The expected jumps are (f, g) for the full field, (-f, 0) for D f and
    (0, g) for S g.

    :param sol: TransmissionSolution
    :param panels: panel indices, default all
    :param eps: three decreasing relative distances eps_4 = 4 eps, 2 eps, eps
    :param part: 'full', 'single' or 'double'
    :return: JumpReport
    """
    mesh = sol.mesh
    panels = np.arange(mesh.n_panels) if panels is None else np.asarray(panels, dtype=int)
    eps = tuple(float(e) for e in eps)
    if len(eps) != 3 or not (eps[0] > eps[1] > eps[2]):
        raise ValueError(f"eps schedule needs three decreasing values, got {eps}")
    safe = SAFE_FACTOR * SAFE_DISTANCE * max(mesh.diameter, 1.0)
    closest = eps[-1] * mesh.lengths[panels].min() if len(panels) else np.inf
    if closest < safe:
        raise ProbeTooClose(f"probe distance {closest:g} is below the safe distance {safe:g}",
                            operation="transmission.jump_check")

    mid = mesh.midpoints[panels]
    nu = mesh.normals[panels]
    lengths = mesh.lengths[panels]
    traces, fluxes = [], []
    for e in eps:
        d = (e * lengths)[:, None]
        inner, outer = mid - d * nu, mid + d * nu
        pts = np.vstack([inner, outer])
        vals = sol.values(pts, part)
        grads = sol.gradients(pts, part)
        n = len(panels)
        traces.append(vals[:n] - vals[n:])
        fluxes.append(np.einsum("nd,nd->n", grads[:n] - grads[n:], nu))

    f_mid = sol.f.midpoint_values()[panels]
    g_mid = sol.g.values[panels]
    zero = np.zeros_like(f_mid)
    expected = {"full": (f_mid, g_mid), "double": (-f_mid, np.zeros_like(g_mid)), "single": (zero, g_mid)}[part]
    report = JumpReport(part=part, panels=panels, eps=eps, trace_jump=richardson(traces),
                        flux_jump=richardson(fluxes), expected_trace=expected[0], expected_flux=expected[1])
    log.parameter(f"{part} trace jump residual", report.trace_residual)
    log.parameter(f"{part} flux jump residual", report.flux_residual)
    return report
