"""
Closed-form panel integrals of the 2D Laplace kernels.

Every formula is written in the panel's local frame: for a panel a -> b of
length L with unit tangent t and outward normal nu = (t_y, -t_x), a target x has
coordinates xi = (x - a).t and eta = (x - a).nu, and the panel spans
u in [u0, u1] = [-xi, L - xi] relative to the foot point. Near-singular targets
need no special treatment in this frame.

Weights are ``phi_a`` (1 at a, 0 at b) and ``phi_b`` (0 at a, 1 at b). All
functions broadcast: a, b are (..., 2) panel endpoints and x is (..., 2).
"""

from typing import Tuple

import numpy as np
from scipy.special import xlogy

from dyadpot.errors import TargetOnPanel
from dyadpot.kernels.request import ON_PANEL_TOL, Mode, PanelIntegralRequest, Weight

INV_2PI = 0.5 / np.pi


class PanelFrame:
    """Local coordinates of targets relative to panels"""

    def __init__(self, a: np.ndarray, b: np.ndarray, x: np.ndarray):
        d = b - a
        self.L = np.hypot(d[..., 0], d[..., 1])
        self.t = d / self.L[..., None]
        self.nu = np.stack([self.t[..., 1], -self.t[..., 0]], axis=-1)
        rel = x - a
        self.xi = np.einsum("...i,...i->...", rel, self.t)
        eta = np.einsum("...i,...i->...", rel, self.nu)
        # targets this close to the line are on it
        on_line = np.abs(eta) <= ON_PANEL_TOL * self.L
        self.eta = np.where(on_line, 0.0, eta)
        self.u0 = -self.xi
        self.u1 = self.L - self.xi
        eta2 = self.eta * self.eta
        self.r0sq = self.u0 * self.u0 + eta2
        self.r1sq = self.u1 * self.u1 + eta2
        theta = np.arctan2(-self.eta * self.L, self.u0 * self.u1 + eta2)
        # subtended angle, zero on the panel's own line
        self.theta = np.where(on_line, 0.0, theta)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_ratio = 0.5 * (np.log(self.r1sq) - np.log(self.r0sq))
        self.log_ratio = np.where(on_line & ((self.r0sq == 0.0) | (self.r1sq == 0.0)), 0.0, log_ratio)

    def to_global(self, d_xi: np.ndarray, d_eta: np.ndarray) -> np.ndarray:
        return d_xi[..., None] * self.t + d_eta[..., None] * self.nu


def _log_integrals(f: PanelFrame) -> Tuple[np.ndarray, np.ndarray]:
    """Integrals of log|x - y| with weights 1 and (s / L) over the panel"""
    i0 = 0.5 * (xlogy(f.u1, f.r1sq) - xlogy(f.u0, f.r0sq)) - f.L - f.eta * f.theta
    g1 = 0.25 * (xlogy(f.r1sq, f.r1sq) - xlogy(f.r0sq, f.r0sq) - (f.u1 ** 2 - f.u0 ** 2))
    return i0, (f.xi * i0 + g1) / f.L


def slp_weights(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Single layer -(1/2pi) int log|x - y| w(y) ds(y) for w = 1, phi_a, phi_b.

    Also valid on the panel itself, where the integral converges absolutely.
    """
    f = PanelFrame(a, b, x)
    i0, i1 = _log_integrals(f)
    const = -INV_2PI * i0
    lin_b = -INV_2PI * i1
    return const, const - lin_b, lin_b


def dlp_weights(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Double layer int <y - x, nu>/(2pi |y - x|^2) w(y) ds(y); zero on the panel's line"""
    f = PanelFrame(a, b, x)
    const = INV_2PI * f.theta
    lin_b = INV_2PI * (f.xi * f.theta - f.eta * f.log_ratio) / f.L
    return const, const - lin_b, lin_b


def grad_slp_weights(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients in x of the three single layer weights, shape (..., 2)"""
    f = PanelFrame(a, b, x)
    const = INV_2PI * f.to_global(f.log_ratio, f.theta)
    d_xi = -f.L - f.eta * f.theta - f.xi * f.log_ratio
    d_eta = f.eta * f.log_ratio - f.xi * f.theta
    lin_b = -(INV_2PI / f.L)[..., None] * f.to_global(d_xi, d_eta)
    return const, const - lin_b, lin_b


def grad_dlp_weights(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients in x of the three double layer weights, shape (..., 2)"""
    f = PanelFrame(a, b, x)
    inv0, inv1 = 1.0 / f.r0sq, 1.0 / f.r1sq
    theta_xi = f.eta * (inv1 - inv0)
    theta_eta = f.u1 * inv1 - f.u0 * inv0
    const = INV_2PI * f.to_global(theta_xi, theta_eta)
    n_xi = f.theta + f.xi * theta_xi + f.eta * theta_eta
    n_eta = f.xi * theta_eta - f.log_ratio - f.eta * f.eta * (inv1 - inv0)
    lin_b = (INV_2PI / f.L)[..., None] * f.to_global(n_xi, n_eta)
    return const, const - lin_b, lin_b


_WEIGHT_SLOT = {Weight.CONSTANT: 0, Weight.VANISH_AT_B: 1, Weight.VANISH_AT_A: 2}


def slp_panel(req: PanelIntegralRequest) -> float:
    """Single layer panel integral for one request"""
    return float(slp_weights(req.a, req.b, req.target)[_WEIGHT_SLOT[req.weight]])


def dlp_panel(req: PanelIntegralRequest) -> float:
    """Double layer panel integral; the principal value on a straight panel is zero"""
    if req.mode is Mode.PRINCIPAL_VALUE:
        return 0.0
    return float(dlp_weights(req.a, req.b, req.target)[_WEIGHT_SLOT[req.weight]])


def grad_slp_panel(req: PanelIntegralRequest) -> np.ndarray:
    _off_boundary(req)
    return np.asarray(grad_slp_weights(req.a, req.b, req.target)[_WEIGHT_SLOT[req.weight]])


def grad_dlp_panel(req: PanelIntegralRequest) -> np.ndarray:
    _off_boundary(req)
    return np.asarray(grad_dlp_weights(req.a, req.b, req.target)[_WEIGHT_SLOT[req.weight]])


def _off_boundary(req: PanelIntegralRequest) -> None:
    if req.mode is not Mode.OFF_BOUNDARY:
        raise TargetOnPanel("gradients are only defined off the boundary", operation="kernels.grad_panel")
