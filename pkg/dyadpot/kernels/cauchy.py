"""
Cauchy integral over straight panels with complex-linear data.

For a panel a -> b and data f linear in zeta along it, with slope
s = (f_b - f_a) / (b - a) and continuation f(z) = f_a + s (z - a),

    (1/2 pi i) int f(zeta) / (zeta - z) dzeta = (f(z) Lg + f_b - f_a) / (2 pi i)

where Lg = log((b - z) / (a - z)). The principal branch is exact for any z off
the closed segment. The principal value at an interior point of the segment
keeps only the real part of Lg.
"""

from typing import Tuple

import numpy as np

from dyadpot.errors import TargetOnPanel
from dyadpot.kernels.request import Mode, PanelIntegralRequest

INV_2PI_I = 1.0 / (2j * np.pi)


def _log_ratio(a: np.ndarray, b: np.ndarray, z: np.ndarray, principal_value: np.ndarray) -> np.ndarray:
    lg = np.log((b - z) / (a - z))
    return np.where(principal_value, np.log(np.abs(b - z) / np.abs(a - z)) + 0j, lg)


def cauchy_terms(
    a: np.ndarray,
    b: np.ndarray,
    fa: np.ndarray,
    fb: np.ndarray,
    z: np.ndarray,
    principal_value=False,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Panel values and z-derivatives, broadcasting over complex a, b, fa, fb and z.

    :param principal_value: bool or boolean array, same broadcast shape
    :return: (values, derivatives)
    """
    slope = (fb - fa) / (b - a)
    f_lin = fa + slope * (z - a)
    lg = _log_ratio(a, b, z, np.asarray(principal_value))
    values = INV_2PI_I * (f_lin * lg + (fb - fa))
    derivs = INV_2PI_I * (slope * lg + f_lin * (1.0 / (a - z) - 1.0 / (b - z)))
    return values, derivs


def cauchy_panel(req: PanelIntegralRequest, fa: complex, fb: complex) -> complex:
    """
    (1/2 pi i) int f(zeta)/(zeta - z) dzeta for f linear from ``fa`` at a to ``fb`` at b.

    :param req: PanelIntegralRequest, weight ignored
    :param fa: complex data at a
    :param fb: complex data at b
    :return: complex
    """
    a = complex(*req.a)
    b = complex(*req.b)
    z = complex(*req.target)
    pv = req.mode is Mode.PRINCIPAL_VALUE
    values, _ = cauchy_terms(np.asarray(a), np.asarray(b), np.asarray(fa, dtype=complex),
                             np.asarray(fb, dtype=complex), np.asarray(z), principal_value=pv)
    return complex(values)


def cauchy_panel_derivative(req: PanelIntegralRequest, fa: complex, fb: complex) -> complex:
    if req.mode is not Mode.OFF_BOUNDARY:
        raise TargetOnPanel("the Cauchy derivative is only defined off the boundary",
                            operation="kernels.cauchy_panel")
    _, derivs = cauchy_terms(np.asarray(complex(*req.a)), np.asarray(complex(*req.b)),
                             np.asarray(fa, dtype=complex), np.asarray(fb, dtype=complex),
                             np.asarray(complex(*req.target)))
    return complex(derivs)
