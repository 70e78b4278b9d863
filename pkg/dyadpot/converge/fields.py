"""
Named analytic reference fields for sweeps.

Every field is harmonic near all meshes it is used on and carries its exact
gradient, so traces, densities and window energies come from the same source.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from dyadpot.errors import ConfigError

Array = np.ndarray

# pole of ``point_source``, outside every shipped shape
POINT_SOURCE_POLE = (3.0, 2.0)


@dataclass(frozen=True)
class ReferenceField:
    """Scalar field with exact gradient, both vectorised over (n, 2) points"""
    name: str
    value: Callable[[Array], Array]
    gradient: Callable[[Array], Array]

    def __call__(self, points: Array) -> Array:
        return self.value(np.asarray(points, dtype=float).reshape(-1, 2))


def _xy(points: Array) -> Tuple[Array, Array]:
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    return points[:, 0], points[:, 1]


def _z(points: Array) -> Array:
    x, y = _xy(points)
    return x + 1j * y


def _from_holomorphic(name: str, h: Callable[[Array], Array], dh: Callable[[Array], Array], imag: bool):
    """Re or Im of a holomorphic h, gradients via h' (Cauchy-Riemann)"""
    if imag:
        value = lambda p: h(_z(p)).imag
        gradient = lambda p: np.column_stack([dh(_z(p)).imag, dh(_z(p)).real])
    else:
        value = lambda p: h(_z(p)).real
        gradient = lambda p: np.column_stack([dh(_z(p)).real, -dh(_z(p)).imag])
    return ReferenceField(name, value, gradient)


def _cos_theta_value(points: Array) -> Array:
    x, y = _xy(points)
    return x / np.hypot(x, y)


def _cos_theta_gradient(points: Array) -> Array:
    x, y = _xy(points)
    r3 = np.hypot(x, y) ** 3
    return np.column_stack([y * y / r3, -x * y / r3])


def _point_source_value(points: Array) -> Array:
    x, y = _xy(points)
    px, py = POINT_SOURCE_POLE
    return np.log(np.hypot(x - px, y - py))


def _point_source_gradient(points: Array) -> Array:
    x, y = _xy(points)
    px, py = POINT_SOURCE_POLE
    r2 = (x - px) ** 2 + (y - py) ** 2
    return np.column_stack([(x - px) / r2, (y - py) / r2])


FIELDS: Dict[str, ReferenceField] = {
    "re_z": _from_holomorphic("re_z", lambda z: z, np.ones_like, imag=False),
    "im_z": _from_holomorphic("im_z", lambda z: z, np.ones_like, imag=True),
    "re_z2": _from_holomorphic("re_z2", lambda z: z * z, lambda z: 2.0 * z, imag=False),
    "im_z2": _from_holomorphic("im_z2", lambda z: z * z, lambda z: 2.0 * z, imag=True),
    "re_z3": _from_holomorphic("re_z3", lambda z: z ** 3, lambda z: 3.0 * z * z, imag=False),
    # restricted to the unit circle; not harmonic, only used as boundary data
    "cos_theta": ReferenceField("cos_theta", _cos_theta_value, _cos_theta_gradient),
    "point_source": ReferenceField("point_source", _point_source_value, _point_source_gradient),
}


def get_field(name: str) -> ReferenceField:
    try:
        return FIELDS[name]
    except KeyError:
        raise ConfigError(f"unknown reference field {name!r}; choose from {sorted(FIELDS)}",
                          operation="converge.get_field") from None


def complex_data(real: Optional[str], imag: Optional[str]) -> Callable[[Array], Array]:
    """Complex boundary data real + i imag built from two named fields"""
    parts = [get_field(name) if name else None for name in (real, imag)]

    def sample(points: Array) -> Array:
        n = np.asarray(points).reshape(-1, 2).shape[0]
        out = np.zeros(n, dtype=complex)
        if parts[0] is not None:
            out += parts[0](points)
        if parts[1] is not None:
            out += 1j * parts[1](points)
        return out

    return sample
