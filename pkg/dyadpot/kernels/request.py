from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from dyadpot.errors import DegeneratePanel, TargetOnPanel

# targets within ON_PANEL_TOL * length of a segment are on it
ON_PANEL_TOL = 1e-14


class Weight(Enum):
    CONSTANT = "constant"
    VANISH_AT_A = "linear-vanishing-at-a"
    VANISH_AT_B = "linear-vanishing-at-b"


class Mode(Enum):
    OFF_BOUNDARY = "off-boundary"
    PRINCIPAL_VALUE = "principal-value"


@dataclass(frozen=True, eq=False)
class PanelIntegralRequest:
    """One straight panel a -> b, one target, one weight"""
    a: np.ndarray
    b: np.ndarray
    target: np.ndarray
    weight: Weight = Weight.CONSTANT
    mode: Mode = Mode.OFF_BOUNDARY

    def __post_init__(self):
        for name in ("a", "b", "target"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).reshape(2))
        if self.length <= 0.0:
            raise DegeneratePanel(f"panel {self.a.tolist()} -> {self.b.tolist()} has zero length",
                                  operation="kernels.PanelIntegralRequest")
        xi, eta = self.local_target()
        tol = ON_PANEL_TOL * self.length
        on_line = abs(eta) <= tol
        if self.mode is Mode.OFF_BOUNDARY and on_line and -tol <= xi <= self.length + tol:
            raise TargetOnPanel(f"target {self.target.tolist()} lies on the panel",
                                operation="kernels.PanelIntegralRequest")
        if self.mode is Mode.PRINCIPAL_VALUE and not (on_line and tol < xi < self.length - tol):
            raise TargetOnPanel(f"principal value needs a target inside the open panel, got {self.target.tolist()}",
                                operation="kernels.PanelIntegralRequest")

    @property
    def length(self) -> float:
        return float(np.hypot(*(self.b - self.a)))

    @property
    def tangent(self) -> np.ndarray:
        return (self.b - self.a) / self.length

    @property
    def normal(self) -> np.ndarray:
        t = self.tangent
        return np.array([t[1], -t[0]])

    def local_target(self):
        d = self.target - self.a
        return float(d @ self.tangent), float(d @ self.normal)

    @classmethod
    def make(
        cls,
        a: Sequence[float],
        b: Sequence[float],
        target: Union[Sequence[float], complex],
        weight: Union[Weight, str] = Weight.CONSTANT,
        mode: Union[Mode, str] = Mode.OFF_BOUNDARY,
    ) -> "PanelIntegralRequest":
        if isinstance(target, complex):
            target = (target.real, target.imag)
        return cls(np.asarray(a), np.asarray(b), np.asarray(target), Weight(weight), Mode(mode))
