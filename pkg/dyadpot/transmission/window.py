from typing import Optional, Sequence, Tuple

import numpy as np
import shapely
from shapely.geometry import LinearRing

from dyadpot.errors import WindowTouchesBoundary
from dyadpot.logger import Logger as log
from dyadpot.transmission.solution import FieldSample, TransmissionSolution

Rect = Tuple[float, float, float, float]


def window_grid(window: Rect, pitch: float) -> Tuple[np.ndarray, float]:
    """Cell midpoints of a tensor grid covering the window with spacing <= pitch"""
    x0, y0, x1, y1 = window
    if not (x1 > x0 and y1 > y0) or pitch <= 0:
        raise ValueError(f"bad window {window} or pitch {pitch}")
    nx = int(np.ceil((x1 - x0) / pitch))
    ny = int(np.ceil((y1 - y0) / pitch))
    hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
    xs = x0 + (np.arange(nx) + 0.5) * hx
    ys = y0 + (np.arange(ny) + 0.5) * hy
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return np.column_stack([gx.ravel(), gy.ravel()]), hx * hy


def check_window(window: Rect, sols: Sequence[TransmissionSolution]) -> None:
    box = shapely.box(*window)
    for sol in sols:
        for loop in sol.mesh.loops():
            if box.intersects(LinearRing(loop)):
                raise WindowTouchesBoundary(f"window {list(window)} meets the boundary of a {sol.mesh.n_panels}-panel mesh",
                                            operation="transmission.window_seminorm")


def sample_window(sol: TransmissionSolution, window: Rect, pitch: float, part: str = "full") -> FieldSample:
    check_window(window, [sol])
    points, cell = window_grid(window, pitch)
    return sol.sample(points, part=part, window=tuple(window), cell_area=cell)


def window_seminorm(
    sol_a: TransmissionSolution,
    sol_b: Optional[TransmissionSolution],
    window: Rect,
    pitch: float,
    part: str = "full",
) -> float:
    """
    (int_window |grad(u_a - u_b)|^2)^(1/2) by the midpoint rule on exact gradients.

    :param sol_a: TransmissionSolution
    :param sol_b: TransmissionSolution or None for the seminorm of u_a
    :param window: (xmin, ymin, xmax, ymax) away from both boundaries
    :param pitch: float grid spacing bound
    :param part: 'full', 'single' or 'double'
    :return: float
    """
    sols = [sol_a] if sol_b is None else [sol_a, sol_b]
    check_window(window, sols)
    points, cell = window_grid(window, pitch)
    grads = sol_a.gradients(points, part)
    if sol_b is not None:
        grads = grads - sol_b.gradients(points, part)
    value = float(np.sqrt(cell * np.sum(np.abs(grads) ** 2)))
    log.parameter(f"window seminorm ({part})", value)
    return value
