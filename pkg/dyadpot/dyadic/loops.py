"""Boundary loops of a dyadic region"""

from typing import Dict, List, Tuple

import numpy as np
import shapely
from shapely.geometry import MultiPolygon, Polygon
from shapely.geometry.base import BaseGeometry

from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.region import DyadicRegion

Vertex = Tuple[int, int]

# left turn first, then straight, then right
_TURN_ORDER = ((lambda dx, dy: (-dy, dx)), (lambda dx, dy: (dx, dy)), (lambda dx, dy: (dy, -dx)))


def _boundary_edges(region: DyadicRegion) -> Dict[Vertex, List[Vertex]]:
    """Directed lattice edges with the region on their left, keyed by start vertex"""
    cubes = region.cube_set
    outgoing: Dict[Vertex, List[Vertex]] = {}

    def add(a: Vertex, b: Vertex) -> None:
        outgoing.setdefault(a, []).append(b)

    for c in region.cubes:
        i, j, k = c.j1, c.j2, c.level
        if DyadicIndex(k, i, j - 1) not in cubes:
            add((i, j), (i + 1, j))
        if DyadicIndex(k, i + 1, j) not in cubes:
            add((i + 1, j), (i + 1, j + 1))
        if DyadicIndex(k, i, j + 1) not in cubes:
            add((i + 1, j + 1), (i, j + 1))
        if DyadicIndex(k, i - 1, j) not in cubes:
            add((i, j + 1), (i, j))
    return outgoing


def signed_area(loop: np.ndarray) -> float:
    x, y = loop[:, 0], loop[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _merge_collinear(loop: List[Vertex]) -> List[Vertex]:
    n = len(loop)
    keep = []
    for i in range(n):
        a, b, c = loop[i - 1], loop[i], loop[(i + 1) % n]
        if (b[0] - a[0], b[1] - a[1]) != (c[0] - b[0], c[1] - b[1]):
            keep.append(b)
    return keep


def boundary_loops(region: DyadicRegion, merge_collinear: bool = False) -> List[np.ndarray]:
    """
    Oriented boundary loops of the cube union.

    Outer loops run counterclockwise and holes clockwise, so the region is always
    on the left. Unmerged edges have length 2^-k. At a vertex where the region
    touches itself diagonally the trace turns left, which keeps every loop simple.

    :param region: DyadicRegion
    :param merge_collinear: bool join consecutive edges with the same direction
    :return: list of (n, 2) vertex arrays, closing edge implicit
    """
    outgoing = _boundary_edges(region)
    for ends in outgoing.values():
        ends.sort()
    remaining = sum(len(v) for v in outgoing.values())
    loops: List[List[Vertex]] = []
    while remaining:
        start = min(v for v, ends in outgoing.items() if ends)
        loop = [start]
        current, nxt = start, outgoing[start].pop(0)
        remaining -= 1
        while nxt != start:
            loop.append(nxt)
            dx, dy = nxt[0] - current[0], nxt[1] - current[1]
            choices = outgoing[nxt]
            for turn in _TURN_ORDER:
                tx, ty = turn(dx, dy)
                candidate = (nxt[0] + tx, nxt[1] + ty)
                if candidate in choices:
                    choices.remove(candidate)
                    break
            else:
                raise RuntimeError(f"open boundary chain at lattice vertex {nxt}")
            remaining -= 1
            current, nxt = nxt, candidate
        loops.append(_merge_collinear(loop) if merge_collinear else loop)

    h = region.cube_size
    arrays = [np.asarray(loop, dtype=float) * h for loop in loops]
    outer = [a for a in arrays if signed_area(a) > 0]
    holes = [a for a in arrays if signed_area(a) < 0]
    return outer + holes


def loops_perimeter(loops: List[np.ndarray]) -> float:
    return float(sum(np.linalg.norm(np.roll(l, -1, axis=0) - l, axis=1).sum() for l in loops))


def region_polygon(region: DyadicRegion) -> BaseGeometry:
    """The open region's closure as a shapely (Multi)Polygon"""
    loops = boundary_loops(region, merge_collinear=True)
    outers = [l for l in loops if signed_area(l) > 0]
    holes = [Polygon(l) for l in loops if signed_area(l) < 0]
    polygons = []
    for shell in outers:
        shell_poly = Polygon(shell)
        inner = [h.exterior.coords for h in holes if shell_poly.contains(h.representative_point())]
        polygons.append(Polygon(shell, holes=inner))
    geom = polygons[0] if len(polygons) == 1 else MultiPolygon(polygons)
    if not geom.is_valid:
        geom = shapely.make_valid(geom)
    return geom
