"""
Rooted maximal dyadic approximation.

A union of closed level-k squares has connected interior exactly when its
face-adjacency graph is connected, so the maximal approximation containing a
root is the face-adjacent flood fill of Inside cubes started from the root's
level-k descendants.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.shapes import CubeClass, ShapeOracle
from dyadpot.errors import OverlappingComponents, RootNotInside
from dyadpot.logger import Logger as log
from dyadpot.parallel import map_chunks


@dataclass(frozen=True)
class DyadicRegion:
    """Level-k cube set with connected interior, containing a root cube"""
    level: int
    cubes: Tuple[DyadicIndex, ...]
    root: DyadicIndex
    cube_set: FrozenSet[DyadicIndex] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cubes", tuple(sorted(self.cubes)))
        object.__setattr__(self, "cube_set", frozenset(self.cubes))

    def __len__(self) -> int:
        return len(self.cubes)

    def __contains__(self, idx: DyadicIndex) -> bool:
        return idx in self.cube_set

    @property
    def cube_size(self) -> float:
        return 2.0 ** -self.level

    @property
    def area(self) -> float:
        return len(self.cubes) * self.cube_size ** 2

    def index_array(self) -> np.ndarray:
        return np.array([[c.j1, c.j2] for c in self.cubes], dtype=np.int64).reshape(-1, 2)

    def subdivided(self, level: int) -> FrozenSet[DyadicIndex]:
        return frozenset(child for c in self.cubes for child in c.subdivide_to(level))

    def is_subset_of(self, other: "DyadicRegion") -> bool:
        """True when this region, refined to the other's level, lies in it"""
        if other.level < self.level:
            return False
        return self.subdivided(other.level) <= other.cube_set

    def to_dict(self) -> Dict:
        return {
            "level": self.level,
            "root": self.root.to_list(),
            "cube_count": len(self.cubes),
            "cubes": self.index_array().tolist(),
        }


def classify_cube(shape: ShapeOracle, idx: DyadicIndex) -> CubeClass:
    return shape.classify_cube(idx)


def classify_many(shape: ShapeOracle, cubes: Sequence[DyadicIndex]) -> List[CubeClass]:
    """Classify cubes on the worker pool, results in input order"""
    parts = map_chunks(lambda s: [shape.classify_cube(c) for c in cubes[s]], len(cubes), chunk_size=64)
    return [cls for part in parts for cls in part]


def dyadic_approximation(shape: ShapeOracle, root: DyadicIndex, level: int) -> DyadicRegion:
    """
    Flood fill of face-adjacent Inside cubes at ``level`` from the root's descendants.

    :param shape: ShapeOracle
    :param root: DyadicIndex root cube, Inside at its own level
    :param level: int target level k >= root.level
    :return: DyadicRegion
    """
    if level < root.level:
        raise RootNotInside(f"root level {root.level} is finer than target level {level}",
                            operation="dyadic_geometry.dyadic_approximation")
    if shape.classify_cube(root) is not CubeClass.INSIDE:
        raise RootNotInside(f"root cube {root.to_list()} is not inside the shape",
                            operation="dyadic_geometry.dyadic_approximation")

    seen: Dict[DyadicIndex, bool] = {}
    frontier = sorted(root.subdivide_to(level))
    inside: List[DyadicIndex] = []
    while frontier:
        classes = classify_many(shape, frontier)
        accepted = []
        for idx, cls in zip(frontier, classes):
            seen[idx] = cls is CubeClass.INSIDE
            if seen[idx]:
                accepted.append(idx)
        inside.extend(accepted)
        candidates = {n for idx in accepted for n in idx.face_neighbors() if n not in seen}
        frontier = sorted(candidates)

    region = DyadicRegion(level=level, cubes=tuple(inside), root=root)
    log.parameter(f"level {level} region cubes", len(region))
    return region


def dyadic_approximation_multi(shape: ShapeOracle, roots: Sequence[DyadicIndex], level: int) -> List[DyadicRegion]:
    """One fill per component root; the fills must be disjoint"""
    regions = [dyadic_approximation(shape, root, level) for root in roots]
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            if regions[i].cube_set & regions[j].cube_set:
                raise OverlappingComponents(
                    f"roots {roots[i].to_list()} and {roots[j].to_list()} fill the same component",
                    operation="dyadic_geometry.dyadic_approximation",
                )
    return regions


def default_root(shape: ShapeOracle, level: int) -> DyadicIndex:
    """The cube at ``level`` containing the shape's reference point"""
    return DyadicIndex.containing(shape.reference_point(), level)
