from dataclasses import dataclass
from typing import List, Tuple

import numpy as np


@dataclass(frozen=True, order=True)
class DyadicIndex:
    """Closed dyadic cube [2^-k j1, 2^-k (j1+1)] x [2^-k j2, 2^-k (j2+1)]"""
    level: int
    j1: int
    j2: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError(f"dyadic level must be >= 0, got {self.level}")

    @property
    def size(self) -> float:
        return 2.0 ** -self.level

    @property
    def index(self) -> Tuple[int, int]:
        return self.j1, self.j2

    def bounds(self) -> Tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax), exact in binary floating point"""
        h = self.size
        return self.j1 * h, self.j2 * h, (self.j1 + 1) * h, (self.j2 + 1) * h

    def center(self) -> np.ndarray:
        h = self.size
        return np.array([(self.j1 + 0.5) * h, (self.j2 + 0.5) * h])

    def corners(self) -> np.ndarray:
        x0, y0, x1, y1 = self.bounds()
        return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])

    def children(self) -> List["DyadicIndex"]:
        k, a, b = self.level + 1, 2 * self.j1, 2 * self.j2
        return [DyadicIndex(k, a, b), DyadicIndex(k, a, b + 1),
                DyadicIndex(k, a + 1, b), DyadicIndex(k, a + 1, b + 1)]

    def parent(self) -> "DyadicIndex":
        if self.level == 0:
            raise ValueError("level-0 cubes have no parent")
        return DyadicIndex(self.level - 1, self.j1 // 2, self.j2 // 2)

    def ancestor(self, level: int) -> "DyadicIndex":
        if level > self.level:
            raise ValueError(f"ancestor level {level} is finer than {self.level}")
        shift = self.level - level
        return DyadicIndex(level, self.j1 >> shift, self.j2 >> shift)

    def subdivide_to(self, level: int) -> List["DyadicIndex"]:
        """All descendants at ``level`` in lexicographic order"""
        if level < self.level:
            raise ValueError(f"cannot subdivide level {self.level} cube to level {level}")
        m = 2 ** (level - self.level)
        return [DyadicIndex(level, self.j1 * m + a, self.j2 * m + b)
                for a in range(m) for b in range(m)]

    def face_neighbors(self) -> List["DyadicIndex"]:
        k = self.level
        return [DyadicIndex(k, self.j1 - 1, self.j2), DyadicIndex(k, self.j1, self.j2 - 1),
                DyadicIndex(k, self.j1, self.j2 + 1), DyadicIndex(k, self.j1 + 1, self.j2)]

    def to_list(self) -> List[int]:
        return [self.level, self.j1, self.j2]

    @classmethod
    def containing(cls, point, level: int) -> "DyadicIndex":
        """The cube at ``level`` whose half-open cell contains ``point``"""
        scale = 2.0 ** level
        return cls(level, int(np.floor(point[0] * scale)), int(np.floor(point[1] * scale)))
