import numpy as np
import pytest

from dyadpot.dyadic.composite import (
    ComplementShape,
    IntersectionShape,
    RegionShape,
    approximations,
    exterior_approximation,
)
from dyadpot.dyadic.index import DyadicIndex
from dyadpot.dyadic.koch import KochPrefractal, KochSnowflake
from dyadpot.dyadic.loops import boundary_loops, loops_perimeter, region_polygon, signed_area
from dyadpot.dyadic.metrics import area_symdiff, set_convergence_metrics
from dyadpot.dyadic.region import DyadicRegion, default_root, dyadic_approximation, dyadic_approximation_multi
from dyadpot.dyadic.shapes import CubeClass, Disk, OpenRectangle, SimplePolygon
from dyadpot.errors import OverlappingComponents, RootNotInside, WindowEmpty

UNIT_SQUARE = OpenRectangle(0.0, 0.0, 1.0, 1.0)
SQUARE_ROOT = DyadicIndex(2, 2, 2)
SQUARE_WINDOW = (-0.25, -0.25, 1.25, 1.25)
KOCH_WINDOW = (-0.75, -0.75, 0.75, 0.75)


def test_index_family():
    idx = DyadicIndex(3, 5, 2)
    assert idx.bounds() == (0.625, 0.25, 0.75, 0.375)
    assert all(child.parent() == idx for child in idx.children())
    assert idx.ancestor(1) == DyadicIndex(1, 1, 0)
    assert DyadicIndex.containing((0.63, 0.26), 3) == idx
    assert len(idx.subdivide_to(5)) == 16
    assert len(set(idx.face_neighbors())) == 4


def test_index_rejects_negative_level():
    with pytest.raises(ValueError):
        DyadicIndex(-1, 0, 0)


def test_disk_classification():
    disk = Disk(radius=1.0)
    assert disk.classify_cube(DyadicIndex(3, 0, 0)) is CubeClass.INSIDE
    assert disk.classify_cube(DyadicIndex(1, 4, 4)) is CubeClass.OUTSIDE
    assert disk.classify_cube(DyadicIndex(1, 1, 0)) is CubeClass.CROSSING


@pytest.mark.parametrize("level", range(2, 9))
def test_unit_square_cube_count(level):
    region = dyadic_approximation(UNIT_SQUARE, SQUARE_ROOT, level)
    assert len(region) == (2 ** level - 2) ** 2
    assert region.area == pytest.approx((1.0 - 2.0 ** (1 - level)) ** 2)


def test_unit_square_regions_are_nested():
    regions = approximations(UNIT_SQUARE, [2, 3, 4, 5], root=SQUARE_ROOT)
    for coarse, fine in zip(regions[:-1], regions[1:]):
        assert coarse.is_subset_of(fine)
        assert not fine.is_subset_of(coarse)


@pytest.mark.parametrize("level", [3, 4, 5])
def test_unit_square_metrics(level):
    h = 2.0 ** -level
    region = dyadic_approximation(UNIT_SQUARE, SQUARE_ROOT, level)
    metrics = set_convergence_metrics(region, UNIT_SQUARE, SQUARE_WINDOW, compact_probe=[(0.5, 0.5)])
    assert metrics.hausdorff_boundary == pytest.approx(h, rel=1e-9)
    assert metrics.hausdorff_boundary <= np.sqrt(2.0) * h
    assert metrics.area_symdiff == pytest.approx(1.0 - (1.0 - 2.0 * h) ** 2, rel=1e-9)
    assert metrics.compact_contained
    assert metrics.monotone_vs_previous


def test_root_must_be_inside():
    with pytest.raises(RootNotInside):
        dyadic_approximation(UNIT_SQUARE, DyadicIndex(0, 0, 0), 3)
    with pytest.raises(RootNotInside):
        dyadic_approximation(UNIT_SQUARE, DyadicIndex(4, 5, 5), 3)


def test_overlapping_roots_are_rejected():
    with pytest.raises(OverlappingComponents):
        dyadic_approximation_multi(UNIT_SQUARE, [DyadicIndex(2, 1, 1), DyadicIndex(2, 2, 2)], 3)


def test_multi_fill_with_one_root():
    square = SimplePolygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    regions = dyadic_approximation_multi(square, [DyadicIndex(3, 2, 2)], 3)
    assert len(regions) == 1
    assert len(regions[0]) == 36


def test_default_root_contains_reference_point():
    root = default_root(Disk(center=(0.3, 0.2), radius=0.5), 3)
    x0, y0, x1, y1 = root.bounds()
    assert x0 <= 0.3 < x1 and y0 <= 0.2 < y1


def test_boundary_loops_of_square_region():
    level = 3
    region = dyadic_approximation(UNIT_SQUARE, SQUARE_ROOT, level)
    loops = boundary_loops(region)
    assert len(loops) == 1
    assert signed_area(loops[0]) == pytest.approx(region.area)
    assert loops_perimeter(loops) == pytest.approx(4.0 * (1.0 - 2.0 * 2.0 ** -level))
    merged = boundary_loops(region, merge_collinear=True)
    assert len(merged[0]) == 4


def test_boundary_loops_with_hole():
    ring = [DyadicIndex(2, i, j) for i in range(3) for j in range(3) if (i, j) != (1, 1)]
    region = DyadicRegion(level=2, cubes=tuple(ring), root=ring[0])
    loops = boundary_loops(region)
    assert len(loops) == 2
    assert signed_area(loops[0]) == pytest.approx(9.0 / 16.0)
    assert signed_area(loops[1]) == pytest.approx(-1.0 / 16.0)
    assert region_polygon(region).area == pytest.approx(region.area)


def test_koch_regions():
    koch = KochSnowflake()
    regions = approximations(koch, [3, 4])
    assert regions[0].is_subset_of(regions[1])
    previous = None
    for region in regions:
        assert all(koch.classify_cube(c) is CubeClass.INSIDE for c in region.cubes)
        metrics = set_convergence_metrics(region, koch, KOCH_WINDOW, previous=previous)
        assert metrics.hausdorff_boundary <= np.sqrt(2.0) * region.cube_size
        assert metrics.monotone_vs_previous
        assert metrics.area_symdiff > 0.0
        previous = region


@pytest.mark.slow
def test_koch_regions_up_to_level_seven():
    koch = KochSnowflake()
    regions = approximations(koch, range(3, 8))
    previous, last_distance = None, np.inf
    for region in regions:
        assert all(koch.classify_cube(c) is CubeClass.INSIDE for c in region.cubes)
        metrics = set_convergence_metrics(region, koch, KOCH_WINDOW, previous=previous)
        assert metrics.monotone_vs_previous
        assert metrics.hausdorff_boundary <= np.sqrt(2.0) * region.cube_size
        assert metrics.hausdorff_boundary <= last_distance
        assert metrics.hausdorff_symmetric >= metrics.hausdorff_boundary
        previous, last_distance = region, metrics.hausdorff_boundary


def test_koch_prefractal_generation_zero_is_triangle():
    triangle = KochPrefractal(0)
    region = dyadic_approximation(triangle, DyadicIndex(3, 0, 0), 5)
    assert triangle.polygon(0.01).area == pytest.approx(np.sqrt(3.0) / 4.0)
    assert region_polygon(region).within(triangle.polygon(0.01))


def test_complement_swaps_classes():
    disk = Disk(radius=0.5)
    outside = ComplementShape(disk)
    assert outside.classify_cube(DyadicIndex(3, 0, 0)) is CubeClass.OUTSIDE
    assert outside.classify_cube(DyadicIndex(1, 2, 2)) is CubeClass.INSIDE
    assert outside.contains_point((1.0, 1.0))


def test_exterior_approximation_avoids_the_shape():
    disk = Disk(center=(0.5, 0.5), radius=0.25)
    box = (-0.5, -0.5, 1.5, 1.5)
    region = exterior_approximation(disk, box, 4)
    centers = np.array([c.center() for c in region.cubes])
    assert np.all(np.hypot(centers[:, 0] - 0.5, centers[:, 1] - 0.5) > 0.25)
    assert region.area < 4.0 - np.pi * 0.25 ** 2


def test_intersection_shape():
    both = IntersectionShape(OpenRectangle(0.0, 0.0, 1.0, 1.0), OpenRectangle(0.5, 0.0, 1.5, 1.0))
    assert both.classify_cube(DyadicIndex(3, 5, 3)) is CubeClass.INSIDE
    assert both.classify_cube(DyadicIndex(3, 1, 3)) is CubeClass.OUTSIDE
    assert both.bounding_box() == (0.5, 0.0, 1.0, 1.0)


def test_region_against_itself():
    region = dyadic_approximation(Disk(center=(0.5, 0.5), radius=0.4), DyadicIndex(2, 1, 1), 4)
    same = RegionShape(region)
    assert area_symdiff(region, same, (-0.5, -0.5, 1.5, 1.5)) == pytest.approx(0.0, abs=1e-12)
    metrics = set_convergence_metrics(region, same, (-0.5, -0.5, 1.5, 1.5))
    assert metrics.hausdorff_boundary == pytest.approx(0.0, abs=1e-12)


def test_window_must_meet_region():
    region = dyadic_approximation(UNIT_SQUARE, SQUARE_ROOT, 3)
    with pytest.raises(WindowEmpty):
        set_convergence_metrics(region, UNIT_SQUARE, (5.0, 5.0, 6.0, 6.0))


def test_two_component_fill():
    strip = ComplementShape(OpenRectangle(0.4, -1.0, 0.6, 2.0))
    halves = IntersectionShape(strip, UNIT_SQUARE)
    left, right = dyadic_approximation_multi(halves, [DyadicIndex(3, 1, 3), DyadicIndex(3, 6, 3)], 3)
    assert len(left) == 12 and len(right) == 12
    assert not (left.cube_set & right.cube_set)
