import numpy as np
import pytest

from dyadpot.boundary.mesh import BoundaryMesh
from dyadpot.operators.assemble import assemble

SEED = 42


@pytest.fixture(scope="session")
def disk_mesh():
    """Regular 256-gon inscribed in the unit circle"""
    return BoundaryMesh.regular_polygon(256)


@pytest.fixture(scope="session")
def disk_ops(disk_mesh):
    return assemble(disk_mesh)


@pytest.fixture(scope="session")
def square_mesh():
    """Unit square, 16 panels per side"""
    return BoundaryMesh.rectangle(0.0, 0.0, 1.0, 1.0, panels_per_side=16)


@pytest.fixture(scope="session")
def square_ops(square_mesh):
    return assemble(square_mesh)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)
