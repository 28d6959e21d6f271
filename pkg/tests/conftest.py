import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ricciflow import shapes
from ricciflow.mesh import LengthAssignment, build_surface, lengths_from_embedding

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def tetra():
    p, f = shapes.tetrahedron()
    s = build_surface(f)
    return s, lengths_from_embedding(p, s)


@pytest.fixture(scope="session")
def icosa():
    p, f = shapes.icosahedron()
    s = build_surface(f)
    return s, lengths_from_embedding(p, s)


@pytest.fixture(scope="session")
def flat_torus():
    s = build_surface(shapes.torus_grid())
    return s, LengthAssignment(np.ones(s.n_edges))


@pytest.fixture(scope="session")
def saddle():
    s = build_surface(shapes.heptagon_saddle())
    return s, LengthAssignment(np.ones(s.n_edges))


@pytest.fixture(scope="session")
def genus2():
    return build_surface(shapes.genus2_octagon())
