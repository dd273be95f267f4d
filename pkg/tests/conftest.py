from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from nbihom.linalg import Matrix

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small = st.integers(-3, 3).map(Fraction)


@st.composite
def matrices(draw, rows=None, cols=None, max_dim=4):
    r = rows or draw(st.integers(1, max_dim))
    c = cols or draw(st.integers(1, max_dim))
    return Matrix.from_rows([[draw(small) for _ in range(c)] for _ in range(r)], c)


@pytest.fixture
def data_dir():
    from importlib import resources
    return resources.files("nbihom") / "data"
