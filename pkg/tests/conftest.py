import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from khodetect.poly import LaurentPoly, PolyMatrix

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def laurent_polys(draw, lo=-4, hi=6, max_terms=5):
    exps = draw(st.sets(st.integers(lo, hi), max_size=max_terms))
    return LaurentPoly.from_exponents(exps)


@st.composite
def poly_matrices(draw, nrows, ncols, lo=-2, hi=3):
    return PolyMatrix([[draw(laurent_polys(lo, hi, 3)) for _ in range(ncols)]
                       for _ in range(nrows)], nrows, ncols)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
