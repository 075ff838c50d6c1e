import numpy as np
import pytest
from hypothesis import settings

from rankx.algebra import field_make

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (7, 1), (3, 2)]


@pytest.fixture(params=SMALL_FIELDS, ids=lambda pd: f"GF{pd[0]}^{pd[1]}")
def small_field(request):
    return field_make(*request.param)


def random_matrix(F, shape, rng):
    return rng.integers(0, F.q, size=shape).astype(np.int64)
