import numpy as np
import pytest

from symcone import algebra
from symcone.algebra import direct_sum, norm, orthant, psd, soc

# Structures exercised throughout the suite: one per primitive kind plus a
# five-block direct sum of rank 12.
STRUCTURES = {
    "orthant5": orthant(5),
    "soc5": soc(5),
    "psd3": psd(3),
    "mixed": direct_sum(orthant(3), psd(2), psd(3), soc(2), soc(3)),
}


@pytest.fixture(params=sorted(STRUCTURES))
def structure(request):
    return STRUCTURES[request.param]


def rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def assert_elements_close(x, y, tol=1e-9, scale_free=False):
    scale = 1.0 if not scale_free else max(1.0, norm(x), norm(y))
    assert norm(x - y) <= tol * scale, f"elements differ by {norm(x - y):.3e}"


def random_interior(structure, generator, floor=1e-3):
    """Trace-one interior point with eigenvalues bounded away from zero."""
    u = algebra.random_trace_one(structure, generator)
    e = algebra.identity(structure)
    r = structure.rank
    # Mix toward the barycenter so the spectrum stays comfortably positive.
    return (1.0 - floor * r) * u + floor * e
