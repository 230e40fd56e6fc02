import math
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# allow running the suite from a source checkout without an install
_SRC = Path(__file__).resolve().parents[1] / "src"
if str(_SRC) not in sys.path:
    sys.path.insert(0, str(_SRC))

settings.register_profile(
    "default",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def make_instance(desc, const, rng, rho, noiseless=False, n_r=2):
    """One channel use: symbols, channel, received matrix."""
    from midocodes.codes import encode

    pts = np.array(const.points)
    s = pts[rng.integers(0, const.m, size=desc.k)]
    h = (rng.normal(size=(n_r, desc.n_t)) + 1j * rng.normal(size=(n_r, desc.n_t))) / math.sqrt(2)
    cw = encode(desc, s, normalized=True, constellation=const)
    n = 0.0 if noiseless else \
        (rng.normal(size=(n_r, desc.T)) + 1j * rng.normal(size=(n_r, desc.T))) / math.sqrt(2)
    y = math.sqrt(rho) * (h @ cw) + n
    return s, h, y


@pytest.fixture(scope="session")
def qam4():
    from midocodes.codes import make_constellation
    return make_constellation("qam", 4)


@pytest.fixture(scope="session")
def hex4():
    from midocodes.codes import make_constellation
    return make_constellation("hex", 4)


@pytest.fixture(scope="session")
def s4x2_exhaustive(qam4):
    """Shared full difference-space search for the 4x2 code (used by several tests)."""
    import time

    from midocodes.analysis import min_det_exhaustive
    from midocodes.codes import build_code

    t0 = time.monotonic()
    res = min_det_exhaustive(build_code("s4x2"), qam4)
    return res, time.monotonic() - t0


@pytest.fixture(scope="session")
def sr4x2_exhaustive(qam4):
    import time

    from midocodes.analysis import min_det_exhaustive
    from midocodes.codes import build_code

    t0 = time.monotonic()
    res = min_det_exhaustive(build_code("sr4x2"), qam4)
    return res, time.monotonic() - t0
