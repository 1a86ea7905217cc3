import math
import warnings

import pytest

from hcmstats import (
    DetectorConfig,
    LocalOscillator,
    RegimeWarning,
    build_context,
    symmetric_cross_lon,
)


def cross_context(
    t2=0.5,
    r2=0.5,
    eta1=1.0,
    eta2=1.0,
    nu1=0.0,
    nu2=0.0,
    mean=0j,
    lo_mag=1000.0,
    phi=0.0,
):
    """Cross-correlation context with the LO set to probe optical phase phi."""
    lon = symmetric_cross_lon(t2, r2)
    lo = LocalOscillator.for_optical_phase(lo_mag, phi)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        return build_context(
            lon,
            DetectorConfig(eta=eta1, nu=nu1),
            DetectorConfig(eta=eta2, nu=nu2),
            lo,
            mean_signal=mean,
        )


@pytest.fixture
def ctx_5050():
    # ideal detectors, 50:50 splitter, vacuum signal, |alpha_L|^2 = 1e6
    return cross_context()


@pytest.fixture
def ctx_1486():
    # the 14:86 splitter ratio with |<a>| = |alpha_L| = 1000
    return cross_context(t2=0.14, r2=0.86, mean=1000.0 + 0j)


TWO_PI = 2.0 * math.pi
