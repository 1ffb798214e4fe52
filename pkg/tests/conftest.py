import math

import pytest

from chansim.geometry import ElevationAngle
from chansim.mpc import Mpc, Snapshot


def make_snapshot(
    specs,
    psi_deg: float = 45.0,
    distance_km: float = 400.0,
):
    """Build a snapshot from (amplitude, phase, delay[, is_los]) tuples.

    Angles default to zero; the first ray flagged is the LOS.
    """
    mpcs = []
    for spec in specs:
        amplitude, phase, delay = spec[:3]
        is_los = spec[3] if len(spec) > 3 else False
        mpcs.append(
            Mpc(amplitude=amplitude, phase_rad=phase, delay_s=delay, is_los=is_los)
        )
    return Snapshot(psi=ElevationAngle(psi_deg), distance_km=distance_km, mpcs=tuple(mpcs))


@pytest.fixture
def two_ray_snapshot():
    return make_snapshot([(0.1, 0.0, 0.0, True), (0.1, 0.0, 1e-9)])


def assert_close(actual, expected, rel=1e-9, abs_tol=0.0):
    assert actual == pytest.approx(expected, rel=rel, abs=abs_tol), (
        f"{actual!r} != {expected!r} (rel={rel}, abs={abs_tol})"
    )


def db(x: float) -> float:
    return 10.0 * math.log10(x)
