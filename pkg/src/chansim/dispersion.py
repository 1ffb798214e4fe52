"""Delay and angular dispersion metrics per snapshot.

Delay spread is the power-weighted standard deviation of path delays.
Azimuth spread uses circular statistics (mean resultant length), while
elevation spread is the ordinary linear standard deviation; both are
unweighted over the paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mpc import Snapshot

# Mean resultant lengths below this are treated as fully dispersed; the
# circular spread is then unbounded and reported as a sentinel rather
# than a large meaningless number.
_RESULTANT_FLOOR = 1e-12

UNBOUNDED_SPREAD = math.inf


@dataclass(frozen=True)
class SpreadReport:
    """Per-snapshot dispersion summary; all zero for a single-path snapshot."""

    rms_ds_s: float
    mean_excess_delay_s: float
    az_spread_sat_deg: float
    el_spread_sat_deg: float
    az_spread_gs_deg: float
    el_spread_gs_deg: float


def rms_delay_spread(snapshot: Snapshot) -> tuple[float, float]:
    """Power-weighted RMS delay spread and mean excess delay, in seconds.

    Per-path powers are |a_i exp(j chi_i)|^2.  Raises ValueError when the
    total power is zero.
    """
    powers = np.array([m.power for m in snapshot.mpcs])
    delays = np.array([m.delay_s for m in snapshot.mpcs])
    total = float(powers.sum())
    if total <= 0.0:
        raise ValueError("total snapshot power is zero")
    mean_excess = float(np.sum(powers * delays) / total)
    rms = math.sqrt(float(np.sum(powers * (delays - mean_excess) ** 2) / total))
    return rms, mean_excess


def azimuth_spread(angles_deg: list[float] | np.ndarray) -> float:
    """Circular angular spread (degrees) from the mean resultant length.

    Returns 0 for perfectly aligned angles and the UNBOUNDED_SPREAD
    sentinel (inf) when the resultant vanishes (e.g. angles uniformly
    spaced around the circle).
    """
    angles = np.radians(np.asarray(angles_deg, dtype=float))
    if angles.size == 0:
        raise ValueError("need at least one angle")
    resultant = math.hypot(float(np.sum(np.cos(angles))), float(np.sum(np.sin(angles))))
    length = resultant / angles.size
    if length < _RESULTANT_FLOOR:
        return UNBOUNDED_SPREAD
    if length >= 1.0:
        return 0.0
    return math.degrees(math.sqrt(-2.0 * math.log(length)))


def elevation_spread(angles_deg: list[float] | np.ndarray) -> float:
    """Linear angular spread: population standard deviation, in degrees."""
    angles = np.asarray(angles_deg, dtype=float)
    if angles.size == 0:
        raise ValueError("need at least one angle")
    return float(np.std(angles))


def spread_report(snapshot: Snapshot) -> SpreadReport:
    """Assemble delay and angular spreads at both link ends for a snapshot."""
    rms, mean_excess = rms_delay_spread(snapshot)
    return SpreadReport(
        rms_ds_s=rms,
        mean_excess_delay_s=mean_excess,
        az_spread_sat_deg=azimuth_spread([m.aod_az_deg for m in snapshot.mpcs]),
        el_spread_sat_deg=elevation_spread([m.aod_el_deg for m in snapshot.mpcs]),
        az_spread_gs_deg=azimuth_spread([m.aoa_az_deg for m in snapshot.mpcs]),
        el_spread_gs_deg=elevation_spread([m.aoa_el_deg for m in snapshot.mpcs]),
    )
