"""Pass geometry for a circular overhead satellite arc.

The satellite is idealised as moving on a circular arc of radius ``d``
centred on the ground station, so the link range stays ``d`` over the
whole pass and the elevation angle seen from the ground station is
``psi = arcsin(altitude / d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ElevationFloorError

DEFAULT_ELEVATION_FLOOR_DEG = 0.5

SLANT_AS_PRINTED = "as-printed"
SLANT_ITU_PIECEWISE = "itu-piecewise"
_SLANT_MODES = (SLANT_AS_PRINTED, SLANT_ITU_PIECEWISE)

_PASS_DIRECTIONS = ("ascending", "descending", "full-pass")


@dataclass(frozen=True)
class ElevationAngle:
    """Elevation angle of the satellite above the GS horizon, in (0, 90] deg."""

    psi_deg: float

    def __post_init__(self) -> None:
        if not 0.0 < self.psi_deg <= 90.0:
            raise ValueError(f"elevation angle must be in (0, 90] deg, got {self.psi_deg}")

    @property
    def radians(self) -> float:
        return math.radians(self.psi_deg)

    @property
    def sin(self) -> float:
        return math.sin(self.radians)

    @property
    def cos(self) -> float:
        return math.cos(self.radians)


@dataclass(frozen=True)
class PassGeometry:
    """Circular-arc pass: arc radius, GS height and the sampled altitudes.

    Altitudes are satellite heights above the ground station in km and must
    lie in (0, arc_radius] so that arcsin(h/d) is defined.
    """

    arc_radius_km: float
    gs_height_km: float = 0.0
    altitudes_km: tuple[float, ...] = field(default_factory=tuple)
    direction: str = "full-pass"

    def __post_init__(self) -> None:
        if self.arc_radius_km <= 0.0:
            raise ValueError("arc radius must be positive")
        if self.gs_height_km < 0.0:
            raise ValueError("GS height must be non-negative")
        if self.direction not in _PASS_DIRECTIONS:
            raise ValueError(f"direction must be one of {_PASS_DIRECTIONS}")
        object.__setattr__(self, "altitudes_km", tuple(self.altitudes_km))
        for h in self.altitudes_km:
            if not 0.0 < h <= self.arc_radius_km:
                raise ValueError(
                    f"altitude {h} km outside (0, {self.arc_radius_km}] km arc radius"
                )

    def elevations(self) -> list[ElevationAngle]:
        """Elevation angle for every altitude sample, in input order."""
        return [altitude_to_elevation(h, self.arc_radius_km) for h in self.altitudes_km]


def altitude_to_elevation(h_km: float, d_km: float) -> ElevationAngle:
    """Elevation angle for a satellite at height ``h_km`` on an arc of radius ``d_km``.

    Parameters
    ----------
    h_km : float
        Satellite height above the ground station, 0 < h_km <= d_km.
    d_km : float
        Arc radius centred on the ground station.

    Returns
    -------
    ElevationAngle
        arcsin(h_km / d_km) expressed in degrees.
    """
    if d_km <= 0.0:
        raise ValueError("arc radius must be positive")
    if h_km <= 0.0 or h_km > d_km:
        raise ValueError(f"altitude {h_km} km outside (0, {d_km}] km")
    return ElevationAngle(math.degrees(math.asin(h_km / d_km)))


def rain_slant_length(
    psi: ElevationAngle,
    h_rain_km: float,
    h_gs_km: float,
    r_earth_km: float,
    mode: str = SLANT_AS_PRINTED,
    floor_deg: float = DEFAULT_ELEVATION_FLOOR_DEG,
) -> float:
    """Slant path length through the rain layer, in km.

    The default ``as-printed`` mode sums a spherical-geometry square-root
    term with the thin-layer term (h_rain - h_gs)/sin(psi).  The
    ``itu-piecewise`` mode uses only the thin-layer term at psi >= 5 deg
    and only the square-root term below, which matches the conventional
    piecewise use of the two expressions.

    Raises
    ------
    ElevationFloorError
        If psi is below ``floor_deg``; the 1/sin(psi) term is singular
        towards the horizon and is not extrapolated.
    """
    if mode not in _SLANT_MODES:
        raise ValueError(f"slant mode must be one of {_SLANT_MODES}")
    if h_rain_km <= h_gs_km:
        raise ValueError("rain height must exceed GS height")
    if psi.psi_deg < floor_deg:
        raise ElevationFloorError(
            f"elevation {psi.psi_deg} deg below floor {floor_deg} deg"
        )
    dh = h_rain_km - h_gs_km
    s = psi.sin
    sqrt_term = math.sqrt(2.0 * dh * r_earth_km / (s * s + 2.0 * dh / r_earth_km))
    thin_term = dh / s
    if mode == SLANT_AS_PRINTED:
        return sqrt_term + thin_term
    return thin_term if psi.psi_deg >= 5.0 else sqrt_term
