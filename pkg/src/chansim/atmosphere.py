"""Elevation-dependent weather attenuation: rain, clouds, snow, fixed losses.

Rain follows the specific-attenuation / effective-path-length model with
a horizontal reduction factor; clouds and snow are thin-layer 1/sin(psi)
terms.  A constant term lumps hardware-independent atmospheric effects
(gaseous absorption, scintillation) that the model does not resolve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ElevationFloorError
from .geometry import (
    DEFAULT_ELEVATION_FLOOR_DEG,
    SLANT_AS_PRINTED,
    ElevationAngle,
    PassGeometry,
    rain_slant_length,
)

WEATHER_RAIN = "rain"
WEATHER_CLOUDS = "clouds"
WEATHER_SNOW = "snow"
ALL_WEATHER = frozenset({WEATHER_RAIN, WEATHER_CLOUDS, WEATHER_SNOW})


@dataclass(frozen=True)
class AtmosphereParams:
    """Weather model constants for a 10 GHz circularly polarised link.

    Defaults describe a moderate Northern-European operating point:
    32 mm/h rain at the 0.01% exceedance level, 1.5 km thick clouds with
    0.35 g/m^3 liquid water, 4 mm/h snow, and 1.5 dB of fixed
    atmospheric loss.
    """

    k_rn: float = 0.0363
    epsilon: float = 1.095
    rain_rate_mmh: float = 32.0
    beta_db: float = 3.0
    h_rain_km: float = 5.0
    k_cl: float = 0.072
    cloud_thickness_km: float = 1.5
    lwc_gm3: float = 0.35
    k_sn: float = 0.004
    snow_rate_mmh: float = 4.0
    h_snow_km: float = 5.0
    l_fixed_db: float = 1.5
    fc_ghz: float = 10.0
    r_earth_km: float = 6371.0

    def __post_init__(self) -> None:
        for name in (
            "k_rn",
            "epsilon",
            "rain_rate_mmh",
            "beta_db",
            "h_rain_km",
            "k_cl",
            "cloud_thickness_km",
            "lwc_gm3",
            "k_sn",
            "snow_rate_mmh",
            "h_snow_km",
            "l_fixed_db",
            "r_earth_km",
        ):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        if self.fc_ghz <= 0.0:
            raise ValueError("carrier frequency must be positive")


def specific_rain_attenuation(p: AtmosphereParams) -> float:
    """Specific rain attenuation, dB/km: k_rn * rain_rate ** epsilon."""
    return p.k_rn * p.rain_rate_mmh**p.epsilon


def horizontal_reduction_factor(l_g_km: float, gamma_r: float, fc_ghz: float) -> float:
    """Horizontal reduction factor for the rain path at 0.01% exceedance."""
    return 1.0 / (
        1.0
        + 0.78 * math.sqrt(l_g_km * gamma_r / fc_ghz)
        - 0.38 * (1.0 - math.exp(-2.0 * l_g_km))
    )


def _check_floor(psi: ElevationAngle, floor_deg: float) -> None:
    if psi.psi_deg < floor_deg:
        raise ElevationFloorError(
            f"elevation {psi.psi_deg} deg below floor {floor_deg} deg"
        )


def rain_attenuation_db(
    psi: ElevationAngle,
    p: AtmosphereParams,
    geo: PassGeometry,
    slant_mode: str = SLANT_AS_PRINTED,
    floor_deg: float = DEFAULT_ELEVATION_FLOOR_DEG,
) -> float:
    """Rain attenuation in dB, including the polarisation constant.

    The effective path length is computed as L_s * r_0.01, which is the
    algebraically cancelled form of (L_s cos(psi)) * r_0.01 / cos(psi)
    and therefore stays finite at zenith.
    """
    _check_floor(psi, floor_deg)
    gamma_r = specific_rain_attenuation(p)
    l_s = rain_slant_length(
        psi, p.h_rain_km, geo.gs_height_km, p.r_earth_km, mode=slant_mode, floor_deg=floor_deg
    )
    l_g = l_s * psi.cos
    r001 = horizontal_reduction_factor(l_g, gamma_r, p.fc_ghz)
    l_e = l_s * r001
    return gamma_r * l_e + p.beta_db


def cloud_attenuation_db(
    psi: ElevationAngle,
    p: AtmosphereParams,
    floor_deg: float = DEFAULT_ELEVATION_FLOOR_DEG,
) -> float:
    """Cloud attenuation in dB: k_cl * thickness * liquid water / sin(psi)."""
    _check_floor(psi, floor_deg)
    return p.k_cl * p.cloud_thickness_km * p.lwc_gm3 / psi.sin


def snow_attenuation_db(
    psi: ElevationAngle,
    p: AtmosphereParams,
    floor_deg: float = DEFAULT_ELEVATION_FLOOR_DEG,
) -> float:
    """Snow attenuation in dB: k_sn * snow rate * snow height / sin(psi)."""
    _check_floor(psi, floor_deg)
    return p.k_sn * p.snow_rate_mmh * p.h_snow_km / psi.sin


def total_atmospheric_db(
    psi: ElevationAngle,
    p: AtmosphereParams,
    geo: PassGeometry,
    weather: frozenset[str] | set[str] = frozenset(),
    slant_mode: str = SLANT_AS_PRINTED,
    floor_deg: float = DEFAULT_ELEVATION_FLOOR_DEG,
) -> float:
    """Sum of the enabled weather terms plus the fixed atmospheric loss."""
    unknown = set(weather) - ALL_WEATHER
    if unknown:
        raise ValueError(f"unknown weather terms {sorted(unknown)}")
    total = p.l_fixed_db
    if WEATHER_RAIN in weather:
        total += rain_attenuation_db(psi, p, geo, slant_mode=slant_mode, floor_deg=floor_deg)
    if WEATHER_CLOUDS in weather:
        total += cloud_attenuation_db(psi, p, floor_deg=floor_deg)
    if WEATHER_SNOW in weather:
        total += snow_attenuation_db(psi, p, floor_deg=floor_deg)
    return total
