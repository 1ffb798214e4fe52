"""Antenna gain patterns, beam misalignment loss, and ray spatial filtering.

Three pattern models are provided.  ``isotropic`` has 0 dBi everywhere.
``single-element`` uses a Gaussian main lobe, peak - 12 (offset/HPBW)^2
dB, clipped at a configurable back-lobe floor.  ``phased-array`` uses
the uniform rectangular array factor with progressive-phase steering,
separable in the azimuth and elevation planes; steering away from
broadside broadens the beam through the sine-space projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .mpc import Mpc, Snapshot

KIND_ISOTROPIC = "isotropic"
KIND_SINGLE = "single-element"
KIND_ARRAY = "phased-array"
_KINDS = (KIND_ISOTROPIC, KIND_SINGLE, KIND_ARRAY)

DEFAULT_PATTERN_FLOOR_DB = 30.0


@dataclass(frozen=True)
class AntennaModel:
    """Immutable antenna description with its current steering state.

    ``steer_az_deg``/``steer_el_deg`` give the boresight (single element,
    mechanical) or the electronic beam pointing (array) in the same
    angle convention as the ray angles they are compared against.
    """

    kind: str = KIND_ISOTROPIC
    peak_gain_dbi: float = 0.0
    hpbw_deg: float | None = None
    nx: int = 1
    ny: int = 1
    spacing_wavelengths: float = 0.5
    steer_az_deg: float = 0.0
    steer_el_deg: float = 0.0
    floor_db: float = DEFAULT_PATTERN_FLOOR_DB

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"antenna kind must be one of {_KINDS}")
        if self.kind == KIND_SINGLE and (self.hpbw_deg is None or self.hpbw_deg <= 0.0):
            raise ValueError("single-element antenna needs a positive HPBW")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("element counts must be at least 1")
        if self.spacing_wavelengths <= 0.0:
            raise ValueError("element spacing must be positive")
        if self.floor_db <= 0.0:
            raise ValueError("pattern floor must be positive")

    def steered(self, az_deg: float, el_deg: float) -> "AntennaModel":
        """New model pointing at the given direction."""
        return replace(self, steer_az_deg=az_deg, steer_el_deg=el_deg)


def _wrap_deg(angle: float) -> float:
    """Wrap an angle difference into [-180, 180)."""
    return (angle + 180.0) % 360.0 - 180.0


def _af_plane_db(n: int, spacing: float, steer_deg: float, offset_deg: float) -> float:
    """Normalised uniform linear array factor in one plane, in dB (<= 0)."""
    if n == 1:
        return 0.0
    u = math.sin(math.radians(steer_deg + offset_deg)) - math.sin(math.radians(steer_deg))
    x = math.pi * spacing * u
    sin_x = math.sin(x)
    if abs(sin_x) < 1e-15:
        # Main lobe or a grating direction: |AF| = n exactly.
        return 0.0
    af = math.sin(n * x) / (n * sin_x)
    if af == 0.0:
        return -math.inf
    return 20.0 * math.log10(abs(af))


def gain_dbi(model: AntennaModel, az_off_deg: float, el_off_deg: float) -> float:
    """Antenna gain at an offset from the current beam pointing, in dBi.

    Offsets are angles in the azimuth and elevation planes measured from
    the steered boresight, each in [-180, 180].
    """
    for off in (az_off_deg, el_off_deg):
        if not -180.0 <= off <= 180.0:
            raise ValueError(f"offset {off} outside [-180, 180] deg")
    if model.kind == KIND_ISOTROPIC:
        return 0.0
    if model.kind == KIND_SINGLE:
        ratio_sq = (az_off_deg**2 + el_off_deg**2) / model.hpbw_deg**2
        return model.peak_gain_dbi - min(12.0 * ratio_sq, model.floor_db)
    pattern_db = _af_plane_db(
        model.nx, model.spacing_wavelengths, model.steer_az_deg, az_off_deg
    ) + _af_plane_db(model.ny, model.spacing_wavelengths, model.steer_el_deg, el_off_deg)
    return model.peak_gain_dbi + max(pattern_db, -model.floor_db)


def misalignment_loss_db(model: AntennaModel, d_az_deg: float, d_el_deg: float) -> float:
    """Gain lost by pointing (d_az, d_el) away from the aligned boresight."""
    return gain_dbi(model, 0.0, 0.0) - gain_dbi(model, d_az_deg, d_el_deg)


def spatial_filter(
    snapshot: Snapshot,
    sat_model: AntennaModel,
    gs_model: AntennaModel,
) -> Snapshot:
    """Re-weight every ray by the antenna gains at its departure/arrival angles.

    Input amplitudes are assumed to be referenced to isotropic patterns;
    each amplitude is scaled by 10^((G_sat + G_gs)/20) with the gains
    evaluated at the ray's angular offset from each antenna's pointing.
    Angles are left untouched.
    """
    filtered: list[Mpc] = []
    for ray in snapshot.mpcs:
        g_sat = gain_dbi(
            sat_model,
            _wrap_deg(ray.aod_az_deg - sat_model.steer_az_deg),
            ray.aod_el_deg - sat_model.steer_el_deg,
        )
        g_gs = gain_dbi(
            gs_model,
            _wrap_deg(ray.aoa_az_deg - gs_model.steer_az_deg),
            ray.aoa_el_deg - gs_model.steer_el_deg,
        )
        filtered.append(ray.scaled(10.0 ** ((g_sat + g_gs) / 20.0)))
    return Snapshot(
        psi=snapshot.psi,
        distance_km=snapshot.distance_km,
        mpcs=tuple(filtered),
        altitude_hint_km=snapshot.altitude_hint_km,
    )
