"""Multipath channel snapshots: per-ray parameters and coherent power.

A snapshot collects every resolvable propagation path (MPC) seen at one
satellite elevation point.  Amplitudes are stored as linear path gains
relative to the transmitted signal so power ratios stay exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

from .geometry import ElevationAngle

TWO_PI = 2.0 * math.pi

COHERENT_POWER_SUM = "power-sum"
COHERENT_PHASOR_SUM = "phasor-sum"
_COHERENT_MODES = (COHERENT_POWER_SUM, COHERENT_PHASOR_SUM)


@dataclass(frozen=True)
class Mpc:
    """One multipath component.

    Attributes
    ----------
    amplitude : float
        Linear path gain, >= 0.
    phase_rad : float
        Carrier phase, normalised into [0, 2*pi).
    delay_s : float
        Propagation delay in seconds, >= 0.
    aod_az_deg, aod_el_deg : float
        Departure azimuth [0, 360) and elevation [-90, 90] at the satellite.
    aoa_az_deg, aoa_el_deg : float
        Arrival azimuth [0, 360) and elevation [-90, 90] at the GS.
    is_los : bool
        True for the (possibly shadowed) line-of-sight path.
    """

    amplitude: float
    phase_rad: float
    delay_s: float
    aod_az_deg: float = 0.0
    aod_el_deg: float = 0.0
    aoa_az_deg: float = 0.0
    aoa_el_deg: float = 0.0
    is_los: bool = False

    def __post_init__(self) -> None:
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be non-negative")
        if self.delay_s < 0.0:
            raise ValueError("delay must be non-negative")
        for az in (self.aod_az_deg, self.aoa_az_deg):
            if not 0.0 <= az < 360.0:
                raise ValueError(f"azimuth {az} outside [0, 360) deg")
        for el in (self.aod_el_deg, self.aoa_el_deg):
            if not -90.0 <= el <= 90.0:
                raise ValueError(f"elevation {el} outside [-90, 90] deg")
        object.__setattr__(self, "phase_rad", self.phase_rad % TWO_PI)

    @property
    def power(self) -> float:
        """|amplitude * exp(j*phase)|^2, the per-path received power ratio."""
        return self.amplitude * self.amplitude

    def scaled(self, gain_linear: float) -> "Mpc":
        """Copy with the amplitude multiplied by a non-negative linear gain."""
        return replace(self, amplitude=self.amplitude * gain_linear)


@dataclass(frozen=True)
class Snapshot:
    """All MPCs observed at one elevation point of a pass.

    MPCs are stored sorted by non-decreasing delay; at most one may be
    flagged as the LOS path.  The altitude is normally derived from psi
    and the arc radius, but loaders store the file's exact value so a
    save/load round trip is bit-identical.
    """

    psi: ElevationAngle
    distance_km: float
    mpcs: tuple[Mpc, ...] = field(default_factory=tuple)
    altitude_hint_km: float | None = None

    def __post_init__(self) -> None:
        if self.distance_km <= 0.0:
            raise ValueError("distance must be positive")
        mpcs = tuple(sorted(self.mpcs, key=lambda m: m.delay_s))
        if not mpcs:
            raise ValueError("snapshot must contain at least one MPC")
        if sum(1 for m in mpcs if m.is_los) > 1:
            raise ValueError("at most one MPC may be flagged LOS")
        object.__setattr__(self, "mpcs", mpcs)

    def __len__(self) -> int:
        return len(self.mpcs)

    @property
    def altitude_km(self) -> float:
        """Satellite height above the GS implied by psi and the arc radius."""
        if self.altitude_hint_km is not None:
            return self.altitude_hint_km
        return self.distance_km * self.psi.sin

    @property
    def los(self) -> Mpc | None:
        for m in self.mpcs:
            if m.is_los:
                return m
        return None

    def total_power(self) -> float:
        """Sum of per-path received power ratios."""
        return sum(m.power for m in self.mpcs)


def coherent_power_dbm(
    snapshot: Snapshot,
    mode: str = COHERENT_POWER_SUM,
    p_tx_dbm: float = 0.0,
) -> float:
    """Aggregate received power over the snapshot's MPCs, in dBm.

    ``power-sum`` adds per-path powers |a_i exp(j chi_i)|^2 (the default),
    ``phasor-sum`` adds the complex phasors first and squares the result,
    so opposite-phase paths may cancel.  Returns ``-inf`` as an explicit
    sentinel when the summed power is zero (all-zero amplitudes, or full
    phasor cancellation).
    """
    if mode not in _COHERENT_MODES:
        raise ValueError(f"coherent mode must be one of {_COHERENT_MODES}")
    if mode == COHERENT_POWER_SUM:
        total = sum(m.power for m in snapshot.mpcs)
        null_floor = 0.0
    else:
        phasor = sum(
            m.amplitude * cmath.exp(1j * m.phase_rad) for m in snapshot.mpcs
        )
        total = abs(phasor) ** 2
        # Cancellation below double-precision resolution of the phasor sum
        # is a true null, not a -300 dB value.
        null_floor = (sum(m.amplitude for m in snapshot.mpcs)) ** 2 * 1e-30
    if total <= null_floor:
        return float("-inf")
    return p_tx_dbm + 10.0 * math.log10(total)


def k_factor(snapshot: Snapshot, designate_strongest: bool = False) -> float | None:
    """Ratio of LOS power to total non-LOS power (linear).

    Returns None when the snapshot holds only the LOS path, where the
    ratio is undefined.  A snapshot without a LOS flag is a structural
    error unless ``designate_strongest`` promotes the strongest path.
    """
    los = snapshot.los
    if los is None:
        if len(snapshot) == 1 or not designate_strongest:
            raise ValueError(
                "snapshot has no LOS-flagged MPC; flag one or pass designate_strongest=True"
            )
        los = max(snapshot.mpcs, key=lambda m: m.amplitude)
    if len(snapshot) == 1:
        return None
    nlos_power = sum(m.power for m in snapshot.mpcs if m is not los)
    if nlos_power == 0.0:
        return math.inf
    return los.power / nlos_power
