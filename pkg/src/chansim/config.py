"""Scenario configuration: defaults, YAML file loading, CLI overrides.

Precedence is CLI flags > config file > built-in defaults.  The built-in
defaults describe a 400 km circular pass of a 10 GHz, 30 dBm downlink
with isotropic antennas and clear sky.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .antenna import AntennaModel
from .atmosphere import ALL_WEATHER, AtmosphereParams
from .errors import ConfigError
from .fading import default_psi2
from .geometry import (
    DEFAULT_ELEVATION_FLOOR_DEG,
    SLANT_AS_PRINTED,
    SLANT_ITU_PIECEWISE,
    ElevationAngle,
    PassGeometry,
)
from .link_budget import MISALIGN_AGGREGATE, MISALIGN_PER_RAY
from .mpc import COHERENT_PHASOR_SUM, COHERENT_POWER_SUM
from .ntn import DEFAULT_PSI1_DEG, DEFAULT_PSI2_DEG, DEFAULT_SHADOW_SIGMA_DB

# Table-style default altitude samples for a 400 km arc (km above the GS).
DEFAULT_ALTITUDES_KM = (5.0, 25.0, 50.0, 90.0, 136.0, 200.0, 264.0, 330.0, 371.0, 398.0)


@dataclass(frozen=True)
class FadingConfig:
    psi2_deg: float | None = None      # None -> elevation of the 100 km point
    m_shadow: float = 1.0
    fit_samples: int = 20000
    designate_strongest_los: bool = False


@dataclass(frozen=True)
class NtnConfig:
    psi1_deg: float = DEFAULT_PSI1_DEG
    psi2_deg: float = DEFAULT_PSI2_DEG
    tap_file: str | None = None
    sigma_db: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_SHADOW_SIGMA_DB))


@dataclass(frozen=True)
class ClusteringConfig:
    xi: float = 0.3
    zeta: int = 2


@dataclass(frozen=True)
class SynthConfig:
    los_only: bool = False
    max_extra_rays: int = 8


@dataclass(frozen=True)
class ScenarioConfig:
    geometry: PassGeometry = field(
        default_factory=lambda: PassGeometry(
            arc_radius_km=400.0, gs_height_km=0.023, altitudes_km=DEFAULT_ALTITUDES_KM
        )
    )
    fc_ghz: float = 10.0
    p_tx_dbm: float = 30.0
    l_hd_db: float = 1.5
    sat_antenna: AntennaModel = field(default_factory=AntennaModel)
    gs_antenna: AntennaModel = field(default_factory=AntennaModel)
    atmosphere: AtmosphereParams = field(default_factory=AtmosphereParams)
    weather: frozenset[str] = frozenset()
    misalign_az_deg: float = 0.0
    misalign_el_deg: float = 0.0
    fading: FadingConfig = field(default_factory=FadingConfig)
    ntn: NtnConfig = field(default_factory=NtnConfig)
    clustering: ClusteringConfig = field(default_factory=ClusteringConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    coherent_mode: str = COHERENT_POWER_SUM
    slant_mode: str = SLANT_AS_PRINTED
    misalign_mode: str = MISALIGN_AGGREGATE
    elevation_floor_deg: float = DEFAULT_ELEVATION_FLOOR_DEG
    seed: int = 1

    def psi2(self) -> ElevationAngle:
        """Shadowing threshold: configured value or the 100 km-point default."""
        if self.fading.psi2_deg is not None:
            return ElevationAngle(self.fading.psi2_deg)
        return default_psi2(self.geometry.arc_radius_km)


_MODE_CHOICES = {
    "coherent_mode": (COHERENT_POWER_SUM, COHERENT_PHASOR_SUM),
    "slant_mode": (SLANT_AS_PRINTED, SLANT_ITU_PIECEWISE),
    "misalign_mode": (MISALIGN_AGGREGATE, MISALIGN_PER_RAY),
}


def _build_section(cls, data: dict, section: str):
    if not isinstance(data, dict):
        raise ConfigError(f"config section {section!r} must be a mapping")
    valid = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
    unknown = set(data) - valid
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in config section {section!r}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config section {section!r}: {exc}") from exc


def _build_antenna(data: dict, section: str) -> AntennaModel:
    return _build_section(AntennaModel, data, section)


def load_config(path: str | Path | None) -> ScenarioConfig:
    """Load a scenario from a YAML file; None gives the built-in defaults."""
    if path is None:
        return ScenarioConfig()
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = yaml.safe_load(p.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{p}: invalid YAML: {exc}") from exc
    if data is None:
        return ScenarioConfig()
    if not isinstance(data, dict):
        raise ConfigError(f"{p}: top level must be a mapping")
    return _config_from_dict(data)


def _config_from_dict(data: dict) -> ScenarioConfig:
    known = {
        "pass",
        "fc_ghz",
        "p_tx_dbm",
        "l_hd_db",
        "antennas",
        "atmosphere",
        "weather",
        "misalign_az_deg",
        "misalign_el_deg",
        "fading",
        "ntn",
        "clustering",
        "synth",
        "modes",
        "elevation_floor_deg",
        "seed",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown top-level config keys {sorted(unknown)}")

    kwargs: dict = {}
    if "pass" in data:
        kwargs["geometry"] = _build_section(PassGeometry, data["pass"], "pass")
    for key in ("fc_ghz", "p_tx_dbm", "l_hd_db", "misalign_az_deg", "misalign_el_deg",
                "elevation_floor_deg", "seed"):
        if key in data:
            kwargs[key] = data[key]
    if "antennas" in data:
        ants = data["antennas"]
        if not isinstance(ants, dict) or set(ants) - {"satellite", "ground"}:
            raise ConfigError("config section 'antennas' takes 'satellite' and 'ground'")
        if "satellite" in ants:
            kwargs["sat_antenna"] = _build_antenna(ants["satellite"], "antennas.satellite")
        if "ground" in ants:
            kwargs["gs_antenna"] = _build_antenna(ants["ground"], "antennas.ground")
    if "atmosphere" in data:
        kwargs["atmosphere"] = _build_section(AtmosphereParams, data["atmosphere"], "atmosphere")
    if "weather" in data:
        terms = data["weather"]
        if not isinstance(terms, (list, tuple)):
            raise ConfigError("config key 'weather' must be a list")
        bad = set(terms) - ALL_WEATHER
        if bad:
            raise ConfigError(f"unknown weather terms {sorted(bad)}")
        kwargs["weather"] = frozenset(terms)
    if "fading" in data:
        kwargs["fading"] = _build_section(FadingConfig, data["fading"], "fading")
    if "ntn" in data:
        kwargs["ntn"] = _build_section(NtnConfig, data["ntn"], "ntn")
    if "clustering" in data:
        kwargs["clustering"] = _build_section(ClusteringConfig, data["clustering"], "clustering")
    if "synth" in data:
        kwargs["synth"] = _build_section(SynthConfig, data["synth"], "synth")
    if "modes" in data:
        modes = data["modes"]
        if not isinstance(modes, dict):
            raise ConfigError("config section 'modes' must be a mapping")
        rename = {"coherent": "coherent_mode", "slant": "slant_mode",
                  "misalignment": "misalign_mode"}
        unknown_modes = set(modes) - set(rename)
        if unknown_modes:
            raise ConfigError(f"unknown mode keys {sorted(unknown_modes)}")
        for short, attr in rename.items():
            if short in modes:
                value = modes[short]
                if value not in _MODE_CHOICES[attr]:
                    raise ConfigError(
                        f"mode {short!r} must be one of {_MODE_CHOICES[attr]}, got {value!r}"
                    )
                kwargs[attr] = value
    try:
        cfg = ScenarioConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    _validate(cfg)
    return cfg


def _validate(cfg: ScenarioConfig) -> None:
    if cfg.fc_ghz <= 0.0:
        raise ConfigError("fc_ghz must be positive")
    if not cfg.geometry.altitudes_km:
        raise ConfigError("pass geometry needs at least one altitude sample")
    if cfg.ntn.psi1_deg >= cfg.ntn.psi2_deg:
        raise ConfigError("ntn.psi1_deg must be below ntn.psi2_deg")
    if cfg.fading.psi2_deg is None and cfg.geometry.arc_radius_km <= 100.0:
        raise ConfigError("set fading.psi2_deg explicitly for arc radii of 100 km or less")
    if cfg.fading.psi2_deg is not None and not 0.0 < cfg.fading.psi2_deg <= 90.0:
        raise ConfigError("fading.psi2_deg must be in (0, 90]")
    if cfg.clustering.xi <= 0.0 or cfg.clustering.zeta < 1:
        raise ConfigError("clustering needs xi > 0 and zeta >= 1")
    if cfg.fading.fit_samples < 100:
        raise ConfigError("fading.fit_samples must be at least 100")


def apply_overrides(
    cfg: ScenarioConfig,
    *,
    weather_add: set[str] | None = None,
    misalign_az_deg: float | None = None,
    misalign_el_deg: float | None = None,
    seed: int | None = None,
) -> ScenarioConfig:
    """Apply CLI-level overrides on top of a loaded configuration."""
    changes: dict = {}
    if weather_add:
        bad = weather_add - ALL_WEATHER
        if bad:
            raise ConfigError(f"unknown weather terms {sorted(bad)}")
        changes["weather"] = cfg.weather | frozenset(weather_add)
    if misalign_az_deg is not None:
        changes["misalign_az_deg"] = misalign_az_deg
    if misalign_el_deg is not None:
        changes["misalign_el_deg"] = misalign_el_deg
    if seed is not None:
        changes["seed"] = seed
    if not changes:
        return cfg
    out = replace(cfg, **changes)
    _validate(out)
    return out
