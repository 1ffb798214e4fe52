"""Report generation: runs a subcommand over a pass and emits CSV + JSON.

Snapshots come from a trace file when one is given, otherwise from the
synthetic generator.  Every writer goes through write-then-rename so a
failed run never leaves partial output, and all outputs are pure
functions of (config, trace, seed).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from . import clustering, dispersion, fading, ntn
from .config import ScenarioConfig
from .errors import ConfigError
from .link_budget import LINK_BUDGET_COLUMNS, fspl_db, sweep_pass
from .mpc import Snapshot, k_factor
from .synth import synth_scenario
from .traceio import _atomic_write_text, load_trace

SUBCOMMANDS = ("linkbudget", "fading", "spreads", "cluster", "ntn-compare")

FADING_COLUMNS = (
    "psi_deg",
    "altitude_km",
    "n_mpcs",
    "regime",
    "k_direct",
    "omega",
    "k_fit",
    "m_fit",
    "omega_fit",
    "n_samples",
)

SPREADS_COLUMNS = (
    "psi_deg",
    "altitude_km",
    "n_mpcs",
    "rms_ds_s",
    "mean_excess_delay_s",
    "az_spread_sat_deg",
    "el_spread_sat_deg",
    "az_spread_gs_deg",
    "el_spread_gs_deg",
)

CLUSTER_COLUMNS = ("psi_deg", "altitude_km", "mpc_index", "delay_s", "label")

NTN_COLUMNS = (
    "psi_deg",
    "altitude_km",
    "profile",
    "fspl_db",
    "ntn_mean_db",
    "ntn_lo_db",
    "ntn_hi_db",
    "ntn_draw_db",
)

UNBOUNDED = "unbounded"


def _fmt(value) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, float):
        if math.isinf(value):
            return UNBOUNDED if value > 0 else "-inf"
        return repr(value)
    return str(value)


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return _fmt(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _write_csv(path: Path, columns: tuple[str, ...], rows: list[list]) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    _atomic_write_text(path, json.dumps(_json_safe(payload), indent=2) + "\n")


def _row_seed(base_seed: int, index: int) -> int:
    # Stable per-snapshot stream so rows are reproducible in isolation.
    return base_seed * 1_000_003 + index


def gather_snapshots(config: ScenarioConfig, trace_path: str | Path | None) -> list[Snapshot]:
    if trace_path is not None:
        return load_trace(trace_path)
    return synth_scenario(
        config.geometry,
        config.fc_ghz,
        config.psi2(),
        los_only=config.synth.los_only,
        max_extra_rays=config.synth.max_extra_rays,
        seed=config.seed,
    )


def run_report(
    config: ScenarioConfig,
    subcommand: str,
    out_dir: str | Path,
    trace_path: str | Path | None = None,
) -> dict:
    """Run one subcommand, write its CSV and summary.json, return the summary."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}; choose from {SUBCOMMANDS}")
    out = Path(out_dir)
    snapshots = gather_snapshots(config, trace_path)
    snapshots = sorted(snapshots, key=lambda s: s.altitude_km)
    summary: dict = {
        "subcommand": subcommand,
        "seed": config.seed,
        "arc_radius_km": config.geometry.arc_radius_km,
        "fc_ghz": config.fc_ghz,
        "n_snapshots": len(snapshots),
        "source": "trace" if trace_path is not None else "synthetic",
    }
    builder = {
        "linkbudget": _report_linkbudget,
        "fading": _report_fading,
        "spreads": _report_spreads,
        "cluster": _report_cluster,
        "ntn-compare": _report_ntn,
    }[subcommand]
    columns, rows, extra = builder(config, snapshots)
    summary.update(extra)
    _write_csv(out / f"{subcommand}.csv", columns, rows)
    _write_json(out / "summary.json", summary)
    return summary


def _report_linkbudget(config: ScenarioConfig, snapshots: list[Snapshot]):
    budget_rows = sweep_pass(
        config.geometry,
        snapshots,
        config.sat_antenna,
        config.gs_antenna,
        config.atmosphere,
        weather=config.weather,
        misalignment=(config.misalign_az_deg, config.misalign_el_deg),
        p_tx_dbm=config.p_tx_dbm,
        l_hd_db=config.l_hd_db,
        coherent_mode=config.coherent_mode,
        slant_mode=config.slant_mode,
        misalign_mode=config.misalign_mode,
        floor_deg=config.elevation_floor_deg,
    )
    rows = [[getattr(r, c) for c in LINK_BUDGET_COLUMNS] for r in budget_rows]
    extra = {
        "weather": sorted(config.weather),
        "misalign_deg": [config.misalign_az_deg, config.misalign_el_deg],
        "p_tx_dbm": config.p_tx_dbm,
    }
    return LINK_BUDGET_COLUMNS, rows, extra


def _report_fading(config: ScenarioConfig, snapshots: list[Snapshot]):
    psi2 = config.psi2()
    rows = []
    fits = []
    for idx, snap in enumerate(snapshots):
        regime = fading.select_regime(snap, psi2)
        k_direct = k_factor(snap, designate_strongest=config.fading.designate_strongest_los)
        omega = snap.total_power()
        k_fit = m_fit = omega_fit = None
        n_samples = 0
        fittable = (
            regime is not fading.FadingRegime.DETERMINISTIC_LOS
            and k_direct is not None
            and math.isfinite(k_direct)
        )
        if fittable:
            n_samples = config.fading.fit_samples
            if regime is fading.FadingRegime.RICIAN:
                params = fading.RicianParams(k=k_direct, omega=omega)
            else:
                params = fading.ShadowedRicianParams(
                    k=k_direct, m=config.fading.m_shadow, omega=omega
                )
            draws = fading.sample(params, n_samples, _row_seed(config.seed, idx))
            fitted = fading.fit(draws, regime)
            k_fit = fitted.k
            omega_fit = fitted.omega
            m_fit = getattr(fitted, "m", None)
        rows.append(
            [
                snap.psi.psi_deg,
                snap.altitude_km,
                len(snap),
                regime.value,
                k_direct,
                omega,
                k_fit,
                m_fit,
                omega_fit,
                n_samples,
            ]
        )
        fits.append(
            {
                "psi_deg": snap.psi.psi_deg,
                "regime": regime.value,
                "k_direct": k_direct,
                "k_fit": k_fit,
                "m_fit": m_fit,
                "omega_fit": omega_fit,
                "n_samples": n_samples,
            }
        )
    return FADING_COLUMNS, rows, {"psi2_deg": psi2.psi_deg, "fits": fits}


def _cdf_entry(values: list[float]) -> dict:
    finite = sorted(v for v in values if math.isfinite(v))
    n = len(values)
    return {
        "values": finite,
        "cum_prob": [(i + 1) / n for i in range(len(finite))],
        "n_unbounded": sum(1 for v in values if math.isinf(v)),
    }


def _report_spreads(config: ScenarioConfig, snapshots: list[Snapshot]):
    rows = []
    reports = []
    for snap in snapshots:
        rep = dispersion.spread_report(snap)
        reports.append(rep)
        rows.append(
            [
                snap.psi.psi_deg,
                snap.altitude_km,
                len(snap),
                rep.rms_ds_s,
                rep.mean_excess_delay_s,
                rep.az_spread_sat_deg,
                rep.el_spread_sat_deg,
                rep.az_spread_gs_deg,
                rep.el_spread_gs_deg,
            ]
        )
    cdf = {
        "rms_ds_s": _cdf_entry([r.rms_ds_s for r in reports]),
        "az_spread_sat_deg": _cdf_entry([r.az_spread_sat_deg for r in reports]),
        "el_spread_sat_deg": _cdf_entry([r.el_spread_sat_deg for r in reports]),
        "az_spread_gs_deg": _cdf_entry([r.az_spread_gs_deg for r in reports]),
        "el_spread_gs_deg": _cdf_entry([r.el_spread_gs_deg for r in reports]),
    }
    return SPREADS_COLUMNS, rows, {"cdf": cdf}


def _report_cluster(config: ScenarioConfig, snapshots: list[Snapshot]):
    rows = []
    per_snapshot = []
    for snap in snapshots:
        result = clustering.cluster_snapshot(
            snap, xi=config.clustering.xi, zeta=config.clustering.zeta
        )
        for i, (ray, label) in enumerate(zip(snap.mpcs, result.labels)):
            rows.append([snap.psi.psi_deg, snap.altitude_km, i, ray.delay_s, label])
        per_snapshot.append(
            {
                "psi_deg": snap.psi.psi_deg,
                "n_mpcs": len(snap),
                "n_clusters": result.n_clusters,
            }
        )
    extra = {
        "xi": config.clustering.xi,
        "zeta": config.clustering.zeta,
        "per_snapshot": per_snapshot,
        "total_clusters": sum(p["n_clusters"] for p in per_snapshot),
    }
    return CLUSTER_COLUMNS, rows, extra


def _report_ntn(config: ScenarioConfig, snapshots: list[Snapshot]):
    profiles = ntn.load_tap_table(config.ntn.tap_file, config.ntn.sigma_db)
    gains_db = config.sat_antenna.peak_gain_dbi + config.gs_antenna.peak_gain_dbi
    rows = []
    for idx, snap in enumerate(snapshots):
        name = ntn.select_profile(snap.psi, config.ntn.psi1_deg, config.ntn.psi2_deg)
        if name not in profiles:
            raise ConfigError(f"tap table is missing profile {name}")
        profile = profiles[name]
        base = fspl_db(snap.distance_km, config.fc_ghz)
        mean = base - gains_db
        sigma = profile.shadow_sigma_db
        draw = ntn.ntn_attenuation_db(
            snap.psi,
            snap.distance_km,
            config.fc_ghz,
            profile,
            antenna_gains_db=gains_db,
            seed=_row_seed(config.seed, idx),
        )
        rows.append(
            [
                snap.psi.psi_deg,
                snap.altitude_km,
                name,
                base,
                mean,
                mean - sigma,
                mean + sigma,
                draw,
            ]
        )
    extra = {
        "psi1_deg": config.ntn.psi1_deg,
        "psi2_deg": config.ntn.psi2_deg,
        "sigma_db": {n: p.shadow_sigma_db for n, p in sorted(profiles.items())},
        "antenna_gains_db": gains_db,
    }
    return NTN_COLUMNS, rows, extra
