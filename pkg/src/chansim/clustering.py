"""DBSCAN clustering of multipath components in delay/angle feature space.

Each path contributes the feature vector [delay, departure azimuth,
departure elevation, arrival azimuth, arrival elevation]; azimuths are
mapped to the unit circle (sin, cos) to respect their periodicity, so
the working matrix has 7 columns, each z-score normalised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mpc import Snapshot

NOISE = -1

FEATURE_COLUMNS = (
    "delay_s",
    "aod_az_sin",
    "aod_az_cos",
    "aod_el_deg",
    "aoa_az_sin",
    "aoa_az_cos",
    "aoa_el_deg",
)

# A column whose variation is below this (relative to max(1, scale)) carries
# no clustering information and is zeroed instead of divided by ~0.
_CONSTANT_COLUMN_TOL = 1e-12

DEFAULT_XI = 0.3
DEFAULT_ZETA = 2


@dataclass(frozen=True)
class ClusterResult:
    labels: tuple[int, ...]
    n_clusters: int
    xi: float
    zeta: int


def build_features(snapshot: Snapshot) -> np.ndarray:
    """Normalised feature matrix (N x 7) for a snapshot's MPCs.

    Azimuths are expanded to (sin, cos) pairs before normalisation; every
    column is then scaled to zero mean and unit (population) variance,
    except constant columns which are set to all zeros.
    """
    aod_az = np.radians([m.aod_az_deg for m in snapshot.mpcs])
    aoa_az = np.radians([m.aoa_az_deg for m in snapshot.mpcs])
    raw = np.column_stack(
        [
            [m.delay_s for m in snapshot.mpcs],
            np.sin(aod_az),
            np.cos(aod_az),
            [m.aod_el_deg for m in snapshot.mpcs],
            np.sin(aoa_az),
            np.cos(aoa_az),
            [m.aoa_el_deg for m in snapshot.mpcs],
        ]
    )
    out = np.zeros_like(raw)
    for j in range(raw.shape[1]):
        col = raw[:, j]
        std = float(np.std(col))
        scale = max(1.0, float(np.max(np.abs(col))) if col.size else 1.0)
        if std <= _CONSTANT_COLUMN_TOL * scale:
            continue
        out[:, j] = (col - np.mean(col)) / std
    return out


def dbscan(features: np.ndarray, xi: float = DEFAULT_XI, zeta: int = DEFAULT_ZETA) -> ClusterResult:
    """Density-based clustering with Euclidean distance.

    A point is a core point when its closed xi-neighbourhood (which
    includes the point itself) holds at least zeta points.  Clusters grow
    from core points through density reachability; everything else is
    noise.  Scan order is input order and border points join the first
    cluster that reaches them, so the labelling is deterministic.
    """
    if xi <= 0.0:
        raise ValueError("neighbourhood radius must be positive")
    if zeta < 1:
        raise ValueError("minimum points must be at least 1")
    pts = np.asarray(features, dtype=float)
    n = pts.shape[0]
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    neighborhoods = [np.flatnonzero(dist[i] <= xi) for i in range(n)]

    labels = np.full(n, NOISE, dtype=int)
    visited = np.zeros(n, dtype=bool)
    cluster = 0
    for i in range(n):
        if visited[i]:
            continue
        visited[i] = True
        if neighborhoods[i].size < zeta:
            continue
        labels[i] = cluster
        queue = list(neighborhoods[i])
        head = 0
        while head < len(queue):
            j = queue[head]
            head += 1
            if labels[j] == NOISE:
                labels[j] = cluster
            if visited[j]:
                continue
            visited[j] = True
            labels[j] = cluster
            if neighborhoods[j].size >= zeta:
                queue.extend(neighborhoods[j])
        cluster += 1
    return ClusterResult(labels=tuple(int(x) for x in labels), n_clusters=cluster, xi=xi, zeta=zeta)


def cluster_snapshot(snapshot: Snapshot, xi: float = DEFAULT_XI, zeta: int = DEFAULT_ZETA) -> ClusterResult:
    """Build features for a snapshot and cluster them."""
    return dbscan(build_features(snapshot), xi=xi, zeta=zeta)
