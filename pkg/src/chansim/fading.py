"""Small-scale fading regimes: shadowed Rician, Rician, deterministic LOS.

Three regimes cover a pass.  Below the threshold elevation ``psi2`` the
LOS path is shadowed by terrain and the amplitude follows the shadowed
Rician density implemented here verbatim; above it the fading is Rician
while non-LOS paths remain, and purely deterministic once only the LOS
path is left.

The shadowed density is the exact product form

    f(r) = 2 r (K+1)/Omega * exp(-(K+m)/(K+1))
           * I0(2 r sqrt(m K / (Omega (K+1))))
           * 1F1(m; 1; -(K+m)/(K+1) * r^2/Omega)

which is not normalised in general: its total mass exists and is
positive only for odd integer m when K > 0 and only for m = 1 when
K = 0, and the density itself is non-negative only for m <= 1.  The
``normalized`` mode divides by the numerically measured mass where that
is well defined and raises NumericError with diagnostics elsewhere
rather than returning misleading values.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize
from scipy import special as sp_special

from .errors import NumericError
from .geometry import ElevationAngle, altitude_to_elevation
from .mpc import Snapshot
from .special import hyp1f1_neg_array, log_i0

# Quality gates for the numerically measured mass of the shadowed density.
# The quadrature error estimate is conservative by orders of magnitude on
# oscillatory integrands; the cancellation ratio is the primary integrity
# check and the estimate only catches outright failures.
_MASS_REL_ERR_LIMIT = 5e-6
_MASS_CANCELLATION_LIMIT = 1e-6
_INTEGER_M_TOL = 1e-9

_MIN_FIT_SAMPLES = 100
_K_FIT_MAX = 1e7


class FadingRegime(enum.Enum):
    SHADOWED_RICIAN = "shadowed-rician"
    RICIAN = "rician"
    DETERMINISTIC_LOS = "deterministic-los"


@dataclass(frozen=True)
class RicianParams:
    """Rician amplitude distribution: K-factor and mean power, both linear."""

    k: float
    omega: float

    def __post_init__(self) -> None:
        if self.k < 0.0:
            raise ValueError("K-factor must be non-negative")
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")


@dataclass(frozen=True)
class ShadowedRicianParams:
    """Shadowed Rician parameters: K-factor, shadowing shape m, mean power."""

    k: float
    m: float
    omega: float

    def __post_init__(self) -> None:
        if self.k < 0.0:
            raise ValueError("K-factor must be non-negative")
        if self.m <= 0.0:
            raise ValueError("shape m must be positive")
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")


def default_psi2(arc_radius_km: float) -> ElevationAngle:
    """Default shadowing threshold: elevation of the 100 km altitude point."""
    if arc_radius_km <= 100.0:
        raise ValueError(
            "arc radius must exceed 100 km for the default threshold; set psi2 explicitly"
        )
    return altitude_to_elevation(100.0, arc_radius_km)


def select_regime(snapshot: Snapshot, psi2: ElevationAngle) -> FadingRegime:
    """Fading regime for a snapshot given the shadowing threshold psi2.

    Below psi2 the LOS is treated as shadowed regardless of how many
    paths are present; at or above psi2 the regime is Rician while
    non-LOS paths remain and deterministic once only one path is left.
    """
    if snapshot.psi.psi_deg < psi2.psi_deg:
        return FadingRegime.SHADOWED_RICIAN
    if len(snapshot) > 1:
        return FadingRegime.RICIAN
    return FadingRegime.DETERMINISTIC_LOS


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------


def rician_pdf(r: np.ndarray | float, p: RicianParams) -> np.ndarray | float:
    """Rician amplitude density, exact and normalised; reduces to Rayleigh at K=0."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0.0):
        raise ValueError("amplitude must be non-negative")
    kp1 = p.k + 1.0
    out = np.zeros_like(r_arr)
    pos = r_arr > 0.0
    rp = r_arr[pos]
    log_pdf = (
        np.log(2.0 * rp * kp1 / p.omega)
        - p.k
        - kp1 * rp * rp / p.omega
        + log_i0(2.0 * rp * np.sqrt(p.k * kp1 / p.omega))
    )
    out[pos] = np.exp(log_pdf)
    return out if np.ndim(r) else float(out)


def _verbatim_terms(r: np.ndarray, p: ShadowedRicianParams) -> np.ndarray:
    """Signed value of the shadowed density product form at r > 0."""
    beta = math.sqrt(p.m * p.k / (p.omega * (p.k + 1.0)))
    c = (p.k + p.m) / ((p.k + 1.0) * p.omega)
    f11 = hyp1f1_neg_array(p.m, c * r * r)
    log_env = (
        np.log(2.0 * r * (p.k + 1.0) / p.omega)
        - (p.k + p.m) / (p.k + 1.0)
        + log_i0(2.0 * beta * r)
    )
    out = np.zeros_like(r)
    nz = f11 != 0.0
    out[nz] = np.sign(f11[nz]) * np.exp(log_env[nz] + np.log(np.abs(f11[nz])))
    return out


_mass_cache: dict[tuple[float, float], float] = {}


def shadowed_rician_mass(p: ShadowedRicianParams) -> float:
    """Total mass of the verbatim shadowed density, measured by quadrature.

    The mass is independent of omega (pure scale parameter).  Raises
    NumericError when the product form is not normalisable: divergent
    for non-integer m with K > 0 and for m < 1 with K = 0, exactly zero
    for m > 1 with K = 0, negative for even integer m, or numerically
    indeterminate when cancellation dominates the integral.
    """
    key = (p.k, p.m)
    if key in _mass_cache:
        return _mass_cache[key]
    if p.k == 0.0:
        if abs(p.m - 1.0) <= _INTEGER_M_TOL:
            mass = math.exp(-1.0)
            _mass_cache[key] = mass
            return mass
        if p.m > 1.0:
            raise NumericError(
                f"shadowed density has exactly zero total mass for K=0, m={p.m}; "
                "normalisation is impossible"
            )
        raise NumericError(
            f"shadowed density is not integrable for K=0, m={p.m} < 1"
        )
    if abs(p.m - round(p.m)) > _INTEGER_M_TOL:
        raise NumericError(
            f"shadowed density has a divergent tail for non-integer m={p.m} with K>0; "
            "normalisation is impossible"
        )

    unit = ShadowedRicianParams(k=p.k, m=p.m, omega=1.0)
    scale = math.exp(-(p.k + p.m) / (p.k + 1.0))

    def signed(r: float) -> float:
        return float(_verbatim_terms(np.array([r]), unit)[0]) / scale if r > 0.0 else 0.0

    # The constant exponential factor is divided out during integration to
    # keep the quadrature relative-accurate for strongly shadowed settings.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        net, net_err = integrate.quad(signed, 0.0, np.inf, limit=400)
        gross, _ = integrate.quad(lambda r: abs(signed(r)), 0.0, np.inf, limit=400)
    if gross <= 0.0 or not math.isfinite(net):
        raise NumericError(f"shadowed mass quadrature failed for K={p.k}, m={p.m}")
    if abs(net) < _MASS_CANCELLATION_LIMIT * gross:
        raise NumericError(
            f"shadowed mass for K={p.k}, m={p.m} is cancellation-dominated "
            f"(net {net:.3e} vs gross {gross:.3e}); not resolvable in double precision"
        )
    if net_err > _MASS_REL_ERR_LIMIT * abs(net):
        raise NumericError(
            f"shadowed mass for K={p.k}, m={p.m} did not reach the required "
            f"quadrature accuracy (value {net:.6e}, error estimate {net_err:.1e})"
        )
    if net < 0.0:
        raise NumericError(
            f"shadowed density has negative total mass {net * scale:.3e} for "
            f"K={p.k}, m={p.m} (even m); normalisation is impossible"
        )
    mass = net * scale
    _mass_cache[key] = mass
    return mass


def shadowed_rician_pdf(
    r: np.ndarray | float,
    p: ShadowedRicianParams,
    normalized: bool = True,
) -> np.ndarray | float:
    """Shadowed Rician amplitude density, evaluated exactly as defined.

    With ``normalized=True`` (the default) the value is divided by the
    measured total mass so it integrates to one; the raw product form is
    returned otherwise.  Note the form is signed for m > 1: far-tail
    values may be negative.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0.0):
        raise ValueError("amplitude must be non-negative")
    out = np.zeros_like(r_arr)
    pos = r_arr > 0.0
    if np.any(pos):
        out[pos] = _verbatim_terms(r_arr[pos], p)
    if normalized:
        out = out / shadowed_rician_mass(p)
    return out if np.ndim(r) else float(out)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _rician_draws(p: RicianParams, n: int, rng: np.random.Generator) -> np.ndarray:
    nu = math.sqrt(p.k * p.omega / (p.k + 1.0))
    sigma = math.sqrt(p.omega / (2.0 * (p.k + 1.0)))
    x = nu + sigma * rng.standard_normal(n)
    y = sigma * rng.standard_normal(n)
    return np.hypot(x, y)


def _shadowed_grid(p: ShadowedRicianParams) -> np.ndarray:
    beta = math.sqrt(p.m * p.k / (p.omega * (p.k + 1.0)))
    c = (p.k + p.m) / ((p.k + 1.0) * p.omega)
    r_hi = (beta + math.sqrt(beta * beta + 60.0 * c)) / c
    return np.linspace(0.0, 1.5 * r_hi, 4097)


def _shadowed_draws(
    p: ShadowedRicianParams, n: int, rng: np.random.Generator
) -> np.ndarray:
    grid = _shadowed_grid(p)
    pdf = np.asarray(shadowed_rician_pdf(grid, p, normalized=True))
    if np.min(pdf) < -1e-9 * np.max(pdf):
        raise NumericError(
            f"shadowed density is sign-indefinite for K={p.k}, m={p.m}; "
            "sampling is only defined for m <= 1"
        )
    pdf = np.clip(pdf, 0.0, None)
    cdf = np.concatenate(
        ([0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid)))
    )
    if cdf[-1] <= 0.0:
        raise NumericError("shadowed density mass vanished on the sampling grid")
    cdf /= cdf[-1]
    return np.interp(rng.random(n), cdf, grid)


def sample(
    params: RicianParams | ShadowedRicianParams,
    n: int,
    seed: int,
) -> np.ndarray:
    """Draw n i.i.d. amplitudes from the given distribution, reproducibly.

    The seed fully determines the output, so parallel batches can each
    carry their own seed without shared state.
    """
    if n < 1:
        raise ValueError("sample size must be at least 1")
    rng = np.random.default_rng(seed)
    if isinstance(params, RicianParams):
        return _rician_draws(params, n, rng)
    if isinstance(params, ShadowedRicianParams):
        return _shadowed_draws(params, n, rng)
    raise TypeError(f"unsupported parameter type {type(params).__name__}")


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------


def _k_moment_estimate(r: np.ndarray) -> float:
    """Moment-based K estimate from the second/fourth amplitude moments."""
    m2 = float(np.mean(r**2))
    m4 = float(np.mean(r**4))
    y = m4 / (m2 * m2)
    if y >= 2.0:
        return 0.0
    if y <= 1.0:
        return _K_FIT_MAX
    return min(((2.0 - y) + math.sqrt(2.0 - y)) / (y - 1.0), _K_FIT_MAX)


def _rician_negll(k: float, r: np.ndarray, omega: float) -> float:
    kp1 = k + 1.0
    arg = 2.0 * r * math.sqrt(max(k, 0.0) * kp1 / omega)
    log_pdf = (
        np.log(2.0 * r * kp1 / omega) - k - kp1 * r * r / omega + log_i0(arg)
    )
    return -float(np.sum(log_pdf))


def _shadowed_m1_scale(k: float, mean_power: float) -> float:
    # The normalised m=1 member has mean power omega*(2K+1)/(K+1), so the
    # scale is tied to the sample mean power per candidate K.
    return mean_power * (k + 1.0) / (2.0 * k + 1.0)


def _shadowed_m1_negll(k: float, r: np.ndarray, mean_power: float) -> float:
    # m = 1 is the single member of the family that is a proper density
    # for every K; 1F1(1;1;-z) collapses to exp(-z).
    omega = _shadowed_m1_scale(k, mean_power)
    p = ShadowedRicianParams(k=k, m=1.0, omega=omega)
    beta = math.sqrt(k / (omega * (k + 1.0)))
    log_pdf = (
        np.log(2.0 * r * (k + 1.0) / omega)
        - 1.0
        + log_i0(2.0 * beta * r)
        - r * r / omega
        - math.log(shadowed_rician_mass(p))
    )
    return -float(np.sum(log_pdf))


def _refine_k(negll, r: np.ndarray, omega: float) -> float:
    # Moment estimate localises the bounded likelihood search; ties near a
    # flat likelihood resolve toward the smaller K end of the bracket.
    k_init = _k_moment_estimate(r)
    upper = min(_K_FIT_MAX, 100.0 * k_init + 10.0)
    res = optimize.minimize_scalar(
        lambda u: negll(float(np.expm1(u)), r, omega),
        bounds=(0.0, math.log1p(upper)),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(np.expm1(res.x))


def fit(
    samples: np.ndarray,
    regime: FadingRegime,
) -> RicianParams | ShadowedRicianParams:
    """Estimate distribution parameters from amplitude samples.

    Moment-based initialisation followed by bounded likelihood
    refinement of the K-factor.  For the Rician regime omega is the
    empirical mean power, which the distribution's mean power equals.
    For the shadowed regime the shape is pinned to m = 1 (the only
    member of the implemented family whose normalised form is a valid
    density for every K) and omega is the family scale that matches the
    empirical mean power at the fitted K.
    """
    r = np.asarray(samples, dtype=float)
    if r.size < _MIN_FIT_SAMPLES:
        raise ValueError(f"need at least {_MIN_FIT_SAMPLES} samples, got {r.size}")
    if np.any(r < 0.0):
        raise ValueError("amplitudes must be non-negative")
    if np.ptp(r) == 0.0:
        raise ValueError("degenerate samples: zero variance")
    if regime is FadingRegime.DETERMINISTIC_LOS:
        raise ValueError("deterministic single-path regime has no distribution to fit")

    mean_power = float(np.mean(r**2))
    if regime is FadingRegime.RICIAN:
        k = _refine_k(_rician_negll, r, mean_power)
        return RicianParams(k=k, omega=mean_power)
    if regime is FadingRegime.SHADOWED_RICIAN:
        k = _refine_k(_shadowed_m1_negll, r, mean_power)
        return ShadowedRicianParams(
            k=k, m=1.0, omega=_shadowed_m1_scale(k, mean_power)
        )
    raise ValueError(f"unsupported regime {regime}")
