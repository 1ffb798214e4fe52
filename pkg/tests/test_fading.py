import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from chansim.errors import NumericError
from chansim.fading import (
    FadingRegime,
    RicianParams,
    ShadowedRicianParams,
    default_psi2,
    fit,
    rician_pdf,
    sample,
    select_regime,
    shadowed_rician_mass,
    shadowed_rician_pdf,
)
from chansim.geometry import ElevationAngle

from conftest import make_snapshot

mp.mp.dps = 30


def mp_verbatim_pdf(r, k, m, om):
    """Independent mpmath evaluation of the shadowed product form."""
    r, k, m, om = map(mp.mpf, (r, k, m, om))
    return (
        2 * r * (k + 1) / om
        * mp.e ** (-(k + m) / (k + 1))
        * mp.besseli(0, 2 * r * mp.sqrt(m * k / (om * (k + 1))))
        * mp.hyp1f1(m, 1, -(k + m) / (k + 1) * r * r / om)
    )


class TestRicianPdf:
    def test_rayleigh_point(self):
        # K=0, Omega=1 at r=1: 2 exp(-1), hand-evaluated
        assert rician_pdf(1.0, RicianParams(0.0, 1.0)) == pytest.approx(
            2.0 * math.exp(-1.0), rel=1e-12
        )

    def test_zero_at_origin(self):
        assert rician_pdf(0.0, RicianParams(5.0, 2.0)) == 0.0

    def test_mass_k5_omega2(self):
        p = RicianParams(5.0, 2.0)
        mass, err = integrate.quad(lambda r: rician_pdf(r, p), 0.0, np.inf)
        assert mass == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("k", [0.0, 1.0, 10.0, 100.0])
    @pytest.mark.parametrize("omega", [0.5, 1.0, 4.0])
    def test_mass_grid(self, k, omega):
        p = RicianParams(k, omega)
        mass, _ = integrate.quad(lambda r: rician_pdf(r, p), 0.0, np.inf, limit=200)
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_k0_equals_rayleigh_pointwise(self):
        p = RicianParams(0.0, 2.0)
        r = np.linspace(0.0, 5.0, 301)
        rayleigh = 2.0 * r / p.omega * np.exp(-(r**2) / p.omega)
        np.testing.assert_allclose(np.asarray(rician_pdf(r, p)), rayleigh, atol=1e-12)

    def test_negative_amplitude_rejected(self):
        with pytest.raises(ValueError):
            rician_pdf(-0.5, RicianParams(1.0, 1.0))


class TestShadowedRicianPdf:
    def test_zero_at_origin(self):
        assert shadowed_rician_pdf(0.0, ShadowedRicianParams(2.0, 3.0, 1.0)) == 0.0

    def test_verbatim_matches_mpmath_pointwise(self):
        cases = [(2.0, 3.0, 1.0), (1.0, 1.0, 2.0), (10.0, 5.0, 0.5)]
        for k, m, om in cases:
            p = ShadowedRicianParams(k, m, om)
            for r in (0.1, 0.5, 1.0, 2.0, 3.0):
                expected = float(mp_verbatim_pdf(r, k, m, om))
                got = shadowed_rician_pdf(r, p, normalized=False)
                assert got == pytest.approx(expected, rel=1e-9), (k, m, om, r)

    def test_mass_example_k2_m3(self):
        # Verbatim mass measured by independent mpmath quadrature:
        p = ShadowedRicianParams(2.0, 3.0, 1.0)
        expected = float(
            mp.quad(lambda r: mp_verbatim_pdf(r, 2, 3, 1), [0, 1, 5, mp.inf])
        )
        assert shadowed_rician_mass(p) == pytest.approx(expected, rel=1e-7)
        assert shadowed_rician_mass(p) == pytest.approx(0.8127074545138807, rel=1e-7)

    def test_normalized_mass_is_one(self):
        p = ShadowedRicianParams(2.0, 3.0, 1.0)
        mass, _ = integrate.quad(
            lambda r: shadowed_rician_pdf(r, p), 0.0, np.inf, limit=300
        )
        assert mass == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("k", [1.0, 10.0, 100.0])
    def test_m1_mass_analytic(self, k):
        # For m=1 the verbatim mass reduces to (K+1) exp(K/(K+1) - 1) in
        # closed form (Gaussian-Bessel integral), an independent oracle.
        p = ShadowedRicianParams(k, 1.0, 1.0)
        expected = (k + 1.0) * math.exp(k / (k + 1.0) - 1.0)
        assert shadowed_rician_mass(p) == pytest.approx(expected, rel=1e-9)

    def test_mass_omega_invariant(self):
        a = shadowed_rician_mass(ShadowedRicianParams(2.0, 3.0, 0.5))
        b = shadowed_rician_mass(ShadowedRicianParams(2.0, 3.0, 4.0))
        assert a == pytest.approx(b, rel=1e-9)

    def test_noninteger_m_with_positive_k_raises(self):
        with pytest.raises(NumericError, match="divergent"):
            shadowed_rician_mass(ShadowedRicianParams(1.0, 0.5, 1.0))

    def test_k0_m_above_one_has_zero_mass(self):
        with pytest.raises(NumericError, match="zero total mass"):
            shadowed_rician_mass(ShadowedRicianParams(0.0, 5.0, 1.0))

    def test_k0_m_below_one_not_integrable(self):
        with pytest.raises(NumericError, match="not integrable"):
            shadowed_rician_mass(ShadowedRicianParams(0.0, 0.5, 1.0))

    def test_even_m_negative_mass(self):
        with pytest.raises(NumericError, match="negative total mass"):
            shadowed_rician_mass(ShadowedRicianParams(1.0, 2.0, 1.0))

    def test_k0_m1_normalizable(self):
        p = ShadowedRicianParams(0.0, 1.0, 1.0)
        assert shadowed_rician_mass(p) == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_huge_m_cancellation_detected(self):
        # The large-shape limit of this product form is dominated by
        # oscillation; its mass is not resolvable in double precision and
        # normalisation must refuse rather than fabricate a density.
        with pytest.raises(NumericError, match="cancellation"):
            shadowed_rician_mass(ShadowedRicianParams(5.0, 500.0, 1.0))

    def test_verbatim_mode_needs_no_mass(self):
        # Raw evaluation works even where normalisation is impossible.
        p = ShadowedRicianParams(1.0, 2.0, 1.0)
        value = shadowed_rician_pdf(0.7, p, normalized=False)
        assert value == pytest.approx(float(mp_verbatim_pdf(0.7, 1, 2, 1)), rel=1e-9)


class TestSampling:
    def test_deterministic_under_seed(self):
        p = RicianParams(3.0, 1.0)
        a = sample(p, 5, seed=42)
        b = sample(p, 5, seed=42)
        np.testing.assert_array_equal(a, b)
        assert sample(p, 1, seed=1)[0] != sample(p, 1, seed=2)[0]

    def test_rician_mean_power(self):
        draws = sample(RicianParams(0.0, 1.0), 100_000, seed=7)
        assert float(np.mean(draws**2)) == pytest.approx(1.0, abs=0.02)

    def test_high_k_concentration(self):
        draws = sample(RicianParams(100.0, 1.0), 1000, seed=7)
        cov = float(np.std(draws) / np.mean(draws))
        assert cov < 0.12

    def test_shadowed_m1_mean_power(self):
        # Mean power of the normalised m=1 member is omega (2K+1)/(K+1),
        # derived from the same Gaussian-Bessel integral as the mass.
        k, om = 5.0, 2.0
        draws = sample(ShadowedRicianParams(k, 1.0, om), 200_000, seed=9)
        expected = om * (2.0 * k + 1.0) / (k + 1.0)
        assert float(np.mean(draws**2)) == pytest.approx(expected, rel=0.02)

    def test_shadowed_sign_indefinite_family_rejected(self):
        with pytest.raises(NumericError):
            sample(ShadowedRicianParams(1.0, 3.0, 1.0), 100, seed=0)

    def test_bad_size(self):
        with pytest.raises(ValueError):
            sample(RicianParams(1.0, 1.0), 0, seed=0)


class TestFit:
    def test_rician_recovery(self):
        draws = sample(RicianParams(10.0, 2.0), 100_000, seed=7)
        est = fit(draws, FadingRegime.RICIAN)
        assert isinstance(est, RicianParams)
        assert est.k == pytest.approx(10.0, rel=0.10)
        assert est.omega == pytest.approx(float(np.mean(draws**2)), rel=1e-12)

    def test_rayleigh_limit(self):
        draws = sample(RicianParams(0.0, 1.0), 100_000, seed=21)
        est = fit(draws, FadingRegime.RICIAN)
        assert est.k < 0.1

    def test_omega_tracks_mean_power(self):
        draws = sample(RicianParams(5.0, 3.0), 50_000, seed=5)
        est = fit(draws, FadingRegime.RICIAN)
        assert abs(est.omega - float(np.mean(draws**2))) / est.omega < 0.05

    def test_shadowed_round_trip(self):
        true = ShadowedRicianParams(0.3, 1.0, 1.0)
        draws = sample(true, 100_000, seed=11)
        est = fit(draws, FadingRegime.SHADOWED_RICIAN)
        assert isinstance(est, ShadowedRicianParams)
        assert est.m == 1.0
        assert est.k == pytest.approx(true.k, rel=0.2)
        assert est.omega == pytest.approx(true.omega, rel=0.05)

    def test_constant_samples_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            fit(np.ones(500), FadingRegime.RICIAN)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            fit(np.linspace(0.1, 1.0, 99), FadingRegime.RICIAN)

    def test_deterministic_regime_has_no_fit(self):
        with pytest.raises(ValueError):
            fit(np.linspace(0.1, 1.0, 500), FadingRegime.DETERMINISTIC_LOS)


class TestSelectRegime:
    def test_shadowed_below_threshold(self):
        snap = make_snapshot(
            [(1.0, 0.0, 0.0, True), (0.1, 0.0, 1e-9), (0.1, 0.0, 2e-9)], psi_deg=5.0
        )
        psi2 = ElevationAngle(14.477512185929925)
        assert select_regime(snap, psi2) is FadingRegime.SHADOWED_RICIAN

    def test_rician_above_threshold_with_nlos(self):
        snap = make_snapshot([(1.0, 0.0, 0.0, True), (0.1, 0.0, 1e-9)], psi_deg=30.0)
        assert select_regime(snap, ElevationAngle(14.48)) is FadingRegime.RICIAN

    def test_deterministic_single_path(self):
        snap = make_snapshot([(1.0, 0.0, 0.0, True)], psi_deg=45.0)
        assert select_regime(snap, ElevationAngle(14.48)) is FadingRegime.DETERMINISTIC_LOS

    def test_default_threshold(self):
        assert default_psi2(400.0).psi_deg == pytest.approx(14.477512185929925)
        with pytest.raises(ValueError):
            default_psi2(80.0)
