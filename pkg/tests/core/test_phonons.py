"""Tests for the two-phonon temperature models."""

import math

import numpy as np
import pytest

from hbn_relax.core.phonons import (
    RateKind,
    bose_occupation,
    crossover_temperature,
    fit_temperature_series,
    mode_contributions,
    occupation_factor,
    pdos_peaks,
    predict_t1_curve,
    rate_model,
    synth_temperature_series,
)
from hbn_relax.models.phonon import CouplingSet, PhononMode, TemperatureSeries
from hbn_relax.services.exceptions import PeakExtractionError, TemperatureFitError, ThermoError

TEMPERATURES = np.arange(290.0, 421.0, 10.0)


class TestBoseOccupation:
    """Test bose_occupation and occupation_factor."""

    def test_low_energy_mode_at_room_temperature(self):
        assert bose_occupation(23.48, 293.0) == pytest.approx(0.651733, rel=1e-5)
        assert occupation_factor(23.48, 293.0) == pytest.approx(1.07649, rel=1e-5)

    def test_high_energy_mode_is_nearly_frozen(self):
        assert bose_occupation(165.75, 293.0) == pytest.approx(1.41e-3, rel=1e-2)

    def test_frozen_mode_does_not_overflow(self):
        with np.errstate(all="raise"):
            assert bose_occupation(1000.0, 1.0) == 0.0

    def test_classical_limit(self):
        """k_BT ≫ E gives n ≈ k_BT/E − 1/2."""
        t = 10_000.0
        expected = 0.08617333 * t / 1.0 - 0.5
        assert bose_occupation(1.0, t) == pytest.approx(expected, rel=1e-6)

    def test_array_input(self):
        values = bose_occupation(np.array([23.48, 77.39]), 300.0)
        assert isinstance(values, np.ndarray)
        assert values.shape == (2,)
        assert values[0] > values[1]

    def test_scalar_output_type(self):
        assert isinstance(bose_occupation(23.48, 300.0), float)

    @pytest.mark.parametrize("energy,temperature", [(23.48, 0.0), (23.48, -5.0), (0.0, 300.0), (-1.0, 300.0)])
    def test_rejects_non_physical_inputs(self, energy, temperature):
        with pytest.raises(ThermoError):
            bose_occupation(energy, temperature)

    def test_monotone_in_temperature(self):
        values = bose_occupation(77.39, np.linspace(50.0, 600.0, 50))
        assert np.all(np.diff(values) > 0.0)

    def test_sinh_identity_on_grid(self):
        """n(n+1) equals 1/(4 sinh²(E/2k_BT)) over a 100 × 100 grid of energies and temperatures."""
        energy, temperature = np.meshgrid(np.linspace(1.0, 200.0, 100), np.linspace(100.0, 500.0, 100))
        x = energy / (0.08617333 * temperature)
        expected = 1.0 / (4.0 * np.sinh(x / 2.0) ** 2)
        factors = occupation_factor(energy, temperature)
        assert factors.shape == (100, 100)
        assert np.max(np.abs(factors / expected - 1.0)) < 1e-12

    @pytest.mark.parametrize("scale", [0.01, 0.37, 2.5, 1000.0])
    def test_scale_invariance(self, scale):
        """Only E/k_BT matters: scaling energy and temperature together leaves n unchanged."""
        energy, temperature = np.meshgrid(np.linspace(1.0, 200.0, 40), np.linspace(100.0, 500.0, 40))
        original = bose_occupation(energy, temperature)
        scaled = bose_occupation(energy / scale, temperature / scale)
        assert np.max(np.abs(scaled / original - 1.0)) < 1e-12


class TestRateModel:
    """Test rate_model and mode_contributions."""

    def test_offset_only(self, reference_modes):
        coupling = CouplingSet(modes=reference_modes, a_coeffs=[0.0] * 3, a_offset=7.0, b_coeffs=[0.0] * 3, b_offset=2.0)
        assert rate_model(RateKind.OMEGA, coupling, 350.0) == pytest.approx(7.0)
        assert rate_model(RateKind.GAMMA, coupling, 350.0) == pytest.approx(2.0)

    def test_no_modes(self):
        coupling = CouplingSet(modes=[], a_coeffs=[], a_offset=3.0, b_coeffs=[], b_offset=1.0)
        assert rate_model(RateKind.OMEGA, coupling, 300.0) == 3.0
        assert rate_model(RateKind.GAMMA, coupling, [300.0, 310.0]).tolist() == [1.0, 1.0]

    def test_contributions_add_up(self, ratio_five_coupling):
        parts = mode_contributions(RateKind.GAMMA, ratio_five_coupling, 293.0)
        total = rate_model(RateKind.GAMMA, ratio_five_coupling, 293.0)
        assert len(parts) == 3
        assert sum(parts) + ratio_five_coupling.b_offset == pytest.approx(total)

    def test_single_mode_value(self):
        coupling = CouplingSet(modes=[PhononMode(energy=23.48)], a_coeffs=[10.0], b_coeffs=[0.0])
        assert rate_model(RateKind.OMEGA, coupling, 293.0) == pytest.approx(10.7649, rel=1e-5)

    def test_rates_increase_with_temperature(self, ratio_five_coupling):
        rates = rate_model(RateKind.OMEGA, ratio_five_coupling, TEMPERATURES)
        assert np.all(np.diff(rates) > 0.0)

    def test_rejects_zero_temperature(self, ratio_five_coupling):
        with pytest.raises(ThermoError):
            rate_model(RateKind.OMEGA, ratio_five_coupling, 0.0)

    @pytest.mark.parametrize("kind", list(RateKind))
    def test_superposition(self, kind, reference_modes):
        """Rates of summed coefficient sets equal the sum of the separate rates."""
        rng = np.random.default_rng(11)
        for _ in range(20):
            first, second = (
                CouplingSet(
                    modes=reference_modes,
                    a_coeffs=rng.uniform(0.0, 1000.0, 3).tolist(),
                    a_offset=float(rng.uniform(0.0, 50.0)),
                    b_coeffs=rng.uniform(0.0, 1000.0, 3).tolist(),
                    b_offset=float(rng.uniform(0.0, 50.0)),
                )
                for _ in range(2)
            )
            combined = CouplingSet(
                modes=reference_modes,
                a_coeffs=[a + b for a, b in zip(first.a_coeffs, second.a_coeffs)],
                a_offset=first.a_offset + second.a_offset,
                b_coeffs=[a + b for a, b in zip(first.b_coeffs, second.b_coeffs)],
                b_offset=first.b_offset + second.b_offset,
            )
            total = rate_model(kind, first, TEMPERATURES) + rate_model(kind, second, TEMPERATURES)
            assert rate_model(kind, combined, TEMPERATURES) == pytest.approx(total, rel=1e-12)


class TestFitTemperatureSeries:
    """Test fit_temperature_series."""

    def test_noise_free_series_is_reproduced(self, ratio_five_coupling, reference_modes):
        series = synth_temperature_series(ratio_five_coupling, TEMPERATURES)
        coupling, (omega_fit, gamma_fit) = fit_temperature_series(series, reference_modes)
        assert omega_fit.param_names == ("c1", "c2", "c3", "offset")
        assert gamma_fit.model_name == "gamma_temperature"
        fitted = rate_model(RateKind.OMEGA, coupling, TEMPERATURES)
        assert fitted == pytest.approx(series.column("omega"), rel=1e-5)
        fitted = rate_model(RateKind.GAMMA, coupling, TEMPERATURES)
        assert fitted == pytest.approx(series.column("gamma"), rel=1e-5)

    def test_coefficients_are_nonnegative(self, reference_modes):
        """Rates falling with temperature drive coefficients onto zero."""
        temperatures = TEMPERATURES
        omega = 50.0 - 0.05 * (temperatures - 290.0)
        series = TemperatureSeries.model_validate(
            {
                "points": [
                    {"temperature": t, "omega": o, "sigma_omega": 1.0, "gamma": o, "sigma_gamma": 1.0}
                    for t, o in zip(temperatures, omega)
                ]
            }
        )
        coupling, _ = fit_temperature_series(series, reference_modes)
        assert all(c >= 0.0 for c in coupling.a_coeffs + coupling.b_coeffs)
        assert coupling.a_offset >= 0.0

    def test_noisy_series_recovers_ratio(self, ratio_five_coupling, reference_modes):
        series = synth_temperature_series(ratio_five_coupling, np.arange(290.0, 421.0, 5.0), rel_noise=0.01, seed=8)
        coupling, _ = fit_temperature_series(series, reference_modes)
        omega = rate_model(RateKind.OMEGA, coupling, 400.0)
        gamma = rate_model(RateKind.GAMMA, coupling, 400.0)
        assert gamma / omega == pytest.approx(5.0, rel=0.05)

    def test_too_few_points(self, ratio_five_coupling, reference_modes):
        series = synth_temperature_series(ratio_five_coupling, [290.0, 300.0, 310.0, 320.0])
        with pytest.raises(TemperatureFitError, match="at least 5"):
            fit_temperature_series(series, reference_modes)

    def test_under_determined(self, ratio_five_coupling):
        modes = [PhononMode(energy=e) for e in (20.0, 40.0, 80.0, 160.0)]
        series = synth_temperature_series(ratio_five_coupling, [290.0, 300.0, 310.0, 320.0, 330.0])
        with pytest.raises(TemperatureFitError, match="under-determined"):
            fit_temperature_series(series, modes)

    @pytest.mark.slow
    def test_ratio_recovery_over_seeds(self, ratio_five_coupling, reference_modes):
        """11 points in 293-393 K with 5 % noise recover γ/Ω at 400 K within 20 % for at least 90 % of 500 seeds."""
        temperatures = np.linspace(293.0, 393.0, 11)
        roots = np.random.SeedSequence(400).spawn(500)
        hits = 0
        for root in roots:
            series = synth_temperature_series(ratio_five_coupling, temperatures, rel_noise=0.05, seed=root)
            coupling, _ = fit_temperature_series(series, reference_modes)
            ratio = rate_model(RateKind.GAMMA, coupling, 400.0) / rate_model(RateKind.OMEGA, coupling, 400.0)
            hits += abs(ratio / 5.0 - 1.0) <= 0.2
        assert hits / len(roots) >= 0.9


class TestPredictT1Curve:
    """Test predict_t1_curve."""

    def test_values(self, ratio_five_coupling):
        predictions = predict_t1_curve(ratio_five_coupling, [300.0, 400.0])
        assert [p.temperature for p in predictions] == [300.0, 400.0]
        for p in predictions:
            assert p.t1_us == pytest.approx(1000.0 / (3.0 * p.omega + p.gamma))
        assert predictions[1].gamma == pytest.approx(5.0 * predictions[1].omega)

    def test_empty_grid(self, ratio_five_coupling):
        assert predict_t1_curve(ratio_five_coupling, []) == []

    def test_zero_coupling_has_infinite_t1(self, reference_modes):
        coupling = CouplingSet(modes=reference_modes, a_coeffs=[0.0] * 3, b_coeffs=[0.0] * 3)
        predictions = predict_t1_curve(coupling, [300.0])
        assert predictions[0].t1_us is None

    def test_t1_shortens_with_temperature(self, ratio_five_coupling):
        predictions = predict_t1_curve(ratio_five_coupling, TEMPERATURES)
        t1 = [p.t1_us for p in predictions]
        assert all(later < earlier for earlier, later in zip(t1, t1[1:]))


class TestCrossoverTemperature:
    """Test crossover_temperature."""

    def test_ratio_five_at_400_kelvin(self, ratio_five_coupling):
        assert crossover_temperature(ratio_five_coupling, 5.0, 290.0, 420.0) == pytest.approx(400.0, abs=1e-6)

    def test_no_crossing(self, ratio_five_coupling):
        with pytest.raises(ThermoError):
            crossover_temperature(ratio_five_coupling, 100.0, 290.0, 420.0)


class TestSynthTemperatureSeries:
    """Test synth_temperature_series."""

    def test_noise_free_sigmas(self, ratio_five_coupling):
        series = synth_temperature_series(ratio_five_coupling, [300.0, 310.0, 320.0])
        omega = rate_model(RateKind.OMEGA, ratio_five_coupling, 300.0)
        assert series.points[0].omega == pytest.approx(omega)
        assert series.points[0].sigma_omega == pytest.approx(1e-6 * omega)

    def test_seeded(self, ratio_five_coupling):
        first = synth_temperature_series(ratio_five_coupling, TEMPERATURES, rel_noise=0.02, seed=5, spot_label="A")
        second = synth_temperature_series(ratio_five_coupling, TEMPERATURES, rel_noise=0.02, seed=5, spot_label="A")
        assert first == second
        assert first.spot_label == "A"


class TestPdosPeaks:
    """Test pdos_peaks."""

    def test_three_gaussian_peaks(self, pdos_spectrum):
        modes = pdos_peaks(*pdos_spectrum)
        energies = [m.energy for m in modes]
        assert energies == pytest.approx([23.48, 77.39, 165.75], abs=0.5)
        assert energies == sorted(energies)

    def test_most_prominent_are_kept(self):
        energies = np.arange(0.0, 200.0, 0.5)
        density = np.zeros_like(energies)
        for center, height in ((20.0, 1.0), (60.0, 0.1), (100.0, 0.8), (150.0, 0.9)):
            density += height * np.exp(-0.5 * ((energies - center) / 3.0) ** 2)
        modes = pdos_peaks(energies, density, count=3)
        assert [m.energy for m in modes] == pytest.approx([20.0, 100.0, 150.0])

    def test_too_many_peaks_requested(self, pdos_spectrum):
        with pytest.raises(PeakExtractionError, match="found 3"):
            pdos_peaks(*pdos_spectrum, count=4)

    def test_short_spectrum(self):
        with pytest.raises(PeakExtractionError):
            pdos_peaks(np.arange(10.0), np.ones(10))

    def test_unordered_energies(self, pdos_spectrum):
        energies, density = pdos_spectrum
        with pytest.raises(PeakExtractionError):
            pdos_peaks(energies[::-1], density[::-1])

    def test_single_mode_request(self, pdos_spectrum):
        modes = pdos_peaks(*pdos_spectrum, count=1)
        assert len(modes) == 1
        assert math.isfinite(modes[0].energy)

    def test_monotone_spectrum_has_no_peaks(self):
        energies = np.arange(0.0, 200.0, 0.5)
        with pytest.raises(PeakExtractionError, match="found 0"):
            pdos_peaks(energies, 1.0 + energies / 200.0, count=1)

    def test_merged_peaks_are_not_split(self):
        """Two peaks closer than their width merge into one; no third maximum is invented."""
        energies = np.arange(0.0, 200.0, 0.5)
        density = np.zeros_like(energies)
        for center in (50.0, 100.0, 102.0):
            density += np.exp(-0.5 * ((energies - center) / 3.0) ** 2)
        with pytest.raises(PeakExtractionError, match="found 2"):
            pdos_peaks(energies, density, count=3)

        modes = pdos_peaks(energies, density, count=2)
        assert [m.energy for m in modes] == pytest.approx([50.0, 101.0], abs=0.5)
        interior = (density[1:-1] > density[:-2]) & (density[1:-1] > density[2:])
        assert int(np.sum(interior)) == 2
