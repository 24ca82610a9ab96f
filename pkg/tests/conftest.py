import numpy as np
import pytest
from click.testing import CliRunner

from hbn_relax.core.constants import REFERENCE_GAMMA_KHZ, REFERENCE_OMEGA_KHZ, REFERENCE_PHONON_ENERGIES_MEV
from hbn_relax.core.odmr import synth_odmr_spectrum
from hbn_relax.core.phonons import RateKind, rate_model
from hbn_relax.models.kinetics import RatePair
from hbn_relax.models.phonon import CouplingSet, PhononMode
from hbn_relax.models.sequence import CurveKind, DecayDataset, ReadoutModel
from hbn_relax.services.table_service import decay_frame, spectrum_frame, write_table

ODMR_TRUTH = (1.0, 0.02, 3401.82, 20.0, 0.02, 3549.27, 20.0)


@pytest.fixture
def cli_runner():
    """Provides a Click CLI runner for testing commands."""
    return CliRunner()


@pytest.fixture
def isolated_cli_runner(cli_runner):
    """Provides a CLI runner with isolated filesystem."""
    with cli_runner.isolated_filesystem():
        yield cli_runner


@pytest.fixture
def reference_rates():
    """Room-temperature rates Ω = 33.26 kHz, γ = 81.60 kHz."""
    return RatePair(omega=REFERENCE_OMEGA_KHZ, gamma=REFERENCE_GAMMA_KHZ)


@pytest.fixture
def perfect_readout():
    """Counts equal the |0⟩ population."""
    return ReadoutModel.perfect()


@pytest.fixture
def tau_grid():
    """20 delays spanning about three F1 decay constants, in µs."""
    return np.linspace(0.0, 30.0, 20)


def exact_decay(curve_kind, rates, taus, sigma=0.01):
    """Noise-free normalized decay curve for a rate pair."""
    rate = 3.0 * rates.omega if curve_kind == CurveKind.F1 else rates.omega + 2.0 * rates.gamma
    signals = np.exp(-rate * np.asarray(taus) * 1e-3)
    return DecayDataset.from_arrays(curve_kind, taus, signals, np.full(len(taus), sigma))


@pytest.fixture
def decay_factory():
    """The exact_decay helper, for tests that need custom grids."""
    return exact_decay


@pytest.fixture
def exact_f1(reference_rates, tau_grid):
    return exact_decay(CurveKind.F1, reference_rates, tau_grid)


@pytest.fixture
def exact_f2(reference_rates, tau_grid):
    return exact_decay(CurveKind.F2, reference_rates, tau_grid)


@pytest.fixture
def reference_modes():
    """Effective phonon modes at 23.48, 77.39 and 165.75 meV."""
    return [PhononMode(energy=e) for e in REFERENCE_PHONON_ENERGIES_MEV]


def coupling_at_ratio(modes, ratio=5.0, temperature=400.0):
    """Coupling set whose γ/Ω equals ratio at the given temperature."""
    base = CouplingSet(modes=modes, a_coeffs=[10.0, 200.0, 5000.0], a_offset=5.0, b_coeffs=[30.0, 900.0, 30000.0])
    omega = rate_model(RateKind.OMEGA, base, temperature)
    gamma_modes = rate_model(RateKind.GAMMA, base, temperature)
    return base.model_copy(update={"b_offset": ratio * omega - gamma_modes})


@pytest.fixture
def ratio_five_coupling(reference_modes):
    """Coupling set with γ(400 K) = 5·Ω(400 K)."""
    return coupling_at_ratio(reference_modes)


@pytest.fixture
def coupling_factory():
    return coupling_at_ratio


@pytest.fixture
def pdos_factory():
    return gaussian_pdos


def gaussian_pdos(centers=REFERENCE_PHONON_ENERGIES_MEV, width=3.0, step=0.5):
    """Triple-Gaussian phonon density of states on a 0-200 meV grid."""
    energies = np.arange(0.0, 200.0 + step / 2, step)
    density = 0.01 * energies / 200.0
    for center in centers:
        density = density + np.exp(-0.5 * ((energies - center) / width) ** 2)
    return energies, density


@pytest.fixture
def pdos_spectrum():
    return gaussian_pdos()


@pytest.fixture
def odmr_truth():
    """(c0, A1, nu1, w1, A2, nu2, w2) of the reference spectrum."""
    return ODMR_TRUTH


@pytest.fixture
def odmr_spectrum():
    """Noise-free two-dip spectrum at ν1 = 3401.82 MHz, ν2 = 3549.27 MHz."""
    return synth_odmr_spectrum(ODMR_TRUTH, np.arange(3300.0, 3650.0 + 0.5, 1.0))


@pytest.fixture
def decay_files(tmp_path, exact_f1, exact_f2):
    """Noise-free F1/F2 CSV files."""
    f1 = write_table(decay_frame(exact_f1), tmp_path / "f1.csv")
    f2 = write_table(decay_frame(exact_f2), tmp_path / "f2.csv")
    return f1, f2


@pytest.fixture
def spectrum_file(tmp_path, odmr_spectrum):
    return write_table(spectrum_frame(*odmr_spectrum), tmp_path / "odmr.csv")


@pytest.fixture
def pdos_file(tmp_path, pdos_spectrum):
    energies, density = pdos_spectrum
    path = tmp_path / "pdos.csv"
    lines = ["energy_meV,density"] + [f"{e!r},{d!r}" for e, d in zip(energies.tolist(), density.tolist())]
    path.write_text("\n".join(lines) + "\n")
    return path
