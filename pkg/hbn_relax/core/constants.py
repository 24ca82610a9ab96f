"""Constants used throughout the hbn-relax toolkit."""


# Physical constants
K_B_MEV_PER_K = 0.08617333  # Boltzmann constant, meV/K

# Unit convention: rates in kHz, times in µs, so rate * time carries 1e-3
KHZ_US = 1e-3
US_PER_INV_KHZ = 1e3  # 1 / (1 kHz) = 1000 µs

# Numerical tolerances
PROBABILITY_TOL = 1e-12
GENERATOR_TOL = 1e-12
RENORMALIZE_TOL = 1e-9

# Levenberg-Marquardt settings
LM_MAX_ITERATIONS = 500
LM_INITIAL_DAMPING = 1e-3
LM_DAMPING_FACTOR = 10.0
LM_MAX_DAMPING = 1e16
LM_CHI2_RTOL = 1e-10
LM_STEP_TOL = 1e-12
JACOBIAN_REL_STEP = 1e-6
JACOBIAN_MIN_STEP = 1e-8

# Smoothing window for minimum/peak search (points)
SMOOTHING_WINDOW = 5

# Room-temperature reference values
REFERENCE_OMEGA_KHZ = 33.26
REFERENCE_GAMMA_KHZ = 81.60
REFERENCE_PHONON_ENERGIES_MEV = (23.48, 77.39, 165.75)
REFERENCE_ODMR_NU1_MHZ = 3401.82
REFERENCE_ODMR_NU2_MHZ = 3549.27

# Readout defaults
DEFAULT_RATE_BRIGHT = 1.00
DEFAULT_RATE_DARK = 0.85
DEFAULT_SHOTS = 100_000

# Temperature grid for predicted curves
DEFAULT_T_START_K = 290.0
DEFAULT_T_STOP_K = 420.0
DEFAULT_T_STEP_K = 1.0

# CSV schemas (header columns, in order)
DECAY_COLUMNS = ["tau_us", "signal", "sigma"]
ODMR_COLUMNS = ["freq_MHz", "contrast"]
SERIES_COLUMNS = ["T_K", "omega_kHz", "sigma_omega_kHz", "gamma_kHz", "sigma_gamma_kHz"]
SERIES_LABEL_COLUMN = "spot_label"
PDOS_COLUMNS = ["energy_meV", "density"]
DECAY_PLOT_COLUMNS = ["tau_us", "data", "sigma", "fit"]
ODMR_PLOT_COLUMNS = ["freq_MHz", "data", "fit"]
T1_CURVE_COLUMNS = ["T_K", "omega_kHz", "gamma_kHz", "t1_us"]
FLOAT_FORMAT = "%.17g"

# Output file stems (extension follows --format)
F1_STEM = "f1"
F2_STEM = "f2"
ODMR_STEM = "odmr"
F1_FIT_STEM = "f1_fit"
F2_FIT_STEM = "f2_fit"
ODMR_FIT_STEM = "odmr_fit"
T1_CURVE_STEM = "t1_curve"
T1_PREDICTION_STEM = "t1_prediction"
RATES_ROW_STEM = "rates"
SERIES_STEM = "series"
RECORD_FILE_TEMPLATE = "{command}_result.json"
CONFIG_TEMPLATE_FILE = "hbn_relax_config.json"

# CLI exit codes
EXIT_CONFIG = 2
EXIT_FIT = 3
EXIT_IO = 4
