"""Global constants for the design equations and simulators"""
import math

# FWHM of a Gaussian in units of its standard deviation, as used by the design rules
FWHM_PER_SIGMA = 2.355

# Exact value, used where a Gaussian is synthesized on a grid
FWHM_PER_SIGMA_EXACT = 2.0 * math.sqrt(2.0 * math.log(2.0))

# Time-bin separation in Gaussian standard deviations (> 10 FWHM rule)
TIME_BIN_SIGMAS = 24.0

# Ramp containment in Gaussian standard deviations
DEFAULT_CONTAINMENT = 8.0
MIN_CONTAINMENT = 2.0

# Time-bandwidth products of common spectral profiles
TBP_FLAT_TOP = 0.89
TBP_GAUSSIAN = 0.44
TBP_LORENTZIAN = 0.17

# RF load impedance (ohms) for power-to-voltage conversion
RF_IMPEDANCE = 50.0

# Phase error tolerated from a drive voltage offset
DEFAULT_ALLOWED_PHASE = math.radians(5.0)

# Pump repetition rate is one third of the inverse time-bin spacing
PUMP_PERIODS_PER_BIN = 3.0

# Bell-state measurement efficiency of linear optics
BSM_EFFICIENCY = 0.5

# Pair probability above which the first-order rate model is questionable
MAX_FIRST_ORDER_PAIR_PROB = 0.1

# Default circulator insertion loss per pass (dB)
DEFAULT_CIRCULATOR_LOSS_DB = 0.6

# Shearing simulator grid
DEFAULT_TRACE_SAMPLES = 2**14
TRACE_SPAN_BIN_SPACINGS = 3
MIN_SAMPLES_PER_FWHM = 20
MIN_BIN_SEPARATION_FWHM = 4.0
MIN_BIN_WEIGHT_FRACTION = 1e-12
MIN_PHASE_SWEEP_POINTS = 8

# Joint spectral amplitude grid
DEFAULT_JSA_GRID = 512
MIN_JSA_GRID = 64
DEFAULT_JSA_SPAN_HZ = 60e9
DEFAULT_PM_FWHM_HZ = 200e9
DEFAULT_FILTER_ORDER = 4
MIN_CELLS_PER_FILTER_FWHM = 8

# |sinc(x)|^2 = 1/2 at x = SINC_HALF_POWER_X (sinc(x) = sin(x)/x)
SINC_HALF_POWER_X = 1.3915573782515103

# Monte Carlo
# Pulse-bin cells drawn per batch; each cell takes one draw per stage
MC_BATCH_CELLS = 1 << 20
MC_Z_THRESHOLD = 3.0
MC_MIN_EXPECTED_EVENTS = 10.0
