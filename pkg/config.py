# Periodic Decomposition Toolkit Configuration
# Defaults used by the library and the `csmp` command line. Edit the values below
# to change the behaviour of every run; command-line flags override them per run.

import math

# Pursuit Settings
DEFAULT_MAX_PERIOD = 100        # Q: largest hidden period searched
DEFAULT_MAX_ITER = 20           # L: maximum number of extracted components
DEFAULT_TOL = 0.0               # epsilon: stop once the residual drops to this level
DEFAULT_TOL_MODE = "relative"   # "relative" (||r||^2 / ||x||^2) or "absolute" (||r||_2)
RESIDUAL_FLOOR = 1e-24          # Relative residual energy treated as fully explained

# Shifted (windowed) Pursuit Settings
DEFAULT_WINDOW_ITERS = 10       # Components extracted per window
DEFAULT_HOP_FRACTION = 0.25     # Hop as a fraction of the window size when not given
WINDOW_WORKERS = 1              # >1 evaluates windows on a thread pool

# Numerical Guards
SELF_CORR_GUARD = 1e-12         # Minimum 1 - |c|^2 for a conjugate pair projection
IMAG_TOLERANCE = 1e-9           # Largest imaginary residue accepted for a Ramanujan sum

# Output File Configuration
FLOAT_DIGITS = 9                # Significant digits written for every float
DEFAULT_OUTPUT_FORMAT = "csv"   # "csv" or "json"
SIGNAL_FILE = "signal.csv"
SPECTRUM_FILE = "periodic_spectrum.csv"
TRACE_FILE = "error_rate.csv"
PLANE_FILE = "time_period_plane.csv"
TRACK_FILE = "dominant_track.csv"
RESIDUAL_FILE = "residual.csv"
RECONSTRUCTION_FILE = "reconstruction.csv"

# Synthetic Signal Defaults
HIDDEN_PERIODS = [5, 12, 25, 26, 57, 58, 70, 85]
SYNTH_LENGTH = 1950
CHIRP_A = 0.01 / (2 * math.pi)  # x(t) = sin(1 / (a t))
CHIRP_T0 = 2.0                  # seconds
CHIRP_T1 = 10.0                 # seconds
CHIRP_DT = 0.01                 # seconds between samples
NOISE_SEED = 0

# Debugging & Logging
DEBUG_MODE = False              # Enable verbose per-iteration logging
SHOW_PROGRESS = True            # Print status lines and progress bars
