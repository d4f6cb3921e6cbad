"""Constants for the swarm deployment solvers."""

DOMAIN = "swarmdeploy"
SCENARIO_VERSION = "1"

MODE_COLOCATED = "colocated"
MODE_LINE = "line"
MODE_KAPPA = "kappa"
MODE_3D = "3d"
MODE_ORACLE = "oracle"
MODES = [MODE_COLOCATED, MODE_LINE, MODE_KAPPA, MODE_3D, MODE_ORACLE]

# Coverage radius r(h) = alpha * h**beta, growing up to the turning point h_star (km)
DEFAULT_ALPHA = 1.0
DEFAULT_BETA = 0.5
DEFAULT_H_STAR = 2.0

# Horizontal flight weight, vertical ascent counts 1
DEFAULT_W = 0.2

# Energy per normalized km (Wh/km)
DEFAULT_C = 21.6

# Initial energy storage (Wh)
DEFAULT_BATTERY = 780.0

# Energy per normalized km by airframe (Wh/km)
AIRFRAME_PRESETS = {
    "md4-3000": 21.6,
    "dji-s1000": 10.8,
}

DEFAULT_EPSILON = 1e-3
DEFAULT_KAPPA = 0
DEFAULT_GRID_STEP = 1e-3

# Bisection tolerances on altitude (km) and leftover (Wh)
H_TOL = 1e-9
BHAT_TOL = 1e-9
MAX_ITER = 200

# Altitude tolerance of the bounded reach searches (km)
REACH_TOL = 1e-9

# Frontier slack accepted by the greedy sweeps (km)
COVER_TOL = 1e-7

# Gaps, overlaps and NFZ margins accepted when auditing output (km, Wh)
AUDIT_TOL = 1e-6

# Smallest positive leftover used as b_low (Wh)
B_LOW_FLOOR = 1e-3

# Relative slack before a radius counts as beyond r(h_star)
RADIUS_RTOL = 1e-7

# Weight of the touch violation in the reach objectives
TOUCH_PENALTY = 1e3

# Altitude samples seeding the 3D reach search
SEED_SAMPLES = 16

# Enumeration guards
MAX_SIDE_ASSIGNMENTS = 1024
MAX_NFZ_PLANS = 50_000
MAX_ORACLE_UAVS = 4
MAX_ORACLE_STATES = 1_000_000

# Process exit codes
EXIT_OK = 0
EXIT_UNKNOWN = 1
EXIT_INFEASIBLE = 2
EXIT_INPUT_ERROR = 3
EXIT_TOLERANCE = 4

# Bench defaults
BENCH_POINT_TIMEOUT = 300
BENCH_WORKERS = 4
BENCH_LENGTH = 20.0
BENCH_NFZ = (10.0, 13.0)
BENCH_N_MIN = 8
BENCH_N_MAX = 16
BENCH_EPSILONS = (1e-1, 1e-2, 1e-3)
BENCH_SIZES = (8, 16, 32, 64)
BENCH_KAPPAS = (0, 1, 2, 3)
BENCH_KAPPA_N = 6
BENCH_KAPPA_LENGTH = 10.0
BENCH_KAPPA_INSTANCES = 5
BENCH_BATTERY_RANGE = (700.0, 900.0)
BENCH_SWEEP_N = 10

# NFZ [10, 13] is wider than 2 * r(2), so figure 7 raises the turning point
BENCH_NFZ_H_STAR = 8.0
