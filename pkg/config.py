"""
Configuration file for the Causal Polytope Toolkit
Contains all constants, paths, budgets and tolerances
"""

import os
from math import sqrt
from pathlib import Path


# ============================================================================
# FILE PATHS
# ============================================================================
BASE_DIR = Path(__file__).parent
CATALOG_DIR = BASE_DIR / "catalogs"
REPORTS_DIR = BASE_DIR / "reports"
LOGS_DIR = BASE_DIR / "logs"

# Ensure directories exist
CATALOG_DIR.mkdir(exist_ok=True)
REPORTS_DIR.mkdir(exist_ok=True)
LOGS_DIR.mkdir(exist_ok=True)

DEFAULT_CATALOG_PATH = CATALOG_DIR / "processes_n4.jsonl"
DEFAULT_CERT_REPORT_PATH = REPORTS_DIR / "certification.json"

# ============================================================================
# LOGGING
# ============================================================================
LOG_CONFIG = {
    "level": "INFO",
    "verbose_level": "DEBUG",
    "format": "%(asctime)s | %(levelname)-7s | %(name)s | %(message)s",
    "file": LOGS_DIR / "runs.log",
}

# ============================================================================
# REPRODUCIBILITY & WORKERS
# ============================================================================
RANDOM_SEED = 42
CF_THREADS = int(os.environ.get("CF_THREADS", os.cpu_count() or 1))

# ============================================================================
# SCENARIO LIMITS
# ============================================================================
MAX_ENUM_PARTIES = 3          # exhaustive scan refuses larger n
MAX_PARTIES = 4               # (n,2,2) machinery supports n <= 4
ENUM_CHUNK_SIZE = 1 << 20     # candidates per worker chunk

# ============================================================================
# POLYTOPE BUDGETS
# ============================================================================
DD_CONFIG = {
    "max_affine_dim": 64,     # guard on the reduced dimension
    "max_rays": 200000,       # intermediate rays before the run is cut off
}

LP_CONFIG = {
    "method": "highs-ds",     # dual simplex returns basic (vertex) solutions
    "support_tol": 1e-9,
    "integrality_tol": 1e-6,
    "objective_range": 1000,  # random objectives drawn from [-R, R]
    "fractional_trials": 10000,
}

ILP_CONFIG = {
    "n_parties": 4,
    "max_nodes": 2000,        # branch-and-bound nodes per objective
    "default_seconds": 600,
    "class_ceiling": 1291,    # known number of (4,2,2) classes
    "vertex_total": 5541744,  # known number of (4,2,2) integer vertices
}

EFFECT_CONFIG = {
    "max_support": 64,        # probe refuses larger supports
    "max_selections": 1_000_000,
    "random_samples": 100000,
}

# ============================================================================
# QUANTUM CERTIFICATION
# ============================================================================
PROB_TOL = 1e-10
LP_TOL = 1e-6
KET_TOL = 1e-12

# Phases are in units of a full turn: basis vector k of a setting with
# phase t is sum_q exp(2 pi i q (k - t) / 3) |q> / sqrt(3).
# None selects the computational basis.
MEASUREMENT_PRESETS = {
    "tailored": {
        "s3_phases": (0.0, 0.5),
        "m1_phases": (0.25, 0.75),
    },
    "postselected": {
        "s3_phases": (0.0, 0.5),
        "m1_phases": (None, 0.75),
    },
}

QUANTUM_CONFIG = {
    "measurement_preset": "tailored",
    "i3_reading": "printed",
}

# Values quoted for the certification, kept for comparison only
CLAIMED_VALUES = {
    "alpha": 1.0,
    "i3_quantum": 4.0,
    "i3_local": (1 + 3 * sqrt(3)) / 2,
    "i3_no_signaling": 2 + 2 * sqrt(3),
    "game_f_one_way": 0.75,
}

# ============================================================================
# CLI EXIT CODES
# ============================================================================
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
