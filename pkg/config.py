"""
Configuration module for lasso-density.
Loads environment variables and defines all application constants.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# ─── Load Environment Variables ─────────────────────────────────────────────
load_dotenv()

# ─── Enumeration Limits ──────────────────────────────────────────────────────
LASSO_DENSITY_CAP: int = int(os.getenv("LASSO_DENSITY_CAP", str(10**9)))
DEFAULT_JOBS: int = int(os.getenv("LASSO_DENSITY_JOBS", "1"))
BLOCKS_PER_JOB: int = 4        # Enumeration blocks handed to each worker

# ─── Oscillating Property ────────────────────────────────────────────────────
# "exact": {a} holds on the progression p, p+δ, ... and nowhere else after p.
# "at-least": {a} holds on the progression, other positions are free.
OSCILLATION_READINGS: tuple[str, ...] = ("exact", "at-least")
OSCILLATION_READING: str = os.getenv("LASSO_DENSITY_OSCILLATION", "exact")

# ─── Output ──────────────────────────────────────────────────────────────────
RATE_DECIMAL_DIGITS: int = 12  # Significant digits of the decimal rendering
CSV_HEADER: tuple[str, ...] = (
    "n", "count", "total", "rate_num", "rate_den", "rate_decimal",
)
OUTPUT_FORMATS: tuple[str, ...] = ("table", "csv")

# ─── Logging ─────────────────────────────────────────────────────────────────
LOG_LEVEL: str = os.getenv("LASSO_DENSITY_LOG_LEVEL", "WARNING")
LOG_FORMAT: str = "%(asctime)s | %(name)s | %(levelname)s | %(message)s"

# ─── Exit Codes ──────────────────────────────────────────────────────────────
EXIT_OK: int = 0
EXIT_USAGE: int = 2
EXIT_INVALID_INPUT: int = 3
EXIT_RESOURCE_CAP: int = 4
EXIT_INCONSISTENT: int = 5

# ─── Paths ───────────────────────────────────────────────────────────────────
BASE_DIR: Path = Path(__file__).parent
FIXTURES_DIR: Path = BASE_DIR / "fixtures"

# ─── Automaton Files ─────────────────────────────────────────────────────────
AUTOMATON_ENCODINGS: tuple[str, ...] = ("utf-8-sig", "latin-1")
