"""
Uygulama genelinde kullanılan sabitler
=====================================
"""
from __future__ import annotations

from typing import Dict, NamedTuple, Optional, Tuple

GENERATOR_VERSION = "1.0.0"

# Solver conventions (SAT competition exit codes)
SOLVER_EXIT_SAT = 10
SOLVER_EXIT_UNSAT = 20
DEFAULT_SOLVER = "cadical"
DEFAULT_CHECKER = "drat-trim"
DRAT_TIMEOUT_FLAG = "-t"
DRAT_DEFAULT_LIMIT = 20000  # seconds, drat-trim without -t

# Dosya yolları
DEFAULT_LOG_DIR = "logs"
DEFAULT_OUTPUT_DIR = "runs"

# Artifact suffixes
CNF_SUFFIX = ".cnf"
PROOF_SUFFIX = ".drat"
CHIROTOPE_SUFFIX = ".chi"
POINTS_SUFFIX = ".txt"
CATALOG_SUFFIX = ".catalog"
REPORT_SUFFIX = ".report.json"
WITNESS_SUFFIX = ".witness.json"

# Hexagon pipeline (planar 6-holes inside a 9-gon frame)
HULL_FRAME_SIZE = 9
HEXAGON_K = 6
HEXAGON_N_MIN = 9
HEXAGON_N_MAX = 22

# full_exchange self-test of the permutation law: tuples sampled above this count
PERMUTATION_SAMPLE_LIMIT = 200
PERMUTATION_SAMPLE_SEED = 20200924

# CLI exit status per error category
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CODES = {
    "validation": 2,
    "configuration": 3,
    "file_system": 4,
    "format": 5,
    "degeneracy": 6,
    "encoding": 7,
    "external_service": 8,
    "verification": 9,
}
EXIT_UNEXPECTED = 70


# ---------------------------------------------------------------------------
# Known Erdős–Szekeres values (g = gons, h = holes)
# ---------------------------------------------------------------------------
class KnownBound(NamedTuple):
    value: Optional[int]      # None → infinite (no such k-hole guaranteed)
    exact: bool
    lower: Optional[int] = None


INFINITE = KnownBound(None, True)

# (d, k) → bound; entries beyond the general rules below
KNOWN_GON_VALUES: Dict[Tuple[int, int], KnownBound] = {
    (2, 5): KnownBound(9, True),
    (2, 6): KnownBound(17, True),
    (3, 6): KnownBound(9, True),
    (3, 7): KnownBound(13, True),
    (4, 8): KnownBound(13, False),
    (5, 9): KnownBound(13, False),
}

KNOWN_HOLE_VALUES: Dict[Tuple[int, int], KnownBound] = {
    (2, 5): KnownBound(10, True),
    (2, 6): KnownBound(463, False, lower=30),
    (3, 6): KnownBound(9, True),
    (3, 7): KnownBound(14, False),
    (4, 8): KnownBound(13, False),
    (5, 9): KnownBound(13, False),
}


def known_value(d: int, k: int, mode: str) -> Optional[KnownBound]:
    """Literature value of g^(d)(k) (mode "gon") or h^(d)(k) (mode "hole")."""
    if k <= d + 1:
        return KnownBound(k, True)
    if k == d + 2:
        return KnownBound(d + 3, True)
    if 2 * k <= 3 * d + 2:
        return KnownBound(2 * k - d - 1, True)
    if mode == "gon":
        return KNOWN_GON_VALUES.get((d, k))
    if d == 2 and k >= 7:
        return INFINITE
    return KNOWN_HOLE_VALUES.get((d, k))


# ---------------------------------------------------------------------------
# Long-running instances (CPU-days); emitted on request, never in CI
# ---------------------------------------------------------------------------
class Preset(NamedTuple):
    d: int
    k: int
    mode: str
    n: int
    solver_flags: Tuple[str, ...] = ()


PRESETS: Dict[str, Preset] = {
    "g2_6": Preset(2, 6, "gon", 17),
    "g3_7": Preset(3, 7, "gon", 13),
    "h3_7": Preset(3, 7, "hole", 14, ("--unsat",)),
    "h4_8": Preset(4, 8, "hole", 13),
    "h5_9": Preset(5, 9, "hole", 13),
    "g3_8_witness": Preset(3, 8, "gon", 18),
    "h3_8_witness": Preset(3, 8, "hole", 19),
}

# 12 points in R^3 without 7-gons (rank-4 realization)
NO_7GON_POINTS_3D: Tuple[Tuple[int, int, int], ...] = (
    (526, 446, 232), (0, 756, 64), (612, 660, 342), (708, 638, 193),
    (546, 563, 134), (616, 622, 174), (414, 0, 370), (548, 594, 151),
    (884, 1334, 722), (452, 668, 180), (587, 659, 156), (579, 692, 0),
)
