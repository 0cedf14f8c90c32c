# chirosat/__init__.py
"""SAT-based Erdős–Szekeres toolkit over acyclic chirotopes."""
from pathlib import Path

from chirosat.constants import GENERATOR_VERSION

__version__ = GENERATOR_VERSION

# → proje kökü
BASE_DIR = Path(__file__).resolve().parent.parent
