#!/usr/bin/env python3
# ──────────────────────────────────────────────────────────
#  Uygulama giriş noktası  →  chirosat.cli
# ──────────────────────────────────────────────────────────
import sys

from chirosat.cli import main

if __name__ == "__main__":
    sys.exit(main())
