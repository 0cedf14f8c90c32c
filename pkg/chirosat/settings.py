#!/usr/bin/env python3
# ──────────────────────────────────────────────────────────────
#  Kalıcı ayar yönetimi (JSON)  –  chirosat/settings.py
# ──────────────────────────────────────────────────────────────
from __future__ import annotations
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict

from dotenv import load_dotenv

from chirosat.constants import (
    DEFAULT_CHECKER, DEFAULT_LOG_DIR, DEFAULT_OUTPUT_DIR, DEFAULT_SOLVER, DRAT_TIMEOUT_FLAG,
)

BASE_DIR = Path(__file__).resolve().parents[1]

# .env → CHIROSAT_SOLVER / CHIROSAT_CHECKER / CHIROSAT_LOG_DIR / CHIROSAT_SETTINGS
load_dotenv(BASE_DIR / ".env")

CFG_PATH = Path(os.getenv("CHIROSAT_SETTINGS", BASE_DIR / "settings.json"))

_log = logging.getLogger(__name__)

# ───────────── Varsayılanlar ─────────────
DEFAULTS: Dict[str, Any] = {
    "solver": {
        "path":    os.getenv("CHIROSAT_SOLVER", DEFAULT_SOLVER),
        "flags":   [],
        "timeout": None          # saniye, None = sınırsız
    },
    "checker": {
        "path":    os.getenv("CHIROSAT_CHECKER", DEFAULT_CHECKER),
        "flags":   [],
        "timeout": None,
        "timeout_flag": DRAT_TIMEOUT_FLAG   # checker kendi süre sınırı
    },
    "run": {
        "verify":       True,    # UNSAT → DRAT check
        "keep_proofs":  False,
        "workers":      1,
        "stop_early":   False,
        "dump_catalog": False
    },
    "paths": {
        "output_dir": str(BASE_DIR / DEFAULT_OUTPUT_DIR),
        "log_dir":    os.getenv("CHIROSAT_LOG_DIR", str(BASE_DIR / DEFAULT_LOG_DIR))
    }
}

# ───────────── Yardımcılar ─────────────
_cfg: Dict[str, Any] = {}


def _deep_update(dst: Dict, src: Dict) -> None:
    """src içeriğini dst’ye (recursive) ekle / güncelle."""
    for k, v in src.items():
        if isinstance(v, dict) and isinstance(dst.get(k, {}), dict):
            _deep_update(dst.setdefault(k, {}), v)
        else:
            dst[k] = v


def _load_disk() -> Dict[str, Any]:
    """settings.json oku – hata varsa boş sözlük döndür."""
    if not CFG_PATH.exists():
        return {}
    try:
        with CFG_PATH.open(encoding="utf-8") as f:
            return json.load(f)
    except Exception as exc:
        # bozuk dosyayı .bak yap, defaults’a dön
        try:
            CFG_PATH.rename(CFG_PATH.with_suffix(".bak"))
        except Exception:
            pass
        _log.warning("settings file is corrupt, moved to .bak (%s)", exc)
        return {}

# ───────────── Ana API ─────────────
def reload() -> Dict[str, Any]:
    """Defaults + disk’teki ayarları birleştir."""
    global _cfg
    _cfg = {}
    _deep_update(_cfg, DEFAULTS)
    _deep_update(_cfg, _load_disk())

    # environment wins over the file for executable locations
    if os.getenv("CHIROSAT_SOLVER"):
        _cfg["solver"]["path"] = os.environ["CHIROSAT_SOLVER"]
    if os.getenv("CHIROSAT_CHECKER"):
        _cfg["checker"]["path"] = os.environ["CHIROSAT_CHECKER"]
    return _cfg


def get(path: str, default: Any = None) -> Any:
    """'solver.path' gibi noktalı yolu okuyup değeri döndürür."""
    cur = _cfg
    for part in path.split("."):
        if isinstance(cur, dict) and part in cur:
            cur = cur[part]
        else:
            return default
    return cur

# ───────────── İlk yükleme ─────────────
reload()
