#!/usr/bin/env python3
"""
Test runner script
==================
Projedeki testleri çalıştırmak için kullanılır.
"""
import argparse
import shutil
import subprocess
import sys
from pathlib import Path

MARKERS = {
    "fast": "not slow and not solver",
    "slow": "slow",
    "solver": "solver",
    "property": "property",
}


def run_tests(test_type="all", verbose=True, coverage=True, workers="auto"):
    """
    Testleri çalıştırır

    Args:
        test_type: "all", "unit", "integration", "fast", "slow", "solver", "property"
        verbose: Detaylı çıktı
        coverage: Coverage raporu
        workers: pytest-xdist worker count ("auto", a number, or None)
    """
    base_cmd = [sys.executable, "-m", "pytest"]

    if test_type == "unit":
        base_cmd.append("tests/unit/")
    elif test_type == "integration":
        base_cmd.append("tests/integration/")
    elif test_type in MARKERS:
        base_cmd.extend(["tests/", "-m", MARKERS[test_type]])
    else:
        base_cmd.append("tests/")

    if test_type == "solver" and not (shutil.which("cadical") and shutil.which("drat-trim")):
        print("Warning: cadical / drat-trim not on PATH, solver tests will be skipped")

    if verbose:
        base_cmd.append("-v")
    if not coverage:
        base_cmd.append("--no-cov")
    if workers:
        base_cmd.extend(["-n", str(workers)])

    print(f"Running: {' '.join(base_cmd)}")
    try:
        return subprocess.run(base_cmd).returncode
    except FileNotFoundError:
        print("Error: pytest not found. Install with: pip install -r requirements.txt")
        return 1


def main():
    """Ana fonksiyon"""
    parser = argparse.ArgumentParser(description="Run chirosat tests")
    parser.add_argument("--type", choices=["all", "unit", "integration", *MARKERS], default="all",
                        help="Test type to run")
    parser.add_argument("--no-coverage", action="store_true", help="Disable coverage reporting")
    parser.add_argument("--quiet", action="store_true", help="Minimal output")
    parser.add_argument("--serial", action="store_true", help="Do not use pytest-xdist")
    args = parser.parse_args()

    # Proje root'unda olduğumuzu kontrol et
    if not Path("chirosat").exists():
        print("Error: Must be run from project root directory")
        sys.exit(1)

    sys.exit(run_tests(test_type=args.type, verbose=not args.quiet,
                       coverage=not args.no_coverage, workers=None if args.serial else "auto"))


if __name__ == "__main__":
    main()
