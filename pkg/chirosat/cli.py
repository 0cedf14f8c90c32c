"""
chirosat komut satırı
=====================

Kullanım
--------
python main.py encode    --d 2 --n 9 --k 5 --mode gon
python main.py encode    --preset h3_7 --stream
python main.py solve     --cnf runs/gon_d2_k5_n9.cnf
python main.py verify    --chirotope runs/gon_d2_k5_n8.chi --d 2 --n 8 --k 5
python main.py frompoints --points data/points_d3_no7gon.txt --scan gon --k 7
python main.py bound     --d 2 --k 4 --mode gon --range 4..5
python main.py pipeline  --range 9..11

Every command also reads a JSON job file (``--job``); flags win over the
file, settings.json provides whatever is still missing.

Exit status: 0 success, 1 a check came back negative, 2..9 error category
(see ``chirosat.constants.EXIT_CODES``), 70 unexpected error.  Errors are
also printed as ``error: category=<c> code=<code> message=<m>`` on stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from chirosat import __version__, settings
from chirosat.chirotope import find_k_gon, find_k_hole, is_acyclic, verify_axioms
from chirosat.constants import (
    CATALOG_SUFFIX, CHIROTOPE_SUFFIX, CNF_SUFFIX, EXIT_CHECK_FAILED, EXIT_OK, POINTS_SUFFIX, PRESETS,
    REPORT_SUFFIX,
)
from chirosat.core.error_handler import error_context, handle_error, setup_global_exception_handler
from chirosat.core.exceptions import FormatException, ValidationException
from chirosat.core.logger import ChiroLogger, get_logger
from chirosat.dao import formats
from chirosat.encoder import assemble, build_catalog, stream_dimacs
from chirosat.geometry import chirotope_from_points, geometric_scan
from chirosat.models.schemas import JobConfig, Mode, SolverStatus
from chirosat.services import bound_reporter
from chirosat.services.solver_bridge import SolverBridge, write_dimacs
from chirosat.services.witness import (
    compute_bound, decode_model, hexagon_pipeline, verify_witness,
)

logger = get_logger(__name__)

COMMANDS = ("encode", "solve", "verify", "frompoints", "bound", "pipeline")


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------
def parse_range(text: str) -> List[int]:
    """``"4..5"`` → [4, 5]; ``"9,11"`` → [9, 11]; ``"9"`` → [9]."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
            values = list(range(lo, hi + 1))
        else:
            values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationException(f"bad range {text!r} (expected 'a..b' or 'a,b,c')", field="range") from None
    if not values:
        raise ValidationException(f"empty range {text!r}", field="range")
    return values


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--job", help="JSON job file")
    p.add_argument("--preset", choices=sorted(PRESETS), help="named long-running instance")
    p.add_argument("--d", type=int, help="dimension")
    p.add_argument("--n", type=int, help="number of elements")
    p.add_argument("--k", type=int, help="gon/hole size")
    p.add_argument("--mode", choices=[m.value for m in Mode])
    p.add_argument("--m", type=int, help="hull frame size (hull_frame_hole)")
    p.add_argument("--solver", dest="solver_path", help="SAT solver executable")
    p.add_argument("--solver-flag", dest="solver_flags", action="append",
                   help="extra solver flag, repeatable (--solver-flag=--unsat)")
    p.add_argument("--checker", dest="checker_path", help="DRAT checker executable")
    p.add_argument("--checker-flag", dest="checker_flags", action="append", help="extra checker flag, repeatable")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--timeout", type=float, help="wall-clock seconds per solver run")
    p.add_argument("--keep-proofs", dest="keep_proofs", action="store_const", const=True)
    p.add_argument("--no-verify", dest="verify", action="store_const", const=False)
    p.add_argument("--workers", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    ap = argparse.ArgumentParser(prog="chirosat", description="Erdős–Szekeres SAT toolkit over acyclic chirotopes")
    ap.add_argument("--version", action="version", version=f"chirosat {__version__}")
    ap.add_argument("--log-dir", help="log directory (default: settings paths.log_dir)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", parents=[common], help="spec → DIMACS")
    enc.add_argument("--stream", action="store_true", help="write clauses without building them in memory")
    enc.add_argument("--catalog", action="store_true", help="also write the variable catalog sidecar")

    solve = sub.add_parser("solve", parents=[common], help="DIMACS or spec → outcome")
    solve.add_argument("--cnf", help="existing DIMACS file (spec read from its 'c spec' comment)")

    ver = sub.add_parser("verify", parents=[common], help="chirotope file + spec → report")
    ver.add_argument("--chirotope", required=True)
    ver.add_argument("--method", choices=["three_term", "full_exchange"], default="three_term")

    fp = sub.add_parser("frompoints", parents=[common], help="point file → chirotope file")
    fp.add_argument("--points", dest="points_file", help="point file ('n d' header); or 'points' in the job file")
    fp.add_argument("--scan", choices=["gon", "hole"], help="look for a k-gon / k-hole")
    fp.add_argument("--geometric", action="store_true", help="cross-check the scan on coordinates")

    bnd = sub.add_parser("bound", parents=[common], help="range → bound table")
    bnd.add_argument("--range", dest="n_range")
    bnd.add_argument("--stop-early", action="store_true")
    bnd.add_argument("--excel", action="store_true", help="also export the table as .xlsx")

    pipe = sub.add_parser("pipeline", parents=[common], help="range → hexagon pipeline report")
    pipe.add_argument("--range", dest="n_range")
    pipe.add_argument("--excel", action="store_true")
    return ap


PASSTHROUGH_OPTIONS = ("--solver-flag", "--checker-flag")


def _attach_passthrough(argv: Sequence[str]) -> List[str]:
    """``--solver-flag --unsat`` → ``--solver-flag=--unsat``; argparse rejects dash-prefixed values."""
    out: List[str] = []
    items = iter(argv)
    for item in items:
        if item in PASSTHROUGH_OPTIONS:
            value = next(items, None)
            if value is None:
                out.append(item)
                break
            out.append(f"{item}={value}")
        else:
            out.append(item)
    return out


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    argv = sys.argv[1:] if argv is None else argv
    return build_parser().parse_args(_attach_passthrough(argv))


def load_job(args: argparse.Namespace) -> JobConfig:
    """Job file (if any) → preset (if any) → flags; later sources win."""
    job = JobConfig.from_dict(formats.read_json(args.job)) if getattr(args, "job", None) else JobConfig()
    preset = getattr(args, "preset", None)
    if preset:
        p = PRESETS[preset]
        job = job.merged({"d": p.d, "k": p.k, "mode": p.mode, "n": p.n,
                          "solver_flags": list(p.solver_flags) or None})
    overrides = {key: getattr(args, key, None) for key in JobConfig.keys()}
    return job.merged(overrides)


def _output_dir(job: JobConfig) -> Path:
    out = Path(job.output_dir or settings.get("paths.output_dir"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _bridge(job: JobConfig) -> SolverBridge:
    return SolverBridge.from_settings(
        solver_path=job.solver_path, solver_flags=job.solver_flags,
        checker_path=job.checker_path, checker_flags=job.checker_flags,
        timeout=job.timeout, verify=job.verify, keep_proofs=job.keep_proofs,
    )


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------
def cmd_encode(args, job: JobConfig) -> int:
    spec = job.to_spec()
    out = _output_dir(job)
    cnf_path = out / f"{spec.instance_id}{CNF_SUFFIX}"
    if args.stream:
        num_vars, num_clauses = stream_dimacs(spec, cnf_path)
    else:
        inst = assemble(spec)
        write_dimacs(inst, cnf_path)
        num_vars, num_clauses = inst.num_vars, inst.num_clauses
    if args.catalog or settings.get("run.dump_catalog", False):
        formats.write_catalog(out / f"{spec.instance_id}{CATALOG_SUFFIX}", build_catalog(spec.n, spec.d))
    _emit(f"{cnf_path}  vars={num_vars} clauses={num_clauses}")
    return EXIT_OK


def _model_catalog(cnf_path: Path, spec):
    """Catalog sidecar next to the DIMACS file when present, else the generator's numbering."""
    sidecar = cnf_path.with_suffix(CATALOG_SUFFIX)
    if not sidecar.exists():
        return build_catalog(spec.n, spec.d)
    catalog = formats.load_catalog(sidecar)
    if (catalog.n, catalog.d) != (spec.n, spec.d):
        raise FormatException(f"catalog is for n={catalog.n} d={catalog.d}, instance has n={spec.n} d={spec.d}",
                              source=str(sidecar))
    return catalog


def cmd_solve(args, job: JobConfig) -> int:
    out = _output_dir(job)
    if args.cnf:
        cnf_path = Path(args.cnf)
        spec = formats.read_dimacs_spec(cnf_path)
        instance_id = spec.instance_id if spec else cnf_path.stem
        # flags recorded with the instance apply unless the command line names its own
        flags = job.solver_flags or (list(spec.solver_flags) if spec else None)
    else:
        spec = job.to_spec()
        instance_id = spec.instance_id
        cnf_path = out / f"{instance_id}{CNF_SUFFIX}"
        stream_dimacs(spec, cnf_path)
        flags = list(spec.solver_flags)
    bridge = _bridge(job.merged({"solver_flags": flags}))
    run = bridge.run(cnf_path, instance_id)
    outcome = run.outcome

    report: Dict[str, Any] = {"outcome": outcome.to_dict(), "run": run.record.to_dict()}
    status = EXIT_CHECK_FAILED
    if outcome.status is SolverStatus.SAT:
        status = EXIT_OK
        if spec is not None:
            chi = decode_model(outcome.model, _model_catalog(cnf_path, spec))
            formats.write_chirotope(out / f"{instance_id}{CHIROTOPE_SUFFIX}", chi)
            witness = verify_witness(chi, spec)
            report["witness"] = witness.to_dict()
            status = EXIT_OK if witness.passed else EXIT_CHECK_FAILED
    elif outcome.status is SolverStatus.UNSAT:
        if not bridge.verify or (run.verdict is not None and run.verdict.verified):
            status = EXIT_OK
    formats.write_json(out / f"{instance_id}{REPORT_SUFFIX}", report)

    verdict = ""
    if run.verdict is not None:
        verdict = " proof=" + ("verified" if run.verdict.verified else "rejected")
    elif run.record.reason:
        verdict = f" ({run.record.reason})"
    _emit(f"{instance_id}: {outcome.status.value}{verdict} in {outcome.elapsed:.2f}s")
    return status


def cmd_verify(args, job: JobConfig) -> int:
    chi = formats.read_chirotope(args.chirotope)
    spec = job.merged({"n": job.n or chi.n, "d": job.d or chi.r - 1}).to_spec()
    report = verify_witness(chi, spec)
    if args.method == "full_exchange":
        report.axiom_status = verify_axioms(chi, "full_exchange").axiom_status
        report.method = "full_exchange"
    out = _output_dir(job)
    formats.write_json(out / f"{Path(args.chirotope).stem}.{spec.instance_id}{REPORT_SUFFIX}",
                       {"spec": spec.to_dict(), "report": report.to_dict()})
    _emit(f"{args.chirotope} vs {spec.instance_id}: {'PASS' if report.passed else 'FAIL'}")
    for name, check in report.failures().items():
        _emit(f"  {name}: {check.detail} {list(check.counterexample or ())}")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_frompoints(args, job: JobConfig) -> int:
    if args.points_file:
        S = formats.read_points(args.points_file)
        stem = Path(args.points_file).stem
    elif job.points:
        S = formats.points_from_list(job.points)
        stem = f"points_d{S.d}_n{S.n}"
    else:
        raise ValidationException("frompoints needs --points or 'points' in the job file", field="points")

    chi = chirotope_from_points(S)
    out = _output_dir(job)
    # job-file points get a point file so the run can be repeated with --points
    points_path = args.points_file or formats.write_points(out / f"{stem}{POINTS_SUFFIX}", S)
    chi_path = formats.write_chirotope(out / f"{stem}{CHIROTOPE_SUFFIX}", chi)
    axioms = verify_axioms(chi, "three_term")
    acyclic = is_acyclic(chi)
    report: Dict[str, Any] = {
        "points": str(points_path),
        "chirotope": str(chi_path),
        "n": S.n, "d": S.d,
        "axioms": axioms.axiom_status.to_dict(),
        "acyclic": acyclic.to_dict(),
    }
    _emit(f"{chi_path}: rank {chi.r} on {chi.n} elements, axioms "
          f"{'ok' if axioms.passed else 'FAILED'}, acyclic {'yes' if acyclic else 'NO'}")

    if args.scan:
        if job.k is None:
            raise ValidationException("--scan needs --k", field="k")
        finder = find_k_gon if args.scan == "gon" else find_k_hole
        found = finder(chi, job.k)
        report["scan"] = {"mode": args.scan, "k": job.k, "witness": list(found) if found else None}
        if args.geometric:
            geo = geometric_scan(S, job.k, args.scan)
            report["scan"]["geometric_witness"] = list(geo) if geo else None
            if (geo is None) != (found is None):
                logger.error("geometric and combinatorial scans disagree: %s vs %s", geo, found)
        _emit(f"no {job.k}-{args.scan}" if found is None else f"{job.k}-{args.scan}: {list(found)}")

    formats.write_json(out / f"{stem}{REPORT_SUFFIX}", report)
    return EXIT_OK if axioms.passed and acyclic else EXIT_CHECK_FAILED


def _required(job: JobConfig, *names: str) -> None:
    missing = [n for n in names if getattr(job, n) is None]
    if missing:
        raise ValidationException(f"missing parameters: {', '.join(missing)}", field=missing[0])


def cmd_bound(args, job: JobConfig) -> int:
    _required(job, "d", "k", "n_range")
    table = compute_bound(job.d, job.k, job.mode or Mode.GON.value, parse_range(job.n_range),
                          bridge=_bridge(job), out_dir=_output_dir(job), workers=job.workers,
                          stop_early=args.stop_early or None)
    if args.excel:
        bound_reporter.export_excel(table, _output_dir(job) / f"bound_{table.mode}_d{table.d}_k{table.k}.xlsx")
    _emit(bound_reporter.render_summary(table))
    return EXIT_OK if table.bound is not None and not table.monotonicity_violations() else EXIT_CHECK_FAILED


def cmd_pipeline(args, job: JobConfig) -> int:
    n_values = parse_range(job.n_range) if job.n_range else None
    kwargs = {"n_range": n_values} if n_values else {}
    report = hexagon_pipeline(bridge=_bridge(job), out_dir=_output_dir(job), workers=job.workers, **kwargs)
    if args.excel:
        bound_reporter.export_excel(report, _output_dir(job) / "hexagon_pipeline.xlsx")
    _emit(bound_reporter.render_summary(report))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


HANDLERS = {
    "encode": cmd_encode,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "frompoints": cmd_frompoints,
    "bound": cmd_bound,
    "pipeline": cmd_pipeline,
}


def dispatch(command: str, args: argparse.Namespace) -> int:
    """Run one command; every exception becomes an exit status."""
    if command not in HANDLERS:
        return handle_error(ValidationException(f"unknown command {command!r}", field="command"), "dispatch")
    with error_context(command) as outcome:
        job = load_job(args)
        outcome["exit_code"] = HANDLERS[command](args, job)
    return outcome["exit_code"]


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    ChiroLogger.initialize(
        log_dir=args.log_dir or settings.get("paths.log_dir"),
        console_level=logging.DEBUG if args.verbose else logging.INFO,
    )
    setup_global_exception_handler()
    logger.debug("chirosat %s: %s", __version__, args.command)
    return dispatch(args.command, args)


if __name__ == "__main__":
    sys.exit(main())
