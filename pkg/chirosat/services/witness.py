"""
witness.py – model decoding, witness certification, bound search
================================================================

Every published row is certified twice:

* sat   → decoded chirotope re-checked by ``verify_witness`` (no CNF involved)
* unsat → DRAT proof accepted by the external checker

Rows of a bound table and pipeline instances are independent jobs; they are
dispatched through a thread pool (each job is one external process) and
reduced serially into the table.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, as_completed
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from chirosat import settings
from chirosat.chirotope import (
    Chirotope, colex_tuples, find_k_gon, find_k_hole, is_acyclic, point_in_simplex, verify_axioms,
)
from chirosat.constants import (
    CATALOG_SUFFIX, CNF_SUFFIX, CHIROTOPE_SUFFIX, HEXAGON_K, HEXAGON_N_MAX, HEXAGON_N_MIN,
    HULL_FRAME_SIZE, REPORT_SUFFIX, WITNESS_SUFFIX, known_value,
)
from chirosat.core.exceptions import ValidationException, WitnessException
from chirosat.core.logger import get_logger, instance_context, log_run_event
from chirosat.dao import formats
from chirosat.encoder import VarCatalog, build_catalog, stream_dimacs
from chirosat.models.schemas import (
    BoundRow, BoundTable, CheckResult, Mode, PipelineReport, ProblemSpec, ROW_FAILED, ROW_SAT,
    ROW_TIMEOUT, ROW_UNSAT, SolverStatus, WitnessReport,
)
from chirosat.services.solver_bridge import BridgeRun, SolverBridge

logger = get_logger(__name__)


# ---------------------------------------------------------------------------
# Decoding / certification
# ---------------------------------------------------------------------------
def decode_model(model: Iterable[int], catalog: VarCatalog) -> Chirotope:
    """Sign atoms → chirotope (true ⇔ +1); auxiliary atoms are ignored."""
    assigned = set(model)
    signs = {}
    for t, var in catalog.sign_atoms():
        if var in assigned:
            signs[t] = 1
        elif -var in assigned:
            signs[t] = -1
        else:
            raise WitnessException(f"model leaves sign atom {t} (variable {var}) unassigned",
                                   context={"tuple": list(t), "var": var})
    return Chirotope(catalog.n, catalog.rank, [signs[t] for t in colex_tuples(catalog.n, catalog.rank)])


def _frame_convex(chi: Chirotope, m: int) -> CheckResult:
    r = chi.r
    for Q in combinations(range(1, m + 1), r + 1):
        for j, p in enumerate(Q):
            if point_in_simplex(chi, Q[:j] + Q[j + 1:], p):
                return CheckResult(False, Q, f"frame point {p} inside the other frame points")
    return CheckResult(True)


def _frame_interior(chi: Chirotope, m: int) -> CheckResult:
    simplices = list(combinations(range(1, m + 1), chi.r))
    for p in range(m + 1, chi.n + 1):
        if not any(point_in_simplex(chi, T, p) for T in simplices):
            return CheckResult(False, (p,), f"point {p} outside the frame")
    return CheckResult(True)


def verify_witness(chi: Chirotope, spec: ProblemSpec) -> WitnessReport:
    """Axioms (3-term), acyclicity and the instance's constraint, straight from the signs."""
    if chi.n != spec.n or chi.r != spec.rank:
        raise ValidationException(
            f"chirotope (n={chi.n}, r={chi.r}) does not match {spec.instance_id}", field="chirotope")

    report = verify_axioms(chi, "three_term")
    if chi.is_degenerate:
        return report
    report.acyclic = is_acyclic(chi)

    k = spec.k
    if spec.mode is Mode.GON:
        found = find_k_gon(chi, k)
        report.constraint_status["gon_free"] = CheckResult(found is None, found,
                                                           f"{k}-gon found" if found else "")
    else:
        found = find_k_hole(chi, k)
        report.constraint_status["hole_free"] = CheckResult(found is None, found,
                                                            f"{k}-hole found" if found else "")
    if spec.mode is Mode.HULL_FRAME_HOLE:
        convex = _frame_convex(chi, spec.m)
        report.constraint_status["hull_frame"] = convex if not convex else _frame_interior(chi, spec.m)

    if not report.passed:
        logger.warning("witness check failed for %s: %s", spec.instance_id,
                       {k: v.to_dict() for k, v in report.failures().items()})
    return report


# ---------------------------------------------------------------------------
# One instance
# ---------------------------------------------------------------------------
def _artifact(out_dir: Path, spec: ProblemSpec, suffix: str) -> Path:
    return out_dir / f"{spec.instance_id}{suffix}"


def run_instance(spec: ProblemSpec, bridge: SolverBridge, out_dir) -> BoundRow:
    """encode → solve → (sat: decode + verify_witness | unsat: check_proof)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with instance_context(spec.instance_id):
        cnf_path = _artifact(out_dir, spec, CNF_SUFFIX)
        stream_dimacs(spec, cnf_path)
        catalog = build_catalog(spec.n, spec.d)
        if settings.get("run.dump_catalog", False):
            formats.write_catalog(_artifact(out_dir, spec, CATALOG_SUFFIX), catalog)

        run = bridge.with_flags(spec.solver_flags).run(cnf_path, spec.instance_id)
        row = _row_from_run(spec, run, catalog, out_dir)
        row.cnf_path = str(cnf_path)

        formats.write_json(_artifact(out_dir, spec, REPORT_SUFFIX), {
            "spec": spec.to_dict(),
            "outcome": run.outcome.to_dict(),
            "run": run.record.to_dict(),
            "row": row.to_dict(),
        })
        log_run_event(spec.instance_id, "finished", status=row.status, verified=row.verified)
        return row


def _row_from_run(spec: ProblemSpec, run: BridgeRun, catalog: VarCatalog, out_dir: Path) -> BoundRow:
    outcome, record = run.outcome, run.record
    row = BoundRow(n=spec.n, status=ROW_FAILED, solve_time=record.solve_time,
                   check_time=record.check_time, cnf_bytes=record.cnf_bytes,
                   proof_bytes=record.proof_bytes, reason=record.reason)

    if outcome.status is SolverStatus.SAT:
        chi = decode_model(outcome.model, catalog)
        witness_path = formats.write_chirotope(_artifact(out_dir, spec, CHIROTOPE_SUFFIX), chi)
        report = verify_witness(chi, spec)
        formats.write_json(_artifact(out_dir, spec, WITNESS_SUFFIX),
                           {"spec": spec.to_dict(), "report": report.to_dict()})
        row.status = ROW_SAT
        row.verified = report.passed
        row.witness_path = str(witness_path)
        if not report.passed:
            row.reason = "witness rejected: " + ", ".join(report.failures())
    elif outcome.status is SolverStatus.UNSAT:
        row.status = ROW_UNSAT
        row.verified = run.verdict is not None and run.verdict.verified
        if record.reason == "checker timeout":
            row.status = ROW_TIMEOUT
        elif not row.verified:
            row.reason = row.reason or ("proof rejected" if run.verdict is not None else "proof not checked")
        if outcome.proof_path is not None and outcome.proof_path.exists():
            row.proof_path = str(outcome.proof_path)
    elif outcome.reason == "timeout":
        row.status = ROW_TIMEOUT
    return row


# ---------------------------------------------------------------------------
# Bound search
# ---------------------------------------------------------------------------
def _dispatch(specs: Sequence[ProblemSpec], bridge: SolverBridge, out_dir: Path,
              workers: int, stop_early: bool) -> List[BoundRow]:
    rows: List[BoundRow] = []
    if workers <= 1:
        for spec in specs:
            row = run_instance(spec, bridge, out_dir)
            rows.append(row)
            if stop_early and row.status == ROW_UNSAT and row.verified:
                break
        return rows

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(run_instance, spec, bridge, out_dir): spec.n for spec in specs}
        for fut in as_completed(futures):
            if fut.cancelled():
                continue
            row = fut.result()
            rows.append(row)
            if stop_early and row.status == ROW_UNSAT and row.verified:
                for other, n in futures.items():
                    if n > row.n:
                        other.cancel()
    return rows


def _parse_n_values(n_range: Iterable[int]) -> List[int]:
    values = list(n_range)
    if not values:
        raise ValidationException("empty n range", field="n_range")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValidationException(f"n range must be strictly ascending: {values}", field="n_range")
    return values


def compute_bound(d: int, k: int, mode, n_range: Iterable[int], bridge: Optional[SolverBridge] = None,
                  out_dir=None, workers: Optional[int] = None,
                  stop_early: Optional[bool] = None) -> BoundTable:
    mode = Mode(mode)
    if mode is Mode.HULL_FRAME_HOLE:
        raise ValidationException("bound search supports gon and hole", field="mode")
    specs = [ProblemSpec(d, n, k, mode) for n in _parse_n_values(n_range)]
    bridge = bridge or SolverBridge.from_settings()
    out_dir = Path(out_dir or settings.get("paths.output_dir"))
    workers = workers or settings.get("run.workers", 1)
    stop_early = settings.get("run.stop_early", False) if stop_early is None else stop_early

    table = BoundTable(d=d, k=k, mode=mode.value, known=known_value(d, k, mode.value))
    for row in _dispatch(specs, bridge, out_dir, workers, stop_early):
        table.add(row)

    violations = table.monotonicity_violations()
    if violations:
        logger.error("sat above a verified unsat row at n=%s (d=%d, k=%d, %s)",
                     violations, d, k, mode.value)
    if table.bound is not None and table.known is not None and table.known.exact \
            and table.known.value != table.bound:
        logger.warning("derived bound %s differs from the known value %s", table.bound, table.known.value)

    formats.write_json(out_dir / f"bound_{mode.value}_d{d}_k{k}.json", table.to_dict())
    bridge.registry.dump(out_dir / f"runs_{mode.value}_d{d}_k{k}.json")
    return table


# ---------------------------------------------------------------------------
# Hexagon pipeline
# ---------------------------------------------------------------------------
def hexagon_specs(n_values: Sequence[int]) -> List[ProblemSpec]:
    for n in n_values:
        if not HEXAGON_N_MIN <= n <= HEXAGON_N_MAX:
            raise ValidationException(
                f"pipeline n must lie in {HEXAGON_N_MIN}..{HEXAGON_N_MAX}, got {n}", field="n_range")
    return [ProblemSpec(2, n, HEXAGON_K, Mode.HULL_FRAME_HOLE, m=HULL_FRAME_SIZE) for n in n_values]


def hexagon_pipeline(n_range: Iterable[int] = range(HEXAGON_N_MIN, HEXAGON_N_MAX + 1),
                     bridge: Optional[SolverBridge] = None, out_dir=None,
                     workers: Optional[int] = None) -> PipelineReport:
    """Every requested n must come back verified unsat (9-gon frame, no 6-hole)."""
    n_values = _parse_n_values(n_range)
    specs = hexagon_specs(n_values)
    bridge = bridge or SolverBridge.from_settings()
    out_dir = Path(out_dir or settings.get("paths.output_dir"))
    workers = workers or settings.get("run.workers", 1)

    report = PipelineReport(n_values=n_values)
    report.rows = sorted(_dispatch(specs, bridge, out_dir, workers, stop_early=False), key=lambda r: r.n)
    if not report.passed:
        failed: Dict[int, str] = {r.n: r.status for r in report.rows
                                  if not (r.status == ROW_UNSAT and r.verified)}
        logger.error("hexagon pipeline incomplete: %s", failed)
    formats.write_json(out_dir / "hexagon_pipeline.json", report.to_dict())
    bridge.registry.dump(out_dir / "runs_hexagon_pipeline.json")
    return report
