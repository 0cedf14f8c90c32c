"""
solver_bridge.py – external SAT solver and DRAT checker
=======================================================

Conventions (made explicit, not assumed):

* solver command:  ``<solver> [flags] <cnf> [<proof>]``
* solver exit 10 ⇔ satisfiable, model on ``v`` lines; exit 20 ⇔ unsatisfiable
* checker command: ``<checker> <cnf> <proof> [flags]``, verdict on an
  ``s VERIFIED`` / ``s NOT VERIFIED`` line

Solver trouble (timeout, odd exit status, malformed or wrong model) is an
outcome with ``status == failed``.  Checker crash and checker timeout raise
distinct exceptions; a rejected proof is an ordinary ``verified=False``.
"""
from __future__ import annotations

import math
import os
import re
import shutil
import subprocess
import threading
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pysat.formula import CNF

from chirosat import settings
from chirosat.constants import DRAT_DEFAULT_LIMIT, DRAT_TIMEOUT_FLAG, SOLVER_EXIT_SAT, SOLVER_EXIT_UNSAT
from chirosat.core.exceptions import (
    ConfigurationException, FormatException, ProofCheckTimeoutException, ProofCheckerCrashException,
    ToolNotFoundException,
)
from chirosat.core.logger import get_logger, log_run_event, log_solver_run
from chirosat.dao import formats
from chirosat.encoder import CnfInstance, first_falsified
from chirosat.models.schemas import ProofVerdict, SolverOutcome, SolverStatus

logger = get_logger(__name__)

# drat-trim reports its own limit on a comment or status line
CHECKER_TIMEOUT_LINE = re.compile(r"^[cs] .*\btimeout\b", re.IGNORECASE | re.MULTILINE)


# ---------------------------------------------------------------------------
# DIMACS
# ---------------------------------------------------------------------------
def write_dimacs(inst: CnfInstance, path) -> Path:
    """``p cnf`` header, one 0-terminated clause per line, metadata as comments."""
    path = Path(path)
    cnf = inst.to_pysat()
    with formats.atomic_write(path) as fh:
        cnf.to_fp(fh, comments=inst.comments)
    logger.debug("DIMACS written → %s (%d vars, %d clauses)", path, inst.num_vars, inst.num_clauses)
    return path


# ---------------------------------------------------------------------------
# Options
# ---------------------------------------------------------------------------
def _tool_settings(section: str, overrides: Dict[str, Any]) -> Dict[str, Any]:
    """``solver`` / ``checker`` section of settings.json with non-None overrides applied."""
    data = {
        "path": settings.get(f"{section}.path"),
        "flags": settings.get(f"{section}.flags", []) or (),
        "timeout": settings.get(f"{section}.timeout"),
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    if not isinstance(data["path"], str) or not data["path"]:
        raise ConfigurationException(f"{section}.path must be a non-empty string", config_key=f"{section}.path")
    if isinstance(data["flags"], str) or not all(isinstance(f, str) for f in data["flags"]):
        raise ConfigurationException(f"{section}.flags must be a list of strings", config_key=f"{section}.flags")
    timeout = data["timeout"]
    if timeout is not None and (isinstance(timeout, bool) or not isinstance(timeout, (int, float)) or timeout <= 0):
        raise ConfigurationException(f"{section}.timeout must be a positive number", config_key=f"{section}.timeout")
    data["flags"] = tuple(data["flags"])
    return data


@dataclass(frozen=True)
class SolverOptions:
    path: str
    flags: Tuple[str, ...] = ()
    timeout: Optional[float] = None

    @classmethod
    def from_settings(cls, **overrides) -> "SolverOptions":
        return cls(**_tool_settings("solver", overrides))


@dataclass(frozen=True)
class CheckerOptions:
    path: str
    flags: Tuple[str, ...] = ()
    timeout: Optional[float] = None
    # checker option that takes its own time limit in seconds; "" when it has none
    timeout_flag: str = DRAT_TIMEOUT_FLAG

    @classmethod
    def from_settings(cls, **overrides) -> "CheckerOptions":
        timeout_flag = settings.get("checker.timeout_flag", DRAT_TIMEOUT_FLAG)
        if not isinstance(timeout_flag, str):
            raise ConfigurationException("checker.timeout_flag must be a string",
                                         config_key="checker.timeout_flag")
        return cls(**_tool_settings("checker", overrides), timeout_flag=timeout_flag)

    def command_flags(self) -> List[str]:
        """Configured flags, plus the checker's own limit raised to ``timeout`` when one is set."""
        flags = list(self.flags)
        if self.timeout is not None and self.timeout_flag and self.timeout_flag not in flags:
            flags += [self.timeout_flag, str(math.ceil(self.timeout))]
        return flags


def resolve_executable(tool: str, path: str) -> str:
    found = shutil.which(path)
    if found:
        return found
    candidate = Path(path)
    if candidate.is_file() and os.access(candidate, os.X_OK):
        return str(candidate)
    raise ToolNotFoundException(tool, path)


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------
def parse_solver_output(stdout: str) -> Tuple[Optional[str], List[int]]:
    """(status line word, model literals); raises FormatException on bad ``v`` tokens."""
    status = None
    model: List[int] = []
    for line in stdout.splitlines():
        if line.startswith("s "):
            status = line[2:].strip()
        elif line.startswith("v"):
            for tok in line[1:].split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise FormatException(f"malformed model token {tok!r}", source="solver") from None
                if lit != 0:
                    model.append(lit)
    return status, model


def validate_model(cnf_path, model: Sequence[int]) -> Optional[List[int]]:
    """First clause of the DIMACS file falsified by ``model``, else None."""
    cnf = CNF(from_file=str(cnf_path))
    return first_falsified(cnf.clauses, model)


def run_solver(cnf_path, options: SolverOptions, proof_path=None) -> SolverOutcome:
    exe = resolve_executable("solver", options.path)
    cmd = [exe, *options.flags, str(cnf_path)]
    if proof_path is not None:
        cmd.append(str(proof_path))
    solver_id = f"{Path(exe).name} {' '.join(options.flags)}".strip()
    logger.info("running %s", " ".join(cmd))

    start = time.perf_counter()
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=options.timeout)
    except subprocess.TimeoutExpired:
        elapsed = time.perf_counter() - start
        logger.warning("solver timed out after %.1fs on %s", elapsed, cnf_path)
        return SolverOutcome(SolverStatus.FAILED, elapsed, solver_id, reason="timeout")
    except FileNotFoundError:
        raise ToolNotFoundException("solver", options.path) from None
    elapsed = time.perf_counter() - start

    def failed(reason: str) -> SolverOutcome:
        logger.error("solver failed on %s: %s", cnf_path, reason)
        return SolverOutcome(SolverStatus.FAILED, elapsed, solver_id, reason=reason)

    try:
        status_word, model = parse_solver_output(proc.stdout)
    except FormatException as exc:
        return failed(exc.message)

    if proc.returncode == SOLVER_EXIT_SAT:
        if status_word not in (None, "SATISFIABLE"):
            return failed(f"exit 10 with status line {status_word!r}")
        if not model:
            return failed("satisfiable without a model")
        falsified = validate_model(cnf_path, model)
        if falsified is not None:
            return failed(f"model falsifies clause {falsified}")
        return SolverOutcome(SolverStatus.SAT, elapsed, solver_id, model=model)

    if proc.returncode == SOLVER_EXIT_UNSAT:
        if status_word not in (None, "UNSATISFIABLE"):
            return failed(f"exit 20 with status line {status_word!r}")
        proof = Path(proof_path) if proof_path is not None and Path(proof_path).exists() else None
        return SolverOutcome(SolverStatus.UNSAT, elapsed, solver_id, proof_path=proof)

    if proc.returncode == 0 and status_word == "UNKNOWN":
        return SolverOutcome(SolverStatus.UNKNOWN, elapsed, solver_id, reason="unknown")
    tail = (proc.stderr or proc.stdout or "").strip().splitlines()[-1:]
    return failed(f"unexpected exit {proc.returncode}" + (f": {tail[0]}" if tail else ""))


# ---------------------------------------------------------------------------
# Checker
# ---------------------------------------------------------------------------
def check_proof(cnf_path, proof_path, options: CheckerOptions) -> ProofVerdict:
    exe = resolve_executable("checker", options.path)
    cmd = [exe, str(cnf_path), str(proof_path), *options.command_flags()]
    logger.info("checking %s", proof_path)

    start = time.perf_counter()
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=options.timeout)
    except subprocess.TimeoutExpired:
        raise ProofCheckTimeoutException(str(proof_path), options.timeout) from None
    except FileNotFoundError:
        raise ToolNotFoundException("checker", options.path) from None
    elapsed = time.perf_counter() - start

    output = (proc.stdout or "") + (proc.stderr or "")
    verdicts = [ln.strip() for ln in output.splitlines() if ln.startswith("s ")]
    if "s NOT VERIFIED" in verdicts:
        return ProofVerdict(False, output, elapsed)
    if "s VERIFIED" in verdicts:
        return ProofVerdict(True, output, elapsed)
    if CHECKER_TIMEOUT_LINE.search(output):
        raise ProofCheckTimeoutException(str(proof_path), options.timeout or DRAT_DEFAULT_LIMIT)
    raise ProofCheckerCrashException(str(proof_path), proc.returncode, output)


# ---------------------------------------------------------------------------
# Run registry
# ---------------------------------------------------------------------------
@dataclass
class RunRecord:
    instance: str
    status: str
    solver: str = ""
    solve_time: Optional[float] = None
    check_time: Optional[float] = None
    cnf_bytes: Optional[int] = None
    proof_bytes: Optional[int] = None
    verified: Optional[bool] = None
    checker_output: Optional[str] = None
    reason: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class RunRegistry:
    """Append-only list of run records, shared by worker threads."""

    def __init__(self):
        self._lock = threading.Lock()
        self._records: List[RunRecord] = []

    def add(self, record: RunRecord) -> None:
        with self._lock:
            self._records.append(record)

    def records(self) -> List[RunRecord]:
        with self._lock:
            return list(self._records)

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

    def to_dict(self) -> Dict[str, Any]:
        return {"runs": [r.to_dict() for r in self.records()]}

    def dump(self, path) -> Path:
        return formats.write_json(path, self.to_dict())


# ---------------------------------------------------------------------------
# Bridge
# ---------------------------------------------------------------------------
@dataclass
class BridgeRun:
    outcome: SolverOutcome
    verdict: Optional[ProofVerdict]
    record: RunRecord


@dataclass
class SolverBridge:
    solver: SolverOptions
    checker: CheckerOptions
    verify: bool = True
    keep_proofs: bool = False
    registry: RunRegistry = field(default_factory=RunRegistry)

    @classmethod
    def from_settings(cls, solver_path=None, solver_flags=None, checker_path=None,
                      checker_flags=None, timeout=None, verify=None, keep_proofs=None) -> "SolverBridge":
        return cls(
            solver=SolverOptions.from_settings(path=solver_path, flags=solver_flags, timeout=timeout),
            checker=CheckerOptions.from_settings(path=checker_path, flags=checker_flags),
            verify=settings.get("run.verify", True) if verify is None else verify,
            keep_proofs=settings.get("run.keep_proofs", False) if keep_proofs is None else keep_proofs,
        )

    def with_flags(self, extra: Sequence[str]) -> "SolverBridge":
        """Same bridge (and registry) with additional solver flags."""
        if not extra:
            return self
        solver = SolverOptions(self.solver.path, self.solver.flags + tuple(extra), self.solver.timeout)
        return SolverBridge(solver, self.checker, self.verify, self.keep_proofs, self.registry)

    def run(self, cnf_path, instance_id: str, proof_path=None) -> BridgeRun:
        """Solve one DIMACS file; unsat outcomes are checked when ``verify`` is on."""
        cnf_path = Path(cnf_path)
        if self.verify and proof_path is None:
            proof_path = cnf_path.with_suffix(".drat")
        log_run_event(instance_id, "solving", cnf=str(cnf_path))

        outcome = run_solver(cnf_path, self.solver, proof_path if self.verify else None)
        log_solver_run(instance_id, outcome.status.value, outcome.elapsed, reason=outcome.reason)
        record = RunRecord(
            instance=instance_id,
            status=outcome.status.value,
            solver=outcome.solver,
            solve_time=round(outcome.elapsed, 3),
            cnf_bytes=formats.file_size(cnf_path),
            reason=outcome.reason,
        )

        verdict = None
        if outcome.status is SolverStatus.UNSAT and self.verify:
            verdict = self._check(cnf_path, outcome, record, instance_id)

        self.registry.add(record)
        return BridgeRun(outcome, verdict, record)

    def _check(self, cnf_path: Path, outcome: SolverOutcome, record: RunRecord,
               instance_id: str) -> Optional[ProofVerdict]:
        if outcome.proof_path is None:
            record.verified = False
            record.reason = "proof file missing"
            return ProofVerdict(False, "proof file missing", 0.0)

        record.proof_bytes = formats.file_size(outcome.proof_path)
        verdict = None
        try:
            verdict = check_proof(cnf_path, outcome.proof_path, self.checker)
            record.verified = verdict.verified
            record.check_time = round(verdict.elapsed, 3)
            record.checker_output = verdict.output
            log_run_event(instance_id, "checked", verified=verdict.verified,
                          elapsed=f"{verdict.elapsed:.2f}s", proof_bytes=record.proof_bytes)
        except ProofCheckTimeoutException:
            record.verified = False
            record.reason = "checker timeout"
        except ProofCheckerCrashException as exc:
            record.verified = False
            record.reason = "checker crash"
            record.checker_output = exc.context.get("output_tail")

        if verdict is not None and verdict.verified and not self.keep_proofs:
            outcome.proof_path.unlink(missing_ok=True)
            logger.debug("proof removed after check: %s", outcome.proof_path)
        return verdict
