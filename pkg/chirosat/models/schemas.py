"""
Shared data classes
===================

Value objects passed between the encoder, the solver bridge, the witness
runner and the CLI.  Everything here is plain data; behaviour lives in the
modules that produce it.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from chirosat.constants import HULL_FRAME_SIZE, KnownBound
from chirosat.core.exceptions import ValidationException


class Mode(str, Enum):
    """Constraint family of an instance"""
    GON = "gon"
    HOLE = "hole"
    HULL_FRAME_HOLE = "hull_frame_hole"


def _as_mode(value: Any) -> Mode:
    try:
        return Mode(value.value if isinstance(value, Mode) else str(value))
    except ValueError:
        raise ValidationException(
            f"Unknown mode {value!r} (expected one of {', '.join(m.value for m in Mode)})",
            field="mode",
        ) from None


@dataclass(frozen=True)
class ProblemSpec:
    """One SAT question: is there an acyclic rank-(d+1) chirotope on n elements
    without a k-gon / k-hole (optionally inside an m-gon frame)?"""
    d: int
    n: int
    k: int
    mode: Mode = Mode.GON
    m: Optional[int] = None
    solver_flags: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "mode", _as_mode(self.mode))
        object.__setattr__(self, "solver_flags", tuple(self.solver_flags or ()))
        if self.mode is Mode.HULL_FRAME_HOLE and self.m is None:
            object.__setattr__(self, "m", HULL_FRAME_SIZE)
        self.validate()

    def validate(self) -> None:
        for name in ("d", "n", "k"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValidationException(f"{name} must be an integer, got {value!r}", field=name)
        if self.d < 2:
            raise ValidationException(f"d must be at least 2, got {self.d}", field="d")
        if self.k < self.d + 2:
            raise ValidationException(
                f"k must be at least d+2={self.d + 2}, got {self.k}", field="k")
        if self.k > self.n:
            raise ValidationException(f"k={self.k} exceeds n={self.n}", field="k")
        if self.mode is Mode.HULL_FRAME_HOLE:
            if self.m > self.n:
                raise ValidationException(f"hull size m={self.m} exceeds n={self.n}", field="m")
            if self.m < self.d + 1:
                raise ValidationException(f"hull size m={self.m} below d+1", field="m")
        elif self.m is not None:
            raise ValidationException("hull size m only applies to hull_frame_hole", field="m")

    @property
    def rank(self) -> int:
        return self.d + 1

    @property
    def instance_id(self) -> str:
        """Deterministic artifact stem, e.g. ``gon_d2_k5_n9``."""
        stem = f"{self.mode.value}_d{self.d}_k{self.k}_n{self.n}"
        if self.mode is Mode.HULL_FRAME_HOLE:
            stem += f"_m{self.m}"
        return stem

    def to_dict(self) -> Dict[str, Any]:
        data = {"d": self.d, "n": self.n, "k": self.k, "mode": self.mode.value}
        if self.m is not None:
            data["m"] = self.m
        if self.solver_flags:
            data["solver_flags"] = list(self.solver_flags)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ProblemSpec":
        unknown = set(data) - {"d", "n", "k", "mode", "m", "solver_flags"}
        if unknown:
            raise ValidationException(f"Unknown spec keys: {sorted(unknown)}", field="spec")
        try:
            return cls(
                d=data["d"], n=data["n"], k=data["k"],
                mode=data.get("mode", Mode.GON.value),
                m=data.get("m"),
                solver_flags=tuple(data.get("solver_flags", ())),
            )
        except KeyError as exc:
            raise ValidationException(f"Missing spec key {exc.args[0]!r}", field=exc.args[0]) from None


# ---------------------------------------------------------------------------
# Verification results
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class CheckResult:
    """Outcome of one predicate; a failure carries a re-checkable tuple."""
    passed: bool
    counterexample: Optional[Tuple[int, ...]] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "detail": self.detail,
        }


PASS = CheckResult(True)


@dataclass
class WitnessReport:
    axiom_status: CheckResult
    acyclic: Optional[CheckResult] = None
    constraint_status: Dict[str, CheckResult] = field(default_factory=dict)
    method: str = "three_term"

    @property
    def passed(self) -> bool:
        checks = [self.axiom_status, *self.constraint_status.values()]
        if self.acyclic is not None:
            checks.append(self.acyclic)
        return all(c.passed for c in checks)

    def failures(self) -> Dict[str, CheckResult]:
        out = {}
        if not self.axiom_status:
            out["axioms"] = self.axiom_status
        if self.acyclic is not None and not self.acyclic:
            out["acyclic"] = self.acyclic
        out.update({k: v for k, v in self.constraint_status.items() if not v})
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "method": self.method,
            "axioms": self.axiom_status.to_dict(),
            "acyclic": self.acyclic.to_dict() if self.acyclic is not None else None,
            "constraints": {k: v.to_dict() for k, v in self.constraint_status.items()},
        }


# ---------------------------------------------------------------------------
# Solver bridge
# ---------------------------------------------------------------------------
class SolverStatus(str, Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"
    FAILED = "failed"


@dataclass
class SolverOutcome:
    status: SolverStatus
    elapsed: float
    solver: str
    model: Optional[List[int]] = None
    proof_path: Optional[Path] = None
    reason: Optional[str] = None

    def __post_init__(self):
        self.status = SolverStatus(self.status)
        if (self.model is not None) != (self.status is SolverStatus.SAT):
            raise ValidationException("model must be present exactly for sat outcomes", field="model")
        if self.proof_path is not None and self.status is not SolverStatus.UNSAT:
            raise ValidationException("proof_path only accompanies unsat outcomes", field="proof_path")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "elapsed": round(self.elapsed, 3),
            "solver": self.solver,
            "proof_path": str(self.proof_path) if self.proof_path else None,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class ProofVerdict:
    verified: bool
    output: str
    elapsed: float

    def __bool__(self) -> bool:
        return self.verified


# ---------------------------------------------------------------------------
# Bound search
# ---------------------------------------------------------------------------
ROW_SAT = "sat"
ROW_UNSAT = "unsat"
ROW_TIMEOUT = "timeout"
ROW_FAILED = "failed"


@dataclass
class BoundRow:
    n: int
    status: str
    verified: bool = False
    cnf_path: Optional[str] = None
    proof_path: Optional[str] = None
    witness_path: Optional[str] = None
    solve_time: Optional[float] = None
    check_time: Optional[float] = None
    cnf_bytes: Optional[int] = None
    proof_bytes: Optional[int] = None
    reason: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class BoundTable:
    d: int
    k: int
    mode: str
    rows: List[BoundRow] = field(default_factory=list)
    known: Optional[KnownBound] = None

    def add(self, row: BoundRow) -> None:
        self.rows.append(row)
        self.rows.sort(key=lambda r: r.n)

    def row(self, n: int) -> Optional[BoundRow]:
        return next((r for r in self.rows if r.n == n), None)

    @property
    def bound(self) -> Optional[int]:
        """Smallest verified-unsat n whose predecessor is a verified sat row (or below k).

        None while any sat row sits above a verified unsat row.
        """
        if self.monotonicity_violations():
            return None
        for r in self.rows:
            if r.status != ROW_UNSAT or not r.verified:
                continue
            if r.n - 1 < self.k:
                return r.n
            prev = self.row(r.n - 1)
            if prev is not None and prev.status == ROW_SAT and prev.verified:
                return r.n
        return None

    def monotonicity_violations(self) -> List[int]:
        """n values reported sat above a verified unsat row."""
        first_unsat = next((r.n for r in self.rows if r.status == ROW_UNSAT and r.verified), None)
        if first_unsat is None:
            return []
        return [r.n for r in self.rows if r.n > first_unsat and r.status == ROW_SAT]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "k": self.k,
            "mode": self.mode,
            "bound": self.bound,
            "known": self.known._asdict() if self.known else None,
            "monotonicity_violations": self.monotonicity_violations(),
            "rows": [r.to_dict() for r in self.rows],
        }


@dataclass
class PipelineReport:
    n_values: List[int]
    rows: List[BoundRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        done = {r.n for r in self.rows if r.status == ROW_UNSAT and r.verified}
        return bool(self.n_values) and all(n in done for n in self.n_values)

    @property
    def total_cnf_bytes(self) -> int:
        return sum(r.cnf_bytes or 0 for r in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_values": list(self.n_values),
            "passed": self.passed,
            "total_cnf_bytes": self.total_cnf_bytes,
            "rows": [r.to_dict() for r in sorted(self.rows, key=lambda r: r.n)],
        }


# ---------------------------------------------------------------------------
# CLI job files
# ---------------------------------------------------------------------------
@dataclass
class JobConfig:
    """Contents of a JSON job file; every field may also come from a flag."""
    d: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None
    mode: Optional[str] = None
    m: Optional[int] = None
    n_range: Optional[str] = None
    points: Optional[List[List[int]]] = None
    solver_path: Optional[str] = None
    solver_flags: Optional[List[str]] = None
    checker_path: Optional[str] = None
    checker_flags: Optional[List[str]] = None
    output_dir: Optional[str] = None
    timeout: Optional[float] = None
    keep_proofs: Optional[bool] = None
    verify: Optional[bool] = None
    workers: Optional[int] = None

    @classmethod
    def keys(cls) -> List[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "JobConfig":
        if not isinstance(data, dict):
            raise ValidationException("Job file must contain a JSON object", field="job")
        unknown = sorted(set(data) - set(cls.keys()))
        if unknown:
            raise ValidationException(f"Unknown job keys: {unknown}", field="job")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def merged(self, overrides: Dict[str, Any]) -> "JobConfig":
        """Copy with every non-None override applied (flags win)."""
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if k in data and v is not None})
        cfg = JobConfig(**data)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for name in ("d", "n", "k", "m", "workers"):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, int) or isinstance(value, bool)):
                raise ValidationException(f"{name} must be an integer", field=name)
        if self.mode is not None:
            _as_mode(self.mode)
        if self.workers is not None and self.workers < 1:
            raise ValidationException("workers must be positive", field="workers")
        if self.timeout is not None and self.timeout <= 0:
            raise ValidationException("timeout must be positive", field="timeout")
        for name in ("solver_flags", "checker_flags"):
            value = getattr(self, name)
            if value is not None and not all(isinstance(v, str) for v in value):
                raise ValidationException(f"{name} must be a list of strings", field=name)

    def to_spec(self) -> ProblemSpec:
        missing = [name for name in ("d", "n", "k") if getattr(self, name) is None]
        if missing:
            raise ValidationException(f"Missing problem parameters: {', '.join(missing)}", field=missing[0])
        return ProblemSpec(
            d=self.d, n=self.n, k=self.k,
            mode=self.mode or Mode.GON.value,
            m=self.m,
            solver_flags=tuple(self.solver_flags or ()),
        )
