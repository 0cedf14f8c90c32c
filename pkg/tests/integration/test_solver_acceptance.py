"""
End-to-end runs against a real solver and DRAT checker
======================================================
Skipped unless ``cadical`` and ``drat-trim`` are on PATH.
"""
import pytest

from chirosat.core.exceptions import ProofCheckerCrashException
from chirosat.encoder import CnfInstance
from chirosat.models.schemas import ProblemSpec, ROW_SAT, ROW_UNSAT, SolverStatus
from chirosat.services.solver_bridge import CheckerOptions, SolverBridge, check_proof, write_dimacs
from chirosat.services.witness import compute_bound, hexagon_pipeline, run_instance
from tests.utils import requires_solver

pytestmark = [pytest.mark.integration, pytest.mark.solver, requires_solver]

# three pigeons, two holes; no unit propagation refutation
PIGEONHOLE_3_2 = [
    [1, 2], [3, 4], [5, 6],
    [-1, -3], [-1, -5], [-3, -5],
    [-2, -4], [-2, -6], [-4, -6],
]


@pytest.fixture
def bridge():
    return SolverBridge.from_settings(solver_path="cadical", checker_path="drat-trim", verify=True)


class TestBridgeOnTinyFormulas:
    """Küçük CNF'ler üzerinde köprü"""

    def test_single_unit_is_sat(self, bridge, out_dir):
        """Tek birim clause SAT"""
        cnf = write_dimacs(CnfInstance(1, [[1]]), out_dir / "unit.cnf")
        run = bridge.run(cnf, "unit")
        assert run.outcome.status is SolverStatus.SAT
        assert run.outcome.model == [1]

    def test_contradiction_is_verified_unsat(self, bridge, out_dir):
        """Çelişki doğrulanmış UNSAT"""
        cnf = write_dimacs(CnfInstance(1, [[1], [-1]]), out_dir / "contra.cnf")
        run = bridge.run(cnf, "contra")
        assert run.outcome.status is SolverStatus.UNSAT
        assert run.verdict.verified
        assert run.record.verified is True

    def test_empty_proof_is_not_accepted(self, out_dir):
        """Boş kanıt kabul edilmez"""
        cnf = write_dimacs(CnfInstance(6, PIGEONHOLE_3_2), out_dir / "php.cnf")
        proof = out_dir / "php.drat"
        proof.write_text("")
        try:
            verdict = check_proof(cnf, proof, CheckerOptions("drat-trim"))
        except ProofCheckerCrashException:
            return
        assert not verdict.verified


class TestKnownValues:
    """Bilinen Erdős–Szekeres değerleri"""

    def test_four_gon_bound(self, bridge, out_dir):
        """g(4) = 5"""
        table = compute_bound(2, 4, "gon", [4, 5], bridge=bridge, out_dir=out_dir, workers=1)
        assert table.row(4).status == ROW_SAT
        assert table.row(5).status == ROW_UNSAT
        assert table.bound == 5

    def test_eight_points_without_a_five_gon(self, bridge, out_dir):
        """Sekiz nokta 5-gon'dan kaçınabilir"""
        row = run_instance(ProblemSpec(2, 8, 5, "gon"), bridge, out_dir)
        assert row.status == ROW_SAT
        assert row.verified

    @pytest.mark.slow
    def test_nine_points_always_have_a_five_gon(self, bridge, out_dir):
        """Dokuz noktada her zaman 5-gon"""
        row = run_instance(ProblemSpec(2, 9, 5, "gon"), bridge, out_dir)
        assert row.status == ROW_UNSAT
        assert row.verified
        assert row.proof_path is None

    @pytest.mark.slow
    def test_hexagon_pipeline_smallest_instance(self, bridge, out_dir):
        """En küçük hexagon pipeline instance'ı"""
        report = hexagon_pipeline([9], bridge=bridge, out_dir=out_dir)
        assert report.passed
