"""
Property tests: geometry, checks and clauses must agree
=======================================================
Random integer point sets in general position are realizable, so their
chirotopes pass every check and their induced assignment satisfies every
clause family; the gon / hole clauses hold exactly when no k-gon / k-hole
exists.
"""
import random

import pytest

from chirosat.chirotope import find_k_gon, find_k_hole, is_acyclic, parse, serialize, verify_axioms
from chirosat.encoder import (
    assignment_from_chirotope, build_catalog, clauses_acyclic, clauses_aux_defs, clauses_gp,
    clauses_no_gon, clauses_no_hole, first_falsified,
)
from chirosat.geometry import PointSet, chirotope_from_points, geometric_scan
from chirosat.services.witness import decode_model
from tests.utils import random_general_position

SEED = 20240601
# (d, n, number of sets): 200 sets in total
CASES = [
    (2, 6, 40),
    (2, 7, 50),
    (3, 7, 40),
    (3, 8, 30),
    pytest.param(2, 9, 30, marks=pytest.mark.slow),
    pytest.param(3, 9, 10, marks=pytest.mark.slow),
]


def point_sets(d, n, count):
    rng = random.Random(SEED + 100 * d + n)
    for _ in range(count):
        yield PointSet.of(random_general_position(rng, n, d))


@pytest.mark.integration
@pytest.mark.property
class TestRealizableSets:
    """Rastgele nokta kümeleri üzerinde özellik testleri"""

    @pytest.mark.parametrize("d,n,count", CASES)
    def test_checks_and_families(self, d, n, count):
        """χ_S kontrolleri geçer, atama tüm aileleri sağlar"""
        catalog = build_catalog(n, d)
        families = {
            "gp": clauses_gp(catalog),
            "acyclic": clauses_acyclic(catalog),
            "aux": clauses_aux_defs(catalog),
        }
        for S in point_sets(d, n, count):
            chi = chirotope_from_points(S)
            assert verify_axioms(chi, "three_term").passed, S
            assert verify_axioms(chi, "full_exchange").passed, S
            assert is_acyclic(chi).passed, S
            model = assignment_from_chirotope(catalog, chi)
            for name, clauses in families.items():
                assert first_falsified(clauses, model) is None, (name, S)

    @pytest.mark.parametrize("d,n,count", CASES)
    def test_constraint_clauses_match_scans(self, d, n, count):
        """gon/hole clause'ları taramalarla uyumlu"""
        catalog = build_catalog(n, d)
        ks = range(d + 2, n + 1)
        gon = {k: clauses_no_gon(catalog, k) for k in ks}
        hole = {k: clauses_no_hole(catalog, k) for k in ks}
        for S in point_sets(d, n, count):
            chi = chirotope_from_points(S)
            model = assignment_from_chirotope(catalog, chi)
            for k in ks:
                assert (first_falsified(gon[k], model) is None) == (find_k_gon(chi, k) is None), (k, S)
                assert (first_falsified(hole[k], model) is None) == (find_k_hole(chi, k) is None), (k, S)

    @pytest.mark.parametrize("d,n,count", CASES)
    def test_combinatorial_and_geometric_scans_agree(self, d, n, count):
        """Kombinatoryal ve geometrik taramalar aynı"""
        for S in point_sets(d, n, count):
            chi = chirotope_from_points(S)
            for k in range(d + 2, n + 1):
                assert find_k_gon(chi, k) == geometric_scan(S, k, "gon"), (k, S)
                assert find_k_hole(chi, k) == geometric_scan(S, k, "hole"), (k, S)

    @pytest.mark.parametrize("d,n", [(2, 5), (2, 8), (3, 6), (3, 8)])
    def test_decode_inverts_induced_assignment(self, d, n):
        """decode_model(assignment(χ_S)) == χ_S; serialize/parse aynı kalır"""
        catalog = build_catalog(n, d)
        for S in point_sets(d, n, 15):
            chi = chirotope_from_points(S)
            decoded = decode_model(assignment_from_chirotope(catalog, chi), catalog)
            assert decoded == chi, S
            assert parse(serialize(decoded)) == chi
