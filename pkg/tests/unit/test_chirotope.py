"""
Unit tests for the chirotope container and predicates
=====================================================
"""
import random
from itertools import permutations

import pytest

from chirosat.chirotope import (
    Chirotope, colex_rank, colex_tuples, find_k_gon, find_k_hole, is_acyclic, lookup, parse,
    permutation_sign, point_in_simplex, serialize, sort_with_sign, subset_in_convex_position,
    verify_axioms,
)
from chirosat.core.exceptions import (
    ChirotopeIndexException, DegeneracyException, FormatException, ValidationException,
)
from chirosat.geometry import PointSet, chirotope_from_points, geometric_scan
from tests.utils import random_general_position


def three_term_violated(chi, counterexample):
    """Re-evaluate a reported (a1, a2, *shared, b1, b2) tuple"""
    a1, a2, b1, b2 = counterexample[0], counterexample[1], counterexample[-2], counterexample[-1]
    shared = tuple(counterexample[2:-2])

    def s(x, y):
        return lookup(chi, (x, y) + shared)

    A, B = s(a1, a2), s(b1, b2)
    x, y, u, v = s(b1, a2), s(a1, b2), s(b2, a2), s(b1, a1)
    return x * y >= 0 and u * v >= 0 and A * B < 0


class TestTupleHelpers:
    """colex / permutation yardımcıları"""

    @pytest.mark.unit
    def test_colex_order(self):
        """Colex sıralaması testi"""
        assert colex_tuples(4, 3) == ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))
        assert colex_tuples(5, 2)[:4] == ((1, 2), (1, 3), (2, 3), (1, 4))

    @pytest.mark.unit
    def test_colex_rank_is_position(self):
        """colex_rank saklama indeksini verir"""
        for n, r in ((5, 2), (6, 3), (7, 4)):
            for i, t in enumerate(colex_tuples(n, r)):
                assert colex_rank(t) == i

    @pytest.mark.unit
    def test_sort_with_sign(self):
        """Sıralama ve parite testi"""
        assert sort_with_sign((3, 1, 2)) == ((1, 2, 3), 1)
        assert sort_with_sign((2, 1, 3)) == ((1, 2, 3), -1)
        assert sort_with_sign((1, 2, 1)) == (None, 0)

    @pytest.mark.unit
    def test_permutation_sign(self):
        """Permütasyon işareti testi"""
        assert permutation_sign([0, 1, 2]) == 1
        assert permutation_sign([1, 0, 2]) == -1
        assert permutation_sign([1, 2, 0]) == 1
        assert permutation_sign([3, 2, 1, 0]) == 1


class TestChirotopeContainer:
    """Chirotope sınıfı testleri"""

    @pytest.mark.unit
    def test_wrong_sign_count(self):
        """Yanlış işaret sayısı reddedilir"""
        with pytest.raises(ValidationException):
            Chirotope(4, 3, [1, 1, 1])

    @pytest.mark.unit
    def test_zero_rejected_unless_allowed(self):
        """Sıfır işaret sadece izinle kabul edilir"""
        with pytest.raises(ValidationException):
            Chirotope(3, 3, [0])
        assert Chirotope(3, 3, [0], allow_degenerate=True).is_degenerate

    @pytest.mark.unit
    def test_equality_and_hash(self, square_chirotope):
        """Eşitlik ve hash testi"""
        same = Chirotope(4, 3, [1, 1, 1, 1])
        assert same == square_chirotope
        assert hash(same) == hash(square_chirotope)
        assert same != square_chirotope.with_sign((1, 2, 3), -1)

    @pytest.mark.unit
    def test_reorient_negates_tuples_with_element(self, triangle_chirotope):
        """Reorientation elemanı içeren tuple'ları çevirir"""
        flipped = triangle_chirotope.reorient(4)
        for t, s in triangle_chirotope.items():
            assert flipped.sign_of_sorted(t) == (-s if 4 in t else s)

    @pytest.mark.unit
    def test_require_uniform(self):
        """Dejenere harita DegeneracyException verir"""
        with pytest.raises(DegeneracyException):
            Chirotope(4, 3, [1, 0, 1, 1], allow_degenerate=True).require_uniform()


class TestLookup:
    """lookup (alternating law) testleri"""

    @pytest.mark.unit
    def test_sorted_and_permuted(self, square_chirotope):
        """Sıralı ve permüte tuple lookup testi"""
        assert lookup(square_chirotope, (1, 2, 3)) == 1
        assert lookup(square_chirotope, (2, 1, 3)) == -1
        assert lookup(square_chirotope, (3, 1, 2)) == 1

    @pytest.mark.unit
    def test_repeated_index_is_zero(self, square_chirotope):
        """Tekrarlı indeks sıfır döner"""
        assert lookup(square_chirotope, (1, 1, 2)) == 0

    @pytest.mark.unit
    def test_out_of_range(self, square_chirotope):
        """Aralık dışı indeks hatası"""
        with pytest.raises(ChirotopeIndexException):
            lookup(square_chirotope, (1, 2, 5))

    @pytest.mark.unit
    def test_wrong_length(self, square_chirotope):
        """Yanlış uzunlukta tuple hatası"""
        with pytest.raises(ValidationException):
            lookup(square_chirotope, (1, 2))

    @pytest.mark.unit
    def test_matches_point_orientation(self, pentagon_points, pentagon_chirotope):
        """Lookup nokta orientation'ı ile aynı"""
        from chirosat.geometry import orientation
        for t in [(3, 1, 5), (5, 4, 2), (2, 5, 1)]:
            assert lookup(pentagon_chirotope, t) == orientation(pentagon_points.subset(t))


class TestVerifyAxioms:
    """Aksiyom doğrulama testleri"""

    @pytest.mark.unit
    @pytest.mark.parametrize("method", ["three_term", "full_exchange"])
    def test_realizable_chirotopes_pass(self, method, square_chirotope, pentagon_chirotope):
        """Gerçeklenebilir chirotope'lar iki yöntemle de geçer"""
        assert verify_axioms(square_chirotope, method).passed
        assert verify_axioms(pentagon_chirotope, method).passed

    @pytest.mark.unit
    @pytest.mark.parametrize("d,n", [(2, 6), (2, 7), (3, 6)])
    def test_random_point_sets_pass(self, d, n):
        """Rastgele nokta kümeleri aksiyomları sağlar"""
        rng = random.Random(1000 * d + n)
        for _ in range(5):
            chi = chirotope_from_points(PointSet.of(random_general_position(rng, n, d)))
            assert verify_axioms(chi, "three_term").passed
            assert verify_axioms(chi, "full_exchange").passed

    @pytest.mark.unit
    def test_single_tuple_passes(self):
        """Tek tuple'lı harita geçer"""
        assert verify_axioms(Chirotope(3, 3, [-1])).passed

    @pytest.mark.unit
    def test_flipped_sign_fails_three_term(self, flipped_pentagon):
        """Tek işaret çevrilince 3-term ihlali raporlanır"""
        report = verify_axioms(flipped_pentagon, "three_term")
        assert not report.passed
        assert report.method == "three_term"
        cex = report.axiom_status.counterexample
        assert len(cex) == 5
        assert three_term_violated(flipped_pentagon, cex)

    @pytest.mark.unit
    def test_flipped_sign_fails_full_exchange(self, flipped_pentagon):
        """Tek işaret çevrilince exchange ihlali raporlanır"""
        report = verify_axioms(flipped_pentagon, "full_exchange")
        assert not report.passed
        assert len(report.axiom_status.counterexample) == 6

    @pytest.mark.unit
    def test_degenerate_map_reported(self):
        """Dejenere harita raporda belirtilir"""
        chi = Chirotope(4, 3, [1, 1, 0, 1], allow_degenerate=True)
        report = verify_axioms(chi)
        assert not report.passed
        assert report.axiom_status.counterexample == (1, 3, 4)

    @pytest.mark.unit
    def test_unknown_method(self, square_chirotope):
        """Bilinmeyen yöntem reddedilir"""
        with pytest.raises(ValueError):
            verify_axioms(square_chirotope, "bogus")


class TestAcyclicity:
    """is_acyclic testleri"""

    @pytest.mark.unit
    def test_point_chirotopes_are_acyclic(self, triangle_chirotope, pentagon_chirotope):
        """Nokta chirotope'ları asikliktir"""
        assert is_acyclic(triangle_chirotope)
        assert is_acyclic(pentagon_chirotope)

    @pytest.mark.unit
    def test_reoriented_interior_point_is_cyclic(self, cyclic_chirotope):
        """İç nokta çevrilince asiklik bozulur"""
        result = is_acyclic(cyclic_chirotope)
        assert not result.passed
        assert result.counterexample == (1, 2, 3, 4)
        assert result.detail == "designated element 1"

    @pytest.mark.unit
    def test_reoriented_square_stays_acyclic(self, square_chirotope):
        """Kare köşesi çevrilince asiklik kalır"""
        # reorienting a hull vertex of a convex quadrilateral gives a realizable map again
        assert is_acyclic(square_chirotope.reorient(4))

    @pytest.mark.unit
    def test_single_tuple_is_acyclic(self):
        """Tek tuple'lı harita asiklik"""
        assert is_acyclic(Chirotope(3, 3, [1]))


class TestConvexity:
    """point_in_simplex / convex position testleri"""

    @pytest.mark.unit
    def test_interior_point(self, triangle_chirotope):
        """İç nokta simplex içinde"""
        assert point_in_simplex(triangle_chirotope, (1, 2, 3), 4)

    @pytest.mark.unit
    def test_exterior_point(self, triangle_outside_points):
        """Dış nokta simplex dışında"""
        chi = chirotope_from_points(triangle_outside_points)
        assert not point_in_simplex(chi, (1, 2, 3), 4)

    @pytest.mark.unit
    def test_square_has_no_containment(self, square_chirotope):
        """Karede içerme yok"""
        assert not point_in_simplex(square_chirotope, (1, 2, 3), 4)

    @pytest.mark.unit
    def test_order_of_simplex_is_irrelevant(self, triangle_chirotope):
        """Simplex sırası sonucu değiştirmez"""
        assert point_in_simplex(triangle_chirotope, (3, 1, 2), 4)
        assert point_in_simplex(triangle_chirotope, (2, 1, 3), 4)

    @pytest.mark.unit
    def test_invalid_arguments(self, triangle_chirotope):
        """Geçersiz argümanlar reddedilir"""
        with pytest.raises(ValidationException):
            point_in_simplex(triangle_chirotope, (1, 2, 3), 3)
        with pytest.raises(ValidationException):
            point_in_simplex(triangle_chirotope, (1, 2), 4)
        with pytest.raises(ChirotopeIndexException):
            point_in_simplex(triangle_chirotope, (1, 2, 3), 9)

    @pytest.mark.unit
    def test_convex_position(self, square_chirotope, triangle_chirotope):
        """Konveks konum testi"""
        assert subset_in_convex_position(square_chirotope, (1, 2, 3, 4))
        assert not subset_in_convex_position(triangle_chirotope, (1, 2, 3, 4))
        assert subset_in_convex_position(triangle_chirotope, (1, 2, 4))


class TestFinders:
    """find_k_gon / find_k_hole testleri"""

    @pytest.mark.unit
    def test_five_points_have_four_gon(self, pentagon_chirotope):
        """Beş noktada 4-gon bulunur"""
        assert find_k_gon(pentagon_chirotope, 4) == (1, 2, 3, 4)
        assert find_k_gon(pentagon_chirotope, 5) == (1, 2, 3, 4, 5)

    @pytest.mark.unit
    def test_triangle_with_interior_point(self, triangle_chirotope):
        """Üçgen + iç nokta: 4-gon yok"""
        assert find_k_gon(triangle_chirotope, 4) is None
        assert find_k_gon(triangle_chirotope, 3) == (1, 2, 3)

    @pytest.mark.unit
    def test_empty_triangle(self, triangle_center_points):
        """Boş üçgen 3-hole olarak bulunur"""
        chi = chirotope_from_points(triangle_center_points)
        assert find_k_hole(chi, 3) == (1, 2, 4)

    @pytest.mark.unit
    def test_k_larger_than_n(self, square_chirotope):
        """k > n ise sonuç yok"""
        assert find_k_gon(square_chirotope, 5) is None

    @pytest.mark.unit
    def test_agrees_with_geometric_scan(self):
        """Kombinatoryal ve geometrik tarama aynı tanığı verir"""
        rng = random.Random(99)
        for _ in range(10):
            S = PointSet.of(random_general_position(rng, 7, 2))
            chi = chirotope_from_points(S)
            for k in (4, 5):
                assert find_k_gon(chi, k) == geometric_scan(S, k, "gon")
                assert find_k_hole(chi, k) == geometric_scan(S, k, "hole")

    @pytest.mark.unit
    @pytest.mark.slow
    def test_twelve_points_without_seven_gon(self, no_7gon_points):
        """On iki noktalı rank-4 küme 7-gon içermez"""
        chi = chirotope_from_points(no_7gon_points)
        assert chi.r == 4
        assert find_k_gon(chi, 7) is None

    @pytest.mark.unit
    def test_degenerate_input_raises(self):
        """Dejenere girdi hatası"""
        with pytest.raises(DegeneracyException):
            find_k_gon(Chirotope(4, 3, [1, 0, 1, 1], allow_degenerate=True), 4)


class TestTextFormat:
    """serialize / parse testleri"""

    @pytest.mark.unit
    def test_single_tuple(self):
        """Tek tuple serileştirme"""
        assert serialize(Chirotope(3, 3, [1])) == "3 3\n+\n"

    @pytest.mark.unit
    def test_square(self, square_chirotope):
        """Kare serileştirme"""
        assert serialize(square_chirotope) == "4 3\n++++\n"

    @pytest.mark.unit
    def test_parse_round_trip(self, pentagon_chirotope):
        """parse(serialize(χ)) == χ"""
        assert parse(serialize(pentagon_chirotope)) == pentagon_chirotope

    @pytest.mark.unit
    @pytest.mark.parametrize("text", [
        "4 3\n+++\n",          # C(4,3) = 4 signs needed
        "4 3\n++0+\n",         # degenerate sign
        "4\n++++\n",           # header
        "4 3\n",               # missing sign line
        "3 4\n+\n",            # r > n
    ])
    def test_parse_errors(self, text):
        """Bozuk metin FormatException verir"""
        with pytest.raises(FormatException):
            parse(text, source="test")

    @pytest.mark.unit
    def test_degenerate_not_serialized(self):
        """Dejenere harita serileştirilmez"""
        with pytest.raises(DegeneracyException):
            serialize(Chirotope(3, 3, [0], allow_degenerate=True))


def random_sign_map(rng, n, r):
    return Chirotope(n, r, [rng.choice((1, -1)) for _ in colex_tuples(n, r)])


class TestPermutationLaw:
    """lookup: her permütasyon için alternating law"""

    @pytest.mark.unit
    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_exhaustive_small_ranks(self, r):
        """r <= 4, n <= 7: tüm saklanan tuple'lar ve tüm permütasyonlar"""
        rng = random.Random(40 + r)
        for n in range(r, 8):
            chi = random_sign_map(rng, n, r)
            for t, s in chi.items():
                for perm in permutations(range(r)):
                    assert lookup(chi, tuple(t[i] for i in perm)) == permutation_sign(perm) * s, (n, t, perm)

    @pytest.mark.unit
    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_repeated_index_in_any_position(self, r):
        """Tekrarlı indeks her konumda sıfır"""
        chi = random_sign_map(random.Random(r), 6, r)
        for t in colex_tuples(6, r - 1):
            for i in range(r):
                assert lookup(chi, t[:i] + (t[0],) + t[i:]) == 0


@pytest.mark.property
class TestRandomChirotopes:
    """Rastgele nokta kümeleri ve işaret haritaları üzerinde özellikler"""

    @pytest.mark.unit
    @pytest.mark.parametrize("d,n", [(2, 6), (2, 7), (2, 8), (3, 6), (3, 7)])
    def test_every_hole_is_a_gon(self, d, n):
        """k-hole tanığı aynı zamanda k-gon'dur"""
        rng = random.Random(500 + 10 * d + n)
        for _ in range(8):
            chi = chirotope_from_points(PointSet.of(random_general_position(rng, n, d)))
            for k in range(d + 2, n + 1):
                hole = find_k_hole(chi, k)
                if hole is None:
                    continue
                assert subset_in_convex_position(chi, hole)
                gon = find_k_gon(chi, k)
                assert gon is not None and gon <= hole

    @pytest.mark.unit
    @pytest.mark.parametrize("d,n", [(2, 5), (2, 8), (3, 6), (3, 8)])
    def test_parse_round_trip_on_point_sets(self, d, n):
        """Rastgele nokta chirotope'larında metin round-trip"""
        rng = random.Random(600 + 10 * d + n)
        for _ in range(10):
            chi = chirotope_from_points(PointSet.of(random_general_position(rng, n, d)))
            text = serialize(chi)
            assert parse(text) == chi
            assert serialize(parse(text)) == text

    @pytest.mark.unit
    @pytest.mark.parametrize("n,r", [(4, 2), (6, 3), (8, 3), (7, 4), (8, 5)])
    def test_parse_round_trip_on_sign_maps(self, n, r):
        """Rastgele işaret haritalarında metin round-trip"""
        rng = random.Random(700 + 10 * n + r)
        for _ in range(20):
            chi = random_sign_map(rng, n, r)
            assert parse(serialize(chi)) == chi
