"""
Test utilities and helpers
==========================
Independent oracles: cofactor determinants, a brute-force Graßmann–Plücker
clause generator and exhaustive satisfiability for tiny instances.
"""
import random
import shutil
from itertools import combinations, product
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set

import pytest

from chirosat.chirotope import Chirotope, colex_tuples
from chirosat.encoder import VarCatalog, assignment_from_chirotope, first_falsified

requires_solver = pytest.mark.skipif(
    not (shutil.which("cadical") and shutil.which("drat-trim")),
    reason="cadical and drat-trim must be on PATH",
)


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------
def cofactor_det(m: Sequence[Sequence[int]]) -> int:
    """Laplace expansion along the first row."""
    if len(m) == 1:
        return m[0][0]
    total = 0
    for j, a in enumerate(m[0]):
        if a == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * a * cofactor_det(minor)
    return total


def cofactor_orientation(points: Sequence[Sequence[int]]) -> int:
    det = cofactor_det([[1, *p] for p in points])
    return (det > 0) - (det < 0)


def random_general_position(rng: random.Random, n: int, d: int, spread: int = 50) -> List[tuple]:
    """n integer points in [-spread, spread]^d, no d+1 of them on a common hyperplane."""
    while True:
        pts = [tuple(rng.randint(-spread, spread) for _ in range(d)) for _ in range(n)]
        if len(set(pts)) < n:
            continue
        if all(cofactor_orientation([pts[i - 1] for i in t]) != 0 for t in combinations(range(1, n + 1), d + 1)):
            return pts


# ---------------------------------------------------------------------------
# Clauses
# ---------------------------------------------------------------------------
def brute_force_gp(catalog: VarCatalog) -> Set[FrozenSet[int]]:
    """Every 3-term violation pattern, enumerated over all ordered index tuples."""
    r, n = catalog.rank, catalog.n
    out: Set[FrozenSet[int]] = set()
    for idx in product(range(1, n + 1), repeat=r + 2):
        a1, a2, b1, b2 = idx[0], idx[1], idx[-2], idx[-1]
        shared = idx[2:-2]
        if any(x >= y for x, y in zip(shared, shared[1:])):
            continue
        if a1 == a2 or b1 == b2 or {a1, a2, b1, b2} & set(shared):
            continue
        terms = [catalog.sign_literal((p, q) + shared)
                 for p, q in ((a1, a2), (b1, b2), (b1, a2), (a1, b2), (b2, a2), (b1, a1))]
        variables = sorted({abs(t) for t in terms if t})
        for bits in product((True, False), repeat=len(variables)):
            value = dict(zip(variables, bits))

            def sign(lit):
                if lit == 0:
                    return 0
                return 1 if value[abs(lit)] == (lit > 0) else -1

            A, B, x, y, u, v = (sign(t) for t in terms)
            if x * y >= 0 and u * v >= 0 and A * B < 0:
                out.add(frozenset(-var if value[var] else var for var in variables))
    return out


def falsified(clauses: Iterable[Sequence[int]], assignment: Iterable[int]) -> List[List[int]]:
    true_lits = set(assignment)
    return [list(c) for c in clauses if not any(lit in true_lits for lit in c)]


def sign_literals(catalog: VarCatalog, chi: Chirotope) -> List[int]:
    return [var if chi.sign_of_sorted(t) > 0 else -var for t, var in catalog.sign_atoms()]


def all_uniform_chirotopes(n: int, r: int) -> Iterable[Chirotope]:
    size = len(colex_tuples(n, r))
    for signs in product((1, -1), repeat=size):
        yield Chirotope(n, r, signs)


def brute_force_model(catalog: VarCatalog, clauses: List[List[int]]) -> Optional[List[int]]:
    """
    Exhaustive search over sign atoms; auxiliary atoms take their defined
    values, which is complete because the definitions are equivalences.
    """
    for chi in all_uniform_chirotopes(catalog.n, catalog.rank):
        model = assignment_from_chirotope(catalog, chi)
        if first_falsified(clauses, model) is None:
            return model
    return None
