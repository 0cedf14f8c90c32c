"""
encoder.py – CNF model for gon/hole-free acyclic chirotopes
==========================================================

Variables
---------
* sign atom  ``("s", t)``         – t a sorted (d+1)-tuple; true ⇔ chi(t) = +1
* sep atom   ``("sep", H, ab)``   – hyperplane through the d-subset H separates a, b
* cont atom  ``("cont", T, p)``   – p lies in the simplex of the (d+1)-subset T

Numbering is handed out by a ``pysat.formula.IDPool`` in the order sign,
sep, cont atoms, so it depends on (n, d) only.

Clause families are emitted in the order 3-term GP, acyclicity, auxiliary
definitions, problem constraints.  Every family is a generator; ``assemble``
materialises them, ``stream_dimacs`` writes them without building lists.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from pysat.formula import CNF, IDPool

from chirosat.chirotope import Chirotope, sort_with_sign
from chirosat.constants import GENERATOR_VERSION
from chirosat.core.exceptions import EncodingException, ValidationException
from chirosat.core.logger import get_logger, log_run_event
from chirosat.dao import formats
from chirosat.models.schemas import Mode, ProblemSpec

logger = get_logger(__name__)

Clause = List[int]
Labels = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Variable catalog
# ---------------------------------------------------------------------------
class VarCatalog:
    """Bijection between semantic atoms and DIMACS variable numbers."""

    def __init__(self, n: int, d: int):
        if d < 2:
            raise EncodingException(f"dimension must be at least 2, got {d}")
        if n < d + 2:
            raise EncodingException(f"need n >= d+2 = {d + 2} elements, got n={n}")
        self.n = n
        self.d = d
        self._pool = IDPool()
        labels = range(1, n + 1)

        for t in combinations(labels, d + 1):
            self._pool.id(("s", t))
        self.num_sign = self._pool.top

        for H in combinations(labels, d):
            rest = [x for x in labels if x not in H]
            for ab in combinations(rest, 2):
                self._pool.id(("sep", H, ab))
        self.num_sep = self._pool.top - self.num_sign

        for Q in combinations(labels, d + 2):
            for j, p in enumerate(Q):
                self._pool.id(("cont", Q[:j] + Q[j + 1:], p))
        self.num_cont = self._pool.top - self.num_sign - self.num_sep

        # plain dict: IDPool.obj2id allocates on a missing key
        self._ids: Dict[tuple, int] = dict(self._pool.obj2id)

    @property
    def num_vars(self) -> int:
        return self._pool.top

    @property
    def rank(self) -> int:
        return self.d + 1

    def _get(self, atom: tuple) -> int:
        try:
            return self._ids[atom]
        except KeyError:
            raise EncodingException(f"no variable for atom {atom!r}") from None

    def sign_var(self, t: Sequence[int]) -> int:
        return self._get(("s", tuple(t)))

    def sign_literal(self, t: Sequence[int]) -> int:
        """Signed literal for chi(t) = +1 on an ordered tuple; 0 if t repeats an index."""
        key, parity = sort_with_sign(t)
        if key is None:
            return 0
        return parity * self._ids[("s", key)]

    def sep_var(self, H: Sequence[int], a: int, b: int) -> int:
        return self._get(("sep", tuple(sorted(H)), (min(a, b), max(a, b))))

    def cont_var(self, T: Sequence[int], p: int) -> int:
        return self._get(("cont", tuple(sorted(T)), p))

    def atom(self, var: int) -> Optional[tuple]:
        return self._pool.obj(var)

    def sign_atoms(self) -> Iterator[Tuple[Labels, int]]:
        for var in range(1, self.num_sign + 1):
            yield self._pool.obj(var)[1], var

    def atoms(self) -> Iterator[Tuple[int, tuple]]:
        for var in range(1, self.num_vars + 1):
            yield var, self._pool.obj(var)

    def dump(self) -> str:
        """Sidecar text: one ``var kind labels`` line per atom."""
        lines = [f"c catalog n={self.n} d={self.d} vars={self.num_vars}"]
        for var, atom in self.atoms():
            if atom[0] == "s":
                lines.append(f"{var} s {' '.join(map(str, atom[1]))}")
            elif atom[0] == "sep":
                lines.append(f"{var} sep {' '.join(map(str, atom[1]))} | {atom[2][0]} {atom[2][1]}")
            else:
                lines.append(f"{var} cont {' '.join(map(str, atom[1]))} | {atom[2]}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=8)
def build_catalog(n: int, d: int) -> VarCatalog:
    catalog = VarCatalog(n, d)
    logger.debug("catalog n=%d d=%d: %d sign, %d sep, %d cont",
                 n, d, catalog.num_sign, catalog.num_sep, catalog.num_cont)
    return catalog


def expected_counts(n: int, d: int) -> Dict[str, int]:
    return {
        "sign": comb(n, d + 1),
        "sep": comb(n, d) * comb(n - d, 2),
        "cont": comb(n, d + 2) * (d + 2),
    }


# ---------------------------------------------------------------------------
# Instance
# ---------------------------------------------------------------------------
@dataclass
class CnfInstance:
    num_vars: int
    clauses: List[Clause]
    comments: List[str] = field(default_factory=list)
    spec: Optional[ProblemSpec] = None

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def validate(self) -> None:
        for i, clause in enumerate(self.clauses):
            if not clause:
                raise EncodingException(f"clause {i} is empty")
            if len(set(clause)) != len(clause):
                raise EncodingException(f"clause {i} repeats a literal: {clause}")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise EncodingException(f"clause {i} has literal {lit} outside 1..{self.num_vars}")

    def to_pysat(self) -> CNF:
        cnf = CNF(from_clauses=self.clauses)
        cnf.nv = self.num_vars
        return cnf


# ---------------------------------------------------------------------------
# 3-term Graßmann–Plücker
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def _violating_patterns(shape: Tuple[Optional[Tuple[int, int]], ...], width: int) -> Tuple[Tuple[bool, ...], ...]:
    """
    Assignments of ``width`` local variables violating the 3-term relation.

    ``shape`` gives, for A, B, x, y, u, v, either None (vanishing term) or
    (local index, sign).  Violation: x*y >= 0, u*v >= 0 and A*B < 0.
    """
    out = []
    for bits in product((True, False), repeat=width):
        val = [0 if s is None else (s[1] if bits[s[0]] else -s[1]) for s in shape]
        A, B, x, y, u, v = val
        if x * y >= 0 and u * v >= 0 and A * B < 0:
            out.append(bits)
    return tuple(out)


def _gp_block_clauses(lits: Sequence[int]) -> List[Clause]:
    """Clauses forbidding the violating patterns of six signed literals (0 = vanishing)."""
    if lits[0] == 0 or lits[1] == 0:
        return []
    local: Dict[int, int] = {}
    shape = []
    for lit in lits:
        if lit == 0:
            shape.append(None)
            continue
        var = abs(lit)
        idx = local.setdefault(var, len(local))
        shape.append((idx, 1 if lit > 0 else -1))
    variables = list(local)
    clauses = []
    for bits in _violating_patterns(tuple(shape), len(variables)):
        clause = [-v if b else v for v, b in zip(variables, bits)]
        clause.sort(key=abs)
        clauses.append(clause)
    return clauses


def iter_gp(catalog: VarCatalog) -> Iterator[Clause]:
    r, n = catalog.rank, catalog.n
    labels = range(1, n + 1)
    seen_global: Set[Tuple[int, ...]] = set()
    for shared in combinations(labels, r - 2):
        shared_set = set(shared)
        rest = [x for x in labels if x not in shared_set]
        # L[(x, y)] = literal of chi(x, y, *shared)
        L = {}
        for x, y in permutations(rest, 2):
            L[(x, y)] = catalog.sign_literal((x, y) + shared)
        block: Dict[Tuple[int, ...], None] = {}
        for a1, a2 in permutations(rest, 2):
            A = L[(a1, a2)]
            for b1, b2 in permutations(rest, 2):
                lits = (
                    A, L[(b1, b2)],
                    L.get((b1, a2), 0), L.get((a1, b2), 0),
                    L.get((b2, a2), 0), L.get((b1, a1), 0),
                )
                for clause in _gp_block_clauses(lits):
                    key = tuple(clause)
                    if key in block:
                        continue
                    if {a1, a2} & {b1, b2}:
                        # coinciding indices: tuples share more than ``shared``
                        if key in seen_global:
                            continue
                        seen_global.add(key)
                    block[key] = None
        for key in block:
            yield list(key)


def clauses_gp(catalog: VarCatalog) -> List[Clause]:
    return list(iter_gp(catalog))


# ---------------------------------------------------------------------------
# Acyclicity
# ---------------------------------------------------------------------------
def iter_acyclic(catalog: VarCatalog) -> Iterator[Clause]:
    r = catalog.rank
    for Q in combinations(range(1, catalog.n + 1), r + 1):
        for j, q in enumerate(Q):
            base = Q[:j] + Q[j + 1:]
            base_var = catalog.sign_var(base)
            replaced = [catalog.sign_literal(base[:i] + (q,) + base[i + 1:]) for i in range(r)]
            for s in (1, -1):
                yield [-s * base_var] + [s * lit for lit in replaced]


def clauses_acyclic(catalog: VarCatalog) -> List[Clause]:
    return list(iter_acyclic(catalog))


# ---------------------------------------------------------------------------
# Auxiliary definitions
# ---------------------------------------------------------------------------
def iter_aux_defs(catalog: VarCatalog) -> Iterator[Clause]:
    d = catalog.d
    labels = range(1, catalog.n + 1)
    for H in combinations(labels, d):
        rest = [x for x in labels if x not in H]
        for a, b in combinations(rest, 2):
            s = catalog.sep_var(H, a, b)
            la = catalog.sign_literal((a,) + H)
            lb = catalog.sign_literal((b,) + H)
            # s <-> (la xor lb)
            yield [-s, la, lb]
            yield [-s, -la, -lb]
            yield [s, -la, lb]
            yield [s, la, -lb]

    for Q in combinations(labels, d + 2):
        for j, p in enumerate(Q):
            T = Q[:j] + Q[j + 1:]
            c = catalog.cont_var(T, p)
            seps = [catalog.sep_var(T[:i] + T[i + 1:], T[i], p) for i in range(d + 1)]
            for s in seps:
                yield [-c, -s]
            yield [c] + seps


def clauses_aux_defs(catalog: VarCatalog) -> List[Clause]:
    return list(iter_aux_defs(catalog))


# ---------------------------------------------------------------------------
# Problem constraints
# ---------------------------------------------------------------------------
def _check_k(catalog: VarCatalog, k: int) -> None:
    if not catalog.d + 2 <= k <= catalog.n:
        raise EncodingException(f"k must satisfy d+2 <= k <= n, got k={k} (d={catalog.d}, n={catalog.n})")


def _inner_literals(catalog: VarCatalog, X: Labels) -> List[int]:
    """p in X lies in a simplex of X\\{p} through min(X\\{p})."""
    d = catalog.d
    out = []
    for p in X:
        rest = tuple(q for q in X if q != p)
        for others in combinations(rest[1:], d):
            out.append(catalog.cont_var((rest[0],) + others, p))
    return out


def iter_no_gon(catalog: VarCatalog, k: int) -> Iterator[Clause]:
    _check_k(catalog, k)
    for X in combinations(range(1, catalog.n + 1), k):
        yield _inner_literals(catalog, X)


def clauses_no_gon(catalog: VarCatalog, k: int) -> List[Clause]:
    return list(iter_no_gon(catalog, k))


def iter_no_hole(catalog: VarCatalog, k: int) -> Iterator[Clause]:
    _check_k(catalog, k)
    d = catalog.d
    for X in combinations(range(1, catalog.n + 1), k):
        clause = _inner_literals(catalog, X)
        members = set(X)
        fan = [(X[0],) + others for others in combinations(X[1:], d)]
        for p in range(1, catalog.n + 1):
            if p in members:
                continue
            clause.extend(catalog.cont_var(T, p) for T in fan)
        yield clause


def clauses_no_hole(catalog: VarCatalog, k: int) -> List[Clause]:
    return list(iter_no_hole(catalog, k))


def iter_hull_frame(catalog: VarCatalog, m: int) -> Iterator[Clause]:
    d = catalog.d
    if d != 2:
        raise EncodingException(f"hull frame constraints are planar only, got d={d}")
    if not d + 1 <= m <= catalog.n:
        raise EncodingException(f"hull size m={m} outside {d + 1}..{catalog.n}")
    for Q in combinations(range(1, m + 1), d + 2):
        for j, p in enumerate(Q):
            yield [-catalog.cont_var(Q[:j] + Q[j + 1:], p)]
    fan = [(1,) + c for c in combinations(range(2, m + 1), d)]
    for p in range(m + 1, catalog.n + 1):
        yield [catalog.cont_var(T, p) for T in fan]


def clauses_hull_frame(catalog: VarCatalog, m: int) -> List[Clause]:
    return list(iter_hull_frame(catalog, m))


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------
def iter_clauses(spec: ProblemSpec, catalog: Optional[VarCatalog] = None) -> Iterator[Clause]:
    """All clauses of ``spec`` in family order."""
    catalog = catalog or build_catalog(spec.n, spec.d)
    yield from iter_gp(catalog)
    yield from iter_acyclic(catalog)
    yield from iter_aux_defs(catalog)
    if spec.mode is Mode.GON:
        yield from iter_no_gon(catalog, spec.k)
    elif spec.mode is Mode.HOLE:
        yield from iter_no_hole(catalog, spec.k)
    else:
        yield from iter_hull_frame(catalog, spec.m)
        yield from iter_no_hole(catalog, spec.k)


def spec_comments(spec: ProblemSpec) -> List[str]:
    return [
        f"c chirosat {GENERATOR_VERSION}",
        f"c {spec.instance_id}: acyclic rank-{spec.rank} chirotopes on {spec.n} elements "
        f"without {spec.k}-{'gon' if spec.mode is Mode.GON else 'hole'}",
        "c spec " + json.dumps(spec.to_dict(), sort_keys=True),
    ]


def assemble(spec: ProblemSpec) -> CnfInstance:
    catalog = build_catalog(spec.n, spec.d)
    clauses = list(iter_clauses(spec, catalog))
    inst = CnfInstance(catalog.num_vars, clauses, spec_comments(spec), spec)
    inst.validate()
    log_run_event(spec.instance_id, "encoded", vars=inst.num_vars, clauses=inst.num_clauses)
    return inst


def stream_dimacs(spec: ProblemSpec, path) -> Tuple[int, int]:
    """Write the DIMACS of ``spec`` without materialising the clause list."""
    catalog = build_catalog(spec.n, spec.d)
    num_clauses = formats.write_dimacs_stream(
        Path(path), spec_comments(spec), catalog.num_vars, iter_clauses(spec, catalog))
    log_run_event(spec.instance_id, "encoded", vars=catalog.num_vars, clauses=num_clauses,
                  path=str(path))
    return catalog.num_vars, num_clauses


# ---------------------------------------------------------------------------
# Assignments
# ---------------------------------------------------------------------------
def assignment_from_chirotope(catalog: VarCatalog, chi: Chirotope) -> List[int]:
    """Full model (signed literals, ordered by variable) induced by ``chi``."""
    if chi.n != catalog.n or chi.r != catalog.rank:
        raise ValidationException(
            f"chirotope (n={chi.n}, r={chi.r}) does not match catalog (n={catalog.n}, r={catalog.rank})",
            field="chirotope")
    chi.require_uniform()
    values: Dict[int, bool] = {}
    for t, var in catalog.sign_atoms():
        values[var] = chi.sign_of_sorted(t) > 0

    def sep(H: Labels, a: int, b: int) -> bool:
        return chi.oriented((a,) + H) != chi.oriented((b,) + H)

    for var, atom in catalog.atoms():
        if atom[0] == "sep":
            values[var] = sep(atom[1], *atom[2])
        elif atom[0] == "cont":
            T, p = atom[1], atom[2]
            values[var] = not any(sep(T[:i] + T[i + 1:], T[i], p) for i in range(len(T)))
    return [var if values[var] else -var for var in range(1, catalog.num_vars + 1)]


def first_falsified(clauses: Iterable[Sequence[int]], assignment: Iterable[int]) -> Optional[List[int]]:
    """First clause without a true literal under ``assignment``, else None."""
    true_lits = set(assignment)
    for clause in clauses:
        if not any(lit in true_lits for lit in clause):
            return list(clause)
    return None
