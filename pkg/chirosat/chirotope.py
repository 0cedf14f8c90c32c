"""
chirotope.py – rank-r sign maps on n labelled elements
======================================================

A chirotope is stored densely: one sign per strictly increasing r-tuple, in
colexicographic order of the tuples.  Arbitrary ordered tuples are resolved
through the alternating law (``lookup``).

Besides the container this module holds the combinatorial predicates used to
certify SAT witnesses without looking at the CNF:

* ``verify_axioms``  – full exchange axiom or the 3-term Graßmann–Plücker form
* ``is_acyclic``     – no point inside a simplex with every sign flipped
* ``point_in_simplex`` / ``subset_in_convex_position`` – Carathéodory tests
* ``find_k_gon`` / ``find_k_hole`` – first witness in lexicographic order
"""
from __future__ import annotations

import random
from enum import Enum
from functools import cached_property, lru_cache
from itertools import combinations, permutations
from math import comb
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from chirosat.constants import PERMUTATION_SAMPLE_LIMIT, PERMUTATION_SAMPLE_SEED
from chirosat.core.exceptions import (
    ChirotopeIndexException, DegeneracyException, FormatException, ValidationException,
)
from chirosat.core.logger import get_logger
from chirosat.models.schemas import CheckResult, PASS, WitnessReport

logger = get_logger(__name__)

Tuple_ = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Tuple helpers
# ---------------------------------------------------------------------------
@lru_cache(maxsize=64)
def colex_tuples(n: int, r: int) -> Tuple[Tuple_, ...]:
    """All sorted r-subsets of 1..n in colexicographic order."""
    return tuple(sorted(combinations(range(1, n + 1), r), key=lambda t: t[::-1]))


def colex_rank(t: Sequence[int]) -> int:
    """Position of a sorted 1-based tuple in ``colex_tuples``."""
    return sum(comb(x - 1, i + 1) for i, x in enumerate(t))


def sort_with_sign(t: Sequence[int]) -> Tuple[Optional[Tuple_], int]:
    """(sorted tuple, sign of the sorting permutation); (None, 0) on a repeated index."""
    items = list(t)
    sign = 1
    for i in range(1, len(items)):
        x = items[i]
        j = i - 1
        while j >= 0 and items[j] > x:
            items[j + 1] = items[j]
            j -= 1
            sign = -sign
        if j >= 0 and items[j] == x:
            return None, 0
        items[j + 1] = x
    return tuple(items), sign


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of 0..m-1 from its cycle decomposition."""
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# ---------------------------------------------------------------------------
# Container
# ---------------------------------------------------------------------------
class Chirotope:
    """Immutable rank-r sign map on 1..n (colex-ordered dense storage)."""

    def __init__(self, n: int, r: int, signs: Sequence[int], allow_degenerate: bool = False):
        if r < 1 or n < r:
            raise ValidationException(f"need 1 <= r <= n, got n={n}, r={r}", field="rank")
        signs = tuple(int(s) for s in signs)
        expected = comb(n, r)
        if len(signs) != expected:
            raise ValidationException(
                f"rank-{r} chirotope on {n} elements needs {expected} signs, got {len(signs)}",
                field="signs")
        allowed = {-1, 0, 1} if allow_degenerate else {-1, 1}
        bad = next((i for i, s in enumerate(signs) if s not in allowed), None)
        if bad is not None:
            raise ValidationException(
                f"invalid sign {signs[bad]} at tuple {colex_tuples(n, r)[bad]}", field="signs")
        self.n = n
        self.r = r
        self.signs = signs
        self.allow_degenerate = allow_degenerate

    # -- equality / display -------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Chirotope):
            return NotImplemented
        return (self.n, self.r, self.signs) == (other.n, other.r, other.signs)

    def __hash__(self) -> int:
        return hash((self.n, self.r, self.signs))

    def __repr__(self) -> str:
        return f"Chirotope(n={self.n}, r={self.r}, signs={_sign_string(self.signs)!r})"

    # -- access -------------------------------------------------------------
    def tuples(self) -> Tuple[Tuple_, ...]:
        return colex_tuples(self.n, self.r)

    def items(self) -> Iterator[Tuple[Tuple_, int]]:
        return zip(self.tuples(), self.signs)

    @cached_property
    def sign_map(self) -> Dict[Tuple_, int]:
        return dict(self.items())

    def sign_of_sorted(self, t: Tuple_) -> int:
        return self.sign_map[t]

    def oriented(self, t: Sequence[int]) -> int:
        """Unchecked lookup for internal loops."""
        key, parity = sort_with_sign(t)
        if key is None:
            return 0
        return parity * self.sign_map[key]

    @cached_property
    def first_zero(self) -> Optional[Tuple_]:
        return next((t for t, s in self.items() if s == 0), None)

    @property
    def is_degenerate(self) -> bool:
        return self.first_zero is not None

    def require_uniform(self) -> None:
        if self.first_zero is not None:
            raise DegeneracyException(self.first_zero)

    # -- derived chirotopes -------------------------------------------------
    def with_sign(self, t: Sequence[int], value: int) -> "Chirotope":
        key = tuple(sorted(t))
        signs = list(self.signs)
        signs[colex_rank(key)] = value
        return Chirotope(self.n, self.r, signs, self.allow_degenerate or value == 0)

    def reorient(self, element: int) -> "Chirotope":
        """Negate every tuple containing ``element``."""
        signs = [-s if element in t else s for t, s in self.items()]
        return Chirotope(self.n, self.r, signs, self.allow_degenerate)


# ---------------------------------------------------------------------------
# Lookup
# ---------------------------------------------------------------------------
def lookup(chi: Chirotope, t: Sequence[int]) -> int:
    """sgn(sigma) * chi(sorted t); 0 if t repeats an index."""
    if len(t) != chi.r:
        raise ValidationException(f"expected an {chi.r}-tuple, got {tuple(t)}", field="tuple")
    for i in t:
        if not 1 <= i <= chi.n:
            raise ChirotopeIndexException(i, chi.n)
    return chi.oriented(t)


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------
class Method(str, Enum):
    FULL_EXCHANGE = "full_exchange"
    THREE_TERM = "three_term"


class _OrderedSigns:
    """Memo of ordered tuple -> sign."""

    def __init__(self, chi: Chirotope):
        self.chi = chi
        self._memo: Dict[Tuple_, int] = {}

    def __call__(self, t: Tuple_) -> int:
        value = self._memo.get(t)
        if value is None:
            value = self.chi.oriented(t)
            self._memo[t] = value
        return value


def _check_three_term(chi: Chirotope) -> CheckResult:
    r, n = chi.r, chi.n
    if r < 2:
        return PASS
    for shared in combinations(range(1, n + 1), r - 2):
        rest = [x for x in range(1, n + 1) if x not in shared]
        # M[x][y] = chi(x, y, *shared)
        M = {x: {} for x in rest}
        for x, y in combinations(rest, 2):
            s = chi.oriented((x, y) + shared)
            M[x][y] = s
            M[y][x] = -s
        for a1, a2, b1, b2 in permutations(rest, 4):
            t1 = M[b1][a2] * M[a1][b2]
            if t1 < 0:
                continue
            t2 = M[b2][a2] * M[b1][a1]
            if t2 < 0:
                continue
            if M[a1][a2] * M[b1][b2] < 0:
                return CheckResult(
                    False, (a1, a2) + shared + (b1, b2),
                    f"3-term relation violated for a=({a1}, {a2}, *{shared}), b=({b1}, {b2})",
                )
    return PASS


def _sampled_tuples(chi: Chirotope) -> Sequence[Tuple_]:
    tuples = chi.tuples()
    if len(tuples) <= PERMUTATION_SAMPLE_LIMIT:
        return tuples
    rng = random.Random(PERMUTATION_SAMPLE_SEED)
    return rng.sample(list(tuples), PERMUTATION_SAMPLE_LIMIT)


def _check_alternating(chi: Chirotope) -> CheckResult:
    for t in _sampled_tuples(chi):
        base = chi.sign_of_sorted(t)
        for perm in permutations(range(chi.r)):
            permuted = tuple(t[i] for i in perm)
            if chi.oriented(permuted) != permutation_sign(perm) * base:
                return CheckResult(False, permuted, "alternating law violated")
    return PASS


def _check_full_exchange(chi: Chirotope) -> CheckResult:
    r, n = chi.r, chi.n
    sign = _OrderedSigns(chi)
    labels = range(1, n + 1)
    # a2..ar and b sorted; both polarities cover every reordering
    b_tuples = list(combinations(labels, r))
    for tail in combinations(labels, r - 1):
        for a1 in labels:
            if a1 in tail:
                continue
            a = (a1,) + tail
            pa = sign(a)
            for b in b_tuples:
                p = pa * sign(b)
                if p == 0:
                    continue
                terms = [
                    sign((b[i],) + tail) * sign(b[:i] + (a1,) + b[i + 1:])
                    for i in range(r)
                ]
                if p < 0 and all(x >= 0 for x in terms):
                    return CheckResult(False, a + b, "exchange axiom violated (all terms >= 0)")
                if p > 0 and all(x <= 0 for x in terms):
                    return CheckResult(False, a + b, "exchange axiom violated (all terms <= 0)")
    return PASS


def verify_axioms(chi: Chirotope, method=Method.THREE_TERM) -> WitnessReport:
    """Check the chirotope axioms; the first violated combination is reported."""
    method = Method(method)
    if chi.is_degenerate:
        status = CheckResult(False, chi.first_zero, "degenerate tuple (sign 0)")
        return WitnessReport(axiom_status=status, method=method.value)

    if method is Method.THREE_TERM:
        status = _check_three_term(chi)
    else:
        if not any(chi.signs):
            status = CheckResult(False, None, "identically zero")
        else:
            status = _check_alternating(chi)
            if status:
                status = _check_full_exchange(chi)

    if not status:
        logger.info("axiom check (%s) failed at %s", method.value, status.counterexample)
    return WitnessReport(axiom_status=status, method=method.value)


# ---------------------------------------------------------------------------
# Acyclicity
# ---------------------------------------------------------------------------
def is_acyclic(chi: Chirotope) -> CheckResult:
    """False with the (r+1)-subset on which some element sits in a fully flipped simplex."""
    chi.require_uniform()
    r = chi.r
    for Q in combinations(range(1, chi.n + 1), r + 1):
        for j, q in enumerate(Q):
            base = Q[:j] + Q[j + 1:]
            s = chi.sign_of_sorted(base)
            if all(chi.oriented(base[:i] + (q,) + base[i + 1:]) == -s for i in range(r)):
                return CheckResult(False, Q, f"designated element {q}")
    return PASS


# ---------------------------------------------------------------------------
# Convexity
# ---------------------------------------------------------------------------
def point_in_simplex(chi: Chirotope, T: Sequence[int], p: int) -> bool:
    chi.require_uniform()
    T = tuple(T)
    if len(T) != chi.r:
        raise ValidationException(f"simplex needs {chi.r} elements, got {T}", field="T")
    if p in T:
        raise ValidationException(f"point {p} belongs to simplex {T}", field="p")
    for i in (*T, p):
        if not 1 <= i <= chi.n:
            raise ChirotopeIndexException(i, chi.n)
    if len(set(T)) != len(T):
        raise ValidationException(f"simplex {T} repeats an index", field="T")
    return _in_simplex(chi, T, p)


def _in_simplex(chi: Chirotope, T: Tuple_, p: int) -> bool:
    base = chi.oriented(T)
    return all(chi.oriented(T[:j] + (p,) + T[j + 1:]) == base for j in range(len(T)))


def subset_in_convex_position(chi: Chirotope, X: Sequence[int]) -> bool:
    chi.require_uniform()
    X = tuple(sorted(X))
    if len(X) <= chi.r:
        return True
    for p in X:
        rest = tuple(q for q in X if q != p)
        for T in combinations(rest, chi.r):
            if _in_simplex(chi, T, p):
                return False
    return True


class _ConvexityIndex:
    """Non-convex (r+1)-subsets and the points inside each r-simplex."""

    def __init__(self, chi: Chirotope):
        r, n = chi.r, chi.n
        self.non_convex: Set[Tuple_] = set()
        for Q in combinations(range(1, n + 1), r + 1):
            for j in range(r + 1):
                if _in_simplex(chi, Q[:j] + Q[j + 1:], Q[j]):
                    self.non_convex.add(Q)
                    break
        self.inside: Dict[Tuple_, FrozenSet[int]] = {}
        for T in combinations(range(1, n + 1), r):
            members = set(T)
            self.inside[T] = frozenset(
                p for p in range(1, n + 1) if p not in members and _in_simplex(chi, T, p)
            )


def _convexity_index(chi: Chirotope) -> _ConvexityIndex:
    index = chi.__dict__.get("_convexity")
    if index is None:
        index = _ConvexityIndex(chi)
        chi.__dict__["_convexity"] = index
    return index


def _convex_subsets(chi: Chirotope, k: int) -> Iterator[Tuple_]:
    """Convex k-subsets in lexicographic order (prefix-closed search)."""
    index = _convexity_index(chi)
    r, n = chi.r, chi.n
    prefix: List[int] = []

    def extend(start: int) -> Iterator[Tuple_]:
        if len(prefix) == k:
            yield tuple(prefix)
            return
        last = n - k + len(prefix) + 1
        for q in range(start, last + 1):
            if len(prefix) >= r and any(
                c + (q,) in index.non_convex for c in combinations(prefix, r)
            ):
                continue
            prefix.append(q)
            yield from extend(q + 1)
            prefix.pop()

    if 1 <= k <= n:
        yield from extend(1)


def find_k_gon(chi: Chirotope, k: int) -> Optional[Tuple_]:
    chi.require_uniform()
    return next(_convex_subsets(chi, k), None)


def find_k_hole(chi: Chirotope, k: int) -> Optional[Tuple_]:
    chi.require_uniform()
    index = _convexity_index(chi)
    for X in _convex_subsets(chi, k):
        if not any(index.inside[T] for T in combinations(X, chi.r)):
            return X
    return None


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------
def _sign_string(signs: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in signs)


def serialize(chi: Chirotope) -> str:
    """``"n r"`` line, then the colex sign string."""
    chi.require_uniform()
    return f"{chi.n} {chi.r}\n{_sign_string(chi.signs)}\n"


def parse(text: str, source: Optional[str] = None) -> Chirotope:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise FormatException(
            f"chirotope text needs a header and a sign line, got {len(lines)} lines", source=source)
    header = lines[0].split()
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise FormatException(f"bad header {lines[0]!r} (expected 'n r')", source=source, line=1)
    n, r = int(header[0]), int(header[1])
    if r < 1 or n < r:
        raise FormatException(f"invalid sizes n={n}, r={r}", source=source, line=1)
    body = lines[1]
    expected = comb(n, r)
    if len(body) != expected:
        raise FormatException(
            f"sign string has length {len(body)}, C({n},{r}) = {expected} required",
            source=source, line=2)
    bad = next((c for c in body if c not in "+-"), None)
    if bad is not None:
        raise FormatException(f"invalid sign character {bad!r}", source=source, line=2)
    return Chirotope(n, r, [1 if c == "+" else -1 for c in body])
