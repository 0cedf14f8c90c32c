"""
geometry.py – exact orientation predicates on integer point sets
================================================================

Points carry arbitrary-precision integer coordinates; every sign comes from
a fraction-free determinant, never from floating point.  Labels are 1..n in
input order.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from chirosat.chirotope import Chirotope, colex_tuples
from chirosat.core.exceptions import DegeneracyException, ValidationException
from chirosat.core.logger import get_logger
from chirosat.models.schemas import Mode

logger = get_logger(__name__)

Point = Tuple[int, ...]


@dataclass(frozen=True)
class PointSet:
    d: int
    points: Tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(tuple(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not isinstance(self.d, int) or self.d < 2:
            raise ValidationException(f"dimension must be at least 2, got {self.d!r}", field="d")
        if not pts:
            raise ValidationException("point set is empty", field="points")
        for i, p in enumerate(pts, start=1):
            if len(p) != self.d:
                raise ValidationException(
                    f"point {i} has {len(p)} coordinates, expected {self.d}", field="points")
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in p):
                raise ValidationException(f"point {i} has non-integer coordinates", field="points")

    @classmethod
    def of(cls, points: Iterable[Sequence[int]]) -> "PointSet":
        pts = [tuple(p) for p in points]
        if not pts:
            raise ValidationException("point set is empty", field="points")
        return cls(len(pts[0]), tuple(pts))

    @property
    def n(self) -> int:
        return len(self.points)

    def point(self, label: int) -> Point:
        return self.points[label - 1]

    def subset(self, labels: Sequence[int]) -> List[Point]:
        return [self.points[i - 1] for i in labels]


# ---------------------------------------------------------------------------
# Exact determinant
# ---------------------------------------------------------------------------
def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free elimination; exact for Python ints."""
    m = [list(r) for r in rows]
    size = len(m)
    if size == 0:
        return 1
    if any(len(r) != size for r in m):
        raise ValidationException("determinant needs a square matrix", field="matrix")
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, size):
            row_i, lead = m[i], m[i][k]
            row_k = m[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
        prev = pivot
    return sign * m[-1][-1]


def orientation(points: Sequence[Sequence[int]]) -> int:
    """Sign of det [[1, *p_0], ..., [1, *p_d]] for d+1 points in R^d."""
    if not points:
        raise ValidationException("orientation needs at least one point", field="points")
    d = len(points[0])
    if len(points) != d + 1:
        raise ValidationException(
            f"orientation needs d+1={d + 1} points of dimension {d}, got {len(points)}", field="points")
    if any(len(p) != d for p in points):
        raise ValidationException("points of mixed dimension", field="points")
    det = determinant([[1, *p] for p in points])
    return (det > 0) - (det < 0)


def find_degenerate_tuple(S: PointSet) -> Optional[Tuple[int, ...]]:
    """First (colex order) (d+1)-tuple of labels with orientation 0."""
    for t in colex_tuples(S.n, S.d + 1):
        if orientation(S.subset(t)) == 0:
            return t
    return None


def chirotope_from_points(S: PointSet, require_general_position: bool = True) -> Chirotope:
    """chi_S(i_0..i_d) = orientation(p_{i_0}, ..., p_{i_d}) on every sorted tuple."""
    r = S.d + 1
    if S.n < r:
        raise ValidationException(f"need at least d+1={r} points, got {S.n}", field="points")
    signs = []
    for t in colex_tuples(S.n, r):
        s = orientation(S.subset(t))
        if s == 0 and require_general_position:
            raise DegeneracyException(t)
        signs.append(s)
    return Chirotope(S.n, r, tuple(signs), allow_degenerate=not require_general_position)


# ---------------------------------------------------------------------------
# Geometric gon / hole oracle
# ---------------------------------------------------------------------------
class _Orientations:
    """Memoised orientation of ordered label tuples of one point set."""

    def __init__(self, S: PointSet):
        self.S = S
        self._cache: Dict[Tuple[int, ...], int] = {}

    def __call__(self, labels: Tuple[int, ...]) -> int:
        value = self._cache.get(labels)
        if value is None:
            value = orientation(self.S.subset(labels))
            self._cache[labels] = value
        return value

    def in_simplex(self, T: Tuple[int, ...], p: int) -> bool:
        base = self(T)
        for j in range(len(T)):
            if self(T[:j] + (p,) + T[j + 1:]) != base:
                return False
        return True


def _convex(orient: _Orientations, X: Tuple[int, ...], d: int) -> bool:
    for p in X:
        rest = tuple(q for q in X if q != p)
        for T in combinations(rest, d + 1):
            if orient.in_simplex(T, p):
                return False
    return True


def _empty(orient: _Orientations, X: Tuple[int, ...], S: PointSet) -> bool:
    if len(X) < S.d + 1:
        return True
    members = set(X)
    for p in range(1, S.n + 1):
        if p in members:
            continue
        for T in combinations(X, S.d + 1):
            if orient.in_simplex(T, p):
                return False
    return True


def geometric_scan(S: PointSet, k: int, mode) -> Optional[Tuple[int, ...]]:
    """
    First k-subset (lexicographic) in convex position, additionally empty when
    ``mode`` is hole, decided from coordinates alone.
    """
    mode = Mode(mode)
    if mode is Mode.HULL_FRAME_HOLE:
        raise ValidationException("geometric_scan supports gon and hole only", field="mode")
    if k < 3:
        raise ValidationException(f"k must be at least 3, got {k}", field="k")
    bad = find_degenerate_tuple(S) if S.n >= S.d + 1 else None
    if bad is not None:
        raise DegeneracyException(bad)

    orient = _Orientations(S)
    for X in combinations(range(1, S.n + 1), k):
        if not _convex(orient, X, S.d):
            continue
        if mode is Mode.HOLE and not _empty(orient, X, S):
            continue
        logger.debug("geometric %s-%s witness %s", k, mode.value, X)
        return X
    return None
