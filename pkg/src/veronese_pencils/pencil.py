"""Pencils: lines of PG(5,q) spanned by two symmetric 3x3 matrices.

A pencil is keyed by the reduced row echelon form of the 2x6 matrix of
its basis coordinates (fixed coordinate order of the symspace module).
RREF keys are unique per line, cheap to compute and hashable, so they act
as a perfect hash during the censuses.  The stored ordered basis is the
two key rows.

On top of the raw line we compute the congruence invariants that drive
the classification:

  * the rank distribution [a1, a2, a3] over the q+1 points,
  * the determinant cubic det(xA + yB) with its rational roots and their
    multiplicities (expanded symbolically; interpolation would need four
    evaluation points, but PG(1,2) only has three),
  * the common radical, a nonzero vector killed by the whole pencil,
  * the point classes of the rank-2 points.

Multiplicities are obtained by repeated division by the linear form of
the root; gcd-with-derivative tricks are unreliable in characteristic 2
and 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from .symspace import (EXTERIOR, PointClass, mat_rank, normalize,
                       on_nucleus_plane, point_class, to_rows)


class DependentBasis(ValueError):
    """The two spanning matrices are projectively equal."""


SymMat = Tuple[int, int, int, int, int, int]


class RankDist(NamedTuple):
    a1: int
    a2: int
    a3: int


@dataclass(frozen=True)
class Pencil:
    """A line of PG(5,q); ``key`` is the RREF basis, rows (a, b)."""

    key: Tuple[SymMat, SymMat]

    @property
    def a(self):
        return self.key[0]

    @property
    def b(self):
        return self.key[1]


@dataclass(frozen=True)
class DetCubic:
    """det(xA + yB) = c0 x^3 + c1 x^2 y + c2 x y^2 + c3 y^3.

    ``roots`` lists the projective GF(q)-roots (x0, y0) with their
    multiplicities, roots normalized and ascending.
    """

    coeffs: Tuple[int, int, int, int]
    roots: Tuple[Tuple[Tuple[int, int], int], ...]
    identically_zero: bool


@dataclass(frozen=True)
class InvariantProfile:
    """Everything the decision tree looks at, for one pencil.

    rank2_points pairs each rank-2 point with its class and the
    multiplicity of the matching det-cubic root (0 if the cubic vanishes
    identically).  ext_count is None for q even, nucleus_count None for
    q odd, q_mod4 set only for q odd.
    """

    dist: RankDist
    has_common_radical: bool
    rank2_points: Tuple[Tuple[SymMat, PointClass, int], ...]
    ext_count: Optional[int]
    nucleus_count: Optional[int]
    q_mod4: Optional[int]


def _rref2(a, b, fld):
    rows = [list(a), list(b)]
    lead = [next((i for i, x in enumerate(r) if x), 6) for r in rows]
    if lead[1] < lead[0]:
        rows.reverse()
        lead.reverse()
    p1 = lead[0]
    if p1 == 6:
        raise DependentBasis("zero matrix in basis")
    inv = fld.inv(rows[0][p1])
    rows[0] = [fld.mul(inv, x) for x in rows[0]]
    c = rows[1][p1]
    if c:
        rows[1] = [fld.sub(x, fld.mul(c, y)) for x, y in zip(rows[1], rows[0])]
    p2 = next((i for i, x in enumerate(rows[1]) if x), 6)
    if p2 == 6:
        raise DependentBasis("basis matrices span a point, not a line")
    inv = fld.inv(rows[1][p2])
    rows[1] = [fld.mul(inv, x) for x in rows[1]]
    c = rows[0][p2]
    if c:
        rows[0] = [fld.sub(x, fld.mul(c, y)) for x, y in zip(rows[0], rows[1])]
    return tuple(rows[0]), tuple(rows[1])


def make_pencil(a, b, fld):
    """The line spanned by two independent symmetric matrices."""
    return Pencil(_rref2(a, b, fld))


def points_on(p, fld):
    """One matrix per projective point: A + t B for each t, then B."""
    a, b = p.key
    pts = []
    for t in fld.elements():
        pts.append(tuple(fld.add(x, fld.mul(t, y)) for x, y in zip(a, b)))
    pts.append(b)
    return pts


def rank_distribution(p, fld):
    counts = [0, 0, 0, 0]
    for m in points_on(p, fld):
        counts[mat_rank(m, fld)] += 1
    assert counts[0] == 0
    return RankDist(counts[1], counts[2], counts[3])


def _det_poly(p, fld):
    """Coefficients of det(xA + yB) via the 6-term Leibniz expansion."""
    arows, brows = to_rows(p.a), to_rows(p.b)
    mul, add, sub = fld.mul, fld.add, fld.sub
    coeffs = [0, 0, 0, 0]
    for sign, perm in ((0, (0, 1, 2)), (1, (0, 2, 1)), (1, (1, 0, 2)),
                       (0, (1, 2, 0)), (0, (2, 0, 1)), (1, (2, 1, 0))):
        term = [1, 0]  # linear-form product, coefficients of (x, y)
        deg = 0
        for i in range(3):
            ax, by = arows[i][perm[i]], brows[i][perm[i]]
            new = [0] * (deg + 2)
            for k in range(deg + 1):
                if term[k]:
                    new[k] = add(new[k], mul(term[k], ax))
                    new[k + 1] = add(new[k + 1], mul(term[k], by))
            term, deg = new, deg + 1
        for k in range(4):
            coeffs[k] = sub(coeffs[k], term[k]) if sign else add(coeffs[k], term[k])
    return tuple(coeffs)


def _divide_linear(coeffs, root, fld):
    """Divide a binary form by the linear form of a projective root.

    Returns (quotient coefficients, remainder); remainder 0 iff the root
    really is a root.  Degree drops by one.
    """
    x0, y0 = root
    # coeffs ascend in y-degree: c[k] multiplies x^(d-k) y^k
    d = len(coeffs) - 1
    if x0 == 0:
        # root (0:1): divisible by x  <=>  c[d] == 0
        return tuple(coeffs[:d]), coeffs[d]
    # root (1:t): divide by (y - t x)
    t = y0
    quot = [0] * d
    quot[d - 1] = coeffs[d]
    for k in range(d - 2, -1, -1):
        quot[k] = fld.add(coeffs[k + 1], fld.mul(t, quot[k + 1]))
    rem = fld.add(coeffs[0], fld.mul(t, quot[0]))
    return tuple(quot), rem


def _eval_form(coeffs, x, y, fld):
    d = len(coeffs) - 1
    acc = 0
    xp = [1]
    yp = [1]
    for _ in range(d):
        xp.append(fld.mul(xp[-1], x))
        yp.append(fld.mul(yp[-1], y))
    for k, c in enumerate(coeffs):
        acc = fld.add(acc, fld.mul(c, fld.mul(xp[d - k], yp[k])))
    return acc


def det_cubic(p, fld):
    """The determinant cubic with its rational root structure."""
    coeffs = _det_poly(p, fld)
    if not any(coeffs):
        cubic = DetCubic(coeffs, (), True)
    else:
        roots = []
        for pt in [(1, t) for t in fld.elements()] + [(0, 1)]:
            if _eval_form(coeffs, pt[0], pt[1], fld) == 0:
                mult = 0
                rest = coeffs
                while len(rest) > 1:
                    quot, rem = _divide_linear(rest, pt, fld)
                    if rem != 0:
                        break
                    mult += 1
                    rest = quot
                roots.append((pt, mult))
        cubic = DetCubic(coeffs, tuple(sorted(roots)), False)
    _check_roots_against_ranks(p, cubic, fld)
    return cubic


def _check_roots_against_ranks(p, cubic, fld):
    # every rational root is a point of rank <= 2 and conversely
    a, b = p.key
    roots = {r for r, _ in cubic.roots}
    for pt in [(1, t) for t in fld.elements()] + [(0, 1)]:
        m = tuple(fld.add(fld.mul(pt[0], x), fld.mul(pt[1], y)) for x, y in zip(a, b))
        low = mat_rank(m, fld) <= 2
        hit = cubic.identically_zero or pt in roots
        assert low == hit, f"det-cubic roots disagree with ranks at {pt}"


def _param_point(p, pt, fld):
    a, b = p.key
    return tuple(fld.add(fld.mul(pt[0], x), fld.mul(pt[1], y)) for x, y in zip(a, b))


def common_radical(p, fld):
    """A nonzero vector v with Av = Bv = 0, or None.

    Unique up to scalar when it exists: the pencil is nonzero, so its
    joint kernel has dimension at most one.
    """
    rows = [list(r) for r in to_rows(p.a)] + [list(r) for r in to_rows(p.b)]
    rank = 0
    pivots = []
    for col in range(3):
        piv = next((r for r in range(rank, 6) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = fld.inv(rows[rank][col])
        rows[rank] = [fld.mul(inv, x) for x in rows[rank]]
        for r in range(6):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [fld.sub(x, fld.mul(c, y)) for x, y in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    if rank == 3:
        return None
    free = next(c for c in range(3) if c not in pivots)
    v = [0, 0, 0]
    v[free] = 1
    for r, col in enumerate(pivots):
        v[col] = fld.neg(rows[r][free])
    return tuple(v)


def invariant_profile(p, fld):
    """The aggregated congruence invariants of a pencil."""
    q = fld.q
    cubic = det_cubic(p, fld)
    mult_at = dict(cubic.roots)
    counts = [0, 0, 0, 0]
    rank2 = []
    nucleus_count = 0
    params = [(1, t) for t in fld.elements()] + [(0, 1)]
    for pt in params:
        m = _param_point(p, pt, fld)
        r = mat_rank(m, fld)
        counts[r] += 1
        if fld.p == 2 and on_nucleus_plane(m):
            nucleus_count += 1
        if r == 2:
            mult = 0 if cubic.identically_zero else mult_at[pt]
            rank2.append((normalize(m, fld), point_class(m, fld), mult))
    rank2.sort(key=lambda item: item[0])
    dist = RankDist(counts[1], counts[2], counts[3])
    radical = common_radical(p, fld)
    if radical is not None:
        assert dist.a3 == 0, "a pencil with a common radical has no rank-3 point"
    odd = fld.p != 2
    ext = sum(1 for _, pc, _ in rank2 if pc.subtype == EXTERIOR) if odd else None
    return InvariantProfile(
        dist=dist,
        has_common_radical=radical is not None,
        rank2_points=tuple(rank2),
        ext_count=ext,
        nucleus_count=None if odd else nucleus_count,
        q_mod4=q % 4 if odd else None,
    )
