"""Symmetric 3x3 matrices over GF(q): the ambient PG(5,q) of the Veronese surface.

A symmetric matrix is stored as the 6-tuple

    (m11, m22, m33, m12, m13, m23)

of field codes; symmetry is structural.  Projective points of PG(5,q) are
such tuples normalized so the first nonzero coordinate is 1, and points of
PG(2,q) are normalized 3-tuples.  The fixed coordinate order above is used
everywhere downstream (line keys, JSON encodings, census tables).

Every nonzero point falls into one of the classes

    rank 1                     on the Veronese surface (some u x u)
    rank 2, exterior/interior  q odd: the zero set of the quadratic form
                               x^T M x splits into two rational lines
                               (2q+1 projective zeros) or into two
                               conjugate lines (a single zero)
    rank 2, nucleus/other      q even: on the nucleus plane (zero main
                               diagonal) or off it
    rank 3                     everything else

``point_table`` materialises this classification for all of PG(5,q) at
once (q <= 9) so the censuses can label points by table lookup.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from .gf import GF, FieldTooLarge

EXTERIOR = "exterior"
INTERIOR = "interior"
NUCLEUS = "nucleus"
NON_NUCLEUS = "non-nucleus"

CENSUS_MAX_Q = 9


class ZeroMatrix(ValueError):
    """The zero matrix has no projective point class."""


class PointClass(NamedTuple):
    rank: int
    subtype: Optional[str]


def to_rows(m):
    """The full 3x3 matrix (tuple of row tuples) of a coordinate 6-tuple."""
    a, b, c, d, e, f = m
    return ((a, d, e), (d, b, f), (e, f, c))


def from_rows(rows):
    return (rows[0][0], rows[1][1], rows[2][2], rows[0][1], rows[0][2], rows[1][2])


def normalize(vec, fld):
    """Scale so the first nonzero coordinate is 1 (unique projective key)."""
    for c in vec:
        if c:
            if c == 1:
                return tuple(vec)
            s = fld.inv(c)
            return tuple(fld.mul(s, x) for x in vec)
    raise ZeroMatrix("cannot normalize the zero vector")


def veronese(u, fld):
    """The rank-1 symmetric matrix u x u of a point of PG(2,q)."""
    u1, u2, u3 = u
    m = fld.mul
    return (m(u1, u1), m(u2, u2), m(u3, u3), m(u1, u2), m(u1, u3), m(u2, u3))


def pg2_points(fld):
    """All q^2+q+1 normalized points of PG(2,q), ascending by code."""
    key = ("pg2", )
    if key not in fld._cache:
        q = fld.q
        pts = [(1, a, b) for a in range(q) for b in range(q)]
        pts += [(0, 1, b) for b in range(q)]
        pts.append((0, 0, 1))
        pts.sort()
        fld._cache[key] = tuple(pts)
    return fld._cache[key]


def mat_rank(m, fld):
    """Rank of the full 3x3 matrix, by Gaussian elimination over GF(q)."""
    rows = [list(r) for r in to_rows(m)]
    rank = 0
    for col in range(3):
        piv = next((r for r in range(rank, 3) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = fld.inv(rows[rank][col])
        rows[rank] = [fld.mul(inv, x) for x in rows[rank]]
        for r in range(3):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [fld.sub(x, fld.mul(c, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def form_value(m, u, fld):
    """u^T M u; the quadratic form of the matrix (meaningful for q odd)."""
    a, b, c, d, e, f = m
    u1, u2, u3 = u
    mul, add = fld.mul, fld.add
    v = mul(a, mul(u1, u1))
    v = add(v, mul(b, mul(u2, u2)))
    v = add(v, mul(c, mul(u3, u3)))
    two = fld.add(1, 1)
    v = add(v, mul(two, mul(d, mul(u1, u2))))
    v = add(v, mul(two, mul(e, mul(u1, u3))))
    v = add(v, mul(two, mul(f, mul(u2, u3))))
    return v


def projective_zero_count(m, fld):
    """Number of points of PG(2,q) where the quadratic form of m vanishes."""
    return sum(1 for u in pg2_points(fld) if form_value(m, u, fld) == 0)


def on_nucleus_plane(m):
    """q even: the nucleus plane is the plane of zero-diagonal matrices."""
    return m[0] == 0 and m[1] == 0 and m[2] == 0


def point_class(m, fld):
    """Rank plus the rank-2 subtype (see module docstring)."""
    if not any(m):
        raise ZeroMatrix("the zero matrix has no point class")
    memo = fld._cache.setdefault(("point_class",), {})
    key = normalize(m, fld)
    hit = memo.get(key)
    if hit is not None:
        return hit
    rank = mat_rank(key, fld)
    subtype = None
    if rank == 2:
        if fld.p == 2:
            subtype = NUCLEUS if on_nucleus_plane(key) else NON_NUCLEUS
        else:
            zeros = projective_zero_count(key, fld)
            if zeros == 2 * fld.q + 1:
                subtype = EXTERIOR
            elif zeros == 1:
                subtype = INTERIOR
            else:
                raise AssertionError(f"rank-2 form with {zeros} projective zeros")
    pc = PointClass(rank, subtype)
    memo[key] = pc
    return pc


# -- bulk classification of all points of PG(5,q) ---------------------------

class PointTable(NamedTuple):
    """Classification of every projective point of PG(5,q).

    codes     (N,6) uint8, normalized coordinate vectors, ascending by
              little-endian integer encoding
    index     (q^6,) int32, integer encoding -> row in codes (-1 off-table)
    rank      (N,) uint8
    subtype   (N,) uint8: 0 none, 1 exterior|nucleus, 2 interior|non-nucleus
    powers    (6,) int64, the little-endian encoding weights
    """

    codes: np.ndarray
    index: np.ndarray
    rank: np.ndarray
    subtype: np.ndarray
    powers: np.ndarray

    def encode(self, vecs):
        return vecs.astype(np.int64) @ self.powers

    def locate(self, vecs):
        return self.index[self.encode(vecs)]


SUB_NONE, SUB_SPLIT, SUB_NONSPLIT = 0, 1, 2


def _normalize_batch(vecs, t):
    """Projective normalization of nonzero rows of an (N,6) code array."""
    lead = np.argmax(vecs != 0, axis=1)
    pivots = vecs[np.arange(len(vecs)), lead]
    return t.mul[t.inv[pivots][:, None], vecs]


def _rank_batch(vecs, t):
    """Matrix rank of symmetric 6-tuples via minors (agrees with mat_rank)."""
    a, b, c, d, e, f = (vecs[:, i] for i in range(6))
    mul, sub = t.mul, t.sub

    def det2(x, y, z, w):
        return sub[mul[x, w], mul[y, z]]

    # det = a(bc - f^2) - d(dc - ef) + e(df - be)
    det = mul[a, sub[mul[b, c], mul[f, f]]]
    det = t.add[det, t.neg[mul[d, sub[mul[d, c], mul[e, f]]]]]
    det = t.add[det, mul[e, sub[mul[d, f], mul[b, e]]]]
    rows = ((a, d, e), (d, b, f), (e, f, c))
    minor_any = np.zeros(len(vecs), dtype=bool)
    for i1, i2 in ((0, 1), (0, 2), (1, 2)):
        for j1, j2 in ((0, 1), (0, 2), (1, 2)):
            minor_any |= det2(rows[i1][j1], rows[i1][j2], rows[i2][j1], rows[i2][j2]) != 0
    rank = np.where(det != 0, 3, np.where(minor_any, 2, np.where(vecs.any(axis=1), 1, 0)))
    return rank.astype(np.uint8)


def point_table(fld):
    """The PointTable of PG(5,q), cached on the field (q <= 9)."""
    key = ("point_table",)
    if key in fld._cache:
        return fld._cache[key]
    q = fld.q
    if q > CENSUS_MAX_Q:
        raise FieldTooLarge(f"point table needs q <= {CENSUS_MAX_Q}, got q = {q}")
    t = fld.tables
    powers = q ** np.arange(6, dtype=np.int64)
    raw = np.arange(1, q ** 6, dtype=np.int64)
    digits = np.stack([(raw // powers[i]) % q for i in range(6)], axis=1).astype(np.uint8)
    norm = _normalize_batch(digits, t)
    enc = norm.astype(np.int64) @ powers
    codes_enc = np.unique(enc)
    assert len(codes_enc) == (q ** 6 - 1) // (q - 1)
    codes = np.stack([(codes_enc // powers[i]) % q for i in range(6)], axis=1).astype(np.uint8)
    index = np.full(q ** 6, -1, dtype=np.int32)
    index[codes_enc] = np.arange(len(codes_enc), dtype=np.int32)
    rank = _rank_batch(codes, t)
    subtype = np.zeros(len(codes), dtype=np.uint8)
    r2 = rank == 2
    if fld.p == 2:
        nuc = (codes[:, 0] == 0) & (codes[:, 1] == 0) & (codes[:, 2] == 0)
        subtype[r2 & nuc] = SUB_SPLIT
        subtype[r2 & ~nuc] = SUB_NONSPLIT
    else:
        pg2 = np.array(pg2_points(fld), dtype=np.uint8)
        two = fld.add(1, 1)
        w = np.empty((len(pg2), 6), dtype=np.uint8)
        w[:, 0] = t.mul[pg2[:, 0], pg2[:, 0]]
        w[:, 1] = t.mul[pg2[:, 1], pg2[:, 1]]
        w[:, 2] = t.mul[pg2[:, 2], pg2[:, 2]]
        w[:, 3] = t.mul[two, t.mul[pg2[:, 0], pg2[:, 1]]]
        w[:, 4] = t.mul[two, t.mul[pg2[:, 0], pg2[:, 2]]]
        w[:, 5] = t.mul[two, t.mul[pg2[:, 1], pg2[:, 2]]]
        m2 = codes[r2]
        vals = np.zeros((len(m2), len(pg2)), dtype=np.uint8)
        for k in range(6):
            vals = t.add[vals, t.mul[m2[:, k][:, None], w[None, :, k]]]
        zeros = (vals == 0).sum(axis=1)
        ok = (zeros == 2 * q + 1) | (zeros == 1)
        assert ok.all(), "rank-2 form with unexpected projective zero count"
        sub2 = np.where(zeros == 2 * q + 1, SUB_SPLIT, SUB_NONSPLIT).astype(np.uint8)
        subtype[r2] = sub2
    table = PointTable(codes, index, rank, subtype, powers)
    fld._cache[key] = table
    return table


def point_census(fld):
    """Point counts of PG(5,q) by class (exhaustive, q <= 9).

    Returns a dict with keys 'rank1', 'rank3' and either 'exterior' and
    'interior' (q odd) or 'nucleus' and 'non_nucleus' (q even).
    """
    table = point_table(fld)
    counts = {"rank1": int((table.rank == 1).sum()),
              "rank3": int((table.rank == 3).sum())}
    split = int((table.subtype == SUB_SPLIT).sum())
    nonsplit = int((table.subtype == SUB_NONSPLIT).sum())
    if fld.p == 2:
        counts["nucleus"] = split
        counts["non_nucleus"] = nonsplit
    else:
        counts["exterior"] = split
        counts["interior"] = nonsplit
    return counts
