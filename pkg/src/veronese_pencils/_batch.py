"""Vectorised kernels for the exhaustive censuses.

Everything here works on numpy arrays of field codes and indexes into the
field's lookup tables; no floating point anywhere.  Lines are (N, 2, 6)
arrays of RREF keys in the fixed symspace coordinate order, generated in a
deterministic order (pivot-column pairs ascending, free digits ascending),
so censuses are reproducible bit for bit.

The decision tree in ``label_block`` mirrors classify._classify_profile
branch for branch; the two are asserted equal line-by-line in the tests.
"""

from __future__ import annotations

import numpy as np

from .classify import ClassLabel, all_labels
from .pencil import common_radical, Pencil
from .symspace import SUB_SPLIT, point_table

SYM_IDX = ((0, 3, 4), (3, 1, 5), (4, 5, 2))
PERMS = ((0, (0, 1, 2)), (1, (0, 2, 1)), (1, (1, 0, 2)),
         (0, (1, 2, 0)), (0, (2, 0, 1)), (1, (2, 1, 0)))


def line_blocks(fld, max_rows=1 << 20):
    """Yield every line of PG(5,q) exactly once as RREF key blocks."""
    q = fld.q
    for i in range(6):
        for j in range(i + 1, 6):
            free1 = [k for k in range(i + 1, 6) if k != j]
            free2 = list(range(j + 1, 6))
            slots = [(0, k) for k in free1] + [(1, k) for k in free2]
            total = q ** len(slots)
            for start in range(0, total, max_rows):
                stop = min(start + max_rows, total)
                raw = np.arange(start, stop, dtype=np.int64)
                rows = np.zeros((stop - start, 2, 6), dtype=np.uint8)
                rows[:, 0, i] = 1
                rows[:, 1, j] = 1
                for s, (r, k) in enumerate(slots):
                    rows[:, r, k] = (raw // q ** s) % q
                yield rows


def normalize_block(vecs, t):
    """Projective normalization of the rows of an (N, 6) code array."""
    lead = np.argmax(vecs != 0, axis=1)
    pivots = vecs[np.arange(len(vecs)), lead]
    return t.mul[t.inv[pivots][:, None], vecs]


def rref_block(rows, t):
    """RREF keys of (N, 2, 6) independent row pairs."""
    r1 = rows[:, 0, :].copy()
    r2 = rows[:, 1, :].copy()
    lead1 = np.argmax(r1 != 0, axis=1)
    lead2 = np.argmax(r2 != 0, axis=1)
    swap = lead2 < lead1
    r1[swap], r2[swap] = r2[swap], r1[swap].copy()
    n = np.arange(len(r1))
    lead1 = np.argmax(r1 != 0, axis=1)
    r1 = t.mul[t.inv[r1[n, lead1]][:, None], r1]
    r2 = t.sub[r2, t.mul[r2[n, lead1][:, None], r1]]
    lead2 = np.argmax(r2 != 0, axis=1)
    r2 = t.mul[t.inv[r2[n, lead2]][:, None], r2]
    r1 = t.sub[r1, t.mul[r1[n, lead2][:, None], r2]]
    return np.stack([r1, r2], axis=1)


def encode_lines(rows, q):
    """Line keys as base-q integers of the 12 key digits."""
    flat = rows.reshape(len(rows), 12).astype(np.int64)
    powers = q ** np.arange(12, dtype=np.int64)
    return flat @ powers


def apply_rep(rep, rows, t):
    """Apply a 6x6 coordinate representation to both basis rows."""
    out = np.zeros_like(rows)
    for i in range(6):
        acc = np.zeros(rows.shape[:2], dtype=np.uint8)
        for j in range(6):
            c = rep[i][j]
            if c:
                acc = t.add[acc, t.mul[c, rows[:, :, j]]]
        out[:, :, i] = acc
    return out


def line_point_ids(rows, fld):
    """Point-table ids of the q+1 points of each line, in points_on order."""
    t = fld.tables
    pt = point_table(fld)
    q = fld.q
    n = len(rows)
    r1 = rows[:, 0, :]
    r2 = rows[:, 1, :]
    ids = np.empty((n, q + 1), dtype=np.int32)
    for lam in range(q):
        vec = t.add[r1, t.mul[lam, r2]] if lam else r1
        ids[:, lam] = pt.locate(normalize_block(vec, t))
    ids[:, q] = pt.locate(r2)
    return ids


def det_cubic_block(rows, t):
    """Coefficients (c0..c3) of det(xA + yB) for each line."""
    a6 = rows[:, 0, :]
    b6 = rows[:, 1, :]
    n = len(rows)
    coeffs = [np.zeros(n, dtype=np.uint8) for _ in range(4)]
    for sign, perm in PERMS:
        term = [np.ones(n, dtype=np.uint8)]
        for i in range(3):
            col = SYM_IDX[i][perm[i]]
            ai = a6[:, col]
            bi = b6[:, col]
            new = [np.zeros(n, dtype=np.uint8) for _ in range(len(term) + 1)]
            for k in range(len(term)):
                new[k] = t.add[new[k], t.mul[term[k], ai]]
                new[k + 1] = t.add[new[k + 1], t.mul[term[k], bi]]
            term = new
        for k in range(4):
            coeffs[k] = t.sub[coeffs[k], term[k]] if sign else t.add[coeffs[k], term[k]]
    return coeffs


def _root_is_multiple(coeffs, pos, q, t):
    """Whether the det-cubic root at point index pos has multiplicity >= 2.

    pos < q is the root (1 : lam) with lam = pos-th field code; pos == q
    is (0 : 1).  Assumes pos really is a root.
    """
    c0, c1, c2, c3 = coeffs
    at_inf = pos == q
    lam = pos.astype(np.uint8)
    lam[at_inf] = 0
    b2 = c3
    b1 = t.add[c2, t.mul[lam, b2]]
    b0 = t.add[c1, t.mul[lam, b1]]
    g_fin = t.add[b0, t.add[t.mul[lam, b1], t.mul[t.mul[lam, lam], b2]]]
    return np.where(at_inf, c2 == 0, g_fin == 0)


def label_block(rows, fld):
    """Class labels (indices into all_labels(fld)) for a block of lines."""
    q = fld.q
    even = q % 2 == 0
    t = fld.tables
    pt = point_table(fld)
    labels = all_labels(fld)
    lab_idx = {lab: k for k, lab in enumerate(labels)}
    ids = line_point_ids(rows, fld)
    ranks = pt.rank[ids]
    subs = pt.subtype[ids]
    a1 = (ranks == 1).sum(axis=1)
    a2 = (ranks == 2).sum(axis=1)
    a3 = (ranks == 3).sum(axis=1)
    split_count = ((subs == SUB_SPLIT) & (ranks == 2)).sum(axis=1)
    out = np.full(len(rows), -1, dtype=np.int8)
    n = np.arange(len(rows))

    def lab(orbit, extra=False):
        return lab_idx[ClassLabel(orbit, extra)]

    def radical_mask(sel):
        hit = np.zeros(int(sel.sum()), dtype=bool)
        for w, k in enumerate(np.flatnonzero(sel)):
            line = Pencil((tuple(int(x) for x in rows[k, 0]),
                           tuple(int(x) for x in rows[k, 1])))
            hit[w] = common_radical(line, fld) is not None
        return hit

    out[(a1 == 2) & (a3 == 0)] = lab(5)
    out[(a1 == 1) & (a2 == q)] = lab(6)
    out[(a1 == 1) & (a2 == 0)] = lab(9)
    out[a3 == q + 1] = lab(17)

    sel = (a1 == 1) & (a2 == 1)
    if sel.any():
        pos = np.argmax(ranks[sel] == 2, axis=1)
        is_split = subs[sel][np.arange(int(sel.sum())), pos] == SUB_SPLIT
        if even:
            extra = is_split  # nucleus-plane point
        else:
            extra = is_split != (q % 4 == 1)
        out[sel] = np.where(extra, lab(8, True), lab(8))

    # [0,q+1,0]; at q = 2 this same pattern also covers [0,3,q-2] = [0,3,0]
    sel = (a1 == 0) & (a2 == q + 1)
    if sel.any():
        rad = radical_mask(sel)
        sub = np.full(int(sel.sum()), -1, dtype=np.int8)
        sub[rad] = lab(10)
        if even:
            nuc = split_count[sel]
            sub[~rad & (nuc == q + 1)] = lab(12)
            sub[~rad & (nuc == 1)] = lab(12, True)
            if q == 2:
                sub[~rad & (nuc == 0)] = lab(14)
        else:
            sub[~rad] = lab(12)
        out[sel] = sub

    sel = (a1 == 0) & (a2 == 2) & (a3 == q - 1)
    if sel.any():
        coeffs = det_cubic_block(rows[sel], t)
        rsel = ranks[sel] == 2
        m = int(sel.sum())
        pos1 = np.argmax(rsel, axis=1)
        tmp = rsel.copy()
        tmp[np.arange(m), pos1] = False
        pos2 = np.argmax(tmp, axis=1)
        dbl1 = _root_is_multiple(coeffs, pos1, q, t)
        dbl_pos = np.where(dbl1, pos1, pos2)
        if even:
            nuc = split_count[sel]
            out[sel] = np.where(nuc == 1, lab(13), lab(13, True))
        else:
            is_split = subs[sel][np.arange(m), dbl_pos] == SUB_SPLIT
            extra = is_split != (q % 4 == 1)
            out[sel] = np.where(extra, lab(13, True), lab(13))

    if q > 2:
        sel = (a1 == 0) & (a2 == 3) & (a3 == q - 2)
        if sel.any():
            if even:
                out[sel] = lab(14)
            else:
                ext = split_count[sel]
                out[sel] = np.where(ext == 3, lab(14, q % 4 != 1), lab(14, q % 4 == 1))

    sel = (a1 == 0) & (a2 == 1)
    if sel.any():
        coeffs = det_cubic_block(rows[sel], t)
        m = int(sel.sum())
        pos = np.argmax(ranks[sel] == 2, axis=1)
        triple = _root_is_multiple(coeffs, pos, q, t)
        is_split = subs[sel][np.arange(m), pos] == SUB_SPLIT
        if even:
            o16 = np.where(is_split, lab(16), lab(16, True))
            o15 = np.full(m, lab(15), dtype=np.int8)
        else:
            o16 = np.full(m, lab(16), dtype=np.int8)
            o15 = np.where(is_split, lab(15), lab(15, True))
        out[sel] = np.where(triple, o16, o15)

    if (out < 0).any():
        k = int(np.flatnonzero(out < 0)[0])
        raise AssertionError(
            f"unclassifiable line {rows[k].tolist()} with distribution "
            f"[{a1[k]},{a2[k]},{a3[k]}] over GF({q})")
    return out
