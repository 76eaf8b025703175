"""The fifteen congruence classes of pencils and their invariant decision tree.

Lines of PG(5,q) in the span of the Veronese surface fall into 15 classes
under PGL(3,q) acting by M -> D M D^T.  Classes are named after the tensor
orbits o5..o17 they come from, with a ``Common`` member for every q and an
``Extra`` member where the tensor orbit splits:

    q odd:   o8, o13, o14, o15 split
    q even:  o8, o12, o13, o16 split

``classify`` assigns the class from the invariant profile alone (no group
search), so it is total on lines and cheap enough for full censuses.  The
branch logic:

  rank distribution [2,q-1,0] -> o5,   [1,q,0] -> o6,   [1,0,q] -> o9,
  [0,0,q+1] -> o17.
  [1,1,q-1] -> o8; q odd: Common iff the rank-2 point is exterior exactly
      when q = 1 mod 4; q even: Extra iff it is on the nucleus plane.
  [0,q+1,0] -> o10 when the pencil has a common radical (the line lies in
      a conic plane), else o12; q even: Common iff the whole line is on
      the nucleus plane, Extra iff it meets it in one point.
  [0,2,q-1] -> o13, split by the type of the rank-2 point whose det-cubic
      root is double (odd: exterior ~ q mod 4 as for o8; even: Common iff
      that line meets the nucleus plane).
  [0,3,q-2] -> o14; q odd: Common iff there are three exterior points
      exactly when q = 1 mod 4.
  [0,1,q]  -> o16 when the det-cubic root at the rank-2 point is triple,
      else o15; variants by exterior / nucleus-plane type of that point.
  at q = 2 the patterns [0,q+1,0] and [0,3,q-2] coincide as [0,3,0]; a
      common radical still means o10, and nucleus-plane counts 3 / 1 / 0
      separate o12 Common / o12 Extra / o14.

Canonical representatives, stabiliser orders and class sizes reproduce the
published classification tables; free parameters are pinned by smallest-
code searches so representatives are identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .gf import GF
from .pencil import Pencil, invariant_profile, make_pencil
from .symspace import EXTERIOR, INTERIOR, NUCLEUS

TENSOR_ORBITS = (5, 6, 8, 9, 10, 12, 13, 14, 15, 16, 17)
EXTRA_ODD = frozenset({8, 13, 14, 15})
EXTRA_EVEN = frozenset({8, 12, 13, 16})


class NoParams(ValueError):
    """No admissible canonical parameters exist (signals a bug upstream)."""


class InvalidLabelForField(ValueError):
    """The label does not exist for the parity of q."""


class UnclassifiableProfile(AssertionError):
    """An invariant profile outside the decision tree (internal error)."""


@dataclass(frozen=True, order=True)
class ClassLabel:
    """One of the 15 classes: tensor orbit number plus Common/Extra flag."""

    orbit: int
    extra: bool = False

    @property
    def text(self):
        return f"o{self.orbit}x" if self.extra else f"o{self.orbit}"

    def __str__(self):
        return self.text


def parse_label(text):
    t = text.strip().lower()
    extra = t.endswith("x")
    if extra:
        t = t[:-1]
    if not t.startswith("o"):
        raise ValueError(f"bad class label {text!r}")
    orbit = int(t[1:])
    if orbit not in TENSOR_ORBITS:
        raise ValueError(f"bad class label {text!r}")
    return ClassLabel(orbit, extra)


def _extra_orbits(q):
    return EXTRA_EVEN if q % 2 == 0 else EXTRA_ODD


def all_labels(fld):
    """The 15 valid labels for this field, ascending by (orbit, variant)."""
    labels = []
    for orbit in TENSOR_ORBITS:
        labels.append(ClassLabel(orbit))
        if orbit in _extra_orbits(fld.q):
            labels.append(ClassLabel(orbit, True))
    return labels


def _require_valid(label, q):
    if label.orbit not in TENSOR_ORBITS:
        raise InvalidLabelForField(f"unknown tensor orbit o{label.orbit}")
    if label.extra and label.orbit not in _extra_orbits(q):
        parity = "even" if q % 2 == 0 else "odd"
        raise InvalidLabelForField(f"{label.text} does not split for q {parity}")


# -- canonical parameters ----------------------------------------------------

def condition_star(u, v, fld):
    """v != 0 and v*t^2 + u*v*t - 1 has no root in GF(q).

    The published condition omits v != 0, but v = 0 degenerates the
    representatives that use it (a rank-1 point appears), so we read the
    condition as requiring an irreducible quadratic.
    """
    if v == 0:
        return False
    one = 1
    for t in fld.elements():
        val = fld.mul(v, fld.mul(t, t))
        val = fld.add(val, fld.mul(fld.mul(u, v), t))
        val = fld.sub(val, one)
        if val == 0:
            return False
    return True


def condition_double_star(alpha, beta, gamma, fld):
    """t^3 + gamma*t^2 - beta*t + alpha has no root in GF(q)."""
    for t in fld.elements():
        val = fld.mul(t, fld.mul(t, t))
        val = fld.add(val, fld.mul(gamma, fld.mul(t, t)))
        val = fld.sub(val, fld.mul(beta, t))
        val = fld.add(val, alpha)
        if val == 0:
            return False
    return True


@dataclass(frozen=True)
class CanonicalParams:
    """Free parameters of a canonical representative (unused ones None)."""

    gamma: Optional[int] = None
    u: Optional[int] = None
    v: Optional[int] = None
    alpha: Optional[int] = None
    beta: Optional[int] = None


def find_params(label, fld):
    """Deterministic smallest-code parameters for the representative.

    o8/o13/o14 Extra take the smallest non-square; o10 and o15 scan (u, v)
    pairs ascending (u outer) for condition (*) plus the square class of
    -v that the o15 variant needs; o17 scans rootless cubics by smallest
    (gamma, beta, alpha).
    """
    _require_valid(label, fld.q)
    orbit, extra = label.orbit, label.extra
    if orbit in (8, 13, 14) and extra and fld.q % 2 == 1:
        return CanonicalParams(gamma=fld.nonsquare())
    if orbit == 10:
        for u in fld.elements():
            for v in fld.elements():
                if condition_star(u, v, fld):
                    return CanonicalParams(u=u, v=v)
        raise NoParams(f"no (u, v) with condition (*) over GF({fld.q})")
    if orbit == 15:
        want_square = not extra
        for u in fld.elements():
            for v in fld.elements():
                if condition_star(u, v, fld) and fld.is_square(fld.neg(v)) == want_square:
                    return CanonicalParams(u=u, v=v)
        raise NoParams(f"no o15 parameters with -v square={want_square} over GF({fld.q})")
    if orbit == 17:
        for gamma in fld.elements():
            for beta in fld.elements():
                for alpha in fld.elements():
                    if condition_double_star(alpha, beta, gamma, fld):
                        return CanonicalParams(alpha=alpha, beta=beta, gamma=gamma)
        raise NoParams(f"no rootless cubic over GF({fld.q})")
    return CanonicalParams()


def _rep_basis(label, fld):
    """The (A, B) coordinate pair of the published representative."""
    _require_valid(label, fld.q)
    orbit, extra = label.orbit, label.extra
    even = fld.q % 2 == 0
    par = find_params(label, fld)
    g = par.gamma
    if orbit == 5:
        return (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)
    if orbit == 6:
        return (1, 0, 0, 0, 0, 0), (0, 0, 0, 1, 0, 0)
    if orbit == 8:
        if extra and even:
            return (1, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 1)
        if extra:
            return (1, 0, 0, 0, 0, 0), (0, 1, g, 0, 0, 0)
        return (1, 0, 0, 0, 0, 0), (0, 1, 1, 0, 0, 0)
    if orbit == 9:
        return (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 1, 0)
    if orbit == 10:
        return (par.v, 1, 0, 0, 0, 0), (0, par.u, 0, 1, 0, 0)
    if orbit == 12:
        if extra:
            return (0, 1, 0, 1, 0, 0), (0, 1, 0, 0, 0, 1)
        return (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 1)
    if orbit == 13:
        if extra and even:
            return (0, 1, 0, 1, 0, 0), (0, 1, 1, 0, 0, 0)
        if extra:
            return (0, 0, 0, 1, 0, 0), (0, 1, g, 0, 0, 0)
        return (0, 0, 0, 1, 0, 0), (0, 1, 1, 0, 0, 0)
    if orbit == 14:
        if extra:
            return (1, g, 0, 0, 0, 0), (0, g, 1, 0, 0, 0)
        return (1, 1, 0, 0, 0, 0), (0, 1, 1, 0, 0, 0)
    if orbit == 15:
        return (0, par.u, 1, 1, 0, 0), (par.v, 1, 0, 0, 0, 0)
    if orbit == 16:
        if extra:
            return (0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1)
        return (0, 1, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)
    # o17: x part rows (1/alpha, 0, 0 / 0, -gamma, 1 / 0, 1, 0),
    #      y part rows (0, 1, 0 / 1, beta, 0 / 0, 0, 1)
    a_inv = fld.inv(par.alpha)
    return ((a_inv, fld.neg(par.gamma), 0, 0, 0, 1),
            (0, par.beta, 1, 1, 0, 0))


def canonical_rep(label, fld):
    """The canonical pencil of a class (as a keyed Pencil)."""
    a, b = _rep_basis(label, fld)
    return make_pencil(a, b, fld)


# -- the decision tree -------------------------------------------------------

def classify(p, fld):
    """The class label of an arbitrary pencil, from its invariants."""
    return _classify_profile(invariant_profile(p, fld), fld)


def _classify_profile(prof, fld):
    q = fld.q
    even = q % 2 == 0
    dist = tuple(prof.dist)

    def o8_like_variant(pc):
        # Common iff (exterior <=> q = 1 mod 4); even q: Extra iff nucleus
        if even:
            return pc.subtype == NUCLEUS
        return (pc.subtype == EXTERIOR) != (q % 4 == 1)

    if q == 2 and dist == (0, 3, 0):
        if prof.has_common_radical:
            return ClassLabel(10)
        if prof.nucleus_count == 3:
            return ClassLabel(12)
        if prof.nucleus_count == 1:
            return ClassLabel(12, True)
        if prof.nucleus_count == 0:
            return ClassLabel(14)
        raise UnclassifiableProfile(f"q=2 [0,3,0] with {prof}")
    if dist == (2, q - 1, 0):
        return ClassLabel(5)
    if dist == (1, q, 0):
        return ClassLabel(6)
    if dist == (1, 0, q):
        return ClassLabel(9)
    if dist == (0, 0, q + 1):
        return ClassLabel(17)
    if dist == (1, 1, q - 1):
        return ClassLabel(8, o8_like_variant(prof.rank2_points[0][1]))
    if dist == (0, q + 1, 0):
        if prof.has_common_radical:
            return ClassLabel(10)
        if not even:
            return ClassLabel(12)
        if prof.nucleus_count == q + 1:
            return ClassLabel(12)
        if prof.nucleus_count == 1:
            return ClassLabel(12, True)
        raise UnclassifiableProfile(f"[0,q+1,0] with nucleus count {prof.nucleus_count}")
    if dist == (0, 2, q - 1):
        double = next(item for item in prof.rank2_points if item[2] == 2)
        if even:
            if prof.nucleus_count not in (0, 1):
                raise UnclassifiableProfile(f"[0,2,q-1] with nucleus count {prof.nucleus_count}")
            return ClassLabel(13, prof.nucleus_count == 0)
        return ClassLabel(13, o8_like_variant(double[1]))
    if dist == (0, 3, q - 2):
        if even:
            return ClassLabel(14)
        if prof.ext_count not in (1, 3):
            raise UnclassifiableProfile(f"[0,3,q-2] with {prof.ext_count} exterior points")
        return ClassLabel(14, (prof.ext_count == 3) != (q % 4 == 1))
    if dist == (0, 1, q):
        point, pc, mult = prof.rank2_points[0]
        if mult == 3:
            if even:
                return ClassLabel(16, pc.subtype != NUCLEUS)
            return ClassLabel(16)
        if mult == 1:
            if even:
                return ClassLabel(15)
            return ClassLabel(15, pc.subtype == INTERIOR)
        raise UnclassifiableProfile(f"[0,1,q] with root multiplicity {mult}")
    raise UnclassifiableProfile(f"rank distribution {dist} for q = {q}")


# -- stabiliser orders and class sizes ---------------------------------------

def pgl3_order(q):
    return q ** 3 * (q ** 3 - 1) * (q ** 2 - 1)


def line_count(q):
    """Number of lines of PG(5,q)."""
    n = (q ** 6 - 1) * (q ** 5 - 1)
    d = (q ** 2 - 1) * (q - 1)
    assert n % d == 0
    return n // d


def _stab_order(orbit, extra, q):
    even = q % 2 == 0
    if orbit == 5:
        return 2 * q * q * (q - 1) ** 2
    if orbit == 6:
        return q ** 3 * (q - 1) ** 2
    if orbit == 8:
        if even:
            return q * (q - 1) * (q * q - 1) if extra else q * (q - 1)
        plus, minus = 2 * (q - 1) ** 2, 2 * (q - 1) * (q + 1)
        if q % 4 == 1:
            return minus if extra else plus
        return plus if extra else minus
    if orbit == 9:
        return q * q * (q - 1)
    if orbit == 10:
        return 2 * q * q * (q * q - 1)
    if orbit == 12:
        if not even:
            return q * (q - 1) ** 2 * (q + 1)
        return q ** 3 * (q - 1) if extra else q ** 3 * (q - 1) ** 2 * (q + 1)
    if orbit == 13:
        if not even:
            return 2 * (q - 1)
        return q if extra else q * (q - 1)
    if orbit == 14:
        if even:
            return 6
        big_common = q % 4 == 1
        return (8 if big_common else 24) if extra else (24 if big_common else 8)
    if orbit == 15:
        return 4 if not even else 2
    if orbit == 16:
        if not even:
            return q * (q - 1)
        return q * q if extra else q * q * (q - 1)
    if orbit == 17:
        return 3
    raise InvalidLabelForField(f"unknown tensor orbit o{orbit}")


def expected_stabilizer_order(label, fld):
    """Published order of the linewise stabiliser in PGL(3,q)."""
    _require_valid(label, fld.q)
    return _stab_order(label.orbit, label.extra, fld.q)


def orbit_total_formula(orbit, q):
    """Published total number of lines arising from one tensor orbit."""
    totals = {
        5: Fraction(q * (q + 1) * (q * q + q + 1), 2),
        6: Fraction((q + 1) * (q * q + q + 1)),
        8: Fraction(q ** 4 * (q * q + q + 1)),
        9: Fraction(q * (q ** 3 - 1) * (q + 1)),
        10: Fraction(q * (q ** 3 - 1), 2),
        12: Fraction(q * q * (q * q + q + 1)),
        13: Fraction(q ** 3 * (q ** 3 - 1) * (q + 1)),
        14: Fraction(q ** 3 * (q ** 3 - 1) * (q * q - 1), 6),
        15: Fraction(q ** 3 * (q ** 3 - 1) * (q * q - 1), 2),
        16: Fraction(q * q * (q ** 3 - 1) * (q + 1)),
        17: Fraction(q ** 3 * (q ** 3 - 1) * (q * q - 1), 3),
    }
    value = totals[orbit]
    assert value.denominator == 1
    return int(value)


def expected_counts(fld):
    """(per-class orbit sizes, per-tensor-orbit totals), from |K| / |stab|."""
    q = fld.q
    order = pgl3_order(q)
    by_label = {}
    by_orbit = {}
    for label in all_labels(fld):
        stab = _stab_order(label.orbit, label.extra, q)
        assert order % stab == 0
        size = order // stab
        by_label[label] = size
        by_orbit[label.orbit] = by_orbit.get(label.orbit, 0) + size
    assert sum(by_label.values()) == line_count(q)
    return by_label, by_orbit


# -- pencils of ternary quadratic forms --------------------------------------

FORM_BASIS = ("X^2", "Y^2", "Z^2", "XY", "XZ", "YZ")


def matrix_of_form(form, fld):
    """Symmetric matrix of a quadratic form, cross coefficients halved.

    Only valid for q odd; in characteristic 2 the form and matrix models
    are genuinely different representations.
    """
    if fld.q % 2 == 0:
        raise InvalidLabelForField("no matrix of a form in characteristic 2")
    half = fld.inv(fld.add(1, 1))
    a, b, c, d, e, f = form
    return (a, b, c, fld.mul(half, d), fld.mul(half, e), fld.mul(half, f))


def form_of_matrix(m, fld):
    """Quadratic form x^T M x of a symmetric matrix (q odd): cross terms doubled."""
    two = fld.add(1, 1)
    a, b, c, d, e, f = m
    return (a, b, c, fld.mul(two, d), fld.mul(two, e), fld.mul(two, f))


def irreducible_quadratic_constant(fld):
    """Smallest c such that t^2 + t + c has no root (q even)."""
    for c in fld.elements():
        if all(fld.add(fld.add(fld.mul(t, t), t), c) != 0 for t in fld.elements()):
            return c
    raise NoParams(f"no irreducible t^2 + t + c over GF({fld.q})")


def _rootless_depressed_cubic(fld):
    """Smallest (b, c) such that t^3 + b^2 t + c has no root (q even)."""
    for b in fld.elements():
        b2 = fld.mul(b, b)
        for c in fld.elements():
            if all(fld.add(fld.add(fld.mul(t, fld.mul(t, t)), fld.mul(b2, t)), c) != 0
                   for t in fld.elements()):
                return b, c
    raise NoParams(f"no rootless cubic t^3 + b^2 t + c over GF({fld.q})")


def _even_form_rep(label, fld):
    """Even-q representative pencils of conics, one per class.

    The published odd-characteristic translation column collapses in
    characteristic 2 (for instance (X^2, Y^2 + Z^2) is the same pencil
    class as (X^2, Y^2) there), so the classes whose printed entries
    collide get replacements, verified pairwise inequivalent by
    orbits.form_model_census at q = 2 and q = 4:

      o8    X^2, Y^2 + YZ + c Z^2        square + point-type conic
      o9    XZ, c^2 X^2 + c Y^2 + Z^2 + c XY + YZ
                                         conics through two conjugate
                                         point pairs
      o10   Y^2, X^2 + XY                square + mixed line pairs
      o12x  Y^2 + YZ + c Z^2, X^2 + XZ + c YZ
      o13   XY, Y^2 + YZ + c Z^2         line pair + point-type conic
      o13x  X^2 + XZ, XY + Y^2           two line pairs
      o14   XY + YZ, XZ + YZ             conics through four points of a
                                         quadrangle (three line pairs)
      o16x  Y^2 + YZ, X^2 + XZ + c YZ
      o17   X^2 + YZ, XY + b YZ + c' Z^2 with t^3 + b^2 t + c' rootless
                                         (no degenerate member)

    with c = irreducible_quadratic_constant.  The remaining classes keep
    their printed entries.
    """
    orbit, extra = label.orbit, label.extra
    c = irreducible_quadratic_constant(fld)
    c2 = fld.mul(c, c)
    if orbit == 5:
        return (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0)
    if orbit == 6:
        return (1, 0, 0, 0, 0, 0), (0, 0, 0, 1, 0, 0)
    if orbit == 8:
        if extra:
            return (1, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 1)
        return (1, 0, 0, 0, 0, 0), (0, 1, c, 0, 0, 1)
    if orbit == 9:
        return (0, 0, 0, 0, 1, 0), (c2, c, 1, c, 0, 1)
    if orbit == 10:
        return (0, 1, 0, 0, 0, 0), (1, 0, 0, 1, 0, 0)
    if orbit == 12:
        if extra:
            return (0, 1, c, 0, 0, 1), (1, 0, 0, 0, 1, c)
        return (0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 1)
    if orbit == 13:
        if extra:
            return (1, 0, 0, 0, 1, 0), (0, 1, 0, 1, 0, 0)
        return (0, 0, 0, 1, 0, 0), (0, 1, c, 0, 0, 1)
    if orbit == 14:
        return (0, 0, 0, 1, 0, 1), (0, 0, 0, 0, 1, 1)
    if orbit == 15:
        par = find_params(label, fld)
        return (0, par.u, 1, 1, 0, 0), (par.v, 1, 0, 0, 0, 0)
    if orbit == 16:
        if extra:
            return (0, 1, 0, 0, 0, 1), (1, 0, 0, 0, 1, c)
        return (0, 1, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)
    b, c3 = _rootless_depressed_cubic(fld)
    return (1, 0, 0, 0, 0, 1), (0, 0, c3, 1, 0, b)


def pencil_of_conics(label, fld):
    """A representative pair of ternary quadratic forms for the class.

    Coefficient 6-tuples in the basis (X^2, Y^2, Z^2, XY, XZ, YZ).  For q
    odd this is the exact translation of the canonical matrix pencil
    (cross coefficients doubled), so the round trip through
    matrix_of_form and classify returns the label.  For q even the
    matrix and form models are inequivalent representations and even the
    class sizes differ; the returned pair represents the class of the
    substitution action conventionally assigned to the label (see
    _even_form_rep and orbits.form_model_census).
    """
    _require_valid(label, fld.q)
    if fld.q % 2 == 1:
        a, b = _rep_basis(label, fld)
        return form_of_matrix(a, fld), form_of_matrix(b, fld)
    return _even_form_rep(label, fld)
