"""Exact arithmetic in the finite fields GF(q), q = p^e <= 128.

Field elements are plain Python ints in ``range(q)``: the code
``c0 + c1*p + ... + c_{e-1}*p^(e-1)`` stands for the polynomial residue
``c0 + c1*t + ...`` modulo a fixed monic irreducible of degree e
(for e = 1 arithmetic is plain mod p and no modulus is involved).
Code 0 is zero and code 1 is one.  Keeping elements as small ints makes
hashing and table indexing O(1), which the exhaustive censuses rely on.

Arithmetic is table driven: a GF instance precomputes q-by-q addition and
multiplication tables once (at most 16 KiB each for q = 128) and both the
scalar operations and the numpy bulk kernels index into them.

The modulus for e > 1 is chosen deterministically: among the monic
irreducibles of degree e over GF(p), take the one whose non-leading
coefficient vector, read little-endian as a base-p integer, is smallest.
This pins element codes, and therefore every canonical key derived from
them, across runs and platforms.  ``GF(p, e, modulus=...)`` accepts an
explicit override, which must pass the same irreducibility check.
"""

from __future__ import annotations

import numpy as np

MAX_ORDER = 128


class FieldError(ValueError):
    """Invalid field construction or field-level request."""


class NotPrime(FieldError):
    """The requested characteristic (or order) is not a prime (power)."""


class OrderTooLarge(FieldError):
    """q exceeds the supported bound MAX_ORDER."""


class FieldTooLarge(FieldError):
    """q exceeds the cap of an exhaustive-enumeration operation."""


class NoNonsquare(FieldError):
    """Every element of a field of even order is a square."""


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- polynomial helpers over GF(p), coefficient lists little-endian --------

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    # m monic
    a = list(a)
    while len(a) >= len(m):
        c = a[-1]
        if c:
            shift = len(a) - len(m)
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return _poly_trim(a)


def poly_is_irreducible(coeffs, p):
    """Irreducibility of a monic polynomial over GF(p).

    Degree <= 3 needs only a root check; from degree 4 on we trial-divide
    by every monic polynomial of degree 2 .. deg/2 (roots cover degree 1).
    """
    coeffs = list(coeffs)
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] != 1:
        return False
    if coeffs[0] == 0:
        return deg == 1
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return False
    if deg <= 3:
        return True
    for d in range(2, deg // 2 + 1):
        for k in range(p ** d):
            div = [(k // p ** i) % p for i in range(d)] + [1]
            if not _poly_mod(coeffs, div, p):
                return False
    return True


def smallest_irreducible(p, e):
    """The canonical degree-e modulus over GF(p) (see module docstring)."""
    for k in range(p ** e):
        coeffs = [(k // p ** i) % p for i in range(e)] + [1]
        if poly_is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")


class GF:
    """The finite field of order p^e, elements encoded as ints in [0, q).

    Immutable after construction; all operations are pure, so one instance
    can be shared freely across workers.  The attribute ``tables`` bundles
    the numpy lookup tables used by the vectorised census kernels.
    """

    def __init__(self, p, e=1, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if e < 1:
            raise FieldError(f"extension degree must be >= 1, got {e}")
        q = p ** e
        if q > MAX_ORDER:
            raise OrderTooLarge(f"q = {q} exceeds the supported bound {MAX_ORDER}")
        self.p = p
        self.e = e
        self.q = q
        if e == 1:
            self.modulus = None
        else:
            if modulus is None:
                self.modulus = smallest_irreducible(p, e)
            else:
                modulus = tuple(int(c) % p for c in modulus)
                if len(modulus) != e + 1 or modulus[-1] != 1:
                    raise FieldError(f"modulus must be monic of degree {e}")
                if not poly_is_irreducible(modulus, p):
                    raise FieldError(f"modulus {modulus} is reducible over GF({p})")
                self.modulus = modulus
        self._build_tables()
        self._cache = {}  # write-once stash for derived tables (points, groups)

    # -- construction of the lookup tables ---------------------------------

    def _digits(self, code):
        p = self.p
        return [(code // p ** i) % p for i in range(self.e)]

    def _code(self, digits):
        return sum(d * self.p ** i for i, d in enumerate(digits))

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        mul = [[0] * q for _ in range(q)]
        add = [[0] * q for _ in range(q)]
        if e == 1:
            for a in range(q):
                for b in range(q):
                    add[a][b] = (a + b) % p
                    mul[a][b] = (a * b) % p
        else:
            mod = list(self.modulus)
            polys = [self._digits(a) for a in range(q)]
            for a in range(q):
                pa = polys[a]
                for b in range(a, q):
                    s = [(x + y) % p for x, y in zip(pa, polys[b])]
                    add[a][b] = add[b][a] = self._code(s)
                    m = _poly_mod(_poly_mul(_poly_trim(list(pa)),
                                            _poly_trim(list(polys[b])), p), mod, p)
                    c = self._code(m + [0] * (e - len(m)))
                    mul[a][b] = mul[b][a] = c
        neg = [0] * q
        for a in range(q):
            for b in range(q):
                if add[a][b] == 0:
                    neg[a] = b
                    break
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        sub = [[add[a][neg[b]] for b in range(q)] for a in range(q)]
        self._add, self._sub, self._mul = add, sub, mul
        self._neg, self._inv = neg, inv
        half = (q - 1) // 2
        if q % 2 == 0:
            self._square = [True] * q
        else:
            self._square = [self.pow(a, half) in (0, 1) for a in range(q)]
        self.tables = FieldTables(self)

    # -- scalar arithmetic --------------------------------------------------

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._sub[a][b]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        return self._neg[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by 0")
        return self._mul[a][self._inv[b]]

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self._mul[r][a]
            a = self._mul[a][a]
            n >>= 1
        return r

    def is_square(self, a):
        """True iff a has a square root; 0 counts as a square."""
        return self._square[a]

    def nonsquare(self):
        """Smallest non-square code (q odd)."""
        if self.q % 2 == 0:
            raise NoNonsquare(f"every element of GF({self.q}) is a square")
        return next(a for a in range(self.q) if not self._square[a])

    def elements(self):
        return range(self.q)

    def __eq__(self, other):
        return (isinstance(other, GF)
                and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus))

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.q})"
        return f"GF({self.q}, modulus={list(self.modulus)})"


class FieldTables:
    """Numpy views of a field's lookup tables, for the bulk kernels."""

    def __init__(self, fld):
        self.q = fld.q
        self.add = np.array(fld._add, dtype=np.uint8)
        self.sub = np.array(fld._sub, dtype=np.uint8)
        self.mul = np.array(fld._mul, dtype=np.uint8)
        self.neg = np.array(fld._neg, dtype=np.uint8)
        self.inv = np.array(fld._inv, dtype=np.uint8)


def make_field(p, e=1):
    """The field GF(p^e) with the canonical modulus."""
    return GF(p, e)


def field_of_order(q, modulus=None):
    """Factor q = p^e and build GF(q); rejects non prime powers."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = next((d for d in range(2, q + 1) if q % d == 0), q)
    e = 0
    n = q
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise NotPrime(f"{q} is not a prime power")
    return GF(p, e, modulus=modulus)
