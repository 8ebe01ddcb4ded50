"""The residue field k = F_q, q = p^f, as F_p[u]/(residue_poly).

Elements are coordinate tuples in the power basis 1, u, ..., u^(f-1).
Everything is exact; inverses go through a^(q-2), the trace is the sum of
Frobenius powers, and p-th roots are the inverse Frobenius a^(p^(f-1)).
"""

import itertools

from .errors import DomainError, MalformedInputError
from .fp_linalg import FpVector


def _poly_trim(c):
    while c and c[-1] == 0:
        c = c[:-1]
    return c


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        a = _poly_trim(a)
        if len(a) - 1 < dm:
            break
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * mi) % p
        a = _poly_trim(a)
    return a


def irreducible_over_fp(coeffs, p):
    """Trial-factorization irreducibility test for a monic poly over F_p."""
    coeffs = list(coeffs)
    if not coeffs or coeffs[-1] != 1:
        return False
    f = len(coeffs) - 1
    if f == 0:
        return False
    if f == 1:
        return True
    # trial division by every monic polynomial of degree 1..f//2
    for d in range(1, f // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            if not _poly_mod(coeffs, div, p):
                return False
    return True


def default_residue_poly(p, f):
    """Lexicographically least monic irreducible of degree f over F_p.

    Coefficient tuples (constant term first) are scanned in lexicographic
    order, so the choice is deterministic and reproducible.
    """
    for tail in itertools.product(range(p), repeat=f):
        cand = list(tail) + [1]
        if irreducible_over_fp(cand, p):
            return tuple(cand)
    raise DomainError("no irreducible polynomial found (impossible)")


class ResidueField:
    """F_q with q = p^f, as F_p[u]/(poly)."""

    def __init__(self, p, f, poly=None):
        if poly is None:
            poly = default_residue_poly(p, f)
        poly = tuple(c % p for c in poly)
        if len(poly) != f + 1 or poly[-1] != 1:
            raise MalformedInputError("residue polynomial must be monic of degree f")
        if not irreducible_over_fp(poly, p):
            raise DomainError("residue polynomial is reducible over F_%d" % p)
        self.p = p
        self.f = f
        self.q = p**f
        self.poly = poly
        self._wp_table = None  # cache for the Artin-Schreier solve on k

    def __eq__(self, other):
        return (
            isinstance(other, ResidueField)
            and (self.p, self.f, self.poly) == (other.p, other.f, other.poly)
        )

    def __hash__(self):
        return hash((self.p, self.f, self.poly))

    def __repr__(self):
        return "ResidueField(p=%d, f=%d)" % (self.p, self.f)

    # -- constructors

    def elt(self, coords):
        if isinstance(coords, ResidueElement):
            assert coords.field == self
            return coords
        if isinstance(coords, int):
            coords = [coords] + [0] * (self.f - 1)
        coords = list(coords)
        if len(coords) > self.f:
            coords = _poly_mod(coords, list(self.poly), self.p)
        coords = [c % self.p for c in coords] + [0] * (self.f - len(coords))
        return ResidueElement(self, tuple(coords[: self.f]))

    def zero(self):
        return self.elt(0)

    def one(self):
        return self.elt(1)

    def gen(self):
        """The class of u (equals 0 when f = 1 and poly = u)."""
        if self.f == 1:
            return self.elt([(-self.poly[0]) % self.p])
        return self.elt([0, 1])

    def basis(self):
        """The power basis 1, u, ..., u^(f-1) as elements."""
        out = []
        for s in range(self.f):
            coords = [0] * self.f
            coords[s] = 1
            out.append(ResidueElement(self, tuple(coords)))
        return out

    def elements(self):
        """All q elements, in lexicographic coordinate order."""
        for coords in itertools.product(range(self.p), repeat=self.f):
            yield ResidueElement(self, coords)

    def wp_preimage(self, a):
        """Solve x^p - x = a in k, or None.  Lookup table built once."""
        if self._wp_table is None:
            table = {}
            for x in self.elements():
                key = x.pow(self.p).sub(x)
                table.setdefault(key, x)
            self._wp_table = table
        return self._wp_table.get(a)


class ResidueElement:
    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def fp_vector(self):
        return FpVector(self.field.p, self.coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, ResidueElement)
            and self.field == other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.field.p, self.field.poly, self.coords))

    def __repr__(self):
        return "k(%s)" % (",".join(str(c) for c in self.coords))

    def add(self, other):
        p = self.field.p
        return ResidueElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coords, other.coords))
        )

    def sub(self, other):
        p = self.field.p
        return ResidueElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coords, other.coords))
        )

    def neg(self):
        p = self.field.p
        return ResidueElement(self.field, tuple((-a) % p for a in self.coords))

    def scale(self, s):
        p = self.field.p
        return ResidueElement(self.field, tuple((s * a) % p for a in self.coords))

    def mul(self, other):
        k = self.field
        prod = _poly_mul(list(self.coords), list(other.coords), k.p)
        red = _poly_mod(prod, list(k.poly), k.p)
        red = red + [0] * (k.f - len(red))
        return ResidueElement(k, tuple(red[: k.f]))

    def pow(self, n):
        k = self.field
        if n < 0:
            return self.inv().pow(-n)
        acc = k.one()
        base = self
        while n:
            if n & 1:
                acc = acc.mul(base)
            base = base.mul(base)
            n >>= 1
        return acc

    def inv(self):
        if self.is_zero():
            raise DomainError("inverse of zero in residue field")
        return self.pow(self.field.q - 2)

    def frobenius(self):
        return self.pow(self.field.p)

    def pth_root(self):
        """Inverse of Frobenius: exact since x -> x^p is bijective on k."""
        return self.pow(self.field.p ** (self.field.f - 1))

    def trace(self):
        """Trace to F_p as an integer in [0, p): sum of Frobenius powers."""
        k = self.field
        acc = k.zero()
        cur = self
        for _ in range(k.f):
            acc = acc.add(cur)
            cur = cur.frobenius()
        assert all(c == 0 for c in acc.coords[1:]), "trace landed outside F_p"
        return acc.coords[0]
