"""Degree-p cyclic extensions attached to lines in the class spaces.

A nontrivial class D in K*/(K*)^p (char 0, p-th roots of unity present) or
in K+/wp(K+) (char p) spans a line whose extension E = K(a^(1/p)) resp.
E = K(wp^(-1)(a)) is cyclic of degree p.  E is represented as polynomials
of degree < p in the generator: no second field tower is built, because
everything downstream consumes only three things — the Galois action, the
norm, and the valuation.

Norms are conjugate products: N(z) = prod sigma^i(z) computed in E, with a
hard check that the result has no generator component left.  The valuation
on E is v_K(N(z)), divided by p for unramified E (where the conjugates all
share the value of z).  Uniformizers come from a two-candidate search and a
Bezout combination; the ramification break is then read off directly as
v_E(sigma(pi_E) - pi_E) - 1.
"""

import math

from .class_spaces import as_class_reduce, unit_class_reduce
from .errors import (
    DomainError,
    InternalError,
    PrecisionError,
    UnsupportedCaseError,
)
from .local_arith import INF, val


class Line:
    """A 1-dimensional subspace of the class space, with its level data.

    level is the line's distance from the deep end of the filtration: for
    mult lines pc - j (so the uniformizer line has level pc and the
    boundary line level 0), for add lines the pole order of the normal
    form.  Level 0 lines are exactly the ones whose extension is
    unramified.
    """

    __slots__ = ("ctx", "space", "generator", "level", "reduction")

    def __init__(self, ctx, space, generator, level, reduction):
        self.ctx = ctx
        self.space = space
        self.generator = generator
        self.level = level
        self.reduction = reduction

    def __repr__(self):
        return "Line(%s, %s, level=%s)" % (self.ctx.field_label(), self.space, self.level)


def line_of(x, space=None):
    """The line spanned by the class of x; DomainError if the class is trivial."""
    ctx = x.ctx
    if ctx.characteristic == 0:
        if space not in (None, "mult"):
            raise UnsupportedCaseError("char-0 lines live in the multiplicative quotient")
        red = unit_class_reduce(x)
        if red.is_trivial():
            raise DomainError("a line needs a nontrivial class; input is a p-th power")
        if ctx.pc is None:
            raise UnsupportedCaseError(
                "no boundary index: levels (and Kummer extensions) need the "
                "p-th roots of unity in the base field"
            )
        j = red.level_index
        return Line(ctx, "mult", x, ctx.pc - j, red)
    if space not in (None, "add"):
        raise UnsupportedCaseError("char-p lines live in the additive quotient")
    red = as_class_reduce(x)
    if red.is_trivial():
        raise DomainError("a line needs a nontrivial class; input is in wp(K)")
    return Line(ctx, "add", x, red.level, red)


class ExtElement:
    """An element of E as a polynomial of degree < p in the generator."""

    __slots__ = ("ext", "coeffs")

    def __init__(self, ext, coeffs):
        self.ext = ext
        self.coeffs = tuple(coeffs)
        if len(self.coeffs) != ext.base.p:
            raise InternalError("extension element needs exactly p coefficients")

    def add(self, other):
        return ExtElement(self.ext, [a.add(b) for a, b in zip(self.coeffs, other.coeffs)])

    def neg(self):
        return ExtElement(self.ext, [a.neg() for a in self.coeffs])

    def sub(self, other):
        return self.add(other.neg())

    def scale(self, c):
        """Multiply by a base-field element."""
        return ExtElement(self.ext, [a.mul(c) for a in self.coeffs])

    def mul(self, other):
        p = self.ext.base.p
        prod = [None] * (2 * p - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                term = a.mul(b)
                prod[i + j] = term if prod[i + j] is None else prod[i + j].add(term)
        return ExtElement(self.ext, self.ext._reduce_poly(prod))

    def powi(self, n):
        if n < 0:
            raise DomainError("negative powers need division in E; not supported")
        out = self.ext.embed(self.ext.base.one())
        base = self
        while n:
            if n & 1:
                out = out.mul(base)
            base = base.mul(base)
            n >>= 1
        return out

    def is_zero_to_precision(self):
        return all(c.is_zero_to_precision() for c in self.coeffs)

    def truncate(self, P):
        """Cap every coefficient at absolute precision P (tames exact series)."""
        return ExtElement(self.ext, [c.truncate(P) for c in self.coeffs])

    def __repr__(self):
        return "ExtElement(%s)" % (", ".join(repr(c) for c in self.coeffs),)


class DegreePExtension:
    """E = K[x]/(x^p - a) or K[y]/(y^p - y - a), cyclic of degree p over K.

    Immutable: the uniformizer and the ramification break are computed at
    construction.  Irreducibility of the defining polynomial is equivalent
    to nontriviality of the line's class, which line_of has already
    certified.
    """

    __slots__ = (
        "base",
        "kind",
        "line",
        "a",
        "is_unramified",
        "uniformizer",
        "ramification_break",
        "_zeta_pows",
    )

    def __init__(self, base, kind, line, a):
        self.base = base
        self.kind = kind
        self.line = line
        self.a = a
        self.is_unramified = line.level == 0
        if kind == "kummer":
            zeta = base.zeta
            pows = [base.one()]
            for _ in range(base.p - 1):
                pows.append(pows[-1].mul(zeta))
            self._zeta_pows = pows
        else:
            self._zeta_pows = None
        self.uniformizer = self._find_uniformizer()
        self.ramification_break = self._break()

    # ------------------------------------------------------------ structure

    def _pad_zero(self):
        # char-p zeros are exact; char-0 zeros get a huge precision tag so
        # padding never drags down the precision of real coefficients
        ctx = self.base
        return ctx.zero() if ctx.characteristic else ctx.zero(10**9)

    def embed(self, c):
        return ExtElement(self, [c] + [self._pad_zero() for _ in range(self.base.p - 1)])

    def gen(self):
        coeffs = [self._pad_zero() for _ in range(self.base.p)]
        coeffs[1] = self.base.one()
        return ExtElement(self, coeffs)

    def _reduce_poly(self, prod):
        """Fold degrees >= p using the defining relation, top down."""
        ctx = self.base
        p = ctx.p
        for d in range(2 * p - 2, p - 1, -1):
            c = prod[d]
            if c is None:
                continue
            prod[d] = None
            low = c.mul(self.a)
            prod[d - p] = low if prod[d - p] is None else prod[d - p].add(low)
            if self.kind == "artin_schreier":
                # gen^p = gen + a, so gen^d picks up gen^(d-p+1) as well
                prod[d - p + 1] = c if prod[d - p + 1] is None else prod[d - p + 1].add(c)
        return [self._pad_zero() if c is None else c for c in prod[:p]]

    def galois_apply(self, z, s=1):
        """The s-th power of the canonical generator sigma of Gal(E|K).

        Kummer: gen -> zeta^s gen.  Artin-Schreier: gen -> gen + s.
        """
        ctx = self.base
        p = ctx.p
        s %= p
        if s == 0:
            return z
        if self.kind == "kummer":
            return ExtElement(
                self, [c.mul(self._zeta_pows[(s * i) % p]) for i, c in enumerate(z.coeffs)]
            )
        out = [None] * p
        for i, c in enumerate(z.coeffs):
            for j in range(i + 1):
                w = math.comb(i, j) * pow(s, i - j)
                if w % ctx.p == 0:
                    continue
                term = c.scale_int(w)
                out[j] = term if out[j] is None else out[j].add(term)
        return ExtElement(self, [self._pad_zero() if c is None else c for c in out])

    def norm(self, z):
        """N_{E|K}(z) as the product of z over all conjugates."""
        if z.is_zero_to_precision():
            raise DomainError("norm of zero (or of a truncation of zero)")
        acc = z
        for s in range(1, self.base.p):
            acc = acc.mul(self.galois_apply(z, s))
        for c in acc.coeffs[1:]:
            if not c.is_zero_to_precision():
                raise InternalError("conjugate product left the base field")
        return acc.coeffs[0]

    def ext_val(self, z):
        """The normalized valuation of E (image exactly Z)."""
        n = self.norm(z)
        v = val(n)
        if v == INF:
            raise PrecisionError("norm vanished to working precision; cannot read v_E")
        v = int(v)
        if self.is_unramified:
            if v % self.base.p:
                raise InternalError("norm valuation not divisible by p on an unramified extension")
            return v // self.base.p
        return v

    # ------------------------------------------------------------ construction helpers

    def _find_uniformizer(self):
        ctx = self.base
        if self.is_unramified:
            return self.embed(ctx.pi())
        one = self.embed(ctx.one())
        for cand in (self.gen(), self.gen().sub(one), self.gen().add(one)):
            if cand.is_zero_to_precision():
                continue
            w = self.ext_val(cand)
            if w % ctx.p == 0:
                continue
            x1 = pow(w, -1, ctx.p)
            x2 = (1 - x1 * w) // ctx.p
            out = cand.powi(x1).scale(ctx.pi().powi(x2))
            if self.ext_val(out) != 1:
                raise InternalError("Bezout combination missed valuation 1")
            return out
        raise InternalError(
            "no generator-based candidate has valuation prime to p; "
            "this signals a precision or irreducibility bug"
        )

    def _break(self):
        if self.is_unramified:
            return -1
        moved = self.galois_apply(self.uniformizer)
        return self.ext_val(moved.sub(self.uniformizer)) - 1

    def __repr__(self):
        shape = "x^p - a" if self.kind == "kummer" else "y^p - y - a"
        return "DegreePExtension(%s, %s, %s, break=%d)" % (
            self.base.field_label(),
            self.kind,
            shape,
            self.ramification_break,
        )


def attach_extension(line, representative=None):
    """Construct the degree-p cyclic extension attached to a nontrivial line.

    The defining constant is the line's normalized class representative
    (rebuilt at working precision), so equal lines give identical defining
    polynomials.  An explicit `representative` may be supplied instead; it
    must generate the same line, which is checked.
    """
    ctx = line.ctx
    if line.space == "mult":
        if not ctx.mu_p_present:
            raise UnsupportedCaseError(
                "Kummer extensions need the p-th roots of unity in the base field"
            )
        kind = "kummer"
        a = _canonical_mult_rep(ctx, line.reduction)
        if line.level == 0:
            # the only unramified mult line is the boundary line
            if line.reduction.pi_exponent % ctx.p or set(line.reduction.levels) != {ctx.pc}:
                raise InternalError("level-0 mult line does not sit at the boundary")
    else:
        kind = "artin_schreier"
        a = line.reduction.normal_form
        if line.level == 0 and line.reduction.poles:
            raise InternalError("level-0 add line has poles in its normal form")
    if representative is not None:
        _check_same_line(line, representative)
        a = representative
    return DegreePExtension(ctx, kind, line, a)


def _canonical_mult_rep(ctx, red):
    """Rebuild pi^(v mod p) * prod (1 + tau(a_m) pi^m) at full working precision."""
    out = ctx.one()
    if red.pi_exponent % ctx.p:
        out = out.mul(ctx.pi().powi(red.pi_exponent % ctx.p))
    for m in sorted(red.levels):
        out = out.mul(ctx.one().add(ctx.teichmuller(red.levels[m]).shift(m)))
    return out


def norm(ext, z):
    return ext.norm(z)


def ext_val(ext, z):
    return ext.ext_val(z)


def find_uniformizer(ext):
    return ext.uniformizer


def galois_apply(ext, z, s=1):
    return ext.galois_apply(z, s)


def ramification_break(ext):
    return ext.ramification_break


def _check_same_line(line, rep):
    ctx = line.ctx
    if line.space == "mult":
        for s in range(1, ctx.p):
            r = unit_class_reduce(rep.mul(line.generator.powi(s)))
            if r.is_trivial():
                return
        raise DomainError("representative does not generate the same line")
    for s in range(1, ctx.p):
        r = as_class_reduce(rep.add(line.generator.scale_int(s)))
        if r.is_trivial():
            return
    raise DomainError("representative does not generate the same line")
