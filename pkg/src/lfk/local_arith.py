"""Exact, precision-tracked arithmetic in a p-field K.

Two implementations sit behind one interface:

* characteristic 0 — K is a two-step tower: the unramified part is
  W = Z_p[w]/(m(w)) with m a monic integer lift of the residue polynomial,
  and K = W[x]/(E(x)) for a monic Eisenstein E.  An element is

      z = p^t * sum_{a<f, b<e} c[a][b] * w^a * x^b

  with integer coefficients kept exactly modulo p^Np for a generous,
  context-wide Np.  The logical precision P ("known modulo pi^P") is
  tracked separately and never silently decreased: a digit that is not
  determined raises PrecisionError instead of being invented.  Valuations
  are exact because the x-degrees are distinct modulo e, so no cross-term
  cancellation can hide the leading monomial.

* characteristic p — K = k((t)); elements are sparse Laurent polynomials
  over k with a precision bound that is +infinity for exact values.
  Inversion is the only operation that truncates.

The class of a uniformizer is `pi` in both cases (x resp. t).
"""

import math

from .errors import (
    DomainError,
    InternalError,
    MalformedInputError,
    PrecisionError,
    UnsupportedCaseError,
)
from .residues import ResidueField

INF = math.inf

DEFAULT_PRECISION = 64


def bp_index(p, i):
    """The i-th positive integer not divisible by p: i + floor((i-1)/(p-1))."""
    if i < 1:
        raise DomainError("bp_index needs i >= 1, got %r" % (i,))
    return i + (i - 1) // (p - 1)


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class FieldDescriptor:
    """Static description of a p-field, prior to derived constants."""

    def __init__(
        self,
        characteristic,
        p,
        f,
        residue_poly=None,
        eisenstein_poly=None,
        default_precision=DEFAULT_PRECISION,
    ):
        if not _is_prime(p):
            raise MalformedInputError("p must be prime, got %r" % (p,))
        if f < 1:
            raise MalformedInputError("f must be >= 1")
        if characteristic not in (0, p):
            raise MalformedInputError("characteristic must be 0 or p")
        if default_precision < 1:
            raise MalformedInputError("precision must be positive")
        self.characteristic = characteristic
        self.p = p
        self.f = f
        self.residue_poly = residue_poly
        self.default_precision = default_precision
        if characteristic == 0:
            if eisenstein_poly is None:
                eisenstein_poly = (-p, 1)  # unramified: pi = p
            eisenstein_poly = tuple(int(c) for c in eisenstein_poly)
            if len(eisenstein_poly) < 2 or eisenstein_poly[-1] != 1:
                raise MalformedInputError("Eisenstein polynomial must be monic of degree >= 1")
            c0 = eisenstein_poly[0]
            if c0 % p != 0 or c0 % (p * p) == 0:
                raise MalformedInputError(
                    "Eisenstein check failed: constant coefficient must have valuation 1"
                )
            for c in eisenstein_poly[1:-1]:
                if c % p != 0:
                    raise MalformedInputError(
                        "Eisenstein check failed: middle coefficient %d is a unit" % c
                    )
            self.eisenstein_poly = eisenstein_poly
        else:
            if eisenstein_poly is not None:
                raise MalformedInputError("char-p fields take no Eisenstein polynomial")
            self.eisenstein_poly = None


def make_field(descriptor):
    """Build the FieldContext: derived constants, mu_p decision, cached zeta."""
    return FieldContext(descriptor)


class FieldContext:
    def __init__(self, d):
        self.descriptor = d
        self.p = d.p
        self.f = d.f
        self.k = ResidueField(d.p, d.f, d.residue_poly)
        self.q = self.k.q
        self.default_precision = d.default_precision
        self.characteristic = d.characteristic
        self._teich_cache = {}
        self._basis_cache = {}
        if d.characteristic == 0:
            self.e = len(d.eisenstein_poly) - 1
            # coefficient arithmetic is exact modulo p^coeff_prec throughout
            self.coeff_prec = d.default_precision + 2 * self.e + 16
            self.pmod = d.p**self.coeff_prec
            self._m_int = tuple(int(c) for c in self.k.poly)
            self._eis = d.eisenstein_poly
            self._xinv_num = self._build_xinv()
            self._xinv_pow_cache = {0: self._const_num(1)}
            if (self.p - 1) and self.e % (self.p - 1) == 0:
                self.c = self.e // (self.p - 1)
                self.pc = self.e + self.c
            else:
                self.c = None
                self.pc = None
            min_prec = (self.pc if self.pc is not None else self.e) + 2
            if d.default_precision < min_prec:
                raise PrecisionError(
                    "construction needs precision >= %d to certify the root-of-unity "
                    "decision, got %d" % (min_prec, d.default_precision)
                )
            self.mu_p_present, self.zeta = self._decide_mu_p()
        else:
            self.e = INF
            self.c = None
            self.pc = None
            self.mu_p_present = False
            self.zeta = None
            self._trace_one = self._find_trace_one()

    # ------------------------------------------------------------ basics

    def __repr__(self):
        if self.characteristic == 0:
            return "FieldContext(Qp p=%d f=%d e=%d)" % (self.p, self.f, self.e)
        return "FieldContext(Fq((t)) p=%d f=%d)" % (self.p, self.f)

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)

    def field_label(self):
        """Stable one-line identifier used in reports."""
        d = self.descriptor
        if self.characteristic == 0:
            eis = ",".join(str(c) for c in d.eisenstein_poly)
            return "Qp p=%d f=%d eis=%s prec=%d" % (self.p, self.f, eis, d.default_precision)
        resf = ",".join(str(c) for c in self.k.poly)
        return "Fq((t)) p=%d f=%d resf=%s prec=%d" % (self.p, self.f, resf, d.default_precision)

    def dim_mult_classes(self):
        """dim of K*/K*^p over F_p (char 0 only): ef + 1 + (1 if mu_p)."""
        if self.characteristic != 0:
            raise UnsupportedCaseError("multiplicative class space is infinite in char p")
        return self.e * self.f + 1 + (1 if self.mu_p_present else 0)

    # ------------------------------------------------------------ char-0 kernels

    def _const_num(self, n):
        num = [[0] * self.e for _ in range(self.f)]
        num[0][0] = n % self.pmod
        return num

    def _num_from_residue(self, r):
        num = [[0] * self.e for _ in range(self.f)]
        for a in range(self.f):
            num[a][0] = r.coords[a] % self.pmod
        return num

    def _num_add(self, A, B):
        return [
            [(A[a][b] + B[a][b]) % self.pmod for b in range(self.e)]
            for a in range(self.f)
        ]

    def _num_scale(self, A, s):
        return [[(s * A[a][b]) % self.pmod for b in range(self.e)] for a in range(self.f)]

    def _num_mul(self, A, B):
        f, e, mod = self.f, self.e, self.pmod
        # convolve in both variables
        big = [[0] * (2 * e - 1) for _ in range(2 * f - 1)]
        for a1 in range(f):
            row = A[a1]
            for b1 in range(e):
                c = row[b1]
                if c:
                    for a2 in range(f):
                        row2 = B[a2]
                        ta = a1 + a2
                        for b2 in range(e):
                            if row2[b2]:
                                big[ta][b1 + b2] = (big[ta][b1 + b2] + c * row2[b2]) % mod
        # reduce w-degree by m(w) (monic, integer coefficients)
        for a in range(2 * f - 2, f - 1, -1):
            for b in range(2 * e - 1):
                c = big[a][b]
                if c:
                    big[a][b] = 0
                    for j in range(f):
                        big[a - f + j][b] = (big[a - f + j][b] - c * self._m_int[j]) % mod
        # reduce x-degree by E(x) (monic, integer coefficients)
        for b in range(2 * e - 2, e - 1, -1):
            for a in range(f):
                c = big[a][b]
                if c:
                    big[a][b] = 0
                    for j in range(e):
                        big[a][b - e + j] = (big[a][b - e + j] - c * self._eis[j]) % mod
        return [[big[a][b] for b in range(e)] for a in range(f)]

    def _build_xinv(self):
        """num with x^(-1) = p^(-1) * xinv_num, from the Eisenstein relation."""
        e, p = self.e, self.p
        c0 = self._eis[0]
        w_unit = c0 // p  # exact: v_p(c0) = 1
        w_inv = pow(w_unit % self.pmod, -1, self.pmod)
        num = [[0] * e for _ in range(self.f)]
        if e == 1:
            # x = -c0, so 1/x = -1/(p*w): numerator is -w^{-1}
            num[0][0] = (-w_inv) % self.pmod
            return num
        # x*(x^(e-1) + E_{e-1} x^(e-2) + ... + E_1) = -c0 = -p*w
        for j in range(1, e + 1):
            coeff = 1 if j == e else self._eis[j]
            num[0][j - 1] = (-w_inv * coeff) % self.pmod
        return num

    def _xinv_pow(self, m):
        cache = self._xinv_pow_cache
        if m not in cache:
            top = max(cache)
            cur = cache[top]
            for i in range(top + 1, m + 1):
                cur = self._num_mul(cur, self._xinv_num)
                cache[i] = cur
        return cache[m]

    def _num_pival(self, A):
        """Exact pi-valuation of a num (INF if zero mod p^coeff_prec)."""
        best = INF
        for b in range(self.e):
            for a in range(self.f):
                c = A[a][b]
                if c:
                    w = 0
                    while c % self.p == 0:
                        c //= self.p
                        w += 1
                    v = self.e * w + b
                    if v < best:
                        best = v
        return best

    # ------------------------------------------------------------ constructors

    def zero(self, prec=None):
        return self._make(self._const_num(0), 0, prec) if self.characteristic == 0 else self._lmake({}, self._lprec(prec))

    def one(self, prec=None):
        return self.from_int(1, prec)

    def from_int(self, n, prec=None):
        if self.characteristic == 0:
            return self._make(self._const_num(n), 0, prec)
        return self._lmake({0: self.k.elt(n % self.p)} if n % self.p else {}, self._lprec(prec))

    def pi(self, prec=None):
        """A fixed uniformizer: the class of x (char 0) or t (char p)."""
        if self.characteristic == 0:
            if self.e == 1:
                return self.from_int(-self._eis[0], prec)
            num = self._const_num(0)
            num[0][1] = 1
            return self._make(num, 0, prec)
        return self._lmake({1: self.k.one()}, self._lprec(prec))

    def w_gen(self, prec=None):
        """The unramified ring generator w (char 0, f >= 2)."""
        if self.characteristic != 0 or self.f < 2:
            raise DomainError("w is only defined for char-0 fields with f >= 2")
        num = self._const_num(0)
        num[1][0] = 1
        return self._make(num, 0, prec)

    def teichmuller(self, r, prec=None):
        """The multiplicative lift of r in k*: satisfies tau(r)^(q-1) = 1."""
        r = self.k.elt(r)
        if r.is_zero():
            raise DomainError("teichmuller lift of zero")
        if self.characteristic == self.p:
            return self._lmake({0: r}, INF)
        key = r.coords
        if key not in self._teich_cache:
            num = self._num_from_residue(r)
            # y -> y^q gains one p-digit of agreement with the fixed point per step
            for _ in range(self.coeff_prec + 2):
                nxt = self._num_pow(num, self.q)
                if nxt == num:
                    break
                num = nxt
            else:
                raise InternalError("teichmuller iteration did not stabilize")
            self._teich_cache[key] = num
        return self._make(self._teich_cache[key], 0, prec)

    def _num_pow(self, A, n):
        out = self._const_num(1)
        base = A
        while n:
            if n & 1:
                out = self._num_mul(out, base)
            base = self._num_mul(base, base)
            n >>= 1
        return out

    def from_digits(self, pairs, prec=None):
        """sum of teichmuller(d) * pi^i over (i, d) pairs; d in k, may be 0."""
        acc = self.zero(prec)
        for i, d in pairs:
            d = self.k.elt(d)
            if d.is_zero():
                continue
            acc = acc.add(self.teichmuller(d).shift(i))
        return acc

    def _lprec(self, prec):
        # char-p constructors give exact values; truncation only enters via inv
        return INF if prec is None else prec

    def _make(self, num, t, prec):
        P = self.default_precision if prec is None else prec
        return ZqElement(self, num, t, P)

    def _lmake(self, coeffs, prec):
        return LaurentElement(self, coeffs, prec)

    # ------------------------------------------------------------ mu_p

    def _decide_mu_p(self):
        p = self.p
        if p == 2:
            return True, self.from_int(-1)
        if self.c is None:
            # every root of x^(p-1)+...+1 would have v(zeta-1) = e/(p-1),
            # which is not an integer here: certified absent
            return False, None
        # leading-digit equation: theta^(p-1) = residue(-p * pi^(-e))
        u = self.from_int(-p).mul(self.pi().powi(-self.e))
        a0 = u.residue()
        theta = None
        for cand in self.k.elements():
            if not cand.is_zero() and cand.pow(p - 1) == a0:
                theta = cand
                break
        if theta is None:
            return False, None
        zeta = self._hensel_zeta(theta)
        return True, zeta

    def _hensel_zeta(self, theta):
        """Newton-refine 1 + tau(theta)*pi^c to a primitive p-th root of unity."""
        p = self.p
        binom = [math.comb(p, j + 1) for j in range(p)]  # F(z) = sum binom[j] z^j
        z = self.teichmuller(theta).mul(self.pi().powi(self.c))
        target = self.default_precision

        def F(zv):
            acc = self.zero()
            zpow = self.one()
            for j in range(p):
                acc = acc.add(zpow.scale_int(binom[j]))
                zpow = zpow.mul(zv)
            return acc

        def Fprime(zv):
            acc = self.zero()
            zpow = self.one()
            for j in range(1, p):
                acc = acc.add(zpow.scale_int(j * binom[j]))
                zpow = zpow.mul(zv)
            return acc

        last_v = -1
        for _ in range(4 * target + 8):
            fv = F(z)
            v = fv.valuation()
            if v == INF or v >= target + self.e:
                zeta = self.one().add(z)
                check = zeta.powi(p).sub(self.one())
                if not check.is_zero_to_precision():
                    raise InternalError("zeta candidate fails zeta^p = 1 at precision")
                if z.is_zero_to_precision():
                    raise InternalError("zeta candidate collapsed to 1")
                return zeta
            if v <= last_v:
                raise InternalError("Newton iteration for zeta stalled at v=%s" % v)
            last_v = v
            z = z.sub(fv.mul(Fprime(z).inv()))
        raise PrecisionError("zeta refinement did not converge at current precision")

    # ------------------------------------------------------------ char-p helpers

    def _find_trace_one(self):
        for cand in self.k.elements():
            if cand.trace() == 1:
                return cand
        raise InternalError("trace map has no value 1 on k")

    def trace_one(self):
        """A fixed element of k with trace 1 (char p normal form at level 0)."""
        return self._trace_one


# ================================================================ char 0


class ZqElement:
    """z = p^t * num, num a polynomial in (w, x); known modulo pi^P."""

    __slots__ = ("ctx", "num", "t", "P", "_val")

    def __init__(self, ctx, num, t, P):
        self.ctx = ctx
        self.num = num
        self.t = t
        # coefficients are carried modulo p^coeff_prec, which bounds how much
        # absolute precision the representation can actually hold
        self.P = min(P, ctx.e * (t + ctx.coeff_prec))
        self._val = None

    # -- valuation and zero tests

    def valuation(self):
        """Exact valuation, or INF when indistinguishable from 0 at precision P."""
        if self._val is None:
            pv = self.ctx._num_pival(self.num)
            v = INF if pv == INF else self.ctx.e * self.t + pv
            self._val = INF if v >= self.P else v
        return self._val

    def is_zero_to_precision(self):
        return self.valuation() == INF

    # -- ring operations

    def _aligned(self, other):
        assert self.ctx is other.ctx, "elements from different fields"
        t = min(self.t, other.t)
        a = self.num if self.t == t else self.ctx._num_scale(self.num, self.ctx.p ** (self.t - t))
        b = other.num if other.t == t else self.ctx._num_scale(other.num, self.ctx.p ** (other.t - t))
        return a, b, t

    def add(self, other):
        a, b, t = self._aligned(other)
        return ZqElement(self.ctx, self.ctx._num_add(a, b), t, min(self.P, other.P))

    def neg(self):
        return ZqElement(self.ctx, self.ctx._num_scale(self.num, -1), self.t, self.P)

    def sub(self, other):
        return self.add(other.neg())

    def scale_int(self, s):
        return ZqElement(self.ctx, self.ctx._num_scale(self.num, s), self.t, self.P)

    def mul(self, other):
        ctx = self.ctx
        v1 = min(self.valuation(), self.P)
        v2 = min(other.valuation(), other.P)
        P = min(self.P + v2, other.P + v1)
        if P == INF:
            P = min(self.P, other.P)  # both truncated zeros: keep a finite bound
        num = ctx._num_mul(self.num, other.num)
        return ZqElement(ctx, num, self.t + other.t, P)

    def inv(self):
        ctx = self.ctx
        v = self.valuation()
        if v == INF:
            raise DomainError("inverse of (truncated) zero")
        unit = self.shift(-v)
        # clear p-content so the numerator polynomial is a unit mod p
        K = -unit.t
        U = unit.num
        if K > 0:
            pK = ctx.p**K
            U = [[c // pK for c in row] for row in U]
        elif K < 0:
            U = ctx._num_scale(U, ctx.p**(-K))
        # Newton: V <- V(2 - U V), starting from the residue inverse
        r = ctx.k.elt([U[a][0] % ctx.p for a in range(ctx.f)])
        V = ctx._num_from_residue(r.inv())
        steps = ZqElement._log_steps(ctx.e * ctx.coeff_prec)
        two = ctx._const_num(2)
        for _ in range(steps):
            UV = ctx._num_mul(U, V)
            V = ctx._num_mul(V, ctx._num_add(two, ctx._num_scale(UV, -1)))
        out = ZqElement(ctx, V, 0, self.P - v)
        return out.shift(-v)

    @staticmethod
    def _log_steps(n):
        s, cur = 1, 1
        while cur < n:
            cur *= 2
            s += 1
        return s

    def shift(self, i):
        """Multiply by pi^i (exact; i may be negative)."""
        ctx = self.ctx
        if i == 0:
            return self
        if i > 0:
            q, r = divmod(i, ctx.e)
            num = self.num
            if r:
                xnum = ctx._const_num(0)
                xnum[0][r] = 1
                num = ctx._num_mul(num, xnum)
            if q:
                # x^e folds down through the Eisenstein relation
                xe = ctx._const_num(0)
                for j in range(ctx.e):
                    xe[0][j] = (-ctx._eis[j]) % ctx.pmod
                num = ctx._num_mul(num, ctx._num_pow(xe, q))
            return ZqElement(ctx, num, self.t, self.P + i)
        m = -i
        num = ctx._num_mul(self.num, ctx._xinv_pow(m))
        return ZqElement(ctx, num, self.t - m, self.P + i)

    def powi(self, n):
        if n < 0:
            return self.inv().powi(-n)
        if n == 0:
            return self.ctx.one()
        out = self
        for bit in bin(n)[3:]:
            out = out.mul(out)
            if bit == "1":
                out = out.mul(self)
        return out

    # -- digits

    def residue(self):
        """Image in k of a unit (valuation 0) element."""
        v = self.valuation()
        if v != 0:
            raise DomainError("residue needs a unit, valuation is %s" % v)
        return self.digit(0)

    def digit(self, m):
        """The pi^m digit (coefficient in k of the Teichmuller expansion)."""
        ctx = self.ctx
        v = self.valuation()
        if m >= self.P:
            raise PrecisionError("digit at pi^%d unknown: precision is %d" % (m, self.P))
        if v == INF or m < v:
            return ctx.k.zero()
        w = self.shift(-m)  # valuation >= 0; digit is its residue column
        pv = ctx._num_pival(w.num)
        K = -w.t
        if pv == INF or pv > ctx.e * K:
            return ctx.k.zero()
        assert pv == ctx.e * K, "digit extraction misaligned (pv=%s, K=%s)" % (pv, K)
        if ctx.coeff_prec - K < 1:
            raise PrecisionError("coefficient budget exhausted reading digit %d" % m)
        pK = ctx.p**K
        coords = [(w.num[a][0] // pK) % ctx.p for a in range(ctx.f)]
        return ctx.k.elt(coords)

    def digits(self, lo=None, hi=None):
        """Teichmuller digit expansion on [lo, hi) as (i, k-element) pairs."""
        v = self.valuation()
        if v == INF:
            return []
        lo = v if lo is None else lo
        hi = self.P if hi is None else min(hi, self.P)
        out = []
        z = self
        for i in range(lo, hi):
            d = z.digit(i)
            if not d.is_zero():
                out.append((i, d))
                z = z.sub(self.ctx.teichmuller(d).shift(i))
        return out

    # -- comparisons / misc

    def eq_to_precision(self, other):
        d = self.sub(other)
        return d.is_zero_to_precision()

    def truncate(self, P):
        if P > self.P:
            raise PrecisionError("cannot raise precision from %s to %s" % (self.P, P))
        return ZqElement(self.ctx, self.num, self.t, P)

    def __repr__(self):
        v = self.valuation()
        if v == INF:
            return "O(pi^%s)" % self.P
        parts = ["%r*pi^%d" % (d, i) for i, d in self.digits(hi=min(self.P, v + 6))]
        return " + ".join(parts) + " + O(pi^%d)" % self.P

    def to_literal(self):
        """Exact literal in the element grammar; parse gives the value back."""
        ctx = self.ctx
        v = self.valuation()
        if v == INF:
            return "0"
        # reduce: extract p-content so printed integers stay small
        num, t = self.num, self.t
        pv = ctx._num_pival(num)
        strip = int(pv // ctx.e)
        if strip:
            pK = ctx.p**strip
            num = [[c // pK for c in row] for row in num]
            t += strip
        need = max(1, -(-(self.P - ctx.e * t) // ctx.e) + 1)
        need = min(need, ctx.coeff_prec - strip)
        mod = ctx.p**need
        terms = []
        for a in range(ctx.f):
            for b in range(ctx.e):
                cf = num[a][b] % mod
                if cf:
                    mono = str(cf)
                    if a:
                        mono += "*w^%d" % a if a > 1 else "*w"
                    if b:
                        mono += "*pi^%d" % b if b > 1 else "*pi"
                    terms.append(mono)
        body = " + ".join(terms) if terms else "0"
        if t:
            return "p^%d * (%s)" % (t, body)
        return body


# ================================================================ char p


class LaurentElement:
    """Sparse Laurent polynomial over k; prec = INF means exact."""

    __slots__ = ("ctx", "coeffs", "prec")

    def __init__(self, ctx, coeffs, prec):
        self.ctx = ctx
        self.coeffs = {i: c for i, c in coeffs.items() if not c.is_zero() and i < prec}
        self.prec = prec

    @property
    def P(self):
        return self.prec

    def valuation(self):
        if not self.coeffs:
            return INF
        return min(self.coeffs)

    def is_zero_to_precision(self):
        return not self.coeffs

    def add(self, other):
        assert self.ctx is other.ctx
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            s = out.get(i)
            out[i] = c if s is None else s.add(c)
        return LaurentElement(self.ctx, out, min(self.prec, other.prec))

    def neg(self):
        return LaurentElement(self.ctx, {i: c.neg() for i, c in self.coeffs.items()}, self.prec)

    def sub(self, other):
        return self.add(other.neg())

    def scale(self, r):
        r = self.ctx.k.elt(r)
        return LaurentElement(self.ctx, {i: c.mul(r) for i, c in self.coeffs.items()}, self.prec)

    def scale_int(self, s):
        return self.scale(self.ctx.k.elt(s % self.ctx.p))

    def mul(self, other):
        v1 = min(self.valuation(), self.prec)
        v2 = min(other.valuation(), other.prec)
        prec = min(self.prec + v2, other.prec + v1)
        out = {}
        for i, c in self.coeffs.items():
            for j, d in other.coeffs.items():
                ij = i + j
                if ij >= prec:
                    continue
                s = out.get(ij)
                pr = c.mul(d)
                out[ij] = pr if s is None else s.add(pr)
        return LaurentElement(self.ctx, out, prec)

    def inv(self):
        ctx = self.ctx
        v = self.valuation()
        if v == INF:
            raise DomainError("inverse of (truncated) zero")
        lead = self.coeffs[v]
        rel = self.prec - v  # relative precision of the input
        if rel == INF:
            if len(self.coeffs) == 1:
                return LaurentElement(ctx, {-v: lead.inv()}, INF)
            rel = ctx.default_precision
        if rel <= 0:
            raise PrecisionError("inverse would have no known digit")
        # z = lead t^v (1 + w); invert the unit by geometric series
        linv = lead.inv()
        w = {i - v: c.mul(linv) for i, c in self.coeffs.items() if i != v}
        wlau = LaurentElement(ctx, w, rel)
        acc = LaurentElement(ctx, {0: ctx.k.one()}, rel)
        term = LaurentElement(ctx, {0: ctx.k.one()}, rel)
        wv = wlau.valuation()
        if wv != INF:
            n = 0
            while n * wv < rel:
                term = term.mul(wlau).neg().truncate(rel)
                acc = acc.add(term)
                n += 1
        out = {i - v: c.mul(linv) for i, c in acc.coeffs.items()}
        return LaurentElement(ctx, out, rel - v if rel != INF else INF)

    def powi(self, n):
        if n < 0:
            return self.inv().powi(-n)
        if n == 0:
            return LaurentElement(self.ctx, {0: self.ctx.k.one()}, INF)
        out = self
        for bit in bin(n)[3:]:
            out = out.mul(out)
            if bit == "1":
                out = out.mul(self)
        return out

    def shift(self, i):
        return LaurentElement(
            self.ctx, {j + i: c for j, c in self.coeffs.items()}, self.prec + i
        )

    def derivative(self):
        """Formal d/dt."""
        out = {}
        for i, c in self.coeffs.items():
            s = c.scale(i % self.ctx.p)
            if not s.is_zero():
                out[i - 1] = s
        return LaurentElement(self.ctx, out, self.prec - 1)

    def residue(self):
        v = self.valuation()
        if v != 0:
            raise DomainError("residue needs a unit, valuation is %s" % v)
        return self.coeffs[0]

    def digit(self, m):
        if m >= self.prec:
            raise PrecisionError("digit at t^%d unknown: precision is %s" % (m, self.prec))
        return self.coeffs.get(m, self.ctx.k.zero())

    def digits(self, lo=None, hi=None):
        items = sorted(self.coeffs.items())
        return [(i, c) for i, c in items if (lo is None or i >= lo) and (hi is None or i < hi)]

    def coeff_at(self, m):
        """Like digit() but with no precision guard; internal use."""
        return self.coeffs.get(m, self.ctx.k.zero())

    def eq_to_precision(self, other):
        return self.sub(other).is_zero_to_precision()

    def truncate(self, P):
        return LaurentElement(self.ctx, self.coeffs, min(self.prec, P))

    def __repr__(self):
        if not self.coeffs:
            return "0" if self.prec == INF else "O(t^%s)" % self.prec
        parts = ["%r*t^%d" % (c, i) for i, c in sorted(self.coeffs.items())]
        tail = "" if self.prec == INF else " + O(t^%s)" % self.prec
        return " + ".join(parts) + tail

    def to_literal(self):
        if not self.coeffs:
            return "0"
        k = self.ctx.k
        parts = []
        for i, c in sorted(self.coeffs.items()):
            if k.f == 1:
                cs = str(c.coords[0])
            else:
                monos = []
                for s, a in enumerate(c.coords):
                    if a:
                        monos.append(
                            str(a) if s == 0 else ("%d*g" % a if s == 1 else "%d*g^%d" % (a, s))
                        )
                cs = "(" + " + ".join(monos) + ")"
            if i == 0:
                parts.append(cs)
            elif i == 1:
                parts.append("%s*t" % cs)
            else:
                parts.append("%s*t^%d" % (cs, i))
        return " + ".join(parts)


# ================================================================ free functions


def val(x):
    """The valuation of x; INF for (truncated) zero."""
    return x.valuation()


def arith(x, y, op):
    """Dispatcher kept for symmetry with the operation catalogue."""
    if op == "add":
        return x.add(y)
    if op == "mul":
        return x.mul(y)
    if op == "inv":
        return x.inv()
    if op == "pow":
        return x.powi(y)
    raise MalformedInputError("unknown op %r" % (op,))


def teichmuller(ctx, r, prec=None):
    return ctx.teichmuller(r, prec)


def residue_trace(r):
    """Trace of a residue element down to F_p, as an integer in [0, p)."""
    return r.trace()


def series_residue_and_dlog(x, u):
    """S(res(x * du/u)) in F_p, for char-p fields (the Schmid pairing kernel)."""
    ctx = x.ctx
    if ctx.characteristic != ctx.p:
        raise UnsupportedCaseError("series residue/dlog is defined in characteristic p only")
    if u.is_zero_to_precision():
        raise DomainError("dlog of zero")
    w = x.mul(u.derivative().mul(u.inv()))
    if w.prec <= -1:
        raise PrecisionError("t^-1 coefficient of x * du/u is not determined")
    return w.coeff_at(-1).trace()


# ================================================================ parsing


def parse_field(text, prec_override=None):
    """Field descriptor grammar:

    Qp p=<prime> f=<int> [eis=c0,c1,...,1] [prec=<int>]
    Fq((t)) p=<prime> f=<int> [resf=c0,...,1] [prec=<int>]
    """
    tokens = text.split()
    if not tokens:
        raise MalformedInputError("empty field descriptor (expected 'Qp ...' or 'Fq((t)) ...')")
    head, rest = tokens[0], tokens[1:]
    if head not in ("Qp", "Fq((t))"):
        raise MalformedInputError(
            "field descriptor must start with 'Qp' or 'Fq((t))', got %r" % head
        )
    kv = {}
    for pos, tok in enumerate(rest, start=2):
        if "=" not in tok:
            raise MalformedInputError(
                "token %d (%r): expected key=value (keys: p, f, eis, resf, prec)" % (pos, tok)
            )
        key, _, value = tok.partition("=")
        if key in kv:
            raise MalformedInputError("duplicate key %r in field descriptor" % key)
        kv[key] = value
    try:
        p = int(kv.pop("p"))
        f = int(kv.pop("f", "1"))
    except KeyError as exc:
        raise MalformedInputError("field descriptor is missing key %s" % exc) from None
    except ValueError as exc:
        raise MalformedInputError("field descriptor: %s" % exc) from None
    prec = int(kv.pop("prec", DEFAULT_PRECISION))
    if prec_override is not None:
        prec = prec_override

    def int_list(s):
        try:
            return tuple(int(x) for x in s.split(","))
        except ValueError:
            raise MalformedInputError("expected comma-separated integers, got %r" % s) from None

    if head == "Qp":
        eis = int_list(kv.pop("eis")) if "eis" in kv else None
        if kv:
            raise MalformedInputError("unknown keys for Qp: %s" % sorted(kv))
        d = FieldDescriptor(0, p, f, eisenstein_poly=eis, default_precision=prec)
    else:
        resf = int_list(kv.pop("resf")) if "resf" in kv else None
        if kv:
            raise MalformedInputError("unknown keys for Fq((t)): %s" % sorted(kv))
        d = FieldDescriptor(p, p, f, residue_poly=resf, default_precision=prec)
    return make_field(d)


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("int", int(text[i:j])))
                i = j
            elif ch.isalpha():
                j = i
                while j < len(text) and text[j].isalpha():
                    j += 1
                self.toks.append(("name", text[i:j]))
                i = j
            elif ch in "+-*^()":
                self.toks.append((ch, ch))
                i += 1
            else:
                raise MalformedInputError(
                    "element literal: unexpected character %r at position %d" % (ch, i)
                )
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok


def parse_element(ctx, text):
    """Element literal: sums/products of integers, pi/t, w/g, with ^ powers."""
    toks = _Tokens(text)
    value = _parse_expr(ctx, toks)
    if toks.peek()[0] is not None:
        raise MalformedInputError(
            "element literal: trailing input starting at token %r" % (toks.peek()[1],)
        )
    return value


def _parse_expr(ctx, toks):
    sign = 1
    kind, _ = toks.peek()
    if kind in ("+", "-"):
        toks.next()
        sign = -1 if kind == "-" else 1
    acc = _parse_term(ctx, toks)
    if sign < 0:
        acc = acc.neg()
    while True:
        kind, _ = toks.peek()
        if kind not in ("+", "-"):
            return acc
        toks.next()
        term = _parse_term(ctx, toks)
        acc = acc.add(term if kind == "+" else term.neg())


def _parse_term(ctx, toks):
    acc = _parse_factor(ctx, toks)
    while True:
        kind, _ = toks.peek()
        if kind == "*":
            toks.next()
            acc = acc.mul(_parse_factor(ctx, toks))
        elif kind in ("int", "name", "("):
            # juxtaposition like "2 pi" reads as a product
            acc = acc.mul(_parse_factor(ctx, toks))
        else:
            return acc


def _parse_factor(ctx, toks):
    base = _parse_atom(ctx, toks)
    kind, _ = toks.peek()
    if kind == "^":
        toks.next()
        sign = 1
        k2, _ = toks.peek()
        if k2 == "-":
            toks.next()
            sign = -1
        k3, v3 = toks.next()
        if k3 != "int":
            raise MalformedInputError("element literal: expected integer exponent")
        return base.powi(sign * v3)
    return base


def _parse_atom(ctx, toks):
    kind, value = toks.next()
    if kind == "int":
        return ctx.from_int(value)
    if kind == "(":
        inner = _parse_expr(ctx, toks)
        k, _ = toks.next()
        if k != ")":
            raise MalformedInputError("element literal: missing closing parenthesis")
        return inner
    if kind == "name":
        if ctx.characteristic == 0:
            if value == "pi":
                return ctx.pi()
            if value == "p":
                return ctx.from_int(ctx.p)
            if value == "w":
                return ctx.w_gen()
        else:
            if value == "t":
                return ctx.pi()
            if value == "g":
                if ctx.f < 2:
                    raise MalformedInputError("residue generator g needs f >= 2")
                return ctx.teichmuller(ctx.k.gen())
        raise MalformedInputError(
            "element literal: unknown name %r for this field" % value
        )
    raise MalformedInputError("element literal: unexpected token %r" % (value,))
