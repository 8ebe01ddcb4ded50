"""Normal forms in K*/(K*)^p and K+/wp(K+), and adapted bases for both.

Multiplicative side.  A nonzero x factors as pi^v * tau(r) * z with z a
principal unit, and the class of x modulo p-th powers is carried by v mod p
together with the image of z in the filtered quotient U_1 / (further p-th
powers).  The reducer walks z down the filtration: at each level m it either
divides out an explicit p-th power that cancels the leading digit, or
certifies the digit as an obstruction and stops.  Which of the two happens
is decided *empirically*: for each level the map "b -> level-m digit of
(1 + tau(b) pi^s)^p" is evaluated on a k-basis and the resulting F_p-linear
system is solved, so no closed-form case analysis of binomial valuations is
trusted at runtime.  Obstructions can only appear at levels m < pe/(p-1)
with p !| m, plus the single boundary level pe/(p-1) when the p-th roots of
unity are present; the reducer checks its own output against that shape.

Additive side (char p only).  The same walk for wp(y) = y^p - y: poles of
order divisible by p are absorbed into the certificate, poles of order
prime to p survive into the normal form, the constant digit collapses onto
a fixed trace-one line, and everything of positive valuation is killed by a
telescoping series.

On top of the two reducers sit adapted bases of the quotients (one basis
vector per obstruction slot), coordinates relative to such a basis, and the
codimension profile of the filtration.
"""

import random

from .errors import (
    DomainError,
    InternalError,
    OutOfWindowError,
    PrecisionError,
    UnsupportedCaseError,
)
from .fp_linalg import FpVector, member, rref, solve
from .local_arith import INF, bp_index, val

# Full-enumeration independence checks are skipped above this many classes
# (p^dim combinations); pairwise products and sampled combinations run instead.
_ENUMERATION_BUDGET = 4096

_PRECISION_SLACK = 2  # extra known digits demanded beyond the last level read


# ---------------------------------------------------------------- thresholds


def first_trivial_level(ctx):
    """Least m such that every principal unit in U_m is a p-th power.

    Equals pe/(p-1) + 1 when that index is an integer, and b_p(e) + 1
    otherwise.  Char-0 fields only; in char p no such level exists.
    """
    if ctx.characteristic != 0:
        raise UnsupportedCaseError(
            "the unit filtration of a char-p field has no trivial tail"
        )
    deepest = ctx.pc if ctx.pc is not None else bp_index(ctx.p, ctx.e)
    return deepest + 1


def _kill_exponent(ctx, m):
    """Exponent s so that (1 + tau(b) pi^s)^p can cancel a level-m digit.

    None means level m holds obstructions (m prime to p below the boundary).
    """
    if ctx.pc is not None and m == ctx.pc:
        return ctx.c
    if m * (ctx.p - 1) < ctx.p * ctx.e:  # m < pe/(p-1), exactly, in integers
        return m // ctx.p if m % ctx.p == 0 else None
    return m - ctx.e


def _class_cache(ctx):
    try:
        return ctx._class_spaces_cache
    except AttributeError:
        ctx._class_spaces_cache = {}
        return ctx._class_spaces_cache


def _kill_columns(ctx, m):
    """The level-m digit of (1 + tau(theta_j) pi^s)^p for each basis theta_j.

    Returns (s, columns); cached per level.  The digits are read off from
    actual p-th powers, so the linear system solved against these columns is
    correct by construction rather than by a binomial-valuation argument.
    """
    cache = _class_cache(ctx)
    key = ("kill", m)
    if key not in cache:
        s = _kill_exponent(ctx, m)
        if s is None:
            raise InternalError("no kill map exists at level %d" % m)
        hi = m + 2
        one = ctx.one(hi)
        cols = []
        for theta in ctx.k.basis():
            factor = one.add(ctx.teichmuller(theta, hi).shift(s))
            diff = factor.powi(ctx.p).sub(one)
            if val(diff) < m:
                raise InternalError(
                    "p-th power of a level-%d kill factor sticks out at level %s"
                    % (m, val(diff))
                )
            cols.append(diff.digit(m).fp_vector())
        cache[key] = (s, cols)
    return cache[key]


def _boundary_data(ctx):
    """Image of the level-pc kill map, and a residue outside it.

    The map has corank 1 exactly when the p-th roots of unity are present
    (its kernel is generated by the digit of zeta - 1); anything else means
    the mu_p decision and the descent disagree, which is a hard error.
    """
    cache = _class_cache(ctx)
    if "boundary" not in cache:
        _, cols = _kill_columns(ctx, ctx.pc)
        image = rref(cols, p=ctx.p, ambient_dim=ctx.f)
        corank = ctx.f - image.dim()
        if corank != (1 if ctx.mu_p_present else 0):
            raise InternalError(
                "level-%d kill map has corank %d but mu_p present is %r"
                % (ctx.pc, corank, ctx.mu_p_present)
            )
        a_star = None
        if corank == 1:
            for cand in ctx.k.elements():
                if not member(image, cand.fp_vector()):
                    a_star = cand
                    break
        cache["boundary"] = (cols, image, a_star)
    return cache["boundary"]


def _solve_kill(ctx, m, a):
    """Find b with (1 + tau(b) pi^s)^p = 1 + tau(a) pi^m + (deeper), if any."""
    s, cols = _kill_columns(ctx, m)
    x = solve(cols, a.fp_vector())
    if x is None:
        return s, None
    return s, ctx.k.elt(x)


# ---------------------------------------------------------------- reductions


class UnitClassReduction:
    """Outcome of reducing x in K* modulo p-th powers (char 0).

    status          "trivial" or "nontrivial"
    level_index     first obstruction level j (0 when the valuation is prime
                    to p); None for trivial classes
    levels          {m: k-digit} for every obstruction level that survives
    normalized_rep  pi^(v mod p) * prod_m (1 + tau(a_m) pi^m): a canonical
                    representative of the whole class, not just its leading
                    term; the one() of the field for trivial classes
    certificate     y with y^p * normalized_rep = x up to U_depth
    """

    __slots__ = (
        "status",
        "level_index",
        "levels",
        "normalized_rep",
        "certificate",
        "pi_exponent",
        "unit_level",
        "unit_leading",
        "kill_steps",
        "depth",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    def is_trivial(self):
        return self.status == "trivial"

    def verify_against(self, x):
        """Check y^p * rep = x up to U_depth against the original element."""
        w = x.mul(self.certificate.powi(x.ctx.p).inv()).mul(self.normalized_rep.inv())
        d = val(w.sub(x.ctx.one(w.P)))
        return d == INF or d >= min(self.depth, w.P)

    def __repr__(self):
        if self.status == "trivial":
            return "UnitClassReduction(trivial, depth=%d)" % self.depth
        return "UnitClassReduction(nontrivial, j=%d, rep=%r)" % (
            self.level_index,
            self.normalized_rep,
        )


def unit_class_reduce(x, target=None):
    """Reduce x modulo (K*)^p by explicit descent through the unit filtration.

    Divides out p-th powers level by level until an obstruction is hit or
    the triviality threshold is passed.  `target` (default: the threshold)
    caps how deep the trivial-case certificate reaches; it is lowered to the
    element's precision when necessary.

    Raises PrecisionError when the input does not carry enough known digits
    to see the whole filtration (the threshold plus two digits of slack
    beyond the valuation).
    """
    ctx = x.ctx
    if ctx.characteristic != 0:
        raise UnsupportedCaseError(
            "unit_class_reduce handles char-0 fields; use as_class_reduce or "
            "windowed_unit_reduce in char p"
        )
    v = val(x)
    if v == INF:
        raise DomainError("cannot reduce zero (or a truncation of zero)")
    v = int(v)
    stop = first_trivial_level(ctx)
    z = x.shift(-v) if v else x
    if z.P < stop + _PRECISION_SLACK:
        raise PrecisionError(
            "unit class reduction reads digits up to level %d and needs "
            "precision >= %d beyond the valuation; element has %d"
            % (stop - 1, stop + _PRECISION_SLACK, z.P)
        )
    if target is None:
        target = stop
    target = min(target, z.P - 1)
    hi = target + ctx.e + 4

    r = z.residue()
    y = ctx.teichmuller(r.pth_root(), hi)
    z = z.mul(ctx.teichmuller(r.inv(), hi))
    one = ctx.one(hi)

    levels = {}
    steps = 0
    prev = 0
    while True:
        diff = z.sub(ctx.one(z.P))
        m = diff.valuation()
        if m == INF or m >= target:
            break
        m = int(m)
        if m <= prev:
            raise InternalError("descent failed to advance past level %d" % m)
        prev = m
        a = diff.digit(m)
        obstruction = _kill_exponent(ctx, m) is None
        if not obstruction:
            s, b = _solve_kill(ctx, m, a)
            if b is None:
                if not (ctx.pc is not None and m == ctx.pc):
                    raise InternalError(
                        "kill system unsolvable at non-boundary level %d" % m
                    )
                obstruction = True
            else:
                factor = one.add(ctx.teichmuller(b, hi).shift(s))
                z = z.mul(factor.powi(ctx.p).inv())
                y = y.mul(factor)
                steps += 1
        if obstruction:
            # record the digit and divide out its monomial so the walk can
            # continue: the class may have components at deeper levels too
            if m % ctx.p == 0 and m != ctx.pc:
                raise InternalError("obstruction at an absorbable level %d" % m)
            levels[m] = a
            z = z.mul(one.add(ctx.teichmuller(a, hi).shift(m)).inv())
        if steps + len(levels) > 2 * stop + 4:
            raise InternalError("descent exceeded its step budget")

    pi_rem, pi_quot = v % ctx.p, v // ctx.p
    if pi_quot:
        y = y.mul(ctx.pi(hi).powi(pi_quot))
    rep = ctx.one(hi)
    if pi_rem:
        rep = rep.mul(ctx.pi(hi).powi(pi_rem))
    for m in sorted(levels):
        rep = rep.mul(one.add(ctx.teichmuller(levels[m], hi).shift(m)))

    first = min(levels) if levels else None
    trivial = pi_rem == 0 and not levels
    return UnitClassReduction(
        status="trivial" if trivial else "nontrivial",
        level_index=None if trivial else (0 if pi_rem else first),
        levels=levels,
        normalized_rep=rep,
        certificate=y,
        pi_exponent=v,
        unit_level=first,
        unit_leading=levels.get(first) if first is not None else None,
        kill_steps=steps,
        depth=target,
    )


class WindowedUnitReduction:
    """Multiplicative normal form modulo p-th powers *and* U_(window+1).

    Char-p fields have no triviality threshold, so reduction is only
    meaningful relative to a window: the class is pinned down by the
    t-exponent mod p and one k-digit per prime-to-p level up to the window.
    """

    __slots__ = (
        "window",
        "t_exponent",
        "levels",
        "normalized_rep",
        "certificate",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    def trivial_in_window(self):
        return self.t_exponent == 0 and not self.levels

    def __repr__(self):
        return "WindowedUnitReduction(W=%d, t^%d, levels=%r)" % (
            self.window,
            self.t_exponent,
            {m: a for m, a in sorted(self.levels.items())},
        )


def windowed_unit_reduce(x, window):
    """Reduce x in K* modulo p-th powers down to level `window` (char p)."""
    ctx = x.ctx
    if ctx.characteristic != ctx.p:
        raise UnsupportedCaseError("windowed reduction is the char-p path")
    window = int(window)
    if window < 1:
        raise DomainError("window must be a positive level, got %d" % window)
    v = val(x)
    if v == INF:
        raise DomainError("cannot reduce zero (or a truncation of zero)")
    v = int(v)
    z = x.shift(-v) if v else x
    if z.prec <= window + 1:
        raise PrecisionError(
            "window %d needs more than %d known digits past the valuation"
            % (window, window + 1)
        )
    if window + 2 > ctx.default_precision:
        raise PrecisionError(
            "window %d exceeds the field's working precision %d"
            % (window, ctx.default_precision)
        )

    r = z.residue()
    y = ctx.from_digits([(0, r.pth_root())])
    z = z.mul(ctx.from_digits([(0, r.inv())]))
    one = ctx.one()
    levels = {}
    prev = 0
    while True:
        diff = z.sub(one)
        m = diff.valuation()
        if m == INF or m > window:
            break
        m = int(m)
        if m <= prev:
            raise InternalError("windowed descent failed to advance at level %d" % m)
        prev = m
        a = diff.digit(m)
        if m % ctx.p == 0:
            factor = one.add(ctx.from_digits([(m // ctx.p, a.pth_root())]))
            z = z.mul(factor.powi(ctx.p).inv())
            y = y.mul(factor)
        else:
            levels[m] = a
            z = z.mul(one.add(ctx.from_digits([(m, a)])).inv())

    t_rem, t_quot = v % ctx.p, v // ctx.p
    if t_quot:
        y = y.mul(ctx.pi().powi(t_quot))
    rep = ctx.pi().powi(t_rem) if t_rem else ctx.one()
    for m in sorted(levels):
        rep = rep.mul(one.add(ctx.from_digits([(m, levels[m])])))
    out = WindowedUnitReduction(
        window=window,
        t_exponent=t_rem,
        levels=levels,
        normalized_rep=rep,
        certificate=y,
    )
    return out


class ASClassReduction:
    """Outcome of reducing x in K+ modulo wp(K+) = {y^p - y} (char p).

    status          "trivial" or "nontrivial"
    level           pole order delta of the normal form (0 for the trace
                    line); None for trivial classes
    poles           {m: k-digit} for the surviving poles, all m prime to p
    trace_coeff     s in [0, p): the constant part reduces to s * theta,
                    theta the field's fixed trace-one element
    normal_form     sum of the surviving pole monomials plus s * theta
    normalized_rep  leading monomial of normal_form (0 if trivial)
    certificate     y with x - wp(y) = normal_form + O(t^depth)
    """

    __slots__ = (
        "status",
        "level",
        "poles",
        "trace_coeff",
        "normal_form",
        "normalized_rep",
        "certificate",
        "depth",
    )

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    def is_trivial(self):
        return self.status == "trivial"

    def verify_against(self, x):
        y = self.certificate
        lhs = x.sub(y.powi(x.ctx.p).sub(y)).sub(self.normal_form)
        d = val(lhs)
        return d == INF or d >= min(self.depth, lhs.prec)

    def __repr__(self):
        if self.status == "trivial":
            return "ASClassReduction(trivial)"
        return "ASClassReduction(nontrivial, delta=%d, s=%d, poles=%r)" % (
            self.level,
            self.trace_coeff,
            {m: a for m, a in sorted(self.poles.items())},
        )


def as_class_reduce(x):
    """Reduce x modulo wp(K+) to its pole/trace normal form (char p).

    Poles of order divisible by p are absorbed by subtracting wp of an exact
    monomial; poles of prime-to-p order go straight into the normal form.
    The constant digit keeps only its trace, carried on a fixed trace-one
    element of k, and the positive-valuation tail is killed by the
    telescoping series y = -(w + w^p + w^(p^2) + ...).
    """
    ctx = x.ctx
    if ctx.characteristic != ctx.p:
        raise UnsupportedCaseError("as_class_reduce needs a char-p field")
    if x.prec < 1:
        raise PrecisionError(
            "constant digit unknown at precision %s; cannot normalize" % x.prec
        )
    depth = min(ctx.default_precision, x.prec)

    z = x
    y = ctx.zero()
    poles = {}
    prev_order = None
    while True:
        v = z.valuation()
        if v == INF or v >= 0:
            break
        m = -int(v)
        if prev_order is not None and m >= prev_order:
            raise InternalError("pole absorption failed to advance at order %d" % m)
        prev_order = m
        a = z.digit(-m)
        if m % ctx.p == 0:
            mono = ctx.from_digits([(-m // ctx.p, a.pth_root())])
            z = z.sub(mono.powi(ctx.p).sub(mono))
            y = y.add(mono)
        else:
            poles[m] = a
            z = z.sub(ctx.from_digits([(-m, a)]))

    a0 = z.digit(0)
    s = a0.trace()
    theta = ctx.trace_one()
    b0 = ctx.k.wp_preimage(a0.sub(theta.scale(s)))
    if b0 is None:
        raise InternalError("trace-zero residue escaped the image of wp on k")
    if not b0.is_zero():
        mono = ctx.from_digits([(0, b0)])
        z = z.sub(mono.powi(ctx.p).sub(mono))
        y = y.add(mono)

    const = ctx.from_digits([(0, theta.scale(s))]) if s else ctx.zero()
    w = z.sub(const)
    if val(w) != INF and val(w) < 1:
        raise InternalError("constant normalization left a level-0 digit behind")
    # wp(-(w + w^p + ...)) = w, and the series terminates at the depth cap
    acc = ctx.zero()
    term = w.truncate(min(depth, w.prec))
    while val(term) != INF and val(term) < depth:
        acc = acc.add(term)
        term = term.powi(ctx.p).truncate(min(depth, term.prec))
    y = y.sub(acc)

    normal = const
    for m in sorted(poles):
        normal = normal.add(ctx.from_digits([(-m, poles[m])]))
    if poles:
        delta = max(poles)
        rep = ctx.from_digits([(-delta, poles[delta])])
        status = "nontrivial"
    elif s:
        delta = 0
        rep = const
        status = "nontrivial"
    else:
        delta = None
        rep = ctx.zero()
        status = "trivial"
    if delta is not None and delta > 0 and delta % ctx.p == 0:
        raise InternalError("surviving pole order %d is divisible by p" % delta)

    return ASClassReduction(
        status=status,
        level=delta,
        poles=poles,
        trace_coeff=s,
        normal_form=normal,
        normalized_rep=rep,
        certificate=y,
        depth=depth,
    )


# ---------------------------------------------------------------- bases


class AdaptedBasis:
    """A basis of the class quotient, one vector per filtration slot.

    vectors is a tuple of (label, element, level) sorted by level; mult
    bases start with the uniformizer line at level 0, additive bases with
    the trace line.  Independence of the classes is checked at build time.
    """

    __slots__ = ("ctx", "space", "window", "vectors")

    def __init__(self, ctx, space, window, vectors):
        self.ctx = ctx
        self.space = space
        self.window = window
        self.vectors = tuple(vectors)

    def dim(self):
        return len(self.vectors)

    def elements(self):
        return [g for _, g, _ in self.vectors]

    def labels(self):
        return [lbl for lbl, _, _ in self.vectors]

    def levels(self):
        return [lvl for _, _, lvl in self.vectors]

    def __repr__(self):
        return "AdaptedBasis(%s, %s, dim=%d%s)" % (
            self.ctx.field_label(),
            self.space,
            self.dim(),
            "" if self.window is None else ", window=%d" % self.window,
        )


def adapted_basis(ctx, space="mult", window=None):
    """Build (and cache) an adapted basis of K*/(K*)^p or K+/wp(K+).

    Char 0: the full multiplicative quotient, no window.  Char p: both
    quotients are infinite-dimensional, so a window (deepest level kept) is
    required.  Basis classes are verified independent before the basis is
    returned: exhaustively when p^dim is small, otherwise pairwise plus a
    seeded random sample of longer combinations.
    """
    if space not in ("mult", "add"):
        raise DomainError("space must be 'mult' or 'add', got %r" % (space,))
    if ctx.characteristic == 0:
        if space == "add":
            raise UnsupportedCaseError(
                "the additive quotient is only nontrivial in char p"
            )
        if window is not None:
            raise DomainError("char-0 mult bases are finite; no window applies")
    else:
        if window is None:
            raise DomainError("char-p bases need a window (deepest level kept)")
        window = int(window)
        if window < 1:
            raise DomainError("window must be >= 1, got %d" % window)

    cache = _class_cache(ctx)
    key = ("basis", space, window)
    if key in cache:
        return cache[key]

    vectors = []
    if ctx.characteristic == 0:
        vectors.append(("pi", ctx.pi(), 0))
        for i in range(1, ctx.e + 1):
            b = bp_index(ctx.p, i)
            for sidx, theta in enumerate(ctx.k.basis()):
                vectors.append(
                    ("u%d_%d" % (b, sidx), ctx.one().add(ctx.teichmuller(theta).shift(b)), b)
                )
        if ctx.mu_p_present:
            _, _, a_star = _boundary_data(ctx)
            vectors.append(
                (
                    "u%d_*" % ctx.pc,
                    ctx.one().add(ctx.teichmuller(a_star).shift(ctx.pc)),
                    ctx.pc,
                )
            )
    elif space == "mult":
        vectors.append(("t", ctx.pi(), 0))
        i = 1
        while bp_index(ctx.p, i) <= window:
            b = bp_index(ctx.p, i)
            for sidx, theta in enumerate(ctx.k.basis()):
                vectors.append(
                    ("u%d_%d" % (b, sidx), ctx.one().add(ctx.from_digits([(b, theta)])), b)
                )
            i += 1
    else:
        vectors.append(("c", ctx.from_digits([(0, ctx.trace_one())]), 0))
        i = 1
        while bp_index(ctx.p, i) <= window:
            b = bp_index(ctx.p, i)
            for sidx, theta in enumerate(ctx.k.basis()):
                vectors.append(
                    ("a%d_%d" % (b, sidx), ctx.from_digits([(-b, theta)]), b)
                )
            i += 1

    basis = AdaptedBasis(ctx, space, window, vectors)
    _check_independent(basis)
    cache[key] = basis
    return basis


def _combo_is_trivial(basis, coeffs):
    """Reduce the coefficient combination of basis classes; True if trivial."""
    ctx = basis.ctx
    if basis.space == "mult":
        acc = ctx.one()
        for c, g in zip(coeffs, basis.elements()):
            if c:
                acc = acc.mul(g.powi(c))
        if ctx.characteristic == 0:
            return unit_class_reduce(acc).is_trivial()
        return windowed_unit_reduce(acc, basis.window).trivial_in_window()
    acc = ctx.zero()
    for c, g in zip(coeffs, basis.elements()):
        if c:
            acc = acc.add(g.scale_int(c))
    return as_class_reduce(acc).is_trivial()


def _check_independent(basis):
    p, d = basis.ctx.p, basis.dim()
    if p**d <= _ENUMERATION_BUDGET:
        combos = _all_nonzero_tuples(p, d)
    else:
        combos = _sampled_tuples(p, d)
    for coeffs in combos:
        if _combo_is_trivial(basis, coeffs):
            raise InternalError(
                "adapted basis classes are dependent: combination %r is trivial"
                % (coeffs,)
            )


def _all_nonzero_tuples(p, d):
    out = []
    for n in range(1, p**d):
        coeffs = []
        for _ in range(d):
            coeffs.append(n % p)
            n //= p
        out.append(tuple(coeffs))
    return out


def _sampled_tuples(p, d):
    # singles, pairs, and a fixed-seed sample of dense combinations
    combos = set()
    for i in range(d):
        for a in range(1, p):
            one = [0] * d
            one[i] = a
            combos.add(tuple(one))
            for j in range(i + 1, d):
                for b in range(1, p):
                    two = list(one)
                    two[j] = b
                    combos.add(tuple(two))
    rng = random.Random(0xADA)
    while len(combos) < d * d * (p - 1) * (p - 1) + 60:
        cand = tuple(rng.randrange(p) for _ in range(d))
        if any(cand):
            combos.add(cand)
    return sorted(combos)


# ---------------------------------------------------------------- coordinates


def coordinates(basis, x):
    """Coordinates of the class of x in the adapted basis, as an FpVector.

    Multiplicative coordinates are taken modulo U_(window+1) in char p (the
    quotient the basis actually spans).  Additive input whose normal form
    has a pole deeper than the window is rejected with OutOfWindowError.
    The result is verified by cancelling it against x and reducing the
    remainder to trivial.
    """
    ctx = basis.ctx
    if x.ctx is not ctx:
        raise DomainError("element and basis live over different fields")
    p = ctx.p
    slots = {}
    if basis.space == "mult" and ctx.characteristic == 0:
        slots = _char0_mult_coordinates(basis, x)
    elif basis.space == "mult":
        slots = _charp_mult_coordinates(basis, x)
    else:
        red = as_class_reduce(x)
        for m, a in red.poles.items():
            if m > basis.window:
                raise OutOfWindowError(
                    "normal form has a pole of order %d outside window %d"
                    % (m, basis.window)
                )
            for sidx, c in enumerate(a.fp_vector().coords):
                slots["a%d_%d" % (m, sidx)] = c
        slots["c"] = red.trace_coeff

    coords = FpVector(p, [slots.get(lbl, 0) for lbl in basis.labels()])
    _verify_coordinates(basis, x, coords)
    return coords


def _char0_mult_coordinates(basis, x):
    """Descent that records basis coefficients instead of only killing."""
    ctx = basis.ctx
    v = val(x)
    if v == INF:
        raise DomainError("zero has no class")
    v = int(v)
    stop = first_trivial_level(ctx)
    z = x.shift(-v) if v else x
    if z.P < stop + _PRECISION_SLACK:
        raise PrecisionError(
            "coordinates need precision >= %d beyond the valuation, have %d"
            % (stop + _PRECISION_SLACK, z.P)
        )
    hi = stop + ctx.e + 4
    slots = {"pi": v % ctx.p}
    r = z.residue()
    z = z.mul(ctx.teichmuller(r.inv(), hi))
    one = ctx.one(hi)
    gens = {(lbl, lvl): g for lbl, g, lvl in basis.vectors}

    guard = 0
    while True:
        diff = z.sub(ctx.one(z.P))
        m = diff.valuation()
        if m == INF or m >= stop:
            break
        m = int(m)
        a = diff.digit(m)
        s = _kill_exponent(ctx, m)
        if s is None:
            # a basis level: cancel with the basis vectors themselves
            for sidx, c in enumerate(a.fp_vector().coords):
                if c:
                    slots["u%d_%d" % (m, sidx)] = c
                    z = z.mul(gens[("u%d_%d" % (m, sidx), m)].powi(p_minus(ctx, c)))
        else:
            if ctx.pc is not None and m == ctx.pc and ctx.mu_p_present:
                cols, _, a_star = _boundary_data(ctx)
                lam, b = None, None
                for cand in range(ctx.p):
                    sol = solve(cols, a.sub(a_star.scale(cand)).fp_vector())
                    if sol is not None:
                        lam, b = cand, ctx.k.elt(sol)
                        break
                if lam is None:
                    raise InternalError(
                        "boundary digit falls outside span(image, a*)"
                    )
                if lam:
                    slots["u%d_*" % ctx.pc] = lam
                    z = z.mul(gens[("u%d_*" % ctx.pc, ctx.pc)].powi(p_minus(ctx, lam)))
                if not b.is_zero():
                    factor = one.add(ctx.teichmuller(b, hi).shift(ctx.c))
                    z = z.mul(factor.powi(ctx.p).inv())
            else:
                _, b = _solve_kill(ctx, m, a)
                if b is None:
                    raise InternalError("kill system unsolvable at level %d" % m)
                factor = one.add(ctx.teichmuller(b, hi).shift(s))
                z = z.mul(factor.powi(ctx.p).inv())
        guard += 1
        if guard > 3 * stop + 6:
            raise InternalError("coordinate descent exceeded its step budget")
    return slots


def _charp_mult_coordinates(basis, x):
    """Descent against the basis generators themselves (char p, windowed).

    Normal-form digits cannot be converted to coordinates level by level
    when f >= 2 or p > 2: products of same-level generators leave cross
    terms at deeper levels.  Cancelling with actual generator powers pushes
    those cross terms down to where they are counted correctly.
    """
    ctx = basis.ctx
    window = basis.window
    v = val(x)
    if v == INF:
        raise DomainError("zero has no class")
    v = int(v)
    z = x.shift(-v) if v else x
    if z.prec <= window + 1:
        raise PrecisionError(
            "window %d needs more than %d known digits past the valuation"
            % (window, window + 1)
        )
    slots = {"t": v % ctx.p}
    r = z.residue()
    z = z.mul(ctx.from_digits([(0, r.inv())]))
    one = ctx.one()
    gens = {(lbl, lvl): g for lbl, g, lvl in basis.vectors}

    guard = 0
    while True:
        diff = z.sub(one)
        m = diff.valuation()
        if m == INF or m > window:
            break
        m = int(m)
        a = diff.digit(m)
        if m % ctx.p == 0:
            factor = one.add(ctx.from_digits([(m // ctx.p, a.pth_root())]))
            z = z.mul(factor.powi(ctx.p).inv())
        else:
            for sidx, c in enumerate(a.fp_vector().coords):
                if c:
                    slots["u%d_%d" % (m, sidx)] = c
                    z = z.mul(gens[("u%d_%d" % (m, sidx), m)].powi(p_minus(ctx, c)))
        guard += 1
        if guard > (ctx.p + 1) * (window + 2):
            raise InternalError("windowed coordinate descent exceeded its budget")
    return slots


def p_minus(ctx, c):
    """The exponent -c represented in [1, p): gen^(p-c) cancels gen^c mod p-th powers."""
    return (ctx.p - c) % ctx.p


def _verify_coordinates(basis, x, coords):
    ctx = basis.ctx
    if basis.space == "mult":
        acc = x
        for c, g in zip(coords.coords, basis.elements()):
            if c:
                acc = acc.mul(g.powi(p_minus(ctx, c)))
        if ctx.characteristic == 0:
            ok = unit_class_reduce(acc).is_trivial()
        else:
            ok = windowed_unit_reduce(acc, basis.window).trivial_in_window()
    else:
        acc = x
        for c, g in zip(coords.coords, basis.elements()):
            if c:
                acc = acc.sub(g.scale_int(c))
        ok = as_class_reduce(acc).is_trivial()
    if not ok:
        raise InternalError("coordinate vector failed its cancellation check")


# ---------------------------------------------------------------- filtration


def filtration_dims(ctx, index_range, space="mult"):
    """Codimension profile of the filtration over an index range.

    Returns [(i, codim)] where codim is the dimension of the i-th graded
    piece of the class filtration: for mult, level-i units modulo deeper
    ones and p-th powers; for add (char p), pole order -i modulo shallower
    classes.  Counted from an adapted basis and cross-checked by reducing
    random elements sitting at each level.
    """
    lo, hi = index_range
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise DomainError("empty index range (%d, %d)" % (lo, hi))
    if space == "mult":
        if lo < 0:
            raise DomainError("multiplicative filtration levels start at 0")
        if ctx.characteristic == 0:
            basis = adapted_basis(ctx)
        else:
            basis = adapted_basis(ctx, "mult", window=max(hi, 1))
        counts = {}
        for _, _, lvl in basis.vectors:
            counts[lvl] = counts.get(lvl, 0) + 1
        out = []
        for i in range(lo, hi + 1):
            if ctx.characteristic == 0 and i > 0 and i >= first_trivial_level(ctx):
                codim = 0
            else:
                codim = counts.get(i, 0)
            out.append((i, codim))
        _crosscheck_mult_dims(ctx, out)
        return out
    if space != "add":
        raise DomainError("space must be 'mult' or 'add', got %r" % (space,))
    if ctx.characteristic == 0:
        raise UnsupportedCaseError("the additive quotient is only nontrivial in char p")
    if hi > 0:
        raise DomainError("additive filtration indices are <= 0 (i = -pole order)")
    basis = adapted_basis(ctx, "add", window=max(-lo, 1))
    counts = {}
    for _, _, lvl in basis.vectors:
        counts[lvl] = counts.get(lvl, 0) + 1
    out = [(i, counts.get(-i, 0)) for i in range(lo, hi + 1)]
    _crosscheck_add_dims(ctx, out)
    return out


def _crosscheck_mult_dims(ctx, profile):
    """Sample a unit at each level and confirm its reduction lands there."""
    rng = random.Random(0xD1)
    nonzero = [a for a in ctx.k.elements() if not a.is_zero()]
    for i, codim in profile:
        if i < 1:
            continue
        a = nonzero[rng.randrange(len(nonzero))]
        if ctx.characteristic == 0:
            if i + _PRECISION_SLACK + 1 > ctx.default_precision:
                continue
            u = ctx.one().add(ctx.teichmuller(a).shift(i))
            red = unit_class_reduce(u)
            lvl = red.unit_level
            deeper_ok = lvl is None or lvl > i
            if codim:
                if lvl != i:
                    raise InternalError(
                        "level-%d sample reduced to level %r against a basis count"
                        % (i, lvl)
                    )
            elif not deeper_ok:
                raise InternalError(
                    "level-%d sample obstructed where the basis has no slot" % i
                )
        else:
            if i + 2 > ctx.default_precision:
                continue
            u = ctx.one().add(ctx.from_digits([(i, a)]))
            red = windowed_unit_reduce(u, i + 1 if i % ctx.p == 0 else i)
            got = sorted(red.levels)
            if codim:
                if got != [i]:
                    raise InternalError(
                        "level-%d sample normalized to levels %r" % (i, got)
                    )
            elif i in got:
                raise InternalError(
                    "level-%d sample obstructed where the basis has no slot" % i
                )


def _crosscheck_add_dims(ctx, profile):
    rng = random.Random(0xD2)
    nonzero = [a for a in ctx.k.elements() if not a.is_zero()]
    for i, codim in profile:
        if i >= 0:
            continue
        a = nonzero[rng.randrange(len(nonzero))]
        red = as_class_reduce(ctx.from_digits([(i, a)]))
        if codim:
            if red.level != -i:
                raise InternalError(
                    "pole-order-%d sample reduced to delta=%r against a basis count"
                    % (-i, red.level)
                )
        elif red.level is not None and red.level == -i:
            raise InternalError(
                "pole-order-%d sample survived where the basis has no slot" % -i
            )
