"""Field contexts and exact element arithmetic.

The oracles here avoid the library's own representation: valuations are
cross-checked with plain integer arithmetic where the field embeds into
Q_p, and bp_index against a direct enumeration of integers prime to p.
"""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfk.errors import DomainError, MalformedInputError, PrecisionError
from lfk.local_arith import (
    INF,
    FieldDescriptor,
    bp_index,
    make_field,
    parse_element,
    parse_field,
    series_residue_and_dlog,
    val,
)


# ---------------------------------------------------------------- oracles


def oracle_bp_list(p, n):
    """First n positive integers not divisible by p, by brute enumeration."""
    out = []
    m = 1
    while len(out) < n:
        if m % p:
            out.append(m)
        m += 1
    return out


def oracle_vp(n, p):
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------- fixtures


@pytest.fixture(scope="module")
def q2():
    return parse_field("Qp p=2 f=1")


@pytest.fixture(scope="module")
def q3z():
    # Q_3(zeta_3): Eisenstein x^2 + 3x + 3
    return parse_field("Qp p=3 f=1 eis=3,3,1")


@pytest.fixture(scope="module")
def q2u2():
    # unramified quadratic extension of Q_2
    return parse_field("Qp p=2 f=2")


@pytest.fixture(scope="module")
def f2t():
    return parse_field("Fq((t)) p=2 f=1")


@pytest.fixture(scope="module")
def f3t():
    return parse_field("Fq((t)) p=3 f=1")


@pytest.fixture(scope="module")
def f4t():
    return parse_field("Fq((t)) p=2 f=2")


# ---------------------------------------------------------------- bp_index


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_bp_index_matches_enumeration(p):
    want = oracle_bp_list(p, 1000)
    got = [bp_index(p, i) for i in range(1, 1001)]
    assert got == want


def test_bp_index_rejects_nonpositive():
    with pytest.raises(DomainError):
        bp_index(3, 0)


# ---------------------------------------------------------------- constants


def test_q2_constants(q2):
    assert (q2.e, q2.f, q2.q) == (1, 1, 2)
    assert (q2.c, q2.pc) == (1, 2)
    assert q2.mu_p_present
    # zeta = -1
    assert q2.zeta.add(q2.one()).is_zero_to_precision()


def test_q3_zeta3_constants(q3z):
    assert (q3z.e, q3z.f) == (2, 1)
    assert (q3z.c, q3z.pc) == (1, 3)
    assert q3z.mu_p_present


def test_q3_plain_has_no_zeta3():
    ctx = parse_field("Qp p=3 f=1")
    # e = 1 is not divisible by p - 1 = 2: certified absent
    assert not ctx.mu_p_present and ctx.zeta is None


def test_q5_ramified_no_mu5():
    # x^2 - 5: e = 2 not divisible by 4
    ctx = parse_field("Qp p=5 f=1 eis=-5,0,1")
    assert not ctx.mu_p_present


def test_char_p_constants(f3t):
    assert f3t.e == INF
    assert not f3t.mu_p_present


def test_eisenstein_validation():
    with pytest.raises(MalformedInputError):
        parse_field("Qp p=2 f=1 eis=4,1")  # v(4) = 2
    with pytest.raises(MalformedInputError):
        parse_field("Qp p=2 f=1 eis=2,1,1")  # middle coefficient is a unit
    with pytest.raises(MalformedInputError):
        parse_field("Qp p=2 f=1 eis=2,2")  # not monic


def test_construction_rejects_tiny_precision():
    with pytest.raises(PrecisionError):
        parse_field("Qp p=2 f=1 prec=2")


# ---------------------------------------------------------------- valuations


def test_val_examples(q2, q3z):
    assert val(q2.from_int(12)) == 2  # v_2(12)
    assert val(q2.from_int(0)) == INF
    assert val(q3z.from_int(3)) == 2  # pi^2 || 3 when e = 2
    assert val(q3z.pi()) == 1
    assert val(q3z.from_int(5)) == 0


def test_val_against_integer_oracle(q2):
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randrange(1, 1 << 30)
        assert val(q2.from_int(n)) == oracle_vp(n, 2)


def test_val_of_p_is_e():
    for text in ["Qp p=2 f=1", "Qp p=3 f=1 eis=3,3,1", "Qp p=2 f=2"]:
        ctx = parse_field(text)
        assert val(ctx.from_int(ctx.p)) == ctx.e


def test_char_p_val(f3t):
    z = f3t.pi().powi(-4).add(f3t.one())
    assert val(z) == -4
    assert val(f3t.zero()) == INF


# ---------------------------------------------------------------- ring ops


def _random_element(ctx, rng, vmin=-3, vmax=8):
    pairs = []
    for i in range(vmin, vmax):
        pairs.append((i, rng.randrange(ctx.q)))
    z = ctx.from_digits((i, ctx.k.elt(_coords(ctx, d))) for i, d in pairs)
    return z


def _coords(ctx, n):
    out = []
    for _ in range(ctx.f):
        out.append(n % ctx.p)
        n //= ctx.p
    return out


@pytest.mark.parametrize("fieldname", ["q2", "q3z", "q2u2", "f3t", "f4t"])
def test_ultrametric_and_multiplicativity(fieldname, request):
    ctx = request.getfixturevalue(fieldname)
    rng = random.Random(hash(fieldname) & 0xFFFF)
    for _ in range(150):
        x = _random_element(ctx, rng)
        y = _random_element(ctx, rng)
        vx, vy = val(x), val(y)
        if vx == INF or vy == INF:
            continue
        assert val(x.mul(y)) == vx + vy
        vs = val(x.add(y))
        assert vs >= min(vx, vy)
        if vx != vy:
            assert vs == min(vx, vy)


@pytest.mark.parametrize("fieldname", ["q2", "q3z", "q2u2", "f3t", "f4t"])
def test_inverse_roundtrip(fieldname, request):
    ctx = request.getfixturevalue(fieldname)
    rng = random.Random(23)
    for _ in range(60):
        x = _random_element(ctx, rng)
        if x.is_zero_to_precision():
            continue
        z = x.mul(x.inv())
        assert z.sub(ctx.one()).is_zero_to_precision()


def test_inverse_of_zero_rejected(q2, f3t):
    for ctx in (q2, f3t):
        with pytest.raises(DomainError):
            ctx.zero().inv()


def test_associativity_spot(q3z):
    rng = random.Random(5)
    for _ in range(40):
        a, b, c = (_random_element(q3z, rng) for _ in range(3))
        left = a.mul(b).mul(c)
        right = a.mul(b.mul(c))
        assert left.eq_to_precision(right)
        left = a.add(b).add(c)
        right = a.add(b.add(c))
        assert left.eq_to_precision(right)


def test_distributivity_char_p_exact(f4t):
    rng = random.Random(9)
    for _ in range(40):
        a, b, c = (_random_element(f4t, rng) for _ in range(3))
        assert a.mul(b.add(c)).sub(a.mul(b).add(a.mul(c))).is_zero_to_precision()


# ---------------------------------------------------------------- digits


def test_digit_expansion_q2(q2):
    z = q2.from_int(12)  # 12 = 2^2 + 2^3
    ds = dict(z.digits(hi=6))
    assert sorted(ds) == [2, 3]


def test_digits_reassemble(q3z):
    rng = random.Random(31)
    for _ in range(25):
        z = _random_element(q3z, rng)
        if z.is_zero_to_precision():
            continue
        back = q3z.from_digits(z.digits(hi=20))
        assert z.sub(back).valuation() >= 20


def test_digit_precision_guard(q2):
    z = q2.from_int(3, prec=5)
    with pytest.raises(PrecisionError):
        z.digit(7)


def test_teichmuller_is_root_of_unity(q2u2, q3z):
    for ctx in (q2u2, q3z):
        for r in ctx.k.elements():
            if r.is_zero():
                continue
            tau = ctx.teichmuller(r)
            assert tau.powi(ctx.q - 1).sub(ctx.one()).is_zero_to_precision()
            assert tau.residue() == r


# ---------------------------------------------------------------- zeta


@pytest.mark.parametrize(
    "text", ["Qp p=2 f=1", "Qp p=3 f=1 eis=3,3,1", "Qp p=3 f=2 eis=3,3,1"]
)
def test_zeta_properties(text):
    ctx = parse_field(text)
    assert ctx.mu_p_present
    z = ctx.zeta
    assert val(z.sub(ctx.one())) == ctx.c
    assert z.powi(ctx.p).sub(ctx.one()).is_zero_to_precision()
    assert not z.sub(ctx.one()).is_zero_to_precision()


def test_frobenius_on_laurent(f2t):
    # squaring acts coefficient-wise on exponents in char 2
    z = f2t.pi().add(f2t.one())
    sq = z.mul(z)
    assert dict(sq.digits()) == {0: f2t.k.one(), 2: f2t.k.one()}


# ---------------------------------------------------------------- dlog/residue


def test_series_residue_examples(f3t):
    t = f3t.pi()
    one = f3t.one()
    # res(dt/t) = 1: S(1) = 1 in F_3
    assert series_residue_and_dlog(one, t) == 1
    # res(t^3 d(t)/t) = 0
    assert series_residue_and_dlog(t.powi(3), t) == 0
    # u = unit: du/u has no pole at all
    u = one.add(t)
    assert series_residue_and_dlog(one, u) == 0


def test_series_residue_valuation_rule(f3t, f4t):
    # res(du/u) = v(u) mod p, so x = 1 reads off the valuation
    for ctx in (f3t, f4t):
        rng = random.Random(41)
        for _ in range(40):
            u = _random_element(ctx, rng)
            if u.is_zero_to_precision():
                continue
            got = series_residue_and_dlog(ctx.one(), u)
            want = (val(u) * ctx.k.one().trace()) % ctx.p
            assert got == want


def test_dlog_multiplicative(f3t):
    rng = random.Random(47)
    x = f3t.pi().powi(-2)
    for _ in range(30):
        u = _random_element(f3t, rng)
        w = _random_element(f3t, rng)
        if u.is_zero_to_precision() or w.is_zero_to_precision():
            continue
        lhs = series_residue_and_dlog(x, u.mul(w))
        rhs = (series_residue_and_dlog(x, u) + series_residue_and_dlog(x, w)) % 3
        assert lhs == rhs


# ---------------------------------------------------------------- parsing


def test_parse_field_errors():
    with pytest.raises(MalformedInputError):
        parse_field("Zp p=2")
    with pytest.raises(MalformedInputError):
        parse_field("Qp f=1")
    with pytest.raises(MalformedInputError):
        parse_field("Qp p=4 f=1")
    with pytest.raises(MalformedInputError):
        parse_field("Qp p=2 f=1 bogus=3")
    with pytest.raises(MalformedInputError):
        parse_field("Fq((t)) p=2 f=1 eis=2,1")


def test_parse_element_grammar(q2, q3z, f3t, f4t):
    assert val(parse_element(q2, "12")) == 2
    assert val(parse_element(q3z, "pi^3")) == 3
    assert parse_element(q3z, "1 + 3*pi").digit(0) == q3z.k.one()
    assert val(parse_element(f3t, "t^-2 + 1")) == -2
    z = parse_element(f4t, "g*t + t^2")
    assert z.digit(1) == f4t.k.gen()
    with pytest.raises(MalformedInputError):
        parse_element(q2, "1 + $")
    with pytest.raises(MalformedInputError):
        parse_element(q2, "t")  # char-p name in a char-0 field
    with pytest.raises(MalformedInputError):
        parse_element(f3t, "pi")
    with pytest.raises(MalformedInputError):
        parse_element(q2, "(1 + pi")


@pytest.mark.parametrize("fieldname", ["q2", "q3z", "q2u2", "f3t", "f4t"])
def test_literal_roundtrip(fieldname, request):
    ctx = request.getfixturevalue(fieldname)
    rng = random.Random(hash(fieldname) & 0xFFF)
    for _ in range(40):
        z = _random_element(ctx, rng, vmin=-2, vmax=10)
        back = parse_element(ctx, z.to_literal())
        d = z.sub(back)
        if not d.is_zero_to_precision():
            assert d.valuation() >= min(z.P, back.P)


@given(st.integers(min_value=-(10**9), max_value=10**9))
@settings(max_examples=60, deadline=None)
def test_integer_literals_roundtrip(n):
    ctx = parse_field("Qp p=5 f=1")
    z = ctx.from_int(n)
    back = parse_element(ctx, z.to_literal())
    assert z.eq_to_precision(back)


def test_precision_propagation_rules(q2):
    x = q2.from_int(6, prec=10)   # v = 1
    y = q2.from_int(4, prec=12)   # v = 2
    assert x.add(y).P == 10
    assert x.mul(y).P == min(10 + 2, 12 + 1)
    assert x.inv().P == 10 - 2
    assert math.isinf(q2.zero().valuation())
