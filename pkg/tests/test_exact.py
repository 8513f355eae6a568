import random
from fractions import Fraction

import pytest

from k3cm.exact import (
    GF,
    QQ,
    DomainError,
    PadicRing,
    Polynomial,
    QuadField,
    QuadNum,
    RationalFunction,
    crt_combine,
    is_prime,
    kronecker,
    parse_quadnum,
    parse_rational,
    poly_arith,
    poly_series,
    rational_reconstruct,
    ratfun_series,
    resultant,
    roots_mod_p,
    squarefree_part,
)


def P(domain, *coeffs):
    return Polynomial.from_fractions(domain, coeffs)


# ---------------------------------------------------------------------------
# polynomial arithmetic
# ---------------------------------------------------------------------------

def test_poly_mul_and_divrem():
    t_minus = P(QQ, -1, 1)
    t_plus = P(QQ, 1, 1)
    assert t_minus * t_plus == P(QQ, -1, 0, 1)
    q, r = poly_arith(P(QQ, 0, 0, 0, 1), P(QQ, 0, 0, 1), "divrem")
    assert q == P(QQ, 0, 1) and r.is_zero()


def test_poly_gcd_monic():
    f = P(QQ, -1, 0, 1)     # t^2 - 1
    g = P(QQ, -1, 1)        # t - 1
    assert f.gcd(g) == g
    # gcd is monic even when inputs are scaled
    assert f.scale(Fraction(7)).gcd(g.scale(Fraction(-3, 5))) == g


def test_poly_domain_mixing_rejected():
    with pytest.raises(DomainError):
        P(QQ, 1, 1) + P(GF(7), 1, 1)


def test_poly_mod_p_conversion_fails_loudly():
    f = P(QQ, Fraction(1, 7), 1)
    with pytest.raises(DomainError):
        f.map_domain(GF(7))
    assert f.map_domain(GF(5)) == Polynomial(GF(5), [3, 1])


def test_ring_axioms_randomized():
    rng = random.Random(7)
    F = GF(101)
    for _ in range(60):
        f, g, h = (
            Polynomial(F, [rng.randrange(101) for _ in range(rng.randrange(1, 6))])
            for _ in range(3)
        )
        assert (f + g) * h == f * h + g * h
    for _ in range(30):
        f, g, h = (
            P(QQ, *[Fraction(rng.randrange(-9, 10), rng.randrange(1, 7)) for _ in range(4)])
            for _ in range(3)
        )
        assert (f + g) * h == f * h + g * h


def test_divrem_roundtrip_random():
    rng = random.Random(11)
    F = GF(13)
    for _ in range(60):
        f = Polynomial(F, [rng.randrange(13) for _ in range(rng.randrange(1, 8))])
        g = Polynomial(F, [rng.randrange(13) for _ in range(rng.randrange(1, 5))])
        if g.is_zero():
            continue
        q, r = f.divrem(g)
        assert q * g + r == f
        assert r.is_zero() or r.degree < g.degree


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------

def test_valuation_at():
    f = P(QQ, 0, 0, 1) * P(QQ, -1, 1)   # t^2 (t - 1)
    assert f.valuation_at(Fraction(0)) == 2
    assert f.valuation_at(Fraction(1)) == 1
    assert P(QQ, 5).valuation_at(Fraction(0)) == 0
    with pytest.raises(ValueError):
        Polynomial(QQ, []).valuation_at(Fraction(0))


def test_valuation_additive_random():
    rng = random.Random(3)
    for _ in range(40):
        f = P(QQ, *[rng.randrange(-4, 5) for _ in range(4)])
        g = P(QQ, *[rng.randrange(-4, 5) for _ in range(4)])
        if f.is_zero() or g.is_zero():
            continue
        pt = Fraction(rng.randrange(-2, 3))
        assert (f * g).valuation_at(pt) == f.valuation_at(pt) + g.valuation_at(pt)


def test_valuation_at_infinity():
    f = P(QQ, 1, 0, 3)
    assert f.valuation_at_infinity(4) == 2


# ---------------------------------------------------------------------------
# roots mod p
# ---------------------------------------------------------------------------

def test_roots_mod_p():
    F7 = GF(7)
    assert roots_mod_p(Polynomial(F7, [6, 0, 1])) == {1, 6}       # t^2 - 1
    assert roots_mod_p(Polynomial(F7, [1, 0, 1])) == set()        # t^2 + 1
    F5 = GF(5)
    assert roots_mod_p(Polynomial(F5, [0, 4, 0, 1])) == {0, 1, 4}  # t^3 - t


# ---------------------------------------------------------------------------
# CRT and rational reconstruction
# ---------------------------------------------------------------------------

def test_crt_basic():
    assert crt_combine([(1, 3), (2, 5)]) == (7, 15)
    assert crt_combine([(0, 11)]) == (0, 11)
    with pytest.raises(ValueError):
        crt_combine([(1, 6), (2, 4)])


def test_crt_five_over_thirtytwo():
    # residues of 5/32 modulo 101 and 103, forward-computed independently
    r1 = 5 * pow(32, -1, 101) % 101
    r2 = 5 * pow(32, -1, 103) % 103
    assert (r1, r2) == (98, 42)
    v, m = crt_combine([(r1, 101), (r2, 103)])
    assert m == 10403
    assert v % 101 == r1 and v % 103 == r2


def test_crt_then_reduce_is_identity_random():
    rng = random.Random(5)
    moduli = [7, 11, 13, 17]
    for _ in range(50):
        pairs = [(rng.randrange(m), m) for m in moduli]
        v, m = crt_combine(pairs)
        assert m == 7 * 11 * 13 * 17
        for r, mod in pairs:
            assert v % mod == r


def test_rational_reconstruct_examples():
    r = 5 * pow(32, -1, 10403) % 10403
    assert rational_reconstruct(r, 10403) == Fraction(5, 32)
    assert rational_reconstruct(2, 10**6) == Fraction(2)


def test_rational_reconstruct_roundtrip_random():
    rng = random.Random(17)
    for _ in range(500):
        u = rng.randrange(-400, 401)
        v = rng.randrange(1, 400)
        M = rng.randrange(2 * max(u * u, v * v) + 1, 10**7)
        from math import gcd

        if gcd(v, M) != 1:
            continue
        res = u * pow(v, -1, M) % M
        assert rational_reconstruct(res, M) == Fraction(u, v)


def test_rational_reconstruct_failure():
    # 1/2 mod an even-incompatible modulus has no small representative
    assert rational_reconstruct(661, 1322) is None


# ---------------------------------------------------------------------------
# quadratic field scalars
# ---------------------------------------------------------------------------

def test_quadnum_arith():
    K = QuadField(23)
    x = QuadNum(Fraction(6), Fraction(-1), 23)
    assert x * x.conjugate() == K.from_fraction(x.norm())
    assert x.norm() == 13
    assert (x * x.inverse()) == K.one


def test_quadnum_mixed_radicands_rejected():
    with pytest.raises(DomainError):
        QuadNum(1, 1, 23) + QuadNum(1, 1, 15)
    with pytest.raises(DomainError):
        QuadField(12)   # not squarefree


def test_quadnum_parse():
    x = parse_quadnum("6-1*sqrt(23)", 23)
    assert x == QuadNum(Fraction(6), Fraction(-1), 23)
    assert parse_quadnum("-3/2", 23) == QuadNum(Fraction(-3, 2), Fraction(0), 23)
    assert str(parse_quadnum("1/3+2*sqrt(5)", 5)) == "1/3+2*sqrt(5)"


def test_quad_polynomials():
    K = QuadField(5)
    f = Polynomial(K, [K.one, K.embed(QuadNum(0, 1, 5))])  # 1 + sqrt5 t
    g = f * f
    assert g.coeffs[1] == QuadNum(Fraction(0), Fraction(2), 5)
    assert g.coeffs[2] == QuadNum(Fraction(5), Fraction(0), 5)


# ---------------------------------------------------------------------------
# padic ring
# ---------------------------------------------------------------------------

def test_padic_ring():
    R = PadicRing(7, 2)
    x = R.from_fraction(Fraction(4, 9))
    assert 9 * x % 49 == 4
    with pytest.raises(ZeroDivisionError):
        R.inv(7)
    with pytest.raises(DomainError):
        R.from_fraction(Fraction(1, 7))


# ---------------------------------------------------------------------------
# series and misc helpers
# ---------------------------------------------------------------------------

def test_series_expansion_and_inverse():
    f = P(QQ, 1, 1)          # 1 + t
    s = poly_series(f, Fraction(0), 5)
    inv = s.inverse()
    assert inv.coeffs == [Fraction(c) for c in (1, -1, 1, -1, 1)]
    rf = RationalFunction(P(QQ, 1), P(QQ, 1, 1))
    s2 = ratfun_series(rf, Fraction(0), 5)
    assert s2.coeffs == inv.coeffs


def test_series_at_shifted_point():
    f = P(QQ, 0, 0, 1)       # t^2 expanded at t = 1 is 1 + 2e + e^2
    s = poly_series(f, Fraction(1), 4)
    assert s.coeffs[:3] == [Fraction(1), Fraction(2), Fraction(1)]


def test_resultant_detects_common_roots():
    f = P(QQ, -1, 1) * P(QQ, -2, 1)
    g = P(QQ, -2, 1) * P(QQ, 3, 1)
    assert resultant(f, g) == 0
    h = P(QQ, 1, 1)
    r = resultant(f, h)
    assert r == f(Fraction(-1)) * 1  # res(f, t+1) = f(-1) up to lead^deg


def test_misc_number_theory():
    assert squarefree_part(-88) == -22
    assert kronecker(-88, 23) == 1
    assert kronecker(-7, 3) == -1
    assert is_prime(10403) is False and is_prime(101) is True


def test_rational_function_normalization():
    f = RationalFunction(P(QQ, 0, 2), P(QQ, 0, 0, 4))  # 2t / 4t^2 = (1/2)/t
    assert f.num == P(QQ, Fraction(1, 2))
    assert f.den == P(QQ, 0, 1)
    assert f.valuation_at(Fraction(0)) == -1
    assert f.valuation_at_infinity() == 1


def test_parse_rational_roundtrip():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_rational("17") == Fraction(17)
