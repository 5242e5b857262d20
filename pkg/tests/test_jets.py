"""Truncated derivation jets, p-adic binomials, and the matrix view."""

import random
from math import comb

import pytest

from carlitzhd import (
    DegreeMismatch,
    DenominatorDivisibleByP,
    Jet,
    NonPrimeCharacteristic,
    PadicInt,
    Poly,
    RatFunc,
    RhoMatrix,
    VARS_TT,
    binom_mod_p,
    compose_substitute,
    d_t_jet,
    d_theta_jet,
    field_new,
    padic_binom,
    to_rho_matrix,
)

SEED = 1729


def rand_poly(rng, field, vars=VARS_TT, max_deg=3, terms=3):
    items = []
    for _ in range(rng.randrange(terms + 1)):
        exps = tuple(rng.randrange(max_deg + 1) for _ in range(len(vars)))
        items.append((exps, field.from_index(rng.randrange(field.q))))
    return Poly.from_items(field, items, vars)


def rand_ratfunc(rng, field):
    num = rand_poly(rng, field)
    while True:
        den = rand_poly(rng, field, max_deg=2, terms=2)
        if not den.is_zero():
            return RatFunc.make(num, den)


# -- container basics ----------------------------------------------------------

def test_jet_requires_at_least_one_coefficient():
    with pytest.raises(DegreeMismatch):
        Jet([])


def test_jet_order_and_indexing():
    f = field_new(3)
    j = Jet([f.elem(1), f.elem(2), f.elem(0)])
    assert j.order == 2
    assert len(j) == 3
    assert j[1] == f.elem(2)


def test_jet_order_mismatch_raises():
    f = field_new(3)
    a = Jet([f.elem(1), f.elem(2)])
    b = Jet([f.elem(1), f.elem(2), f.elem(1)])
    with pytest.raises(DegreeMismatch):
        a + b


def test_jet_truncated():
    f = field_new(3)
    j = Jet([f.elem(1), f.elem(2), f.elem(1)])
    assert j.truncated(1) == Jet([f.elem(1), f.elem(2)])


# -- derivation jets -----------------------------------------------------------

def test_d_theta_jet_explicit_cube():
    f = field_new(5)
    j = d_theta_jet(Poly.monomial(f, (3,)), 3)
    want = [Poly.monomial(f, (3,)), Poly.monomial(f, (2,), 3),
            Poly.monomial(f, (1,), 3), Poly.one(f)]
    assert list(j.coeffs) == want


def test_d_theta_jet_binomial_rule():
    f = field_new(3)
    m, order = 7, 8
    j = d_theta_jet(Poly.monomial(f, (m,)), order)
    for k in range(order + 1):
        b = binom_mod_p(m, k, 3)
        assert j[k] == Poly.monomial(f, (m - k,), b) if b else j[k].is_zero()


def test_d_t_jet_fixes_theta():
    f = field_new(3)
    p = Poly.monomial(f, (2, 0), vars=VARS_TT)  # theta^2, constant in t
    j = d_t_jet(p, 2)
    assert j[0] == p and j[1].is_zero() and j[2].is_zero()


def test_jet_of_product_is_product_of_jets():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(60):
        a, b = rand_poly(rng, f), rand_poly(rng, f)
        n = rng.randrange(1, 5)
        assert d_theta_jet(a * b, n) == d_theta_jet(a, n) * d_theta_jet(b, n)
        assert d_theta_jet(a + b, n) == d_theta_jet(a, n) + d_theta_jet(b, n)


def test_jet_inverse_roundtrip():
    f = field_new(3)
    rng = random.Random(SEED)
    one = RatFunc.one(f, VARS_TT)
    for _ in range(40):
        r = rand_ratfunc(rng, f)
        if r.is_zero():
            continue
        j = d_theta_jet(r, 4)
        inv = j.inverse()
        prod = j * inv
        assert prod[0] == one and all(c.is_zero() for c in prod.coeffs[1:])
        # inverse of a jet is the jet of the inverse
        assert inv == d_theta_jet(r.inverse(), 4)


def test_jet_pow_matches_repeated_multiplication():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(25):
        r = rand_ratfunc(rng, f)
        if r.is_zero():
            continue
        j = d_theta_jet(r, 3)
        acc = d_theta_jet(RatFunc.one(f, VARS_TT), 3)
        for k in range(6):
            assert j ** k == acc
            acc = acc * j
        assert j ** -2 == (j ** 2).inverse()


def test_jet_pow_q_spreads_coefficients():
    # (D f)^q has coefficient i*q equal to (d^i f)^q and zeros elsewhere
    for f in (field_new(2), field_new(3)):
        q = f.q
        rng = random.Random(SEED)
        for _ in range(30):
            a = rand_poly(rng, f)
            n = 2
            j = d_theta_jet(a, n * q)
            jq = j ** q
            assert jq == d_theta_jet(a ** q, n * q)
            for i in range(len(jq.coeffs)):
                if i % q:
                    assert jq[i].is_zero()
                elif i // q <= n * q:
                    assert jq[i] == j[i // q] ** q


def test_jet_frobenius_power_matches_pow():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(20):
        a = rand_poly(rng, f)
        j = d_theta_jet(a, 4)
        assert j.frobenius_power(1) == j ** 3


# -- derivation exchange and substitution ---------------------------------------

def test_derivations_commute():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(60):
        r = rand_ratfunc(rng, f)
        n, m = rng.randrange(4), rng.randrange(4)
        a = d_t_jet(d_theta_jet(r, m)[m], n)[n]
        b = d_theta_jet(d_t_jet(r, n)[n], m)[m]
        assert a == b


def test_compose_substitute_explicit():
    f = field_new(3)
    # f(theta, t) = theta * t; f(theta, theta) = theta^2
    p = RatFunc.from_poly(Poly.monomial(f, (1, 1), vars=VARS_TT))
    j = compose_substitute(d_theta_jet(p, 2))
    want = d_theta_jet(RatFunc.from_poly(Poly.monomial(f, (2,))), 2)
    assert j == want  # both sides substitute down to functions of theta alone


def test_compose_substitute_chain_rule():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(40):
        r = rand_ratfunc(rng, f)
        if r.den.eval_t_at_theta().is_zero():
            continue
        n = rng.randrange(1, 4)
        direct = d_theta_jet(r.eval_t_at_theta(), n)
        composed = compose_substitute(d_theta_jet(r, n), n)
        assert direct == composed


def test_compose_substitute_short_input_rejected():
    f = field_new(3)
    p = RatFunc.from_poly(Poly.monomial(f, (1, 1), vars=VARS_TT))
    with pytest.raises(DegreeMismatch):
        compose_substitute(d_theta_jet(p, 2), 5)


# -- p-adic integers and binomials ----------------------------------------------

def test_padic_int_validation():
    with pytest.raises(NonPrimeCharacteristic):
        PadicInt(1, 1, 6)
    with pytest.raises(DenominatorDivisibleByP):
        PadicInt(1, 3, 3)
    with pytest.raises(DenominatorDivisibleByP):
        PadicInt(1, 0, 3)


def test_padic_digits_of_minus_one():
    for p in (2, 3, 5):
        assert PadicInt(-1, 1, p).digits(8) == tuple([p - 1] * 8)


def test_padic_digits_reconstruct_value():
    rng = random.Random(SEED)
    for p in (2, 3, 5):
        for _ in range(50):
            num = rng.randrange(-300, 300)
            den = rng.randrange(1, 80)
            while den % p == 0:
                den += 1
            x = PadicInt(num, den, p)
            k = 12
            val = sum(d * p ** i for i, d in enumerate(x.digits(k)))
            assert (val * den - num) % p ** k == 0


def test_padic_digits_prefix_stability():
    x = PadicInt(-1, 2, 5)
    assert x.digits(3) == x.digits(9)[:3]


def test_padic_binom_matches_lucas_on_congruent_integer():
    rng = random.Random(SEED)
    for p in (2, 3, 5):
        for _ in range(60):
            num = rng.randrange(-200, 200)
            den = rng.randrange(1, 60)
            while den % p == 0:
                den += 1
            alpha = PadicInt(num, den, p)
            k = rng.randrange(40)
            M = 10
            n_int = num * pow(den, -1, p ** M) % p ** M
            assert padic_binom(alpha, k) == binom_mod_p(n_int, k, p)


def test_padic_binom_edge_cases():
    a = PadicInt(7, 2, 3)
    assert padic_binom(a, 0) == 1
    with pytest.raises(Exception):
        padic_binom(a, -1)


# -- matrix view -----------------------------------------------------------------

def test_rho_matrix_shape_and_top_row():
    f = field_new(3)
    j = d_theta_jet(Poly.monomial(f, (3,)), 3)
    m = to_rho_matrix(j)
    assert m.size == 4
    assert tuple(m.top_row()) == j.coeffs
    assert m.is_upper_toeplitz()
    # entry (i, k) is coefficient k - i
    for i in range(4):
        for k in range(4):
            if k >= i:
                assert m.entries[i][k] == j[k - i]


def test_rho_matrix_multiplicative():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(40):
        a, b = rand_poly(rng, f), rand_poly(rng, f)
        n = rng.randrange(1, 4)
        ja, jb = d_theta_jet(a, n), d_theta_jet(b, n)
        assert to_rho_matrix(ja) * to_rho_matrix(jb) == to_rho_matrix(ja * jb)


def test_rho_matrix_rejects_non_square():
    f = field_new(3)
    with pytest.raises(DegreeMismatch):
        RhoMatrix([[f.elem(1), f.elem(2)], [f.elem(0)]])


def test_is_upper_toeplitz_detects_violations():
    f = field_new(3)
    one, zero, two = f.elem(1), f.elem(0), f.elem(2)
    assert RhoMatrix([[one, two], [zero, one]]).is_upper_toeplitz()
    assert not RhoMatrix([[one, two], [one, one]]).is_upper_toeplitz()
    assert not RhoMatrix([[one, two], [zero, two]]).is_upper_toeplitz()
