"""Laurent series in u, the theta-embedding, and Hasse derivations."""

import random

import pytest

from carlitzhd import (
    DivisionByZero,
    FieldMismatch,
    INF_PREC,
    Jet,
    Poly,
    RatFunc,
    TPoly,
    USeries,
    binom_mod_p,
    d_theta_jet,
    d_theta_useries,
    embed_k,
    field_new,
    hasse_du,
    theta_series,
    tpoly_agree,
    tpoly_diff_witness,
    useries_agree,
    useries_diff_witness,
)

SEED = 1729


def rand_useries(rng, field, lo=-6, hi=10, prec=None):
    m = {e: rng.randrange(field.q) for e in range(lo, hi) if rng.random() < 0.5}
    s = USeries.from_coeff_map(field, m)
    return s if prec is None else s.with_prec(prec)


def rand_poly(rng, field, max_deg=4, terms=4):
    items = [((rng.randrange(max_deg + 1),), field.from_index(rng.randrange(field.q)))
             for _ in range(rng.randrange(terms + 1))]
    return Poly.from_items(field, items)


# -- normalization and container behavior ---------------------------------------

def test_useries_trims_and_canonicalizes():
    f = field_new(3)
    s = USeries(f, -2, [0, 1, 2, 0, 0])
    assert s.min_exp == -1
    assert s.coeffs == (1, 2)
    z = USeries(f, 5, [0, 0])
    assert z.is_zero() and z.min_exp == 0


def test_useries_truncates_to_abs_prec():
    f = field_new(3)
    s = USeries(f, 0, [1, 1, 1, 1], abs_prec=2)
    assert s.coeffs == (1, 1)
    assert s.abs_prec == 2
    assert not s.is_exact()


def test_useries_coeff_and_valuation():
    f = field_new(5)
    s = USeries.from_coeff_map(f, {-3: 2, 4: 1})
    assert s.valuation() == -3
    assert s.coeff(-3) == f.elem(2)
    assert s.coeff(0) == f.zero
    assert s.coeff(4) == f.one


def test_useries_coeff_beyond_precision_raises():
    f = field_new(3)
    s = USeries(f, 0, [1], abs_prec=3)
    with pytest.raises(Exception):
        s.coeff(5)


def test_useries_equality_and_agreement():
    f = field_new(3)
    a = USeries.from_coeff_map(f, {0: 1, 2: 2})
    b = USeries.from_coeff_map(f, {0: 1, 2: 2}).with_prec(10)
    assert a != b  # different precision, different object value
    assert useries_agree(a, b)  # but equal on every retained coefficient
    c = USeries.from_coeff_map(f, {0: 1, 2: 1}).with_prec(10)
    assert not useries_agree(a, c)
    assert useries_diff_witness(a, c) == (2, f.elem(2), f.one)
    # disagreement hidden beyond the precision window is invisible
    d = USeries.from_coeff_map(f, {0: 1, 2: 2, 12: 1}).with_prec(10)
    assert useries_agree(b, d)


def test_useries_cross_field_rejected():
    a = USeries.one(field_new(2))
    b = USeries.one(field_new(3))
    with pytest.raises(FieldMismatch):
        a + b


# -- arithmetic and precision tracking --------------------------------------------

def test_useries_ring_axioms_sampled():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(120):
        a, b, c = (rand_useries(rng, f) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert (a - b) + b == a


def test_useries_add_takes_min_precision():
    f = field_new(3)
    a = USeries.from_coeff_map(f, {0: 1}).with_prec(5)
    b = USeries.from_coeff_map(f, {1: 2}).with_prec(9)
    assert (a + b).abs_prec == 5
    assert (a + USeries.one(f)).abs_prec == 5


def test_useries_mul_precision_shifts_by_valuation():
    f = field_new(3)
    a = USeries.from_coeff_map(f, {2: 1}).with_prec(7)   # val 2, prec 7
    b = USeries.from_coeff_map(f, {3: 1}).with_prec(11)  # val 3, prec 11
    # min(7 + 3, 11 + 2) = 10
    assert (a * b).abs_prec == 10


def test_useries_scale_shift():
    f = field_new(5)
    s = USeries.from_coeff_map(f, {1: 2, 3: 1}).with_prec(8)
    assert s.scale(2) == USeries.from_coeff_map(f, {1: 4, 3: 2}).with_prec(8)
    sh = s.shift(-4)
    assert sh.valuation() == -3
    assert sh.abs_prec == 4
    assert sh.coeff(-1) == f.one


def test_useries_inverse_roundtrip():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(60):
        s = rand_useries(rng, f, prec=12)
        if s.is_zero():
            continue
        inv = s.inverse()
        prod = s * inv
        one = USeries.one(f)
        assert useries_agree(prod, one)
        assert prod.abs_prec != INF_PREC


def test_useries_inverse_of_monomial_stays_exact():
    f = field_new(3)
    s = USeries.monomial(f, -4, 2)
    inv = s.inverse()
    assert inv.is_exact()
    assert inv == USeries.monomial(f, 4, 2)  # 2 is its own inverse mod 3


def test_useries_inverse_of_zero_raises():
    f = field_new(3)
    with pytest.raises(DivisionByZero):
        USeries.zero(f).inverse()


def test_useries_frobenius_power():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(40):
        a = rand_useries(rng, f, prec=15)
        b = rand_useries(rng, f, prec=15)
        assert (a * b).frobenius_power(1) == a.frobenius_power(1) * b.frobenius_power(1)
    s = USeries.from_coeff_map(f, {-1: 2, 2: 1})
    fs = s.frobenius_power(1)
    assert fs.coeff(-3) == f.elem(2) ** 3 and fs.coeff(6) == f.one


# -- the embedding of K -----------------------------------------------------------

def test_theta_series_value():
    for q in (2, 3, 5):
        f = field_new(q)
        th = theta_series(f)
        assert th == USeries.monomial(f, -(q - 1), f.elem(-1))
        assert th.is_exact()


def test_embed_k_theta_and_polynomials_exact():
    f = field_new(3)
    th = Poly.monomial(f, (1,))
    assert embed_k(th, 50) == theta_series(f)
    p = Poly.from_items(f, [((2,), 1), ((0,), 2)])
    s = embed_k(p, 50)
    assert s.is_exact()
    assert s == theta_series(f) * theta_series(f) + USeries.const(f, 2)


def test_embed_k_geometric_series_oracle():
    # 1/(theta + 1) = sum_{i >= 1} (-1)^{i+1} theta^{-i}, checked against
    # an independently built partial sum
    for q in (2, 3):
        f = field_new(q)
        prec = 40
        r = RatFunc.make(Poly.one(f), Poly.monomial(f, (1,)) + Poly.one(f))
        got = embed_k(r, prec)
        thinv = theta_series(f).inverse()  # exact: monomial inverse
        acc = USeries.zero(f)
        powt = thinv
        for i in range(1, prec + q):
            acc = acc + powt.scale(f.elem(-1) ** (i + 1))
            powt = powt * thinv
        assert got.abs_prec == prec
        assert useries_agree(got, acc.with_prec(prec))


def test_embed_k_is_ring_homomorphism_sampled():
    f = field_new(3)
    rng = random.Random(SEED)
    prec = 30
    for _ in range(60):
        num1, num2 = rand_poly(rng, f), rand_poly(rng, f)
        den1, den2 = rand_poly(rng, f, 3, 3), rand_poly(rng, f, 3, 3)
        if den1.is_zero() or den2.is_zero():
            continue
        a = RatFunc.make(num1, den1)
        b = RatFunc.make(num2, den2)
        ea, eb = embed_k(a, prec), embed_k(b, prec)
        assert useries_agree(embed_k(a + b, prec), ea + eb)
        assert useries_agree(embed_k(a * b, prec), ea * eb)


# -- Hasse derivative in u ---------------------------------------------------------

def test_hasse_du_frozen_examples():
    f3 = field_new(3)
    assert hasse_du(USeries.monomial(f3, 5), 2) == USeries.monomial(f3, 3)
    for q in (2, 3, 5):
        f = field_new(q)
        got = hasse_du(USeries.monomial(f, -1), 1)
        assert got == USeries.monomial(f, -2, f.elem(-1))


def test_hasse_du_binomial_rule():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(100):
        e = rng.randrange(-20, 20)
        k = rng.randrange(8)
        got = hasse_du(USeries.monomial(f, e), k)
        b = binom_mod_p(e, k, 3)
        assert got == USeries.monomial(f, e - k, b)


def test_hasse_du_composition_rule():
    # d^i d^j = binom(i + j, i) d^{i+j}
    f = field_new(2)
    rng = random.Random(SEED)
    for _ in range(80):
        s = rand_useries(rng, f, prec=20)
        i, j = rng.randrange(5), rng.randrange(5)
        lhs = hasse_du(hasse_du(s, j), i)
        rhs = hasse_du(s, i + j).scale(binom_mod_p(i + j, i, 2))
        assert useries_agree(lhs, rhs)


def test_hasse_du_leibniz_rule():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(60):
        a = rand_useries(rng, f, prec=18)
        b = rand_useries(rng, f, prec=18)
        k = rng.randrange(1, 5)
        lhs = hasse_du(a * b, k)
        rhs = USeries.zero(f)
        for i in range(k + 1):
            rhs = rhs + hasse_du(a, i) * hasse_du(b, k - i)
        assert useries_agree(lhs, rhs)


def test_hasse_du_zero_order_is_identity():
    f = field_new(3)
    s = USeries.from_coeff_map(f, {-2: 1, 5: 2})
    assert hasse_du(s, 0) == s


# -- the theta-derivation on series -------------------------------------------------

def test_d_theta_useries_of_u_is_minus_u_q():
    for q in (2, 3, 5):
        f = field_new(q)
        u = USeries.monomial(f, 1)
        j = d_theta_useries(u, 1)
        assert j[0] == u
        assert j[1] == USeries.monomial(f, q, f.elem(-1))


def test_d_theta_useries_matches_embedded_jet():
    # the derivation on series extends the derivation on K through embed_k
    f = field_new(3)
    rng = random.Random(SEED)
    prec = 30
    for _ in range(40):
        num = rand_poly(rng, f)
        den = rand_poly(rng, f, 3, 3)
        if den.is_zero():
            continue
        r = RatFunc.make(num, den)
        n = rng.randrange(1, 4)
        js = d_theta_useries(embed_k(r, prec), n)
        jk = d_theta_jet(r, n)
        for k in range(n + 1):
            assert useries_agree(js[k], embed_k(jk[k], prec - k))


def test_d_theta_useries_k_infinity_formula():
    # on sum c_i theta^{-i}: coefficient n is sum c_i binom(-i, n) theta^{-i-n}
    for q in (2, 3):
        f = field_new(q)
        rng = random.Random(SEED)
        thinv = theta_series(f).inverse()
        for _ in range(30):
            terms = {i: f.from_index(rng.randrange(f.q)) for i in range(1, 9)
                     if rng.random() < 0.6}
            if not terms:
                continue
            s = USeries.zero(f)
            for i, c in terms.items():
                s = s + (thinv ** i).scale(c)
            s = s.with_prec(25)
            n = rng.randrange(1, 5)
            got = d_theta_useries(s, n)[n]
            want = USeries.zero(f)
            for i, c in terms.items():
                b = binom_mod_p(-i, n, f.p)
                if b:
                    want = want + (thinv ** (i + n)).scale(c * f.elem(b))
            assert useries_agree(got, want.with_prec(got.abs_prec))


def test_d_theta_useries_uniformizer_relation():
    # with lambda = 1/u and lambda^{q-1} = -theta:
    # (D(u)^{-1})^{q-1} * (-1) equals the jet theta + X; the same expression
    # without the inner inverse is its reciprocal jet
    for q in (2, 3):
        f = field_new(q)
        n = 3
        u = USeries.monomial(f, 1).with_prec(40)
        Du = d_theta_useries(u, n)
        lhs = (Du.inverse() ** (q - 1)).scale(f.elem(-1))
        rhs = Jet([theta_series(f), USeries.one(f)]
                  + [USeries.zero(f)] * (n - 1))
        assert all(useries_agree(a, b) for a, b in zip(lhs.coeffs, rhs.coeffs))
        literal = (Du ** (q - 1)).scale(f.elem(-1))
        prod = literal * lhs
        assert useries_agree(prod[0], USeries.one(f))
        assert all(useries_agree(c, USeries.zero(f)) for c in prod.coeffs[1:])


def test_d_theta_useries_recompute_overlap():
    f = field_new(2)
    s = embed_k(RatFunc.make(Poly.one(f), Poly.monomial(f, (1,)) + Poly.one(f)), 20)
    s2 = embed_k(RatFunc.make(Poly.one(f), Poly.monomial(f, (1,)) + Poly.one(f)), 45)
    j1 = d_theta_useries(s, 3)
    j2 = d_theta_useries(s2, 3)
    for k in range(4):
        assert useries_agree(j1[k], j2[k])
        assert j2[k].abs_prec > j1[k].abs_prec


# -- truncated t-expansions ----------------------------------------------------------

def test_tpoly_construction_and_coeff():
    f = field_new(2)
    p = TPoly(f, {0: USeries.one(f), 2: theta_series(f)})
    assert p.tdegree() == 2
    assert p.coeff(0) == USeries.one(f)
    assert p.coeff(1).is_zero()
    assert p.t_valuation() == 0
    # exact zero coefficients are dropped; t_prec truncates
    p2 = TPoly(f, {0: USeries.one(f), 5: USeries.zero(f)})
    assert p2.tdegree() == 0
    p3 = TPoly(f, {0: USeries.one(f), 2: theta_series(f)}, t_prec=2)
    assert p3.tdegree() == 0


def test_tpoly_mul_matches_convolution():
    f = field_new(3)
    rng = random.Random(SEED)
    for _ in range(30):
        a = TPoly(f, {k: rand_useries(rng, f, -3, 6, prec=15) for k in range(3)})
        b = TPoly(f, {k: rand_useries(rng, f, -3, 6, prec=15) for k in range(3)})
        prod = a * b
        for k in range(7):
            want = USeries.zero(f)
            for i in range(k + 1):
                want = want + a.coeff(i) * b.coeff(k - i)
            assert useries_agree(prod.coeff(k), want)


def test_tpoly_d_t_binomial():
    f = field_new(3)
    c = theta_series(f)
    p = TPoly(f, {4: c})
    d = p.d_t(1)
    assert useries_agree(d.coeff(3), c.scale(binom_mod_p(4, 1, 3)))
    assert p.d_t(0) == p


def test_tpoly_eval_t_at_theta_frozen():
    # 1 - t * theta^{-q} at t = theta over F_2 gives 1 + u
    f = field_new(2)
    th = theta_series(f)
    thminusq = (th ** 2).inverse()
    p = TPoly(f, {0: USeries.one(f), 1: thminusq.scale(f.elem(-1))})
    got = p.eval_t_at_theta()
    assert got == USeries.from_coeff_map(f, {0: 1, 1: 1})


def test_tpoly_eval_t_at_theta_matches_substitution():
    f = field_new(3)
    rng = random.Random(SEED)
    th = theta_series(f)
    for _ in range(30):
        coeffs = {k: rand_useries(rng, f, -3, 6, prec=20) for k in range(4)}
        p = TPoly(f, coeffs)
        want = USeries.zero(f)
        for k, c in coeffs.items():
            want = want + c * th ** k
        assert useries_agree(p.eval_t_at_theta(), want)


def test_tpoly_inverse_tseries_geometric():
    # (1 - t u)^{-1} = sum_k t^k u^k
    f = field_new(3)
    u = USeries.monomial(f, 1)
    p = TPoly(f, {0: USeries.one(f), 1: u.scale(f.elem(-1))})
    inv = p.inverse_tseries(6, u_target=30)
    for k in range(6):
        assert useries_agree(inv.coeff(k), USeries.monomial(f, k).with_prec(30))
    # and the product is 1 mod t^6
    prod = (p.with_tprec(6) * inv).with_tprec(6)
    assert useries_agree(prod.coeff(0), USeries.one(f))
    for k in range(1, 6):
        assert useries_agree(prod.coeff(k), USeries.zero(f))


def test_tpoly_agree_and_witness():
    f = field_new(2)
    a = TPoly(f, {0: USeries.one(f), 1: theta_series(f)})
    b = TPoly(f, {0: USeries.one(f), 1: theta_series(f).with_prec(10)})
    assert tpoly_agree(a, b)
    c = TPoly(f, {0: USeries.one(f), 1: theta_series(f) + USeries.one(f)})
    assert not tpoly_agree(a, c)
    assert tpoly_diff_witness(a, c) is not None


def test_tpoly_d_theta_jet_leibniz_with_t_coeff():
    # theta-derivation treats t-coefficients serieswise
    f = field_new(2)
    th = theta_series(f)
    p = TPoly(f, {1: th})
    jets = p.d_theta_jet(2)
    assert useries_agree(jets[0].coeff(1), th)
    assert useries_agree(jets[1].coeff(1), d_theta_useries(th, 1)[1])
