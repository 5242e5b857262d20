# Standalone oracle: leading u-coefficients of the period, independent of the
# package (plain dict series over F_p, prime q only).
# pitilde = -u^{-q} * prod_{j>=1} (1 - theta^{1-q^j})^{-1}
# theta^{1-q^j} = (-1)^{1-q^j} u^{(q-1)(q^j-1)}


def series_mul(a, b, p, prec):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            if e >= prec:
                continue
            out[e] = (out.get(e, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def series_inv(a, p, prec_len):
    # a has a[0] == 1; inverse as a power series in u
    assert a.get(0) == 1
    out = {0: 1}
    for k in range(1, prec_len):
        acc = 0
        for i in range(1, k + 1):
            acc += a.get(i, 0) * out.get(k - i, 0)
        if acc % p:
            out[k] = (-acc) % p
    return out


def pitilde_prefix(q, nterms):
    p = q  # prime fields only here
    prec = nterms + q + 5
    prod = {0: 1}
    j = 1
    while (q - 1) * (q ** j - 1) < prec:
        e = (q - 1) * (q ** j - 1)
        c = pow(-1, 1 - q ** j, p)
        prod = series_mul(prod, {0: 1, e: (-c) % p}, p, prec)
        j += 1
    inv = series_inv(prod, p, prec)
    # multiply by -u^{-q}
    out = {e - q: (-c) % p for e, c in inv.items()}
    return [out.get(e, 0) for e in range(-q, -q + nterms)]


for q in (2, 3, 5):
    print(f"q={q}: first 24 coefficients from u^{-q}:")
    print(" ", pitilde_prefix(q, 24))
