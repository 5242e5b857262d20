"""Binomial coefficients modulo a prime.

binom(n, k) for integer n of either sign; the negative-index values follow the
usual falling-factorial convention binom(n, k) = n(n-1)...(n-k+1)/k!.
"""

from math import comb


def binom_mod_p(n: int, k: int, p: int) -> int:
    """binom(n, k) mod p by Lucas' rule; n may be negative."""
    if k < 0:
        return 0
    if n < 0:
        # binom(n, k) = (-1)^k * binom(k - n - 1, k)
        v = binom_mod_p(k - n - 1, k, p)
        return (p - v) % p if (k & 1) else v
    r = 1
    while k or n:
        ni, n = n % p, n // p
        ki, k = k % p, k // p
        if ki > ni:
            return 0
        r = (r * comb(ni, ki)) % p
    return r
