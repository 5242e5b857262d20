"""Truncated higher-derivation (jet) calculus.

A jet of order n is the image of an element under a higher derivation,
truncated mod X^{n+1}: the coefficient list (d^0 f, d^1 f, ..., d^n f).
Jets multiply by truncated convolution, which is exactly the generalized
Leibniz rule, so "apply the derivation" is a ring homomorphism into jets.

Two concrete derivations act on polynomials and rational functions in
theta and t:

    d_theta: theta |-> theta + X, t |-> t
    d_t:     t |-> t + X, theta |-> theta

Also here: p-adic integers given as rationals with p-unit denominator, and
binom(alpha, k) mod p for such alpha via the digitwise (Lucas) rule, which the
series module needs for exponents like -1/(q-1).
"""

from __future__ import annotations

from math import comb

from .binomials import binom_mod_p
from .errors import (
    ConstraintViolated,
    DegreeMismatch,
    DenominatorDivisibleByP,
    NonPrimeCharacteristic,
    NonUnitConstantTerm,
)
from .gf import FqElem, _is_prime
from .rings import Poly, RatFunc, VARS_T


class PadicInt:
    """A p-adic integer presented as a rational with denominator prime to p."""

    __slots__ = ("num", "den", "p", "_digits", "_state")

    def __init__(self, num: int, den: int, p: int):
        if not _is_prime(p):
            raise NonPrimeCharacteristic(f"{p} is not prime")
        if den == 0:
            raise DenominatorDivisibleByP("denominator must be nonzero")
        if den % p == 0:
            raise DenominatorDivisibleByP(
                f"denominator {den} is divisible by p = {p}"
            )
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "_digits", [])
        object.__setattr__(self, "_state", num)

    def __setattr__(self, *a):
        raise AttributeError("PadicInt is immutable")

    def digits(self, k: int) -> tuple[int, ...]:
        """First k base-p digits; the expansion of num/den in Z_p."""
        d, p, b = self._digits, self.p, self.den
        binv = pow(b % p, p - 2, p)
        a = self._state
        while len(d) < k:
            dig = (a % p) * binv % p
            d.append(dig)
            a = (a - dig * b) // p
        object.__setattr__(self, "_state", a)
        return tuple(d[:k])

    def __repr__(self):
        return f"PadicInt({self.num}/{self.den}, p={self.p})"


def padic_binom(alpha: PadicInt, k: int) -> int:
    """binom(alpha, k) mod p by the digitwise rule; result in [0, p)."""
    if k < 0:
        raise ConstraintViolated("binomial lower index must be >= 0")
    if k == 0:
        return 1
    p = alpha.p
    kd = []
    kk = k
    while kk:
        kd.append(kk % p)
        kk //= p
    ad = alpha.digits(len(kd))
    r = 1
    for ai, ki in zip(ad, kd):
        if ki > ai:
            return 0
        r = (r * comb(ai, ki)) % p
    return r


# -- the jet container --------------------------------------------------------

class Jet:
    """Coefficient vector (c_0, ..., c_n) of a truncated derivation image.

    Works over any coefficient ring whose elements support +, -, *, and
    (for inversion) .inverse().  Operands must share the same order.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise DegreeMismatch("a jet needs at least the order-0 coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("Jet is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def _compat(self, other: "Jet"):
        if len(self.coeffs) != len(other.coeffs):
            raise DegreeMismatch(
                f"jet orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        self._compat(other)
        return Jet(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return Jet(-a for a in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        self._compat(other)
        return Jet(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self.scale(other)
        self._compat(other)
        n = len(self.coeffs)
        out = []
        for k in range(n):
            acc = None
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if _ring_is_zero(a) or _ring_is_zero(b):
                    continue
                term = a * b
                acc = term if acc is None else acc + term
            if acc is None:
                acc = _ring_zero_like(self.coeffs[0], other.coeffs[0])
            out.append(acc)
        return Jet(out)

    def scale(self, c):
        return Jet(a * c for a in self.coeffs)

    def truncated(self, order: int) -> "Jet":
        if order > self.order:
            raise DegreeMismatch(
                f"cannot extend a jet of order {self.order} to {order}"
            )
        return Jet(self.coeffs[: order + 1])

    def inverse(self) -> "Jet":
        c0 = self.coeffs[0]
        if _ring_is_zero(c0):
            raise NonUnitConstantTerm("jet inversion needs a unit order-0 part")
        inv0 = c0.inverse()
        out = [inv0]
        for k in range(1, len(self.coeffs)):
            acc = None
            for i in range(1, k + 1):
                ai = self.coeffs[i]
                if _ring_is_zero(ai):
                    continue
                term = ai * out[k - i]
                acc = term if acc is None else acc + term
            if acc is None:
                out.append(_ring_zero_like(c0, c0))
            else:
                out.append(-(inv0 * acc))
        return Jet(out)

    def frobenius_power(self, k: int = 1, p: int | None = None) -> "Jet":
        """self**(p^k) using coefficientwise Frobenius; needs ring support."""
        c0 = self.coeffs[0]
        if p is None:
            p = c0.field.p
        pk = p ** k
        zero = _ring_zero_like(c0, c0)
        out = [zero] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if i * pk >= len(out):
                break
            if not _ring_is_zero(c):
                out[i * pk] = c.frobenius_power(k)
        return Jet(out)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            one = _ring_one_like(self.coeffs[0])
            zero = _ring_zero_like(self.coeffs[0], self.coeffs[0])
            return Jet([one] + [zero] * self.order)
        if hasattr(self.coeffs[0], "frobenius_power") and hasattr(self.coeffs[0], "field"):
            p = self.coeffs[0].field.p
            result = None
            stage = self
            while k:
                d = k % p
                k //= p
                if d:
                    piece = stage
                    for _ in range(d - 1):
                        piece = piece * stage
                    result = piece if result is None else result * piece
                if k:
                    stage = stage.frobenius_power(1, p)
            return result
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        return isinstance(other, Jet) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "Jet(" + ", ".join(repr(c) for c in self.coeffs) + ")"


def _ring_is_zero(x) -> bool:
    f = getattr(x, "is_zero", None)
    return bool(f()) if f is not None else False


def _ring_zero_like(a, b):
    """A zero of the coefficient ring, derived without a ring protocol."""
    prod = a * b
    return prod - prod


def _ring_one_like(x):
    if isinstance(x, Poly):
        return Poly.one(x.field, x.vars)
    if isinstance(x, RatFunc):
        return RatFunc.one(x.field, x.vars)
    m = getattr(x, "one_like", None)
    if m is not None:
        return m()
    raise ConstraintViolated(f"no multiplicative identity for {type(x).__name__}")


# -- hyperderivative jets on polynomials and rational functions ---------------

def _poly_hasse(f: Poly, var: int, k: int) -> Poly:
    """The k-th hyperderivative of f in the given variable (0=theta, 1=t)."""
    if k == 0:
        return f
    if var >= len(f.vars):
        return Poly.zero(f.field, f.vars)
    p = f.field.p
    mul = f.field.mul_t
    out = {}
    for e, c in f.terms.items():
        i = e[var]
        if i >= k:
            b = binom_mod_p(i, k, p)
            if b:
                ne = list(e)
                ne[var] = i - k
                out[tuple(ne)] = mul[b][c]
    return Poly(f.field, f.vars, out)


def _jet_of(f, var: int, order: int) -> Jet:
    if isinstance(f, Poly):
        return Jet(_poly_hasse(f, var, k) for k in range(order + 1))
    if isinstance(f, RatFunc):
        num = Jet(
            RatFunc.from_poly(_poly_hasse(f.num, var, k)) for k in range(order + 1)
        )
        if f.den.is_constant():
            return num
        den = Jet(
            RatFunc.from_poly(_poly_hasse(f.den, var, k)) for k in range(order + 1)
        )
        return num * den.inverse()
    raise ConstraintViolated(f"no hyperderivative jets for {type(f).__name__}")


def d_theta_jet(f, order: int) -> Jet:
    """Jet of f under the derivation with theta |-> theta + X, t fixed."""
    return _jet_of(f, 0, order)


def d_t_jet(f, order: int) -> Jet:
    """Jet of f under the derivation with t |-> t + X, theta fixed."""
    return _jet_of(f, 1, order)


def compose_substitute(f_jet_theta: Jet, order: int | None = None) -> Jet:
    """Jet of theta |-> f(theta, theta) from the theta-jet of f(theta, t).

    Coefficient m of the result is the sum over i + j = m of
    d_t^i(d_theta^j f) evaluated at t = theta.  Input coefficients must be
    RatFunc in theta and t.
    """
    if order is None:
        order = f_jet_theta.order
    if order > f_jet_theta.order:
        raise DegreeMismatch("input jet is too short for the requested order")
    field = f_jet_theta[0].field
    out = [RatFunc.zero(field, VARS_T) for _ in range(order + 1)]
    for j in range(order + 1):
        cj = f_jet_theta[j]
        inner = d_t_jet(cj, order - j)
        for i in range(order - j + 1):
            term = inner[i].eval_t_at_theta()
            if not term.is_zero():
                out[i + j] = out[i + j] + term
    return Jet(out)


# -- upper-triangular Toeplitz matrix view ------------------------------------

class RhoMatrix:
    """The (n+1)x(n+1) matrix of a jet: entry (i, j) = coefficient j - i."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(tuple(row) for row in entries)
        n = len(entries)
        if any(len(row) != n for row in entries):
            raise DegreeMismatch("matrix must be square")
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("RhoMatrix is immutable")

    @classmethod
    def from_jet(cls, jet: Jet) -> "RhoMatrix":
        n = len(jet.coeffs)
        zero = _ring_zero_like(jet[0], jet[0])
        rows = []
        for i in range(n):
            rows.append([zero] * i + list(jet.coeffs[: n - i]))
        return cls(rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def top_row(self):
        return self.entries[0]

    def __mul__(self, other):
        if not isinstance(other, RhoMatrix):
            return NotImplemented
        n = self.size
        if n != other.size:
            raise DegreeMismatch("matrix sizes differ")
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if _ring_is_zero(a) or _ring_is_zero(b):
                        continue
                    term = a * b
                    acc = term if acc is None else acc + term
                if acc is None:
                    acc = _ring_zero_like(self.entries[0][0], other.entries[0][0])
                row.append(acc)
            rows.append(row)
        return RhoMatrix(rows)

    def is_upper_toeplitz(self) -> bool:
        n = self.size
        for i in range(n):
            for j in range(n):
                if j < i:
                    if not _ring_is_zero(self.entries[i][j]):
                        return False
                elif i > 0:
                    if self.entries[i][j] != self.entries[0][j - i]:
                        return False
        return True

    def __eq__(self, other):
        return isinstance(other, RhoMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "RhoMatrix(" + repr([list(r) for r in self.entries]) + ")"


def to_rho_matrix(jet: Jet) -> RhoMatrix:
    return RhoMatrix.from_jet(jet)
