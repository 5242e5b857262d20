"""Truncated Laurent series in u over F_q with absolute-precision tracking.

The series variable u satisfies theta = -u^{-(q-1)}, so F_q(theta) embeds by
u-expansion and the completion (together with the chosen (q-1)-th root of
-theta, which is u^{-1} itself) is modeled by one series type.  Every value
carries abs_prec: the exponent below which its coefficients are known.
Arithmetic propagates precision pessimistically by the non-archimedean rules;
an exact value has abs_prec = math.inf.

TPoly is a polynomial (or truncated power series) in t whose coefficients are
USeries; it models the entire-function products and their t-expansions.

d_theta_useries extends the theta-derivation: on u it acts by
D_theta(u) = u * (1 + X/theta)^(-1/(q-1)), the branch with constant term u,
and on a general series by the Taylor identity
D_theta(f) = sum_k d_u^(k)(f) * (D_theta(u) - u)^k.
The exponent -1/(q-1) lives in Z_p and is expanded with padic_binom.
"""

from __future__ import annotations

import math

from .binomials import binom_mod_p
from .errors import (
    ConstraintViolated,
    DivisionByZero,
    FieldMismatch,
    PrecisionExhausted,
)
from .gf import Field, FqElem
from .jets import Jet, PadicInt, padic_binom
from .rings import Poly, RatFunc

INF_PREC = math.inf


def _as_prec(p) -> int | float:
    if p == INF_PREC:
        return INF_PREC
    if isinstance(p, bool) or not isinstance(p, int):
        raise ConstraintViolated(f"precision must be an int or inf, got {p!r}")
    return p


class USeries:
    """Laurent series in u, known modulo u^abs_prec.

    coeffs is a dense run of field-table indices starting at exponent
    min_exp, trimmed so coeffs[0] != 0 and coeffs[-1] != 0; an empty run
    means the value is zero to the stated precision (exactly zero when
    abs_prec is infinite).
    """

    __slots__ = ("field", "min_exp", "coeffs", "abs_prec")

    def __init__(self, field: Field, min_exp: int, coeffs, abs_prec=INF_PREC):
        abs_prec = _as_prec(abs_prec)
        coeffs = list(coeffs)
        if abs_prec != INF_PREC and min_exp + len(coeffs) > abs_prec:
            coeffs = coeffs[: max(0, abs_prec - min_exp)]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        if lead:
            coeffs = coeffs[lead:]
            min_exp += lead
        if not coeffs:
            min_exp = 0
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "min_exp", min_exp)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "abs_prec", abs_prec)

    def __setattr__(self, *a):
        raise AttributeError("USeries is immutable")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, abs_prec=INF_PREC) -> "USeries":
        return cls(field, 0, [], abs_prec)

    @classmethod
    def monomial(cls, field: Field, exp: int, coeff=1, abs_prec=INF_PREC) -> "USeries":
        c = field.elem(coeff)
        if c.is_zero():
            return cls.zero(field, abs_prec)
        return cls(field, exp, [c.idx], abs_prec)

    @classmethod
    def const(cls, field: Field, value, abs_prec=INF_PREC) -> "USeries":
        return cls.monomial(field, 0, value, abs_prec)

    @classmethod
    def one(cls, field: Field) -> "USeries":
        return cls.const(field, 1)

    @classmethod
    def from_coeff_map(cls, field: Field, m: dict, abs_prec=INF_PREC) -> "USeries":
        if not m:
            return cls.zero(field, abs_prec)
        lo = min(m)
        dense = [0] * (max(m) - lo + 1)
        for e, c in m.items():
            dense[e - lo] = field.elem(c).idx
        return cls(field, lo, dense, abs_prec)

    def one_like(self) -> "USeries":
        return USeries.one(self.field)

    # -- views -----------------------------------------------------------------

    def is_zero(self) -> bool:
        """No known nonzero coefficient (exactly zero if also exact)."""
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.abs_prec == INF_PREC

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.abs_prec == INF_PREC

    def valuation(self):
        """Order of the leading known term; abs_prec when none is known."""
        return self.min_exp if self.coeffs else self.abs_prec

    def coeff(self, exp: int) -> FqElem:
        if exp >= self.abs_prec:
            raise PrecisionExhausted(
                f"coefficient of u^{exp} is beyond abs_prec {self.abs_prec}"
            )
        i = exp - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.field.from_index(self.coeffs[i])
        return self.field.from_index(0)

    def coeff_items(self):
        return [
            (self.min_exp + i, self.field.from_index(c))
            for i, c in enumerate(self.coeffs)
            if c
        ]

    def with_prec(self, abs_prec) -> "USeries":
        """Cap the precision (never raises it)."""
        abs_prec = _as_prec(abs_prec)
        if abs_prec >= self.abs_prec:
            return self
        return USeries(self.field, self.min_exp, self.coeffs, abs_prec)

    # -- arithmetic -------------------------------------------------------------

    def _compat(self, other: "USeries"):
        if self.field != other.field:
            raise FieldMismatch("series over different fields")

    def _coerce(self, other):
        if isinstance(other, USeries):
            return other
        if isinstance(other, (int, FqElem)):
            return USeries.const(self.field, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._compat(other)
        prec = min(self.abs_prec, other.abs_prec)
        if not self.coeffs:
            return other.with_prec(prec)
        if not other.coeffs:
            return self.with_prec(prec)
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.min_exp + len(self.coeffs), other.min_exp + len(other.coeffs))
        dense = [0] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            dense[self.min_exp - lo + i] = c
        add = self.field.add_t
        for i, c in enumerate(other.coeffs):
            j = other.min_exp - lo + i
            dense[j] = add[dense[j]][c]
        return USeries(self.field, lo, dense, prec)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg_t
        return USeries(
            self.field, self.min_exp, [neg[c] for c in self.coeffs], self.abs_prec
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, FqElem)):
            return self.scale(other)
        if not isinstance(other, USeries):
            return NotImplemented
        self._compat(other)
        prec = min(
            self.abs_prec + other.valuation(), other.abs_prec + self.valuation()
        )
        if not self.coeffs or not other.coeffs:
            return USeries.zero(self.field, prec)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        out = [0] * (len(a) + len(b) - 1)
        add, mul = self.field.add_t, self.field.mul_t
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add[out[i + j]][row[y]]
        return USeries(self.field, self.min_exp + other.min_exp, out, prec)

    __rmul__ = __mul__

    def scale(self, c) -> "USeries":
        c = self.field.elem(c)
        if c.is_zero():
            return USeries.zero(self.field)
        if c.idx == 1:
            return self
        row = self.field.mul_t[c.idx]
        return USeries(
            self.field, self.min_exp, [row[x] for x in self.coeffs], self.abs_prec
        )

    def shift(self, k: int) -> "USeries":
        """Multiply by the exact monomial u^k."""
        if not self.coeffs:
            return USeries(self.field, 0, [], self.abs_prec + k)
        return USeries(self.field, self.min_exp + k, self.coeffs, self.abs_prec + k)

    def inverse(self, abs_prec=None) -> "USeries":
        if not self.coeffs:
            if self.is_exact_zero():
                raise DivisionByZero("inverse of the zero series")
            raise PrecisionExhausted(
                f"cannot invert a series with no known term (O(u^{self.abs_prec}))"
            )
        v = self.min_exp
        natural = self.abs_prec - 2 * v
        if len(self.coeffs) == 1 and self.is_exact():
            # exact monomial: exact inverse
            out = USeries.monomial(
                self.field, -v, self.field.from_index(self.coeffs[0]).inverse()
            )
            return out.with_prec(abs_prec) if abs_prec is not None else out
        if abs_prec is None:
            if self.is_exact():
                raise ConstraintViolated(
                    "inverting an exact multi-term series needs a target precision"
                )
            target = natural
        else:
            target = _as_prec(abs_prec)
            if target > natural:
                raise PrecisionExhausted(
                    f"inverse precision {target} unreachable: input supports {natural}"
                )
        rel = target + v  # relative terms needed in the unit part's inverse
        if rel <= 0:
            return USeries.zero(self.field, target)
        add, mul, neg = self.field.add_t, self.field.mul_t, self.field.neg_t
        g = list(self.coeffs[:rel])
        inv0 = self.field.inv_t[g[0]]
        out = [inv0] + [0] * (rel - 1)
        for k in range(1, rel):
            acc = 0
            for i in range(1, min(k, len(g) - 1) + 1):
                if g[i] and out[k - i]:
                    acc = add[acc][mul[g[i]][out[k - i]]]
            out[k] = mul[neg[acc]][inv0]
        return USeries(self.field, -v, out, target)

    def frobenius_power(self, k: int = 1) -> "USeries":
        """self**(p^k); exponents stretch, coefficients map by Frobenius."""
        pk = self.field.p ** k
        if not self.coeffs:
            return USeries(self.field, 0, [], self.abs_prec * pk)
        out = [0] * ((len(self.coeffs) - 1) * pk + 1)
        frob = self.field.frob_t
        for i, c in enumerate(self.coeffs):
            if c:
                fc = c
                for _ in range(k % self.field.e if self.field.e > 1 else 0):
                    fc = frob[fc]
                out[i * pk] = fc
        return USeries(self.field, self.min_exp * pk, out, self.abs_prec * pk)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return USeries.one(self.field)
        p = self.field.p
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
                stage = stage.frobenius_power(1)
        return result

    def __eq__(self, other):
        return (
            isinstance(other, USeries)
            and self.field == other.field
            and self.min_exp == other.min_exp
            and self.coeffs == other.coeffs
            and self.abs_prec == other.abs_prec
        )

    def __hash__(self):
        return hash((self.field, self.min_exp, self.coeffs, self.abs_prec))

    def __repr__(self):
        bits = []
        for e, c in self.coeff_items():
            if self.field.e == 1:
                cs = "" if c.idx == 1 else f"{c.idx}*"
            else:
                cs = f"({c!r})*"
            if e == 0:
                bits.append(cs.rstrip("*") or "1")
            else:
                bits.append(f"{cs}u^{e}")
        body = " + ".join(bits) if bits else "0"
        if self.abs_prec == INF_PREC:
            return body
        return f"{body} + O(u^{self.abs_prec})"


def useries_agree(a: USeries, b: USeries) -> bool:
    """Equality of all coefficients below the smaller abs_prec."""
    return useries_diff_witness(a, b) is None


def useries_diff_witness(a: USeries, b: USeries):
    """First exponent (with both values) where a and b disagree, else None."""
    if a.field != b.field:
        raise FieldMismatch("comparing series over different fields")
    prec = min(a.abs_prec, b.abs_prec)
    lo_cands = [s.min_exp for s in (a, b) if s.coeffs]
    if not lo_cands:
        return None
    lo = min(lo_cands)
    hi = max([s.min_exp + len(s.coeffs) for s in (a, b) if s.coeffs])
    if prec != INF_PREC:
        hi = min(hi, prec)
    for e in range(lo, hi):
        ca = a.coeffs[e - a.min_exp] if 0 <= e - a.min_exp < len(a.coeffs) else 0
        cb = b.coeffs[e - b.min_exp] if 0 <= e - b.min_exp < len(b.coeffs) else 0
        if ca != cb:
            return (e, a.field.from_index(ca), b.field.from_index(cb))
    return None


def useries_arith(a: USeries, b: USeries | None, op: str) -> USeries:
    """Dispatcher over the three core operations: add, mul, inv."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    raise ConstraintViolated(f"unknown op {op!r}; expected add, mul, or inv")


# -- the embedding of K = F_q(theta) ------------------------------------------

def theta_series(field: Field) -> USeries:
    """theta = -u^{-(q-1)}, exact."""
    return USeries.monomial(field, -(field.q - 1), field.elem(-1))


def _poly_series(p, field: Field) -> USeries:
    out = {}
    add = field.add_t
    neg_pow = field.elem(-1)
    for (i,), c in p.terms.items():
        # theta^i = (-1)^i u^{-i(q-1)}
        e = -i * (field.q - 1)
        v = (neg_pow ** i).idx
        v = field.mul_t[v][c]
        out[e] = add[out.get(e, 0)][v]
    return USeries(
        field,
        min(out) if out else 0,
        _map_to_dense(out),
        INF_PREC,
    )


def _map_to_dense(m: dict) -> list[int]:
    if not m:
        return []
    lo = min(m)
    dense = [0] * (max(m) - lo + 1)
    for e, c in m.items():
        dense[e - lo] = c
    return dense


def embed_k(f, prec: int) -> USeries:
    """Laurent expansion of a rational function of theta, exact to u^prec.

    The result's abs_prec is prec unless the value is a Laurent polynomial
    in u (polynomial input, or monomial denominator), which stays exact.
    """
    prec = _as_prec(prec)
    if isinstance(f, Poly):
        f = RatFunc.from_poly(f)
    if not isinstance(f, RatFunc):
        raise ConstraintViolated(
            f"embed_k expects a rational function, got {type(f).__name__}"
        )
    if len(f.vars) != 1:
        raise ConstraintViolated("embed_k expects a univariate rational function of theta")
    field = f.field
    num = _poly_series(f.num, field)
    if f.den.is_constant():
        return num.scale(f.den.coeff((0,)).inverse())
    den = _poly_series(f.den, field)
    if len(den.coeffs) == 1:
        return num * den.inverse()
    if num.is_zero():
        return USeries.zero(field, prec)
    target = prec - num.valuation()
    inv = den.inverse(abs_prec=target)
    return (num * inv).with_prec(prec)


# -- Hasse derivative in u and the theta-derivation ----------------------------

def hasse_du(f: USeries, k: int) -> USeries:
    """k-th u-hyperderivative: sum_i binom(i, k) c_i u^{i-k}."""
    if k < 0:
        raise ConstraintViolated("derivative order must be >= 0")
    if k == 0:
        return f
    field = f.field
    p = field.p
    mul = field.mul_t
    out = [0] * len(f.coeffs)
    for i, c in enumerate(f.coeffs):
        if c:
            b = binom_mod_p(f.min_exp + i, k, p)
            if b:
                out[i] = mul[b][c]
    return USeries(field, f.min_exp - k, out, f.abs_prec - k)


def _delta_scalars(field: Field, n: int) -> list[list[int]]:
    """c[k][m]: X^m coefficient of Delta^k where Delta = D_theta(u) - u.

    Delta's X^j coefficient (j >= 1) is the monomial
    binom(-1/(q-1), j) * (-1)^j * u^{1 + j(q-1)}; all u-exponents in Delta^k
    at X^m collapse to k + m(q-1), so only the scalar triangle is needed.
    """
    p = field.p
    alpha = PadicInt(-1, field.q - 1, p)
    b = [0] * (n + 1)
    for j in range(1, n + 1):
        v = padic_binom(alpha, j)
        b[j] = (p - v) % p if j % 2 else v
    c = [[0] * (n + 1) for _ in range(n + 1)]
    c[0][0] = 1
    for k in range(1, n + 1):
        for m in range(k, n + 1):
            acc = 0
            for j in range(1, m - k + 2):
                if b[j] and c[k - 1][m - j]:
                    acc = (acc + b[j] * c[k - 1][m - j]) % p
            c[k][m] = acc
    return c


def d_theta_useries(f: USeries, n: int) -> Jet:
    """Jet of D_theta(f) mod X^{n+1}, coefficients in F_q((u)).

    Realizes D_theta(f) = sum_k d_u^(k)(f) * Delta^k with
    Delta = D_theta(u) - u and D_theta(u) = u*(1 + X/theta)^{-1/(q-1)}
    (the branch restricting to the identity at X = 0).
    """
    if n < 0:
        raise ConstraintViolated("jet order must be >= 0")
    field = f.field
    q = field.q
    c = _delta_scalars(field, n)
    du = [f]
    for k in range(1, n + 1):
        du.append(hasse_du(f, k))
    out = [f]
    for m in range(1, n + 1):
        acc = USeries.zero(field, f.abs_prec + m * (q - 1))
        for k in range(1, m + 1):
            s = c[k][m]
            if s:
                acc = acc + du[k].scale(s).shift(k + m * (q - 1))
        out.append(acc)
    return Jet(out)


# -- polynomials in t over USeries ---------------------------------------------

class TPoly:
    """Polynomial (t_prec None) or truncated power series (mod t^t_prec) in t.

    coeffs maps t-degree to USeries; absent degrees are exactly zero.  Each
    coefficient carries its own u-precision.
    """

    __slots__ = ("field", "coeffs", "t_prec")

    def __init__(self, field: Field, coeffs: dict, t_prec: int | None = None):
        clean = {}
        for k, v in coeffs.items():
            if t_prec is not None and k >= t_prec:
                continue
            if v.is_exact_zero():
                continue
            clean[k] = v
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "t_prec", t_prec)

    def __setattr__(self, *a):
        raise AttributeError("TPoly is immutable")

    @classmethod
    def zero(cls, field: Field, t_prec: int | None = None) -> "TPoly":
        return cls(field, {}, t_prec)

    @classmethod
    def const(cls, field: Field, c: USeries, t_prec: int | None = None) -> "TPoly":
        return cls(field, {0: c}, t_prec)

    @classmethod
    def one(cls, field: Field, t_prec: int | None = None) -> "TPoly":
        return cls.const(field, USeries.one(field), t_prec)

    def tdegree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def coeff(self, k: int) -> USeries:
        if self.t_prec is not None and k >= self.t_prec:
            raise PrecisionExhausted(
                f"t^{k} coefficient beyond t-truncation {self.t_prec}"
            )
        return self.coeffs.get(k, USeries.zero(self.field))

    def is_exact(self) -> bool:
        return self.t_prec is None and all(c.is_exact() for c in self.coeffs.values())

    def t_valuation(self):
        if self.coeffs:
            return min(self.coeffs)
        return self.t_prec if self.t_prec is not None else INF_PREC

    def _compat(self, other: "TPoly"):
        if self.field != other.field:
            raise FieldMismatch("t-polynomials over different fields")

    @staticmethod
    def _merge_tprec(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def __add__(self, other):
        if not isinstance(other, TPoly):
            return NotImplemented
        self._compat(other)
        tp = self._merge_tprec(self.t_prec, other.t_prec)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return TPoly(self.field, out, tp)

    def __neg__(self):
        return TPoly(self.field, {k: -v for k, v in self.coeffs.items()}, self.t_prec)

    def __sub__(self, other):
        if not isinstance(other, TPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (USeries, int, FqElem)):
            return self.scale(other)
        if not isinstance(other, TPoly):
            return NotImplemented
        self._compat(other)
        tp = None
        if self.t_prec is not None or other.t_prec is not None:
            cands = []
            if self.t_prec is not None:
                v = other.t_valuation()
                cands.append(self.t_prec + (v if v != INF_PREC else 0))
            if other.t_prec is not None:
                v = self.t_valuation()
                cands.append(other.t_prec + (v if v != INF_PREC else 0))
            tp = min(cands)
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if tp is not None and k >= tp:
                    continue
                prod = a * b
                out[k] = out[k] + prod if k in out else prod
        return TPoly(self.field, out, tp)

    __rmul__ = __mul__

    def scale(self, c) -> "TPoly":
        if not isinstance(c, USeries):
            c = USeries.const(self.field, c)
        return TPoly(
            self.field, {k: v * c for k, v in self.coeffs.items()}, self.t_prec
        )

    def d_t(self, i: int) -> "TPoly":
        """i-th t-hyperderivative (exact binomial transform on t-degrees)."""
        if i == 0:
            return self
        p = self.field.p
        out = {}
        for k, v in self.coeffs.items():
            if k >= i:
                b = binom_mod_p(k, i, p)
                if b:
                    out[k - i] = v.scale(b)
        tp = None if self.t_prec is None else max(self.t_prec - i, 0)
        return TPoly(self.field, out, tp)

    def d_t_jet(self, order: int) -> list["TPoly"]:
        return [self.d_t(i) for i in range(order + 1)]

    def d_theta_jet(self, order: int) -> list["TPoly"]:
        """Jet of D_theta applied coefficientwise (t is theta-free)."""
        per_coeff = {k: d_theta_useries(v, order) for k, v in self.coeffs.items()}
        return [
            TPoly(self.field, {k: j[m] for k, j in per_coeff.items()}, self.t_prec)
            for m in range(order + 1)
        ]

    def eval_t_at_theta(self) -> USeries:
        """Substitute t = theta (exact polynomials only)."""
        if self.t_prec is not None:
            raise ConstraintViolated(
                "evaluation at t = theta is only defined for exact t-polynomials"
            )
        if not self.coeffs:
            return USeries.zero(self.field)
        th = theta_series(self.field)
        # Horner over the dense degree range
        deg = self.tdegree()
        acc = self.coeffs.get(deg, USeries.zero(self.field))
        for k in range(deg - 1, -1, -1):
            acc = acc * th
            if k in self.coeffs:
                acc = acc + self.coeffs[k]
        return acc

    def inverse_tseries(self, t_terms: int, u_target=None) -> "TPoly":
        """Inverse as a t-power series mod t^t_terms."""
        if self.t_prec is not None and self.t_prec < t_terms:
            raise PrecisionExhausted(
                f"need {t_terms} t-coefficients, input truncated at {self.t_prec}"
            )
        c0 = self.coeffs.get(0)
        if c0 is None:
            raise DivisionByZero("t-series inverse needs a nonzero constant term")
        g0 = c0.inverse(u_target) if u_target is not None else c0.inverse()
        out = {0: g0}
        for k in range(1, t_terms):
            acc = None
            for i in range(1, k + 1):
                ci = self.coeffs.get(i)
                if ci is None:
                    continue
                term = ci * out[k - i]
                acc = term if acc is None else acc + term
            if acc is not None:
                out[k] = -(g0 * acc)
        return TPoly(self.field, out, t_terms)

    def with_uprec(self, cap) -> "TPoly":
        """Cap each coefficient's abs_prec; cap may be a value or fn(k)."""
        if callable(cap):
            out = {k: v.with_prec(cap(k)) for k, v in self.coeffs.items()}
        else:
            out = {k: v.with_prec(cap) for k, v in self.coeffs.items()}
        return TPoly(self.field, out, self.t_prec)

    def with_tprec(self, t_prec: int | None) -> "TPoly":
        if t_prec is None:
            return self
        if self.t_prec is not None and self.t_prec < t_prec:
            return self
        return TPoly(self.field, self.coeffs, t_prec)

    def __eq__(self, other):
        return (
            isinstance(other, TPoly)
            and self.field == other.field
            and self.t_prec == other.t_prec
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.t_prec, frozenset(self.coeffs.items())))

    def __repr__(self):
        bits = [f"({v!r})*t^{k}" for k, v in sorted(self.coeffs.items())]
        body = " + ".join(bits) if bits else "0"
        if self.t_prec is not None:
            body += f" + O(t^{self.t_prec})"
        return body


def tpoly_agree(a: TPoly, b: TPoly) -> bool:
    return tpoly_diff_witness(a, b) is None


def tpoly_diff_witness(a: TPoly, b: TPoly):
    """(t-degree, u-exponent, left, right) of the first disagreement, else None."""
    if a.field != b.field:
        raise FieldMismatch("comparing t-polynomials over different fields")
    hi = max(a.tdegree(), b.tdegree()) + 1
    for tp in (a.t_prec, b.t_prec):
        if tp is not None:
            hi = min(hi, tp)
    zero = USeries.zero(a.field)
    for k in range(hi):
        w = useries_diff_witness(a.coeffs.get(k, zero), b.coeffs.get(k, zero))
        if w is not None:
            return (k,) + w
    return None
