"""Exact polynomial and rational-function arithmetic over F_q.

Polynomials live in F_q[theta] or F_q[theta, t] (sparse exponent-tuple maps).
Rational functions are kept in canonical form at all times: numerator and
denominator coprime, denominator monic under the degree-lexicographic order
with theta > t.  SJet is a truncated expansion in s = t - theta with exact
coefficients in K = F_q(theta).

The gcd is a primitive polynomial-remainder-sequence Euclidean algorithm on
the univariate-in-main-variable view; bivariate content is split off
recursively via univariate gcds.
"""

from __future__ import annotations

from .binomials import binom_mod_p
from .errors import (
    ConstraintViolated,
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    NonUnitConstantTerm,
    PoleAtTheta,
)
from .gf import Field, FqElem

VARS_T = ("theta",)
VARS_TT = ("theta", "t")


# -- dense univariate kernels (lists of table indices, low degree first) -----

def _utrim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _uadd(a: list[int], b: list[int], f: Field) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    add = f.add_t
    out = list(a)
    for i, x in enumerate(b):
        out[i] = add[out[i]][x]
    return _utrim(out)


def _usub(a: list[int], b: list[int], f: Field) -> list[int]:
    add, neg = f.add_t, f.neg_t
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] = add[out[i]][neg[x]]
    return _utrim(out)


def _umul(a: list[int], b: list[int], f: Field) -> list[int]:
    if not a or not b:
        return []
    add, mul = f.add_t, f.mul_t
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            row = mul[x]
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add[out[i + j]][row[y]]
    return _utrim(out)


def _uscale(a: list[int], c: int, f: Field) -> list[int]:
    if c == 0:
        return []
    if c == 1:
        return list(a)
    row = f.mul_t[c]
    return _utrim([row[x] for x in a])


def _udivmod(a: list[int], b: list[int], f: Field) -> tuple[list[int], list[int]]:
    b = _utrim(list(b))
    if not b:
        raise DivisionByZero("univariate division by zero")
    a = _utrim(list(a))
    add, mul, neg = f.add_t, f.mul_t, f.neg_t
    inv_lead = f.inv_t[b[-1]]
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = mul[a[-1]][inv_lead]
        shift = len(a) - len(b)
        if c:
            q[shift] = c
            row = mul[c]
            for j, y in enumerate(b):
                if y:
                    a[shift + j] = add[a[shift + j]][neg[row[y]]]
        a.pop()
        _utrim(a)
        if not a:
            break
    return _utrim(q), a


def _udivexact(a: list[int], b: list[int], f: Field) -> list[int]:
    q, r = _udivmod(a, b, f)
    if r:
        raise ConstraintViolated("univariate division was not exact")
    return q


def _ugcd(a: list[int], b: list[int], f: Field) -> list[int]:
    a, b = list(a), list(b)
    while b:
        _, r = _udivmod(a, b, f)
        a, b = b, r
    if a and a[-1] != 1:
        a = _uscale(a, f.inv_t[a[-1]], f)
    return a


# -- sparse polynomials -------------------------------------------------------

def _deglex_key(exps: tuple[int, ...]) -> tuple:
    return (sum(exps), exps)


class Poly:
    """Sparse polynomial over F_q in theta (1 var) or theta, t (2 vars).

    terms maps exponent tuples to nonzero field-table indices; use
    coeff()/coeff_items() for the FqElem view.
    """

    __slots__ = ("field", "vars", "terms", "_hash")

    def __init__(self, field: Field, vars: tuple[str, ...], terms: dict):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # construction helpers

    @classmethod
    def zero(cls, field: Field, vars=VARS_T) -> "Poly":
        return cls(field, vars, {})

    @classmethod
    def const(cls, field: Field, value, vars=VARS_T) -> "Poly":
        c = field.elem(value)
        if c.is_zero():
            return cls.zero(field, vars)
        return cls(field, vars, {(0,) * len(vars): c.idx})

    @classmethod
    def one(cls, field: Field, vars=VARS_T) -> "Poly":
        return cls.const(field, 1, vars)

    @classmethod
    def monomial(cls, field: Field, exps: tuple[int, ...], coeff=1, vars=None) -> "Poly":
        if vars is None:
            vars = VARS_T if len(exps) == 1 else VARS_TT
        if len(exps) != len(vars) or any(e < 0 for e in exps):
            raise ConstraintViolated(f"bad exponent tuple {exps} for vars {vars}")
        c = field.elem(coeff)
        if c.is_zero():
            return cls.zero(field, vars)
        return cls(field, vars, {tuple(exps): c.idx})

    @classmethod
    def from_items(cls, field: Field, items, vars=VARS_T) -> "Poly":
        terms: dict = {}
        add = field.add_t
        for exps, coeff in items:
            idx = field.elem(coeff).idx
            k = tuple(exps)
            cur = add[terms.get(k, 0)][idx]
            if cur:
                terms[k] = cur
            else:
                terms.pop(k, None)
        return cls(field, vars, terms)

    # views

    def coeff(self, exps: tuple[int, ...]) -> FqElem:
        return self.field.from_index(self.terms.get(tuple(exps), 0))

    def coeff_items(self):
        return [(e, self.field.from_index(c)) for e, c in sorted(self.terms.items())]

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def degree(self, var: int = 0) -> int:
        """Degree in the given variable index; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[var] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading_term(self) -> tuple[tuple[int, ...], FqElem]:
        """Leading exponent and coefficient under deglex with theta > t."""
        if not self.terms:
            raise DivisionByZero("zero polynomial has no leading term")
        e = max(self.terms, key=_deglex_key)
        return e, self.field.from_index(self.terms[e])

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        _, lc = self.leading_term()
        if lc.idx == 1:
            return self
        return self.scale(lc.inverse())

    # arithmetic

    def _compat(self, other: "Poly"):
        if self.field != other.field:
            raise FieldMismatch("polynomials over different fields")
        if self.vars != other.vars:
            raise ConstraintViolated(
                f"variable sets differ: {self.vars} vs {other.vars}"
            )

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._compat(other)
        add = self.field.add_t
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = add[out.get(e, 0)][c]
            if cur:
                out[e] = cur
            else:
                out.pop(e, None)
        return Poly(self.field, self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg_t
        return Poly(self.field, self.vars, {e: neg[c] for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, FqElem)):
            return Poly.const(self.field, other, self.vars)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, FqElem)):
            return self.scale(self.field.elem(other))
        if not isinstance(other, Poly):
            return NotImplemented
        self._compat(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly.zero(self.field, self.vars)
        if len(a) > len(b):
            a, b = b, a
        add, mul = self.field.add_t, self.field.mul_t
        out: dict = {}
        n = len(self.vars)
        if n == 1:
            for (i,), c in a.items():
                row = mul[c]
                for (j,), d in b.items():
                    k = (i + j,)
                    cur = add[out.get(k, 0)][row[d]]
                    if cur:
                        out[k] = cur
                    else:
                        out.pop(k, None)
        else:
            for (i1, j1), c in a.items():
                row = mul[c]
                for (i2, j2), d in b.items():
                    k = (i1 + i2, j1 + j2)
                    cur = add[out.get(k, 0)][row[d]]
                    if cur:
                        out[k] = cur
                    else:
                        out.pop(k, None)
        return Poly(self.field, self.vars, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = self.field.elem(c)
        if c.is_zero():
            return Poly.zero(self.field, self.vars)
        if c.idx == 1:
            return self
        row = self.field.mul_t[c.idx]
        return Poly(self.field, self.vars, {e: row[x] for e, x in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ConstraintViolated("negative power of a polynomial")
        result = Poly.one(self.field, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def frobenius_power(self, k: int = 1) -> "Poly":
        """self**(p^k); exact and cheap in characteristic p."""
        pk = self.field.p ** k
        out = {}
        for e, c in self.terms.items():
            out[tuple(x * pk for x in e)] = self.field.from_index(c).frobenius(k).idx
        return Poly(self.field, self.vars, out)

    # substitution / promotion

    def lift_tt(self) -> "Poly":
        if self.vars == VARS_TT:
            return self
        return Poly(self.field, VARS_TT, {(i, 0): c for (i,), c in self.terms.items()})

    def drop_t(self) -> "Poly":
        """Inverse of lift_tt for polynomials with no t."""
        if self.vars == VARS_T:
            return self
        if any(j for (_, j) in self.terms):
            raise ConstraintViolated("polynomial actually involves t")
        return Poly(self.field, VARS_T, {(i,): c for (i, _), c in self.terms.items()})

    def eval_t_at_theta(self) -> "Poly":
        """Substitute t = theta; collapses to a univariate polynomial."""
        if self.vars == VARS_T:
            return self
        add = self.field.add_t
        out: dict = {}
        for (i, j), c in self.terms.items():
            k = (i + j,)
            cur = add[out.get(k, 0)][c]
            if cur:
                out[k] = cur
            else:
                out.pop(k, None)
        return Poly(self.field, VARS_T, out)

    def to_dense(self) -> list[int]:
        if self.vars != VARS_T:
            raise ConstraintViolated("dense view is for univariate polynomials")
        out = [0] * (self.degree() + 1) if self.terms else []
        for (i,), c in self.terms.items():
            out[i] = c
        return out

    @classmethod
    def from_dense(cls, field: Field, dense: list[int]) -> "Poly":
        return cls(field, VARS_T, {(i,): c for i, c in enumerate(dense) if c})

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.field, self.vars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=_deglex_key, reverse=True):
            c = self.terms[e]
            factors = []
            if self.field.e == 1:
                if c != 1 or all(x == 0 for x in e):
                    factors.append(str(c))
            else:
                factors.append(repr(self.field.from_index(c)))
            for name, x in zip(self.vars, e):
                if x == 1:
                    factors.append(name)
                elif x > 1:
                    factors.append(f"{name}^{x}")
            bits.append("*".join(factors) or "1")
        return " + ".join(bits)


# -- gcd machinery ------------------------------------------------------------

def _bi_view(p: Poly, mv: int) -> dict[int, list[int]]:
    """View a bivariate polynomial as main-var dict of dense other-var polys."""
    rows: dict[int, dict[int, int]] = {}
    for e, c in p.terms.items():
        rows.setdefault(e[mv], {})[e[1 - mv]] = c
    out = {}
    for m, row in rows.items():
        dense = [0] * (max(row) + 1)
        for j, c in row.items():
            dense[j] = c
        out[m] = dense
    return out


def _bi_unview(view: dict[int, list[int]], mv: int, field: Field) -> Poly:
    terms = {}
    for m, dense in view.items():
        for j, c in enumerate(dense):
            if c:
                e = (m, j) if mv == 0 else (j, m)
                terms[e] = c
    return Poly(field, VARS_TT, terms)


def _bi_content(view: dict[int, list[int]], f: Field) -> list[int]:
    g: list[int] = []
    for dense in view.values():
        g = _ugcd(g, dense, f)
        if g == [1]:
            break
    return g


def _bi_pp(view, content, f: Field):
    if content == [1]:
        return view
    return {m: _udivexact(dense, content, f) for m, dense in view.items()}


def _bi_prem(a: dict[int, list[int]], b: dict[int, list[int]], f: Field):
    """Pseudo-remainder of a by b in the main variable (views)."""
    db = max(b)
    lb = b[db]
    r = {m: list(c) for m, c in a.items()}
    while r:
        dr = max(r)
        if dr < db:
            break
        lr = r.pop(dr)
        nr: dict[int, list[int]] = {}
        for m, c in r.items():
            nr[m] = _umul(c, lb, f)
        for m, c in b.items():
            if m == db:
                continue
            tgt = m + dr - db
            prod = _umul(c, lr, f)
            nr[tgt] = _usub(nr.get(tgt, []), prod, f)
        r = {m: c for m, c in nr.items() if c}
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic (deglex) gcd; primitive PRS for the bivariate case."""
    if a.field != b.field:
        raise FieldMismatch("gcd of polynomials over different fields")
    if a.vars != b.vars:
        raise ConstraintViolated("gcd of polynomials in different variables")
    f = a.field
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Poly.one(f, a.vars)
    if a.vars == VARS_T:
        return Poly.from_dense(f, _ugcd(a.to_dense(), b.to_dense(), f))
    # pick the main variable with the smaller worst-case degree
    d0 = max(a.degree(0), b.degree(0))
    d1 = max(a.degree(1), b.degree(1))
    mv = 0 if d0 <= d1 else 1
    va, vb = _bi_view(a, mv), _bi_view(b, mv)
    ca, cb = _bi_content(va, f), _bi_content(vb, f)
    gc = _ugcd(ca, cb, f)
    pa, pb = _bi_pp(va, ca, f), _bi_pp(vb, cb, f)
    while pb:
        r = _bi_prem(pa, pb, f)
        if r:
            r = _bi_pp(r, _bi_content(r, f), f)
        pa, pb = pb, r
    g = _bi_unview(pa, mv, f)
    if gc != [1]:
        gp = Poly(
            f,
            VARS_TT,
            {((0, j) if mv == 0 else (j, 0)): c for j, c in enumerate(gc) if c},
        )
        g = g * gp
    return g.monic()


def poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact division a / b; raises if b does not divide a."""
    if b.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if a.is_zero():
        return a
    a._compat(b)
    f = a.field
    eb, lb = b.leading_term()
    lb_inv = lb.inverse()
    rem = dict(a.terms)
    out: dict = {}
    add, mul, neg = f.add_t, f.mul_t, f.neg_t
    while rem:
        ea = max(rem, key=_deglex_key)
        eq = tuple(x - y for x, y in zip(ea, eb))
        if any(x < 0 for x in eq):
            raise ConstraintViolated("polynomial division is not exact")
        c = mul[rem[ea]][lb_inv.idx]
        out[eq] = c
        row = mul[c]
        for e2, c2 in b.terms.items():
            k = tuple(x + y for x, y in zip(eq, e2))
            cur = add[rem.get(k, 0)][neg[row[c2]]]
            if cur:
                rem[k] = cur
            else:
                rem.pop(k, None)
    return Poly(f, a.vars, out)


# -- rational functions -------------------------------------------------------

class RatFunc:
    """Canonical fraction of polynomials: coprime, monic denominator (deglex).

    Construct through make()/from_poly(); the raw constructor trusts its
    arguments.
    """

    __slots__ = ("field", "vars", "num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly):
        object.__setattr__(self, "field", num.field)
        object.__setattr__(self, "vars", num.vars)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def make(cls, num: Poly, den: Poly) -> "RatFunc":
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        num._compat(den)
        if num.is_zero():
            return cls(num, Poly.one(num.field, num.vars))
        g = poly_gcd(num, den)
        if not (g.is_constant()):
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
        _, lc = den.leading_term()
        if lc.idx != 1:
            inv = lc.inverse()
            num = num.scale(inv)
            den = den.scale(inv)
        return cls(num, den)

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFunc":
        return cls(p, Poly.one(p.field, p.vars))

    @classmethod
    def zero(cls, field: Field, vars=VARS_T) -> "RatFunc":
        return cls(Poly.zero(field, vars), Poly.one(field, vars))

    @classmethod
    def one(cls, field: Field, vars=VARS_T) -> "RatFunc":
        return cls.from_poly(Poly.one(field, vars))

    @classmethod
    def const(cls, field: Field, value, vars=VARS_T) -> "RatFunc":
        return cls.from_poly(Poly.const(field, value, vars))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_constant() and self.den.is_constant() and self.num == self.den

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, FqElem)):
            return RatFunc.const(self.field, other, self.vars)
        return NotImplemented

    def _compat(self, other: "RatFunc"):
        if self.field != other.field:
            raise FieldMismatch("rational functions over different fields")
        if self.vars != other.vars:
            raise ConstraintViolated("rational functions in different variables")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._compat(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        a, b, c, d = self.num, self.den, other.num, other.den
        one = Poly.one(self.field, self.vars)
        if b.is_constant() and d.is_constant():
            return RatFunc(a + c, one) if not (a + c).is_zero() else RatFunc.zero(self.field, self.vars)
        g = poly_gcd(b, d)
        if g.is_constant():
            num = a * d + c * b
            if num.is_zero():
                return RatFunc.zero(self.field, self.vars)
            return RatFunc._monic(num, b * d)
        b1 = poly_divexact(b, g)
        d1 = poly_divexact(d, g)
        num = a * d1 + c * b1
        if num.is_zero():
            return RatFunc.zero(self.field, self.vars)
        h = poly_gcd(num, g)
        if not h.is_constant():
            num = poly_divexact(num, h)
            den = b1 * poly_divexact(d, h)
        else:
            den = b1 * d
        return RatFunc._monic(num, den)

    __radd__ = __add__

    @classmethod
    def _monic(cls, num: Poly, den: Poly) -> "RatFunc":
        _, lc = den.leading_term()
        if lc.idx != 1:
            inv = lc.inverse()
            num = num.scale(inv)
            den = den.scale(inv)
        return cls(num, den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._compat(other)
        if self.is_zero() or other.is_zero():
            return RatFunc.zero(self.field, self.vars)
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = poly_gcd(a, d) if not (a.is_constant() or d.is_constant()) else None
        g2 = poly_gcd(c, b) if not (c.is_constant() or b.is_constant()) else None
        if g1 is not None and not g1.is_constant():
            a = poly_divexact(a, g1)
            d = poly_divexact(d, g1)
        if g2 is not None and not g2.is_constant():
            c = poly_divexact(c, g2)
            b = poly_divexact(b, g2)
        return RatFunc._monic(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        return RatFunc._monic(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k == 0:
            return RatFunc.one(self.field, self.vars)
        if k < 0:
            return self.inverse() ** (-k)
        # coprimality and deglex-monicity both survive powering
        return RatFunc(self.num ** k, self.den ** k)

    def frobenius_power(self, k: int = 1) -> "RatFunc":
        return RatFunc(self.num.frobenius_power(k), self.den.frobenius_power(k))

    def lift_tt(self) -> "RatFunc":
        if self.vars == VARS_TT:
            return self
        return RatFunc(self.num.lift_tt(), self.den.lift_tt())

    def eval_t_at_theta(self) -> "RatFunc":
        """Substitute t = theta; raises PoleAtTheta on a genuine pole."""
        if self.vars == VARS_T:
            return self
        den_e = self.den.eval_t_at_theta()
        if den_e.is_zero():
            raise PoleAtTheta(f"denominator {self.den!r} vanishes at t = theta")
        num_e = self.num.eval_t_at_theta()
        return RatFunc.make(num_e, den_e)

    def __eq__(self, other):
        if isinstance(other, (int, FqElem, Poly)):
            other = self._coerce(other)
        return (
            isinstance(other, RatFunc)
            and self.field == other.field
            and self.vars == other.vars
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        if self.den.is_constant():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def eval_t_at_theta(f):
    """Substitute t = theta in a Poly or RatFunc."""
    return f.eval_t_at_theta()


# -- truncated expansions in s = t - theta ------------------------------------

class SJet:
    """Truncated series in s = t - theta with exact coefficients in F_q(theta).

    coeffs[k] is the coefficient of s^k; the object represents the class
    modulo s^order.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("SJet is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def constant(cls, field: Field, order: int, value) -> "SJet":
        if isinstance(value, RatFunc):
            c0 = value
        elif isinstance(value, Poly):
            c0 = RatFunc.from_poly(value)
        else:
            c0 = RatFunc.const(field, value)
        z = RatFunc.zero(field, c0.vars)
        return cls(field, [c0] + [z] * (order - 1))

    def _compat(self, other: "SJet"):
        if self.field != other.field:
            raise FieldMismatch("sjets over different fields")
        if self.order != other.order:
            raise DegreeMismatch(
                f"sjet orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other):
        if not isinstance(other, SJet):
            return NotImplemented
        self._compat(other)
        return SJet(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return SJet(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, SJet):
            return NotImplemented
        self._compat(other)
        return SJet(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        if isinstance(other, (RatFunc, Poly, int, FqElem)):
            return self.scale(other)
        if not isinstance(other, SJet):
            return NotImplemented
        self._compat(other)
        m = self.order
        zero = RatFunc.zero(self.field, self.coeffs[0].vars)
        out = [zero] * m
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(m - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return SJet(self.field, out)

    __rmul__ = __mul__

    def scale(self, c) -> "SJet":
        if isinstance(c, Poly):
            c = RatFunc.from_poly(c)
        elif not isinstance(c, RatFunc):
            c = RatFunc.const(self.field, c, self.coeffs[0].vars)
        return SJet(self.field, [a * c for a in self.coeffs])

    def inverse(self) -> "SJet":
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise NonUnitConstantTerm("sjet inversion needs a unit constant term")
        inv0 = c0.inverse()
        out = [inv0]
        for k in range(1, self.order):
            acc = None
            for i in range(1, k + 1):
                ai = self.coeffs[i]
                if ai.is_zero():
                    continue
                term = ai * out[k - i]
                acc = term if acc is None else acc + term
            if acc is None:
                out.append(RatFunc.zero(self.field, c0.vars))
            else:
                out.append(-(inv0 * acc))
        return SJet(self.field, out)

    def frobenius_power(self, k: int = 1) -> "SJet":
        """self**(p^k), exact via the Frobenius homomorphism."""
        pk = self.field.p ** k
        zero = RatFunc.zero(self.field, self.coeffs[0].vars)
        out = [zero] * self.order
        for i, c in enumerate(self.coeffs):
            if i * pk >= self.order:
                break
            if not c.is_zero():
                out[i * pk] = c.frobenius_power(k)
        return SJet(self.field, out)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return SJet.constant(self.field, self.order, RatFunc.one(self.field, self.coeffs[0].vars))
        # base-p decomposition: small powers times iterated Frobenius powers
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
            isinstance(other, SJet)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        bits = [f"({c!r})*s^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(bits) if bits else "0"


def taylor_shift(f: Poly, order: int) -> SJet:
    """Expand a polynomial in t around t = theta: coefficients of s = t - theta.

    Exact for any polynomial degree; coefficient k is d_t^k(f) |_{t=theta}.
    """
    field = f.field
    p = field.p
    rows: list[dict] = [dict() for _ in range(order)]
    add = field.add_t
    if f.vars == VARS_T:
        for (i,), c in f.terms.items():
            k = (i,)
            rows[0][k] = add[rows[0].get(k, 0)][c]
    else:
        for (i, j), c in f.terms.items():
            for k in range(min(j, order - 1) + 1):
                b = binom_mod_p(j, k, p)
                if b:
                    e = (i + j - k,)
                    v = add[rows[k].get(e, 0)][field.mul_t[b][c]]
                    if v:
                        rows[k][e] = v
                    else:
                        rows[k].pop(e, None)
    coeffs = [
        RatFunc.from_poly(Poly(field, VARS_T, {e: c for e, c in row.items() if c}))
        for row in rows
    ]
    return SJet(field, coeffs)


def sjet_from_ratfunc(f: RatFunc, order: int) -> SJet:
    """Expansion of a rational function around t = theta (no pole allowed)."""
    den_at = f.den.eval_t_at_theta()
    if den_at.is_zero():
        raise PoleAtTheta(f"denominator {f.den!r} vanishes at t = theta")
    num_jet = taylor_shift(f.num.lift_tt(), order)
    den_jet = taylor_shift(f.den.lift_tt(), order)
    return num_jet * den_jet.inverse()
