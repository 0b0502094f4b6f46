"""The fraction field Q(u) of a polynomial ring in auxiliary variables.

Elements are reduced on every arithmetic result: numerator and denominator
are divided by their multivariate GCD (computed by a primitive polynomial
remainder sequence) and the denominator is made monic, so equal elements
have identical representations.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import QQ
from .orders import GrevLex
from .poly import Poly, Ring

# -- polynomial gcd over QQ ---------------------------------------------------


def _active_vars(f):
    seen = set()
    for e, _ in f.terms:
        for i, k in enumerate(e):
            if k:
                seen.add(i)
    return seen


def _as_univariate(f, i):
    """View f as a univariate polynomial in variable i: {deg: coefficient poly}."""
    parts = {}
    for e, c in f.terms:
        k = e[i]
        rest = e[:i] + (0,) + e[i + 1 :]
        parts.setdefault(k, {})[rest] = c
    return {k: Poly.from_dict(f.ring, d) for k, d in parts.items()}


def _from_univariate(parts, i, ring):
    d = {}
    for k, coeff in parts.items():
        for e, c in coeff.terms:
            d[e[:i] + (k,) + e[i + 1 :]] = c
    return Poly.from_dict(ring, d)


def divexact(a, b):
    """Exact division a / b; raises if b does not divide a."""
    ring = a.ring
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return a
    quo = {}
    rem = dict(a.terms)
    key = ring._key
    be, bc = b.terms[0]
    while rem:
        e = max(rem, key=key)
        c = rem.pop(e)
        q = tuple(map(int.__sub__, e, be))
        if min(q) < 0:
            raise ValueError("inexact polynomial division")
        f = c / bc
        quo[q] = f
        for e2, c2 in b.terms[1:]:
            m = tuple(map(int.__add__, q, e2))
            s = rem.get(m, None)
            s = -f * c2 if s is None else s - f * c2
            if s:
                rem[m] = s
            elif m in rem:
                del rem[m]
    return Poly.from_dict(ring, quo)


def poly_gcd(a, b):
    """GCD over Q, normalized monic; gcd(0, b) = monic b."""
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    g = _gcd_rec(a.canonical(), b.canonical())
    return g.monic()


def _gcd_rec(a, b):
    av, bv = _active_vars(a), _active_vars(b)
    common = av | bv
    if not common:
        return a.ring.one()
    i = max(common)
    if i not in av or i not in bv:
        # one side is free of the main variable: gcd divides the content
        free, other = (a, b) if i not in av else (b, a)
        cont = _content(other, i)
        return _gcd_rec(free, cont)
    if av == {i} and bv == {i}:
        return _gcd_euclid(a, b, i)
    return _gcd_subresultant(a, b, i)


def _content(f, i):
    parts = _as_univariate(f, i)
    cont = f.ring.zero()
    for coeff in parts.values():
        cont = _gcd_rec(coeff, cont) if cont else coeff
        if cont.is_const():
            break
    return cont.monic()


def _gcd_euclid(a, b, i):
    """Monic Euclid for truly univariate polynomials over Q."""
    pa = {e[i]: c for e, c in a.terms}
    pb = {e[i]: c for e, c in b.terms}
    if max(pa) < max(pb):
        pa, pb = pb, pa
    while pb:
        db = max(pb)
        lb = pb[db]
        pb = {k: c / lb for k, c in pb.items()}
        rem = dict(pa)
        while rem and max(rem) >= db:
            d = max(rem)
            lead = rem.pop(d)
            for k, c in pb.items():
                if k == db:
                    continue
                tgt = k + d - db
                cur = rem.get(tgt)
                val = -(lead * c) if cur is None else cur - lead * c
                if val:
                    rem[tgt] = val
                elif tgt in rem:
                    del rem[tgt]
        pa, pb = pb, rem
    ring = a.ring
    d = {}
    for k, c in pa.items():
        e = [0] * ring.n
        e[i] = k
        d[tuple(e)] = c
    return Poly.from_dict(ring, d)


def _deg_in(f, i):
    return max(e[i] for e, _ in f.terms)


def _lead_in(f, i):
    """Leading coefficient of f as a univariate polynomial in variable i."""
    d = _deg_in(f, i)
    parts = {e[:i] + (0,) + e[i + 1 :]: c for e, c in f.terms if e[i] == d}
    return Poly.from_dict(f.ring, parts)


def _shift_in(f, i, k):
    return Poly.from_dict(
        f.ring, {e[:i] + (e[i] + k,) + e[i + 1 :]: c for e, c in f.terms}
    )


def _prem(a, b, i):
    """Standard pseudo-remainder: lc(b)^(da-db+1) * a mod b in variable i."""
    da, db = _deg_in(a, i), _deg_in(b, i)
    lb = _lead_in(b, i)
    r = a
    e = da - db + 1
    while r.terms and _deg_in(r, i) >= db:
        d = _deg_in(r, i)
        lr = _lead_in(r, i)
        r = lb * r - _shift_in(lr, i, d - db) * b
        e -= 1
    if e > 0:
        r = lb**e * r
    return r


def _gcd_subresultant(a, b, i):
    """Subresultant PRS on primitive parts; contents recurse."""
    ca, cb = _content(a, i), _content(b, i)
    a = divexact(a, ca).canonical()
    b = divexact(b, cb).canonical()
    cont = _gcd_rec(ca, cb)
    if _deg_in(a, i) < _deg_in(b, i):
        a, b = b, a
    ring = a.ring
    g = ring.one()
    h = ring.one()
    while True:
        delta = _deg_in(a, i) - _deg_in(b, i)
        r = _prem(a, b, i)
        if not r.terms:
            pp = divexact(b, _content(b, i))
            return cont * pp
        if _deg_in(r, i) == 0:
            return cont
        a, b = b, divexact(r, g * h**delta)
        g = _lead_in(a, i)
        if delta > 1:
            h = divexact(g**delta, h ** (delta - 1))
        elif delta == 1:
            h = g
        # delta == 0 keeps h unchanged


def poly_lcm(a, b):
    if not a or not b:
        return a.ring.zero()
    return divexact(a * b, poly_gcd(a, b)).monic()


def squarefree_part(p):
    """p with repeated irreducible factors collapsed (char-0 gcd trick)."""
    from .poly import derivative

    if not p.terms or p.is_const():
        return p
    g = p.ring.zero()
    for i in range(p.ring.n):
        d = derivative(p, i)
        if d.terms:
            g = poly_gcd(g, d) if g else d.monic()
            if g.is_const():
                return p
    g = poly_gcd(p, g)
    if g.is_const():
        return p
    return divexact(p, g)


# -- the field ----------------------------------------------------------------


class RatFunc:
    """Reduced fraction num/den of polynomials over Q, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, reduce=True):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if reduce:
            if not num:
                den = den.ring.one()
            else:
                g = poly_gcd(num, den)
                if not g.is_const():
                    num = divexact(num, g)
                    den = divexact(den, g)
                lc = den.head_coeff()
                if lc != 1:
                    num = num * (Fraction(1) / lc)
                    den = den.monic()
        self.num = num
        self.den = den

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        other = _lift(other, self)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other, self)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num - other.num, self.den)
        return RatFunc(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        lifted = _lift(other, self)
        if lifted is None:
            return NotImplemented
        return lifted - self

    def __mul__(self, other):
        other = _lift(other, self)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other, self)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        lifted = _lift(other, self)
        if lifted is None:
            return NotImplemented
        return lifted / self

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __pow__(self, k):
        if k < 0:
            return RatFunc(self.den, self.num) ** (-k)
        return RatFunc(self.num**k, self.den**k, reduce=False)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.num
            other = RatFunc(self.num.ring.const(other), self.num.ring.one(), reduce=False)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def as_fraction(self):
        if not self.num:
            return Fraction(0)
        if not self.is_const():
            raise ValueError(f"{self} is not a rational constant")
        return self.num.const_coeff() / self.den.const_coeff()

    def __str__(self):
        if self.den == self.num.ring.one():
            return self.num.render_raw()
        return f"({self.num.render_raw()})/({self.den.render_raw()})"

    __repr__ = __str__


def _lift(v, like):
    if isinstance(v, RatFunc):
        return v
    if not isinstance(v, (int, Fraction)):
        return None
    ring = like.num.ring
    return RatFunc(ring.const(v), ring.one(), reduce=False)


class FractionField:
    """Q(u1,...,uk): rational functions in the auxiliary variables."""

    def __init__(self, names):
        self.ring = Ring(tuple(names), QQ, GrevLex())
        self.zero = RatFunc(self.ring.zero(), self.ring.one(), reduce=False)
        self.one = RatFunc(self.ring.one(), self.ring.one(), reduce=False)

    def coerce(self, value):
        if isinstance(value, RatFunc):
            if value.num.ring != self.ring:
                raise TypeError(f"{value} lives in a different fraction field")
            return value
        if isinstance(value, (int, Fraction)):
            return RatFunc(self.ring.const(value), self.ring.one(), reduce=False)
        if isinstance(value, Poly) and value.ring == self.ring:
            return RatFunc(value, self.ring.one(), reduce=False)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def canonical_scale(self, coeffs):
        """Clear denominators and content; leading numerator coefficient positive."""
        den = self.ring.one()
        for c in coeffs:
            den = poly_lcm(den, c.den)
        cont = self.ring.zero()
        for c in coeffs:
            cleared = c.num * divexact(den, c.den)
            cont = poly_gcd(cont, cleared) if cont else cleared
        scale = RatFunc(den, cont if cont else self.ring.one())
        lead = coeffs[0] * scale
        sign = lead.num.head_coeff()
        if sign < 0:
            scale = -scale
        return scale

    def format_coeff(self, c):
        num = c.num if c.den == self.ring.one() else None
        if num is None:
            return "+", f"({c})"
        if len(num.terms) == 1:
            e, a = num.terms[0]
            sign = "-" if a < 0 else "+"
            factors = []
            if abs(a) != 1:
                factors.append(str(abs(a)))
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(self.ring.names[i])
                elif k > 1:
                    factors.append(f"{self.ring.names[i]}^{k}")
            return sign, "*".join(factors) if factors else None
        return "+", f"({num.render_raw()})"

    def __repr__(self):
        return f"QQ({','.join(self.ring.names)})"

    __str__ = __repr__

    def __eq__(self, other):
        return isinstance(other, FractionField) and self.ring.names == other.ring.names

    def __hash__(self):
        return hash(("QQ()", self.ring.names))
