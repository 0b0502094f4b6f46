"""Sparse multivariate polynomials over an exact coefficient field.

A polynomial stores its terms as a tuple of (exponent, coefficient) pairs
sorted in descending ambient order, so the head term is ``terms[0]``.
Exponents are plain int tuples, one entry per ring variable.  Values are
immutable after construction; every operation returns a fresh polynomial.

Parameters, when present, occupy the *trailing* positions of the variable
list and the ring records how many there are.  That single integer is the
whole parametric structure: a polynomial in a ring with ``nparams > 0`` is a
polynomial in Q[t][x] with x the leading block.  Terms print parameters
first (``2*t1*x1*x2^4``) even though they compare last.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import RingMismatchError
from .fields import QQ
from .orders import Block, GrevLex, Lex


class Ring:
    """Descriptor: variable names, coefficient field, ambient term order."""

    __slots__ = (
        "names", "field", "order", "n", "nparams", "print_order", "_key", "_kc",
    )

    def __init__(self, names, field=QQ, order=None, nparams=0):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        if not 0 <= nparams <= len(names):
            raise ValueError("parameter count out of range")
        self.names = names
        self.field = field
        self.order = order if order is not None else GrevLex()
        self.n = len(names)
        self.nparams = nparams
        nmain = self.n - nparams
        self.print_order = tuple(range(nmain, self.n)) + tuple(range(nmain))
        self._kc = {}
        raw = self.order.key
        cache = self._kc

        def key_of(e, _raw=raw, _cache=cache):
            k = _cache.get(e)
            if k is None:
                k = _raw(e)
                _cache[e] = k
            return k

        self._key = key_of

    @property
    def nmain(self):
        return self.n - self.nparams

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Ring)
            and self.names == other.names
            and self.field == other.field
            and self.order == other.order
            and self.nparams == other.nparams
        )

    def __hash__(self):
        return hash((self.names, self.field, self.order, self.nparams))

    def __repr__(self):
        params = f"; params={self.names[self.nmain:]}" if self.nparams else ""
        return f"Ring({','.join(self.names)}; {self.field}; {self.order}{params})"

    def zero(self):
        return Poly(self, ())

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.field.coerce(c)
        if not c:
            return Poly(self, ())
        return Poly(self, (((0,) * self.n, c),))

    def var(self, i):
        exp = [0] * self.n
        exp[i] = 1
        return Poly(self, ((tuple(exp), self.field.one),))

    def gens(self):
        return [self.var(i) for i in range(self.n)]

    def index(self, name):
        return self.names.index(name)


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    @staticmethod
    def from_dict(ring, d):
        key = ring._key
        items = [(e, c) for e, c in d.items() if c]
        items.sort(key=lambda t: key(t[0]), reverse=True)
        return Poly(ring, tuple(items))

    def as_dict(self):
        return dict(self.terms)

    # -- predicates and accessors ------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_const(self):
        return not self.terms or not any(self.terms[0][0])

    def const_coeff(self):
        """Coefficient of the monomial 1 (zero of the field if absent)."""
        if self.terms and not any(self.terms[-1][0]):
            return self.terms[-1][1]
        return self.ring.field.zero

    def head_exp(self):
        if not self.terms:
            raise ValueError("zero polynomial has no head term")
        return self.terms[0][0]

    def head_coeff(self):
        if not self.terms:
            raise ValueError("zero polynomial has no head term")
        return self.terms[0][1]

    def total_degree(self):
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(sum(e) for e, _ in self.terms)

    def main_degree(self):
        """Total degree in the main (non-parameter) variables."""
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        nm = self.ring.nmain
        return max(sum(e[:nm]) for e, _ in self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        self._check(other)
        d = dict(self.terms)
        for e, c in other.terms:
            s = d.get(e)
            if s is None:
                d[e] = c
            else:
                s = s + c
                if s:
                    d[e] = s
                else:
                    del d[e]
        return Poly.from_dict(self.ring, d)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        self._check(other)
        d = dict(self.terms)
        for e, c in other.terms:
            s = d.get(e)
            if s is None:
                d[e] = -c
            else:
                s = s - c
                if s:
                    d[e] = s
                else:
                    del d[e]
        return Poly.from_dict(self.ring, d)

    def __neg__(self):
        return Poly(self.ring, tuple((e, -c) for e, c in self.terms))

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.ring.field.coerce(other)
            if not c:
                return self.ring.zero()
            return Poly(self.ring, tuple((e, a * c) for e, a in self.terms))
        self._check(other)
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(map(int.__add__, e1, e2))
                s = d.get(e)
                if s is None:
                    d[e] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        d[e] = s
                    else:
                        del d[e]
        return Poly.from_dict(self.ring, d)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def monic(self):
        if not self.terms:
            return self
        hc = self.terms[0][1]
        one = self.ring.field.one
        if hc == one:
            return self
        return Poly(self.ring, tuple((e, c / hc) for e, c in self.terms))

    def __eq__(self, other):
        if not isinstance(other, Poly):
            if other == 0:
                return not self.terms
            return self.terms == self.ring.const(other).terms
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.terms))

    # -- printing -----------------------------------------------------------

    def canonical(self):
        """Scalar-normalized copy: content-free, head coefficient positive."""
        if not self.terms:
            return self
        scale = self.ring.field.canonical_scale([c for _, c in self.terms])
        if scale == self.ring.field.one:
            return self
        return Poly(self.ring, tuple((e, c * scale) for e, c in self.terms))

    def render_raw(self):
        if not self.terms:
            return "0"
        ring = self.ring
        parts = []
        for e, c in self.terms:
            sign, ctext = ring.field.format_coeff(c)
            factors = [] if ctext is None else [ctext]
            for i in ring.print_order:
                k = e[i]
                if k == 1:
                    factors.append(ring.names[i])
                elif k > 1:
                    factors.append(f"{ring.names[i]}^{k}")
            body = "*".join(factors) if factors else "1"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = [first_body if first_sign == "+" else "-" + first_body]
        for sign, body in parts[1:]:
            out.append(f" {sign} {body}")
        return "".join(out)

    def __str__(self):
        return self.canonical().render_raw()

    def __repr__(self):
        return f"<{self.render_raw()}>"


# -- spec-level operations ---------------------------------------------------


def arith(a, b, op):
    """Exact ring arithmetic; op is one of add, sub, mul."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def head(f, order=None):
    """(head term, head monomial, head coefficient) with hm = ht*hc."""
    if not f.terms:
        raise ValueError("zero polynomial has no head")
    ring = f.ring
    if order is None or order == ring.order:
        e, c = f.terms[0]
    else:
        key = order.key
        e, c = max(f.terms, key=lambda t: key(t[0]))
    ht = Poly(ring, ((e, ring.field.one),))
    hm = Poly(ring, ((e, c),))
    return ht, hm, c


def fresh_name(base, taken):
    name = base
    while name in taken:
        name += "0"
    return name


def homogenized_ring(ring):
    """Ring with the homogenizing variable prepended to the main block."""
    name = fresh_name("x0", ring.names)
    return Ring(
        (name,) + ring.names,
        ring.field,
        Block(1, Lex(), ring.order),
        ring.nparams,
    )


def homogenize(f, hring=None):
    """Degree-balance f in its main variables with a fresh first variable."""
    if not f.terms:
        raise ValueError("cannot homogenize the zero polynomial")
    ring = f.ring
    if hring is None:
        hring = homogenized_ring(ring)
    nm = ring.nmain
    d = f.main_degree()
    terms = {}
    for e, c in f.terms:
        terms[(d - sum(e[:nm]),) + e] = c
    return Poly.from_dict(hring, terms)


def dehomogenize(f):
    """Set the homogenizing (first) variable to 1."""
    ring = f.ring
    if not isinstance(ring.order, Block) or ring.order.split != 1:
        raise ValueError("ring was not built by homogenization")
    target = Ring(ring.names[1:], ring.field, ring.order.rest, ring.nparams)
    d = {}
    for e, c in f.terms:
        e2 = e[1:]
        s = d.get(e2)
        if s is None:
            d[e2] = c
        else:
            s = s + c
            if s:
                d[e2] = s
            else:
                del d[e2]
    return Poly.from_dict(target, d)


def translate(f, point, sign=1):
    """Substitute x_i -> x_i + sign*p_i in the main variables."""
    ring = f.ring
    nm = ring.nmain
    if len(point) != nm:
        raise ValueError("point dimension mismatch")
    point = [ring.field.coerce(p) * sign for p in point]
    moved = [i for i in range(nm) if point[i]]
    if not moved:
        return f
    out = {}
    for e, c in f.terms:
        # expand prod (x_i + p_i)^e_i over the moved variables
        expansion = {e: c}
        for i in moved:
            k = e[i]
            if not k:
                continue
            p = point[i]
            nxt = {}
            for ee, cc in expansion.items():
                base = list(ee)
                pw = ring.field.one
                for j in range(0, k + 1):
                    # term x_i^(k-j) * C(k,j) p^j
                    base[i] = k - j
                    key2 = tuple(base)
                    add = cc * comb(k, j) * pw
                    s = nxt.get(key2)
                    nxt[key2] = add if s is None else s + add
                    pw = pw * p
            expansion = nxt
        for ee, cc in expansion.items():
            s = out.get(ee)
            if s is None:
                out[ee] = cc
            else:
                s = s + cc
                if s:
                    out[ee] = s
                else:
                    del out[ee]
    return Poly.from_dict(ring, out)


def shift_to_origin(polys, point):
    """Replace each f by f(x + p); V of the output is V(F) translated by -p."""
    return [translate(f, point, sign=1) for f in polys]


def degree_forms(f, point=None):
    """Buckets (f_{p,0}, ..., f_{p,d}) of the (x-p)-adic expansion of f."""
    if not f.terms:
        raise ValueError("zero polynomial has no degree-form expansion")
    ring = f.ring
    nm = ring.nmain
    if point is None:
        point = [0] * nm
    g = translate(f, point, sign=1)
    d = g.main_degree()
    buckets = [{} for _ in range(d + 1)]
    for e, c in g.terms:
        buckets[sum(e[:nm])][e] = c
    forms = []
    for b in buckets:
        form = Poly.from_dict(ring, b)
        if form and any(point):
            form = translate(form, point, sign=-1)
        forms.append(form)
    return forms


def min_form(f, point=None):
    """The lowest nonzero degree form of f at the point."""
    for form in degree_forms(f, point):
        if form:
            return form
    raise ValueError("zero polynomial")


def mdeg(polys, i):
    """Maximum exponent of variable i over all terms of all members."""
    polys = list(polys)
    if not polys:
        raise ValueError("mdeg of an empty set")
    best = 0
    for f in polys:
        if not f.terms:
            raise ValueError("mdeg of a zero polynomial")
        for e, _ in f.terms:
            if e[i] > best:
                best = e[i]
    return best


def main_ring(ring):
    """The ring of main variables only (parameters specialized away)."""
    order = ring.order
    if ring.nparams and isinstance(order, Block) and order.split == ring.nmain:
        order = order.first
    return Ring(ring.names[: ring.nmain], ring.field, order, 0)


def specialize(f, tbar, target=None):
    """sigma_tbar(f): substitute the parameters by rational values."""
    ring = f.ring
    if len(tbar) != ring.nparams:
        raise ValueError(
            f"expected {ring.nparams} parameter values, got {len(tbar)}"
        )
    if target is None:
        target = main_ring(ring)
    tbar = [ring.field.coerce(v) for v in tbar]
    nm = ring.nmain
    d = {}
    for e, c in f.terms:
        for j, v in enumerate(tbar):
            k = e[nm + j]
            if k:
                c = c * v**k
        if not c:
            continue
        xe = e[:nm]
        s = d.get(xe)
        if s is None:
            d[xe] = c
        else:
            s = s + c
            if s:
                d[xe] = s
            else:
                del d[xe]
    return Poly.from_dict(target, d)


def derivative(f, i):
    """Formal partial derivative with respect to variable i."""
    ring = f.ring
    d = {}
    for e, c in f.terms:
        k = e[i]
        if k:
            e2 = e[:i] + (k - 1,) + e[i + 1 :]
            d[e2] = c * k
    return Poly.from_dict(ring, d)


def to_ring(f, target, index_map=None):
    """Reinterpret f in another ring.

    index_map[i] gives the target position of source variable i; variables
    not mapped must have exponent 0 in every term.
    """
    if index_map is None:
        index_map = {
            i: target.names.index(n)
            for i, n in enumerate(f.ring.names)
            if n in target.names
        }
    d = {}
    for e, c in f.terms:
        out = [0] * target.n
        for i, k in enumerate(e):
            if not k:
                continue
            j = index_map.get(i)
            if j is None:
                raise ValueError(
                    f"variable {f.ring.names[i]} cannot be mapped into {target}"
                )
            out[j] = k
        s = d.get(tuple(out))
        d[tuple(out)] = c if s is None else s + c
    return Poly.from_dict(target, {e: c for e, c in d.items() if c})
