"""Comprehensive Groebner systems and the constructible-set algebra.

A stratum is the locally closed parameter set V(E)\\V(N): all equations in E
vanish and not every member of N does.  Each member of N is kept as a tuple
of factors that is never multiplied out (the paper's products of head
coefficients would otherwise blow up); the member vanishes exactly when some
factor does, so "not every member vanishes" reads: for some factor tuple,
every factor is nonzero.  N = ((1,),) encodes "no inequation"; an empty N
encodes the empty set.  Emptiness, inclusion and equality of constructible
sets are decided exactly through ideal membership with Rabinowitsch
variables, never by sampling.

cgs_compute realizes the branch-on-head-coefficient recursion: a reduced
Groebner basis of <F ∪ E> under a block order with the main variables above
the parameters is computed in the full ring; the parameter-only part of the
basis splits off the locus where the specialized ideal contains a nonzero
constant; every nonconstant head coefficient then branches the region into
its zero and nonzero parts, recursing on the zero side.  Each recursive call
strictly enlarges <F ∪ E>, which gives termination.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import count

from .errors import InvariantError
from .fields import QQ
from .groebner import (
    buchberger,
    groebner,
    is_groebner,
    normal_form,
)
from .orders import Block, GrevLex, Lex
from .poly import Poly, Ring, fresh_name, main_ring, specialize, to_ring


class ParamRing:
    """Bundle of the combined ring Q[x...,t...] and the parameter ring Q[t]."""

    __slots__ = ("ring", "tring", "xring")

    def __init__(self, xnames, tnames, field=QQ, xorder=None, torder=None):
        xorder = xorder if xorder is not None else GrevLex()
        torder = torder if torder is not None else GrevLex()
        names = tuple(xnames) + tuple(tnames)
        order = Block(len(xnames), xorder, torder) if tnames else xorder
        self.ring = Ring(names, field, order, nparams=len(tnames))
        self.tring = Ring(tuple(tnames), field, torder)
        self.xring = main_ring(self.ring)

    @property
    def nmain(self):
        return self.ring.nmain

    def lift_t(self, tp):
        """Embed a parameter-ring polynomial into the combined ring."""
        shift = self.nmain
        d = {(0,) * shift + e: c for e, c in tp.terms}
        return Poly.from_dict(self.ring, d)

    def proj_t(self, p):
        """Project an x-free combined-ring polynomial to the parameter ring."""
        nm = self.nmain
        d = {}
        for e, c in p.terms:
            if any(e[:nm]):
                raise ValueError(f"{p} involves main variables")
            d[e[nm:]] = c
        return Poly.from_dict(self.tring, d)

    def is_x_free(self, p):
        nm = self.nmain
        return all(not any(e[:nm]) for e, _ in p.terms)

    def head_x(self, p):
        """(x-exponent, coefficient in Q[t]) of the head x-monomial of p."""
        nm = self.nmain
        xe = p.terms[0][0][:nm]
        d = {}
        for e, c in p.terms:
            if e[:nm] != xe:
                break
            d[e[nm:]] = c
        return xe, Poly.from_dict(self.tring, d)

    def lift_x(self, p):
        """Embed a parameter-free main-ring polynomial into the combined ring."""
        pad = (0,) * self.ring.nparams
        d = {e + pad: c for e, c in p.terms}
        return Poly.from_dict(self.ring, d)


# -- strata -----------------------------------------------------------------------


def _as_product(item):
    if isinstance(item, Poly):
        return (item,)
    return tuple(item)


class Stratum:
    """V(eqs) \\ V(neqs); each inequation is an unexpanded factor tuple."""

    __slots__ = ("eqs", "neqs")

    def __init__(self, eqs, neqs):
        self.eqs = tuple(eqs)
        self.neqs = tuple(_as_product(p) for p in neqs)

    def __eq__(self, other):
        return (
            isinstance(other, Stratum)
            and self.eqs == other.eqs
            and self.neqs == other.neqs
        )

    def __hash__(self):
        return hash((self.eqs, self.neqs))

    def to_json(self):
        return {
            "equations": [str(e) for e in self.eqs],
            "inequations": [str(expand_product(p)) for p in self.neqs],
        }

    def __str__(self):
        eq = ", ".join(str(e) for e in self.eqs)
        ne = ", ".join(str(expand_product(p)) for p in self.neqs)
        return f"V({eq or '0'}) \\ V({ne})"

    def __repr__(self):
        return str(self)


def expand_product(factors):
    """Multiply a factor tuple out (display only; the algebra stays factored)."""
    if not factors:
        raise ValueError("empty factor tuple has no product")
    p = factors[0]
    for f in factors[1:]:
        p = p * f
    return p.canonical() if p.terms else p


def whole_space(tring):
    return Stratum((), ((tring.one(),),))


_EGB_CACHE = {}
_RAD_CACHE = {}
_NZ_CACHE = {}
_CONJ_CACHE = {}


def _egb(eqs):
    """Reduced GB of the stratum equations (cached per tuple)."""
    eqs = tuple(eqs)
    got = _EGB_CACHE.get(eqs)
    if got is None:
        got = tuple(groebner(list(eqs))) if eqs else ()
        _EGB_CACHE[eqs] = got
    return got


_POLISH_STEPS = 600


def vanishes_on_closure(p, eqs_gb):
    """p lies in the radical of <eqs>: p vanishes on all of V(eqs).

    Cosmetic use only; a budget-exceeded decision is reported as False,
    which merely keeps a redundant inequation factor.  Principal ideals are
    decided exactly by divisibility (radical of <c> is <squarefree c>).
    """
    if not p.terms:
        return True
    if p.is_const():
        return False
    if not eqs_gb:
        return False
    key = (p, eqs_gb)
    got = _RAD_CACHE.get(key)
    if got is None:
        if len(eqs_gb) == 1:
            got = _divides_sqfree(eqs_gb[0], p)
        else:
            from .groebner import StepLimitExceeded, radical_membership

            try:
                got = radical_membership(p, list(eqs_gb), step_limit=_POLISH_STEPS)
            except StepLimitExceeded:
                got = False
        _RAD_CACHE[key] = got
    return got


def _divides_sqfree(c, p):
    """squarefree(c) divides p (p in the radical of the principal <c>)."""
    from .ratfunc import divexact, poly_gcd, squarefree_part

    c_red = squarefree_part(c)
    g = poly_gcd(c_red, p)
    return divexact(c_red.monic(), g).is_const()


def _never_zero_on(p, eqs_gb):
    """p has no zero on V(eqs): V(eqs ∪ {p}) is empty (cosmetic use only)."""
    if p.is_const():
        return bool(p.terms)
    key = (p, eqs_gb)
    got = _NZ_CACHE.get(key)
    if got is None:
        from .groebner import StepLimitExceeded, contains_one

        try:
            got = contains_one(list(eqs_gb) + [p], step_limit=_POLISH_STEPS)
        except StepLimitExceeded:
            got = False
        _NZ_CACHE[key] = got
    return got


def _product_nf(factors, eqs_gb):
    """Normal form of the factor product modulo <eqs>, built incrementally.

    Reducing after every multiplication keeps the intermediate sizes bounded
    by the staircase of the stratum ideal.  The result vanishes at a point of
    V(eqs) exactly when the true product does.
    """
    if not factors:
        return None
    ring = factors[0].ring
    g = ring.one()
    reducers = list(eqs_gb)
    for f in factors:
        g = g * f
        if reducers:
            g = normal_form(g, reducers)
        if not g.terms:
            return g
    return g


def _conj_nonzero_possible(eqs_gb, factors):
    """Is there a point of V(eqs) where every factor is nonzero?

    The factor product is reduced modulo <eqs> and tested with a single
    Rabinowitsch variable: nonempty iff 1 is not in <eqs, 1 - z*prod>.
    A principal <c> is decided by stripping shared components with gcds:
    V(c) is covered by the factor zeros iff squarefree(c) divides the
    product, which needs no expansion.
    """
    key = (eqs_gb, frozenset(factors))
    got = _CONJ_CACHE.get(key)
    if got is not None:
        return got
    if len(eqs_gb) == 1 and factors:
        from .ratfunc import divexact, poly_gcd, squarefree_part

        h = squarefree_part(eqs_gb[0]).monic()
        for f in factors:
            if h.is_const():
                break
            g = poly_gcd(h, f)
            if not g.is_const():
                h = divexact(h, g)
        got = not h.is_const()
        _CONJ_CACHE[key] = got
        return got
    from .groebner import contains_one

    g = _product_nf(factors, eqs_gb)
    if g is None or not g.terms:
        got = g is None and not any(e.is_const() and e.terms for e in eqs_gb)
    elif g.is_const():
        got = True
    elif not eqs_gb:
        got = True
    else:
        tring = g.ring
        zname = fresh_name("_z", tring.names)
        ext = Ring(
            tring.names + (zname,),
            tring.field,
            Block(tring.n, tring.order, GrevLex()),
            0,
        )
        gens = [to_ring(e, ext) for e in eqs_gb]
        gens.append(ext.one() - ext.var(tring.n) * to_ring(g, ext))
        got = not contains_one(gens)
    _CONJ_CACHE[key] = got
    return got


_PRUNE_LIMIT = 150


def _small(f):
    return len(f.terms) * max(1, f.total_degree()) <= _PRUNE_LIMIT


def _sqfree_small(f):
    """Squarefree part for small polynomials; identity for large ones."""
    from .ratfunc import squarefree_part

    return squarefree_part(f) if _small(f) else f


def _prunable(f, eqs_gb):
    """Small enough for the cosmetic radical-membership factor pruning."""
    return _small(f) and all(_small(e) for e in eqs_gb)


def _normalize_product(factors, eqs_gb, light=False):
    """Reduced factor tuple; None when the product vanishes on V(eqs).

    Factors in the radical of <eqs> (the disjunct is empty) or without zeros
    on V(eqs) (the factor is redundant) are pruned when small; the pruning is
    cosmetic, so large factors are simply kept.
    """
    from .ratfunc import squarefree_part

    out = []
    seen = set()
    for f in factors:
        if not f.terms:
            return None
        if f.is_const():
            continue
        r = normal_form(_sqfree_small(f), list(eqs_gb)) if eqs_gb else _sqfree_small(f)
        if not r.terms:
            return None
        if r.is_const():
            continue
        if not light and _prunable(r, eqs_gb):
            if vanishes_on_closure(r, eqs_gb):
                return None
            if _never_zero_on(r, eqs_gb):
                continue
        r = r.canonical()
        if r not in seen:
            seen.add(r)
            out.append(r)
    key = factors[0].ring._key if factors else None
    out.sort(key=lambda p: tuple(key(e) for e, _ in p.terms))
    return tuple(out)


def normalize_stratum(s, light=False):
    """Canonical form: E a squarefree reduced GB, N per-factor normalized."""
    eqs_gb = _egb(tuple(_sqfree_small(e).canonical() for e in s.eqs if e.terms))
    tring = None
    for group in (s.eqs,) + s.neqs:
        for p in group:
            tring = p.ring
            break
        if tring is not None:
            break
    if any(e.is_const() and e.terms for e in eqs_gb):
        return Stratum((tring.one(),), ())
    products = []
    seen = set()
    trivially_true = False
    for pr in s.neqs:
        norm = _normalize_product(pr, eqs_gb, light=light)
        if norm is None:
            continue
        if not norm:
            trivially_true = True
            break
        if norm not in seen:
            seen.add(norm)
            products.append(norm)
    if trivially_true:
        products = [(tring.one(),)]
    products.sort(key=_product_sort_key)
    return Stratum(eqs_gb, tuple(products))


def _product_sort_key(product):
    return tuple(str(f) for f in product)


_EMPTY_CACHE = {}
_WITNESS_CACHE = {}


def _variety_witnesses(eqs_gb, tring, budget=60, want=10):
    """A few rational points of V(eqs), cached per equation tuple."""
    key = eqs_gb
    got = _WITNESS_CACHE.get(key)
    if got is None:
        box = [budget]
        limit = [want]
        got = list(_solve_points(list(eqs_gb), tring, box, limit))
        _WITNESS_CACHE[key] = got
    return got


def stratum_is_empty(s):
    """V(E)\\V(N) = empty iff no factor tuple can be simultaneously nonzero."""
    ckey = (s.eqs, s.neqs)
    got = _EMPTY_CACHE.get(ckey)
    if got is not None:
        return got
    got = _stratum_is_empty_raw(s)
    _EMPTY_CACHE[ckey] = got
    return got


def _stratum_is_empty_raw(s):
    eqs_gb = _egb(s.eqs)
    if any(e.is_const() and e.terms for e in eqs_gb):
        return True
    if not s.neqs:
        return True
    # fast path: an explicit rational witness proves nonemptiness
    tring = None
    for group in (s.eqs,) + s.neqs:
        for p in group:
            tring = p.ring
            break
        if tring is not None:
            break
    if tring is not None and tring.n:
        for point in _variety_witnesses(eqs_gb, tring):
            if _point_in_stratum(Stratum(eqs_gb, s.neqs), point):
                return False
    for pr in s.neqs:
        norm = _normalize_product(pr, eqs_gb, light=True)
        if norm is None:
            continue
        if not norm or _conj_nonzero_possible(eqs_gb, norm):
            return False
    return True


def stratum_intersection(a, b):
    """Intersection of two strata is again a stratum (factor tuples concatenate)."""
    products = tuple(pa + pb for pa in a.neqs for pb in b.neqs)
    return Stratum(a.eqs + b.eqs, products)


def subtract_stratum(p, q):
    """p \\ q as a list of pairwise disjoint strata (possibly empty).

    The part of p inside V(Nq) needs every product of q to vanish; each
    product V(f1*...*fk) = V(f1) ∪ ... ∪ V(fk) is split disjointly by its
    first vanishing factor, so no product is ever multiplied out.
    """
    pieces = []
    inside = [(p.eqs, p.neqs)]
    for pr in q.neqs:
        nxt = []
        for eqs, neqs in inside:
            for i, f in enumerate(pr):
                nxt.append(
                    (eqs + (f,), tuple(pp + tuple(pr[:i]) for pp in neqs))
                )
        inside = nxt
    for eqs, neqs in inside:
        a = Stratum(eqs, neqs)
        if not stratum_is_empty(a):
            pieces.append(normalize_stratum(a, light=True))
    # parts outside V(Eq) and outside V(Nq), split by the first nonzero equation
    prefix = []
    for e in q.eqs:
        if not e.terms:
            continue
        neqs = tuple(
            pp + pq + (e,) for pp in p.neqs for pq in q.neqs
        )
        b = Stratum(p.eqs + tuple(prefix), neqs)
        if not stratum_is_empty(b):
            pieces.append(normalize_stratum(b, light=True))
        prefix.append(e)
    return pieces


class ConstructibleSet:
    """Finite union of strata in one parameter ring.

    When the set arises as one side of an exact partition of the whole
    parameter space, the other side can be attached as `complement`; the
    inclusion test then reduces to pairwise intersection emptiness instead
    of a subtraction cascade.
    """

    __slots__ = ("strata", "tring", "complement")

    def __init__(self, strata, tring, complement=None):
        self.strata = tuple(strata)
        self.tring = tring
        self.complement = tuple(complement) if complement is not None else None

    @staticmethod
    def whole(tring):
        return ConstructibleSet((whole_space(tring),), tring, complement=())

    @staticmethod
    def empty(tring):
        return ConstructibleSet((), tring, complement=(whole_space(tring),))

    def is_empty(self):
        return all(stratum_is_empty(s) for s in self.strata)

    def union(self, other):
        return ConstructibleSet(self.strata + other.strata, self.tring)

    def to_json(self):
        return [s.to_json() for s in self.strata]

    def __str__(self):
        if not self.strata:
            return "(empty)"
        return " ∪ ".join(str(s) for s in self.strata)


def cs_includes(a, b):
    """a ⊇ b, decided exactly by reduction to stratum emptiness.

    With a complement attached to a (an exact partition of the whole space)
    this is the emptiness of every intersection b ∩ complement(a); otherwise
    each stratum of b is subtracted a-stratum by a-stratum.
    """
    if a.complement is not None:
        for s in b.strata:
            if stratum_is_empty(s):
                continue
            for c in a.complement:
                if not stratum_is_empty(stratum_intersection(s, c)):
                    return False
        return True
    for s in b.strata:
        pieces = [s] if not stratum_is_empty(s) else []
        for t in a.strata:
            nxt = []
            for piece in pieces:
                nxt.extend(subtract_stratum(piece, t))
            pieces = nxt
            if not pieces:
                break
        if pieces:
            return False
    return True


def cs_equal(a, b):
    return cs_includes(a, b) and cs_includes(b, a)


def _stratum_sort_key(s):
    return (
        tuple(str(e) for e in s.eqs),
        tuple(_product_sort_key(p) for p in s.neqs),
    )


def normalize_union(cs):
    """Equivalent set with pairwise disjoint nonempty strata, sorted."""
    result = []
    for s in sorted(
        (normalize_stratum(s, light=True) for s in cs.strata), key=_stratum_sort_key
    ):
        pieces = [s] if not stratum_is_empty(s) else []
        for t in result:
            nxt = []
            for piece in pieces:
                nxt.extend(subtract_stratum(piece, t))
            pieces = nxt
            if not pieces:
                break
        result.extend(pieces)
    result = [normalize_stratum(s) for s in result]
    result.sort(key=_stratum_sort_key)
    return ConstructibleSet(tuple(result), cs.tring, complement=cs.complement)


# -- rational sample points -----------------------------------------------------


def _heights():
    yield Fraction(0)
    for k in count(1):
        f = Fraction(k)
        yield f
        yield -f
        if k % 3 == 0:
            yield Fraction(k, 2)
            yield Fraction(-k, 2)


def _divisors(n):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def _rational_roots(g, var):
    """Rational roots of a polynomial involving only the given variable."""
    from math import gcd

    coeffs = {}
    for e, c in g.terms:
        coeffs[e[var]] = coeffs.get(e[var], Fraction(0)) + c
    roots = []
    low = min(coeffs)
    if low > 0:
        roots.append(Fraction(0))
        coeffs = {k - low: v for k, v in coeffs.items()}
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // gcd(den, c.denominator)
    ints = {k: int(c * den) for k, c in coeffs.items()}
    deg = max(ints)
    a0, ad = ints.get(0, 0), ints[deg]
    candidates = []
    if a0:
        candidates = [
            Fraction(s * p, q)
            for p in _divisors(a0)
            for q in _divisors(ad)
            for s in (1, -1)
        ]
    for r in candidates:
        if sum(c * r**k for k, c in ints.items()) == 0 and r not in roots:
            roots.append(r)
    return sorted(roots)


def _subst_var(polys, ring, var, value):
    """Substitute one variable by a rational and drop it from the ring."""
    names = ring.names[:var] + ring.names[var + 1 :]
    target = Ring(names, ring.field, Lex(), 0)
    out = []
    for p in polys:
        d = {}
        for e, c in p.terms:
            c = c * value ** e[var]
            e2 = e[:var] + e[var + 1 :]
            s = d.get(e2)
            s = c if s is None else s + c
            if s:
                d[e2] = s
            elif e2 in d:
                del d[e2]
        q = Poly.from_dict(target, d)
        if q.terms:
            out.append(q)
    return target, out


def _solve_points(eqs, ring, budget, limit):
    """Yield rational points of V(eqs); bounded search, not exhaustive."""
    if budget[0] <= 0 or limit[0] <= 0:
        return
    budget[0] -= 1
    if any(e.is_const() and e.terms for e in eqs):
        return
    m = ring.n
    if m == 0:
        limit[0] -= 1
        yield ()
        return
    lexring = Ring(ring.names, ring.field, Lex(), 0)
    gens = [to_ring(e, lexring) for e in eqs]
    gb = groebner(gens) if gens else []
    if any(g.is_const() and g.terms for g in gb):
        return
    last = m - 1
    uni = [g for g in gb if all(not any(e[:last]) for e, _ in g.terms)]
    if uni:
        values = _rational_roots(uni[0], last)
    else:
        values = []
        gen = _heights()
        while len(values) < 8:
            values.append(next(gen))
    for v in values:
        if budget[0] <= 0 or limit[0] <= 0:
            return
        sub_ring, sub_eqs = _subst_var(gb, lexring, last, v)
        if any(e.is_const() and e.terms for e in sub_eqs):
            continue
        for rest in _solve_points(sub_eqs, sub_ring, budget, limit):
            yield rest + (v,)


def _eval_tpoly(p, point):
    total = Fraction(0)
    for e, c in p.terms:
        v = c
        for i, k in enumerate(e):
            if k:
                v = v * point[i] ** k
        total += v
    return total


def _point_in_stratum(s, point):
    if any(_eval_tpoly(e, point) != 0 for e in s.eqs):
        return False
    for pr in s.neqs:
        if all(_eval_tpoly(f, point) != 0 for f in pr):
            return True
    return False


def sample_points(s, want=3, budget=200):
    """Up to `want` rational points of the stratum; [] is not an emptiness proof."""
    tring = None
    for group in (s.eqs,) + s.neqs:
        for p in group:
            tring = p.ring
            break
        if tring is not None:
            break
    if tring is None:
        return []
    out = []
    budget_box = [budget]
    limit = [max(want * 25, 50)]
    for point in _solve_points(list(s.eqs), tring, budget_box, limit):
        if _point_in_stratum(s, point):
            out.append(point)
            if len(out) >= want:
                break
    return out


def sample_point(s, budget=200):
    """One rational point of the stratum, or None when the search fails."""
    pts = sample_points(s, want=1, budget=budget)
    return pts[0] if pts else None


# -- comprehensive Groebner systems ---------------------------------------------


class CGSystem:
    """Pairs (stratum, basis) satisfying the CGS conditions on the region."""

    __slots__ = ("pairs", "pring", "region")

    def __init__(self, pairs, pring, region):
        self.pairs = list(pairs)
        self.pring = pring
        self.region = region

    def strata(self):
        return ConstructibleSet(tuple(s for s, _ in self.pairs), self.pring.tring)

    def to_json(self):
        return [
            {"stratum": s.to_json(), "basis": [str(g) for g in basis]}
            for s, basis in self.pairs
        ]


def _minimalize_x(pring, basis):
    """Drop elements whose head x-monomial is divisible by another's."""
    nm = pring.nmain
    key = pring.ring._key
    items = sorted(basis, key=lambda p: tuple(key(e) for e, _ in p.terms))
    kept = []
    kept_heads = []
    for g in items:
        h = g.terms[0][0][:nm]
        if any(all(a <= b for a, b in zip(k, h)) for k in kept_heads):
            continue
        kept.append(g)
        kept_heads.append(h)
    kept.sort(key=lambda p: tuple(key(e) for e, _ in p.terms), reverse=True)
    return kept


def cgs_compute(F, pring, region=None, polish=True):
    """Comprehensive Groebner system of <F> on the region (whole space default)."""
    if region is None:
        region = whole_space(pring.tring)
    F = [f for f in F if f.terms]
    if not F:
        raise ValueError("cgs_compute needs at least one nonzero generator")
    out = []
    _cgs_work(F, list(region.eqs), list(region.neqs), pring, out)
    merged = _merge_pairs(out)
    if polish:
        merged = [(normalize_stratum(s), b) for s, b in merged]
    merged.sort(key=lambda p: _stratum_sort_key(p[0]))
    return CGSystem(merged, pring, region)


def _merge_pairs(pairs):
    grouped = {}
    for s, basis in pairs:
        keyb = tuple(g.canonical() for g in basis)
        grouped.setdefault((s.eqs, keyb), []).append(s)
    merged = []
    for (eqs, keyb), strata in grouped.items():
        neqs = []
        seen = set()
        for s in strata:
            for pr in s.neqs:
                if pr not in seen:
                    seen.add(pr)
                    neqs.append(pr)
        s = normalize_stratum(Stratum(eqs, tuple(neqs)), light=True)
        merged.append((s, list(keyb)))
    return merged


def _reduce_coeffs(gens, eqs_gb, pring):
    """Normal-form every parameter coefficient modulo the stratum ideal.

    The difference is a combination of the stratum equations, so the ideal
    <gens ∪ E> is unchanged while the parameter degrees stay small.
    """
    if not eqs_gb:
        return list(gens)
    reducers = list(eqs_gb)
    nm = pring.nmain
    out = []
    for g in gens:
        groups = {}
        for e, c in g.terms:
            groups.setdefault(e[:nm], {})[e[nm:]] = c
        d = {}
        for xe, coeff in groups.items():
            r = normal_form(Poly.from_dict(pring.tring, coeff), reducers)
            for te, c in r.terms:
                d[xe + te] = c
        p = Poly.from_dict(pring.ring, d)
        if p.terms:
            out.append(p)
    return out


def _cgs_work(gens, E, N, pring, out):
    stratum = normalize_stratum(Stratum(tuple(E), tuple(N)), light=True)
    if stratum_is_empty(stratum):
        return
    E, N = list(stratum.eqs), list(stratum.neqs)
    gens = _reduce_coeffs(gens, E, pring)
    G = groebner(gens + [pring.lift_t(e) for e in E])
    if any(g.is_const() and g.terms for g in G):
        out.append((stratum, [pring.ring.one()]))
        return
    Gr, Gm = [], []
    for g in G:
        (Gr if pring.is_x_free(g) else Gm).append(g)
    if Gr:
        Gr_t = [pring.proj_t(g) for g in Gr]
        # where some parameter-only element survives, the ideal contains a unit
        unit_neqs = tuple(pr + (gr,) for pr in N for gr in Gr_t)
        unit = Stratum(tuple(E), unit_neqs)
        if not stratum_is_empty(unit):
            out.append((normalize_stratum(unit, light=True), [pring.ring.one()]))
        # Gr is the reduced GB of the full parameter-elimination ideal
        sub = normalize_stratum(Stratum(tuple(Gr_t), tuple(N)), light=True)
        if stratum_is_empty(sub):
            return
        E, N = list(sub.eqs), list(sub.neqs)
        gens = _reduce_coeffs(Gm, E, pring)
        Gm = [g for g in gens]
    if not Gm:
        out.append((normalize_stratum(Stratum(tuple(E), tuple(N)), light=True), []))
        return
    hs = []
    seen = set()
    for g in Gm:
        _, hc = pring.head_x(g)
        if hc.is_const():
            continue
        hc = _sqfree_small(hc).canonical()
        if hc not in seen:
            seen.add(hc)
            hs.append(hc)
    tkey = pring.tring._key
    hs.sort(key=lambda p: tuple(tkey(e) for e, _ in p.terms))
    # main branch: all head coefficients nonzero
    main_neqs = tuple(pr + tuple(hs) for pr in N)
    main = Stratum(tuple(E), main_neqs)
    if not stratum_is_empty(main):
        out.append((normalize_stratum(main, light=True), _minimalize_x(pring, Gm)))
    # vanishing branches, one per head coefficient, disjoint by prefixes
    for i, h in enumerate(hs):
        n_branch = [pr + tuple(hs[:i]) for pr in N]
        _cgs_work(list(Gm), E + [h], n_branch, pring, out)


# -- oracle checks (used by the test-suite and the bench harness) ----------------


def verify_cgs(system, F, points_per_stratum=3):
    """Check the CGS conditions on sampled rational points; raises on failure."""
    pring = system.pring
    xring = pring.xring
    strata = [s for s, _ in system.pairs]
    for i in range(len(strata)):
        for j in range(i + 1, len(strata)):
            inter = stratum_intersection(strata[i], strata[j])
            if not stratum_is_empty(inter):
                raise InvariantError(
                    f"strata {strata[i]} and {strata[j]} are not disjoint"
                )
    region_cs = ConstructibleSet((system.region,), pring.tring)
    union_cs = ConstructibleSet(tuple(strata), pring.tring)
    if not cs_equal(region_cs, union_cs):
        raise InvariantError("CGS strata do not cover the region exactly")
    for s, basis in system.pairs:
        for point in sample_points(s, want=points_per_stratum):
            sF = [specialize(f, point, xring) for f in F]
            sG = []
            for g in basis:
                _, hc = pring.head_x(g)
                if _eval_tpoly(hc, point) == 0:
                    raise InvariantError(
                        f"head coefficient of {g} vanishes at {point}"
                    )
                sG.append(specialize(g, point, xring))
            sF = [f for f in sF if f.terms]
            if any(not g.terms for g in sG):
                raise InvariantError(f"basis element specializes to zero at {point}")
            if sG and not is_groebner(sG):
                raise InvariantError(f"specialized basis at {point} is not a GB")
            ref = buchberger(sF) if sF else []
            for f in sF:
                r = normal_form(f, sG) if sG else f
                if r.terms:
                    raise InvariantError(f"<sigma F> not within basis at {point}")
            for g in sG:
                r = normal_form(g, ref) if ref else g
                if r.terms:
                    raise InvariantError(f"basis not within <sigma F> at {point}")
            heads = [g.terms[0][0] for g in sG]
            for a in range(len(heads)):
                for b in range(len(heads)):
                    if a != b and all(x <= y for x, y in zip(heads[a], heads[b])):
                        raise InvariantError(
                            f"specialized basis not minimal at {point}"
                        )
    return True
