"""Buchberger engine for ideals and rank-2 modules.

Polynomials enter and leave as Poly values; internally the engine works on
exponent->coefficient dicts with basis elements kept monic, so a reduction
step is a dict merge.  Pair management uses the Gebauer-Moeller formulation
of Buchberger's coprime-head and chain criteria, with the normal selection
strategy (smallest head-term lcm under the ambient order).

Rank-2 free modules under a POT order (e1 above e2) are handled by encoding
a pair (c1, c2) as c1*e1 + c2*e2 with two marker variables prepended to the
ring and the monomial relations e1^2, e1*e2, e2^2 adjoined: the degree-one
slice of a reduced Groebner basis of the encoded ideal is exactly the
reduced module Groebner basis.  The module normal form used by the tests is
implemented directly on pairs, independent of the encoding.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantError
from .orders import Block, Lex
from .poly import Poly, Ring, fresh_name, to_ring


class StepLimitExceeded(Exception):
    """Raised when a step-limited Buchberger run exceeds its budget."""


def _gens(G):
    gens = getattr(G, "gens", G)
    return list(gens)


@dataclass(frozen=True)
class IdealBasis:
    """Generators of an ideal, optionally flagged as a reduced GB."""

    gens: tuple
    ring: Ring
    reduced: bool = False

    @staticmethod
    def make(gens, reduced=False):
        gens = tuple(gens)
        if not gens:
            raise ValueError("an ideal basis needs at least one generator")
        return IdealBasis(gens, gens[0].ring, reduced)

    def __iter__(self):
        return iter(self.gens)


# -- reduction ----------------------------------------------------------------


def _divides(d, e):
    for a, b in zip(d, e):
        if a > b:
            return False
    return True


def _nf_dict(p, heads, tails, key, budget=None):
    """Full normal form of the dict p against monic (head, tail) reducers.

    budget, when given, is a one-element list of remaining elimination steps;
    it is decremented per head elimination and exhausting it raises
    StepLimitExceeded.
    """
    rem = {}
    nb = len(heads)
    while p:
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise StepLimitExceeded()
        e = max(p, key=key)
        c = p.pop(e)
        for idx in range(nb):
            h = heads[idx]
            ok = True
            for a, b in zip(h, e):
                if a > b:
                    ok = False
                    break
            if ok:
                q = tuple(map(int.__sub__, e, h))
                for m, a in tails[idx]:
                    me = tuple(map(int.__add__, q, m))
                    s = p.get(me)
                    s = -c * a if s is None else s - c * a
                    if s:
                        p[me] = s
                    elif me in p:
                        del p[me]
                break
        else:
            rem[e] = c
    return rem


def _prep(polys):
    """Monic (head, tail) views of nonzero polynomials."""
    heads, tails = [], []
    for g in polys:
        if not g.terms:
            continue
        (h, hc), tail = g.terms[0], g.terms[1:]
        if hc == 1:
            tails.append(tail)
        else:
            tails.append(tuple((e, c / hc) for e, c in tail))
        heads.append(h)
    return heads, tails


def normal_form(f, G, order=None):
    """Remainder of f on division by G: no term divisible by any head of G."""
    gens = _gens(G)
    ring = f.ring
    if order is not None and order != ring.order:
        ring = Ring(ring.names, ring.field, order, ring.nparams)
        f = Poly.from_dict(ring, dict(f.terms))
        gens = [Poly.from_dict(ring, dict(g.terms)) for g in gens]
    heads, tails = _prep(gens)
    rem = _nf_dict(dict(f.terms), heads, tails, ring._key)
    return Poly.from_dict(ring, rem)


def spoly(f, g):
    """S-polynomial of two nonzero polynomials."""
    ring = f.ring
    ef, cf = f.terms[0]
    eg, cg = g.terms[0]
    lcm = tuple(map(max, ef, eg))
    mf = tuple(map(int.__sub__, lcm, ef))
    mg = tuple(map(int.__sub__, lcm, eg))
    d = {}
    for e, c in f.terms:
        d[tuple(map(int.__add__, e, mf))] = c / cf
    for e, c in g.terms:
        e2 = tuple(map(int.__add__, e, mg))
        s = d.get(e2)
        s = -c / cg if s is None else s - c / cg
        if s:
            d[e2] = s
        elif e2 in d:
            del d[e2]
    return Poly.from_dict(ring, d)


# -- Buchberger ---------------------------------------------------------------


def _update(heads, P, new_head, key):
    """Gebauer-Moeller pair update when a polynomial with new_head is added."""
    t = len(heads)
    lcm = lambda a, b: tuple(map(max, a, b))
    # chain criterion on the existing pairs
    kept = set()
    for i, j in P:
        lij = lcm(heads[i], heads[j])
        if (
            not _divides(new_head, lij)
            or lcm(heads[i], new_head) == lij
            or lcm(heads[j], new_head) == lij
        ):
            kept.add((i, j))
    # group the candidate new pairs by their lcm and keep minimal ones
    lcm_groups = {}
    for i in range(t):
        lcm_groups.setdefault(lcm(heads[i], new_head), []).append(i)
    minimal = []
    for L in sorted(lcm_groups, key=key):
        if all(not _divides(M, L) for M in minimal):
            minimal.append(L)
    coprime = tuple(map(int.__add__, new_head, new_head))
    for L in minimal:
        # coprime-head criterion: skip when some lcm in the group is the product
        if any(
            lcm(heads[i], new_head) == tuple(map(int.__add__, heads[i], new_head))
            for i in lcm_groups[L]
        ):
            continue
        kept.add((min(lcm_groups[L]), t))
    return kept


def _canon_sorted(polys, key):
    def pkey(p):
        return tuple(key(e) for e, _ in p.terms)

    return sorted(polys, key=pkey, reverse=True)


def buchberger(F, selection="normal", step_limit=None):
    """A Groebner basis of <F> w.r.t. the ambient ring order.

    selection "normal" picks the pair with the smallest head-term lcm;
    "reversed" picks the largest (used to check selection independence).
    A step_limit bounds the number of pair reductions; exceeding it raises
    StepLimitExceeded (used only by cosmetic simplification passes).
    """
    gens = [f for f in _gens(F) if f.terms]
    if not gens:
        return []
    ring = gens[0].ring
    key = ring._key
    gens = _canon_sorted(gens, key)

    heads, tails, polys = [], [], []
    P = set()
    for f in gens:
        f = f.monic()
        P = _update(heads, P, f.terms[0][0], key)
        heads.append(f.terms[0][0])
        tails.append(f.terms[1:])
        polys.append(f)

    pick = min if selection == "normal" else max
    budget = None if step_limit is None else [step_limit]

    while P:
        i, j = pick(P, key=lambda p: (key(tuple(map(max, heads[p[0]], heads[p[1]]))), p))
        P.discard((i, j))
        s = spoly(polys[i], polys[j])
        if not s.terms:
            continue
        rem = _nf_dict(dict(s.terms), heads, tails, key, budget)
        if rem:
            r = Poly.from_dict(ring, rem).monic()
            P = _update(heads, P, r.terms[0][0], key)
            heads.append(r.terms[0][0])
            tails.append(r.terms[1:])
            polys.append(r)
    return polys


def minimalize(G):
    """Drop basis elements whose head is divisible by another's head."""
    ring = G[0].ring
    key = ring._key
    kept = []
    for g in sorted(G, key=lambda p: key(p.terms[0][0])):
        h = g.terms[0][0]
        if all(not _divides(k.terms[0][0], h) for k in kept):
            kept.append(g)
    return kept


def reduce_basis(G, check=False):
    """The unique reduced Groebner basis (monic, auto-reduced, sorted).

    With check=True the input is first verified to be a Groebner basis via
    the S-polynomial criterion.
    """
    gens = [g for g in _gens(G) if g.terms]
    if not gens:
        return []
    if check and not is_groebner(gens):
        raise InvariantError("input is not a Groebner basis")
    ring = gens[0].ring
    key = ring._key
    basis = [g.monic() for g in minimalize(gens)]
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1 :]
            heads, tails = _prep(others)
            rem = _nf_dict(dict(basis[i].terms), heads, tails, key)
            r = Poly.from_dict(ring, rem).monic()
            if r != basis[i]:
                basis[i] = r
                changed = True
        basis = [b for b in basis if b.terms]
    basis.sort(key=lambda p: key(p.terms[0][0]), reverse=True)
    return basis


def groebner(F, selection="normal"):
    """Reduced Groebner basis of <F>."""
    return reduce_basis(buchberger(F, selection=selection))


def is_groebner(G):
    """Exhaustive S-polynomial criterion (no pair pruning)."""
    gens = [g for g in _gens(G) if g.terms]
    heads, tails = _prep(gens)
    key = gens[0].ring._key if gens else None
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            s = spoly(gens[i], gens[j])
            if s.terms and _nf_dict(dict(s.terms), heads, tails, key):
                return False
    return True


def ideal_membership(f, G, gb=None):
    """True iff f lies in <G>; gb may carry a precomputed Groebner basis."""
    if not f.terms:
        return True
    if gb is None:
        gens = _gens(G)
        gb = gens if getattr(G, "reduced", False) else buchberger(gens)
    return not normal_form(f, gb).terms


def contains_one(G, step_limit=None):
    gb = buchberger(_gens(G), step_limit=step_limit)
    return any(g.is_const() and g.terms for g in gb)


def radical_membership(f, G, step_limit=None):
    """True iff f vanishes on V(<G>), via 1 in <G, 1 - z*f>."""
    if not f.terms:
        return True
    ring = f.ring
    zname = fresh_name("_z", ring.names)
    ext = Ring(
        ring.names + (zname,),
        ring.field,
        Block(ring.n, ring.order, Lex()),
        0,
    )
    lift = lambda p: to_ring(p, ext)
    z = ext.var(ring.n)
    gens = [lift(g) for g in _gens(G)]
    gens.append(ext.one() - z * lift(f))
    return contains_one(gens, step_limit=step_limit)


# -- rank-2 modules under POT(e1 > e2) ----------------------------------------


def module_ring(ring):
    """Ring with the two position markers prepended to the main block."""
    e1 = fresh_name("_e1", ring.names)
    e2 = fresh_name("_e2", ring.names)
    return Ring(
        (e1, e2) + ring.names,
        ring.field,
        Block(2, Lex(), ring.order),
        ring.nparams,
    )


def encode_pair(c1, c2, mring):
    d = {}
    for e, c in c1.terms:
        d[(1, 0) + e] = c
    for e, c in c2.terms:
        d[(0, 1) + e] = c
    return Poly.from_dict(mring, d)


def marker_relations(mring):
    n = mring.n
    mono = lambda a, b: Poly(mring, (((a, b) + (0,) * (n - 2), mring.field.one),))
    return [mono(2, 0), mono(1, 1), mono(0, 2)]


def decode_poly(g, ring):
    """Split an encoded degree-one element back into a (c1, c2) pair."""
    d1, d2 = {}, {}
    for e, c in g.terms:
        if e[0] == 1 and e[1] == 0:
            d1[e[2:]] = c
        elif e[0] == 0 and e[1] == 1:
            d2[e[2:]] = c
        else:
            return None
    return Poly.from_dict(ring, d1), Poly.from_dict(ring, d2)


def module_buchberger(pairs, ring=None):
    """Reduced module Groebner basis of the given (c1, c2) generators."""
    pairs = list(pairs)
    if ring is None:
        ring = next(c.ring for pair in pairs for c in pair if c.terms)
    mring = module_ring(ring)
    gens = [encode_pair(c1, c2, mring) for c1, c2 in pairs]
    gens = [g for g in gens if g.terms]
    gens.extend(marker_relations(mring))
    gb = groebner(gens)
    out = []
    for g in gb:
        pair = decode_poly(g, ring)
        if pair is not None:
            out.append(pair)
    return out


def module_spoly(f, g):
    """Module S-vector; None when the heads sit in different positions."""
    f1, f2 = f
    g1, g2 = g
    fpos = 1 if f1.terms else 2
    gpos = 1 if g1.terms else 2
    if fpos != gpos:
        return None
    a = f1 if fpos == 1 else f2
    b = g1 if gpos == 1 else g2
    ea, ca = a.terms[0]
    eb, cb = b.terms[0]
    lcm = tuple(map(max, ea, eb))
    ring = a.ring
    ma = Poly(ring, ((tuple(map(int.__sub__, lcm, ea)), 1 / ca),))
    mb = Poly(ring, ((tuple(map(int.__sub__, lcm, eb)), 1 / cb),))
    return (ma * f1 - mb * g1, ma * f2 - mb * g2)


def module_normal_form(elem, basis):
    """Full POT normal form of a pair against a list of pairs."""
    c1, c2 = elem
    ring = (c1 if c1.terms else c2).ring
    key = ring._key
    pos1 = [(g1, g2) for g1, g2 in basis if g1.terms]
    pos2 = [g2 for g1, g2 in basis if not g1.terms and g2.terms]

    p1 = dict(c1.terms)
    p2 = dict(c2.terms)
    rem1 = {}
    heads1 = [g1.terms[0][0] for g1, _ in pos1]
    while p1:
        e = max(p1, key=key)
        c = p1.pop(e)
        hit = None
        for idx, h in enumerate(heads1):
            if _divides(h, e):
                hit = idx
                break
        if hit is None:
            rem1[e] = c
            continue
        g1, g2 = pos1[hit]
        q = tuple(map(int.__sub__, e, heads1[hit]))
        factor = c / g1.terms[0][1]
        for m, a in g1.terms[1:]:
            me = tuple(map(int.__add__, q, m))
            s = p1.get(me)
            s = -factor * a if s is None else s - factor * a
            if s:
                p1[me] = s
            elif me in p1:
                del p1[me]
        for m, a in g2.terms:
            me = tuple(map(int.__add__, q, m))
            s = p2.get(me)
            s = -factor * a if s is None else s - factor * a
            if s:
                p2[me] = s
            elif me in p2:
                del p2[me]
    heads2, tails2 = _prep(pos2)
    rem2 = _nf_dict(p2, heads2, tails2, key)
    return Poly.from_dict(ring, rem1), Poly.from_dict(ring, rem2)
