"""Ideal quotient, saturation, intersection and the origin component.

Quotients are computed through rank-2 module Groebner bases: the quotient
<f1..fs> : <q> is read off the POT module basis of {fi*e1, q*e1 - e2} as the
second components of the pure-e2 elements, and a multi-generator divisor is
reduced to that case with fresh tag variables y2..yr above the main block
(q = q1 + y2 q2 + ... + yr qr, intersect with the y-free subring).

The parametric versions run the same construction through the CGS engine and
therefore return (stratum, basis) systems; the saturation loop re-enqueues
branches until the quotient is stable on each stratum, where stability is
decided exactly by pseudo-reduction plus radical membership.
"""

from __future__ import annotations

from .cgs import (
    CGSystem,
    ParamRing,
    Stratum,
    cgs_compute,
    normalize_stratum,
    stratum_is_empty,
    whole_space,
)
from .errors import InvariantError, PreconditionError
from .groebner import (
    _gens,
    encode_pair,
    groebner,
    marker_relations,
    module_buchberger,
    normal_form,
)
from .orders import Block, GrevLex, Lex
from .poly import Poly, Ring, fresh_name, mdeg, to_ring


def _quotient_ring(ring, r):
    """Ring with r-1 tag variables above the main block; (ring, names)."""
    names = []
    taken = set(ring.names)
    for j in range(2, r + 1):
        nm = fresh_name(f"_y{j}", taken)
        taken.add(nm)
        names.append(nm)
    ext = Ring(
        tuple(names) + ring.names,
        ring.field,
        Block(len(names), GrevLex(), ring.order),
        ring.nparams,
    )
    return ext, tuple(names)


def _tagged_divisor(ext, ynames, divisors):
    """q1 + y2 q2 + ... + yr qr in the extended ring."""
    q = to_ring(divisors[0], ext)
    for j, qj in enumerate(divisors[1:]):
        q = q + ext.var(j) * to_ring(qj, ext)
    return q


def quotient_by_poly(F, q, ring=None):
    """Basis of <F> : <q> via the rank-2 module construction."""
    gens = [f for f in _gens(F) if f.terms]
    if not gens:
        raise ValueError("quotient of the zero ideal")
    if not q.terms:
        raise ValueError("quotient by the zero polynomial")
    ring = ring if ring is not None else gens[0].ring
    pairs = [(f, ring.zero()) for f in gens]
    pairs.append((q, -ring.one()))
    basis = module_buchberger(pairs, ring)
    return [c2 for c1, c2 in basis if not c1.terms and c2.terms]


def quotient_by_ideal(F, Q, keep_tags=False):
    """Basis of <F> : <q1,...,qr> (tag variables above the mains, then eliminate)."""
    gens = [f for f in _gens(F) if f.terms]
    divisors = list(_gens(Q))
    if any(not q.terms for q in divisors):
        raise ValueError("quotient by an ideal with a zero generator")
    if not divisors:
        raise ValueError("quotient by an empty divisor list")
    ring = gens[0].ring
    if len(divisors) == 1:
        return groebner(quotient_by_poly(gens, divisors[0], ring))
    ext, ynames = _quotient_ring(ring, len(divisors))
    q = _tagged_divisor(ext, ynames, divisors)
    lifted = [to_ring(f, ext) for f in gens]
    H = quotient_by_poly(lifted, q, ext)
    ny = len(ynames)
    out = []
    for h in H:
        if all(not any(e[:ny]) for e, _ in h.terms):
            out.append(to_ring(h, ring))
    return groebner(out) if out else []


def intersect(A, B):
    """Basis of <A> ∩ <B> via the one-fresh-variable elimination."""
    a = [f for f in _gens(A) if f.terms]
    b = [f for f in _gens(B) if f.terms]
    if not a or not b:
        return []
    ring = a[0].ring
    wname = fresh_name("_w", ring.names)
    ext = Ring(
        (wname,) + ring.names,
        ring.field,
        Block(1, Lex(), ring.order),
        ring.nparams,
    )
    w = ext.var(0)
    gens = [w * to_ring(f, ext) for f in a]
    gens += [(ext.one() - w) * to_ring(f, ext) for f in b]
    gb = groebner(gens)
    out = [to_ring(g, ring) for g in gb if all(not e[0] for e, _ in g.terms)]
    return groebner(out) if out else []


def saturate(F, Q):
    """Basis of <F> : <Q>^infinity by iterating the quotient to a fixpoint."""
    cur = groebner(_gens(F))
    while True:
        if any(g.is_const() and g.terms for g in cur):
            return cur
        nxt = quotient_by_ideal(cur, Q)
        if nxt == cur:
            return cur
        cur = nxt


def maximal_ideal(ring):
    """m = <x1,...,xn> of the main variables."""
    return [ring.var(i) for i in range(ring.nmain)]


def saturation_exponent(F):
    """max over the main variables of mdeg(F): the staged-saturation exponent."""
    gens = [f for f in _gens(F) if f.terms]
    ring = gens[0].ring
    return max(mdeg(gens, i) for i in range(ring.nmain)) or 1


def saturate_fast(F):
    """<F> : m^infinity, staged: quotient by <x1^a,...,xn^a> first, then saturate."""
    gens = [f for f in _gens(F) if f.terms]
    ring = gens[0].ring
    if ring.nparams:
        raise ValueError("staged saturation of a parametric ideal needs the CGS route")
    a = saturation_exponent(gens)
    powers = [ring.var(i) ** a for i in range(ring.nmain)]
    step1 = quotient_by_ideal(gens, powers)
    return saturate(step1, maximal_ideal(ring))


# -- parametric versions --------------------------------------------------------


def _check_quotient_precondition(F, pring, region):
    """Some sigma(f_i) must stay nonzero everywhere on the region."""
    coeffs = []
    for f in F:
        nm = pring.nmain
        groups = {}
        for e, c in f.terms:
            groups.setdefault(e[:nm], {})[e[nm:]] = c
        for d in groups.values():
            coeffs.append(Poly.from_dict(pring.tring, d))
    bad = Stratum(tuple(region.eqs) + tuple(coeffs), tuple(region.neqs))
    if not stratum_is_empty(bad):
        raise PreconditionError(
            "the generators all specialize to zero somewhere on the region: "
            f"{normalize_stratum(bad)}"
        )


def parametric_quotient(F, Q, pring, region=None, polish=True):
    """CGS of <F> : <Q> on the region (Q may contain parameters)."""
    if region is None:
        region = whole_space(pring.tring)
    gens = [f for f in _gens(F) if f.terms]
    divisors = list(_gens(Q))
    if not gens:
        raise ValueError("quotient of the zero ideal")
    if any(not q.terms for q in divisors):
        raise ValueError("quotient by an ideal with a zero generator")
    _check_quotient_precondition(gens, pring, region)

    ring = pring.ring
    ox = ring.order.first if ring.nparams else ring.order
    r = len(divisors)
    if r == 1:
        ext, ynames = ring, ()
        q = divisors[0]
        lifted = gens
        main_order = ox
    else:
        ext, ynames = _quotient_ring(ring, r)
        q = _tagged_divisor(ext, ynames, divisors)
        lifted = [to_ring(f, ext) for f in gens]
        main_order = Block(len(ynames), GrevLex(), ox)
    ny = len(ynames)

    # encoded module ideal over the tag-extended ring
    e1 = fresh_name("_e1", ext.names)
    e2 = fresh_name("_e2", ext.names)
    enc_xnames = (e1, e2) + ext.names[: ext.nmain]
    tnames = ext.names[ext.nmain :]
    enc_pring = ParamRing(
        enc_xnames,
        tnames,
        ring.field,
        xorder=Block(2, Lex(), main_order),
        torder=pring.tring.order,
    )
    mring = enc_pring.ring
    enc = [encode_pair(f, ext.zero(), mring) for f in lifted]
    enc.append(encode_pair(q, -ext.one(), mring))
    enc.extend(marker_relations(mring))

    system = cgs_compute(enc, enc_pring, region, polish=False)
    out = []
    for stratum, basis in system.pairs:
        decoded = []
        unit = False
        for g in basis:
            c2 = _decode_second(g, ny)
            if c2 is None:
                continue
            p = Poly.from_dict(pring.ring, c2)
            if p.terms and pring.is_x_free(p):
                # a parameter-only quotient element: its nonvanishing is part
                # of the branch conditions, so the specialized ideal is <1>
                unit = True
                break
            decoded.append(p)
        if polish:
            stratum = normalize_stratum(stratum)
        out.append((stratum, [pring.ring.one()] if unit else decoded))
    return CGSystem(out, pring, region)


def _decode_second(g, ny):
    """Terms of the pure-e2, tag-free part; None unless g = c2*e2 with c2 tag-free."""
    d = {}
    for e, c in g.terms:
        if e[0] != 0 or e[1] != 1:
            return None
        if any(e[2 : 2 + ny]):
            return None
        d[e[2 + ny :]] = c
    return d


def _pseudo_reduce(f, G, pring):
    """Remainder of the parametric division of f by G (head coefficients
    treated as invertible; the remainder is scaled by products of them)."""
    ring = pring.ring
    nm = pring.nmain
    prepped = []
    for g in G:
        if g.terms:
            xe, hc = pring.head_x(g)
            prepped.append((xe, pring.lift_t(hc), g))
    rem = ring.zero()
    work = f
    while work.terms:
        xe, ct = pring.head_x(work)
        hit = None
        for hxe, hlift, g in prepped:
            if all(a <= b for a, b in zip(hxe, xe)):
                hit = (hxe, hlift, g)
                break
        group = Poly(
            ring,
            tuple((e, c) for e, c in work.terms if e[: nm] == xe),
        )
        if hit is None:
            rem = rem + group
            work = work - group
            continue
        hxe, hlift, g = hit
        shift = Poly(
            ring,
            ((tuple(map(int.__sub__, xe, hxe)) + (0,) * pring.ring.nparams, ring.field.one),),
        )
        work = hlift * work - pring.lift_t(ct) * shift * g
    return rem


def _coeff_vanishes_on(c, stratum):
    probe = Stratum(stratum.eqs, tuple(pr + (c,) for pr in stratum.neqs))
    return stratum_is_empty(probe)


def _ideal_equal_on_stratum(new_basis, ref_basis, stratum, pring):
    """<sigma new> == <sigma ref> for every point of the stratum."""
    nm = pring.nmain
    for g in new_basis:
        r = _pseudo_reduce(g, ref_basis, pring)
        if not r.terms:
            continue
        coeffs = {}
        for e, c in r.terms:
            coeffs.setdefault(e[:nm], {})[e[nm:]] = c
        for d in coeffs.values():
            cpoly = Poly.from_dict(pring.tring, d)
            if not _coeff_vanishes_on(cpoly, stratum):
                return False
    return True


_SATURATION_DEPTH_LIMIT = 60


def parametric_saturate(F, Q, pring, region=None, polish=True):
    """CGS of <F> : <Q>^infinity on the region (per-stratum fixpoint loop).

    A branch is emitted once the next quotient leaves its ideal unchanged on
    the stratum (exact test by pseudo-reduction and radical membership);
    otherwise the branch basis is re-enqueued, exactly the chain
    I : Q ⊆ I : Q^2 ⊆ ... pointwise.
    """
    if region is None:
        region = whole_space(pring.tring)
    gens = [f for f in _gens(F) if f.terms]
    first = parametric_quotient(gens, Q, pring, region, polish=False)
    out = []
    work = []
    for stratum, basis in first.pairs:
        if _is_unit_basis(basis) or not basis:
            out.append((stratum, basis))
        else:
            work.append((stratum, basis, 1))
    while work:
        stratum, ref, depth = work.pop(0)
        if depth > _SATURATION_DEPTH_LIMIT:
            raise InvariantError(
                f"saturation chain did not stabilize within "
                f"{_SATURATION_DEPTH_LIMIT} quotients on {stratum}"
            )
        sub = parametric_quotient(ref, Q, pring, stratum, polish=False)
        for s2, basis2 in sub.pairs:
            if _is_unit_basis(basis2) or not basis2:
                out.append((s2, basis2))
            elif _ideal_equal_on_stratum(basis2, ref, s2, pring):
                out.append((s2, basis2))
            else:
                work.append((s2, basis2, depth + 1))
    if polish:
        out = [(normalize_stratum(s), b) for s, b in out]
    out.sort(key=lambda p: _pair_key(p))
    return CGSystem(out, pring, region)


def _is_unit_basis(basis):
    return any(g.is_const() and g.terms for g in basis)


def _pair_key(pair):
    s, basis = pair
    return (
        tuple(str(e) for e in s.eqs),
        tuple(str(n) for n in s.neqs),
        tuple(str(g) for g in basis),
    )


# -- the primary component at the origin ------------------------------------------


def origin_survivor(basis):
    """A basis element with nonzero constant term, if one exists (plain case)."""
    for g in basis:
        c = g.const_coeff()
        if c:
            return g
    return None


def primary_component_at_origin(F):
    """Q0 = <F> : S with S = <F> : m^infinity; requires O outside V(S)."""
    gens = [f for f in _gens(F) if f.terms]
    ring = gens[0].ring
    if ring.nparams:
        raise ValueError("use primary_component_at_origin_parametric for parameters")
    S = saturate_fast(gens)
    if origin_survivor(S) is None:
        raise PreconditionError(
            "the saturation vanishes at the origin; the origin is not an "
            "isolated point of V(F)"
        )
    return quotient_by_ideal(gens, S)


def primary_component_at_origin_parametric(F, pring, region=None):
    """CGS of Q0 on the sub-region where the origin is isolated.

    Strata where the zero-dimensionality test fails are skipped; if it fails
    on the whole region, an error names the offending strata.
    """
    if region is None:
        region = whole_space(pring.tring)
    gens = [f for f in _gens(F) if f.terms]
    m = [pring.ring.var(i) for i in range(pring.nmain)]
    sat = parametric_saturate(gens, m, pring, region)
    out = []
    offending = []
    for stratum, basis in sat.pairs:
        passing, failing = split_by_origin_test(stratum, basis, pring)
        if failing is not None:
            offending.append(failing)
        if passing is None:
            continue
        quot = parametric_quotient(gens, basis, pring, passing)
        out.extend(quot.pairs)
    if not out:
        raise PreconditionError(
            "origin is not isolated anywhere on the region; offending strata: "
            + "; ".join(str(s) for s in offending)
        )
    out.sort(key=_pair_key)
    return CGSystem(out, pring, region)


def split_by_origin_test(stratum, basis, pring):
    """Split a stratum by the vanishing of the basis constant terms at O.

    Returns (passing, failing): the sub-stratum where some constant term is
    nonzero and the one where all vanish; either may be None when empty.
    """
    consts = []
    nm = pring.nmain
    zero_x = (0,) * nm
    for g in basis:
        d = {e[nm:]: c for e, c in g.terms if e[:nm] == zero_x}
        c = Poly.from_dict(pring.tring, d)
        if c.terms:
            consts.append(c)
    if not consts:
        return None, stratum
    passing = normalize_stratum(
        Stratum(
            stratum.eqs,
            tuple(pr + (c,) for pr in stratum.neqs for c in consts),
        ),
        light=True,
    )
    failing = normalize_stratum(
        Stratum(stratum.eqs + tuple(consts), stratum.neqs), light=True
    )
    return (
        None if stratum_is_empty(passing) else passing,
        None if stratum_is_empty(failing) else failing,
    )
