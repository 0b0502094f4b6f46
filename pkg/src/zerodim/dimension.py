"""Zero-dimensionality tests at the origin and local dimensions.

Three routes are implemented for the isolated-point test of a family of
varieties at the origin:

  * tangent-cone: homogenize the generators, take a CGS under a block order
    with the homogenizing variable dominant, and read the dimension of the
    dehomogenized head-monomial ideal per stratum;
  * saturation: a CGS of <F> : m^infinity has an element with nonzero
    constant term exactly where the origin is isolated;
  * staged saturation: first quotient by <x1^a,...,xn^a> with a the largest
    per-variable exponent in F, then saturate the (much smaller) result.

The local dimension is the smallest number of generic hyperplane sections
(coefficients in a fresh rational-function field) that makes the origin
isolated; the parametric version stratifies the parameter space by that
number.  The constant-term tests split each stratum along the vanishing
locus of the basis constant terms, so the answer is pointwise correct even
when a constant term degenerates inside a stratum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cgs import (
    CGSystem,
    ConstructibleSet,
    ParamRing,
    Stratum,
    _stratum_sort_key,
    cgs_compute,
    normalize_stratum,
    normalize_union,
    stratum_is_empty,
    whole_space,
)
from .errors import InvariantError, PreconditionError
from .fields import QQ
from .groebner import groebner
from .ideal_ops import (
    maximal_ideal,
    parametric_quotient,
    parametric_saturate,
    saturate_fast,
    saturation_exponent,
    split_by_origin_test,
)
from .orders import Block, GrevLex, Lex
from .poly import Poly, Ring, derivative, fresh_name, homogenize, mdeg, to_ring
from .ratfunc import FractionField


# -- the monomial-ideal dimension kernel ------------------------------------------


def _support(exp):
    return frozenset(i for i, k in enumerate(exp) if k)


def monomial_dim(monomials, nvars):
    """dim V(<M>) for a monomial ideal: nvars minus a minimum hitting set."""
    supports = set()
    for m in monomials:
        if isinstance(m, Poly):
            if len(m.terms) != 1:
                raise ValueError(f"{m} is not a monomial")
            exp = m.terms[0][0][:nvars]
        else:
            exp = tuple(m)[:nvars]
        supports.add(_support(exp))
    if not supports:
        raise ValueError("empty monomial list")
    if frozenset() in supports:
        raise ValueError("the monomial 1 generates the unit ideal")
    # drop supports that contain another (hitting the subset hits them)
    kept = [s for s in supports if not any(o < s for o in supports)]
    return nvars - _min_hitting(kept, nvars)


def _min_hitting(supports, bound):
    if not supports:
        return 0
    best = bound
    pivot = min(supports, key=len)
    for v in sorted(pivot):
        rest = [s for s in supports if v not in s]
        sub = _min_hitting(rest, best - 1)
        if 1 + sub < best:
            best = 1 + sub
            if best == 1:
                break
    return best


def monomial_dim_bruteforce(monomials, nvars):
    """Exhaustive reference: max |S| with no monomial support inside S."""
    from itertools import combinations

    supports = []
    for m in monomials:
        exp = m.terms[0][0][:nvars] if isinstance(m, Poly) else tuple(m)[:nvars]
        supports.append(_support(exp))
    best = -1
    for size in range(nvars, -1, -1):
        for S in combinations(range(nvars), size):
            S = frozenset(S)
            if all(not s <= S for s in supports):
                return size
    return best


# -- Jacobian systems --------------------------------------------------------------


def jacobian_system(f, include_f=True):
    """{f?, df/dx1, ..., df/dxn} with the parameters treated as constants."""
    ring = f.ring
    if _const_x_coeff(f):
        raise PreconditionError(f"f does not vanish at the origin: {f}")
    partials = [derivative(f, i) for i in range(ring.nmain)]
    out = [f] + partials if include_f else partials
    return [g for g in out if g.terms]


def _const_x_coeff(f):
    """True when f has a term free of the main variables."""
    nm = f.ring.nmain
    return any(not any(e[:nm]) for e, _ in f.terms)


def _check_origin_on_variety(F):
    for f in F:
        if _const_x_coeff(f):
            raise PreconditionError(
                f"the origin is not on V(F): {f} has a nonzero constant term"
            )


# -- tangent cones ------------------------------------------------------------------


def tangent_cone_at_origin(F):
    """Monomial generators of the head ideal of the tangent cone at O.

    Homogenize, compute a GB under the block order with the homogenizing
    variable dominant, dehomogenize the head terms.
    """
    gens = [f for f in F if f.terms]
    _check_origin_on_variety(gens)
    ring = gens[0].ring
    from .poly import homogenized_ring

    hring = homogenized_ring(ring)
    gb = groebner([homogenize(f, hring) for f in gens])
    out = []
    seen = set()
    for g in gb:
        exp = g.terms[0][0][1:]
        if not any(exp[: ring.nmain]):
            raise InvariantError(
                "pure power of the homogenizing variable in the basis; "
                "the origin is not on the variety"
            )
        mono = Poly(ring, ((exp, ring.field.one),))
        if mono not in seen:
            seen.add(mono)
            out.append(mono)
    return out


# -- parameter-space stratification by local dimension ------------------------------


@dataclass
class DimStratification:
    """Strata with the local dimension of the fibre variety at the origin."""

    entries: list
    pring: ParamRing
    region: Stratum

    def zero_locus(self):
        strata = tuple(s for s, d in self.entries if d == 0)
        rest = tuple(s for s, d in self.entries if d != 0)
        return normalize_union(
            ConstructibleSet(strata, self.pring.tring, complement=rest)
        )

    def dims(self):
        return sorted({d for _, d in self.entries})

    def to_json(self):
        return {
            "region": [self.region.to_json()],
            "entries": [
                {"stratum": s.to_json(), "local_dim": d} for s, d in self.entries
            ],
            "zero_locus": self.zero_locus().to_json(),
        }


def dim_strata_tangent_cone(F, pring, region=None):
    """Local dimension at O per stratum, through the tangent-cone CGS."""
    if region is None:
        region = whole_space(pring.tring)
    gens = [f for f in F if f.terms]
    _check_origin_on_variety(gens)
    nx = pring.nmain
    xnames = pring.ring.names[:nx]
    tnames = pring.ring.names[nx:]
    ox = pring.ring.order.first if pring.ring.nparams else pring.ring.order
    h = fresh_name("x0", pring.ring.names)
    hpring = ParamRing(
        (h,) + xnames, tnames, pring.ring.field,
        xorder=Block(1, Lex(), ox), torder=pring.tring.order,
    )
    hom = [homogenize(f, hpring.ring) for f in gens]
    system = cgs_compute(hom, hpring, region)
    entries = []
    for stratum, basis in system.pairs:
        if not basis:
            entries.append((stratum, nx))
            continue
        monos = []
        for g in basis:
            exp = g.terms[0][0][1 : 1 + nx]
            if not any(exp):
                raise InvariantError(
                    "tangent-cone basis head dehomogenizes to a constant"
                )
            monos.append(exp)
        entries.append((stratum, monomial_dim(monos, nx)))
    entries.sort(key=lambda e: _stratum_sort_key(e[0]))
    return DimStratification(entries, pring, region)


def isolated_locus_tangent_cone(F, pring, region=None):
    return dim_strata_tangent_cone(F, pring, region).zero_locus()


def _collect_isolated(sat_pairs, pring):
    passing = []
    failing = []
    for stratum, basis in sat_pairs:
        ok, bad = split_by_origin_test(stratum, basis, pring)
        if ok is not None:
            passing.append(ok)
        if bad is not None:
            failing.append(bad)
    return passing, failing


def isolated_locus_saturation(F, pring, region=None):
    """The parameter locus where O is an isolated point, via <F> : m^infinity."""
    if region is None:
        region = whole_space(pring.tring)
    gens = [f for f in F if f.terms]
    _check_origin_on_variety(gens)
    sat = parametric_saturate(gens, maximal_ideal(pring.ring), pring, region, polish=False)
    passing, failing = _collect_isolated(sat.pairs, pring)
    return normalize_union(
        ConstructibleSet(tuple(passing), pring.tring, complement=tuple(failing))
    )


def isolated_locus_staged(F, pring, region=None):
    """Same locus as isolated_locus_saturation, via the staged saturation."""
    if region is None:
        region = whole_space(pring.tring)
    gens = [f for f in F if f.terms]
    _check_origin_on_variety(gens)
    a = saturation_exponent(gens)
    powers = [pring.ring.var(i) ** a for i in range(pring.nmain)]
    quot = parametric_quotient(gens, powers, pring, region, polish=False)
    m = maximal_ideal(pring.ring)
    passing = []
    failing = []
    for stratum, basis in quot.pairs:
        if not basis:
            failing.append(stratum)
            continue
        sat = parametric_saturate(basis, m, pring, stratum, polish=False)
        ok, bad = _collect_isolated(sat.pairs, pring)
        passing.extend(ok)
        failing.extend(bad)
    return normalize_union(
        ConstructibleSet(tuple(passing), pring.tring, complement=tuple(failing))
    )


# -- local dimension -----------------------------------------------------------------


def _section_field_and_ring(ring, ell):
    """Q(u_ij) and the x-ring over it for ell generic hyperplane sections."""
    n = ring.nmain
    unames = []
    taken = set(ring.names)
    for i in range(1, ell + 1):
        for j in range(1, n - ell + 1):
            nm = fresh_name(f"u{i}{j}", taken)
            taken.add(nm)
            unames.append(nm)
    fieldu = FractionField(tuple(unames))
    xorder = ring.order.first if ring.nparams else ring.order
    ru = Ring(ring.names[:n], fieldu, xorder, 0)
    return fieldu, ru


def _generic_sections(fieldu, ru, ell):
    """x_i + sum_j u_ij x_{ell+j} for i = 1..ell."""
    n = ru.n
    out = []
    idx = 0
    uring = fieldu.ring
    for i in range(ell):
        e = ru.var(i)
        for j in range(n - ell):
            u = fieldu.coerce(uring.var(idx))
            idx += 1
            e = e + u * ru.var(ell + j)
        out.append(e)
    return out


def _lift_coeffs(f, target):
    """Reinterpret a Q-coefficient polynomial over a larger coefficient field."""
    fld = target.field
    return Poly.from_dict(target, {e: fld.coerce(c) for e, c in f.terms})


def local_dim_stages(F):
    """(dimension, [reduced saturation GB per stage]) for a plain system."""
    gens = [f for f in F if f.terms]
    _check_origin_on_variety(gens)
    ring = gens[0].ring
    if ring.nparams:
        raise ValueError("use local_dim_strata for parametric systems")
    n = ring.nmain
    stages = []
    for ell in range(n + 1):
        if ell == 0:
            G = saturate_fast(gens)
        else:
            fieldu, ru = _section_field_and_ring(ring, ell)
            lifted = [_lift_coeffs(f, ru) for f in gens]
            G = saturate_fast(lifted + _generic_sections(fieldu, ru, ell))
        stages.append(G)
        if any(g.const_coeff() for g in G):
            return ell, stages
    raise InvariantError("local dimension search exceeded the variable count")


def local_dim_at_origin(F):
    """dim_O(V(F)) for a parameter-free system with O on the variety."""
    ell, _ = local_dim_stages(F)
    return ell


def _clear_u_stratum(stratum, tring):
    """Map a stratum over Q(u)[t] back to Q[t]; u-dependence is a defect."""

    def clear(p):
        cleared = p.canonical()
        d = {}
        for e, c in cleared.terms:
            if not c.is_const():
                raise InvariantError(
                    f"stratum condition depends on the section coefficients: {p}"
                )
            d[e] = c.as_fraction()
        return Poly.from_dict(tring, d)

    return Stratum(
        tuple(clear(e) for e in stratum.eqs),
        tuple(tuple(clear(f) for f in pr) for pr in stratum.neqs),
    )


def _lift_u_stratum(stratum, tring_u):
    fld = tring_u.field
    lift = lambda p: Poly.from_dict(tring_u, {e: fld.coerce(c) for e, c in p.terms})
    return Stratum(
        tuple(lift(e) for e in stratum.eqs),
        tuple(tuple(lift(f) for f in pr) for pr in stratum.neqs),
    )


def local_dim_strata(F, pring, region=None):
    """Stratify the region by the local dimension of V(sigma(F)) at O."""
    if region is None:
        region = whole_space(pring.tring)
    gens = [f for f in F if f.terms]
    _check_origin_on_variety(gens)
    ring = pring.ring
    n = pring.nmain
    xnames = ring.names[:n]
    tnames = ring.names[n:]
    ox = ring.order.first if ring.nparams else ring.order
    remaining = [normalize_stratum(region)]
    entries = []
    for ell in range(n + 1):
        if not remaining:
            break
        if ell == 0:
            pring_u = pring
            lifted = gens
            sections = []
            lift_s = lambda s: s
            clear_s = lambda s: s
        else:
            fieldu, _ = _section_field_and_ring(ring, ell)
            pring_u = ParamRing(xnames, tnames, fieldu, xorder=ox, torder=pring.tring.order)
            lifted = [_lift_coeffs(f, pring_u.ring) for f in gens]
            xonly = Ring(xnames, fieldu, ox, 0)
            secs = _generic_sections(fieldu, xonly, ell)
            sections = [to_ring(s, pring_u.ring) for s in secs]
            lift_s = lambda s: _lift_u_stratum(s, pring_u.tring)
            clear_s = lambda s: _clear_u_stratum(s, pring.tring)
        m = maximal_ideal(pring_u.ring)
        next_remaining = []
        for piece in remaining:
            sat = parametric_saturate(lifted + sections, m, pring_u, lift_s(piece), polish=False)
            passing, failing = _collect_isolated(sat.pairs, pring_u)
            for s in passing:
                entries.append((normalize_stratum(clear_s(s)), ell))
            for s in failing:
                next_remaining.append(normalize_stratum(clear_s(s)))
        remaining = [s for s in next_remaining if not stratum_is_empty(s)]
    if remaining:
        raise InvariantError("local dimension search left uncovered strata")
    entries.sort(key=lambda e: _stratum_sort_key(e[0]))
    return DimStratification(entries, pring, region)
