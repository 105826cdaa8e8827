"""Groebner bases and ideal arithmetic (membership, intersection, colon,
saturation, elimination) plus closed-form monomial-ideal oracles."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .order import GREVLEX, EliminationBlock, MonomialOrder
from .poly import (
    Poly,
    Ring,
    mono_deg,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


class NotMember(ValueError):
    pass


class NotMonomial(ValueError):
    pass


class GeneratorsNotInIdeal(ValueError):
    pass


def _negkey(k):
    if isinstance(k, tuple):
        return tuple(_negkey(x) for x in k)
    return -k


def divide(f: Poly, divisors: Sequence[Poly], with_quotients: bool = False):
    """Multivariate division; returns the remainder (and quotients).

    The remainder has no term divisible by any divisor lead monomial; the
    quotient choice is the deterministic one given the divisor sequence.
    Term selection runs off a lazy max-heap keyed by the monomial order.
    """
    import heapq

    ring = f.ring
    field = ring.field
    key = ring.order.key
    quotients = [dict() for _ in divisors] if with_quotients else None
    lead = [(g.lead_monomial(), g.lead_coeff()) for g in divisors]
    work = dict(f.terms)
    heap = [(_negkey(key(e)), e) for e in work]
    heapq.heapify(heap)
    remainder: Dict = {}
    while heap:
        _nk, e = heapq.heappop(heap)
        if e not in work:
            continue
        c = work.pop(e)
        for i, (lm, lc) in enumerate(lead):
            if mono_divides(lm, e):
                q = mono_div(e, lm)
                coef = field.div(c, lc)
                for e2, c2 in divisors[i].terms.items():
                    if e2 == lm:
                        continue
                    em = mono_mul(e2, q)
                    old = work.get(em)
                    s = field.sub(old if old is not None else field.zero(), field.mul(c2, coef))
                    if s == 0:
                        if old is not None:
                            del work[em]
                    else:
                        work[em] = s
                        if old is None:
                            heapq.heappush(heap, (_negkey(key(em)), em))
                if with_quotients:
                    qd = quotients[i]
                    qd[q] = field.add(qd.get(q, field.zero()), coef)
                break
        else:
            remainder[e] = c
    rem = Poly(ring, remainder)
    if with_quotients:
        return rem, [Poly(ring, qd) for qd in quotients]
    return rem


class GroebnerBasis:
    """Reduced Groebner basis: monic elements, tails in normal form."""

    __slots__ = ("elements", "order", "ring")

    def __init__(self, elements: Sequence[Poly], order: MonomialOrder, ring: Ring):
        self.elements = list(elements)
        self.order = order
        self.ring = ring

    def normal_form(self, f: Poly) -> Poly:
        if f.ring.order != self.order:
            f = f.convert(f.ring.with_order(self.order))
        return divide(f, self.elements)

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    def lead_monomials(self):
        return [g.lead_monomial() for g in self.elements]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def _interreduce(gens: List[Poly]) -> List[Poly]:
    gens = [g.monic() for g in gens if not g.is_zero()]
    changed = True
    while changed:
        changed = False
        for i in range(len(gens)):
            others = gens[:i] + gens[i + 1 :]
            if not others:
                continue
            r = divide(gens[i], others)
            if r.terms != gens[i].terms:
                changed = True
                if r.is_zero():
                    gens.pop(i)
                else:
                    gens[i] = r.monic()
                break
    key = gens[0].ring.order.key if gens else None
    gens.sort(key=lambda g: key(g.lead_monomial()))
    return gens


def buchberger(gens: Sequence[Poly], order: Optional[MonomialOrder] = None) -> GroebnerBasis:
    """Reduced GB via Buchberger with Gebauer-Moeller pair elimination."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("need at least the zero ideal's ring; pass gens with a ring")
    ring = gens[0].ring
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
        gens = [g.convert(ring) for g in gens]
    key = ring.order.key

    basis: List[Poly] = []
    pairs: List[Tuple[int, int]] = []

    def lcm_of(i, j):
        return mono_lcm(basis[i].lead_monomial(), basis[j].lead_monomial())

    def update(h: Poly):
        # Gebauer-Moeller update of the pair set on adding h as basis[t].
        t = len(basis)
        lm_h = h.lead_monomial()
        lcms = [mono_lcm(basis[i].lead_monomial(), lm_h) for i in range(t)]
        # criterion M: drop (i,t) when some lcm(j,t) strictly divides lcm(i,t)
        kept = [
            i
            for i in range(t)
            if not any(
                lcms[j] != lcms[i] and mono_divides(lcms[j], lcms[i])
                for j in range(t)
            )
        ]
        # criterion F + product criterion: one pair per lcm class, none if the
        # class contains a coprime-lead pair
        classes: Dict[Tuple[int, ...], List[int]] = {}
        for i in kept:
            classes.setdefault(lcms[i], []).append(i)
        filtered = []
        for lcm_val, members in sorted(classes.items()):
            if any(
                lcms[i] == mono_mul(basis[i].lead_monomial(), lm_h) for i in members
            ):
                continue
            filtered.append((members[0], t))
        # criterion B on old pairs
        surviving = []
        for (i, j) in pairs:
            lij = lcm_of(i, j)
            if (
                mono_divides(lm_h, lij)
                and mono_lcm(basis[i].lead_monomial(), lm_h) != lij
                and mono_lcm(basis[j].lead_monomial(), lm_h) != lij
            ):
                continue
            surviving.append((i, j))
        basis.append(h)
        pairs[:] = surviving + filtered

    for g in sorted(gens, key=lambda g: key(g.lead_monomial())):
        h = divide(g, basis) if basis else g
        if not h.is_zero():
            update(h.monic())

    field = ring.field
    while pairs:
        # normal selection: minimal lcm in the order
        pairs.sort(key=lambda ij: key(lcm_of(*ij)))
        i, j = pairs.pop(0)
        gi, gj = basis[i], basis[j]
        lij = mono_lcm(gi.lead_monomial(), gj.lead_monomial())
        si = gi.mul_monomial(mono_div(lij, gi.lead_monomial()))
        sj = gj.mul_monomial(mono_div(lij, gj.lead_monomial()))
        spoly = si.scale(field.inv(si.lead_coeff())) - sj.scale(
            field.inv(sj.lead_coeff())
        )
        h = divide(spoly, basis)
        if not h.is_zero():
            update(h.monic())

    return GroebnerBasis(_interreduce(basis), ring.order, ring)


def groebner_with_coeffs(gens: Sequence[Poly]):
    """GB of ``gens`` together with expressions of each GB element in them.

    Returns (reduced basis list, rows) where rows[k] is the coefficient
    vector over ``gens`` with sum(rows[k][i] * gens[i]) == basis[k].
    Implemented via the module-elimination trick in resolve/modgb terms but
    kept here self-contained: divide with quotient tracking on a tagged run.
    """
    gens = [g for g in gens if not g.is_zero()]
    ring = gens[0].ring
    field = ring.field
    key = ring.order.key

    basis: List[Poly] = []
    history: List[List[Poly]] = []  # basis[k] = sum history[k][i] * gens[i]

    def reduce_full(f: Poly, rep: List[Poly]):
        # divide f by current basis, updating rep accordingly
        r, qs = divide(f, basis, with_quotients=True) if basis else (f, [])
        for q, hrow in zip(qs, history):
            if q.is_zero():
                continue
            for i, h in enumerate(hrow):
                if not h.is_zero():
                    rep[i] = rep[i] - q * h
        return r, rep

    def add(f: Poly, rep: List[Poly]):
        c = field.inv(f.lead_coeff())
        basis.append(f.monic())
        history.append([h.scale(c) for h in rep])

    for g_index in sorted(range(len(gens)), key=lambda i: key(gens[i].lead_monomial())):
        rep = [ring.zero()] * len(gens)
        rep[g_index] = ring.one()
        r, rep = reduce_full(gens[g_index], rep)
        if not r.is_zero():
            add(r, rep)

    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        pairs.sort(
            key=lambda ij: key(
                mono_lcm(basis[ij[0]].lead_monomial(), basis[ij[1]].lead_monomial())
            )
        )
        i, j = pairs.pop(0)
        gi, gj = basis[i], basis[j]
        lij = mono_lcm(gi.lead_monomial(), gj.lead_monomial())
        if lij == mono_mul(gi.lead_monomial(), gj.lead_monomial()):
            continue  # product criterion
        mi = mono_div(lij, gi.lead_monomial())
        mj = mono_div(lij, gj.lead_monomial())
        spoly = gi.mul_monomial(mi) - gj.mul_monomial(mj)
        rep = [
            history[i][t].mul_monomial(mi) - history[j][t].mul_monomial(mj)
            for t in range(len(gens))
        ]
        r, rep = reduce_full(spoly, rep)
        if not r.is_zero():
            t = len(basis)
            add(r, rep)
            pairs.extend((s, t) for s in range(t))

    # reduce tails (keep history consistent)
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1 :]
            if not others:
                continue
            r, qs = divide(basis[i], others, with_quotients=True)
            if r.terms == basis[i].terms:
                continue
            changed = True
            rep = list(history[i])
            other_hist = history[:i] + history[i + 1 :]
            for q, hrow in zip(qs, other_hist):
                if q.is_zero():
                    continue
                for t, h in enumerate(hrow):
                    if not h.is_zero():
                        rep[t] = rep[t] - q * h
            if r.is_zero():
                basis.pop(i)
                history.pop(i)
            else:
                c = field.inv(r.lead_coeff())
                basis[i] = r.monic()
                history[i] = [h.scale(c) for h in rep]
            break
    idx = sorted(range(len(basis)), key=lambda k: key(basis[k].lead_monomial()))
    return [basis[k] for k in idx], [history[k] for k in idx]


class Ideal:
    """Homogeneous ideal given by generators, with cached reduced GBs."""

    def __init__(self, generators: Sequence[Poly], saturated: str = "unknown"):
        gens = [g for g in generators if not g.is_zero()]
        if not gens:
            raise ValueError("the zero ideal needs an explicit ring; give a generator")
        self.ring = gens[0].ring
        for g in gens:
            if not g.ring.same(self.ring):
                raise ValueError("generators live in different rings")
            if not g.is_homogeneous():
                raise ValueError(f"generator {g} is not homogeneous")
        self.generators = gens
        self.saturated = saturated  # "yes" | "no" | "unknown"
        self._gb_cache: Dict[MonomialOrder, GroebnerBasis] = {}

    # -- basics -------------------------------------------------------------
    def groebner(self, order: Optional[MonomialOrder] = None) -> GroebnerBasis:
        order = order or self.ring.order
        gb = self._gb_cache.get(order)
        if gb is None:
            gb = buchberger(self.generators, order)
            self._gb_cache[order] = gb
        return gb

    def normal_form(self, f: Poly) -> Poly:
        return self.groebner().normal_form(f)

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        gb = self.groebner()
        return all(gb.contains(g) for g in other.generators)

    def equals(self, other: "Ideal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def lift(self, f: Poly) -> List[Poly]:
        """Coefficients h with sum(h_i * gens_i) = f; raises NotMember."""
        basis, history = groebner_with_coeffs(self.generators)
        r, qs = divide(f, basis, with_quotients=True)
        if not r.is_zero():
            raise NotMember(f"{f} is not in the ideal")
        out = [self.ring.zero()] * len(self.generators)
        for q, hrow in zip(qs, history):
            if q.is_zero():
                continue
            for i, h in enumerate(hrow):
                if not h.is_zero():
                    out[i] = out[i] + q * h
        return out

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.generators)

    def minimal_generators(self) -> List[Poly]:
        """Prune to a minimal generating set (graded Nakayama)."""
        from .modgb import Vec, minimal_vector_generators

        vecs = [Vec.from_polys([g.monic()], self.ring) for g in self.generators]
        kept = minimal_vector_generators(vecs, [0])
        return [v.component(0) for v in kept]

    def degree_piece_ideal(self, d: int) -> "Ideal":
        """Ideal generated by the degree-d graded piece."""
        from itertools import combinations_with_replacement

        n = self.ring.nvars
        gens = []
        for g in self.generators:
            dg = g.homogeneous_degree()
            if dg > d:
                continue
            for combo in combinations_with_replacement(range(n), d - dg):
                e = [0] * n
                for i in combo:
                    e[i] += 1
                gens.append(g.mul_monomial(tuple(e)))
        if not gens:
            raise ValueError(f"ideal has no elements in degree {d}")
        return Ideal(gens)

    def __repr__(self):
        inner = ", ".join(repr(g) for g in self.generators)
        return f"Ideal({inner})"


# -- derived operations --------------------------------------------------------


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J via one auxiliary variable t: eliminate t from t*I + (1-t)*J."""
    ring = I.ring
    n = ring.nvars
    big = Ring(ring.field, n + 1, EliminationBlock(1))

    def up(f: Poly) -> Poly:
        return Poly(big, {(0,) + e: c for e, c in f.terms.items()})

    t = big.variable(0)
    one = big.one()
    gens = [t * up(f) for f in I.generators]
    gens += [(one - t) * up(g) for g in J.generators]
    gb = buchberger(gens)
    out = []
    for g in gb:
        if all(e[0] == 0 for e in g.terms):
            out.append(Poly(ring, {e[1:]: c for e, c in g.terms.items()}))
    if not out:
        # intersection of homogeneous proper ideals is nonzero in our use
        raise ValueError("empty intersection basis")
    return Ideal(_interreduce(out))


def colon_poly(I: Ideal, f: Poly) -> Ideal:
    """(I : f) = (I ∩ (f)) / f."""
    meet = intersect(I, Ideal([f]))
    out = []
    for g in meet.generators:
        q, rem = _exact_div(g, f)
        if rem:
            raise ArithmeticError("intersection element not divisible; bug")
        out.append(q)
    return Ideal(_interreduce(out))


def _exact_div(g: Poly, f: Poly):
    r, qs = divide(g, [f], with_quotients=True)
    return qs[0], not r.is_zero()


def colon(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) as the intersection of (I : g) over generators g of J."""
    result: Optional[Ideal] = None
    for g in J.generators:
        if g.is_zero():
            continue
        part = colon_poly(I, g)
        result = part if result is None else intersect(result, part)
    if result is None:
        raise ValueError("colon by the zero ideal")
    return result


def saturate(I: Ideal, J: Optional[Ideal] = None) -> Ideal:
    """Stabilized iterated colon (I : J^inf); defaults to the irrelevant ideal."""
    if J is None:
        ring = I.ring
        J = Ideal([ring.variable(i) for i in range(ring.nvars)])
    flag = "yes" if _is_irrelevant(J) else "unknown"
    current = I
    while True:
        nxt = colon(current, J)
        if nxt.equals(current):
            return Ideal(nxt.generators, saturated=flag)
        current = nxt


def _is_irrelevant(J: Ideal) -> bool:
    ring = J.ring
    want = {ring.variable(i).lead_monomial() for i in range(ring.nvars)}
    got = {g.lead_monomial() for g in J.generators if g.is_monomial() and g.degree() == 1}
    return want == got


def is_saturated(I: Ideal) -> bool:
    """(I : ell) = I for a linear nonzerodivisor certifies depth >= 1, hence
    saturation; generic forms are tried first, full saturation is the
    fallback."""
    ring = I.ring
    for c in (1, 2, 5, 11):
        ell = ring.zero()
        for i in range(ring.nvars):
            ell = ell + ring.variable(i).scale(pow(c, i))
        if colon_poly(I, ell).equals(I):
            return True
    return saturate(I).equals(I)


# -- monomial-ideal closed forms ------------------------------------------------


def _require_monomial(I: Ideal):
    if not I.is_monomial():
        raise NotMonomial("ideal is not generated by monomials")


def monomial_intersect(I: Ideal, J: Ideal) -> Ideal:
    """Intersection of monomial ideals via pairwise lcms."""
    _require_monomial(I)
    _require_monomial(J)
    ring = I.ring
    monos = set()
    for g in I.generators:
        for h in J.generators:
            monos.add(mono_lcm(g.lead_monomial(), h.lead_monomial()))
    # prune non-minimal monomials
    minimal = [
        m for m in monos if not any(m != m2 and mono_divides(m2, m) for m2 in monos)
    ]
    minimal.sort(key=ring.order.key)
    return Ideal([ring.monomial(m) for m in minimal])


def monomial_ideal(ring: Ring, *expts) -> Ideal:
    return Ideal([ring.monomial(e) for e in expts])


def monomial_colon_ci(m1: Poly, m2: Poly, I: Ideal) -> Ideal:
    """((m1, m2) : I) for a monomial ideal I containing m1, m2.

    Closed form: intersection over the remaining generators m_i of
    (S*[m_i,m1]/m_i + S*[m_i,m2]/m_i).
    """
    _require_monomial(I)
    if not (m1.is_monomial() and m2.is_monomial()):
        raise NotMonomial("m1, m2 must be monomials")
    gb = I.groebner()
    if not (gb.contains(m1) and gb.contains(m2)):
        raise GeneratorsNotInIdeal("m1, m2 must lie in I")
    ring = I.ring
    e1, e2 = m1.lead_monomial(), m2.lead_monomial()
    rest = [
        g.lead_monomial()
        for g in I.generators
        if g.lead_monomial() not in (e1, e2)
    ]
    result: Optional[Ideal] = None
    for ei in rest:
        gens = [
            ring.monomial(mono_div(mono_lcm(ei, e1), ei)),
            ring.monomial(mono_div(mono_lcm(ei, e2), ei)),
        ]
        part = Ideal(gens)
        result = part if result is None else monomial_intersect(result, part)
    if result is None:
        return Ideal([ring.one()])
    return result


def product(I: Ideal, J: Ideal) -> Ideal:
    gens = [f * g for f in I.generators for g in J.generators]
    return Ideal(gens)


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    return Ideal(list(I.generators) + list(J.generators))
