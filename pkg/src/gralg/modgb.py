"""Groebner machinery for submodules of free modules.

Vectors are dicts keyed by (position, exponent) pairs.  The term order is
position-over-term with earlier positions greater, which doubles as the
elimination order used for syzygy computations.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .poly import (
    Poly,
    Ring,
    mono_deg,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


class NotModuleMember(ValueError):
    pass


VTerm = Tuple[int, Tuple[int, ...]]


class Vec:
    """Element of a free module S^npos (twist bookkeeping lives elsewhere)."""

    __slots__ = ("ring", "npos", "terms", "_lead")

    def __init__(self, ring: Ring, npos: int, terms: Dict[VTerm, object]):
        self.ring = ring
        self.npos = npos
        self.terms = terms
        self._lead: Optional[VTerm] = None

    @staticmethod
    def from_polys(polys: Sequence[Poly], ring: Ring) -> "Vec":
        terms: Dict[VTerm, object] = {}
        for pos, f in enumerate(polys):
            for e, c in f.terms.items():
                terms[(pos, e)] = c
        return Vec(ring, len(polys), terms)

    def component(self, pos: int) -> Poly:
        return Poly(
            self.ring, {e: c for (p, e), c in self.terms.items() if p == pos}
        )

    def components(self) -> List[Poly]:
        out = [dict() for _ in range(self.npos)]
        for (p, e), c in self.terms.items():
            out[p][e] = c
        return [Poly(self.ring, d) for d in out]

    def is_zero(self) -> bool:
        return not self.terms

    def _key(self, term: VTerm):
        p, e = term
        return (-p, self.ring.order.key(e))

    def lead(self) -> VTerm:
        if not self.terms:
            raise ValueError("zero vector")
        if self._lead is None:
            self._lead = max(self.terms, key=self._key)
        return self._lead

    def lead_coeff(self):
        return self.terms[self.lead()]

    def add(self, other: "Vec") -> "Vec":
        f = self.ring.field
        out = dict(self.terms)
        for t, c in other.terms.items():
            if t in out:
                s = f.add(out[t], c)
                if s == 0:
                    del out[t]
                else:
                    out[t] = s
            else:
                out[t] = c
        return Vec(self.ring, self.npos, out)

    def neg(self) -> "Vec":
        f = self.ring.field
        return Vec(self.ring, self.npos, {t: f.neg(c) for t, c in self.terms.items()})

    def sub(self, other: "Vec") -> "Vec":
        return self.add(other.neg())

    def scale(self, c) -> "Vec":
        f = self.ring.field
        if c == 0:
            return Vec(self.ring, self.npos, {})
        return Vec(
            self.ring, self.npos, {t: f.mul(cc, c) for t, cc in self.terms.items()}
        )

    def mul_monomial(self, e, c=None) -> "Vec":
        f = self.ring.field
        if c is None:
            c = f.one()
        return Vec(
            self.ring,
            self.npos,
            {(p, mono_mul(e0, e)): f.mul(c0, c) for (p, e0), c0 in self.terms.items()},
        )

    def mul_poly(self, g: Poly) -> "Vec":
        out = Vec(self.ring, self.npos, {})
        for e, c in g.terms.items():
            out = out.add(self.mul_monomial(e, c))
        return out

    def monic(self) -> "Vec":
        return self.scale(self.ring.field.inv(self.lead_coeff()))

    def degree_wrt(self, twists: Sequence[int]) -> int:
        """Degree of a homogeneous vector in ⊕S(-a_p)."""
        degs = {mono_deg(e) + twists[p] for (p, e) in self.terms}
        if len(degs) != 1:
            raise ValueError(f"vector not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def __repr__(self):
        return "(" + ", ".join(repr(c) for c in self.components()) + ")"


def vdivide(f: Vec, divisors: Sequence[Vec], with_quotients: bool = False):
    """Module division: remainder (and polynomial quotients)."""
    import heapq

    ring = f.ring
    field = ring.field
    okey = ring.order.key
    lead = [(g.lead(), g.lead_coeff()) for g in divisors]
    quotients = [dict() for _ in divisors] if with_quotients else None
    work = dict(f.terms)
    remainder: Dict[VTerm, object] = {}

    from .gb import _negkey

    def hkey(t):
        return (t[0], _negkey(okey(t[1])))

    heap = [(hkey(t), t) for t in work]
    heapq.heapify(heap)
    while heap:
        _hk, t = heapq.heappop(heap)
        if t not in work:
            continue
        c = work.pop(t)
        p, e = t
        for i, ((lp, le), lc) in enumerate(lead):
            if lp == p and mono_divides(le, e):
                q = mono_div(e, le)
                coef = field.div(c, lc)
                for (p2, e2), c2 in divisors[i].terms.items():
                    if p2 == lp and e2 == le:
                        continue
                    tm = (p2, mono_mul(e2, q))
                    old = work.get(tm)
                    s = field.sub(old if old is not None else field.zero(), field.mul(c2, coef))
                    if s == 0:
                        if old is not None:
                            del work[tm]
                    else:
                        work[tm] = s
                        if old is None:
                            heapq.heappush(heap, (hkey(tm), tm))
                if with_quotients:
                    qd = quotients[i]
                    qd[q] = field.add(qd.get(q, field.zero()), coef)
                break
        else:
            remainder[t] = c
    rem = Vec(ring, f.npos, remainder)
    if with_quotients:
        return rem, [Poly(ring, qd) for qd in quotients]
    return rem


def module_buchberger(gens: Sequence[Vec], interreduce: bool = True) -> List[Vec]:
    """Groebner basis of the submodule generated by ``gens`` (POT order)."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    field = ring.field

    def key(v: Vec):
        p, e = v.lead()
        return (-p, ring.order.key(e))

    basis: List[Vec] = []
    for g in sorted(gens, key=key):
        h = vdivide(g, basis) if basis else g
        if not h.is_zero():
            basis.append(h.monic())

    pairs = [
        (i, j)
        for i in range(len(basis))
        for j in range(i + 1, len(basis))
        if basis[i].lead()[0] == basis[j].lead()[0]
    ]
    while pairs:
        pairs.sort(
            key=lambda ij: ring.order.key(
                mono_lcm(basis[ij[0]].lead()[1], basis[ij[1]].lead()[1])
            )
        )
        i, j = pairs.pop(0)
        gi, gj = basis[i], basis[j]
        (p, ei), (_, ej) = gi.lead(), gj.lead()
        lij = mono_lcm(ei, ej)
        spair = gi.mul_monomial(mono_div(lij, ei)).sub(
            gj.mul_monomial(mono_div(lij, ej))
        )
        h = vdivide(spair, basis)
        if not h.is_zero():
            t = len(basis)
            basis.append(h.monic())
            pairs.extend(
                (s, t) for s in range(t) if basis[s].lead()[0] == basis[t].lead()[0]
            )

    if interreduce:
        changed = True
        while changed:
            changed = False
            for i in range(len(basis)):
                others = basis[:i] + basis[i + 1 :]
                if not others:
                    continue
                r = vdivide(basis[i], others)
                if r.terms != basis[i].terms:
                    changed = True
                    if r.is_zero():
                        basis.pop(i)
                    else:
                        basis[i] = r.monic()
                    break
    basis.sort(key=key)
    return basis


def module_nf(f: Vec, gb: Sequence[Vec]) -> Vec:
    return vdivide(f, gb) if gb else f


def module_contains(f: Vec, gb: Sequence[Vec]) -> bool:
    return module_nf(f, gb).is_zero()


def _tagged(gens: Sequence[Vec], npos: int) -> List[Vec]:
    ring = gens[0].ring
    out = []
    for i, g in enumerate(gens):
        terms = dict(g.terms)
        terms[(npos + i, (0,) * ring.nvars)] = ring.field.one()
        out.append(Vec(ring, npos + len(gens), terms))
    return out


def syzygies(gens: Sequence[Vec]) -> List[Vec]:
    """Generators of the syzygy module of ``gens`` inside S^len(gens)."""
    gens = list(gens)
    if not gens:
        return []
    ring = gens[0].ring
    npos = gens[0].npos
    gb = module_buchberger(_tagged(gens, npos), interreduce=False)
    out = []
    for v in gb:
        if all(p >= npos for (p, _e) in v.terms):
            out.append(
                Vec(ring, len(gens), {(p - npos, e): c for (p, e), c in v.terms.items()})
            )
    return out


def module_lift(f: Vec, gens: Sequence[Vec]) -> List[Poly]:
    """Coefficients a with sum(a_i * gens_i) = f, via tagged elimination."""
    gens = list(gens)
    ring = f.ring
    npos = f.npos
    gb = module_buchberger(_tagged(gens, npos))
    big = Vec(ring, npos + len(gens), dict(f.terms))
    rem = vdivide(big, gb)
    if any(p < npos for (p, _e) in rem.terms):
        raise NotModuleMember("vector is not in the submodule")
    coeffs = [ring.zero() for _ in gens]
    for (p, e), c in rem.terms.items():
        i = p - npos
        coeffs[i] = coeffs[i] + ring.monomial(e, ring.field.neg(c))
    return coeffs


class _Rref:
    """Incremental reduced row echelon form over the coefficient field."""

    def __init__(self, field):
        self.field = field
        self.pivots: Dict[int, Dict[int, object]] = {}

    def reduce(self, row: Dict[int, object]) -> Dict[int, object]:
        field = self.field
        row = dict(row)
        while row:
            j = min(row)
            piv = self.pivots.get(j)
            if piv is None:
                return row
            c = row[j]
            for k, v in piv.items():
                s = field.sub(row.get(k, field.zero()), field.mul(c, v))
                if s == 0:
                    row.pop(k, None)
                else:
                    row[k] = s
        return row

    def add(self, row: Dict[int, object]) -> bool:
        """Insert; returns True when the row added a new pivot."""
        row = self.reduce(row)
        if not row:
            return False
        j = min(row)
        inv = self.field.inv(row[j])
        self.pivots[j] = {k: self.field.mul(v, inv) for k, v in row.items()}
        return True


def _monomials_of_degree(nvars: int, d: int):
    from itertools import combinations_with_replacement

    if d < 0:
        return
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        yield tuple(e)


def minimal_vector_generators(
    gens: Sequence[Vec], twists: Sequence[int]
) -> List[Vec]:
    """Prune to a minimal generating set by graded Nakayama: in each degree,
    keep the candidates independent modulo the multiples of earlier ones."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    field = ring.field
    nvars = ring.nvars

    def sort_key(v: Vec):
        p, e = v.lead()
        return (v.degree_wrt(twists), p, ring.order.key(e))

    ordered = sorted((g.monic() for g in gens), key=sort_key)
    degrees = sorted({v.degree_wrt(twists) for v in ordered})
    kept: List[Vec] = []
    for d in degrees:
        # column indices for the degree-d piece of the ambient free module
        col_of: Dict[VTerm, int] = {}
        for p, a in enumerate(twists):
            for e in _monomials_of_degree(nvars, d - a):
                col_of[(p, e)] = len(col_of)
        rref = _Rref(field)
        # span of monomial multiples (nontrivial for lower degree) of all
        # kept generators: that is (m*M + earlier)_d
        for g in kept:
            dg = g.degree_wrt(twists)
            if dg > d:
                continue
            for mono in _monomials_of_degree(nvars, d - dg):
                row = {
                    col_of[(p, mono_mul(e, mono))]: c
                    for (p, e), c in g.terms.items()
                }
                rref.add(row)
        for g in ordered:
            if g.degree_wrt(twists) != d:
                continue
            row = {col_of[t]: c for t, c in g.terms.items()}
            if rref.add(row):
                kept.append(g)
    return kept
