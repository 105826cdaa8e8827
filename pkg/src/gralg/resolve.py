"""Syzygies, minimal free resolutions, Hilbert data, Ext presentations, and
resolution verification by exact Betti/Hilbert comparison."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .gb import GroebnerBasis, Ideal, buchberger
from .graded import BettiTable, Complex, FreeModule, GradedMap, minimize
from .modgb import (
    Vec,
    minimal_vector_generators,
    module_buchberger,
    module_contains,
    module_lift,
    syzygies,
)
from .poly import Poly, Ring, mono_deg


class IndexOutOfRange(ValueError):
    pass


class ModulePresentation:
    """coker of a degree-0 map p : F1 -> F0, with an optional label."""

    def __init__(self, p: GradedMap, label: str = ""):
        self.map = p
        self.label = label

    @property
    def ring(self) -> Ring:
        return self.map.ring

    def __repr__(self):
        tag = f" {self.label}" if self.label else ""
        return f"ModulePresentation({self.map.source} -> {self.map.target}){tag}"


# -- syzygies ----------------------------------------------------------------


def map_columns(m: GradedMap) -> List[Vec]:
    return [Vec.from_polys(m.column(j), m.ring) for j in range(m.source.rank)]


def columns_to_map(
    cols: Sequence[Vec], target: FreeModule, ring: Ring
) -> GradedMap:
    twists = [v.degree_wrt(target.twists) for v in cols]
    source = FreeModule(ring, twists)
    entries = [
        [cols[j].component(i) for j in range(len(cols))] for i in range(target.rank)
    ]
    return GradedMap(source, target, entries)


def syzygy(m: GradedMap) -> GradedMap:
    """Map s with image(s) = kernel(m); generators pruned to a minimal set."""
    cols = map_columns(m)
    live = [(j, v) for j, v in enumerate(cols) if not v.is_zero()]
    syz_raw = syzygies([v for _j, v in live])
    # re-embed syzygies of the nonzero columns into the full source
    ring = m.ring
    full = []
    for s in syz_raw:
        terms = {}
        for (p, e), c in s.terms.items():
            terms[(live[p][0], e)] = c
        full.append(Vec(ring, m.source.rank, terms))
    # a zero column is itself a syzygy generator
    for j, v in enumerate(cols):
        if v.is_zero():
            unit = Vec(ring, m.source.rank, {(j, (0,) * ring.nvars): ring.field.one()})
            full.append(unit)
    gens = minimal_vector_generators(full, m.source.twists)
    return columns_to_map(gens, m.source, ring)


def presentation_of_ideal(I: Ideal) -> Tuple[GradedMap, List[Poly]]:
    """First two steps F1 -> F0 -> I with minimal generators."""
    ring = I.ring
    gens = I.minimal_generators()
    f0 = FreeModule(ring, [g.homogeneous_degree() for g in gens])
    row = GradedMap(f0, FreeModule(ring, [0]), [list(gens)])
    return syzygy(row), gens


def minimal_free_resolution(target) -> Complex:
    """Minimal graded free resolution of an Ideal or a ModulePresentation."""
    ring = target.ring
    if isinstance(target, Ideal):
        first, _gens = presentation_of_ideal(target)
        maps = [first]
    else:
        pres = minimize(
            Complex(
                [target.map.target, target.map.source], [target.map], check=False
            )
        )
        p = pres.maps[0] if pres.maps else None
        if p is None or p.source.rank == 0:
            return pres
        cols = minimal_vector_generators(map_columns(p), p.target.twists)
        if not cols:
            return Complex([pres.modules[0]], [])
        maps = [columns_to_map(cols, p.target, ring)]
    while True:
        s = syzygy(maps[-1])
        if s.source.rank == 0:
            break
        maps.append(s)
        if len(maps) > ring.nvars + 1:
            raise AssertionError("resolution exceeds the syzygy-theorem bound")
    mods = [maps[0].target] + [d.source for d in maps]
    return Complex(mods, maps, check=False)


# -- Hilbert data --------------------------------------------------------------


def _kpoly_monomial_quotient(lead: List[Tuple[int, ...]], cache: Dict) -> Dict[int, int]:
    """Numerator of HS(S/(monomials)) over (1-t)^nvars.

    Standard pivot recursion N(I) = N(I + (x)) + t*N(I : x); generator lists
    stay divisibility-pruned, so picking the pivot variable inside a
    degree >= 2 generator keeps both branches strictly smaller.
    """
    lead = sorted(set(lead))
    key = tuple(lead)
    if key in cache:
        return cache[key]
    if not lead:
        out = {0: 1}
    elif any(sum(e) == 0 for e in lead):
        out = {}
    else:
        big = [m for m in lead if sum(m) >= 2]
        if not big:
            # generated by distinct variables: numerator (1-t)^s
            s = len(lead)
            out = {d: (-1) ** d * comb(s, d) for d in range(s + 1)}
        else:
            pivot_mono = big[-1]
            var = max(i for i, x in enumerate(pivot_mono) if x)
            e = [0] * len(pivot_mono)
            e[var] = 1
            e = tuple(e)
            plus = [m for m in lead if not _div(e, m)] + [e]
            colon = sorted(
                {tuple(max(x - y, 0) for x, y in zip(m, e)) for m in lead}
            )
            colon = [
                m
                for m in colon
                if not any(_div(m2, m) and m2 != m for m2 in colon)
            ]
            a = _kpoly_monomial_quotient(plus, cache)
            b = _kpoly_monomial_quotient(colon, cache)
            out = dict(a)
            for d, c in b.items():
                out[d + 1] = out.get(d + 1, 0) + c
                if out[d + 1] == 0:
                    del out[d + 1]
    cache[key] = out
    return out


def _div(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def quotient_numerator(I: Ideal) -> Dict[int, int]:
    """HS numerator of S/I over (1-t)^nvars, via the lead-term ideal."""
    gb = I.groebner()
    lead = [g.lead_monomial() for g in gb]
    return _kpoly_monomial_quotient(lead, {})


def module_quotient_numerator(
    gens: Sequence[Vec], twists: Sequence[int]
) -> Dict[int, int]:
    """HS numerator of (⊕S(-a_p))/M over (1-t)^nvars."""
    gb = module_buchberger(list(gens))
    by_pos: Dict[int, List] = {p: [] for p in range(len(twists))}
    for v in gb:
        p, e = v.lead()
        by_pos[p].append(e)
    out: Dict[int, int] = {}
    cache: Dict = {}
    for p, a in enumerate(twists):
        num = _kpoly_monomial_quotient(by_pos[p], cache)
        for d, c in num.items():
            out[d + a] = out.get(d + a, 0) + c
            if out[d + a] == 0:
                del out[d + a]
    return out


class HilbertData:
    """Series numerator, Krull dimension, degree, Hilbert polynomial, chi."""

    def __init__(self, numerator: Dict[int, int], nvars: int):
        self.numerator = dict(numerator)
        self.nvars = nvars
        reduced = dict(self.numerator)
        pole = nvars
        while reduced and sum(reduced.values()) == 0:
            # divide by (1 - t): N/(1-t) has coefficients cumulative sums
            exps = sorted(reduced)
            out: Dict[int, int] = {}
            acc = 0
            for d in range(exps[0], exps[-1] + 1):
                acc += reduced.get(d, 0)
                if acc:
                    out[d] = acc
            reduced = out
            pole -= 1
        self.reduced_numerator = reduced
        self.dimension = pole if reduced else 0
        self.degree = sum(reduced.values()) if reduced else 0
        self.hp_coeffs = self._hilbert_polynomial()
        self.chi = self.hp_eval(0)

    def _hilbert_polynomial(self) -> List[Fraction]:
        """Coefficients [c0, c1, ...] of HP(T) = sum c_k T^k."""
        d = self.dimension
        if d == 0:
            return [Fraction(0)]
        # HP of t^k/(1-t)^d is C(T - k + d - 1, d - 1)
        coeffs = [Fraction(0)] * d
        for k, c in self.reduced_numerator.items():
            # expand binomial((T - k + d - 1), d-1) as polynomial in T
            poly = [Fraction(1)]
            for j in range(d - 1):
                shift = d - 1 - k - j
                poly = _polymul(poly, [Fraction(shift), Fraction(1)])
            denom = 1
            for j in range(1, d):
                denom *= j
            for i, a in enumerate(poly):
                coeffs[i] += Fraction(c) * a / denom
        return coeffs

    def hp_eval(self, t: int) -> Fraction:
        acc = Fraction(0)
        for i, c in enumerate(self.hp_coeffs):
            acc += c * t**i
        return acc

    def hilbert_function(self, d: int) -> int:
        """Exact dimension of the degree-d piece from the full numerator."""
        total = 0
        v = self.nvars
        for k, c in self.numerator.items():
            if d - k >= 0:
                total += c * comb(d - k + v - 1, v - 1)
        return total

    def __repr__(self):
        return (
            f"HilbertData(dim={self.dimension}, deg={self.degree}, "
            f"chi={self.chi}, HP={self.hp_coeffs})"
        )


def _polymul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def hilbert(target) -> HilbertData:
    """Hilbert data of S/I for an Ideal, of coker(p) for a presentation."""
    if isinstance(target, Ideal):
        return HilbertData(quotient_numerator(target), target.ring.nvars)
    p = target.map
    return HilbertData(
        module_quotient_numerator(map_columns(p), p.target.twists),
        p.ring.nvars,
    )


def ideal_module_numerator(I: Ideal) -> Dict[int, int]:
    """HS numerator of the ideal itself: HS(S) - HS(S/I)."""
    num = quotient_numerator(I)
    out = {0: 1}
    for d, c in num.items():
        out[d] = out.get(d, 0) - c
        if out[d] == 0:
            del out[d]
    return out


def brute_force_quotient_dimension(I: Ideal, d: int) -> int:
    """Count degree-d monomials in normal form (independent of the series)."""
    from itertools import combinations_with_replacement

    ring = I.ring
    gb = I.groebner()
    count = 0
    for combo in combinations_with_replacement(range(ring.nvars), d):
        e = [0] * ring.nvars
        for i in combo:
            e[i] += 1
        m = ring.monomial(tuple(e))
        if gb.normal_form(m).terms == m.terms:
            count += 1
    return count


def regularity(b: BettiTable) -> int:
    return b.regularity()


# -- Ext presentations -----------------------------------------------------------


def ext_presentation(resolution: Complex, i: int, label: str = "") -> ModulePresentation:
    """Ext^i(M, S(-nvars)) as coker, from the dualized twisted resolution."""
    ring = resolution.ring
    n = ring.nvars
    if not 0 <= i <= resolution.length:
        raise IndexOutOfRange(f"no Ext^{i} for resolution of length {resolution.length}")
    dual = resolution.dual().twist(-n)  # Hom(-, S(-n)) with n = dim + 1
    # dual.modules[k] == Hom(resolution.modules[L-k], S(-n)); cohomology at
    # original index i sits at dual position L - i
    L = resolution.length
    pos = L - i
    incoming = dual.maps[pos] if pos < len(dual.maps) else None  # pos+1 -> pos
    outgoing = dual.maps[pos - 1] if pos - 1 >= 0 else None  # pos -> pos-1
    module = dual.modules[pos]
    if outgoing is None:
        # top position: cohomology = coker(incoming)
        if incoming is None:
            incoming = GradedMap(
                FreeModule(ring, []), module, [[] for _ in range(module.rank)], check=False
            )
        return ModulePresentation(incoming, label)
    kernel = syzygy(outgoing)
    kcols = map_columns(kernel)
    if not kcols:
        empty = FreeModule(ring, [])
        return ModulePresentation(
            GradedMap(empty, empty, [], check=False), label
        )
    relations: List[Vec] = []
    gb_cols = [Vec.from_polys(kernel.column(j), ring) for j in range(kernel.source.rank)]
    if incoming is not None:
        for j in range(incoming.source.rank):
            img = Vec.from_polys(incoming.column(j), ring)
            if img.is_zero():
                continue
            coeffs = module_lift(img, gb_cols)
            relations.append(Vec.from_polys(coeffs, ring))
    # syzygies of the kernel generators are relations too
    for s in syzygies(gb_cols):
        relations.append(s)
    rel_gens = minimal_vector_generators(relations, kernel.source.twists)
    pres = columns_to_map(rel_gens, kernel.source, ring) if rel_gens else GradedMap(
        FreeModule(ring, []), kernel.source, [[] for _ in range(kernel.source.rank)], check=False
    )
    return ModulePresentation(pres, label)


# -- verification ------------------------------------------------------------------


class ResolutionReport:
    def __init__(self, checks: Dict[str, bool], detail: Dict[str, str]):
        self.checks = checks
        self.detail = detail

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __repr__(self):
        rows = [f"{k}: {'pass' if v else 'FAIL'}" for k, v in self.checks.items()]
        return "; ".join(rows)


def verify_resolution(complex_: Complex, I: Ideal) -> ResolutionReport:
    """Compositions zero; F0 generates I; alternating HS matches; Betti of the
    minimized complex equals Betti of the recomputed minimal resolution."""
    checks: Dict[str, bool] = {}
    detail: Dict[str, str] = {}

    comp_ok = True
    for k in range(len(complex_.maps) - 1):
        if not complex_.maps[k].compose(complex_.maps[k + 1]).is_zero():
            comp_ok = False
            detail["compositions_zero"] = f"composition at position {k} is nonzero"
            break
    checks["compositions_zero"] = comp_ok

    gens = getattr(complex_, "augmentation", None)
    if gens is not None:
        J = Ideal(list(gens))
        ok = J.equals(I)
        checks["generates_ideal"] = ok
        if not ok:
            detail["generates_ideal"] = "image of F0 differs from the ideal"

    num_c = complex_.hilbert_numerator()
    num_i = ideal_module_numerator(I)
    checks["hilbert_series"] = num_c == num_i
    if num_c != num_i:
        detail["hilbert_series"] = f"complex {num_c} vs ideal {num_i}"

    minimal = minimize(complex_)
    recomputed = minimal_free_resolution(I)
    checks["betti_minimal"] = minimal.betti() == recomputed.betti()
    if not checks["betti_minimal"]:
        detail["betti_minimal"] = (
            f"minimized: {minimal.betti().as_rows()!r} vs "
            f"recomputed: {recomputed.betti().as_rows()!r}"
        )
    return ResolutionReport(checks, detail)


def resolution_with_augmentation(maps: Sequence[GradedMap], gens: Sequence[Poly]) -> Complex:
    c = Complex.from_maps(list(maps))
    c.augmentation = list(gens)
    return c
