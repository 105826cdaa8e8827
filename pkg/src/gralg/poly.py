"""Sparse multivariate polynomials over an exact field.

A polynomial lives in a ``Ring`` (field context + variable count + monomial
order) and stores a dict from exponent tuples to nonzero coefficients.
Values are immutable after construction.
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .field import CharacteristicClash, FieldContext
from .order import GREVLEX, Exponent, MonomialOrder


class PolySyntaxError(ValueError):
    pass


class VariableOutOfRange(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


class ZeroPolynomial(ValueError):
    pass


def mono_mul(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_deg(a: Exponent) -> int:
    return sum(a)


class Ring:
    """k[x0..x_{n}] with a fixed monomial order (n+1 variables)."""

    __slots__ = ("field", "nvars", "order", "_vars")

    def __init__(self, field: FieldContext, nvars: int, order: MonomialOrder = GREVLEX):
        self.field = field
        self.nvars = nvars
        self.order = order
        self._vars: Optional[Tuple["Poly", ...]] = None

    def with_order(self, order: MonomialOrder) -> "Ring":
        return Ring(self.field, self.nvars, order)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {(0,) * self.nvars: self.field.one()})

    def constant(self, c) -> "Poly":
        c = self.field.of(c)
        if c == 0:
            return self.zero()
        return Poly(self, {(0,) * self.nvars: c})

    def variable(self, i: int) -> "Poly":
        if not 0 <= i < self.nvars:
            raise VariableOutOfRange(f"x{i} out of range for {self.nvars} variables")
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one()})

    def variables(self) -> Tuple["Poly", ...]:
        if self._vars is None:
            self._vars = tuple(self.variable(i) for i in range(self.nvars))
        return self._vars

    def monomial(self, e: Exponent, c=1) -> "Poly":
        c = self.field.of(c)
        if c == 0:
            return self.zero()
        return Poly(self, {tuple(e): c})

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def same(self, other: "Ring") -> bool:
        return (
            self.field == other.field
            and self.nvars == other.nvars
            and self.order == other.order
        )

    def __eq__(self, other):
        return isinstance(other, Ring) and self.same(other)

    def __hash__(self):
        return hash((self.field, self.nvars, self.order))

    def __repr__(self):
        return f"{self.field}[x0..x{self.nvars - 1}]/{self.order}"


class Poly:
    __slots__ = ("ring", "terms", "_lead", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, object]):
        self.ring = ring
        self.terms: Dict[Exponent, object] = dict(terms)
        self._lead: Optional[Exponent] = None
        self._hash: Optional[int] = None

    # -- basic queries -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def lead_monomial(self) -> Exponent:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        if self._lead is None:
            key = self.ring.order.key
            self._lead = max(self.terms, key=key)
        return self._lead

    def lead_coeff(self):
        return self.terms[self.lead_monomial()]

    def degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no degree")
        return max(mono_deg(e) for e in self.terms)

    def homogeneous_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no homogeneous degree")
        degs = {mono_deg(e) for e in self.terms}
        if len(degs) > 1:
            raise NotHomogeneous(f"degrees {sorted(degs)} present")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len({mono_deg(e) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(mono_deg(e) == 0 for e in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self):
        if self.is_zero():
            return self.ring.field.zero()
        return self.terms[(0,) * self.ring.nvars]

    def sorted_terms(self):
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        f = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = f.add(out.get(e, 0), c) if e in out else c
            if e in out:
                if s == 0:
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly(self.ring, out)

    def __neg__(self) -> "Poly":
        f = self.ring.field
        return Poly(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        f = self.ring.field
        out: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                c = f.mul(c1, c2)
                if e in out:
                    s = f.add(out[e], c)
                    if s == 0:
                        del out[e]
                    else:
                        out[e] = s
                elif c != 0:
                    out[e] = c
        return Poly(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Poly":
        f = self.ring.field
        c = f.of(c) if not isinstance(c, type(f.one())) else c
        if c == 0:
            return self.ring.zero()
        return Poly(self.ring, {e: f.mul(cc, c) for e, cc in self.terms.items()})

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.ring.field.inv(self.lead_coeff()))

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_monomial(self, e: Exponent, c=None) -> "Poly":
        f = self.ring.field
        if c is None:
            c = f.one()
        return Poly(
            self.ring, {mono_mul(e0, e): f.mul(c0, c) for e0, c0 in self.terms.items()}
        )

    def coefficient(self, e: Exponent):
        return self.terms.get(tuple(e), self.ring.field.zero())

    # -- substitution -------------------------------------------------------
    def substitute(self, assignments: Mapping[int, "Poly"]) -> "Poly":
        """Simultaneously substitute polynomials for the given variables."""
        ring = self.ring
        out = ring.zero()
        for e, c in self.terms.items():
            term = ring.constant(c)
            for i, exp in enumerate(e):
                if exp == 0:
                    continue
                base = assignments.get(i)
                if base is None:
                    base = ring.variable(i)
                term = term * base**exp
            out = out + term
        return out

    def convert(self, ring: Ring) -> "Poly":
        """Re-interpret in another ring (order change or field change)."""
        if ring.nvars < self.ring.nvars:
            raise VariableOutOfRange("target ring has fewer variables")
        f = ring.field
        pad = ring.nvars - self.ring.nvars
        out: Dict[Exponent, object] = {}
        src = self.ring.field
        for e, c in self.terms.items():
            if src.characteristic == 0:
                cc = f.of(c.numerator, c.denominator)
            else:
                cc = f.of(c)
            if cc != 0:
                out[tuple(e) + (0,) * pad] = cc
        return Poly(ring, out)

    # -- comparisons ----------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.ring.same(other.ring)
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return format_poly(self)


# -- text form ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|[a-zA-Z]\w*|\^|\*|\+|-|/)")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise PolySyntaxError(f"bad token at {text[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse ``expr := term (('+'|'-') term)*`` with x<i> variables."""
    toks = _tokenize(text)
    if not toks:
        raise PolySyntaxError("empty input")
    pos = 0
    result = ring.zero()
    sign = 1
    first = True

    def peek():
        return toks[pos] if pos < len(toks) else None

    while pos < len(toks):
        tok = toks[pos]
        if tok in "+-":
            if first and tok == "+":
                raise PolySyntaxError("leading '+'")
            sign = 1 if tok == "+" else -1
            pos += 1
            if pos >= len(toks):
                raise PolySyntaxError("dangling sign")
        elif not first:
            raise PolySyntaxError(f"expected '+' or '-' before {tok!r}")
        first = False

        # term: [coeff '*']? factor ('*' factor)* | bare coeff
        num, den = 1, 1
        have_coeff = False
        tok = peek()
        if tok is not None and tok.isdigit():
            num = int(tok)
            pos += 1
            if peek() == "/":
                pos += 1
                tok = peek()
                if tok is None or not tok.isdigit():
                    raise PolySyntaxError("expected denominator")
                den = int(tok)
                pos += 1
            have_coeff = True
            if peek() == "*":
                pos += 1
            elif peek() is not None and peek() not in "+-":
                raise PolySyntaxError(f"expected '*' before {peek()!r}")

        expt = [0] * ring.nvars
        have_factor = False
        while True:
            tok = peek()
            if tok is None or tok in "+-":
                break
            m = re.fullmatch(r"x(\d+)", tok)
            if not m:
                raise PolySyntaxError(f"expected variable, got {tok!r}")
            i = int(m.group(1))
            if i >= ring.nvars:
                raise VariableOutOfRange(
                    f"x{i} out of range for {ring.nvars} variables"
                )
            pos += 1
            power = 1
            if peek() == "^":
                pos += 1
                tok = peek()
                if tok is None or not tok.isdigit():
                    raise PolySyntaxError("expected exponent")
                power = int(tok)
                pos += 1
            expt[i] += power
            have_factor = True
            if peek() == "*":
                pos += 1
                if peek() is None or peek() in "+-":
                    raise PolySyntaxError("dangling '*'")
            else:
                break
        if not have_factor and not have_coeff:
            raise PolySyntaxError("empty term")
        c = ring.field.of(sign * num, den)
        result = result + ring.monomial(tuple(expt), c)
        sign = 1
    return result


def _format_monomial(e: Exponent) -> str:
    parts = []
    for i, exp in enumerate(e):
        if exp == 1:
            parts.append(f"x{i}")
        elif exp >= 2:
            parts.append(f"x{i}^{exp}")
    return "*".join(parts)


def format_poly(f: Poly) -> str:
    """Canonical text: decreasing order, '*' explicit, '-' glued to coeffs."""
    if f.is_zero():
        return "0"
    field = f.ring.field
    p = field.characteristic
    chunks = []
    for e, c in f.sorted_terms():
        if p and c > p // 2:
            c_int, neg = p - c, True
            c_str = str(c_int)
        elif p:
            c_int, neg = c, False
            c_str = str(c)
        else:
            neg = c < 0
            c_abs = -c if neg else c
            c_str = str(c_abs)
            c_int = None if c_abs != 1 else 1
        mono = _format_monomial(e)
        is_one = (c_str == "1")
        if not mono:
            body = c_str
        elif is_one:
            body = mono
        else:
            body = f"{c_str}*{mono}"
        chunks.append((neg, body))
    out = []
    for i, (neg, body) in enumerate(chunks):
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def random_poly(ring: Ring, degree: int, rng, homogeneous: bool = True) -> Poly:
    """Random sparse polynomial for property tests (dense over GF(p))."""
    from itertools import combinations_with_replacement

    n = ring.nvars
    monos = []
    for combo in combinations_with_replacement(range(n), degree):
        e = [0] * n
        for i in combo:
            e[i] += 1
        monos.append(tuple(e))
    out = ring.zero()
    for e in monos:
        if rng.random() < 0.6:
            c = rng.randrange(
                1, ring.field.characteristic if ring.field.characteristic else 7
            )
            if ring.field.characteristic == 0 and rng.random() < 0.5:
                c = -c
            out = out + ring.monomial(e, c)
    if homogeneous or out.is_zero():
        return out
    return out + ring.constant(1)
