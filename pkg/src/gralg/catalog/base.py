"""Shared infrastructure for the parametric curve catalog: symbolic matrix
instantiation, binary-form parameter sampling, and the per-case report."""

from __future__ import annotations

import random
import re
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..field import FieldContext
from ..gb import Ideal, buchberger, divide
from ..graded import Complex, FreeModule, GradedMap
from ..poly import Poly, Ring

_SYM = re.compile(r"\s*([0-9]+|[A-Za-z_][A-Za-z_0-9]*|\^|\*|\+|-|\(|\))")


class Inadmissible(ValueError):
    """Parameters violate one of the case's stated conditions."""

    def __init__(self, condition: str):
        super().__init__(condition)
        self.condition = condition


class BranchUndetermined(ValueError):
    """Parameters sit on a sub-case boundary; refusing to guess."""


def sym_tokens(text: str) -> List[str]:
    pos, out = 0, []
    while pos < len(text):
        m = _SYM.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad token in {text!r} at {text[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


def sym_eval(text: str, env: Dict[str, Poly], ring: Ring) -> Poly:
    """Evaluate +,-,*,^,() expressions whose identifiers come from ``env``."""
    toks = sym_tokens(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def expr() -> Poly:
        nonlocal pos
        value = term()
        while peek() in ("+", "-"):
            op = toks[pos]
            pos += 1
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term() -> Poly:
        nonlocal pos
        sign = 1
        while peek() == "-":
            sign = -sign
            pos += 1
        value = factor()
        while peek() == "*":
            pos += 1
            value = value * factor()
        if sign < 0:
            value = -value
        return value

    def factor() -> Poly:
        nonlocal pos
        base = atom()
        if peek() == "^":
            pos += 1
            n = toks[pos]
            pos += 1
            base = base ** int(n)
        return base

    def atom() -> Poly:
        nonlocal pos
        tok = peek()
        if tok == "(":
            pos += 1
            value = expr()
            if peek() != ")":
                raise ValueError(f"missing ')' in {text!r}")
            pos += 1
            return value
        if tok == "-":
            pos += 1
            return -atom()
        if tok is None:
            raise ValueError(f"unexpected end in {text!r}")
        pos += 1
        if tok.isdigit():
            return ring.constant(int(tok))
        if tok not in env:
            raise KeyError(f"symbol {tok!r} not in environment ({text!r})")
        return env[tok]

    value = expr()
    if pos != len(toks):
        raise ValueError(f"trailing tokens in {text!r}")
    return value


def eval_matrix(rows: Sequence[Sequence[str]], env: Dict[str, Poly], ring: Ring) -> List[List[Poly]]:
    return [[sym_eval(cell, env, ring) for cell in row] for row in rows]


def make_complex(
    ring: Ring,
    twists: Sequence[Sequence[int]],
    matrices: Sequence[Sequence[Sequence[str]]],
    env: Dict[str, Poly],
    augmentation: Optional[Sequence[Poly]] = None,
) -> Complex:
    """Complex from display data: twists [F0, F1, ...] rightmost first and
    string matrices [d1, d2, ...] with d_k : F_k -> F_{k-1}."""
    mods = [FreeModule(ring, t) for t in twists]
    maps = []
    for k, rows in enumerate(matrices):
        entries = eval_matrix(rows, env, ring)
        maps.append(GradedMap(mods[k + 1], mods[k], entries))
    out = Complex(mods, maps)
    if augmentation is not None:
        out.augmentation = list(augmentation)
    return out


# -- binary forms in x0, x1 -------------------------------------------------------


def binary_form(ring: Ring, coeffs: Sequence[int], degree: int) -> Poly:
    """sum coeffs[i] * x0^(degree-i) * x1^i."""
    if len(coeffs) != degree + 1:
        raise ValueError("need degree+1 coefficients")
    out = ring.zero()
    for i, c in enumerate(coeffs):
        if c:
            e = [0] * ring.nvars
            e[0] = degree - i
            e[1] = i
            out = out + ring.monomial(tuple(e), c)
    return out


def random_binary_form(ring: Ring, degree: int, rng: random.Random) -> Poly:
    if degree < 0:
        return ring.zero()
    p = ring.field.characteristic
    hi = p if p else 101
    while True:
        coeffs = [rng.randrange(hi) for _ in range(degree + 1)]
        if any(coeffs):
            return binary_form(ring, coeffs, degree)


def binary_coefficients(f: Poly, degree: int) -> List:
    """Coefficient list of a binary form in x0, x1 (checked)."""
    out = [f.ring.field.zero()] * (degree + 1)
    for e, c in f.terms.items():
        if any(e[i] for i in range(2, f.ring.nvars)):
            raise ValueError("not a form in x0, x1")
        if e[0] + e[1] != degree:
            raise ValueError("wrong degree")
        out[e[1]] = c
    return out


def binary_resultant(a: Poly, b: Poly):
    """Sylvester resultant of two binary forms (dehomogenized at x1)."""
    da, db = a.homogeneous_degree(), b.homogeneous_degree()
    ca = binary_coefficients(a, da)
    cb = binary_coefficients(b, db)
    n = da + db
    field = a.ring.field
    rows = []
    for i in range(db):
        rows.append([field.zero()] * i + list(ca) + [field.zero()] * (db - 1 - i))
    for i in range(da):
        rows.append([field.zero()] * i + list(cb) + [field.zero()] * (da - 1 - i))
    return _det(rows, field)


def _det(rows: List[List], field: FieldContext):
    n = len(rows)
    rows = [list(r) for r in rows]
    det = field.one()
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return field.zero()
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = field.neg(det)
        det = field.mul(det, rows[col][col])
        inv = field.inv(rows[col][col])
        for r in range(col + 1, n):
            if rows[r][col] == 0:
                continue
            factor = field.mul(rows[r][col], inv)
            for c2 in range(col, n):
                rows[r][c2] = field.sub(rows[r][c2], field.mul(factor, rows[col][c2]))
    return det


def coprime_binary(a: Poly, b: Poly) -> bool:
    """No common zero on the line (nonzero resultant); constants count."""
    if a.is_zero() or b.is_zero():
        return False
    if a.is_constant() or b.is_constant():
        return True
    return binary_resultant(a, b) != 0


def no_common_zero(forms: Sequence[Poly]) -> bool:
    """No common zero on the line: the forms generate an (x0,x1)-primary
    ideal.  Constants short-circuit; pairs go through the resultant."""
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        return False
    if any(f.is_constant() for f in forms):
        return True
    if len(forms) == 2:
        return coprime_binary(forms[0], forms[1])
    from ..gb import saturate

    ring = forms[0].ring
    sat = saturate(Ideal(list(forms)), Ideal([ring.variable(0), ring.variable(1)]))
    return any(g.is_constant() for g in sat.generators)


def conic_pullback(f: Poly) -> Poly:
    """Restriction to the standard conic as a binary form: substitutes
    x0 -> x0^2, x1 -> x0*x1, x2 -> x1^2, x3 -> 0 (parameter line reused)."""
    ring = f.ring
    x0, x1 = ring.variable(0), ring.variable(1)
    return f.substitute({0: x0 * x0, 1: x0 * x1, 2: x1 * x1, 3: ring.zero()})


def divides_var(var: Poly, f: Poly) -> bool:
    """Whether a single variable divides f."""
    if f.is_zero():
        return True
    i = var.lead_monomial().index(1)
    return all(e[i] >= 1 for e in f.terms)


def var_quotient(var: Poly, f: Poly) -> Poly:
    q, rem_nonzero = _exact(f, var)
    if rem_nonzero:
        raise ValueError("not divisible")
    return q


def _exact(f: Poly, g: Poly):
    r, qs = divide(f, [g], with_quotients=True)
    return qs[0], not r.is_zero()


def eval_at_x1_zero(f: Poly) -> Poly:
    """f(x0, 0) for a binary form."""
    return f.substitute({1: f.ring.zero()})


def eval_at_x0_zero(f: Poly) -> Poly:
    return f.substitute({0: f.ring.zero()})


# -- case protocol ------------------------------------------------------------------


class CaseData:
    """Everything ``build`` produces for one parameter draw."""

    def __init__(
        self,
        ideal: Ideal,
        derived: Optional[Dict[str, Poly]] = None,
        ideal_resolution: Optional[Complex] = None,
        structure: Optional[Complex] = None,
        expected_degree: Optional[int] = None,
        expected_chi: Optional[int] = None,
        branch: str = "",
        direct_ideal: Optional[Ideal] = None,
        extra_checks: Optional[List[Tuple[str, Callable[[], bool]]]] = None,
        nonminimal_display: bool = False,
    ):
        self.ideal = ideal
        self.derived = derived or {}
        self.ideal_resolution = ideal_resolution
        self.structure = structure
        self.expected_degree = expected_degree
        self.expected_chi = expected_chi
        self.branch = branch
        self.direct_ideal = direct_ideal
        self.extra_checks = extra_checks or []
        self.nonminimal_display = nonminimal_display


class CaseFamily:
    """A parametric catalog case: sampling, admissibility, construction."""

    case_id: str = ""
    anchor: str = ""

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        raise NotImplementedError

    def build(self, ring: Ring, params: Dict) -> CaseData:
        raise NotImplementedError

    def describe(self) -> str:
        return self.case_id


class Report:
    """Per-case verification outcome: (check, pass, detail) rows."""

    def __init__(self, case_id: str, anchor: str, seed):
        self.case_id = case_id
        self.anchor = anchor
        self.seed = seed
        self.rows: List[Tuple[str, bool, str]] = []
        self.elapsed: float = 0.0

    def add(self, name: str, ok: bool, detail: str = ""):
        self.rows.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _n, ok, _d in self.rows)

    def as_json(self):
        return {
            "case": self.case_id,
            "anchor": self.anchor,
            "seed": self.seed,
            "pass": self.ok,
            "checks": [
                {"name": n, "pass": ok, **({"detail": d} if d else {})}
                for n, ok, d in self.rows
            ],
            "seconds": round(self.elapsed, 3),
        }

    def __repr__(self):
        state = "PASS" if self.ok else "FAIL"
        rows = ", ".join(f"{n}:{'ok' if ok else 'FAIL'}" for n, ok, d in self.rows)
        return f"[{state}] {self.case_id} (seed {self.seed}): {rows}"
