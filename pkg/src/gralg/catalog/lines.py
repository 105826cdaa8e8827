"""Multiplicity-2/3/4 structures on the line x2 = x3 = 0.

Parameters are binary forms in x0, x1; the displayed resolutions are stored
as symbolic matrices and instantiated by substitution.  Derived coefficient
polynomials come out of the engine's division/lift machinery and every
identity they must satisfy is re-checked at build time.
"""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Tuple

from ..gb import Ideal, NotMember, divide, product
from ..modgb import Vec, module_lift, syzygies, minimal_vector_generators
from ..poly import Poly, Ring
from .base import (
    CaseData,
    CaseFamily,
    Inadmissible,
    coprime_binary,
    eval_at_x1_zero,
    make_complex,
    no_common_zero,
    random_binary_form,
)


def line_ideal(ring: Ring) -> Ideal:
    return Ideal([ring.variable(2), ring.variable(3)])


def _power_monomials(ring: Ring, d: int) -> List[Poly]:
    """x^d, x^{d-1}y, ..., y^d in the last two variables."""
    x, y = ring.variable(2), ring.variable(3)
    return [x ** (d - i) * y**i for i in range(d + 1)]


def xy_coefficients(f: Poly, d: int) -> List[Poly]:
    """Binary-form coefficients of f = sum c_i(x0,x1) x2^{d-i} x3^i."""
    ring = f.ring
    out = [dict() for _ in range(d + 1)]
    for e, c in f.terms.items():
        i, j = e[2], e[3]
        if i + j != d:
            raise ValueError("not of pure x2,x3-degree d")
        out[j][(e[0], e[1], 0, 0)] = c
    return [Poly(ring, t) for t in out]


def binary_lift(target: Poly, gens: List[Poly]) -> Optional[List[Poly]]:
    """Lift among binary-coefficient combinations, or None; zero generators
    keep their slot (with zero coefficient)."""
    ring = target.ring
    live = [(i, g) for i, g in enumerate(gens) if not g.is_zero()]
    if not live:
        return [ring.zero()] * len(gens) if target.is_zero() else None
    try:
        coeffs = Ideal([g for _i, g in live]).lift(target)
    except NotMember:
        return None
    out = [ring.zero()] * len(gens)
    for (i, _g), c in zip(live, coeffs):
        out[i] = c
    return out


def kernel_lift_through_triangle(rhs: List[Poly], a: Poly, b: Poly) -> List[Poly]:
    """Solve M·c = rhs for the staircase matrix with columns
    (-b, a, 0, 0), (0, -b, a, 0), (0, 0, -b, a)."""
    ring = a.ring
    cols = [
        Vec.from_polys([-b, a, ring.zero(), ring.zero()], ring),
        Vec.from_polys([ring.zero(), -b, a, ring.zero()], ring),
        Vec.from_polys([ring.zero(), ring.zero(), -b, a], ring),
    ]
    return module_lift(Vec.from_polys(rhs, ring), cols)


def syzygy_of_row(entries: List[Poly]) -> List[List[Poly]]:
    """Minimal syzygy columns of a 1-row matrix over the parameter line."""
    ring = entries[0].ring
    vecs = [Vec.from_polys([f], ring) for f in entries]
    raw = syzygies(vecs)
    degs = [f.homogeneous_degree() for f in entries]
    mins = minimal_vector_generators(raw, degs)
    return [[v.component(i) for i in range(len(entries))] for v in mins]


# ---------------------------------------------------------------------------
# degree 2: double line
# ---------------------------------------------------------------------------


class DoubleLine(CaseFamily):
    case_id = "a-p2-double-line"
    anchor = "lines/degree2"

    def __init__(self, l: int = 0):
        self.l = l
        self.case_id = f"a-p2-double-line-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        l = self.l
        while True:
            a = random_binary_form(ring, l + 1, rng)
            b = random_binary_form(ring, l + 1, rng)
            if coprime_binary(a, b):
                return {"l": l, "a": a, "b": b}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        l, a, b = params["l"], params["a"], params["b"]
        if l < -1:
            raise Inadmissible("l >= -1 required")
        if not coprime_binary(a, b):
            raise Inadmissible("a, b must be coprime")
        x, y = ring.variable(2), ring.variable(3)
        F2 = a * y - b * x
        gens = [F2, x * x, x * y, y * y]
        I = Ideal(gens, saturated="yes")
        env = {"x": x, "y": y, "a": a, "b": b}
        ideal_res = make_complex(
            ring,
            [[l + 2, 2, 2, 2], [l + 3, l + 3, 3, 3], [l + 4]],
            [
                [
                    ["x", "y", "0", "0"],
                    ["b", "0", "-y", "0"],
                    ["-a", "b", "x", "-y"],
                    ["0", "-a", "0", "x"],
                ],
                [["-y"], ["x"], ["-b"], ["a"]],
            ],
            env,
            augmentation=gens,
        )
        structure = make_complex(
            ring,
            [[0, -l], [1, 1, 1 - l, 1 - l], [2, 2 - l]],
            [
                [["x", "y", "0", "0"], ["-a", "-b", "x", "y"]],
                [["-y", "0"], ["x", "0"], ["b", "-y"], ["-a", "x"]],
            ],
            env,
        )
        return CaseData(
            ideal=I,
            derived={"F2": F2},
            ideal_resolution=ideal_res,
            structure=structure,
            expected_degree=2,
            expected_chi=l + 2,
        )


# ---------------------------------------------------------------------------
# degree 3: quasiprimitive triple line
# ---------------------------------------------------------------------------


class TripleLine(CaseFamily):
    anchor = "lines/degree3"

    def __init__(self, l: int = 0, m: int = 0):
        self.l = l
        self.m = m
        self.case_id = f"a-q3-triple-line-l{l}-m{m}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        l, m = self.l, self.m
        while True:
            a = random_binary_form(ring, l + 1, rng)
            b = random_binary_form(ring, l + 1, rng)
            if not coprime_binary(a, b):
                continue
            ap = random_binary_form(ring, 2 * l + m + 1, rng)
            bp = random_binary_form(ring, 2 * l + m + 1, rng)
            p = ring.one() if m == 0 else random_binary_form(ring, m, rng)
            d1 = a * bp - ap * b
            if not no_common_zero([d1, p]):
                continue
            return {"l": l, "m": m, "a": a, "b": b, "ap": ap, "bp": bp, "p": p}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        l, m = params["l"], params["m"]
        a, b, ap, bp, p = (params[k] for k in ("a", "b", "ap", "bp", "p"))
        if l < -1 or m < 0:
            raise Inadmissible("need l >= -1, m >= 0")
        if not coprime_binary(a, b):
            raise Inadmissible("a, b must be coprime")
        delta1 = a * bp - ap * b
        if not no_common_zero([delta1, p]):
            raise Inadmissible("Delta1 and p must be coprime")
        vs = binary_lift(-delta1, [a * a, a * b, b * b])
        if vs is None:
            raise Inadmissible("Delta1 not expressible over a^2, ab, b^2")
        v0, v1, v2 = vs
        assert (v0 * a * a + v1 * a * b + v2 * b * b + delta1).is_zero()
        x, y = ring.variable(2), ring.variable(3)
        F2 = a * y - b * x
        F3 = p * F2 + v0 * x * x + v1 * x * y + v2 * y * y
        cubics = _power_monomials(ring, 3)
        gens = [F3, x * F2, y * F2] + cubics
        I = Ideal(gens, saturated="yes")
        env = {
            "x": x, "y": y, "a": a, "b": b, "ap": ap, "bp": bp, "p": p,
            "v0": v0, "v1": v1, "v2": v2,
        }
        d1 = [
            ["x", "y", "0", "0", "0", "0", "0", "0", "0"],
            ["-p", "0", "x", "y", "0", "0", "0", "0", "0"],
            ["0", "-p", "0", "0", "x", "y", "0", "0", "0"],
            ["-v0", "0", "b", "0", "0", "0", "-y", "0", "0"],
            ["-v1", "-v0", "-a", "b", "b", "0", "x", "-y", "0"],
            ["-v2", "-v1", "0", "-a", "-a", "b", "0", "x", "-y"],
            ["0", "-v2", "0", "0", "0", "-a", "0", "0", "x"],
        ]
        d2 = [
            ["-y", "0", "0"],
            ["x", "0", "0"],
            ["0", "-y", "0"],
            ["-p", "x", "0"],
            ["p", "0", "-y"],
            ["0", "0", "x"],
            ["v0", "-b", "0"],
            ["v1", "a", "-b"],
            ["v2", "0", "a"],
        ]
        ideal_res = make_complex(
            ring,
            [
                [l + m + 2, l + 3, l + 3, 3, 3, 3, 3],
                [l + m + 3, l + m + 3, l + 4, l + 4, l + 4, l + 4, 4, 4, 4],
                [l + m + 4, l + 5, l + 5],
            ],
            [d1, d2],
            env,
            augmentation=gens,
        )
        structure = make_complex(
            ring,
            [
                [0, -l, -(2 * l + m)],
                [1, 1, 1 - l, 1 - l, 1 - 2 * l - m, 1 - 2 * l - m],
                [2, 2 - l, 2 - 2 * l - m],
            ],
            [
                [
                    ["x", "y", "0", "0", "0", "0"],
                    ["-a", "-b", "x", "y", "0", "0"],
                    ["-ap", "-bp", "-p*a", "-p*b", "x", "y"],
                ],
                [
                    ["-y", "0", "0"],
                    ["x", "0", "0"],
                    ["b", "-y", "0"],
                    ["-a", "x", "0"],
                    ["bp", "p*b", "-y"],
                    ["-ap", "-p*a", "x"],
                ],
            ],
            env,
        )
        return CaseData(
            ideal=I,
            derived={"F2": F2, "F3": F3, "Delta1": delta1, "v0": v0, "v1": v1, "v2": v2},
            ideal_resolution=ideal_res,
            structure=structure,
            expected_degree=3,
            expected_chi=3 * l + m + 3,
        )


# ---------------------------------------------------------------------------
# degree 4 derivation chain shared by the quasiprimitive/primitive cases
# ---------------------------------------------------------------------------


def q4_derive(ring: Ring, params: Dict) -> Dict[str, Poly]:
    """All coefficient polynomials of the quadruple quasiprimitive kernel
    computation, with every defining identity re-verified."""
    l, m, n = params["l"], params["m"], params["n"]
    a, b = params["a"], params["b"]
    ap, bp = params["ap"], params["bp"]
    app, bpp = params["app"], params["bpp"]
    p, pp, q = params["p"], params["pp"], params["q"]

    if not coprime_binary(a, b):
        raise Inadmissible("a, b must be coprime")
    delta1 = a * bp - ap * b
    if not no_common_zero([delta1, p]):
        raise Inadmissible("Delta1 and p must be coprime")
    # det [[a, b, 0], [ap, bp, p], [app, bpp, pp]] expanded along the last column
    delta2 = -p * (a * bpp - app * b) + pp * (a * bp - ap * b)
    if not no_common_zero([delta2, q]):
        raise Inadmissible("Delta2 and q must be coprime")

    vs = binary_lift(-delta1, [a * a, a * b, b * b])
    if vs is None:
        raise Inadmissible("Delta1 not in (a,b)^2 span")
    v0, v1, v2 = vs

    cols = syzygy_of_row([a, b, p])
    if len(cols) != 2:
        raise Inadmissible("syzygy of (a, b, p) not of rank 2")
    (f1, g1, u1), (f2, g2, u2) = cols
    # Hilbert-Burch normalization: scale so the signed minors give a, b, p
    p_det = f1 * g2 - f2 * g1
    scale_q, bad = _exact_quotient(p, p_det)
    if bad or not scale_q.is_constant():
        raise Inadmissible("syzygy minors do not reproduce p up to a constant")
    c = scale_q.constant_value()
    f2, g2, u2 = f2.scale(c), g2.scale(c), u2.scale(c)
    assert (f1 * g2 - f2 * g1 - p).is_zero()
    assert (g1 * u2 - g2 * u1 - a).is_zero()
    assert (f1 * u2 - f2 * u1 + b).is_zero()
    l1 = f1.homogeneous_degree() + l + 1 if not f1.is_zero() else g1.homogeneous_degree() + l + 1
    l2 = f2.homogeneous_degree() + l + 1 if not f2.is_zero() else g2.homogeneous_degree() + l + 1

    v_def = v0 * a * ap * 2 + v1 * (a * bp + ap * b) + v2 * b * bp * 2
    target = delta2 - q * v_def
    fg = binary_lift(target, [a * delta1, b * delta1, p])
    if fg is None:
        raise Inadmissible("E:fgw lift failed")
    f, g, w = fg
    assert (f * a * delta1 + g * b * delta1 + w * p - target).is_zero()

    cubes = [a**3, a * a * b, a * b * b, b**3]
    v1j = binary_lift(u1 * delta1, cubes)
    v2j = binary_lift(u2 * delta1, cubes)
    if v1j is None or v2j is None:
        raise Inadmissible("E:vij lift failed")

    out = {
        "Delta1": delta1, "Delta2": delta2,
        "v0": v0, "v1": v1, "v2": v2,
        "f1": f1, "g1": g1, "u1": u1, "f2": f2, "g2": g2, "u2": u2,
        "f": f, "g": g, "w": w,
        "l1": l1, "l2": l2,
    }
    for j in range(4):
        out[f"v1{j}"] = v1j[j]
        out[f"v2{j}"] = v2j[j]
    wj = binary_lift(w, cubes)
    out["w_decomposable"] = wj is not None
    if wj is not None:
        for j in range(4):
            out[f"w{j}"] = wj[j]
    return out


def _exact_quotient(f: Poly, g: Poly):
    r, qs = divide(f, [g], with_quotients=True)
    return qs[0], not r.is_zero()


class QuadQuasiprim(CaseFamily):
    anchor = "lines/degree4-quasiprimitive"

    def __init__(self, l: int = 0, m: int = 1, n: int = 0):
        self.l, self.m, self.n = l, m, n
        self.case_id = f"a-q4-quasiprimitive-l{l}-m{m}-n{n}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        l, m, n = self.l, self.m, self.n
        while True:
            a = random_binary_form(ring, l + 1, rng)
            b = random_binary_form(ring, l + 1, rng)
            if not coprime_binary(a, b):
                continue
            ap = random_binary_form(ring, 2 * l + m + 1, rng)
            bp = random_binary_form(ring, 2 * l + m + 1, rng)
            app = random_binary_form(ring, 3 * l + m + n + 1, rng)
            bpp = random_binary_form(ring, 3 * l + m + n + 1, rng)
            p = ring.one() if m == 0 else random_binary_form(ring, m, rng)
            q = ring.one() if n == 0 else random_binary_form(ring, n, rng)
            pp = (
                ring.zero()
                if l + m + n < 0
                else random_binary_form(ring, l + m + n, rng)
            )
            params = {
                "l": l, "m": m, "n": n, "a": a, "b": b, "ap": ap, "bp": bp,
                "app": app, "bpp": bpp, "p": p, "pp": pp, "q": q,
            }
            d1 = a * bp - ap * b
            d2 = -p * (a * bpp - app * b) + pp * d1
            if not (no_common_zero([d1, p]) and no_common_zero([d2, q])):
                continue
            return params

    def build(self, ring: Ring, params: Dict) -> CaseData:
        l, m, n = params["l"], params["m"], params["n"]
        der = q4_derive(ring, params)
        if not der["w_decomposable"]:
            raise Inadmissible("w not decomposable; primitive-w branch applies")
        x, y = ring.variable(2), ring.variable(3)
        a, b, p, q = params["a"], params["b"], params["p"], params["q"]
        v0, v1, v2 = der["v0"], der["v1"], der["v2"]
        f, g, w = der["f"], der["g"], der["w"]
        f1, g1, f2, g2 = der["f1"], der["g1"], der["f2"], der["g2"]
        l1, l2 = der["l1"], der["l2"]

        F2 = a * y - b * x
        F3 = p * F2 + v0 * x * x + v1 * x * y + v2 * y * y
        quartics = _power_monomials(ring, 4)
        cubics = _power_monomials(ring, 3)
        F4 = q * F3 + (f * x + g * y) * F2
        G1 = (f1 * x + g1 * y) * F2
        G2 = (f2 * x + g2 * y) * F2
        for j in range(4):
            F4 = F4 + der[f"w{j}"] * cubics[j]
            G1 = G1 + der[f"v1{j}"] * cubics[j]
            G2 = G2 + der[f"v2{j}"] * cubics[j]
        gens = [F4, G1, G2, x * x * F2, x * y * F2, y * y * F2] + quartics
        I = Ideal(gens, saturated="yes")

        # E:alpha and E:beta coefficient triples for the displayed relations
        v1j = [der[f"v1{j}"] for j in range(4)]
        v2j = [der[f"v2{j}"] for j in range(4)]
        lhs_alpha = [
            v0 - g2 * v1j[0] + g1 * v2j[0],
            v1 - g2 * v1j[1] + g1 * v2j[1],
            v2 - g2 * v1j[2] + g1 * v2j[2],
            -g2 * v1j[3] + g1 * v2j[3],
        ]
        alpha = kernel_lift_through_triangle(lhs_alpha, a, b)
        lhs_beta = [
            f2 * v1j[0] - f1 * v2j[0],
            v0 + f2 * v1j[1] - f1 * v2j[1],
            v1 + f2 * v1j[2] - f1 * v2j[2],
            v2 + f2 * v1j[3] - f1 * v2j[3],
        ]
        beta = kernel_lift_through_triangle(lhs_beta, a, b)

        env = {
            "x": x, "y": y, "a": a, "b": b, "p": p, "q": q,
            "f": f, "g": g, "f1": f1, "g1": g1, "f2": f2, "g2": g2,
            "v0": v0, "v1": v1, "v2": v2,
            "al0": alpha[0], "al1": alpha[1], "al2": alpha[2],
            "be0": beta[0], "be1": beta[1], "be2": beta[2],
            "ap": params["ap"], "bp": params["bp"],
            "app": params["app"], "bpp": params["bpp"], "pp": params["pp"],
        }
        for j in range(4):
            env[f"w{j}"] = der[f"w{j}"]
            env[f"v1{j}"] = v1j[j]
            env[f"v2{j}"] = v2j[j]

        d1 = [
            ["x", "y"] + ["0"] * 14,
            ["-q*g2", "q*f2", "x", "y"] + ["0"] * 12,
            ["q*g1", "-q*f1", "0", "0", "x", "y"] + ["0"] * 10,
            ["-f-q*al0", "-q*be0", "-f1", "0", "-f2", "0", "x", "y"] + ["0"] * 8,
            ["-g-q*al1", "-f-q*be1", "-g1", "-f1", "-g2", "-f2", "0", "0", "x", "y"]
            + ["0"] * 6,
            ["-q*al2", "-g-q*be2", "0", "-g1", "0", "-g2", "0", "0", "0", "0", "x", "y", "0", "0", "0", "0"],
            # sign of the (x^4, G2-column) entry corrected; forced by d1∘d2 = 0
            ["-w0", "0", "-v10", "0", "-v20", "0", "b", "0", "0", "0", "0", "0", "-y", "0", "0", "0"],
            ["-w1", "-w0", "-v11", "-v10", "-v21", "-v20", "-a", "b", "b", "0", "0", "0", "x", "-y", "0", "0"],
            ["-w2", "-w1", "-v12", "-v11", "-v22", "-v21", "0", "-a", "-a", "b", "b", "0", "0", "x", "-y", "0"],
            ["-w3", "-w2", "-v13", "-v12", "-v23", "-v22", "0", "0", "0", "-a", "-a", "b", "0", "0", "x", "-y"],
            ["0", "-w3", "0", "-v13", "0", "-v23", "0", "0", "0", "0", "0", "-a", "0", "0", "0", "x"],
        ]
        d2 = [
            ["-y", "0", "0", "0", "0", "0"],
            ["x", "0", "0", "0", "0", "0"],
            ["-q*f2", "-y", "0", "0", "0", "0"],
            ["-q*g2", "x", "0", "0", "0", "0"],
            ["q*f1", "0", "-y", "0", "0", "0"],
            ["q*g1", "0", "x", "0", "0", "0"],
            ["q*be0", "0", "0", "-y", "0", "0"],
            ["-f-q*al0", "-f1", "-f2", "x", "0", "0"],
            ["f+q*be1", "f1", "f2", "0", "-y", "0"],
            ["-g-q*al1", "-g1", "-g2", "0", "x", "0"],
            ["g+q*be2", "g1", "g2", "0", "0", "-y"],
            ["-q*al2", "0", "0", "0", "0", "x"],
            ["w0", "v10", "v20", "-b", "0", "0"],
            ["w1", "v11", "v21", "a", "-b", "0"],
            ["w2", "v12", "v22", "0", "a", "-b"],
            ["w3", "v13", "v23", "0", "0", "a"],
        ]
        lmn = l + m + n
        ideal_res = make_complex(
            ring,
            [
                [lmn + 2, l1 + 2, l2 + 2, l + 4, l + 4, l + 4, 4, 4, 4, 4, 4],
                [lmn + 3, lmn + 3, l1 + 3, l1 + 3, l2 + 3, l2 + 3]
                + [l + 5] * 6 + [5] * 4,
                [lmn + 4, l1 + 4, l2 + 4, l + 6, l + 6, l + 6],
            ],
            [d1, d2],
            env,
            augmentation=gens,
        )
        structure = _q4_structure(ring, env, l, m, n)
        derived = dict(der)
        derived.update({"F2": F2, "F3": F3, "F4": F4, "G1": G1, "G2": G2})
        for i in range(3):
            derived[f"alpha{i}"] = alpha[i]
            derived[f"beta{i}"] = beta[i]
        return CaseData(
            ideal=I,
            derived=derived,
            ideal_resolution=ideal_res,
            structure=structure,
            expected_degree=4,
            expected_chi=6 * l + 2 * m + n + 4,
            nonminimal_display=True,
        )


def _q4_structure(ring: Ring, env: Dict[str, Poly], l: int, m: int, n: int):
    delta1 = [
        ["x", "y", "0", "0", "0", "0", "0", "0"],
        ["-a", "-b", "x", "y", "0", "0", "0", "0"],
        ["-ap", "-bp", "-p*a", "-p*b", "x", "y", "0", "0"],
        ["-app", "-bpp", "-pp*a-q*ap", "-pp*b-q*bp", "-q*a", "-q*b", "x", "y"],
    ]
    delta2 = [
        ["-y", "0", "0", "0"],
        ["x", "0", "0", "0"],
        ["b", "-y", "0", "0"],
        ["-a", "x", "0", "0"],
        ["bp", "p*b", "-y", "0"],
        ["-ap", "-p*a", "x", "0"],
        ["bpp", "pp*b+q*bp", "q*b", "-y"],
        ["-app", "-pp*a-q*ap", "-q*a", "x"],
    ]
    t1, t2, t3 = l, 2 * l + m, 3 * l + m + n
    return make_complex(
        ring,
        [
            [0, -t1, -t2, -t3],
            [1, 1, 1 - t1, 1 - t1, 1 - t2, 1 - t2, 1 - t3, 1 - t3],
            [2, 2 - t1, 2 - t2, 2 - t3],
        ],
        [delta1, delta2],
        env,
    )


class QuadPrimitive(CaseFamily):
    """m = n = 0, w decomposable: the divisor-on-a-surface branch."""

    anchor = "lines/degree4-primitive"

    def __init__(self, l: int = 0):
        self.l = l
        self.case_id = f"a-q4-primitive-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        """Reverse-engineer a'' and b'' so that w is a combination of the
        cubes: pick the combination coefficients first, then solve
        a*b'' - a''*b = -(2 v0 a a' + v1(a b' + a' b) + 2 v2 b b') - w."""
        l = self.l
        x0 = ring.variable(0)
        while True:
            a = random_binary_form(ring, l + 1, rng)
            b = random_binary_form(ring, l + 1, rng)
            if not coprime_binary(a, b):
                continue
            ap = random_binary_form(ring, 2 * l + 1, rng)
            bp = random_binary_form(ring, 2 * l + 1, rng)
            d1 = a * bp - ap * b
            if d1.is_zero() and l >= 0:
                continue
            vs = binary_lift(-d1, [a * a, a * b, b * b])
            if vs is None:
                continue
            v0, v1, v2 = vs
            w = ring.zero()
            if l >= 1:
                cubes = [a**3, a * a * b, a * b * b, b**3]
                for cube in cubes:
                    w = w + random_binary_form(ring, l - 1, rng) * cube
            v_def = v0 * a * ap * 2 + v1 * (a * bp + ap * b) + v2 * b * bp * 2
            rhs = -v_def - w
            if rhs.is_zero():
                app = ring.zero()
                bpp = ring.zero()
            else:
                pair = binary_lift(rhs, [a, b])
                if pair is None:
                    continue
                bpp, app = pair[0], -pair[1]
            params = {
                "l": l, "m": 0, "n": 0, "a": a, "b": b, "ap": ap, "bp": bp,
                "app": app, "bpp": bpp,
                "p": ring.one(), "pp": ring.zero(), "q": ring.one(),
            }
            try:
                der = q4_derive(ring, params)
            except Inadmissible:
                continue
            if der["w_decomposable"]:
                params["_derived"] = der
                return params

    def build(self, ring: Ring, params: Dict) -> CaseData:
        l = params["l"]
        der = params.get("_derived") or q4_derive(ring, params)
        if not der["w_decomposable"]:
            raise Inadmissible("w not decomposable")
        x, y = ring.variable(2), ring.variable(3)
        a, b = params["a"], params["b"]
        v0, v1, v2 = der["v0"], der["v1"], der["v2"]
        quartics = _power_monomials(ring, 4)
        cubics = _power_monomials(ring, 3)
        F2 = a * y - b * x
        F3 = F2 + v0 * x * x + v1 * x * y + v2 * y * y
        F4 = F3
        for j in range(4):
            F4 = F4 + der[f"w{j}"] * cubics[j]
        gens = [F4] + quartics
        I = Ideal(gens, saturated="yes")
        env = {
            "x": x, "y": y, "a": a, "b": b,
            "v0": v0, "v1": v1, "v2": v2,
            "w0": der["w0"], "w1": der["w1"], "w2": der["w2"], "w3": der["w3"],
        }
        d1 = [
            ["x^3", "x^2*y", "x*y^2", "y^3", "0", "0", "0", "0"],
            ["b-v0*x-w0*x^2", "0", "0", "0", "-y", "0", "0", "0"],
            ["-a-v1*x-w1*x^2", "b-v0*x-w0*x^2", "-w0*x*y", "-w0*y^2", "x", "-y", "0", "0"],
            ["-v2*x-w2*x^2", "-a-v1*x-w1*x^2", "b-v0*x-w1*x*y", "-v0*y-w1*y^2", "0", "x", "-y", "0"],
            ["-w3*x^2", "-v2*x-w2*x^2", "-a-v1*x-w2*x*y", "b-v1*y-w2*y^2", "0", "0", "x", "-y"],
            ["0", "-w3*x^2", "-v2*x-w3*x*y", "-a-v2*y-w3*y^2", "0", "0", "0", "x"],
        ]
        d2 = [
            ["-y", "0", "0"],
            ["x", "-y", "0"],
            ["0", "x", "-y"],
            ["0", "0", "x"],
            ["-b+v0*x+w0*x^2", "0", "0"],
            ["a+v1*x+w1*x^2", "-b+v0*x", "0"],
            ["v2*x+w2*x^2", "a+v1*x", "-b"],
            ["w3*x^2", "v2*x", "a"],
        ]
        ideal_res = make_complex(
            ring,
            [
                [l + 2, 4, 4, 4, 4, 4],
                [l + 5, l + 5, l + 5, l + 5, 5, 5, 5, 5],
                [l + 6, l + 6, l + 6],
            ],
            [d1, d2],
            env,
            augmentation=gens,
        )
        env_struct = {
            "x": x, "y": y, "a": a, "b": b, "p": ring.one(), "q": ring.one(),
            "pp": ring.zero(), "ap": params["ap"], "bp": params["bp"],
            "app": params["app"], "bpp": params["bpp"],
        }
        structure = _q4_structure(ring, env_struct, l, 0, 0)
        derived = dict(der)
        derived.update({"F2": F2, "F3": F3, "F4": F4})
        return CaseData(
            ideal=I,
            derived=derived,
            ideal_resolution=ideal_res,
            structure=structure,
            expected_degree=4,
            expected_chi=6 * l + 4,
        )


class QuadPrimitiveW(QuadPrimitive):
    """m = n = 0, w not decomposable: the two-extra-generator branch."""

    anchor = "lines/degree4-primitive-extra"

    def __init__(self, l: int = 0):
        super().__init__(l)
        if l < 0:
            raise ValueError("this branch needs l >= 0")
        self.case_id = f"a-q4-primitive-extra-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        l = self.l
        while True:
            a = random_binary_form(ring, l + 1, rng)
            b = random_binary_form(ring, l + 1, rng)
            if not coprime_binary(a, b):
                continue
            ap = random_binary_form(ring, 2 * l + 1, rng)
            bp = random_binary_form(ring, 2 * l + 1, rng)
            app = random_binary_form(ring, 3 * l + 1, rng)
            bpp = random_binary_form(ring, 3 * l + 1, rng)
            params = {
                "l": l, "m": 0, "n": 0, "a": a, "b": b, "ap": ap, "bp": bp,
                "app": app, "bpp": bpp,
                "p": ring.one(), "pp": ring.zero(), "q": ring.one(),
            }
            if (a * bp - ap * b).is_zero():
                continue  # quasiprimitive admissibility needs Delta1 != 0 here
            try:
                der = q4_derive(ring, params)
            except Inadmissible:
                continue
            if not der["w_decomposable"]:
                params["_derived"] = der
                return params

    def build(self, ring: Ring, params: Dict) -> CaseData:
        l = params["l"]
        der = params.get("_derived") or q4_derive(ring, params)
        if der["w_decomposable"]:
            raise Inadmissible("w decomposable; plain primitive branch applies")
        x, y = ring.variable(2), ring.variable(3)
        x0, x1 = ring.variable(0), ring.variable(1)
        a, b = params["a"], params["b"]
        v0, v1, v2 = der["v0"], der["v1"], der["v2"]
        w = der["w"]
        cubes = [a**3, a * a * b, a * b * b, b**3]
        w0j = binary_lift(x0 * w, cubes)
        w1j = binary_lift(x1 * w, cubes)
        if w0j is None or w1j is None:
            raise Inadmissible("E:wij lift failed")
        rhs = [-x1 * w0j[j] + x0 * w1j[j] for j in range(4)]
        gammas = kernel_lift_through_triangle(rhs, a, b)
        if all(gm.is_zero() for gm in gammas):
            raise Inadmissible("all gamma vanish; contradicts branch choice")
        for gm in gammas:
            if not (gm.is_zero() or gm.is_constant()):
                raise AssertionError("gamma coefficients must be constants")

        cubics = _power_monomials(ring, 3)
        quartics = _power_monomials(ring, 4)
        F2 = a * y - b * x
        F3 = F2 + v0 * x * x + v1 * x * y + v2 * y * y
        F40 = x0 * F3
        F41 = x1 * F3
        for j in range(4):
            F40 = F40 + w0j[j] * cubics[j]
            F41 = F41 + w1j[j] * cubics[j]
        G1, G2 = x * F3, y * F3
        gens = [F40, F41, G1, G2] + quartics
        I = Ideal(gens, saturated="yes")

        gq = gammas[0] * x * x + gammas[1] * x * y + gammas[2] * y * y
        vq = v0 * x * x + v1 * x * y + v2 * y * y
        theta = xy_coefficients(gq * vq, 4)

        env = {
            "x": x, "y": y, "x0": x0, "x1": x1, "a": a, "b": b,
            "v0": v0, "v1": v1, "v2": v2,
            "c0": gammas[0], "c1": gammas[1], "c2": gammas[2],
            "th0": theta[0], "th1": theta[1], "th2": theta[2],
            "th3": theta[3], "th4": theta[4],
        }
        for j in range(4):
            env[f"w0{j}"] = w0j[j]
            env[f"w1{j}"] = w1j[j]
        d1 = [
            ["-x1", "x", "y", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
            ["x0", "0", "0", "x", "y", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
            ["-c0*x-c1*y", "-x0", "0", "-x1", "0", "-y", "x^2", "x*y", "y^2", "0", "0", "0", "0", "0"],
            ["-c2*y", "0", "-x0", "0", "-x1", "x", "0", "0", "0", "y^2", "0", "0", "0", "0"],
            ["th0", "-w00", "0", "-w10", "0", "0", "b-v0*x", "0", "0", "0", "-y", "0", "0", "0"],
            ["th1", "-w01", "-w00", "-w11", "-w10", "0", "-a-v1*x", "b-v0*x", "0", "0", "x", "-y", "0", "0"],
            ["th2", "-w02", "-w01", "-w12", "-w11", "0", "-v2*x", "-a-v1*x", "b-v0*x", "-v0*y", "0", "x", "-y", "0"],
            ["th3", "-w03", "-w02", "-w13", "-w12", "0", "0", "-v2*x", "-a-v1*x", "b-v1*y", "0", "0", "x", "-y"],
            ["th4", "0", "-w03", "0", "-w13", "0", "0", "0", "-v2*x", "-a-v2*y", "0", "0", "0", "x"],
        ]
        d2 = [
            ["x", "y", "0", "0", "0", "0", "0"],
            ["x1", "0", "-y", "0", "0", "0", "0"],
            ["0", "x1", "x", "0", "0", "0", "0"],
            ["-x0", "0", "0", "-y", "0", "0", "0"],
            ["0", "-x0", "0", "x", "0", "0", "0"],
            ["c2*y", "0", "x0", "x1", "0", "0", "-y^2"],
            ["c0", "0", "0", "0", "-y", "0", "0"],
            ["c1", "c0", "0", "0", "x", "-y", "0"],
            ["c2", "c1", "0", "0", "0", "x", "-y"],
            ["0", "c2", "0", "0", "0", "0", "x"],
            ["0", "c0*v0", "w00", "w10", "-b+v0*x", "0", "0"],
            ["0", "c0*v1+c1*v0", "w01", "w11", "a+v1*x", "-b+v0*x", "0"],
            ["0", "c0*v2+c1*v1", "w02", "w12", "v2*x", "a+v1*x", "-b"],
            ["0", "c1*v2", "w03", "w13", "0", "v2*x", "a"],
        ]
        d3 = [["-y"], ["x"], ["-x1"], ["x0"], ["-c0"], ["-c1"], ["-c2"]]
        ideal_res = make_complex(
            ring,
            [
                [l + 3, l + 3, l + 3, l + 3, 4, 4, 4, 4, 4],
                [l + 4] * 6 + [l + 5] * 4 + [5] * 4,
                [l + 5] * 4 + [l + 6] * 3,
                [l + 6],
            ],
            [d1, d2, d3],
            env,
            augmentation=gens,
        )
        env_struct = {
            "x": x, "y": y, "a": a, "b": b, "p": ring.one(), "q": ring.one(),
            "pp": ring.zero(), "ap": params["ap"], "bp": params["bp"],
            "app": params["app"], "bpp": params["bpp"],
        }
        structure = _q4_structure(ring, env_struct, l, 0, 0)
        derived = dict(der)
        derived.update(
            {"F2": F2, "F3": F3, "F40": F40, "F41": F41, "G1": G1, "G2": G2}
        )
        for i in range(3):
            derived[f"gamma{i}"] = gammas[i]

        def minimized_shape_check() -> bool:
            from ..graded import minimize

            got = minimize(ideal_res).betti().table
            want: Dict[Tuple[int, int], int] = {}
            for key, mult in [
                ((0, l + 3), 4), ((0, 4), 5),
                ((1, l + 4), 6), ((1, l + 5), 2), ((1, 5), 4),
                ((2, l + 5), 2), ((2, l + 6), 2),
            ]:
                want[key] = want.get(key, 0) + mult
            return got == want

        return CaseData(
            ideal=I,
            derived=derived,
            ideal_resolution=ideal_res,
            structure=structure,
            expected_degree=4,
            expected_chi=6 * l + 4,
            nonminimal_display=True,
            extra_checks=[("minimized_shape", minimized_shape_check)],
        )


# ---------------------------------------------------------------------------
# degree 4: thick structures
# ---------------------------------------------------------------------------


def _thick_build(ring: Ring, params: Dict, case_data_extra=None) -> CaseData:
    l = params["l"]
    p0, p1, p2 = params["p0"], params["p1"], params["p2"]
    if l < -2:
        raise Inadmissible("l >= -2 required")
    if not no_common_zero([p0, p1, p2]):
        raise Inadmissible("p0, p1, p2 must have no common zero")
    x, y = ring.variable(2), ring.variable(3)
    cols = syzygy_of_row([p0, p1, p2])
    if len(cols) != 2:
        raise Inadmissible("kernel of (p0,p1,p2) is not rank 2")
    cols.sort(key=lambda col: max(c.homogeneous_degree() for c in col if not c.is_zero()))
    (f0, f1, f2), (g0, g1, g2) = cols
    m = next(c for c in (f0, f1, f2) if not c.is_zero()).homogeneous_degree()
    n = next(c for c in (g0, g1, g2) if not c.is_zero()).homogeneous_degree()
    F = f0 * x * x + f1 * x * y + f2 * y * y
    G = g0 * x * x + g1 * x * y + g2 * y * y
    cubics = _power_monomials(ring, 3)
    gens = [F, G] + cubics
    I = Ideal(gens, saturated="yes")
    env = {
        "x": x, "y": y, "p0": p0, "p1": p1, "p2": p2,
        "f0": f0, "f1": f1, "f2": f2, "g0": g0, "g1": g1, "g2": g2,
    }
    d1 = [
        ["x", "y", "0", "0", "0", "0", "0"],
        ["0", "0", "x", "y", "0", "0", "0"],
        ["-f0", "0", "-g0", "0", "-y", "0", "0"],
        ["-f1", "-f0", "-g1", "-g0", "x", "-y", "0"],
        ["-f2", "-f1", "-g2", "-g1", "0", "x", "-y"],
        ["0", "-f2", "0", "-g2", "0", "0", "x"],
    ]
    d2 = [
        ["-y", "0"],
        ["x", "0"],
        ["0", "-y"],
        ["0", "x"],
        ["f0", "g0"],
        ["f1", "g1"],
        ["f2", "g2"],
    ]
    ideal_res = make_complex(
        ring,
        [
            [m + 2, n + 2, 3, 3, 3, 3],
            [m + 3, m + 3, n + 3, n + 3, 4, 4, 4],
            [m + 4, n + 4],
        ],
        [d1, d2],
        env,
        augmentation=gens,
    )
    structure = make_complex(
        ring,
        [[0, -l], [2, 2, 2, 1 - l, 1 - l], [3, 3, 2 - l]],
        [
            [
                ["x^2", "x*y", "y^2", "0", "0"],
                ["-p0", "-p1", "-p2", "x", "y"],
            ],
            [
                ["-y", "0", "0"],
                ["x", "-y", "0"],
                ["0", "x", "0"],
                ["p1", "p2", "-y"],
                ["-p0", "-p1", "x"],
            ],
        ],
        env,
    )
    derived = {"F": F, "G": G, "f0": f0, "f1": f1, "f2": f2,
               "g0": g0, "g1": g1, "g2": g2, "m": m, "n": n}
    extra = case_data_extra(derived) if case_data_extra else []
    return CaseData(
        ideal=I,
        derived=derived,
        ideal_resolution=ideal_res,
        structure=structure,
        expected_degree=4,
        expected_chi=l + 2,
        extra_checks=extra,
    )


class QuadThick(CaseFamily):
    anchor = "lines/degree4-thick"

    def __init__(self, l: int = 0):
        self.l = l
        self.case_id = f"a-q4-thick-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        l = self.l
        while True:
            p0 = random_binary_form(ring, l + 2, rng)
            p1 = random_binary_form(ring, l + 2, rng)
            p2 = random_binary_form(ring, l + 2, rng)
            if not no_common_zero([p0, p1, p2]):
                continue
            if (p1 * p1 - p0 * p2).is_zero():
                continue  # that is the everywhere-CM degenerate family
            return {"l": l, "p0": p0, "p1": p1, "p2": p2}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        return _thick_build(ring, params)


class QuadThickCM(CaseFamily):
    """p_i = products of squares of a coprime pair: I(W) = I(L)·I(X)."""

    anchor = "lines/degree4-thick-cm"

    def __init__(self, lp: int = 0):
        self.lp = lp
        self.case_id = f"a-q4-thick-cm-lp{lp}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        while True:
            q0 = random_binary_form(ring, self.lp + 1, rng)
            q1 = random_binary_form(ring, self.lp + 1, rng)
            if coprime_binary(q0, q1):
                return {
                    "l": 2 * self.lp,
                    "q0": q0, "q1": q1,
                    "p0": q0 * q0, "p1": q0 * q1, "p2": q1 * q1,
                }

    def build(self, ring: Ring, params: Dict) -> CaseData:
        q0, q1 = params["q0"], params["q1"]
        x, y = ring.variable(2), ring.variable(3)

        def extra(derived):
            F2x = q0 * y - q1 * x
            IX = Ideal([F2x, x * x, x * y, y * y])
            IL = line_ideal(ring)

            def product_identity() -> bool:
                return product(IL, IX).equals(
                    Ideal([derived["F"], derived["G"]] + _power_monomials(ring, 3))
                )

            return [("thick_cm_product", product_identity)]

        return _thick_build(ring, params, case_data_extra=extra)
