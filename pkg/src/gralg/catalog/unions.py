"""Reducible degree <= 4 curves with a multiple line as a component.

Coordinates: L1 = {x2 = x3 = 0}, L1' = {x0 = x1 = 0}, L2 = {x1 = x3 = 0},
L2' = {x0 = x2 = 0}, L3 = {x1 = x2 = 0}, L3' = {x0 = x3 = 0}.  Every union
ideal built from a displayed generator formula is cross-checked against the
intersection of the component ideals computed independently by elimination.
"""

from __future__ import annotations

import random
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..gb import Ideal, intersect, product
from ..poly import Poly, Ring
from .base import (
    CaseData,
    CaseFamily,
    Inadmissible,
    coprime_binary,
    divides_var,
    eval_at_x1_zero,
    make_complex,
    random_binary_form,
    var_quotient,
)
from .lines import _power_monomials, line_ideal


def _vars(ring: Ring):
    return [ring.variable(i) for i in range(4)]


def component_intersection(ideals: Sequence[Ideal]) -> Ideal:
    out = ideals[0]
    for J in ideals[1:]:
        out = intersect(out, J)
    return out


def double_line_ideal(ring: Ring, a: Poly, b: Poly) -> Ideal:
    x0, x1, x2, x3 = _vars(ring)
    F2 = a * x3 - b * x2
    return Ideal([F2, x2 * x2, x2 * x3, x3 * x3], saturated="yes")


def chi_of_union(components: Sequence[Tuple[Ideal, int]]) -> int:
    """chi(O) of a union, built up two components at a time through the
    exact sequence 0 -> S/(I∩J) -> S/I + S/J -> S/(I+J) -> 0."""
    from ..gb import intersect
    from ..resolve import hilbert

    current, chi = components[0]
    for nxt, chi_next in components[1:]:
        meet = Ideal(list(current.generators) + list(nxt.generators))
        h = hilbert(meet)
        length = h.degree if h.dimension == 1 else 0
        chi = chi + chi_next - length
        current = intersect(current, nxt)
    return chi


# ---------------------------------------------------------------------------
# first-infinitesimal-neighbourhood unions (fixed ideals, displayed data)
# ---------------------------------------------------------------------------


class FixedIdealCase(CaseFamily):
    """A case with no continuous parameters: one deterministic build."""

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        return {}


class L1NbhdCupL1Prime(FixedIdealCase):
    case_id = "b-l1nbhd-cup-l1prime"
    anchor = "unions/double-nbhd-disjoint-line"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        gens = [
            x0 * x2 * x2, x0 * x2 * x3, x0 * x3 * x3,
            x1 * x2 * x2, x1 * x2 * x3, x1 * x3 * x3,
        ]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [Ideal([x2 * x2, x2 * x3, x3 * x3]), Ideal([x0, x1])]
        )
        env = {f"x{i}": v for i, v in enumerate(_vars(ring))}
        d1 = [
            ["-x3", "0", "0", "0", "-x1", "0", "0"],
            ["x2", "-x3", "0", "0", "0", "-x1", "0"],
            ["0", "x2", "0", "0", "0", "0", "-x1"],
            ["0", "0", "-x3", "0", "x0", "0", "0"],
            ["0", "0", "x2", "-x3", "0", "x0", "0"],
            ["0", "0", "0", "x2", "0", "0", "x0"],
        ]
        d2 = [
            ["-x1", "0"],
            ["0", "-x1"],
            ["x0", "0"],
            ["0", "x0"],
            ["x3", "0"],
            ["-x2", "x3"],
            ["0", "-x2"],
        ]
        res = make_complex(
            ring,
            [[3] * 6, [4] * 7, [5, 5]],
            [d1, d2],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=4,
            expected_chi=1 + 1,  # disjoint: chi(O on the fat line) + chi(O_line)
        )


class L1NbhdCupL(CaseFamily):
    """L1^(1) union a coplanar line {x1 + c*x2 = x3 = 0}."""

    anchor = "unions/double-nbhd-meeting-line"

    def __init__(self, c: Optional[int] = None):
        self.c = c
        self.case_id = "b-l1nbhd-cup-l" + ("" if c is None else f"-c{c}")

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        c = self.c if self.c is not None else rng.randrange(0, 5)
        return {"c": c}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        ell = x1 + ring.constant(params["c"]) * x2
        gens = [x2 * x3, x3 * x3, ell * x2 * x2]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [Ideal([x2 * x2, x2 * x3, x3 * x3]), Ideal([ell, x3])]
        )
        env = {"x2": x2, "x3": x3, "ell": ell}
        res = make_complex(
            ring,
            [[2, 2, 3], [3, 4]],
            [[["-x3", "-ell*x2"], ["x2", "0"], ["0", "x3"]]],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=4,
            expected_chi=chi_of_union(
                [(Ideal([x2 * x2, x2 * x3, x3 * x3]), 1), (Ideal([ell, x3]), 1)]
            ),
        )


class L1Nbhd2CupL1Prime(FixedIdealCase):
    case_id = "b-l1nbhd2-cup-l1prime"
    anchor = "unions/triple-nbhd-disjoint-line"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        cubics = _power_monomials(ring, 3)
        gens = [x0 * c for c in cubics] + [x1 * c for c in cubics]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [Ideal(cubics), Ideal([x0, x1])]
        )
        env = {f"x{i}": v for i, v in enumerate(_vars(ring))}
        d1 = [
            ["-x3", "0", "0", "0", "0", "0", "-x1", "0", "0", "0"],
            ["x2", "-x3", "0", "0", "0", "0", "0", "-x1", "0", "0"],
            ["0", "x2", "-x3", "0", "0", "0", "0", "0", "-x1", "0"],
            ["0", "0", "x2", "0", "0", "0", "0", "0", "0", "-x1"],
            ["0", "0", "0", "-x3", "0", "0", "x0", "0", "0", "0"],
            ["0", "0", "0", "x2", "-x3", "0", "0", "x0", "0", "0"],
            ["0", "0", "0", "0", "x2", "-x3", "0", "0", "x0", "0"],
            ["0", "0", "0", "0", "0", "x2", "0", "0", "0", "x0"],
        ]
        d2 = [
            ["-x1", "0", "0"],
            ["0", "-x1", "0"],
            ["0", "0", "-x1"],
            ["x0", "0", "0"],
            ["0", "x0", "0"],
            ["0", "0", "x0"],
            ["x3", "0", "0"],
            ["-x2", "x3", "0"],
            ["0", "-x2", "x3"],
            ["0", "0", "-x2"],
        ]
        res = make_complex(
            ring,
            [[4] * 8, [5] * 10, [6] * 3],
            [d1, d2],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=7,
            expected_chi=-2 + 1,  # disjoint union with the triple neighbourhood
        )


class L1Nbhd2CupL2(FixedIdealCase):
    case_id = "b-l1nbhd2-cup-l2"
    anchor = "unions/triple-nbhd-meeting-line"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        gens = [x2 * x2 * x3, x2 * x3 * x3, x3 ** 3, x1 * x2 ** 3]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [Ideal(_power_monomials(ring, 3)), Ideal([x1, x3])]
        )
        env = {"x1": x1, "x2": x2, "x3": x3}
        res = make_complex(
            ring,
            [[3, 3, 3, 4], [4, 4, 5]],
            [
                [
                    ["-x3", "0", "-x1*x2"],
                    ["x2", "-x3", "0"],
                    ["0", "x2", "0"],
                    ["0", "0", "x3"],
                ]
            ],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=7,
            expected_chi=chi_of_union(
                [(Ideal(_power_monomials(ring, 3)), -2), (Ideal([x1, x3]), 1)]
            ),
        )


class L1NbhdCupL2CupL2Prime(FixedIdealCase):
    case_id = "b-l1nbhd-cup-l2-cup-l2prime"
    anchor = "unions/double-nbhd-two-lines-skew"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        gens = [x2 * x3, x0 * x3 * x3, x1 * x2 * x2]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [
                Ideal([x2 * x2, x2 * x3, x3 * x3]),
                Ideal([x1, x3]),
                Ideal([x0, x2]),
            ]
        )
        env = {"x0": x0, "x1": x1, "x2": x2, "x3": x3}
        res = make_complex(
            ring,
            [[2, 3, 3], [4, 4]],
            [[["-x0*x3", "-x1*x2"], ["x2", "0"], ["0", "x3"]]],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=5,
            expected_chi=chi_of_union(
                [
                    (Ideal([x2 * x2, x2 * x3, x3 * x3]), 1),
                    (Ideal([x1, x3]), 1),
                    (Ideal([x0, x2]), 1),
                ]
            ),
        )


class L1NbhdCupL2CupL3(FixedIdealCase):
    case_id = "b-l1nbhd-cup-l2-cup-l3"
    anchor = "unions/double-nbhd-two-lines-meeting"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        gens = [x2 * x3, x1 * x2 * x2, x1 * x3 * x3]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [
                Ideal([x2 * x2, x2 * x3, x3 * x3]),
                Ideal([x1, x3]),
                Ideal([x1, x2]),
            ]
        )
        env = {"x1": x1, "x2": x2, "x3": x3}
        res = make_complex(
            ring,
            [[2, 3, 3], [4, 4]],
            [[["-x1*x2", "-x1*x3"], ["x3", "0"], ["0", "x2"]]],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=5,
            expected_chi=chi_of_union(
                [
                    (Ideal([x2 * x2, x2 * x3, x3 * x3]), 1),
                    (Ideal([x1, x3]), 1),
                    (Ideal([x1, x2]), 1),
                ]
            ),
        )


class L1NbhdCupL2CupL1Prime(FixedIdealCase):
    case_id = "b-l1nbhd-cup-l2-cup-l1prime"
    anchor = "unions/double-nbhd-meeting-plus-skew"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        from ..liaison import basic_double_link

        x0, x1, x2, x3 = _vars(ring)
        gens = [
            x0 * x2 * x3, x0 * x3 * x3, x1 * x2 * x2, x1 * x2 * x3, x1 * x3 * x3,
        ]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [
                Ideal([x2 * x2, x2 * x3, x3 * x3]),
                Ideal([x1, x3]),
                Ideal([x0, x1]),
            ]
        )
        env = {"x0": x0, "x1": x1, "x2": x2, "x3": x3}
        d1 = [
            ["-x3", "0", "0", "-x1", "0"],
            ["x2", "0", "0", "0", "-x1"],
            ["0", "-x3", "0", "0", "0"],
            ["0", "x2", "-x3", "x0", "0"],
            ["0", "0", "x2", "0", "x0"],
        ]
        d2 = [["-x1"], ["0"], ["x0"], ["x3"], ["-x2"]]
        res = make_complex(
            ring,
            [[3] * 5, [4] * 5, [5]],
            [d1, d2],
            env,
            augmentation=gens,
        )

        def bdl_identity():
            lines2 = Ideal([x0 * x2, x0 * x3, x1 * x2, x1 * x3])
            J, _c = basic_double_link(lines2, x1 * x2 * x2, x3)
            return J.equals(I)

        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=5,
            expected_chi=chi_of_union(
                [
                    (Ideal([x2 * x2, x2 * x3, x3 * x3]), 1),
                    (Ideal([x1, x3]), 1),
                    (Ideal([x0, x1]), 1),
                ]
            ),
            extra_checks=[("basic_double_link_match", bdl_identity)],
        )


class L1NbhdCupLCupL1Prime(CaseFamily):
    """L1^(1) ∪ {ell = x3 = 0} ∪ L1', ell = x1 + c*x2, c != 0."""

    anchor = "unions/double-nbhd-coplanar-plus-skew"

    def __init__(self, c: int = 1):
        self.c = c
        self.case_id = f"b-l1nbhd-cup-l-cup-l1prime-c{c}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        return {"c": self.c}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        c = params["c"]
        if c == 0:
            raise Inadmissible("c must be nonzero")
        ell = x1 + ring.constant(c) * x2
        gens = [
            x0 * x2 * x3, x0 * x3 * x3, x1 * x2 * x3, x1 * x3 * x3,
            x0 * ell * x2 * x2, x1 * ell * x2 * x2,
        ]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [
                Ideal([x2 * x2, x2 * x3, x3 * x3]),
                Ideal([ell, x3]),
                Ideal([x0, x1]),
            ]
        )
        env = {"x0": x0, "x1": x1, "x2": x2, "x3": x3, "ell": ell}
        d1 = [
            ["-x1", "0", "-x3", "0", "0", "-ell*x2", "0"],
            ["0", "-x1", "x2", "0", "0", "0", "0"],
            ["x0", "0", "0", "-x3", "0", "0", "-ell*x2"],
            ["0", "x0", "0", "x2", "0", "0", "0"],
            ["0", "0", "0", "0", "-x1", "x3", "0"],
            ["0", "0", "0", "0", "x0", "0", "x3"],
        ]
        d2 = [
            ["-x3", "-ell*x2"],
            ["x2", "0"],
            ["x1", "0"],
            ["-x0", "0"],
            ["0", "x3"],
            ["0", "x1"],
            ["0", "-x0"],
        ]
        res = make_complex(
            ring,
            [[3, 3, 3, 3, 4, 4], [4, 4, 4, 4, 5, 5, 5], [5, 6]],
            [d1, d2],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=5,
            expected_chi=chi_of_union(
                [
                    (Ideal([x2 * x2, x2 * x3, x3 * x3]), 1),
                    (Ideal([ell, x3]), 1),
                    (Ideal([x0, x1]), 1),
                ]
            ),
        )


class L1NbhdCupL1PrimeCupLPrime(CaseFamily):
    """L1^(1) ∪ L1' ∪ {ell0 = x1 = 0}, ell0 = x0 + c*x2, c != 0."""

    anchor = "unions/double-nbhd-two-meeting-lines-far"

    def __init__(self, c: int = 1):
        self.c = c
        self.case_id = f"b-l1nbhd-cup-l1prime-cup-lprime-c{c}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        return {"c": self.c}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        c = params["c"]
        if c == 0:
            raise Inadmissible("c must be nonzero")
        ell0 = x0 + ring.constant(c) * x2
        gens = [
            x1 * x2 * x2, x1 * x2 * x3, x1 * x3 * x3,
            x0 * ell0 * x2 * x2, x0 * ell0 * x2 * x3, x0 * ell0 * x3 * x3,
        ]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [
                Ideal([x2 * x2, x2 * x3, x3 * x3]),
                Ideal([x0, x1]),
                Ideal([ell0, x1]),
            ]
        )
        env = {"x0": x0, "x1": x1, "x2": x2, "x3": x3, "q0": x0 * ell0}
        d1 = [
            ["-x3", "0", "0", "0", "-q0", "0", "0"],
            ["x2", "-x3", "0", "0", "0", "-q0", "0"],
            ["0", "x2", "0", "0", "0", "0", "-q0"],
            ["0", "0", "-x3", "0", "x1", "0", "0"],
            ["0", "0", "x2", "-x3", "0", "x1", "0"],
            ["0", "0", "0", "x2", "0", "0", "x1"],
        ]
        d2 = [
            ["q0", "0"],
            ["0", "q0"],
            ["-x1", "0"],
            ["0", "-x1"],
            ["-x3", "0"],
            ["x2", "-x3"],
            ["0", "x2"],
        ]
        res = make_complex(
            ring,
            [[3, 3, 3, 4, 4, 4], [4, 4, 5, 5, 5, 5, 5], [6, 6]],
            [d1, d2],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=5,
            expected_chi=chi_of_union(
                [
                    (Ideal([x2 * x2, x2 * x3, x3 * x3]), 1),
                    (Ideal([x0, x1]), 1),
                    (Ideal([ell0, x1]), 1),
                ]
            ),
        )


class L1CupL1PrimeCupL1Second(FixedIdealCase):
    """Three mutually skew lines on the smooth quadric."""

    case_id = "b-l1-cup-l1prime-cup-l1second"
    anchor = "unions/three-skew-lines"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        ell0 = x0 - x2
        ell1 = x1 - x3
        q = x0 * x3 - x1 * x2
        gens = [q, x0 * ell0 * x2, x0 * ell0 * x3, x1 * ell1 * x2, x1 * ell1 * x3]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [line_ideal(ring), Ideal([x0, x1]), Ideal([ell0, ell1])]
        )
        env = {
            "x0": x0, "x1": x1, "x2": x2, "x3": x3,
            "l0": ell0, "l1": ell1,
        }
        d1 = [
            ["-x0*l0", "x0*x1", "-x1*l1", "0", "l0*x3+x1*x2", "0"],
            ["-x1", "0", "0", "-x3", "0", "0"],
            ["x0", "-x1", "0", "x2", "-x3", "0"],
            ["0", "x0", "-x1", "0", "x2", "-x3"],
            ["0", "0", "x0", "0", "0", "x2"],
        ]
        d2 = [
            ["-x3", "0"],
            ["x2", "-x3"],
            ["0", "x2"],
            ["x1", "0"],
            ["-x0", "x1"],
            ["0", "-x0"],
        ]
        res = make_complex(
            ring,
            [[2, 3, 3, 3, 3], [4] * 6, [5, 5]],
            [d1, d2],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=3,
            expected_chi=3,
        )


class L1NbhdCupL1PrimeCupL1Second(FixedIdealCase):
    """First neighbourhood of L1 union the two other rulings; checked also
    through the mapping cone over multiplication by (x2, x3)."""

    case_id = "b-l1nbhd-cup-l1prime-cup-l1second"
    anchor = "unions/double-nbhd-two-skew-lines"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        ell0 = x0 - x2
        ell1 = x1 - x3
        q = x0 * x3 - x1 * x2
        gens = [
            x2 * q, x3 * q,
            x0 * ell0 * x2 * x2, x0 * ell0 * x2 * x3, x0 * ell0 * x3 * x3,
            x1 * ell1 * x2 * x3, x1 * ell1 * x3 * x3,
        ]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [
                Ideal([x2 * x2, x2 * x3, x3 * x3]),
                Ideal([x0, x1]),
                Ideal([ell0, ell1]),
            ]
        )
        env = {
            "x0": x0, "x1": x1, "x2": x2, "x3": x3,
            "l0": ell0, "l1": ell1,
        }
        d1 = [
            ["-x3", "0", "0", "0", "0", "-x0*l0", "0", "0", "0"],
            ["x2", "0", "0", "l0*x3+x1*x2", "0", "0", "-x0*l0", "x0*x1", "-x1*l1"],
            ["0", "-x3", "0", "0", "0", "-x1", "0", "0", "0"],
            ["0", "x2", "-x3", "0", "0", "x0", "-x1", "0", "0"],
            ["0", "0", "x2", "-x3", "0", "0", "x0", "-x1", "0"],
            ["0", "0", "0", "x2", "-x3", "0", "0", "x0", "-x1"],
            ["0", "0", "0", "0", "x2", "0", "0", "0", "x0"],
        ]
        d2 = [
            ["x0*l0", "0", "0"],
            ["x1", "0", "0"],
            ["-x0", "x1", "0"],
            ["0", "-x0", "x1"],
            ["0", "0", "-x0"],
            ["-x3", "0", "0"],
            ["x2", "-x3", "0"],
            ["0", "x2", "-x3"],
            ["0", "0", "x2"],
        ]
        res = make_complex(
            ring,
            [[3, 3, 4, 4, 4, 4, 4], [4, 5, 5, 5, 5, 5, 5, 5, 5], [6, 6, 6]],
            [d1, d2],
            env,
            augmentation=gens,
        )

        def cone_check():
            from ..graded import GradedMap, mapping_cone, minimize
            from ..resolve import minimal_free_resolution

            pair = component_intersection([Ideal([x0, x1]), Ideal([ell0, ell1])])
            triple = component_intersection([pair, line_ideal(ring)])
            src = minimal_free_resolution(Ideal(pair.minimal_generators())).twist(-2)
            tgt_res = minimal_free_resolution(Ideal(triple.minimal_generators()))
            # chain map over phi0 = (-x3; x2) : pair(-2) -> 2 * triple(-1)
            from ..graded import Complex, FreeModule
            from ..modgb import Vec, module_lift
            from ..resolve import map_columns

            tgt = Complex(
                [m.twist(-1).direct_sum(m.twist(-1)) for m in tgt_res.modules],
                [
                    GradedMap(
                        d.source.twist(-1).direct_sum(d.source.twist(-1)),
                        d.target.twist(-1).direct_sum(d.target.twist(-1)),
                        [
                            list(row) + [ring.zero()] * d.source.rank
                            for row in d.entries
                        ]
                        + [
                            [ring.zero()] * d.source.rank + list(row)
                            for row in d.entries
                        ],
                        check=False,
                    )
                    for d in tgt_res.maps
                ],
                check=False,
            )
            # phi in homological degree 0: generators of pair(-2) map to
            # (-x3*g, x2*g) expressed in the doubled generator set
            pair_gens = pair.minimal_generators()
            triple_gens = triple.minimal_generators()
            tcols = [Vec.from_polys([g], ring) for g in triple_gens]
            phi_maps = []
            cols0 = []
            for g in pair_gens:
                c1 = module_lift(Vec.from_polys([-x3 * g], ring), tcols)
                c2 = module_lift(Vec.from_polys([x2 * g], ring), tcols)
                cols0.append([*c1, *c2])
            phi0 = GradedMap(
                src.modules[0],
                tgt.modules[0],
                [[cols0[j][i] for j in range(len(pair_gens))] for i in range(2 * len(triple_gens))],
            )
            phi_maps.append(phi0)
            # lift the chain map up the resolutions
            for k in range(len(src.maps)):
                prev = phi_maps[k]
                want = prev.compose(src.maps[k])
                tgt_cols = map_columns(tgt.maps[k])
                cols = []
                for j in range(want.source.rank):
                    cols.append(module_lift(
                        Vec.from_polys(want.column(j), ring), tgt_cols
                    ))
                phi_maps.append(
                    GradedMap(
                        src.modules[k + 1],
                        tgt.maps[k].source,
                        [[cols[j][i] for j in range(len(cols))] for i in range(tgt.maps[k].source.rank)],
                    )
                )
            cone = mapping_cone(phi_maps, src, tgt)
            return minimize(cone).betti() == minimize(res).betti()

        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=5,
            expected_chi=1 + 1 + 1,  # pairwise disjoint components
            extra_checks=[("mapping_cone_shape", cone_check)],
        )


class L1NbhdCupL1PrimeNbhd(FixedIdealCase):
    """Product of the two neighbourhood ideals; tensor resolution check."""

    case_id = "b-l1nbhd-cup-l1prime-nbhd"
    anchor = "unions/two-double-nbhds"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        A = Ideal([x0 * x0, x0 * x1, x1 * x1])
        B = Ideal([x2 * x2, x2 * x3, x3 * x3])
        I = product(B, A)
        I = Ideal(I.generators, saturated="yes")
        direct = component_intersection([A, B])

        def tensor_betti():
            from ..resolve import minimal_free_resolution

            got = minimal_free_resolution(I).betti().table
            want = {
                (0, 4): 9, (1, 5): 12, (2, 6): 4,
            }
            return got == want

        return CaseData(
            ideal=I,
            direct_ideal=direct,
            expected_degree=6,
            expected_chi=1 + 1,  # disjoint fat lines
            extra_checks=[("tensor_resolution_shape", tensor_betti)],
        )


class L1NbhdCupL2Nbhd(FixedIdealCase):
    case_id = "b-l1nbhd-cup-l2nbhd"
    anchor = "unions/two-double-nbhds-meeting"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        gens = [x3 * x3, x1 * x2 * x3, x1 * x1 * x2 * x2]
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [
                Ideal([x2 * x2, x2 * x3, x3 * x3]),
                Ideal([x1 * x1, x1 * x3, x3 * x3]),
            ]
        )
        env = {"x1": x1, "x2": x2, "x3": x3}
        res = make_complex(
            ring,
            [[2, 3, 4], [4, 5]],
            [
                [
                    ["-x1*x2", "0"],
                    ["x3", "-x1*x2"],
                    ["0", "x3"],
                ]
            ],
            env,
            augmentation=gens,
        )
        return CaseData(
            ideal=I,
            ideal_resolution=res,
            direct_ideal=direct,
            expected_degree=6,
            expected_chi=chi_of_union(
                [
                    (Ideal([x2 * x2, x2 * x3, x3 * x3]), 1),
                    (Ideal([x1 * x1, x1 * x3, x3 * x3]), 1),
                ]
            ),
        )


# ---------------------------------------------------------------------------
# parametric unions: a double line plus simple curves
# ---------------------------------------------------------------------------


class DoubleLineUnion(CaseFamily):
    """Shared sampling for X (double structure on L1, parameters a, b)."""

    def __init__(self, l: int = 0, want_x1_divides_b: Optional[bool] = None):
        self.l = l
        self.want = want_x1_divides_b

    def sample_ab(self, ring: Ring, rng: random.Random):
        l = self.l
        x1 = ring.variable(1)
        while True:
            a = random_binary_form(ring, l + 1, rng)
            if self.want is True:
                b = (
                    x1 * random_binary_form(ring, l, rng)
                    if l >= 0
                    else ring.zero()
                )
            else:
                b = random_binary_form(ring, l + 1, rng)
            if self.want is True and b.is_zero() and l >= 0:
                continue
            if self.want is False and divides_var(x1, b):
                continue
            if self.want is True and not divides_var(x1, b):
                continue
            if l == -1 and self.want is True:
                # b = 0 is the only multiple of x1 in degree 0
                b = ring.zero()
                if a.is_zero():
                    continue
                return a, b
            if coprime_binary(a, b):
                return a, b


class XCupL1Prime(DoubleLineUnion):
    """X ∪ L1' (disjoint line), l >= 0."""

    anchor = "unions/double-line-plus-skew-line"

    def __init__(self, l: int = 0):
        super().__init__(l)
        if l < 0:
            raise ValueError("this formula needs l >= 0")
        self.case_id = f"b-x-cup-l1prime-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        a, b = self.sample_ab(ring, rng)
        return {"l": self.l, "a": a, "b": b}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b = params["l"], params["a"], params["b"]
        if l < 0:
            raise Inadmissible("l >= 0 required")
        if not coprime_binary(a, b):
            raise Inadmissible("a, b coprime required")
        F2 = a * x3 - b * x2
        sq = [x2 * x2, x2 * x3, x3 * x3]
        gens = [F2] + [v * m for v in (x0, x1) for m in sq]
        I = Ideal(gens, saturated="yes")
        X = double_line_ideal(ring, a, b)
        direct = component_intersection([X, Ideal([x0, x1])])
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            expected_degree=3,
            expected_chi=(l + 2) + 1,
            branch="",
        )


class XCupL(DoubleLineUnion):
    """X ∪ {ell = x3 = 0}, ell = x1 + c x2; branch on x1 | b."""

    anchor = "unions/double-line-plus-meeting-line"

    def __init__(self, l: int = 0, want_x1_divides_b: bool = False, c: int = 1):
        super().__init__(l, want_x1_divides_b)
        self.c = c
        tag = "a" if want_x1_divides_b else "b"
        self.case_id = f"b-x-cup-l-{tag}-l{l}-c{c}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        a, b = self.sample_ab(ring, rng)
        return {"l": self.l, "a": a, "b": b, "c": self.c}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b, c = params["l"], params["a"], params["b"], params["c"]
        ell = x1 + ring.constant(c) * x2
        F2 = a * x3 - b * x2
        x1_divides = divides_var(x1, b)
        if x1_divides:
            b1 = var_quotient(x1, b) if not b.is_zero() else ring.zero()
            lead = F2 - ring.constant(c) * b1 * x2 * x2
            branch = "a"
        else:
            lead = ell * F2
            branch = "b"
        gens = [lead, x2 * x3, x3 * x3, ell * x2 * x2]
        I = Ideal(gens, saturated="yes")
        X = double_line_ideal(ring, a, b)
        direct = component_intersection([X, Ideal([ell, x3])])
        env = {
            "x1": x1, "x2": x2, "x3": x3, "a": a, "b": b, "ell": ell,
            "b1": var_quotient(x1, b) if x1_divides and not b.is_zero() else ring.zero(),
        }
        if branch == "a":
            structure = make_complex(
                ring,
                [[0, 1 - l], [1, 2, 2 - l, 2 - l], [3, 3 - l]],
                [
                    [
                        ["x3", "ell*x2", "0", "0"],
                        ["-b1", "-a", "x2", "x3"],
                    ],
                    [
                        ["-ell*x2", "0"],
                        ["x3", "0"],
                        ["-ell*b1", "-x3"],
                        ["a", "x2"],
                    ],
                ],
                env,
            )
        else:
            structure = make_complex(
                ring,
                [[0, -l], [1, 2, 1 - l, 1 - l], [3, 2 - l]],
                [
                    [
                        ["x3", "ell*x2", "0", "0"],
                        ["-b", "-x1*a", "x2", "x3"],
                    ],
                    [
                        ["-ell*x2", "0"],
                        ["x3", "0"],
                        ["-ell*b", "-x3"],
                        ["x1*a", "x2"],
                    ],
                ],
                env,
            )
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            structure=structure,
            expected_degree=3,
            expected_chi=chi_of_union([(X, l + 2), (Ideal([ell, x3]), 1)]),
            branch=branch,
        )


class XCupL2CupL2Prime(DoubleLineUnion):
    anchor = "unions/double-line-plus-two-skew-lines"

    BRANCHES = {
        "a": (True, True),
        "b": (True, False),
        "c": (False, True),
        "d": (False, False),
    }

    def __init__(self, l: int = 0, branch: str = "d"):
        want_b, self.want_a = self.BRANCHES[branch]
        super().__init__(l, want_b)
        self.branch_name = branch
        self.case_id = f"b-x-cup-l2-cup-l2prime-{branch}-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        x0 = ring.variable(0)
        while True:
            a, b = self.sample_ab(ring, rng)
            if divides_var(x0, a) != self.want_a:
                continue
            return {"l": self.l, "a": a, "b": b}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b = params["l"], params["a"], params["b"]
        F2 = a * x3 - b * x2
        div1 = divides_var(x1, b)
        div0 = divides_var(x0, a)
        base = [x2 * x3, x0 * x3 * x3, x1 * x2 * x2]
        if div1 and div0:
            lead, branch = F2, "a"
        elif div1:
            lead, branch = x0 * F2, "b"
        elif div0:
            lead, branch = x1 * F2, "c"
        else:
            lead, branch = x0 * x1 * F2, "d"
        gens = [lead] + base
        I = Ideal(gens, saturated="yes")
        X = double_line_ideal(ring, a, b)
        direct = component_intersection(
            [X, Ideal([x1, x3]), Ideal([x0, x2])]
        )
        b1 = var_quotient(x1, b) if div1 and not b.is_zero() else ring.zero()
        a0 = var_quotient(x0, a) if div0 and not a.is_zero() else ring.zero()
        env = {
            "x0": x0, "x1": x1, "x2": x2, "x3": x3,
            "a": a, "b": b, "a0": a0, "b1": b1,
        }
        displays = {
            "a": (
                [[0, 2 - l], [2, 2, 2, 3 - l, 3 - l], [3, 3, 4 - l]],
                [["x0*x3", "x1*x2", "x2*x3", "0", "0"],
                 ["-b1", "-a0", "0", "x2", "x3"]],
                [["-x2", "0", "0"], ["0", "-x3", "0"], ["x0", "x1", "0"],
                 ["-b1", "0", "-x3"], ["0", "-a0", "x2"]],
            ),
            "b": (
                [[0, 1 - l], [2, 2, 2, 2 - l, 2 - l], [3, 3, 3 - l]],
                [["x0*x3", "x1*x2", "x2*x3", "0", "0"],
                 ["-x0*b1", "-a", "0", "x2", "x3"]],
                [["-x2", "0", "0"], ["0", "-x3", "0"], ["x0", "x1", "0"],
                 ["-x0*b1", "0", "-x3"], ["0", "-a", "x2"]],
            ),
            "c": (
                [[0, 1 - l], [2, 2, 2, 2 - l, 2 - l], [3, 3, 3 - l]],
                [["x0*x3", "x1*x2", "x2*x3", "0", "0"],
                 ["-b", "-x1*a0", "0", "x2", "x3"]],
                [["-x2", "0", "0"], ["0", "-x3", "0"], ["x0", "x1", "0"],
                 ["-b", "0", "-x3"], ["0", "-x1*a0", "x2"]],
            ),
            "d": (
                [[0, -l], [2, 2, 2, 1 - l, 1 - l], [3, 3, 2 - l]],
                [["x0*x3", "x1*x2", "x2*x3", "0", "0"],
                 ["-x0*b", "-x1*a", "0", "x2", "x3"]],
                [["-x2", "0", "0"], ["0", "-x3", "0"], ["x0", "x1", "0"],
                 ["-x0*b", "0", "-x3"], ["0", "-x1*a", "x2"]],
            ),
        }
        twists, d1, d2 = displays[branch]
        structure = make_complex(ring, twists, [d1, d2], env)
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            structure=structure,
            expected_degree=4,
            expected_chi=chi_of_union(
                [(X, l + 2), (Ideal([x1, x3]), 1), (Ideal([x0, x2]), 1)]
            ),
            branch=branch,
        )


class XCupL2CupL3(DoubleLineUnion):
    anchor = "unions/double-line-plus-two-meeting-lines"

    def __init__(self, l: int = 0, want_x1_divides_b: bool = False):
        super().__init__(l, want_x1_divides_b)
        tag = "a" if want_x1_divides_b else "b"
        self.case_id = f"b-x-cup-l2-cup-l3-{tag}-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        a, b = self.sample_ab(ring, rng)
        return {"l": self.l, "a": a, "b": b}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b = params["l"], params["a"], params["b"]
        F2 = a * x3 - b * x2
        gens = [x1 * F2, x2 * x3, x1 * x2 * x2, x1 * x3 * x3]
        I = Ideal(gens, saturated="yes")
        X = double_line_ideal(ring, a, b)
        direct = component_intersection(
            [X, Ideal([x1, x3]), Ideal([x1, x2])]
        )
        env = {"x1": x1, "x2": x2, "x3": x3, "a": a, "b": b}
        structure = make_complex(
            ring,
            [[0, 1 - l], [2, 2, 2, 2 - l, 2 - l], [3, 3, 3 - l]],
            [
                [["x1*x2", "x1*x3", "x2*x3", "0", "0"],
                 ["-a", "-b", "0", "x2", "x3"]],
                [["-x3", "0", "0"], ["x2", "-x2", "0"], ["0", "x1", "0"],
                 ["b", "-b", "-x3"], ["-a", "0", "x2"]],
            ],
            env,
        )
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            structure=structure,
            expected_degree=4,
            expected_chi=chi_of_union(
                [(X, l + 2), (Ideal([x1, x3]), 1), (Ideal([x1, x2]), 1)]
            ),
            branch="a" if divides_var(x1, b) else "b",
        )


class XCupL2CupL1Prime(DoubleLineUnion):
    anchor = "unions/double-line-meeting-line-skew-line"

    def __init__(self, l: int = 0, want_x1_divides_b: bool = False):
        super().__init__(l, want_x1_divides_b)
        tag = "a" if want_x1_divides_b else "b"
        self.case_id = f"b-x-cup-l2-cup-l1prime-{tag}-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        a, b = self.sample_ab(ring, rng)
        return {"l": self.l, "a": a, "b": b}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b = params["l"], params["a"], params["b"]
        F2 = a * x3 - b * x2
        nbhd_union = [
            x0 * x2 * x3, x0 * x3 * x3, x1 * x2 * x2, x1 * x2 * x3, x1 * x3 * x3,
        ]
        div1 = divides_var(x1, b)
        if l == -1 and b.is_zero():
            gens = [x0 * x3, x1 * x3, x1 * x2 * x2]
            branch = "a0"
        elif l >= 0 and div1:
            gens = [F2] + nbhd_union
            branch = "b"
        elif not div1:
            gens = [x1 * F2] + nbhd_union
            branch = "c"
        else:
            raise Inadmissible("uncovered parameter combination")
        I = Ideal(gens, saturated="yes")
        X = double_line_ideal(ring, a, b)
        direct = component_intersection(
            [X, Ideal([x1, x3]), Ideal([x0, x1])]
        )
        b1 = var_quotient(x1, b) if div1 and not b.is_zero() else ring.zero()
        env = {
            "x0": x0, "x1": x1, "x2": x2, "x3": x3,
            "a": a, "b": b, "b1": b1,
        }
        structure = None
        if branch == "b":
            structure = make_complex(
                ring,
                [[0, 1 - l], [2, 2, 2, 2 - l, 2 - l], [3, 3, 3 - l]],
                [
                    [["x0*x3", "x1*x2", "x1*x3", "0", "0"],
                     ["-x0*b1", "-a", "-b", "x2", "x3"]],
                    [["-x1", "0", "0"], ["0", "-x3", "0"], ["x0", "x2", "0"],
                     ["0", "b", "-x3"], ["0", "-a", "x2"]],
                ],
                env,
            )
        elif branch == "c":
            structure = make_complex(
                ring,
                [[0, -l], [2, 2, 2, 1 - l, 1 - l], [3, 3, 2 - l]],
                [
                    [["x0*x3", "x1*x2", "x1*x3", "0", "0"],
                     ["-x0*b", "-x1*a", "-x1*b", "x2", "x3"]],
                    [["-x1", "0", "0"], ["0", "-x3", "0"], ["x0", "x2", "0"],
                     ["0", "x1*b", "-x3"], ["0", "-x1*a", "x2"]],
                ],
                env,
            )
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            structure=structure,
            expected_degree=4,
            expected_chi=chi_of_union(
                [(X, l + 2), (Ideal([x1, x3]), 1), (Ideal([x0, x1]), 1)]
            ),
            branch=branch,
        )


class XCupLCupL1Prime(DoubleLineUnion):
    anchor = "unions/double-line-coplanar-line-skew-line"

    def __init__(self, l: int = 0, want_x1_divides_b: bool = False, c: int = 1):
        super().__init__(l, want_x1_divides_b)
        self.c = c
        tag = "a" if want_x1_divides_b else "b"
        self.case_id = f"b-x-cup-l-cup-l1prime-{tag}-l{l}-c{c}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        a, b = self.sample_ab(ring, rng)
        return {"l": self.l, "a": a, "b": b, "c": self.c}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b, c = params["l"], params["a"], params["b"], params["c"]
        if c == 0:
            raise Inadmissible("c must be nonzero")
        ell = x1 + ring.constant(c) * x2
        F2 = a * x3 - b * x2
        div1 = divides_var(x1, b)
        nbhd = [
            x0 * x2 * x3, x0 * x3 * x3, x1 * x2 * x3, x1 * x3 * x3,
            x0 * ell * x2 * x2, x1 * ell * x2 * x2,
        ]
        if div1 and l == -1:
            gens = [v * w for v in (x0, x1) for w in (x3, ell * x2 * x2)]
            branch = "a"
        elif div1 and l == 0:
            f = -(ell * x2) + a * x3
            gens = [v * w for v in (x0, x1) for w in (f, x2 * x3, x3 * x3)]
            branch = "b"
        elif div1:
            b1 = var_quotient(x1, b)
            gens = [F2 - ring.constant(c) * b1 * x2 * x2] + nbhd
            branch = "c"
        elif l == -1:
            gens = [v * w for v in (x0, x1) for w in (ell * F2, x2 * x3, x3 * x3)]
            branch = "d"
        else:
            gens = [ell * F2] + nbhd
            branch = "e"
        I = Ideal(gens, saturated="yes")
        X = double_line_ideal(ring, a, b)
        direct = component_intersection(
            [X, Ideal([ell, x3]), Ideal([x0, x1])]
        )
        # case (b) needs b normalized to x1 (any unit multiple is the same X)
        if branch == "b" and not b.scale(1).__eq__(x1):
            bc = b.terms.get((0, 1, 0, 0))
            if bc is None:
                raise Inadmissible("branch b needs b = unit * x1")
            a_used = a.scale(ring.field.inv(bc))
            X2 = double_line_ideal(ring, a_used, x1)
            direct = component_intersection(
                [X2, Ideal([ell, x3]), Ideal([x0, x1])]
            )
            I = Ideal(
                [v * w for v in (x0, x1)
                 for w in (-(ell * x2) + a_used * x3, x2 * x3, x3 * x3)],
                saturated="yes",
            )
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            expected_degree=4,
            expected_chi=chi_of_union(
                [(X, l + 2), (Ideal([ell, x3]), 1), (Ideal([x0, x1]), 1)]
            ),
            branch=branch,
        )


class XCupL1PrimeCupLPrime(DoubleLineUnion):
    anchor = "unions/double-line-two-lines-one-far"

    def __init__(self, l: int = 0, c: int = 1):
        super().__init__(l)
        self.c = c
        self.case_id = f"b-x-cup-l1prime-cup-lprime-l{l}-c{c}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        a, b = self.sample_ab(ring, rng)
        return {"l": self.l, "a": a, "b": b, "c": self.c}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b, c = params["l"], params["a"], params["b"], params["c"]
        if c == 0:
            raise Inadmissible("c must be nonzero")
        ell0 = x0 + ring.constant(c) * x2
        F2 = a * x3 - b * x2
        X = double_line_ideal(ring, a, b)
        lines = component_intersection([Ideal([x0, x1]), Ideal([ell0, x1])])
        nbhd = [
            x1 * x2 * x2, x1 * x2 * x3, x1 * x3 * x3,
            x0 * ell0 * x2 * x2, x0 * ell0 * x2 * x3, x0 * ell0 * x3 * x3,
        ]
        if l == -1:
            gens = [f * g for f in X.generators for g in lines.generators]
            branch = "a"
        elif l == 0:
            gens = [ell0 * F2, x1 * F2] + nbhd
            branch = "b"
        else:
            # split a = x0^2*a2 + x1*a1, b likewise; the displayed generator
            a_at = eval_at_x1_zero(a)
            b_at = eval_at_x1_zero(b)
            a2 = var_quotient(x0, var_quotient(x0, a_at))
            b2 = var_quotient(x0, var_quotient(x0, b_at))
            F2p = a2 * x3 - b2 * x2
            lead = F2 + ring.constant(c) * x0 * x2 * F2p
            gens = [lead] + nbhd
            branch = "c"
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [X, Ideal([x0, x1]), Ideal([ell0, x1])]
        )
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            expected_degree=4,
            expected_chi=chi_of_union(
                [(X, l + 2), (Ideal([x0, x1]), 1), (Ideal([ell0, x1]), 1)]
            ),
            branch=branch,
        )


class XCupL1PrimeCupL1Second(DoubleLineUnion):
    anchor = "unions/double-line-two-quadric-rulings"

    def __init__(self, l: int = 0, force_quadric: bool = False):
        super().__init__(l)
        self.force_quadric = force_quadric
        tag = "-onq" if force_quadric else ""
        self.case_id = f"b-x-cup-l1prime-cup-l1second-l{l}{tag}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        if self.force_quadric:
            if self.l != 0:
                raise Inadmissible("the quadric branch needs l = 0")
            x0, x1 = ring.variable(0), ring.variable(1)
            return {"l": 0, "a": x0, "b": x1}
        a, b = self.sample_ab(ring, rng)
        return {"l": self.l, "a": a, "b": b}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b = params["l"], params["a"], params["b"]
        ell0 = x0 - x2
        ell1 = x1 - x3
        F2 = a * x3 - b * x2
        q = x0 * x3 - x1 * x2
        X = double_line_ideal(ring, a, b)
        nbhd = [
            x2 * q, x3 * q,
            x0 * ell0 * x2 * x2, x0 * ell0 * x2 * x3, x0 * ell0 * x3 * x3,
            x1 * ell1 * x2 * x3, x1 * ell1 * x3 * x3,
        ]
        same_quadric = l == 0 and (
            F2.scale(q.lead_coeff()) - q.scale(F2.lead_coeff())
        ).is_zero()
        if l == -1:
            gens = [x0 * ell0 * F2, x1 * ell0 * F2, x1 * ell1 * F2] + nbhd
            branch = "a"
        elif l == 0 and not same_quadric:
            gens = [ell0 * F2, ell1 * F2] + nbhd
            branch = "b"
        else:
            # split F2 = x0*F2p + x1*F2pp coefficient-wise
            a0 = var_quotient(x0, eval_at_x1_zero(a))
            b0 = var_quotient(x0, eval_at_x1_zero(b))
            a1 = var_quotient(x1, a - eval_at_x1_zero(a)) if not (a - eval_at_x1_zero(a)).is_zero() else ring.zero()
            b1 = var_quotient(x1, b - eval_at_x1_zero(b)) if not (b - eval_at_x1_zero(b)).is_zero() else ring.zero()
            F2p = a0 * x3 - b0 * x2
            F2pp = a1 * x3 - b1 * x2
            gens = [F2 - x2 * F2p - x3 * F2pp] + nbhd
            branch = "c"
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [X, Ideal([x0, x1]), Ideal([ell0, ell1])]
        )
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            expected_degree=4,
            expected_chi=(l + 2) + 1 + 1,  # mutually disjoint components
            branch=branch,
        )


class XCupL1PrimeNbhd(DoubleLineUnion):
    """X union the first neighbourhood of the skew line."""

    anchor = "unions/double-line-plus-fat-skew-line"

    def __init__(self, l: int = 0):
        super().__init__(l)
        self.case_id = f"b-x-cup-l1prime-nbhd-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        a, b = self.sample_ab(ring, rng)
        return {"l": self.l, "a": a, "b": b}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b = params["l"], params["a"], params["b"]
        F2 = a * x3 - b * x2
        X = double_line_ideal(ring, a, b)
        nbhd = [
            f * g
            for f in (x0 * x0, x0 * x1, x1 * x1)
            for g in (x2 * x2, x2 * x3, x3 * x3)
        ]
        if l == -1:
            gens = [m * F2 for m in (x0 * x0, x0 * x1, x1 * x1)] + nbhd
            branch = "a"
        elif l == 0:
            gens = [x0 * F2, x1 * F2] + nbhd
            branch = "b"
        else:
            gens = [F2] + nbhd
            branch = "c"
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [X, Ideal([x0 * x0, x0 * x1, x1 * x1])]
        )
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            expected_degree=2 + 3,
            expected_chi=(l + 2) + 1,
            branch=branch,
        )


class XCupXPrime(DoubleLineUnion):
    """Two double structures on the skew lines L1, L1'."""

    anchor = "unions/two-double-lines-skew"

    def __init__(self, l: int = 0, lp: int = -1, same_quadric: bool = False):
        super().__init__(l)
        if l < lp:
            raise ValueError("convention l >= l'")
        self.lp = lp
        self.same_quadric = same_quadric
        tag = "-onq" if same_quadric else ""
        self.case_id = f"b-x-cup-xprime-l{l}-lp{lp}{tag}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        x0, x1, x2, x3 = _vars(ring)
        if self.same_quadric:
            if (self.l, self.lp) != (0, 0):
                raise Inadmissible("matching pencils need l = l' = 0")
            return {"l": 0, "lp": 0, "a": x0, "b": x1, "apar": x2, "bpar": x3}
        a, b = self.sample_ab(ring, rng)
        # X' parameters live on L1': binary forms in x2, x3
        while True:
            ca = [rng.randrange(1, 32003) for _ in range(self.lp + 2)]
            cb = [rng.randrange(1, 32003) for _ in range(self.lp + 2)]
            apar = sum(
                (ring.monomial((0, 0, self.lp + 1 - i, i), ca[i]) for i in range(self.lp + 2)),
                ring.zero(),
            )
            bpar = sum(
                (ring.monomial((0, 0, self.lp + 1 - i, i), cb[i]) for i in range(self.lp + 2)),
                ring.zero(),
            )
            swap = {0: ring.variable(2), 1: ring.variable(3),
                    2: ring.variable(0), 3: ring.variable(1)}
            if coprime_binary(apar.substitute(swap), bpar.substitute(swap)):
                break
        return {"l": self.l, "lp": self.lp, "a": a, "b": b, "apar": apar, "bpar": bpar}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, lp = params["l"], params["lp"]
        a, b = params["a"], params["b"]
        apar, bpar = params["apar"], params["bpar"]
        F2 = a * x3 - b * x2
        F2prime = apar * x1 - bpar * x0
        X = double_line_ideal(ring, a, b)
        Xp = Ideal([F2prime, x0 * x0, x0 * x1, x1 * x1], saturated="yes")
        sq1 = (x0 * x0, x0 * x1, x1 * x1)
        sq2 = (x2 * x2, x2 * x3, x3 * x3)
        nbhd = [f * g for f in sq1 for g in sq2]
        # I(L1^(1) ∪ X') by the double-neighbourhood lemma on the other side
        if lp == -1:
            l1n_xp = [m * F2prime for m in sq2] + nbhd
        elif lp == 0:
            l1n_xp = [x2 * F2prime, x3 * F2prime] + nbhd
        else:
            l1n_xp = [F2prime] + nbhd
        same_quadric = (
            l == 0 and lp == 0
            and (F2.scale(F2prime.lead_coeff()) - F2prime.scale(F2.lead_coeff())).is_zero()
        )
        if l == -1:
            gens = [f * g for f in X.generators for g in Xp.generators]
            branch = "a"
        elif l == 0 and lp == -1:
            gens = [x0 * F2, x1 * F2] + l1n_xp
            branch = "b"
        elif l == 0 and lp == 0 and not same_quadric:
            gens = [x0 * F2, x1 * F2] + l1n_xp
            branch = "c"
        elif l == 0 and lp == 0:
            gens = [F2] + nbhd
            branch = "d"
        else:
            gens = [F2] + l1n_xp
            branch = "e"
        I = Ideal(gens, saturated="yes")
        direct = component_intersection([X, Xp])
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            expected_degree=4,
            expected_chi=(l + 2) + (lp + 2),
            branch=branch,
        )


class XCupL2Nbhd(DoubleLineUnion):
    anchor = "unions/double-line-plus-fat-meeting-line"

    def __init__(self, l: int = 0, want_x1_divides_b: bool = False):
        super().__init__(l, want_x1_divides_b)
        tag = "a" if want_x1_divides_b else "b"
        self.case_id = f"b-x-cup-l2nbhd-{tag}-l{l}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        a, b = self.sample_ab(ring, rng)
        return {"l": self.l, "a": a, "b": b}

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, a, b = params["l"], params["a"], params["b"]
        F2 = a * x3 - b * x2
        X = double_line_ideal(ring, a, b)
        nbhd2 = [x3 * x3, x1 * x2 * x3, x1 * x1 * x2 * x2]
        if divides_var(x1, b):
            gens = [x1 * F2] + nbhd2
            branch = "a"
        else:
            gens = [x1 * x1 * F2] + nbhd2
            branch = "b"
        I = Ideal(gens, saturated="yes")
        direct = component_intersection(
            [X, Ideal([x1 * x1, x1 * x3, x3 * x3])]
        )
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            expected_degree=2 + 3,
            expected_chi=chi_of_union(
                [(X, l + 2), (Ideal([x1 * x1, x1 * x3, x3 * x3]), 1)]
            ),
            branch=branch,
        )


class XCupXSecond(DoubleLineUnion):
    """Double structures on the meeting lines L1 and L2."""

    anchor = "unions/two-double-lines-meeting"

    BRANCHES = ("a", "b", "c", "d", "e")

    def __init__(self, l: int = 0, lpp: int = 0, branch: str = "e"):
        super().__init__(l)
        if branch not in self.BRANCHES:
            raise ValueError("branch must be one of a..e")
        if l < lpp:
            raise ValueError("convention l >= l''")
        self.lpp = lpp
        self.branch_wanted = branch
        self.case_id = f"b-x-cup-xsecond-{branch}-l{l}-lpp{lpp}"

    def sample(self, ring: Ring, rng: random.Random) -> Dict:
        x0, x1, x2, x3 = _vars(ring)
        want = self.branch_wanted
        want_b1 = want in ("a", "b", "c")  # x1 | b
        want_b2 = want in ("a", "b", "d")  # x2 | b''
        tries = 0
        while True:
            tries += 1
            if tries > 4000:
                raise Inadmissible("could not sample the requested branch")
            a, b = DoubleLineUnion(self.l, want_b1).sample_ab(ring, rng)
            # X'' parameters: binary forms in x0, x2 of degree lpp+1
            def bf02(deg):
                while True:
                    cs = [rng.randrange(32003) for _ in range(deg + 1)]
                    if any(cs):
                        return sum(
                            (ring.monomial((deg - i, 0, i, 0), cs[i]) for i in range(deg + 1)),
                            ring.zero(),
                        )
            app = bf02(self.lpp + 1)
            if want_b2:
                bpp = x2 * bf02(self.lpp) if self.lpp >= 0 else ring.zero()
            else:
                bpp = bf02(self.lpp + 1)
            if divides_var(x2, bpp) != want_b2:
                continue
            # coprimality of (a'', b'') on L2 = common zeros in (x0, x2)
            res_ok = self._coprime02(ring, app, bpp)
            if not res_ok:
                continue
            params = {
                "l": self.l, "lpp": self.lpp,
                "a": a, "b": b, "app": app, "bpp": bpp,
            }
            if self._branch_of(ring, params) == want:
                return params

    @staticmethod
    def _coprime02(ring: Ring, f: Poly, g: Poly) -> bool:
        swap = {1: ring.variable(2), 2: ring.variable(1)}
        return coprime_binary(f.substitute(swap), g.substitute(swap)) if not (
            f.is_zero() or g.is_zero()
        ) else (f.is_constant() or g.is_constant())

    @staticmethod
    def _branch_of(ring: Ring, params: Dict) -> str:
        x0, x1, x2, x3 = _vars(ring)
        a, b = params["a"], params["b"]
        app, bpp = params["app"], params["bpp"]
        div_b = divides_var(x1, b)
        div_bpp = divides_var(x2, bpp)
        if div_b and div_bpp:
            b1 = var_quotient(x1, b) if not b.is_zero() else ring.zero()
            b1pp = var_quotient(x2, bpp) if not bpp.is_zero() else ring.zero()
            lhs = _eval00(b1) * _eval00_2(app)
            rhs = _eval00_2(b1pp) * _eval00(a)
            return "a" if (lhs - rhs).is_zero() else "b"
        if div_b:
            return "c"
        if div_bpp:
            return "d"
        return "e"

    def build(self, ring: Ring, params: Dict) -> CaseData:
        x0, x1, x2, x3 = _vars(ring)
        l, lpp = params["l"], params["lpp"]
        a, b = params["a"], params["b"]
        app, bpp = params["app"], params["bpp"]
        F2 = a * x3 - b * x2
        F2pp = app * x3 - bpp * x1
        X = double_line_ideal(ring, a, b)
        Xpp = Ideal([F2pp, x1 * x1, x1 * x3, x3 * x3], saturated="yes")
        nbhd2 = [x3 * x3, x1 * x2 * x3, x1 * x1 * x2 * x2]
        branch = self._branch_of(ring, params)
        field = ring.field
        if branch == "a":
            b1 = var_quotient(x1, b) if not b.is_zero() else ring.zero()
            ratio = _scaled_power(ring, a, app, lpp, l)  # a(x0,0)/a''(x0,0)
            lead = (
                F2
                + _eval00(b1) * x1 * x2
                - _eval00(a) * x3
                + ratio * F2pp
            )
            gens = [lead, x2 * F2pp] + nbhd2
        elif branch == "b":
            gens = [x1 * F2, x2 * F2pp] + nbhd2
        elif branch == "c":
            gens = [x1 * F2, x2 * x2 * F2pp] + nbhd2
        elif branch == "d":
            gens = [x1 * x1 * F2, x2 * F2pp] + nbhd2
        else:
            b00 = _eval00(b)
            bpp00 = _eval00_2(bpp)
            ratio = _ratio_const_times_power(ring, b00, bpp00, l, lpp)
            lead = x1 * F2 + b00 * x1 * x2 + ratio * x2 * F2pp
            gens = [lead, x2 * x2 * F2pp] + nbhd2
        I = Ideal(gens, saturated="yes")
        direct = component_intersection([X, Xpp])
        return CaseData(
            ideal=I,
            direct_ideal=direct,
            expected_degree=4,
            expected_chi=chi_of_union([(X, l + 2), (Xpp, lpp + 2)]),
            branch=branch,
        )


def _eval00(f: Poly) -> Poly:
    """f(x0, 0) for a form in x0, x1."""
    return f.substitute({1: f.ring.zero()})


def _eval00_2(f: Poly) -> Poly:
    """f(x0, 0) for a form in x0, x2."""
    return f.substitute({2: f.ring.zero()})


def _scaled_power(ring: Ring, a: Poly, app: Poly, lpp: int, l: int) -> Poly:
    """a(x0,0) / a''(x0,0) as the monomial (alpha/alpha'') x0^(l-l'')."""
    a00 = _eval00(a)
    app00 = _eval00_2(app)
    ca = a00.terms.get((l + 1, 0, 0, 0))
    cb = app00.terms.get((lpp + 1, 0, 0, 0))
    if ca is None or cb is None:
        raise Inadmissible("leading x0-coefficients vanish; branch undefined")
    coeff = ring.field.div(ca, cb)
    return ring.monomial((l - lpp, 0, 0, 0), coeff)


def _ratio_const_times_power(ring: Ring, b00: Poly, bpp00: Poly, l: int, lpp: int) -> Poly:
    cb = b00.terms.get((l + 1, 0, 0, 0))
    cbp = bpp00.terms.get((lpp + 1, 0, 0, 0))
    if cb is None or cbp is None:
        raise Inadmissible("leading x0-coefficients vanish; branch undefined")
    coeff = ring.field.div(cb, cbp)
    return ring.monomial((l - lpp, 0, 0, 0), coeff)
