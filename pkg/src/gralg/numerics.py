"""Integer Chern-class and Riemann-Roch arithmetic: the parity,
congruence, and degree/chi filters used to constrain bundles."""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple


class UnsortedDegrees(ValueError):
    pass


class ChernData:
    """rank plus integer Chern classes c1..c4."""

    __slots__ = ("rank", "c1", "c2", "c3", "c4")

    def __init__(self, rank: int, c1: int = 0, c2: int = 0, c3: int = 0, c4: int = 0):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.c1, self.c2, self.c3, self.c4 = c1, c2, c3, c4

    def classes(self) -> Tuple[int, int, int, int]:
        return (self.c1, self.c2, self.c3, self.c4)

    def __repr__(self):
        return f"ChernData(rank={self.rank}, c={self.classes()})"


def chern_ideal_twist(deg_w: int, t: int) -> Tuple[int, int]:
    """(c1, c2) of a twisted ideal sheaf of a curve of the given degree."""
    if deg_w < 0:
        raise ValueError("degree must be nonnegative")
    return (t, deg_w)


def rank2_parity(c1: int, c2: int) -> bool:
    """Riemann-Roch necessary condition for rank-2 bundles on P^3."""
    return (c1 * c2) % 2 == 0


def schwarzenberger(c: ChernData) -> bool:
    """(2c1+3)(c3 - c1 c2) + c2^2 + c2 ≡ 2 c4 (mod 12) on P^4."""
    c1, c2, c3, c4 = c.classes()
    lhs = (2 * c1 + 3) * (c3 - c1 * c2) + c2 * c2 + c2
    return (lhs - 2 * c4) % 12 == 0


def curve_bundle_constraints(c1: int, deg_z: int, chi: int) -> Dict[str, int]:
    """Consistency of (c1-2)·deg = 2·chi, plus the forced c2."""
    if deg_z < 1:
        raise ValueError("curve degree must be positive")
    consistent = (c1 - 2) * deg_z == 2 * chi
    return {"consistent": consistent, "c2": deg_z + 3 * (c1 - 3)}


def solve_c1(deg_z: int, chi: int):
    """Integer c1 with (c1-2)·deg = 2·chi, or None."""
    num = 2 * chi
    if num % deg_z:
        return None
    return num // deg_z + 2


def koszul_gg_threshold(degrees: Sequence[int]) -> int:
    """Least twist making the kernel of a 4-term epimorphism globally
    generated: d2 + d3 for sorted degrees d0 <= d1 <= d2 <= d3."""
    d = list(degrees)
    if len(d) != 4 or any(x < 1 for x in d) or d != sorted(d):
        raise UnsortedDegrees("need 1 <= d0 <= d1 <= d2 <= d3")
    return d[2] + d[3]


def chern_of_kernel(source_degrees: Sequence[int], target_degree: int, dim: int = 4) -> List[int]:
    """Chern classes c1..cdim of ker(⊕O(b_j) -> O(c)) by power-series division
    of the total Chern polynomials, truncated at the ambient dimension."""
    num = [1] + [0] * dim
    for b in source_degrees:
        nxt = [0] * (dim + 1)
        for i in range(dim + 1):
            nxt[i] += num[i]
            if i + 1 <= dim:
                nxt[i + 1] += num[i] * b
        num = nxt
    # divide by (1 + c t) truncated
    out = [0] * (dim + 1)
    rem = list(num)
    for i in range(dim + 1):
        out[i] = rem[i]
        if i + 1 <= dim:
            rem[i + 1] -= out[i] * target_degree
    return out[1:]
