"""Graded free modules, degree-0 maps, complexes, and the unit-entry
cancellation algorithm that turns a free resolution into a minimal one."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .poly import Poly, Ring


class DegreeViolation(ValueError):
    pass


class InterfaceMismatch(ValueError):
    pass


class NotAComplex(ValueError):
    pass


class NotChainMap(ValueError):
    pass


class FreeModule:
    """⊕ S(-a_j): ``twists`` lists the generator degrees a_j."""

    __slots__ = ("ring", "twists")

    def __init__(self, ring: Ring, twists: Sequence[int]):
        self.ring = ring
        self.twists = tuple(int(a) for a in twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def is_zero(self) -> bool:
        return not self.twists

    def twist(self, t: int) -> "FreeModule":
        return FreeModule(self.ring, [a - t for a in self.twists])

    def dual(self) -> "FreeModule":
        return FreeModule(self.ring, [-a for a in self.twists])

    def direct_sum(self, other: "FreeModule") -> "FreeModule":
        return FreeModule(self.ring, self.twists + other.twists)

    def __eq__(self, other):
        return (
            isinstance(other, FreeModule)
            and self.ring == other.ring
            and self.twists == other.twists
        )

    def __repr__(self):
        if not self.twists:
            return "0"
        groups: Dict[int, int] = {}
        for a in self.twists:
            groups[a] = groups.get(a, 0) + 1
        parts = []
        for a in sorted(groups):
            mult = groups[a]
            prefix = f"{mult}" if mult > 1 else ""
            parts.append(f"{prefix}S({-a})")
        return " + ".join(parts)


class GradedMap:
    """Degree-0 map of graded free modules given by a matrix of polynomials.

    ``entries[i][j]`` carries source generator j to target coordinate i and
    is zero or homogeneous of degree source.twists[j] - target.twists[i].
    """

    __slots__ = ("source", "target", "entries")

    def __init__(
        self,
        source: FreeModule,
        target: FreeModule,
        entries: Sequence[Sequence[Poly]],
        check: bool = True,
    ):
        self.source = source
        self.target = target
        self.entries = [list(row) for row in entries]
        if len(self.entries) != target.rank or any(
            len(row) != source.rank for row in self.entries
        ):
            raise InterfaceMismatch(
                f"matrix shape {len(self.entries)}x"
                f"{len(self.entries[0]) if self.entries else 0} does not match "
                f"{target.rank}x{source.rank}"
            )
        if check:
            for i in range(target.rank):
                for j in range(source.rank):
                    f = self.entries[i][j]
                    if f.is_zero():
                        continue
                    want = source.twists[j] - target.twists[i]
                    got = f.homogeneous_degree()
                    if got != want:
                        raise DegreeViolation(
                            f"entry ({i},{j}) has degree {got}, expected {want}"
                        )

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.entries for f in row)

    def column(self, j: int) -> List[Poly]:
        return [self.entries[i][j] for i in range(self.target.rank)]

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self ∘ other (other first)."""
        if other.target.twists != self.source.twists:
            raise InterfaceMismatch("source/target interfaces do not match")
        ring = self.ring
        out = []
        for i in range(self.target.rank):
            row = []
            for j in range(other.source.rank):
                acc = ring.zero()
                for k in range(self.source.rank):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return GradedMap(other.source, self.target, out, check=False)

    def twist(self, t: int) -> "GradedMap":
        return GradedMap(
            self.source.twist(t), self.target.twist(t), self.entries, check=False
        )

    def dual(self) -> "GradedMap":
        rows = self.source.rank
        entries = [
            [self.entries[i][j] for i in range(self.target.rank)] for j in range(rows)
        ]
        return GradedMap(self.target.dual(), self.source.dual(), entries, check=False)

    def apply(self, coeffs: Sequence[Poly]) -> List[Poly]:
        ring = self.ring
        out = []
        for i in range(self.target.rank):
            acc = ring.zero()
            for j, c in enumerate(coeffs):
                if not c.is_zero() and not self.entries[i][j].is_zero():
                    acc = acc + self.entries[i][j] * c
            out.append(acc)
        return out

    def __repr__(self):
        return f"GradedMap({self.source} -> {self.target})"


def zero_map(source: FreeModule, target: FreeModule) -> GradedMap:
    z = source.ring.zero()
    return GradedMap(
        source, target, [[z] * source.rank for _ in range(target.rank)], check=False
    )


def identity_map(module: FreeModule) -> GradedMap:
    ring = module.ring
    entries = [
        [ring.one() if i == j else ring.zero() for j in range(module.rank)]
        for i in range(module.rank)
    ]
    return GradedMap(module, module, entries, check=False)


class Complex:
    """Chain of graded free modules; modules[0] is the rightmost term and
    maps[k] : modules[k+1] -> modules[k].  Consecutive compositions vanish.
    """

    def __init__(self, modules: Sequence[FreeModule], maps: Sequence[GradedMap], check: bool = True):
        self.modules = list(modules)
        self.maps = list(maps)
        if len(self.modules) != len(self.maps) + 1:
            raise InterfaceMismatch("need one more module than maps")
        for k, d in enumerate(self.maps):
            if d.source.twists != self.modules[k + 1].twists or d.target.twists != self.modules[k].twists:
                raise InterfaceMismatch(f"map {k} interfaces do not match modules")
        if check:
            for k in range(len(self.maps) - 1):
                comp = self.maps[k].compose(self.maps[k + 1])
                if not comp.is_zero():
                    bad = next(
                        (i, j)
                        for i in range(comp.target.rank)
                        for j in range(comp.source.rank)
                        if not comp.entries[i][j].is_zero()
                    )
                    raise NotAComplex(f"composition {k} nonzero at entry {bad}")

    @property
    def ring(self) -> Ring:
        return self.modules[0].ring

    @property
    def length(self) -> int:
        return len(self.maps)

    @staticmethod
    def from_maps(maps: Sequence[GradedMap]) -> "Complex":
        """maps given left-to-right: [d_L, ..., d_1] with d_k: C_k -> C_{k-1}."""
        maps = list(maps)
        mods = [maps[-1].target] + [d.source for d in reversed(maps)]
        return Complex(mods, list(reversed(maps)))

    def twist(self, t: int) -> "Complex":
        return Complex(
            [m.twist(t) for m in self.modules],
            [d.twist(t) for d in self.maps],
            check=False,
        )

    def dual(self) -> "Complex":
        mods = [m.dual() for m in reversed(self.modules)]
        maps = [d.dual() for d in reversed(self.maps)]
        return Complex(mods, maps, check=False)

    def betti(self) -> "BettiTable":
        table: Dict[Tuple[int, int], int] = {}
        for i, m in enumerate(self.modules):
            for a in m.twists:
                table[(i, a)] = table.get((i, a), 0) + 1
        return BettiTable(table)

    def hilbert_numerator(self) -> Dict[int, int]:
        """Alternating sum Σ(-1)^i Σ_j t^{a_ij}; the HS numerator over (1-t)^v."""
        out: Dict[int, int] = {}
        for i, m in enumerate(self.modules):
            s = 1 if i % 2 == 0 else -1
            for a in m.twists:
                out[a] = out.get(a, 0) + s
                if out[a] == 0:
                    del out[a]
        return out

    def __repr__(self):
        names = [repr(m) for m in reversed(self.modules)]
        return "0 -> " + " -> ".join(names)


def assemble_complex(maps: Sequence[GradedMap]) -> Complex:
    """Left-to-right maps; raises NotAComplex on nonzero composition."""
    return Complex.from_maps(maps)


def mapping_cone(
    phi: Sequence[GradedMap], src: Complex, tgt: Complex
) -> Complex:
    """Cone of a chain map phi[i]: src.modules[i] -> tgt.modules[i].

    Differential [[-d_src, 0], [phi, d_tgt]]; cone module i is
    src.modules[i-1] ⊕ tgt.modules[i].
    """
    if len(phi) != len(src.modules):
        raise NotChainMap("need one component per source module")
    for i, f in enumerate(phi):
        if f.source.twists != src.modules[i].twists or f.target.twists != tgt.modules[i].twists:
            raise NotChainMap(f"component {i} has wrong interface")
    for k in range(len(src.maps)):
        left = phi[k].compose(src.maps[k])
        right = tgt.maps[k].compose(phi[k + 1])
        diff = [
            [left.entries[i][j] - right.entries[i][j] for j in range(left.source.rank)]
            for i in range(left.target.rank)
        ]
        if any(not f.is_zero() for row in diff for f in row):
            raise NotChainMap(f"square {k} does not commute")

    ring = src.ring
    n = max(len(src.modules) + 1, len(tgt.modules))
    zero_mod = FreeModule(ring, [])

    def smod(i):
        return src.modules[i] if 0 <= i < len(src.modules) else zero_mod

    def tmod(i):
        return tgt.modules[i] if 0 <= i < len(tgt.modules) else zero_mod

    cone_modules = [smod(i - 1).direct_sum(tmod(i)) for i in range(n)]

    def sm(i):
        return src.maps[i] if 0 <= i < len(src.maps) else zero_map(smod(i + 1), smod(i))

    def tm(i):
        return tgt.maps[i] if 0 <= i < len(tgt.maps) else zero_map(tmod(i + 1), tmod(i))

    def ph(i):
        return phi[i] if 0 <= i < len(phi) else zero_map(smod(i), tmod(i))

    cone_maps = []
    for k in range(n - 1):
        a = sm(k - 1)  # src_{k} -> src_{k-1}
        b = ph(k)  # src_k -> tgt_k
        c = tm(k)  # tgt_{k+1} -> tgt_k
        rows = []
        for i in range(a.target.rank):
            row = [-a.entries[i][j] for j in range(a.source.rank)]
            row += [ring.zero()] * c.source.rank
            rows.append(row)
        for i in range(c.target.rank):
            row = [b.entries[i][j] for j in range(b.source.rank)]
            row += [c.entries[i][j] for j in range(c.source.rank)]
            rows.append(row)
        cone_maps.append(
            GradedMap(cone_modules[k + 1], cone_modules[k], rows, check=False)
        )
    while len(cone_modules) > 1 and cone_modules[-1].is_zero():
        cone_modules.pop()
        cone_maps.pop()
    return Complex(cone_modules, cone_maps, check=False)


def minimize(complex_: Complex) -> Complex:
    """Cancel unit entries until none remain (homotopy equivalence).

    Pivots are scanned deterministically: leftmost differential first,
    topmost-leftmost unit entry inside a matrix.
    """
    ring = complex_.ring
    field = ring.field
    modules = [list(m.twists) for m in complex_.modules]
    maps = [[list(row) for row in d.entries] for d in complex_.maps]

    def find_pivot():
        for k in range(len(maps) - 1, -1, -1):
            mat = maps[k]
            for i in range(len(mat)):
                for j in range(len(mat[i]) if mat else 0):
                    f = mat[i][j]
                    if not f.is_zero() and f.is_constant():
                        return k, i, j
        return None

    while True:
        pivot = find_pivot()
        if pivot is None:
            break
        k, pi, pj = pivot
        mat = maps[k]
        c = mat[pi][pj].constant_value()
        cinv = field.inv(c)
        nrows, ncols = len(mat), len(mat[0])
        # Schur complement on d_k
        new_mat = []
        for i in range(nrows):
            if i == pi:
                continue
            row = []
            for j in range(ncols):
                if j == pj:
                    continue
                f = mat[i][j]
                corr = mat[i][pj] * mat[pi][j]
                row.append(f - corr.scale(cinv))
            new_mat.append(row)
        maps[k] = new_mat
        # delete column pj of d_{k+1}'s target == row pj of d_{k+1}
        if k + 1 < len(maps):
            maps[k + 1] = [row for r, row in enumerate(maps[k + 1]) if r != pj]
        # delete row pi of d_k's target == column pi of d_{k-1}
        if k - 1 >= 0:
            maps[k - 1] = [
                [f for j, f in enumerate(row) if j != pi] for row in maps[k - 1]
            ]
        modules[k + 1] = [a for j, a in enumerate(modules[k + 1]) if j != pj]
        modules[k] = [a for i, a in enumerate(modules[k]) if i != pi]

    mods = [FreeModule(ring, tw) for tw in modules]
    gmaps = []
    for k, mat in enumerate(maps):
        gmaps.append(GradedMap(mods[k + 1], mods[k], mat, check=False))
    # drop trailing zero modules
    while len(mods) > 1 and mods[-1].is_zero():
        mods.pop()
        gmaps.pop()
    return Complex(mods, gmaps, check=False)


class BettiTable:
    """Finitely supported table (homological index, twist) -> multiplicity."""

    def __init__(self, table: Dict[Tuple[int, int], int]):
        self.table = {k: v for k, v in table.items() if v}

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.table == other.table

    def __getitem__(self, key):
        return self.table.get(key, 0)

    def entrywise_leq(self, other: "BettiTable") -> bool:
        return all(v <= other[k] for k, v in self.table.items())

    def regularity(self) -> int:
        return max(j - i for (i, j) in self.table)

    def as_rows(self) -> str:
        """Bit-exact text: one row per homological degree, twists ascending."""
        by_i: Dict[int, Dict[int, int]] = {}
        for (i, j), v in self.table.items():
            by_i.setdefault(i, {})[j] = v
        lines = []
        for i in sorted(by_i):
            inner = ", ".join(f"{j}: {by_i[i][j]}" for j in sorted(by_i[i]))
            lines.append(f"{i}: {{ {inner} }}")
        return "\n".join(lines)

    def as_json(self):
        return {
            str(i): {str(j): v for (i2, j), v in sorted(self.table.items()) if i2 == i}
            for i in sorted({i for (i, _j) in self.table})
        }

    def __repr__(self):
        return self.as_rows()
