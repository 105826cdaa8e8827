"""Monomial orders on exponent tuples, with x0 > x1 > ... > xn."""

from __future__ import annotations

from typing import Tuple

Exponent = Tuple[int, ...]


class MonomialOrder:
    """Total order on monomials, exposed through a sort ``key``.

    Larger key = larger monomial.  All orders here refine divisibility and
    are compatible with multiplication.
    """

    name = "abstract"

    def key(self, e: Exponent):
        raise NotImplementedError

    def greater(self, a: Exponent, b: Exponent) -> bool:
        return self.key(a) > self.key(b)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


def _grevlex_key(e: Exponent):
    return (sum(e), tuple(-x for x in reversed(e)))


class Grevlex(MonomialOrder):
    name = "grevlex"

    def __init__(self):
        self._cache = {}

    def key(self, e: Exponent):
        k = self._cache.get(e)
        if k is None:
            k = _grevlex_key(e)
            self._cache[e] = k
        return k


class Lex(MonomialOrder):
    name = "lex"

    def key(self, e: Exponent):
        return e


class EliminationBlock(MonomialOrder):
    """Block order: first ``k`` variables dominate, grevlex inside blocks.

    Any monomial involving one of the first k variables beats any monomial
    in the remaining ones, so a Groebner basis w.r.t. this order eliminates
    the leading block.
    """

    def __init__(self, k: int):
        self.k = k
        self.name = f"elim({k})"
        self._cache = {}

    def key(self, e: Exponent):
        out = self._cache.get(e)
        if out is None:
            k = self.k
            out = (_grevlex_key(e[:k]), _grevlex_key(e[k:]))
            self._cache[e] = out
        return out


GREVLEX = Grevlex()
LEX = Lex()


def order_by_name(name: str) -> MonomialOrder:
    if name == "grevlex":
        return GREVLEX
    if name == "lex":
        return LEX
    if name.startswith("elim(") and name.endswith(")"):
        return EliminationBlock(int(name[5:-1]))
    raise ValueError(f"unknown monomial order {name!r}")
