"""Exact coefficient fields: the rationals and prime fields GF(p)."""

from __future__ import annotations

from fractions import Fraction


class CharacteristicClash(ArithmeticError):
    """A coefficient is not invertible (or not representable) in the field."""


class FieldContext:
    """Arithmetic context shared by every value of one computation.

    ``characteristic`` is 0 (rationals, elements are ``Fraction``) or a
    prime p (elements are ints in [0, p)).
    """

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        if characteristic < 0:
            raise ValueError("characteristic must be 0 or a prime")
        if characteristic:
            if characteristic < 2 or any(
                characteristic % d == 0 for d in range(2, int(characteristic**0.5) + 1)
            ):
                raise ValueError("characteristic must be 0 or a prime")
        self.characteristic = characteristic

    # -- constructors ----------------------------------------------------
    @staticmethod
    def rationals() -> "FieldContext":
        return FieldContext(0)

    @staticmethod
    def prime(p: int) -> "FieldContext":
        return FieldContext(p)

    # -- element arithmetic ----------------------------------------------
    def of(self, num, den=1):
        """Coerce num/den into the field."""
        p = self.characteristic
        if p == 0:
            return Fraction(num, den)
        num, den = num % p, den % p
        if den == 0:
            raise CharacteristicClash(f"denominator {den} not invertible mod {p}")
        if den == 1:
            return num
        return (num * pow(den, p - 2, p)) % p

    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def add(self, a, b):
        if self.characteristic:
            return (a + b) % self.characteristic
        return a + b

    def sub(self, a, b):
        if self.characteristic:
            return (a - b) % self.characteristic
        return a - b

    def mul(self, a, b):
        if self.characteristic:
            return (a * b) % self.characteristic
        return a * b

    def neg(self, a):
        if self.characteristic:
            return (-a) % self.characteristic
        return -a

    def inv(self, a):
        p = self.characteristic
        if p:
            if a % p == 0:
                raise CharacteristicClash("division by zero")
            return pow(a, p - 2, p)
        if a == 0:
            raise CharacteristicClash("division by zero")
        return Fraction(1) / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- misc -------------------------------------------------------------
    def coeff_str(self, a) -> str:
        """Readable form; residues above p/2 print balanced."""
        p = self.characteristic
        if p and a > p // 2:
            return str(a - p)
        return str(a)

    def __eq__(self, other):
        return (
            isinstance(other, FieldContext)
            and self.characteristic == other.characteristic
        )

    def __hash__(self):
        return hash(("FieldContext", self.characteristic))

    def __repr__(self):
        if self.characteristic == 0:
            return "QQ"
        return f"GF({self.characteristic})"


QQ = FieldContext(0)
GF32003 = FieldContext(32003)
