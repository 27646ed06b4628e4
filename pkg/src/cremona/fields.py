"""Exact base fields: the rationals and prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class Field:
    """A field descriptor. ``p == 0`` stands for Q, otherwise F_p.

    Elements are plain Python values: ``Fraction`` over Q (lowest terms,
    positive denominator) and ``int`` in ``[0, p)`` over F_p.
    """

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise ValueError(f"field characteristic {self.p} is not prime")

    @classmethod
    def parse(cls, selector: str) -> "Field":
        s = selector.strip().lower()
        if s in ("q", "qq", "rational"):
            return cls(0)
        if s.startswith("fp:"):
            try:
                p = int(s[3:])
            except ValueError:
                raise ValueError(f"bad field selector {selector!r}") from None
            return cls(p)
        raise ValueError(f"bad field selector {selector!r} (expected 'q' or 'fp:<prime>')")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    def __str__(self):
        return "q" if self.p == 0 else f"fp:{self.p}"

    def __repr__(self):
        return f"Field({str(self)!r})"

    def __call__(self, x) -> Fraction | int:
        """Coerce an int, Fraction or ``"num/den"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / a
        return pow(a, -1, self.p)

    def elements(self):
        """All elements of a prime field, in canonical order."""
        if self.p == 0:
            raise ValueError("Q is infinite")
        return range(self.p)

    def format(self, a) -> str:
        if self.p:
            return str(a)
        a = Fraction(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)
