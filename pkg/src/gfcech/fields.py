"""Exact coefficient fields: the rationals and prime fields F_p."""

from __future__ import annotations

import random
from fractions import Fraction


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """Base class.  Elements are plain Python values (Fraction or int)."""

    characteristic = 0
    zero: object
    one: object

    def __call__(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random_element(self, rng: random.Random, nonzero: bool = False):
        raise NotImplementedError

    def render(self, a) -> str:
        return str(a)


class RationalField(Field):
    characteristic = 0

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __call__(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def random_element(self, rng, nonzero=False):
        while True:
            a = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
            if a or not nonzero:
                return a


class PrimeField(Field):
    """F_p with residues stored as ints in [0, p)."""

    def __init__(self, p: int):
        p = int(p)
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __call__(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def random_element(self, rng, nonzero=False):
        lo = 1 if nonzero else 0
        return rng.randint(lo, self.p - 1)

    def render(self, a) -> str:
        # symmetric representative reads better in reports
        return str(a - self.p if a > self.p // 2 else a)


QQ = RationalField()


def field_from_string(text: str) -> Field:
    """Parse ``q``/``QQ`` or ``fp:P``/``GF(P)``/``F_P``."""
    t = text.strip()
    low = t.lower()
    if low in ("q", "qq"):
        return QQ
    for prefix in ("fp:", "gf(", "f_", "gf"):
        if low.startswith(prefix):
            digits = low[len(prefix):].rstrip(")")
            if digits.isdigit():
                return PrimeField(int(digits))
    raise ValueError(f"unknown field {text!r}")
