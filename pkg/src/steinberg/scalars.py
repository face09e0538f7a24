"""Exact coefficient rings: the integers, the rationals and the integers mod n.

Arithmetic is done on *raw* canonical values (``int`` for the integers and
for residues, :class:`fractions.Fraction` for the rationals) through the
methods of :class:`RingSpec`.  :class:`Scalar` wraps a raw value together with
its ring for the public, mixed-ring-checked API.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Raw = Union[int, Fraction]

_KINDS = ("int", "rat", "mod")


class RingError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of the three supported commutative rings with unit.

    ``kind`` is ``"int"``, ``"rat"`` or ``"mod"``; ``modulus`` is required
    (and at least 2) exactly when ``kind == "mod"``.
    """

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == "mod":
            if not isinstance(self.modulus, int) or self.modulus < 2:
                raise RingError("integers mod n need a modulus n >= 2")
        elif self.modulus is not None:
            raise RingError(f"ring {self.kind!r} takes no modulus")

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        """Parse the CLI syntax ``int``, ``rat`` or ``mod:<n>``."""
        text = text.strip()
        if text in ("int", "rat"):
            return cls(text)
        if text.startswith("mod:"):
            try:
                n = int(text[4:])
            except ValueError:
                raise RingError(f"bad modulus in ring spec {text!r}") from None
            return cls("mod", n)
        raise RingError(f"unknown ring spec {text!r} (expected int, rat or mod:<n>)")

    def __str__(self):
        return f"mod:{self.modulus}" if self.kind == "mod" else self.kind

    @property
    def is_field(self) -> bool:
        if self.kind == "rat":
            return True
        if self.kind == "mod":
            return _is_prime(self.modulus)
        return False

    # -- raw arithmetic -------------------------------------------------

    @property
    def zero(self) -> Raw:
        return Fraction(0) if self.kind == "rat" else 0

    @property
    def one(self) -> Raw:
        return Fraction(1) if self.kind == "rat" else 1

    def coerce(self, value) -> Raw:
        """Bring an int, Fraction or :class:`Scalar` into canonical raw form."""
        if isinstance(value, Scalar):
            if value.ring != self:
                raise RingError("ring mismatch")
            return value.value
        if isinstance(value, bool):
            value = int(value)
        if self.kind == "rat":
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator == 1:
                value = value.numerator
            elif self.kind == "int":
                raise RingError(f"{value} is not an integer")
            else:
                den = value.denominator % self.modulus
                try:
                    inv = pow(den, -1, self.modulus)
                except ValueError:
                    raise RingError(f"{value} has no meaning mod {self.modulus}") from None
                return value.numerator * inv % self.modulus
        if not isinstance(value, int):
            raise RingError(f"cannot interpret {value!r} as a scalar")
        return value % self.modulus if self.kind == "mod" else value

    def add(self, a: Raw, b: Raw) -> Raw:
        s = a + b
        return s % self.modulus if self.kind == "mod" else s

    def sub(self, a: Raw, b: Raw) -> Raw:
        s = a - b
        return s % self.modulus if self.kind == "mod" else s

    def mul(self, a: Raw, b: Raw) -> Raw:
        p = a * b
        return p % self.modulus if self.kind == "mod" else p

    def neg(self, a: Raw) -> Raw:
        return -a % self.modulus if self.kind == "mod" else -a

    def inv(self, a: Raw) -> Raw:
        if not self.is_field:
            raise RingError("inverse requires a field")
        if a == 0:
            raise ZeroDivisionError("division by zero")
        if self.kind == "rat":
            return 1 / a
        return pow(a, -1, self.modulus)

    def __call__(self, value) -> Scalar:
        return Scalar(self, self.coerce(value))

    def format(self, a: Raw) -> str:
        return str(a)


INTEGERS = RingSpec("int")
RATIONALS = RingSpec("rat")


def integers_mod(n: int) -> RingSpec:
    return RingSpec("mod", n)


@dataclass(frozen=True)
class Scalar:
    """An element of a :class:`RingSpec`, stored canonically."""

    ring: RingSpec
    value: Raw

    def _check(self, other) -> Raw:
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingError("ring mismatch")
            return other.value
        return self.ring.coerce(other)

    def __add__(self, other):
        return Scalar(self.ring, self.ring.add(self.value, self._check(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.ring, self.ring.sub(self.value, self._check(other)))

    def __rsub__(self, other):
        return Scalar(self.ring, self.ring.sub(self._check(other), self.value))

    def __mul__(self, other):
        return Scalar(self.ring, self.ring.mul(self.value, self._check(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def inverse(self) -> Scalar:
        return Scalar(self.ring, self.ring.inv(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self):
        return str(self.value)


def ring_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def ring_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def ring_neg(a: Scalar) -> Scalar:
    return -a


def ring_inverse(a: Scalar) -> Scalar:
    return a.inverse()
