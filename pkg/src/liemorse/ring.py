"""
Coefficient rings for exact chain complex computations.

Supports the integers, the rationals and the residue rings Z/m. The ring
decides which integers are units, which is all the Morse matchings need;
field operations additionally require Q or Z/p with p prime.

Example usage:
    from liemorse.ring import parse_ring, is_integer_unit

    ring = parse_ring("Z/5")
    is_integer_unit(3, ring)   # True
    ring.inverse(3)            # 2
"""

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

from sympy import isprime

logger = logging.getLogger(__name__)

Scalar = int | Fraction

_RING_PATTERN = re.compile(r"^\s*(?:(Z|Q)|Z\s*[/_]\s*(\d+))\s*$", re.IGNORECASE)


class NonUnit(ValueError):
    """Raised when inverting an element that is not a unit of the ring."""

    pass


class CompositeModulus(ValueError):
    """Raised when a field is required but Z/m has composite modulus."""

    pass


class RingParseError(ValueError):
    """Raised when a ring selector string cannot be parsed."""

    pass


class RingKind(str, Enum):
    """Kind of coefficient ring."""

    INTEGERS = "Z"
    RATIONALS = "Q"
    MODULAR = "Z/m"


@dataclass(frozen=True)
class CoefficientRing:
    """
    A coefficient ring Z, Q or Z/m.

    Scalars are plain Python ints for Z, Fractions for Q and ints in
    [0, m) for Z/m.
    """

    kind: RingKind
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.kind == RingKind.MODULAR:
            if self.modulus is None or self.modulus < 2:
                raise RingParseError(f"Modulus must be at least 2, got {self.modulus}")
        elif self.modulus is not None:
            raise RingParseError(f"Ring {self.kind.value} takes no modulus")

    def __str__(self) -> str:
        if self.kind == RingKind.MODULAR:
            return f"Z/{self.modulus}"
        return self.kind.value

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind == RingKind.MODULAR else 0  # type: ignore[return-value]

    @property
    def is_field(self) -> bool:
        """True for Q and for Z/p with p prime."""
        if self.kind == RingKind.RATIONALS:
            return True
        return self.kind == RingKind.MODULAR and bool(isprime(self.modulus))

    def normalize(self, value: Scalar) -> Scalar:
        """Bring a scalar into canonical form for this ring."""
        if self.kind == RingKind.MODULAR:
            if isinstance(value, Fraction):
                return (value.numerator * self.inverse(value.denominator)) % self.modulus
            return value % self.modulus  # type: ignore[operator]
        if self.kind == RingKind.RATIONALS:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise NonUnit(f"{value} is not an integer")
            return value.numerator
        return value

    def is_zero(self, value: Scalar) -> bool:
        return self.normalize(value) == 0

    def is_unit(self, value: Scalar) -> bool:
        """True iff the scalar is invertible in this ring."""
        if self.kind == RingKind.RATIONALS:
            return value != 0
        if isinstance(value, Fraction):
            if self.kind == RingKind.INTEGERS and value.denominator != 1:
                return False
            if self.kind == RingKind.MODULAR and math.gcd(value.denominator, self.modulus) != 1:  # type: ignore[arg-type]
                return False
            value = value.numerator
        return is_integer_unit(value, self)

    def inverse(self, value: Scalar) -> Scalar:
        """
        Multiplicative inverse of a scalar.

        Raises:
            NonUnit: If the scalar is not invertible
        """
        if self.kind == RingKind.RATIONALS:
            if value == 0:
                raise NonUnit("0 is not a unit of Q")
            return 1 / Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator != 1 and self.kind == RingKind.INTEGERS:
                raise NonUnit(f"{value} is not an integer")
            return self.normalize(self.inverse(value.numerator) * value.denominator)
        return invert_integer(value, self)

    def field_domain(self) -> Any:
        """
        Return the sympy domain used for exact rank computations.

        Raises:
            CompositeModulus: For Z/m with m composite
            ValueError: For Z, which is not a field
        """
        from sympy import GF, QQ

        if self.kind == RingKind.RATIONALS:
            return QQ
        if self.kind == RingKind.MODULAR:
            if not isprime(self.modulus):
                raise CompositeModulus(f"Z/{self.modulus} is not a field")
            return GF(self.modulus)
        raise ValueError("Z is not a field; use integral homology instead")


INTEGERS = CoefficientRing(RingKind.INTEGERS)
RATIONALS = CoefficientRing(RingKind.RATIONALS)


def modular(m: int) -> CoefficientRing:
    """Return the ring Z/m."""
    return CoefficientRing(RingKind.MODULAR, m)


def parse_ring(text: str) -> CoefficientRing:
    """
    Parse a ring selector string.

    Accepts "Z", "Q", "Z/<m>" (and "Z_<m>"), case-insensitive.

    Args:
        text: Ring selector

    Returns:
        CoefficientRing

    Raises:
        RingParseError: On malformed input or modulus below 2

    Example:
        >>> str(parse_ring("z/5"))
        'Z/5'
    """
    match = _RING_PATTERN.match(text or "")
    if not match:
        raise RingParseError(f"Invalid ring '{text}' (expected Z, Q or Z/<m>)")

    base, modulus = match.groups()
    if base:
        return INTEGERS if base.upper() == "Z" else RATIONALS
    return modular(int(modulus))


def is_integer_unit(k: int, ring: CoefficientRing) -> bool:
    """
    Check whether the image of the integer k in the ring is invertible.

    Example:
        >>> is_integer_unit(3, modular(5)), is_integer_unit(3, modular(3))
        (True, False)
    """
    if ring.kind == RingKind.INTEGERS:
        return abs(k) == 1
    if ring.kind == RingKind.RATIONALS:
        return k != 0
    return math.gcd(k, ring.modulus) == 1  # type: ignore[arg-type]


def invert_integer(k: int, ring: CoefficientRing) -> Scalar:
    """
    Return s with s*k = 1 in the ring.

    Raises:
        NonUnit: If k is not a unit of the ring
    """
    if not is_integer_unit(k, ring):
        raise NonUnit(f"{k} is not a unit of {ring}")

    if ring.kind == RingKind.INTEGERS:
        return k
    if ring.kind == RingKind.RATIONALS:
        return Fraction(1, k)
    return pow(k, -1, ring.modulus)


__all__ = [
    "CoefficientRing",
    "CompositeModulus",
    "INTEGERS",
    "NonUnit",
    "RATIONALS",
    "RingKind",
    "RingParseError",
    "Scalar",
    "invert_integer",
    "is_integer_unit",
    "modular",
    "parse_ring",
]
