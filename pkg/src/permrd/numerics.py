"""Logarithms and entropy that stay accurate for huge integers."""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError

LG_E = math.log2(math.e)


def lg(x: int | Fraction | float) -> float:
    """Base-2 log that stays accurate for integers and ratios far past 2**1024."""
    if isinstance(x, Fraction):
        if x <= 0:
            raise DomainError("lg of a nonpositive value")
        return math.log2(x.numerator) - math.log2(x.denominator)
    if x <= 0:
        raise DomainError("lg of a nonpositive value")
    # math.log2 on int uses the exact bit length plus a 53-bit mantissa
    return math.log2(x)


def lg_factorial(n: int) -> float:
    return math.lgamma(n + 1) / math.log(2)


def binary_entropy(p: float) -> float:
    if not 0 <= p <= 1:
        raise DomainError(f"entropy argument {p} outside [0, 1]")
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)
