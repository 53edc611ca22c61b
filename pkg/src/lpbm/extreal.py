"""Extended real numbers for mean and concavity exponents."""

from __future__ import annotations

import math
from functools import total_ordering


@total_ordering
class ExtReal:
    """A value on the extended real line [-inf, +inf].

    Exponents of power means and concavity classes live here: the limit
    cases 0, +inf and -inf all carry meaning, so they stay explicit
    instead of being smuggled through sentinel floats. NaN is rejected.
    """

    __slots__ = ("value",)

    def __init__(self, value: float):
        v = float(value)
        if math.isnan(v):
            raise ValueError("extended real cannot be NaN")
        object.__setattr__(self, "value", v)

    def __setattr__(self, name, val):
        raise AttributeError("ExtReal is immutable")

    @classmethod
    def of(cls, x) -> "ExtReal":
        """Coerce a number, string or ExtReal to ExtReal."""
        if isinstance(x, ExtReal):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        return cls(x)

    @classmethod
    def parse(cls, text: str) -> "ExtReal":
        t = text.strip().lower()
        if t in {"inf", "+inf", "infinity", "+infinity"}:
            return POS_INF
        if t in {"-inf", "-infinity"}:
            return NEG_INF
        return cls(float(t))

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    @property
    def is_pos_inf(self) -> bool:
        return self.value == math.inf

    @property
    def is_neg_inf(self) -> bool:
        return self.value == -math.inf

    def recip(self) -> "ExtReal":
        """Reciprocal with the conventions 0 -> +inf and +/-inf -> 0.

        recip(recip(x)) == x for every x except -inf, which maps to 0
        and back to +inf.
        """
        if self.value == 0.0:
            return POS_INF
        if not self.is_finite:
            return ZERO
        return ExtReal(1.0 / self.value)

    def __eq__(self, other):
        try:
            return self.value == ExtReal.of(other).value
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        try:
            return self.value < ExtReal.of(other).value
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __float__(self):
        return self.value

    def __neg__(self):
        return ExtReal(-self.value)

    def __repr__(self):
        return f"ExtReal({self})"

    def __str__(self):
        if self.is_pos_inf:
            return "inf"
        if self.is_neg_inf:
            return "-inf"
        return format(self.value, "g")

    def to_json(self):
        """JSON encoding: finite values as numbers, infinities as strings."""
        return self.value if self.is_finite else str(self)


POS_INF = ExtReal(math.inf)
NEG_INF = ExtReal(-math.inf)
ZERO = ExtReal(0.0)
