"""Exact cost values: non-negative rationals extended with an absorbing infinity.

Addition is commutative, associative and monotone; ``a + INF == INF``.
All finite arithmetic is exact rational arithmetic, never floating point.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FormatError


class Cost:
    """A non-negative exact rational, or the distinguished infinite cost.

    Instances are immutable and totally ordered, with every finite value
    below infinity.
    """

    __slots__ = ("_v",)

    def __init__(self, value):
        if isinstance(value, Cost):
            self._v = value._v
            return
        if value is None:
            self._v = None  # infinity
            return
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise TypeError(f"cost must be int, Fraction or Cost, not {type(value).__name__}")
        frac = Fraction(value)
        if frac < 0:
            raise ValueError(f"costs are non-negative, got {frac}")
        self._v = frac

    @property
    def is_infinite(self):
        return self._v is None

    @property
    def value(self) -> Fraction:
        """The finite rational value; raises on infinity."""
        if self._v is None:
            raise ValueError("infinite cost has no finite value")
        return self._v

    def raw(self):
        """Fraction for finite costs, None for infinity (hot-loop helper)."""
        return self._v

    def __add__(self, other):
        if not isinstance(other, Cost):
            return NotImplemented
        if self._v is None or other._v is None:
            return INF
        return Cost(self._v + other._v)

    def __sub__(self, other):
        """Difference, defined where the result stays in the structure."""
        if not isinstance(other, Cost):
            return NotImplemented
        if other._v is None:
            raise ValueError("cannot subtract an infinite cost")
        if self._v is None:
            return INF
        return Cost(self._v - other._v)

    def __mul__(self, scalar):
        if isinstance(scalar, Cost):
            scalar = scalar.value
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar < 0:
            raise ValueError("cost scaling factor must be non-negative")
        if self._v is None:
            if scalar == 0:
                raise ValueError("0 * INF is undefined")
            return INF
        return Cost(self._v * Fraction(scalar))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cost):
            other = other.value
        divisor = Fraction(other)
        if divisor <= 0:
            raise ValueError("cost divisor must be positive")
        if self._v is None:
            return INF
        return Cost(self._v / divisor)

    def _key(self):
        # INF sorts above every finite value
        return (1,) if self._v is None else (0, self._v)

    def __lt__(self, other):
        return self._key() < other._key()

    def __le__(self, other):
        return self._key() <= other._key()

    def __gt__(self, other):
        return self._key() > other._key()

    def __ge__(self, other):
        return self._key() >= other._key()

    def __eq__(self, other):
        if not isinstance(other, Cost):
            return NotImplemented
        return self._v == other._v

    def __hash__(self):
        return hash(self._v)

    def __repr__(self):
        return f"Cost({format_cost(self)!r})"

    def __str__(self):
        return format_cost(self)


ZERO = Cost(0)
ONE = Cost(1)
INF = Cost(None)


def cost(value) -> Cost:
    """Coerce an int, Fraction, Cost or cost string to a Cost."""
    if isinstance(value, Cost):
        return value
    if isinstance(value, str):
        return parse_cost(value)
    return Cost(value)


def cost_add(a: Cost, b: Cost) -> Cost:
    """Exact aggregation of two costs; infinity is absorbing."""
    return a + b


def cost_sum(items) -> Cost:
    total = ZERO
    for item in items:
        total = total + item
    return total


def parse_cost(text: str) -> Cost:
    """Parse ``"inf"``, a decimal integer, or ``"p/q"`` in lowest or any terms."""
    if not isinstance(text, str):
        raise FormatError(f"cost must be a string, got {type(text).__name__}")
    stripped = text.strip()
    if stripped == "inf":
        return INF
    try:
        if "/" in stripped:
            num_s, den_s = stripped.split("/", 1)
            num, den = int(num_s), int(den_s)
            if den <= 0:
                raise FormatError(f"cost denominator must be positive: {text!r}")
            value = Fraction(num, den)
        else:
            value = Fraction(int(stripped))
    except ValueError as exc:
        raise FormatError(f"malformed cost string {text!r}") from exc
    if value < 0:
        raise FormatError(f"costs are non-negative: {text!r}")
    return Cost(value)


def format_cost(c: Cost) -> str:
    """Canonical cost string: ``inf``, ``7`` or ``5/6`` (lowest terms)."""
    if c.is_infinite:
        return "inf"
    v = c.value
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"
