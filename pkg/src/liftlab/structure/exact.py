"""Exact comparisons between logarithms of rationals.

Entropies here are always of the form ``log2(r) / k`` with r a positive
rational and k a positive integer, so two of them compare exactly by
raising both sides to integer powers. Quantities that mix logarithms with
other irrationals (square roots, sums like k + log2 r) are compared with
interval arithmetic at increasing precision, which either certifies the
comparison or raises.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from mpmath import iv

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class LogValue:
    """The real number log2(arg) / denom."""

    arg: Fraction
    denom: int = 1

    def __post_init__(self):
        arg = Fraction(self.arg)
        if arg <= 0:
            raise ValueError("logarithm of a non-positive number")
        if self.denom <= 0:
            raise ValueError("denominator must be positive")
        object.__setattr__(self, "arg", arg)

    @classmethod
    def of(cls, r: Rational) -> "LogValue":
        return cls(Fraction(r), 1)

    @classmethod
    def rational(cls, q: Rational) -> "LogValue":
        """The rational number q itself, written as log2(2^p)/d."""
        q = Fraction(q)
        return cls(Fraction(2) ** q.numerator, q.denominator)

    def scale(self, c: Rational) -> "LogValue":
        """c * self for rational c."""
        c = Fraction(c)
        if c == 0:
            return LogValue(Fraction(1))
        base = self.arg if c > 0 else 1 / self.arg
        return LogValue(base ** abs(c.numerator), self.denom * c.denominator)

    def __add__(self, other: "LogValue") -> "LogValue":
        other = _coerce(other)
        return LogValue(self.arg ** other.denom * other.arg ** self.denom,
                        self.denom * other.denom)

    def __neg__(self) -> "LogValue":
        return LogValue(1 / self.arg, self.denom)

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + (-_coerce(other))

    def _cmp(self, other) -> int:
        other = _coerce(other)
        lhs = self.arg ** other.denom
        rhs = other.arg ** self.denom
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (LogValue, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        # normalise so equal values hash equally: reduce arg to a power root
        return hash(round(float(self), 9))

    def __float__(self):
        return (math.log2(self.arg.numerator) - math.log2(self.arg.denominator)) / self.denom

    def as_rational(self):
        """The value as a Fraction when it is rational, else None."""
        a = self.arg
        for part in (a.numerator, a.denominator):
            if part & (part - 1):
                return None
        return Fraction(a.numerator.bit_length() - a.denominator.bit_length(), self.denom)

    def interval(self):
        return (iv.log(iv.mpf(self.arg.numerator)) - iv.log(iv.mpf(self.arg.denominator))) \
            / (iv.log(2) * self.denom)

    def __repr__(self):
        return f"LogValue({self.arg}, {self.denom})"

    def __str__(self):
        q = self.as_rational()
        return str(q) if q is not None else f"{float(self):.9g}"


def _coerce(v) -> LogValue:
    if isinstance(v, LogValue):
        return v
    if isinstance(v, (int, Fraction)):
        return LogValue.rational(v)
    raise TypeError(f"cannot compare LogValue with {type(v).__name__}")


def log_threshold(frac: Rational, m: int, count: int = 1) -> LogValue:
    """frac * count * log2(m)."""
    return LogValue.of(m).scale(Fraction(frac) * count)


class Undecided(ArithmeticError):
    pass


@contextmanager
def interval_precision(prec: int):
    """Temporarily set the working precision (bits) of mpmath intervals."""
    saved = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = saved


def certified_le(lhs: Callable, rhs: Callable, max_prec: int = 2000) -> bool:
    """Decide lhs <= rhs where both are callables returning mpmath interval
    values; precision doubles until the intervals separate."""
    prec = 64
    while prec <= max_prec:
        with interval_precision(prec):
            a, b = lhs(), rhs()
            if a.b <= b.a:
                return True
            if a.a > b.b:
                return False
        prec *= 2
    raise Undecided("comparison not decided at maximum precision")


def fmt(v) -> str:
    """Report formatting: exact rationals as p/q, logs exactly when rational,
    otherwise decimal."""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return "inf" if math.isinf(v) else f"{v:.9g}"
    return str(v)
