"""Exact rational parsing and rendering.

Rationals travel through JSON as integers or ``"p/q"`` strings. Floats are
accepted on input through their shortest decimal repr, so ``0.1`` becomes
``1/10`` rather than the binary expansion.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable

from hellylab.errors import SchemaError


def as_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise SchemaError(f"expected a rational number, got {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational: {x!r}") from exc
    raise SchemaError(f"expected a rational number, got {x!r}")


def as_vector(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_rational(x) for x in xs)


def render(x: Fraction | int):
    """JSON form: int when integral, otherwise ``"p/q"``."""
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


def render_vector(xs: Iterable) -> list:
    return [render(x) for x in xs]
