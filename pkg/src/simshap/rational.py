from fractions import Fraction
from numbers import Rational


def parse_rational(value):
    """Exact rational from an int, a ``"p/q"`` string or a decimal literal.

    Floats are routed through their shortest repr so that ``1.75`` read from
    JSON becomes ``Fraction(7, 4)`` rather than its binary approximation.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"not a rational: {value!r}")


def try_rational(value):
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError):
        return None


def format_rational(q, decimal=False):
    q = Fraction(q)
    if decimal:
        return f"{float(q):.6f}"
    return f"{q.numerator}/{q.denominator}"
