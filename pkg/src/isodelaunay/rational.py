"""Exact rational arithmetic helpers.

All geometry in this package is over arbitrary-precision rationals; no
floating point is used anywhere.  gmpy2.mpq is used when available (it is
a drop-in replacement for fractions.Fraction an order of magnitude faster),
falling back to the stdlib.
"""

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ


def qq(value, denom=None):
    """Coerce to an exact rational. Accepts int, rational, or 'p/q' strings."""
    if denom is not None:
        return QQ(value, denom)
    if isinstance(value, str):
        value = value.strip()
        if "/" in value:
            p, q = value.split("/")
            return QQ(int(p), int(q))
        return QQ(int(value))
    return QQ(value)


ZERO = QQ(0)
ONE = QQ(1)


def qstr(x):
    """Lowest-terms decimal-free rendering, identical for mpq and Fraction."""
    return str(x)


def sign(x):
    """Exact sign in {-1, 0, 1}."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0
