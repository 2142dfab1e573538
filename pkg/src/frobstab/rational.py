"""Exact rationals and the small combinatorial kernels used everywhere else.

Rationals are plain :class:`fractions.Fraction` objects: always reduced,
denominator positive, comparison exact.  This module only adds the wire
format and a couple of counting helpers.
"""

from __future__ import annotations

import re
from collections.abc import Iterator, Sequence
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import ValidationError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are refused: nothing in this package is allowed to go through
    binary floating point.
    """
    if isinstance(value, bool):
        raise ValidationError(f"boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise ValidationError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"n"``.  The result is always reduced."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValidationError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValidationError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q) -> str:
    """Serialize as ``"num/den"`` in lowest terms; zero is ``"0/1"``."""
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def binomial(n: int, k: int) -> int:
    """C(n, k) for ``n >= 0``; zero outside ``0 <= k <= n``.

    >>> binomial(7, 3)
    35
    """
    if n < 0:
        raise ValidationError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    acc = 1
    # acc * (n - i) is always divisible by i + 1 here, so each step stays integral
    for i in range(k):
        acc = acc * (n - i) // (i + 1)
    return acc


def bounded_compositions(l: int, bounds: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Yield every ``(k_1, ..., k_m)`` with sum ``l`` and ``0 <= k_i <= bounds[i]``.

    Vectors come out in lexicographic order, lazily.  Nothing is yielded when
    ``l`` exceeds ``sum(bounds)`` (or is negative).
    """
    bounds = tuple(bounds)
    if any(b < 0 for b in bounds):
        raise ValidationError(f"bounds must be non-negative: {bounds}")
    m = len(bounds)
    if l < 0 or l > sum(bounds):
        return
    if m == 0:
        yield ()
        return
    # capacity still available in slots i..m-1
    tail = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        tail[i] = tail[i + 1] + bounds[i]

    vec = [0] * m

    def rec(i: int, rest: int) -> Iterator[tuple[int, ...]]:
        if i == m - 1:
            vec[i] = rest
            yield tuple(vec)
            return
        lo = max(0, rest - tail[i + 1])
        hi = min(bounds[i], rest)
        for k in range(lo, hi + 1):
            vec[i] = k
            yield from rec(i + 1, rest - k)

    yield from rec(0, l)


def alt_weighted_binomial_sum(n: int) -> int:
    """Sum of ``(-1)^j * j * C(n, j)`` for ``j = 0..n``.

    Vanishes for ``n >= 2``; equals ``-1`` at ``n = 1``.
    """
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    return sum((-1) ** j * j * binomial(n, j) for j in range(n + 1))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def require_prime(p: int) -> None:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise ValidationError(f"p must be a prime, got {p!r}")
