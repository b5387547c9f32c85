"""Curves from a few Diophantine problems, all of the form y^2 = x^3 + a x^2 + b x."""

from __future__ import annotations

from .forms import Curve


def family_congruent(N: int) -> Curve:
    """``y^2 = x^3 - N^2 x``: N is congruent iff this has a point of infinite order."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    return Curve(0, -N * N)


def family_bremner(n: int) -> Curve:
    """``y^2 = x^3 + (n^2 - 6n - 3) x^2 + 16 n x``, from writing n = (x+y+z)(1/x+1/y+1/z)."""
    a, b = n * n - 6 * n - 3, 16 * n
    if b == 0 or a * a - 4 * b == 0:
        raise ValueError(f"n = {n} gives a singular curve")
    return Curve(a, b)


def family_triangle(n: int) -> Curve:
    """Rational triangles whose base is ``n`` times the altitude.

    Put the altitude at 1 and the base at n, split by the foot of the altitude
    into ``c1 + c2 = n``.  The two slant sides are rational iff
    ``1 + c1^2`` and ``1 + c2^2`` are squares, i.e. ``c1 = (t^2 - 1)/(2t)`` and
    ``c2 = (w^2 - 1)/(2w)``.  Then ``(t + w)(t w - 1) = 2 n t w``; with
    ``P = t w`` and ``S = t + w = 2nP/(P - 1)`` the roots t, w are rational iff
    ``S^2 - 4P`` is a square, i.e. ``-P^3 + (n^2 + 2) P^2 - P`` is a square.
    Setting ``x = -P`` gives ``y^2 = x^3 + (n^2 + 2) x^2 + x``.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    return Curve(n * n + 2, 1)


def triangle_from_point(n: int, x) -> tuple:
    """Undo :func:`family_triangle`: the triangle ``(side1, side2, base)`` with altitude 1, or None."""
    from fractions import Fraction
    from math import isqrt

    P = -Fraction(x)
    if P == 1 or P == 0:
        return None
    S = 2 * n * P / (P - 1)
    disc = S * S - 4 * P
    if disc < 0:
        return None
    rn, rd = isqrt(disc.numerator), isqrt(disc.denominator)
    if rn * rn != disc.numerator or rd * rd != disc.denominator:
        return None
    root = Fraction(rn, rd)
    t, w = (S + root) / 2, (S - root) / 2
    if t == 0 or w == 0:
        return None
    c1, c2 = (t * t - 1) / (2 * t), (w * w - 1) / (2 * w)
    side1, side2 = (t * t + 1) / (2 * t), (w * w + 1) / (2 * w)
    return abs(side1), abs(side2), c1 + c2


FAMILIES = {
    "congruent": family_congruent,
    "bremner": family_bremner,
    "triangle": family_triangle,
}


def parse_family(text: str) -> Curve:
    """Parse ``name:n`` such as ``congruent:157``."""
    name, _, arg = text.partition(":")
    if name not in FAMILIES or not arg:
        raise ValueError(f"unknown family {text!r}; expected one of {', '.join(f'{k}:n' for k in FAMILIES)}")
    try:
        n = int(arg)
    except ValueError:
        raise ValueError(f"family parameter must be an integer, got {arg!r}") from None
    return FAMILIES[name](n)
