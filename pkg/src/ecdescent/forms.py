"""Conics and binary quartics arising in the 4- and 8-descent, and their algebra.

Binary quadratic forms are stored as coefficient triples ``(A, B, C)`` meaning
``A*x**2 + B*x*y + C*y**2``; binary quartics as 5-tuples, highest power of the
first variable first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import (
    content,
    is_square,
    square_content,
    squarefree_decompose,
    squarefree_divisors,
    trial_factor,
)

Triple = tuple[int, int, int]
Quintuple = tuple[int, int, int, int, int]


@dataclass(frozen=True)
class Curve:
    """``y^2 = x^3 + a x^2 + b x`` with integer coefficients."""

    a: int
    b: int

    def __post_init__(self):
        if self.b == 0 or self.a * self.a - 4 * self.b == 0:
            raise ValueError(f"singular curve y^2 = x^3 + {self.a}x^2 + {self.b}x")

    @property
    def disc2(self) -> int:
        """``a^2 - 4b``, the discriminant of ``x^2 + a x + b``."""
        return self.a * self.a - 4 * self.b

    def rhs(self, x):
        return x * (x * (x + self.a) + self.b)

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return y * y == self.rhs(x)

    def isogenous(self) -> "Curve":
        """The 2-isogenous curve ``y^2 = x^3 - 2a x^2 + (a^2 - 4b) x``."""
        return Curve(-2 * self.a, self.disc2)

    def __str__(self) -> str:
        return f"y^2 = x^3 + ({self.a})x^2 + ({self.b})x"


@dataclass(frozen=True)
class ConicForm:
    A: int
    B: int
    C: int

    def __post_init__(self):
        if self.A == 0 and self.B == 0 and self.C == 0:
            raise ValueError("zero conic form")

    def __call__(self, f: int, g: int) -> int:
        return self.A * f * f + self.B * f * g + self.C * g * g

    @property
    def coeffs(self) -> Triple:
        return (self.A, self.B, self.C)

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C


@dataclass(frozen=True)
class ConicSolution:
    """``k * root**2 == form(f, g)`` with ``gcd(f, g) == 1``."""

    k: int
    root: int
    f: int
    g: int

    def satisfies(self, form: ConicForm) -> bool:
        return self.k * self.root * self.root == form(self.f, self.g)


@dataclass(frozen=True)
class QuarticForm:
    c: Quintuple

    def __post_init__(self):
        if len(self.c) != 5:
            raise ValueError("a binary quartic needs 5 coefficients")
        if self.c[0] == 0 and self.c[4] == 0:
            raise ValueError(f"quartic {self.c} has zero leading and trailing coefficients")

    def __call__(self, r: int, s: int) -> int:
        c1, c2, c3, c4, c5 = self.c
        r2, s2 = r * r, s * s
        return c1 * r2 * r2 + c2 * r2 * r * s + c3 * r2 * s2 + c4 * r * s2 * s + c5 * s2 * s2

    def reduced(self) -> tuple["QuarticForm", int]:
        """Divide out the largest square ``m^2`` in the content; return ``(Q, m)``."""
        m = square_content(self.c)
        if m == 1:
            return self, 1
        return QuarticForm(tuple(x // (m * m) for x in self.c)), m

    def invariants(self) -> tuple[int, int]:
        a, b, c, d, e = self.c
        I = 12 * a * e - 3 * b * d + c * c
        J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c**3
        return I, J

    @property
    def discriminant(self) -> int:
        I, J = self.invariants()
        return (4 * I**3 - J * J) // 27

    def negate_second(self) -> "QuarticForm":
        """The quartic ``q(r, -s)``."""
        c1, c2, c3, c4, c5 = self.c
        return QuarticForm((c1, -c2, c3, -c4, c5))

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.c)) + ")"


@dataclass(frozen=True)
class QuarticFactorization:
    """``quartic = (u1 r^2 + u2 r s + u3 s^2)(v1 r^2 + v2 r s + v3 s^2)``."""

    u: Triple
    v: Triple

    def expand(self) -> Quintuple:
        u1, u2, u3 = self.u
        v1, v2, v3 = self.v
        return (u1 * v1, u1 * v2 + u2 * v1, u1 * v3 + u2 * v2 + u3 * v1, u2 * v3 + u3 * v2, u3 * v3)

    def swapped(self) -> "QuarticFactorization":
        return QuarticFactorization(self.v, self.u)


@dataclass(frozen=True)
class PellReduction:
    """``a^2 - 4b = alpha * beta^2`` and the form ``F^2 - alpha G^2 = d H^2``."""

    alpha: int
    beta: int
    d: int
    a: int

    @property
    def form(self) -> ConicForm:
        return ConicForm(1, 0, -self.alpha)

    def lift(self, F: int, G: int, H: int) -> tuple[int, int, int]:
        """Map ``d H^2 = F^2 - alpha G^2`` to a primitive ``(h, f, g)`` on the first conic."""
        f = self.beta * F - self.a * G
        g = 2 * self.d * G
        h = self.d * self.beta * H
        c = gcd(f, g)
        if c == 0:
            raise ValueError("degenerate Pell solution")
        if g < 0:
            c = -c
        return h // c, f // c, g // c


def eval2(t: Triple, x: int, y: int) -> int:
    return t[0] * x * x + t[1] * x * y + t[2] * y * y


def compose2(form: Triple, pmap: Triple, qmap: Triple) -> Quintuple:
    """Coefficients of ``form(pmap(r,s), qmap(r,s))`` as a binary quartic in ``(r, s)``."""

    def mul(x: Triple, y: Triple) -> Quintuple:
        return (
            x[0] * y[0],
            x[0] * y[1] + x[1] * y[0],
            x[0] * y[2] + x[1] * y[1] + x[2] * y[0],
            x[1] * y[2] + x[2] * y[1],
            x[2] * y[2],
        )

    A, B, C = form
    pp, pq, qq = mul(pmap, pmap), mul(pmap, qmap), mul(qmap, qmap)
    return tuple(A * x + B * y + C * z for x, y, z in zip(pp, pq, qq))


# --- first descent ---------------------------------------------------------


def first_conic(curve: Curve, d: int) -> ConicForm:
    """``h^2 = d f^2 + a f g + (b/d) g^2``."""
    if d == 0 or curve.b % d:
        raise ValueError(f"{d} does not divide b = {curve.b}")
    return ConicForm(d, curve.a, curve.b // d)


def pell_reduce(curve: Curve, d: int) -> PellReduction:
    if curve.b % d:
        raise ValueError(f"{d} does not divide b = {curve.b}")
    alpha, beta = squarefree_decompose(curve.disc2)
    return PellReduction(alpha, beta, d, curve.a)


def descent_pair(curve: Curve, d: int, sol: ConicSolution) -> tuple[ConicForm, ConicForm]:
    """The two quadratics whose values must be ``k u^2`` and ``k v^2`` for a point with x = d*f/g."""
    h0, f0, g0 = sol.root, sol.f, sol.g
    if g0 == 0:
        raise ValueError("conic solution with g0 = 0 cannot seed the descent")
    return ConicForm(g0, 0, -g0 * d), ConicForm(f0, -2 * h0, curve.a * g0 + d * f0)


def k0_divisor_bound(curve: Curve, g0: int) -> int:
    """Resultant of the descent pair; every admissible k0 divides it."""
    if g0 == 0:
        raise ValueError("g0 must be nonzero")
    return g0**4 * curve.disc2


def k0_candidates(curve: Curve, g0: int, hints=()) -> list[int]:
    # g0^4 and g0 have the same squarefree divisors; factor the small one
    fac_hints = list(hints) + trial_factor(g0).primes
    return squarefree_divisors(g0 * curve.disc2, hints=fac_hints)


@dataclass(frozen=True)
class FirstParameterization:
    """``p(r,s)``, ``q(r,s)`` with ``g0 p^2 - g0 d q^2 = k0 * w(r,s)^2``."""

    p: Triple
    q: Triple
    w: Triple
    pell: bool = False

    def __call__(self, r: int, s: int) -> tuple[int, int]:
        return eval2(self.p, r, s), eval2(self.q, r, s)


def parameterize_first(k0: int, u0: int, p0: int, q0: int, g0: int, d: int) -> FirstParameterization:
    """Rational parameterization of ``k u^2 = g0 p^2 - g0 d q^2`` through a seed solution.

    With ``q0 == 0`` the chord construction degenerates, so the classical
    ``p = p0 (r^2 + d s^2), q = 2 p0 r s`` is used instead.
    """
    if k0 * u0 * u0 != g0 * p0 * p0 - g0 * d * q0 * q0:
        raise ValueError("seed does not satisfy k0 u0^2 = g0 p0^2 - g0 d q0^2")
    if q0 == 0:
        return FirstParameterization((p0, 0, p0 * d), (0, 2 * p0, 0), (u0, 0, -u0 * d), pell=True)
    p = (-p0 * k0, 2 * u0 * k0, -p0 * g0)
    q = (-q0 * k0, 0, q0 * g0)
    # g0 p^2 - g0 d q^2 == k0 * w^2 identically
    w = (k0 * u0, -2 * g0 * p0, g0 * u0)
    return FirstParameterization(p, q, w)


class DegenerateQuartic(ValueError):
    """The quartic vanishes at both (1, 0) and (0, 1).

    That happens only when the conic value vanishes in both seed directions,
    and those zeros map to the torsion point x = 0.
    """


def quartic_from_first_descent(a, d, k0, u0, p0, q0, f0, g0, h0) -> QuarticForm:
    """``z^2 = k0 * (f0 p^2 - 2 h0 p q + (a g0 + d f0) q^2)`` after substituting the chord parameterization.

    Raises :class:`DegenerateQuartic` when both end coefficients vanish.
    """
    if q0 == 0:
        par = parameterize_first(k0, u0, p0, q0, g0, d)
        z = compose2((k0 * f0, -2 * k0 * h0, k0 * (a * g0 + d * f0)), par.p, par.q)
        if z[0] == 0 and z[4] == 0:
            raise DegenerateQuartic(f"first-descent quartic {z} vanishes at (1, 0) and (0, 1)")
        return QuarticForm(z)
    t = a * g0 * q0 * q0 + d * f0 * q0 * q0 + f0 * p0 * p0
    z1 = k0**3 * (t - 2 * h0 * p0 * q0)
    z2 = 4 * u0 * k0**3 * (h0 * q0 - f0 * p0)
    z3 = 2 * k0**2 * (f0 * (2 * u0 * u0 * k0 - d * g0 * q0 * q0 + g0 * p0 * p0) - a * g0 * g0 * q0 * q0)
    z4 = -4 * u0 * g0 * k0**2 * (f0 * p0 + h0 * q0)
    z5 = g0 * g0 * k0 * (t + 2 * h0 * p0 * q0)
    if z1 == 0 and z5 == 0:
        raise DegenerateQuartic(f"first-descent quartic {(z1, z2, z3, z4, z5)} vanishes at (1, 0) and (0, 1)")
    return QuarticForm((z1, z2, z3, z4, z5))


# --- factoring the quartic -------------------------------------------------


def _primitive(t: Triple) -> Triple:
    c = content(t)
    t = tuple(x // c for x in t)
    lead = next(x for x in t if x)
    return t if lead > 0 else tuple(-x for x in t)


def has_rational_roots(quad: Triple) -> bool:
    """True iff ``A x^2 + B x y + C y^2`` splits into rational linear factors."""
    A, B, C = quad
    if A == 0 and B == 0 and C == 0:
        raise ValueError("zero quadratic")
    return is_square(B * B - 4 * A * C)


def _signed_divisors(n: int, hints=()) -> list[int]:
    fac = trial_factor(n, hints=hints)
    divs = [1]
    for p, e in fac.prime_powers:
        divs = [x * p**i for x in divs for i in range(e + 1)]
    if fac.cofactor > 1:
        divs += [x * fac.cofactor for x in divs]
    divs.sort()
    return [s * x for x in divs for s in (1, -1)]


def factor_quartic(q: QuarticForm, hints=()) -> list[QuarticFactorization]:
    """All splittings of ``q`` into two integer quadratics without rational roots.

    Each splitting is returned once up to swapping the factors, sign and
    rational rescaling; the ``v`` factor is primitive with positive leading
    coefficient and ``u`` absorbs the rest.
    """
    z1, z2, z3, z4, z5 = q.c
    if z1 == 0 or z5 == 0:
        raise ValueError("factor_quartic needs nonzero extreme coefficients")
    seen: set = set()
    out: list[QuarticFactorization] = []
    for u1 in _signed_divisors(z1, hints):
        v1 = z1 // u1
        for u3 in _signed_divisors(z5, hints):
            v3 = z5 // u3
            det = v1 * u3 - u1 * v3
            if det:
                # u1 v2 + v1 u2 = z2, u3 v2 + v3 u2 = z4
                nu2 = u3 * z2 - u1 * z4
                nv2 = v1 * z4 - v3 * z2
                if nu2 % det or nv2 % det:
                    continue
                cands = [(nu2 // det, nv2 // det)]
            else:
                # degenerate system: v proportional to u at both ends
                if u1 * z4 != u3 * z2:
                    continue
                rhs = z3 - u1 * v3 - u3 * v1
                # v1 u2^2 - z2 u2 + rhs u1 = 0
                disc = z2 * z2 - 4 * v1 * rhs * u1
                if not is_square(disc):
                    continue
                root = isqrt(disc)
                cands = []
                for num in {z2 + root, z2 - root}:
                    if num % (2 * v1) == 0:
                        u2 = num // (2 * v1)
                        if (z2 - v1 * u2) % u1 == 0:
                            cands.append((u2, (z2 - v1 * u2) // u1))
            for u2, v2 in cands:
                u, v = (u1, u2, u3), (v1, v2, v3)
                if QuarticFactorization(u, v).expand() != q.c:
                    continue
                if has_rational_roots(u) or has_rational_roots(v):
                    continue
                key = frozenset((_primitive(u), _primitive(v)))
                if key in seen:
                    continue
                seen.add(key)
                out.append(_normalize(q, u, v))
    return out


def _normalize(q: QuarticForm, u: Triple, v: Triple) -> QuarticFactorization:
    pv = _primitive(v)
    # u = q / pv, exact because u*v = q and pv = v / c
    c = Fraction(v[0], pv[0]) if pv[0] else Fraction(v[1], pv[1]) if pv[1] else Fraction(v[2], pv[2])
    nu = tuple(int(x * c) for x in u)
    return QuarticFactorization(nu, pv)


def resultant_k1(fac: QuarticFactorization) -> int:
    """Resultant of the two quadratic factors; every admissible k1 divides it."""
    u1, u2, u3 = fac.u
    v1, v2, v3 = fac.v
    res = (
        u1 * u1 * v3 * v3
        - u1 * u2 * v2 * v3
        - 2 * u1 * u3 * v1 * v3
        + u1 * u3 * v2 * v2
        + u2 * u2 * v1 * v3
        - u2 * u3 * v1 * v2
        + u3 * u3 * v1 * v1
    )
    if res == 0:
        raise ValueError("factors share a root; resultant vanishes")
    return res


# --- second descent --------------------------------------------------------


@dataclass(frozen=True)
class SecondParameterization:
    r: Triple
    s: Triple

    def __call__(self, i: int, j: int) -> tuple[int, int]:
        return eval2(self.r, i, j), eval2(self.s, i, j)


def parameterize_second(k1: int, t1: int, r1: int, s1: int, v: Triple) -> SecondParameterization:
    """Chord parameterization of ``k1 t^2 = v1 r^2 + v2 r s + v3 s^2`` through ``(t1, r1, s1)``."""
    v1, v2, v3 = v
    if k1 * t1 * t1 != v1 * r1 * r1 + v2 * r1 * s1 + v3 * s1 * s1:
        raise ValueError("seed does not satisfy k1 t1^2 = v(r1, s1)")
    return SecondParameterization(
        (k1 * r1, -2 * k1 * t1, r1 * v1 + s1 * v2),
        (s1 * k1, 0, -s1 * v1),
    )


def quartic_from_second_descent(k1: int, t1: int, r1: int, s1: int, u: Triple, v: Triple) -> QuarticForm:
    """``k1 * u(r(i,j), s(i,j))`` written out coefficient by coefficient."""
    u1, u2, u3 = u
    v1, v2, v3 = v
    c1 = k1**3 * (r1 * r1 * u1 + r1 * s1 * u2 + s1 * s1 * u3)
    c2 = -2 * k1**3 * t1 * (2 * r1 * u1 + s1 * u2)
    c3 = k1**2 * (
        4 * k1 * t1 * t1 * u1 + 2 * r1 * r1 * u1 * v1 + 2 * r1 * s1 * u1 * v2 + s1 * s1 * (u2 * v2 - 2 * u3 * v1)
    )
    c4 = -2 * k1**2 * t1 * (2 * r1 * u1 * v1 + s1 * (2 * u1 * v2 - u2 * v1))
    c5 = k1 * (
        r1 * r1 * u1 * v1 * v1
        + r1 * s1 * v1 * (2 * u1 * v2 - u2 * v1)
        + s1 * s1 * (u1 * v2 * v2 - v1 * (u2 * v2 - u3 * v1))
    )
    return QuarticForm((c1, c2, c3, c4, c5))
