"""Local solubility of ``z^2 = q(r, s)`` for an integer binary quartic ``q``.

A quartic that is insoluble over the reals or over some ``Q_p`` has no
rational points, so there is no point in searching it.  Only the places that
can obstruct are checked: the reals, ``p = 2`` and the odd primes dividing the
discriminant (an odd prime of good reduction always has a smooth ``F_p`` point,
which lifts by Hensel's lemma).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import trial_factor, vp
from .forms import QuarticForm

SOLUBILITY_TRIAL_LIMIT = 10**4
# below this the residue classes are simply enumerated
SMALL_PRIME = 60
_MAX_DEPTH_EXTRA = 12


@dataclass
class LocalVerdict:
    """Outcome of the local test.

    ``obstruction`` is ``"real"`` or the prime at which the quartic has no
    points; it is None when no obstruction was found.  ``unproven`` marks a
    positive verdict that rests on an incompletely factored discriminant or
    on a search that hit its depth cap.
    """

    soluble: bool
    obstruction: object = None
    unproven: bool = False
    primes: list[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.soluble

    def as_dict(self) -> dict:
        return {
            "soluble": self.soluble,
            "obstruction": None if self.obstruction is None else str(self.obstruction),
            "unproven": self.unproven,
        }


# --- reals -----------------------------------------------------------------


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    # coefficient lists, highest degree first
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _sign_changes(seq: list[Fraction]) -> int:
    signs = [x > 0 for x in seq if x != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_real_roots(coeffs) -> int:
    """Number of distinct real roots of a univariate polynomial (highest degree first), by Sturm's theorem."""
    p = [Fraction(c) for c in coeffs]
    while p and p[0] == 0:
        p.pop(0)
    n = len(p) - 1
    if n <= 0:
        return 0
    dp = [c * (n - i) for i, c in enumerate(p[:-1])]
    chain = [p, dp]
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])

    def at_inf(sign: int) -> list[Fraction]:
        return [c[0] * (sign ** (len(c) - 1)) for c in chain]

    return _sign_changes(at_inf(-1)) - _sign_changes(at_inf(1))


def real_soluble(q: QuarticForm) -> bool:
    """``q`` takes a nonnegative value at some real ``(r, s) != (0, 0)``."""
    c1, c2, c3, c4, c5 = q.c
    if c1 >= 0 or c5 >= 0:
        return True
    return count_real_roots(q.c) > 0


# --- p-adic ----------------------------------------------------------------


def _taylor(coeffs_low: list[int], x0: int, step: int) -> list[int]:
    """Coefficients (low first) of ``t -> g(x0 + step * t)``."""
    out = [0] * len(coeffs_low)
    # Horner with the linear polynomial x0 + step*t
    for c in reversed(coeffs_low):
        nxt = [0] * len(coeffs_low)
        for i, a in enumerate(out):
            if a:
                nxt[i] += a * x0
                if i + 1 < len(nxt):
                    nxt[i + 1] += a * step
        nxt[0] += c
        out = nxt
    return out


def is_padic_square(n: int, p: int) -> bool:
    """True iff the nonzero integer ``n`` is a square in ``Q_p``."""
    v = vp(n, p)
    if v % 2:
        return False
    u = n // p**v
    if p == 2:
        return u % 8 == 1
    return pow(u % p, (p - 1) // 2, p) == 1


class _DepthCap(Exception):
    pass


def _zp_soluble_simple(g: list[int], p: int, x0: int, n: int, cap: int) -> bool:
    """Does some ``x`` in ``x0 + p^n Z_p`` make ``g(x)`` a square in ``Q_p``?

    Plain subdivision: a class is settled once the constant term of the
    Taylor expansion dominates the rest strongly enough to fix the square class.
    """
    h = _taylor(g, x0, p**n)
    if h[0] == 0:
        return True
    if is_padic_square(h[0], p):
        return True
    v0 = vp(h[0], p)
    vrest = min((vp(c, p) for c in h[1:] if c), default=10**9)
    margin = 3 if p == 2 else 1
    if v0 + margin <= vrest:
        return False
    if n >= cap:
        raise _DepthCap
    step = p**n
    return any(_zp_soluble_simple(g, p, x0 + c * step, n + 1, cap) for c in range(p))


# polynomial arithmetic over F_p, coefficient lists low degree first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _trim(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _ppow(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def roots_mod_p(poly: list[int], p: int) -> list[int]:
    """Distinct roots in ``F_p`` of a nonzero polynomial (low degree first), ``p`` an odd prime."""
    f = _trim([c % p for c in poly])
    if len(f) <= 1:
        return []
    if p < 4 * SMALL_PRIME:
        return [x for x in range(p) if sum(c * pow(x, i, p) for i, c in enumerate(f)) % p == 0]
    # product of the distinct linear factors
    xp = _ppow([0, 1], p, f, p)
    lin = _pgcd(f, _psub(xp, [0, 1], p), p)
    out: list[int] = []
    stack = [lin]
    a = 0
    while stack:
        h = stack.pop()
        if len(h) <= 1:
            continue
        if len(h) == 2:
            out.append((-h[0]) * pow(h[1], -1, p) % p)
            continue
        while True:
            a += 1
            split = _pgcd(h, _psub(_ppow([a, 1], (p - 1) // 2, h, p), [1], p), p)
            if 1 < len(split) < len(h):
                break
        other = _pdiv_exact(h, split, p)
        stack += [split, other]
    return sorted(out)


def _pdiv_exact(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    for k in range(len(q) - 1, -1, -1):
        f = a[k + len(b) - 1] * inv % p
        q[k] = f
        for i, c in enumerate(b):
            a[k + i] = (a[k + i] - f * c) % p
    return _trim(q)


def _const_times_square(f: list[int], p: int) -> tuple[bool, int]:
    """If ``f = c * s(x)^2`` over ``F_p`` return ``(True, c)``."""
    deg = len(f) - 1
    if deg % 2:
        return False, 0
    c = f[-1]
    inv = pow(c, -1, p)
    m = [x * inv % p for x in f]
    if deg == 0:
        return True, c
    inv2 = pow(2, -1, p)
    if deg == 2:
        return (m[1] * m[1] - 4 * m[0]) % p == 0, c
    alpha = m[3] * inv2 % p
    beta = (m[2] - alpha * alpha) * inv2 % p
    ok = (2 * alpha * beta - m[1]) % p == 0 and (beta * beta - m[0]) % p == 0
    return ok, c


def _zp_soluble_roots(g: list[int], p: int, x0: int, n: int, cap: int) -> bool:
    """Same question as ``_zp_soluble_simple`` for odd ``p``, recursing only into roots mod p."""
    h = _taylor(g, x0, p**n)
    if h[0] == 0:
        return True
    m = min(vp(c, p) for c in h if c)
    hbar = _trim([(c // p**m) % p for c in h])
    step = p**n
    if m % 2 == 0:
        legendre_one = lambda v: pow(v, (p - 1) // 2, p) == 1  # noqa: E731
        if p < SMALL_PRIME:
            for c in range(p):
                val = sum(co * pow(c, i, p) for i, co in enumerate(hbar)) % p
                if val and legendre_one(val):
                    return True
        else:
            is_sq, const = _const_times_square(hbar, p)
            if not is_sq:
                # Weil: a non-square polynomial of degree <= 4 takes nonzero square values for p >= 60
                return True
            if legendre_one(const):
                return True
    if n >= cap:
        raise _DepthCap
    return any(_zp_soluble_roots(g, p, x0 + c * step, n + 1, cap) for c in roots_mod_p(hbar, p))


def padic_soluble(q: QuarticForm, p: int, method: str = "auto", extra_depth: int = _MAX_DEPTH_EXTRA) -> bool | None:
    """``z^2 = q(r, s)`` has a nontrivial solution over ``Q_p``; None if the depth cap was hit."""
    disc = q.discriminant
    cap = (vp(disc, p) if disc else 40) + extra_depth + (6 if p == 2 else 0)
    if method == "auto":
        method = "simple" if p == 2 or p < SMALL_PRIME else "roots"
    solver = _zp_soluble_simple if method == "simple" else _zp_soluble_roots
    c1, c2, c3, c4, c5 = q.c
    affine = [c5, c4, c3, c2, c1]  # q(x, 1), low degree first
    at_infinity = [c1, c2, c3, c4, c5]  # q(1, y)
    try:
        return solver(affine, p, 0, 0, cap) or solver(at_infinity, p, 0, 1, cap)
    except _DepthCap:
        return None


def bad_primes(q: QuarticForm, limit: int = SOLUBILITY_TRIAL_LIMIT, hints=()) -> tuple[list[int], bool]:
    """Primes that can obstruct (2 and odd divisors of the discriminant) and whether the list is complete."""
    disc = q.discriminant
    if disc == 0:
        fac = trial_factor(sum(abs(c) for c in q.c) or 1, limit, hints)
        return sorted({2, *fac.primes}), False
    fac = trial_factor(disc, limit, hints)
    return sorted({2, *fac.primes}), fac.complete


def is_everywhere_locally_soluble(q: QuarticForm, limit: int = SOLUBILITY_TRIAL_LIMIT, hints=()) -> LocalVerdict:
    """Local test at the reals and at every prime that can obstruct.

    A False verdict always names the obstructing place.
    """
    if not any(q.c):
        raise ValueError("zero quartic")
    if not real_soluble(q):
        return LocalVerdict(False, "real")
    primes, complete = bad_primes(q, limit, hints)
    unproven = not complete
    for p in primes:
        ok = padic_soluble(q, p)
        if ok is None:
            unproven = True
        elif not ok:
            return LocalVerdict(False, p, primes=primes)
    return LocalVerdict(True, None, unproven, primes)
