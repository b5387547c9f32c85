"""Exact integer helpers: square tests, squarefree parts, divisors, trial division."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, prod

DEFAULT_TRIAL_LIMIT = 10**6


class IncompleteFactorizationWarning(UserWarning):
    """Raised (as a warning) when trial division leaves a composite cofactor."""


def integer_sqrt(n: int) -> tuple[int, bool]:
    """Return ``(floor(sqrt(n)), is_exact)`` for ``n >= 0``."""
    if n < 0:
        raise ValueError(f"integer_sqrt of negative number {n}")
    root = isqrt(n)
    return root, root * root == n


def is_square(n: int) -> bool:
    """True iff ``n`` is a perfect square (negative numbers never are)."""
    if n < 0:
        return False
    # quick reject: squares mod 16 are 0, 1, 4, 9
    if (0x213 >> (n & 15)) & 1 == 0:
        return False
    r = isqrt(n)
    return r * r == n


@lru_cache(maxsize=None)
def primes_up_to(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, strong probable prime above."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization; ``cofactor`` holds whatever trial division could not split.

    ``complete`` is False exactly when ``cofactor`` is composite (or of unknown status).
    """

    sign: int
    prime_powers: tuple[tuple[int, int], ...]
    cofactor: int = 1
    complete: bool = True

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.prime_powers]

    def value(self) -> int:
        return self.sign * self.cofactor * prod(p**e for p, e in self.prime_powers)


def _merge(powers: dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((p, e) for p, e in powers.items() if e > 0))


def trial_factor(n: int, limit: int = DEFAULT_TRIAL_LIMIT, hints: tuple[int, ...] | list[int] = ()) -> Factorization:
    """Factor ``n`` by dividing out ``hints`` and then every prime up to ``limit``.

    A leftover cofactor that passes a primality check is accepted as a prime;
    otherwise the result is flagged incomplete and the cofactor is kept.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    powers: dict[int, int] = {}

    def strip(p: int) -> None:
        nonlocal m
        while m % p == 0:
            m //= p
            powers[p] = powers.get(p, 0) + 1

    for h in sorted(set(abs(h) for h in hints)):
        if h > 1 and m % h == 0:
            if is_probable_prime(h):
                strip(h)
            else:
                # composite hint: factor it and use its primes
                for p in trial_factor(h, limit).primes:
                    strip(p)
    if m > 1:
        for p in primes_up_to(limit):
            if m % p == 0:
                strip(p)
                if m == 1:
                    break
            if p * p > m:
                break
    cofactor, complete = 1, True
    if m > 1:
        if is_probable_prime(m):
            powers[m] = powers.get(m, 0) + 1
        else:
            r, exact = integer_sqrt(m)
            if exact and is_probable_prime(r):
                powers[r] = powers.get(r, 0) + 2
            else:
                cofactor, complete = m, False
    return Factorization(sign, _merge(powers), cofactor, complete)


def factor_or_warn(n: int, limit: int = DEFAULT_TRIAL_LIMIT, hints=()) -> Factorization:
    fac = trial_factor(n, limit, hints)
    if not fac.complete:
        warnings.warn(
            f"trial division up to {limit} left composite cofactor {fac.cofactor} of {n}; "
            "continuing with the divisors found",
            IncompleteFactorizationWarning,
            stacklevel=2,
        )
    return fac


def squarefree_decompose(n: int, limit: int = DEFAULT_TRIAL_LIMIT, hints=()) -> tuple[int, int]:
    """Write ``n = s * m**2`` with ``s`` squarefree and ``sign(s) == sign(n)``.

    If the factorization is incomplete, the unsplit cofactor is kept in ``s``
    (after removing it if it happens to be a perfect square).
    """
    if n == 0:
        raise ValueError("squarefree part of 0 is undefined")
    fac = trial_factor(n, limit, hints)
    s, m = fac.sign, 1
    for p, e in fac.prime_powers:
        m *= p ** (e // 2)
        if e % 2:
            s *= p
    if fac.cofactor > 1:
        r, exact = integer_sqrt(fac.cofactor)
        if exact:
            m *= r
        else:
            s *= fac.cofactor
    return s, m


def squarefree_part(n: int) -> int:
    return squarefree_decompose(n)[0]


def _order_key(k: int) -> tuple[int, int]:
    return abs(k), 0 if k > 0 else 1


def signed_squarefree_divisors(fac: Factorization) -> list[int]:
    """All ``+-q`` with ``q`` a product of distinct known primes of ``fac``.

    An unsplit cofactor is treated as one more "prime" so its divisor still shows up.
    """
    base = list(fac.primes)
    if fac.cofactor > 1:
        base.append(fac.cofactor)
    positive = [1]
    for p in base:
        positive += [q * p for q in positive]
    out = []
    for q in positive:
        out += [q, -q]
    return sorted(out, key=_order_key)


def squarefree_divisors(n: int, limit: int = DEFAULT_TRIAL_LIMIT, hints=()) -> list[int]:
    """Signed squarefree divisors of ``n``, ordered by ``|k|`` then positive first.

    >>> squarefree_divisors(16)
    [1, -1, 2, -2]
    """
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    return signed_squarefree_divisors(factor_or_warn(n, limit, hints))


def content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    return g


def square_content(coeffs) -> int:
    """Largest ``m`` such that ``m**2`` divides every coefficient."""
    g = content(coeffs)
    if g == 0:
        return 1
    return squarefree_decompose(g, limit=10**5)[1]


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer (large sentinel for 0)."""
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
