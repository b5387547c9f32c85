"""Banded exhaustive search for values of binary forms that are (multiples of) squares.

A *band* is the set of primitive pairs ``(f, g)`` with ``|f| + |g| = band``,
taken up to the overall sign ``(f, g) ~ (-f, -g)`` since all forms searched
here have even degree.  Within a band the order is fixed: ``f`` runs from
``band - 1`` down to ``1`` and for each ``f`` the pair ``(f, +g)`` precedes
``(f, -g)``.  Band 1 is ``(1, 0)`` then ``(0, 1)``.

Candidates are screened with square-residue tables (numpy, int64) before any
exact big-integer square root is taken.
"""

from __future__ import annotations

import concurrent.futures as cf
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator, Sequence

import numpy as np

from .forms import ConicForm, ConicSolution, QuarticForm

MODULI = (64, 63, 65, 11)
_SQUARE_TABLES = {m: np.isin(np.arange(m), np.arange(m) ** 2 % m) for m in MODULI}
CHUNK_BANDS = 32


@dataclass(frozen=True)
class SearchBounds:
    """Band limits for each stage of the descent.

    ``s1a..s1b`` for the first conic, up to ``s2b`` for the conic fixing
    ``k0``, up to ``s3b`` for the first quartic (4-descent) or the conic
    fixing ``k1`` (8-descent), up to ``s4b`` for the second quartic.
    ``s2a`` is 1 when the trivial seed ``(p, q) = (1, 0)`` should be tried.
    """

    s1a: int = 2
    s1b: int = 200
    s2b: int = 99
    s3b: int = 99
    s4b: int = 199
    s2a: int = 1

    def __post_init__(self):
        if not 2 <= self.s1a <= self.s1b:
            raise ValueError(f"need 2 <= s1a <= s1b, got {self.s1a}, {self.s1b}")
        for name in ("s2b", "s3b", "s4b"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be at least 2")
        if self.s2a not in (1, 2):
            raise ValueError("s2a must be 1 or 2")


_CACHE_BANDS = 512


@lru_cache(maxsize=_CACHE_BANDS)
def _band_pairs_cached(band: int) -> tuple[np.ndarray, np.ndarray]:
    return _make_band(band)


def _make_band(band: int) -> tuple[np.ndarray, np.ndarray]:
    if band == 1:
        return np.array([1, 0], dtype=np.int64), np.array([0, 1], dtype=np.int64)
    f = np.arange(band - 1, 0, -1, dtype=np.int64)
    f = f[np.gcd(f, band) == 1]
    g = band - f
    return np.repeat(f, 2), np.column_stack((g, -g)).ravel()


def band_pairs(band: int) -> tuple[np.ndarray, np.ndarray]:
    """The canonical list of primitive pairs on a band as two int64 arrays."""
    if band < 1:
        raise ValueError("band must be positive")
    if band <= _CACHE_BANDS:
        return _band_pairs_cached(band)
    return _make_band(band)


def iter_band(band: int) -> Iterator[tuple[int, int]]:
    f, g = band_pairs(band)
    return zip(f.tolist(), g.tolist())


@lru_cache(maxsize=64)
def _pairs_range_cached(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    return _make_range(lo, hi)


def _make_range(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    parts = [band_pairs(b) for b in range(lo, hi + 1)]
    if not parts:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _pairs_range(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    if hi <= _CACHE_BANDS:
        return _pairs_range_cached(lo, hi)
    return _make_range(lo, hi)


def _residues(coeffs: Sequence[int], f: np.ndarray, g: np.ndarray, m: int) -> np.ndarray:
    """Values of the binary form with the given coefficients at ``(f, g)``, modulo ``m``."""
    deg = len(coeffs) - 1
    fm, gm = f % m, g % m
    fp = [np.ones_like(fm)]
    gp = [np.ones_like(gm)]
    for _ in range(deg):
        fp.append(fp[-1] * fm % m)
        gp.append(gp[-1] * gm % m)
    acc = np.zeros_like(fm)
    for i, c in enumerate(coeffs):
        acc = (acc + (c % m) * (fp[deg - i] * gp[i] % m)) % m
    return acc


def residue_mask(coeffs: Sequence[int], f: np.ndarray, g: np.ndarray, ks: Sequence[int] = (1,)) -> np.ndarray:
    """Pairs whose value times some ``k`` is a square modulo every sieve modulus.

    This never rejects a pair for which ``value / k`` is a perfect square.
    """
    keep = np.zeros(len(f), dtype=bool)
    vals = {m: _residues(coeffs, f, g, m) for m in MODULI}
    for k in ks:
        ok = np.ones(len(f), dtype=bool)
        for m in MODULI:
            ok &= _SQUARE_TABLES[m][vals[m] * (k % m) % m]
        keep |= ok
    return keep


# --- conics ----------------------------------------------------------------


def _match_k(value: int, ks: Sequence[int]) -> tuple[int, int] | None:
    for k in ks:
        if value % k == 0:
            w = value // k
            if w > 0:
                root = isqrt(w)
                if root * root == w:
                    return k, root
    return None


def search_conic_band(
    form: ConicForm, k_candidates: Sequence[int], band: int, use_sieve: bool = True
) -> ConicSolution | None:
    """First primitive ``(f, g)`` on ``band`` with ``form(f, g) = k * root^2``, ``root > 0``, ``k`` a candidate."""
    f, g = band_pairs(band)
    ks = list(k_candidates)
    if not ks:
        return None
    if use_sieve:
        idx = np.flatnonzero(residue_mask(form.coeffs, f, g, ks))
    else:
        idx = range(len(f))
    for i in idx:
        fi, gi = int(f[i]), int(g[i])
        hit = _match_k(form(fi, gi), ks)
        if hit:
            return ConicSolution(hit[0], hit[1], fi, gi)
    return None


# --- quartics --------------------------------------------------------------


def _quartic_hits_in(coeffs: tuple, lo: int, hi: int, use_sieve: bool = True) -> list[tuple[int, int, int]]:
    """All square values in bands ``lo..hi``, in canonical order."""
    f, g = _pairs_range(lo, hi)
    q = QuarticForm(coeffs)
    idx = np.flatnonzero(residue_mask(coeffs, f, g)) if use_sieve else range(len(f))
    out = []
    for i in idx:
        r, s = int(f[i]), int(g[i])
        val = q(r, s)
        if val >= 0:
            z = isqrt(val)
            if z * z == val:
                out.append((r, s, z))
    return out


def search_quartic_band(q: QuarticForm, band: int, use_sieve: bool = True) -> tuple[int, int, int] | None:
    """First ``(r, s, z)`` on ``band`` with ``q(r, s) = z^2``."""
    hits = _quartic_hits_in(q.c, band, band, use_sieve)
    return hits[0] if hits else None


def _chunks(lo: int, hi: int, size: int) -> list[tuple[int, int]]:
    return [(b, min(b + size - 1, hi)) for b in range(lo, hi + 1, size)]


class BandSearcher:
    """Runs quartic band searches serially or across a process pool.

    Hits are always produced in canonical order (lowest band first), so the
    first accepted hit does not depend on the number of workers.
    """

    def __init__(self, workers: int = 1, chunk: int = CHUNK_BANDS):
        self.workers = max(1, int(workers))
        self.chunk = chunk
        self._pool: cf.ProcessPoolExecutor | None = None
        self.pairs_tested = 0

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(cancel_futures=True)
            self._pool = None

    @property
    def pool(self) -> cf.ProcessPoolExecutor:
        if self._pool is None:
            self._pool = cf.ProcessPoolExecutor(max_workers=self.workers)
        return self._pool

    def quartic_hits(self, q: QuarticForm, lo: int, hi: int) -> Iterator[tuple[int, int, int]]:
        """Lazily yield every square value of ``q`` over bands ``lo..hi`` in canonical order."""
        chunks = _chunks(lo, hi, self.chunk)
        if self.workers == 1 or len(chunks) == 1:
            for a, b in chunks:
                self.pairs_tested += len(_pairs_range(a, b)[0])
                yield from _quartic_hits_in(q.c, a, b)
            return
        # keep `workers` chunks in flight, consume strictly in order
        futures: list[cf.Future] = []
        pending = iter(chunks)
        for a, b in pending:
            futures.append(self.pool.submit(_quartic_hits_in, q.c, a, b))
            if len(futures) >= self.workers:
                break
        pos = 0
        try:
            while pos < len(futures):
                hits = futures[pos].result()
                a, b = chunks[pos]
                self.pairs_tested += len(_pairs_range(a, b)[0])
                nxt = next(pending, None)
                if nxt is not None:
                    futures.append(self.pool.submit(_quartic_hits_in, q.c, *nxt))
                yield from hits
                pos += 1
        finally:
            for fut in futures[pos:]:
                fut.cancel()


def naive_quartic_hits(q: QuarticForm, lo: int, hi: int) -> list[tuple[int, int, int]]:
    """Reference double loop over the same bands, without sieve or numpy."""
    out = []
    for band in range(lo, hi + 1):
        pairs = [(1, 0), (0, 1)] if band == 1 else [
            (f, sg * (band - f)) for f in range(band - 1, 0, -1) if gcd(f, band) == 1 for sg in (1, -1)
        ]
        for r, s in pairs:
            val = q(r, s)
            if val >= 0 and isqrt(val) ** 2 == val:
                out.append((r, s, isqrt(val)))
    return out
