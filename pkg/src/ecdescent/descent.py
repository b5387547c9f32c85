"""The 4-descent and 8-descent pipelines, from divisors of ``b`` to a point on the curve."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable

from .arith import content, squarefree_decompose, squarefree_divisors, trial_factor
from .forms import (
    ConicForm,
    ConicSolution,
    Curve,
    DegenerateQuartic,
    FirstParameterization,
    QuarticFactorization,
    QuarticForm,
    SecondParameterization,
    descent_pair,
    factor_quartic,
    first_conic,
    k0_candidates,
    parameterize_first,
    parameterize_second,
    pell_reduce,
    quartic_from_first_descent,
    quartic_from_second_descent,
    resultant_k1,
)
from .search import BandSearcher, SearchBounds, search_conic_band
from .solubility import SOLUBILITY_TRIAL_LIMIT, is_everywhere_locally_soluble

log = logging.getLogger(__name__)

MODES = ("four", "eight", "auto")


class DescentError(RuntimeError):
    """An internal invariant failed (a claimed square was not a square, etc.)."""


# --- points ----------------------------------------------------------------


def _frac_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class RationalPoint:
    x: Fraction
    y: Fraction

    @classmethod
    def from_x(cls, curve: Curve, x: Fraction) -> "RationalPoint":
        y = _frac_sqrt(curve.rhs(x))
        if y is None:
            raise DescentError(f"x = {x} does not give a rational point on {curve}")
        return cls(x, y)

    def on(self, curve: Curve) -> bool:
        return curve.contains(self.x, self.y)

    def as_dict(self) -> dict:
        return {
            "x_num": str(self.x.numerator),
            "x_den": str(self.x.denominator),
            "y_num": str(self.y.numerator),
            "y_den": str(self.y.denominator),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RationalPoint":
        return cls(
            Fraction(int(data["x_num"]), int(data["x_den"])),
            Fraction(int(data["y_num"]), int(data["y_den"])),
        )


def naive_height(point: RationalPoint) -> float:
    """Half the log of the larger of ``|num(x)|`` and ``den(x)``, rounded to 2 decimals."""
    h = max(abs(point.x.numerator), point.x.denominator)
    return round(0.5 * math.log(h), 2)


def two_torsion_x(curve: Curve) -> list[Fraction]:
    xs = [Fraction(0)]
    disc = curve.disc2
    root = isqrt(disc) if disc >= 0 else -1
    if root >= 0 and root * root == disc:
        xs += sorted({Fraction(-curve.a + root, 2), Fraction(-curve.a - root, 2)}, reverse=True)
    return xs


def _add(curve: Curve, P, Q):
    # chord and tangent on y^2 = x^3 + a x^2 + b x; None is the point at infinity
    if P is None or Q is None:
        return Q if P is None else P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and y1 == -y2:
        return None
    if x1 == x2:
        lam = (3 * x1 * x1 + 2 * curve.a * x1 + curve.b) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - curve.a - x1 - x2
    return x3, -(y1 + lam * (x3 - x1))


def has_finite_order(curve: Curve, point: RationalPoint) -> bool:
    """Exact check using Mazur's bound: rational torsion has order at most 12."""
    P = (point.x, point.y)
    Q = P
    for _ in range(12):
        if Q is None:
            return True
        Q = _add(curve, Q, P)
    return Q is None


def is_torsion(point: RationalPoint, torsion_x: Iterable[Fraction], curve: Curve | None = None) -> bool:
    """Membership in the user's torsion x-list.

    With ``curve`` given the list is seeded with the 2-torsion, and any other
    point of finite order (3-torsion and so on) is caught by :func:`has_finite_order`.
    """
    if point.y == 0:
        return True
    xs = set(Fraction(x) for x in torsion_x)
    if curve is not None:
        xs.update(two_torsion_x(curve))
    if point.x in xs:
        return True
    return curve is not None and has_finite_order(curve, point)


# --- maps between models ---------------------------------------------------


@dataclass(frozen=True)
class ModelMap:
    """How a searched model relates to the curve the user asked about.

    ``kind`` is ``"identity"``, ``"shift"`` (searched x = original x - shift)
    or ``"dual"`` (searched curve is the 2-isogenous curve).
    """

    kind: str = "identity"
    shift: Fraction = Fraction(0)

    def to_target(self, target: Curve, point: RationalPoint) -> RationalPoint | None:
        if self.kind == "identity":
            return point
        if self.kind == "shift":
            return RationalPoint(point.x + self.shift, point.y)
        if self.kind == "dual":
            X, Y = point.x, point.y
            if X == 0:
                return None
            x = Y * Y / (4 * X * X)
            y = Y * (target.disc2 - X * X) / (8 * X * X)
            return RationalPoint(x, y)
        raise ValueError(self.kind)

    def as_dict(self) -> dict:
        return {"kind": self.kind, "shift": str(self.shift)}


def isogeny_shift_variants(curve: Curve) -> list[tuple[Curve, ModelMap]]:
    """The curve itself plus its models with a different 2-torsion point moved to the origin."""
    out = [(curve, ModelMap())]
    disc = curve.disc2
    root = isqrt(disc) if disc > 0 else -1
    if root < 0 or root * root != disc or (curve.a + root) % 2:
        return out
    for e in ((-curve.a + root) // 2, (-curve.a - root) // 2):
        shifted = Curve(curve.a + 3 * e, 3 * e * e + 2 * curve.a * e + curve.b)
        out.append((shifted, ModelMap("shift", Fraction(e))))
    return out


# --- trace -----------------------------------------------------------------


def _q(q: QuarticForm | None):
    return None if q is None else [str(c) for c in q.c]


@dataclass
class DescentTrace:
    """Everything needed to replay and re-check one descent path."""

    curve: tuple[int, int]
    mode: str
    d: int | None = None
    conic_solution: tuple[int, int, int] | None = None  # (h0, f0, g0)
    pell: bool = False
    k0: int | None = None
    first_solution: tuple[int, int, int] | None = None  # (u0, p0, q0)
    sign_variant: int = 1
    quartic4: QuarticForm | None = None
    factorization: QuarticFactorization | None = None
    k1_candidates: list[int] | None = None
    k1: int | None = None
    second_solution: tuple[int, int, int] | None = None  # (t1, r1, s1)
    quartic8: QuarticForm | None = None
    hit: tuple[int, int] | None = None
    model_point: RationalPoint | None = None  # the hit on the searched model, before mapping
    bands: dict = field(default_factory=lambda: {"s1": 0, "s2": 0, "s3": 0, "s4": 0})
    quartics: dict = field(default_factory=lambda: {"built": 0, "insoluble": 0, "searched": 0, "unproven": 0})
    verdicts: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    rejected_hits: int = 0

    def as_dict(self) -> dict:
        fac = self.factorization
        return {
            "curve": [str(self.curve[0]), str(self.curve[1])],
            "mode": self.mode,
            "d": None if self.d is None else str(self.d),
            "conic_solution": None if self.conic_solution is None else [str(x) for x in self.conic_solution],
            "pell": self.pell,
            "k0": None if self.k0 is None else str(self.k0),
            "first_solution": None if self.first_solution is None else [str(x) for x in self.first_solution],
            "sign_variant": self.sign_variant,
            "quartic4": _q(self.quartic4),
            "factorization": None if fac is None else {"u": [str(x) for x in fac.u], "v": [str(x) for x in fac.v]},
            "k1_candidates": None if self.k1_candidates is None else [str(x) for x in self.k1_candidates],
            "k1": None if self.k1 is None else str(self.k1),
            "second_solution": None if self.second_solution is None else [str(x) for x in self.second_solution],
            "quartic8": _q(self.quartic8),
            "hit": None if self.hit is None else [str(x) for x in self.hit],
            "model_point": None if self.model_point is None else self.model_point.as_dict(),
            "bands": dict(self.bands),
            "quartics": dict(self.quartics),
            "rejected_hits": self.rejected_hits,
            "verdicts": list(self.verdicts),
            "notes": list(self.notes),
        }

    def counters_state(self) -> dict:
        return {
            "bands": dict(self.bands),
            "quartics": dict(self.quartics),
            "verdicts": list(self.verdicts),
            "notes": list(self.notes),
            "rejected_hits": self.rejected_hits,
        }

    def restore_counters(self, state: dict) -> None:
        self.bands = dict(state["bands"])
        self.quartics = dict(state["quartics"])
        self.verdicts = list(state["verdicts"])
        self.notes = list(state["notes"])
        self.rejected_hits = state["rejected_hits"]


@dataclass
class DescentResult:
    point: RationalPoint | None
    trace: DescentTrace
    frontier: dict | None = None

    @property
    def found(self) -> bool:
        return self.point is not None


# --- recovery --------------------------------------------------------------


def _point_from_seed(curve: Curve, d: int, seed: tuple[int, int, int], p: int, q: int) -> RationalPoint | None:
    h0, f0, g0 = seed
    num = f0 * p * p - 2 * h0 * p * q + (curve.a * g0 + d * f0) * q * q
    den = g0 * p * p - g0 * d * q * q
    if num == 0 or den == 0:
        return None
    return RationalPoint.from_x(curve, Fraction(d * num, den))


def recover_point_4(
    curve: Curve, d: int, seed: tuple[int, int, int], par: FirstParameterization, r: int, s: int
) -> RationalPoint | None:
    """Point with ``x = d * (second quadratic)/(first quadratic)`` at ``(p, q) = par(r, s)``; None if degenerate."""
    p, q = par(r, s)
    return _point_from_seed(curve, d, seed, p, q)


def recover_point_8(
    curve: Curve,
    d: int,
    seed: tuple[int, int, int],
    par1: FirstParameterization,
    par2: SecondParameterization,
    i: int,
    j: int,
) -> RationalPoint | None:
    r, s = par2(i, j)
    if r == 0 and s == 0:
        return None
    return recover_point_4(curve, d, seed, par1, r, s)


# --- the pipeline ----------------------------------------------------------


def _orientations(fac: QuarticFactorization) -> list[QuarticFactorization]:
    """Both (target, searched) assignments; the factor with the smaller end coefficients is searched first."""

    def size(t):
        return (abs(t[0]), abs(t[2]), abs(t[1]))

    first = fac if size(fac.v) <= size(fac.u) else fac.swapped()
    return [first, first.swapped()]


def _reduce_form(form: ConicForm) -> tuple[ConicForm, int]:
    """Strip the square part of the content; returns the smaller form and the root scale."""
    c = content(form.coeffs)
    m = squarefree_decompose(c, limit=10**5)[1] if c > 1 else 1
    if m == 1:
        return form, 1
    return ConicForm(*(x // (m * m) for x in form.coeffs)), m


def _conic_real_soluble(form: ConicForm, k_sign: int = 1) -> bool:
    # k * h^2 = form has real solutions unless the form is definite of the wrong sign
    A, B, C = form.coeffs
    if form.discriminant >= 0:
        return True
    return (A > 0) == (k_sign > 0)


class _Found(Exception):
    def __init__(self, point: RationalPoint):
        self.point = point


class Descent:
    """One descent run over a single curve model.

    ``target``/``model_map`` describe the curve the user asked about when the
    search runs on a shifted or isogenous model; torsion rejection and the
    final on-curve check happen on the target.
    """

    def __init__(
        self,
        curve: Curve,
        bounds: SearchBounds | None = None,
        mode: str = "eight",
        torsion_x: Iterable = (),
        forced_d: int | None = None,
        workers: int = 1,
        factor_hints: Iterable[int] = (),
        target: Curve | None = None,
        model_map: ModelMap | None = None,
        solubility_limit: int = SOLUBILITY_TRIAL_LIMIT,
        on_checkpoint: Callable[[dict, DescentTrace], None] | None = None,
        frontier: dict | None = None,
    ):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.curve = curve
        self.bounds = bounds or SearchBounds()
        self.mode = mode
        self.target = target or curve
        self.model_map = model_map or ModelMap()
        self.torsion_x = [Fraction(x) for x in torsion_x]
        self.forced_d = forced_d
        self.hints = sorted(set(int(h) for h in factor_hints))
        self.solubility_limit = solubility_limit
        self.on_checkpoint = on_checkpoint
        self.resume = frontier
        self.searcher = BandSearcher(workers)
        self.trace = DescentTrace((curve.a, curve.b), mode)
        self._had_direct: set[int] = set()
        self._candidate: RationalPoint | None = None
        self._hint_primes = sorted(
            set(self.hints)
            | set(trial_factor(curve.b, hints=self.hints).primes)
            | set(trial_factor(curve.disc2, hints=self.hints).primes)
        )

    # -- helpers --

    def d_candidates(self) -> list[int]:
        if self.forced_d is not None:
            if self.curve.b % self.forced_d:
                raise ValueError(f"forced d = {self.forced_d} does not divide b = {self.curve.b}")
            return [self.forced_d]
        out = []
        for d in squarefree_divisors(self.curve.b, hints=self.hints):
            if not _conic_real_soluble(first_conic(self.curve, d)):
                self.trace.notes.append(f"d={d} skipped: conic negative definite")
                continue
            out.append(d)
        return out

    def _verdict(self, stage: str, q: QuarticForm) -> bool:
        self.trace.quartics["built"] += 1
        v = is_everywhere_locally_soluble(q, self.solubility_limit, self._hint_primes)
        entry = {"stage": stage, "quartic": [str(c) for c in q.c], **v.as_dict()}
        self.trace.verdicts.append(entry)
        if not v.soluble:
            self.trace.quartics["insoluble"] += 1
        elif v.unproven:
            self.trace.quartics["unproven"] += 1
        return v.soluble

    def _accept(self, point: RationalPoint | None) -> RationalPoint | None:
        if point is None:
            return None
        if not point.on(self.curve):
            raise DescentError(f"recovered point {point} is not on {self.curve}")
        if point.y == 0 or is_torsion(point, (), self.curve):
            return None
        self._candidate = point
        mapped = self.model_map.to_target(self.target, point)
        if mapped is None or mapped.y == 0:
            return None
        if not mapped.on(self.target):
            raise DescentError(f"mapped point {mapped} is not on {self.target}")
        if is_torsion(mapped, self.torsion_x, self.target):
            return None
        return RationalPoint(mapped.x, abs(mapped.y))

    def _search_quartics(self, quartics, hi: int, stage: str, on_hit):
        """Interleave band-by-band over several quartics; ``on_hit`` returns a point or None."""
        for band in range(2, hi + 1):
            self.trace.bands[stage] += 1
            for q, ctx in quartics:
                for r, s, _ in self.searcher.quartic_hits(q, band, band):
                    pt = self._accept(on_hit(ctx, r, s))
                    if pt is not None:
                        self.trace.hit = (r, s)
                        self.trace.model_point = self._candidate
                        ctx_record = ctx.get("record")
                        if ctx_record:
                            ctx_record()
                        raise _Found(pt)
                    self.trace.rejected_hits += 1

    def _search_quartic_long(self, q: QuarticForm, hi: int, stage: str, on_hit) -> None:
        self.trace.quartics["searched"] += 1
        for r, s, _ in self.searcher.quartic_hits(q, 2, hi):
            pt = self._accept(on_hit(r, s))
            if pt is not None:
                self.trace.hit = (r, s)
                self.trace.model_point = self._candidate
                self.trace.bands[stage] += abs(r) + abs(s) - 1
                raise _Found(pt)
            self.trace.rejected_hits += 1
        self.trace.bands[stage] += hi - 1

    # -- stages --

    def _first_quartics(self, d, seed, k0, u0, p0, q0):
        h0, f0, g0 = seed
        variants = [(1, p0, q0)]
        if q0 != 0 and p0 != 0:
            variants.append((-1, p0, -q0))
        out = []
        for sign, p, q in variants:
            try:
                raw = quartic_from_first_descent(self.curve.a, d, k0, u0, p, q, f0, g0, h0)
            except DegenerateQuartic as exc:
                self.trace.notes.append(f"skipped: {exc}")
                continue
            red, _ = raw.reduced()
            par = parameterize_first(k0, u0, p, q, g0, d)
            out.append((sign, p, q, raw, red, par))
        return out

    def _record_first(self, d, seed, pell, k0, u0, p, q, sign, raw):
        t = self.trace
        t.d, t.conic_solution, t.pell, t.k0 = d, seed, pell, k0
        t.first_solution, t.sign_variant, t.quartic4 = (u0, p, q), sign, raw

    def _eight(self, d, seed, pell, k0, u0, p, q, sign, raw, red, par1):
        # a vanishing end coefficient means a linear factor, so no split into irreducible quadratics
        facs = factor_quartic(red, self._hint_primes) if red.c[0] and red.c[4] else []
        if not facs:
            self.trace.notes.append(f"quartic {red} does not factor; plain 4-descent search")

            def hit4(r, s):
                return recover_point_4(self.curve, d, seed, par1, r, s)

            try:
                self._search_quartic_long(red, self.bounds.s3b, "s3", hit4)
            except _Found:
                self._record_first(d, seed, pell, k0, u0, p, q, sign, raw)
                raise
            return
        for fac in facs:
            for oriented in _orientations(fac):
                self._second(d, seed, pell, k0, u0, p, q, sign, raw, par1, oriented)

    def _second(self, d, seed, pell, k0, u0, p, q, sign, raw, par1, fac: QuarticFactorization):
        try:
            res = resultant_k1(fac)
        except ValueError:
            return
        k1s = squarefree_divisors(res, hints=self._hint_primes)
        vform = ConicForm(*fac.v)
        vred, vscale = _reduce_form(vform)
        for s3 in range(2, self.bounds.s3b + 1):
            self.trace.bands["s3"] += 1
            sol = search_conic_band(vred, k1s, s3)
            if sol is None:
                continue
            k1, t1, r1, s1 = sol.k, sol.root * vscale, sol.f, sol.g
            raw8 = quartic_from_second_descent(k1, t1, r1, s1, fac.u, fac.v)
            red8, _ = raw8.reduced()
            if not self._verdict("quartic8", red8):
                continue
            par2 = parameterize_second(k1, t1, r1, s1, fac.v)

            def hit8(i, j, par2=par2):
                return recover_point_8(self.curve, d, seed, par1, par2, i, j)

            try:
                self._search_quartic_long(red8, self.bounds.s4b, "s4", hit8)
            except _Found:
                self._record_first(d, seed, pell, k0, u0, p, q, sign, raw)
                t = self.trace
                t.factorization, t.k1_candidates, t.k1 = fac, k1s, k1
                t.second_solution, t.quartic8 = (t1, r1, s1), raw8
                raise

    def _process_conic(self, d: int, seed: tuple[int, int, int], pell: bool, s2_done: int, unit: dict) -> None:
        h0, f0, g0 = seed
        form6, _ = descent_pair(self.curve, d, ConicSolution(1, h0, f0, g0))
        k0s = k0_candidates(self.curve, g0, self._hint_primes)
        red6, scale6 = _reduce_form(form6)
        for s2 in range(self.bounds.s2a, self.bounds.s2b + 1):
            if s2 <= s2_done:
                continue
            self.trace.bands["s2"] += 1
            sol = search_conic_band(red6, k0s, s2)
            if sol is not None:
                self._process_seed(d, seed, pell, sol.k, sol.root * scale6, sol.f, sol.g)
            self._checkpoint({**unit, "s2": s2})

    def _process_seed(self, d, seed, pell, k0, u0, p0, q0):
        quartics = []
        for sign, p, q, raw, red, par in self._first_quartics(d, seed, k0, u0, p0, q0):
            if self._verdict("quartic4", red):
                quartics.append((sign, p, q, raw, red, par))
        if not quartics:
            return
        if self.mode in ("four", "auto"):
            ctxs = []
            for sign, p, q, raw, red, par in quartics:
                self.trace.quartics["searched"] += 1

                def on_hit4(r, s, par=par):
                    return recover_point_4(self.curve, d, seed, par, r, s)

                def record(sign=sign, p=p, q=q, raw=raw):
                    self._record_first(d, seed, pell, k0, u0, p, q, sign, raw)

                ctxs.append((red, {"hit": on_hit4, "record": record}))
            self._search_quartics(ctxs, self.bounds.s3b, "s3", lambda ctx, r, s: ctx["hit"](r, s))
        if self.mode in ("eight", "auto"):
            for sign, p, q, raw, red, par in quartics:
                self._eight(d, seed, pell, k0, u0, p, q, sign, raw, red, par)

    def _checkpoint(self, frontier: dict) -> None:
        if self.on_checkpoint is not None:
            frontier = {
                **frontier,
                "had_direct": sorted(self._had_direct),
                "counters": self.trace.counters_state(),
            }
            self.on_checkpoint(frontier, self.trace)

    def _conic_hit(self, stage: int, d: int, band: int):
        if stage == 0:
            sol = search_conic_band(first_conic(self.curve, d), [1], band)
            return None if sol is None else ((sol.root, sol.f, sol.g), False)
        red = pell_reduce(self.curve, d)
        sol = search_conic_band(red.form, [d], band)
        if sol is None:
            return None
        return red.lift(sol.f, sol.g, sol.root), True

    def run(self) -> DescentResult:
        ds = self.d_candidates()
        start = self.resume or {}
        had_direct = set(start.get("had_direct", []))
        if start.get("counters"):
            self.trace.restore_counters(start["counters"])
        b = self.bounds
        try:
            for stage in (0, 1):
                if stage < start.get("stage", 0):
                    continue
                for s1 in range(b.s1a, b.s1b + 1):
                    if (stage, s1) < (start.get("stage", 0), start.get("s1", 0)):
                        continue
                    resuming_band = (stage, s1) == (start.get("stage", -1), start.get("s1", -1))
                    if not resuming_band:
                        self.trace.bands["s1"] += 1
                    for di, d in enumerate(ds):
                        unit = {"stage": stage, "s1": s1, "d_index": di}
                        s2_done = 0
                        if resuming_band:
                            if di < start["d_index"]:
                                continue
                            if di == start["d_index"]:
                                s2_done = start.get("s2", 0)
                        if stage == 1 and d in had_direct:
                            continue
                        hit = self._conic_hit(stage, d, s1)
                        if hit is None:
                            continue
                        seed, pell = hit
                        if stage == 0:
                            had_direct.add(d)
                        self._had_direct = had_direct
                        self._process_conic(d, seed, pell, s2_done, unit)
                    self._checkpoint({"stage": stage, "s1": s1, "d_index": len(ds)})
                if stage == 0 and len(had_direct) == len(ds):
                    break
        except _Found as found:
            self.trace.notes.append("point found")
            return DescentResult(found.point, self.trace)
        finally:
            self.searcher.close()
        self.trace.notes.append("bounds exhausted")
        return DescentResult(None, self.trace)


def four_descent(curve: Curve, bounds: SearchBounds | None = None, torsion_x=(), **kw) -> DescentResult:
    return Descent(curve, bounds, "four", torsion_x, **kw).run()


def eight_descent(curve: Curve, bounds: SearchBounds | None = None, torsion_x=(), **kw) -> DescentResult:
    return Descent(curve, bounds, "eight", torsion_x, **kw).run()
