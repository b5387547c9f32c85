import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ecdescent.forms import (
    ConicForm,
    ConicSolution,
    Curve,
    DegenerateQuartic,
    QuarticFactorization,
    QuarticForm,
    compose2,
    descent_pair,
    factor_quartic,
    first_conic,
    has_rational_roots,
    k0_candidates,
    k0_divisor_bound,
    parameterize_first,
    parameterize_second,
    pell_reduce,
    quartic_from_first_descent,
    quartic_from_second_descent,
    resultant_k1,
)
from oracles import (
    binary_form,
    expand,
    is_sq,
    norm_triple,
    quadratic_splits,
    random_irreducible_quadratic,
    random_state,
    sqfree_divisor_set,
    sqfree_part,
    sympy_resultant,
)

ISOG = Curve(-12486, 38975045)
CONGRUENT_5 = Curve(0, -25)


class TestCurve:
    def test_rejects_singular(self):
        with pytest.raises(ValueError):
            Curve(1, 0)
        with pytest.raises(ValueError):
            Curve(2, 1)

    def test_isogenous(self):
        assert Curve(6243, 1).isogenous() == ISOG
        assert (-2 * 6243, 6243**2 - 4) == (ISOG.a, ISOG.b)


class TestFirstConic:
    @pytest.mark.parametrize(
        "curve, d, expected",
        [(ISOG, 5, (5, -12486, 7795009)), (CONGRUENT_5, 5, (5, 0, -5)), (Curve(0, -157**2), 1, (1, 0, -24649))],
    )
    def test_examples(self, curve, d, expected):
        assert first_conic(curve, d).coeffs == expected

    def test_non_divisor(self):
        with pytest.raises(ValueError):
            first_conic(ISOG, 3)

    def test_worked_solution(self):
        assert first_conic(ISOG, 5)(93, 1) == 2584**2


class TestPell:
    def test_examples(self):
        red = pell_reduce(ISOG, 5)
        assert (red.alpha, red.beta) == (1, 4)
        assert 12486**2 - 4 * 38975045 == 16
        red = pell_reduce(CONGRUENT_5, 5)
        assert (red.alpha, red.beta) == (1, 10)

    @settings(max_examples=150)
    @given(st.integers(-60, 60), st.integers(-400, 400).filter(bool), st.integers(-30, 30), st.integers(-30, 30))
    def test_lift_lands_on_conic(self, a, b, F, G):
        if a * a - 4 * b == 0:
            return
        curve = Curve(a, b)
        for d in sqfree_divisor_set(b):
            red = pell_reduce(curve, d)
            num = F * F - red.alpha * G * G
            if num % d or not is_sq(num // d) or G == 0:
                continue
            H = sympy.integer_nthroot(num // d, 2)[0]
            h, f, g = red.lift(F, G, H)
            assert h * h == d * f * f + a * f * g + (b // d) * g * g
            assert sympy.gcd(f, g) == 1

    def test_lift_symbolically(self):
        F, G, H, a, d, beta = sympy.symbols("F G H a d beta")
        alpha = sympy.Symbol("alpha")
        b = (a**2 - alpha * beta**2) / 4
        f, g, h = beta * F - a * G, 2 * d * G, d * beta * H
        expr = d * f**2 + a * f * g + (b / d) * g**2 - h**2
        # on d H^2 = F^2 - alpha G^2 the difference vanishes
        assert sympy.simplify(expr.subs(H**2, (F**2 - alpha * G**2) / d)) == 0


class TestDescentPair:
    def test_examples(self):
        first, second = descent_pair(ISOG, 5, ConicSolution(1, 2584, 93, 1))
        assert first.coeffs == (1, 0, -5) and second.coeffs == (93, -5168, -12021)
        first, second = descent_pair(CONGRUENT_5, 5, ConicSolution(1, 5, 3, 2))
        assert first.coeffs == (2, 0, -10) and second.coeffs == (3, -10, 15)

    def test_g0_zero_rejected(self):
        with pytest.raises(ValueError):
            descent_pair(CONGRUENT_5, 5, ConicSolution(1, 1, 1, 0))


class TestK0Bound:
    def test_examples(self):
        assert k0_divisor_bound(ISOG, 1) == 16
        assert k0_candidates(ISOG, 1) == [1, -1, 2, -2]
        assert k0_divisor_bound(CONGRUENT_5, 2) == 1600
        assert set(k0_candidates(CONGRUENT_5, 2)) == {1, -1, 2, -2, 5, -5, 10, -10}
        assert k0_divisor_bound(Curve(0, -1), 1) == 4
        assert set(k0_candidates(Curve(0, -1), 1)) == {1, -1, 2, -2}

    def test_determinant_identity_symbolic(self):
        a, d, f0, g0, h0 = sympy.symbols("a d f0 g0 h0")
        e = (h0**2 - d * f0**2 - a * f0 * g0) / g0**2
        A = a * g0 + d * f0
        M = sympy.Matrix([[g0, 0, -g0 * d, 0], [0, g0, 0, -g0 * d], [f0, -2 * h0, A, 0], [0, f0, -2 * h0, A]])
        assert sympy.simplify(M.det() - g0**4 * (a**2 - 4 * d * e)) == 0

    def test_determinant_identity_random(self):
        rng = random.Random(7)
        for _ in range(100):
            st_ = random_state(rng)
            curve = Curve(st_.a, st_.b)
            first, second = descent_pair(curve, st_.d, ConicSolution(1, st_.h0, st_.f0, st_.g0))
            res = sympy_resultant(first.coeffs, second.coeffs)
            assert res == k0_divisor_bound(curve, st_.g0)


class TestParameterizeFirst:
    def test_example(self):
        par = parameterize_first(2, 1, 9, 4, 2, 5)
        assert par.p == (-18, 4, -18) and par.q == (-8, 0, 8)
        p, q = par(1, 0)
        assert (p, q) == (-18, -8) and 2 * p * p - 10 * q * q == 8 == 2 * 2**2
        assert par(0, 1) == (-9 * 2, 4 * 2)

    def test_bad_seed(self):
        with pytest.raises(ValueError):
            parameterize_first(2, 1, 9, 5, 2, 5)

    def test_identity_grid(self):
        par = parameterize_first(2, 1, 9, 4, 2, 5)
        for r in range(-50, 51, 7):
            for s in range(-50, 51, 3):
                p, q = par(r, s)
                val = 2 * p * p - 10 * q * q
                assert val % 2 == 0 and is_sq(val // 2)

    def test_pell_case(self):
        par = parameterize_first(1, 1, 1, 0, 1, 5)
        assert par.pell and par.p == (1, 0, 5) and par.q == (0, 2, 0)
        for r in range(-9, 10):
            for s in range(-9, 10):
                p, q = par(r, s)
                assert p * p - 5 * q * q == binary_form(par.w, r, s) ** 2


class TestQuarticFirst:
    def test_example(self):
        z = quartic_from_first_descent(0, 5, 2, 1, 9, 4, 3, 2, 5)
        assert z.c == (984, -224, 144, -1504, 6744)
        assert z(1, 0) == 984 == 2 * (3 * 324 - 10 * 144 + 15 * 64)

    def test_example_symbolically(self):
        r, s = sympy.symbols("r s")
        p = 4 * r * s - 9 * (2 * s**2 + 2 * r**2)
        q = 4 * (2 * s**2 - 2 * r**2)
        target = sympy.Poly(sympy.expand(2 * (3 * p**2 - 10 * p * q + 15 * q**2)), r, s)
        got = [target.coeff_monomial(r ** (4 - i) * s**i) for i in range(5)]
        assert got == [984, -224, 144, -1504, 6744]

    def test_worked_pell_quartic(self):
        z = quartic_from_first_descent(-12486, 5, 1, 1, 1, 0, 93, 1, 2584)
        assert z.c == (93, -10336, -47154, -51680, 2325)

    def test_degenerate_state(self):
        # f0 = 0 on the Pell branch: the conic value is zero at both (1, 0) and (0, 1)
        with pytest.raises(DegenerateQuartic):
            quartic_from_first_descent(37, -19, -1, 1, 1, 0, 0, -1, 35)

    def test_u0_sign_is_r_flip(self):
        rng = random.Random(3)
        for _ in range(50):
            s_ = random_state(rng, allow_q0_zero=False)
            z = quartic_from_first_descent(s_.a, s_.d, s_.k0, s_.u0, s_.p0, s_.q0, s_.f0, s_.g0, s_.h0)
            w = quartic_from_first_descent(s_.a, s_.d, s_.k0, -s_.u0, s_.p0, s_.q0, s_.f0, s_.g0, s_.h0)
            assert w == z.negate_second()

    def test_companion_sign(self):
        # (p0, -q0) is the same formulas with q0 negated
        a, d, k0, u0, p0, q0, f0, g0, h0 = 0, 5, 2, 1, 9, 4, 3, 2, 5
        minus = quartic_from_first_descent(a, d, k0, u0, p0, -q0, f0, g0, h0)
        par = parameterize_first(k0, u0, p0, -q0, g0, d)
        for r in range(-4, 5):
            for s in range(-4, 5):
                p, q = par(r, s)
                assert minus(r, s) == k0 * (f0 * p * p - 2 * h0 * p * q + (a * g0 + d * f0) * q * q)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9))
    def test_symbolic_substitution(self, seed):
        s_ = random_state(random.Random(seed))
        r, s = sympy.symbols("r s")
        par = parameterize_first(s_.k0, s_.u0, s_.p0, s_.q0, s_.g0, s_.d)
        p, q = binary_form(par.p, r, s), binary_form(par.q, r, s)
        target = s_.k0 * (s_.f0 * p**2 - 2 * s_.h0 * p * q + (s_.a * s_.g0 + s_.d * s_.f0) * q**2)
        try:
            z = quartic_from_first_descent(s_.a, s_.d, s_.k0, s_.u0, s_.p0, s_.q0, s_.f0, s_.g0, s_.h0)
        except DegenerateQuartic:
            # only allowed when the substituted form really vanishes at both ends
            assert target.subs({r: 1, s: 0}) == 0 and target.subs({r: 0, s: 1}) == 0
        else:
            assert sympy.expand(target - binary_form(z.c, r, s)) == 0
        assert sympy.expand(s_.g0 * p**2 - s_.g0 * s_.d * q**2 - s_.k0 * binary_form(par.w, r, s) ** 2) == 0


class TestRationalRoots:
    @pytest.mark.parametrize("quad, expected", [((3, -340, -775), False), ((1, 0, -1), True), ((1, 2, 1), True)])
    def test_examples(self, quad, expected):
        assert has_rational_roots(quad) is expected

    def test_discriminant_example(self):
        assert 340**2 + 4 * 3 * 775 == 124900 and sympy.factorint(124900) == {2: 2, 5: 2, 1249: 1}

    def test_linear_cases(self):
        assert has_rational_roots((0, 1, 1)) and has_rational_roots((0, 0, 3))

    @settings(max_examples=300)
    @given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30))
    def test_brute_force(self, A, B, C):
        if (A, B, C) == (0, 0, 0):
            return
        # a root p/q in lowest terms has p | C and q | A, so |p|, |q| <= 30 covers everything
        brute = any(
            A * p * p + B * p * q + C * q * q == 0
            for p in range(-60, 61)
            for q in range(0, 61)
            if (p, q) != (0, 0)
        )
        assert has_rational_roots((A, B, C)) == brute


class TestFactorQuartic:
    def test_worked_example(self):
        facs = factor_quartic(QuarticForm((93, -10336, -47154, -51680, 2325)))
        assert len(facs) == 1
        fac = facs[0]
        assert {fac.u, fac.v} == {(31, 68, -3), (3, -340, -775)}

    def test_square_of_irreducible(self):
        facs = factor_quartic(QuarticForm((1, 0, 2, 0, 1)))
        assert [(f.u, f.v) for f in facs] == [((1, 0, 1), (1, 0, 1))]

    def test_small_example_matches_sympy(self):
        q = (984, -224, 144, -1504, 6744)
        facs = factor_quartic(QuarticForm(q))
        assert all(f.expand() == q for f in facs)
        assert {frozenset((norm_triple(f.u), norm_triple(f.v))) for f in facs} == quadratic_splits(q)

    def test_no_factorization(self):
        assert factor_quartic(QuarticForm((1, 0, 0, 0, 2))) == []

    def test_rejects_zero_ends(self):
        with pytest.raises(ValueError):
            factor_quartic(QuarticForm((0, 1, 0, 0, 1)))

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10**9))
    def test_round_trip(self, seed):
        rng = random.Random(seed)
        u, v = random_irreducible_quadratic(rng), random_irreducible_quadratic(rng)
        q = expand(u, v)
        facs = factor_quartic(QuarticForm(q))
        assert facs and all(f.expand() == q for f in facs)
        assert {frozenset((norm_triple(f.u), norm_triple(f.v))) for f in facs} == quadratic_splits(q)


class TestResultant:
    def test_examples(self):
        fac = QuarticFactorization((31, 68, -3), (3, -340, -775))
        assert resultant_k1(fac) == -399424
        assert resultant_k1(QuarticFactorization((1, 0, -1), (1, 0, 1))) == 4
        with pytest.raises(ValueError):
            resultant_k1(QuarticFactorization((1, 0, 1), (1, 0, 1)))

    @settings(max_examples=200)
    @given(st.tuples(*[st.integers(-20, 20)] * 3), st.tuples(*[st.integers(-20, 20)] * 3))
    def test_matches_sympy(self, u, v):
        if not u[0] or not v[0]:
            return
        res = sympy_resultant(u, v)
        if res == 0:
            with pytest.raises(ValueError):
                resultant_k1(QuarticFactorization(u, v))
        else:
            assert resultant_k1(QuarticFactorization(u, v)) == res


class TestSecondDescent:
    U, V = (31, 68, -3), (3, -340, -775)

    def test_parameterization_example(self):
        par = parameterize_second(158, 4, 9, -1, self.V)
        assert par.r == (1422, -1264, 367) and par.s == (-158, 0, 3)
        assert par(1, 0) == (158 * 9, -158)

    def test_matches_reference_up_to_sign(self):
        # reference: r/s = -(1422 i^2 + 1264 i j + 367 j^2)/(158 i^2 - 3 j^2), i.e. ours at -i
        par = parameterize_second(158, 4, 9, -1, self.V)
        for i in range(-5, 6):
            for j in range(-5, 6):
                r, s = par(-i, j)
                pr, ps = -(1422 * i * i + 1264 * i * j + 367 * j * j), 158 * i * i - 3 * j * j
                assert r * ps == s * pr

    def test_bad_seed(self):
        with pytest.raises(ValueError):
            parameterize_second(158, 5, 9, -1, self.V)

    def test_quartic_example(self):
        c = quartic_from_second_descent(158, 4, 9, -1, self.U, self.V)
        assert c.c[0] == 158**3 * 1896 == 316**2 * 74892
        assert c.c == tuple(316**2 * x for x in (74892, -154840, 123789, -45916, 6725))
        assert [abs(x) for x in c.c] == [316**2 * x for x in (74892, 154840, 123789, 45916, 6725)]
        assert c(1, 0) == 158**2 * binary_form(self.U, 9, -1) * 158

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9))
    def test_symbolic_substitution(self, seed):
        rng = random.Random(seed)
        u, v = random_irreducible_quadratic(rng), random_irreducible_quadratic(rng)
        r1, s1 = rng.randint(-9, 9), rng.randint(-9, 9)
        V = binary_form(v, r1, s1)
        if V == 0:
            return
        k1 = sqfree_part(V)
        t1 = sympy.integer_nthroot(V // k1, 2)[0]
        i, j = sympy.symbols("i j")
        par = parameterize_second(k1, t1, r1, s1, v)
        r, s = binary_form(par.r, i, j), binary_form(par.s, i, j)
        c = quartic_from_second_descent(k1, t1, r1, s1, u, v)
        assert sympy.expand(k1 * binary_form(u, r, s) - binary_form(c.c, i, j)) == 0
        # v(r, s) / k1 is a square at sample points
        for ii in range(-3, 4):
            for jj in range(-3, 4):
                rv, sv = par(ii, jj)
                val = binary_form(v, rv, sv)
                assert val % k1 == 0 and is_sq(val // k1)


def test_compose2_matches_sympy():
    r, s = sympy.symbols("r s")
    form, pm, qm = (3, -10, 15), (-18, 4, -18), (-8, 0, 8)
    expr = sympy.Poly(sympy.expand(binary_form(form, binary_form(pm, r, s), binary_form(qm, r, s))), r, s)
    assert list(compose2(form, pm, qm)) == [expr.coeff_monomial(r ** (4 - k) * s**k) for k in range(5)]


def test_conic_solution_satisfies():
    assert ConicSolution(1, 2584, 93, 1).satisfies(first_conic(ISOG, 5))
    assert not ConicSolution(1, 2585, 93, 1).satisfies(first_conic(ISOG, 5))
    assert ConicForm(3, -340, -775)(9, -1) == 158 * 16


def test_quartic_reduction():
    q, m = QuarticForm(tuple(316**2 * x for x in (74892, -154840, 123789, -45916, 6725))).reduced()
    assert q.c == (74892, -154840, 123789, -45916, 6725) and m == 316
