"""
An 8-descent by hand
====================

The curve y^2 = x^3 + 6243 x^2 + x comes from rational triangles whose base
is 79 times their altitude.  Its generator is large, but on the 2-isogenous
curve y^2 = x^3 - 12486 x^2 + 38975045 x a second descent finds it in a
fraction of a second.  This script walks through every stage with the
building blocks, then lets :class:`Descent` do the same thing in one call.
"""

from ecdescent import Curve, Descent, ModelMap, SearchBounds, is_everywhere_locally_soluble
from ecdescent.descent import recover_point_8
from ecdescent.families import triangle_from_point
from ecdescent.forms import (
    ConicForm,
    ConicSolution,
    QuarticFactorization,
    descent_pair,
    factor_quartic,
    first_conic,
    parameterize_first,
    parameterize_second,
    quartic_from_first_descent,
    quartic_from_second_descent,
    resultant_k1,
)
from ecdescent.search import search_conic_band, search_quartic_band

primary = Curve(6243, 1)
curve = primary.isogenous()
print("searching", curve)

# first conic h^2 = d f^2 + a f g + (b/d) g^2 with d = 5, banded over |f| + |g|
d = 5
conic = first_conic(curve, d)
seed = next(sol for band in range(2, 200) if (sol := search_conic_band(conic, [1], band)))
h0, f0, g0 = seed.root, seed.f, seed.g
print("conic solution (h0, f0, g0) =", (h0, f0, g0))

# the seed splits the curve equation into two quadratics in (p, q)
first, second = descent_pair(curve, d, ConicSolution(1, h0, f0, g0))
print("quadratic pair:", first.coeffs, second.coeffs)

# k0 u^2 = g0 p^2 - g0 d q^2 has the trivial solution (1, 1, 0): this is the Pell case
k0, u0, p0, q0 = 1, 1, 1, 0
par1 = parameterize_first(k0, u0, p0, q0, g0, d)
quartic4 = quartic_from_first_descent(curve.a, d, k0, u0, p0, q0, f0, g0, h0)
print("first quartic:", quartic4.c)

# instead of searching it, factor it into two quadratics u * v
fac = factor_quartic(quartic4)[0]
if fac.v != (3, -340, -775):
    fac = QuarticFactorization(fac.v, fac.u)
print("factors: u =", fac.u, " v =", fac.v)

# u and v are then both k1 times squares, with k1 dividing their resultant
res = resultant_k1(fac)
print("resultant:", res)
sol = next(s for band in range(2, 100) if (s := search_conic_band(ConicForm(*fac.v), [158], band)))
k1, t1, r1, s1 = sol.k, sol.root, sol.f, sol.g
print("k1 t^2 = v(r, s):", (k1, t1, r1, s1))

# the second quartic, screened for local solubility before any search
quartic8 = quartic_from_second_descent(k1, t1, r1, s1, fac.u, fac.v)
reduced, m = quartic8.reduced()
print("second quartic:", reduced.c, " times", m, "squared")
print("locally soluble:", is_everywhere_locally_soluble(reduced).soluble)

hit = next(h for band in range(2, 320) if (h := search_quartic_band(reduced, band)))
i, j, _ = hit
print("square value at (i, j) =", (i, j))

par2 = parameterize_second(k1, t1, r1, s1, fac.v)
point = recover_point_8(curve, d, (h0, f0, g0), par1, par2, i, j)
print("x on the isogenous curve:", point.x)
back = ModelMap("dual").to_target(primary, point)
print("x on the original curve: ", back.x)
assert back.on(primary)

# the same chain in one call
result = Descent(curve, SearchBounds(s4b=320), "eight", forced_d=d, target=primary, model_map=ModelMap("dual")).run()
assert result.point.x == back.x
print("Descent agrees; bands searched:", result.trace.bands)

# the triangle with altitude 1 and base 79 has these two rational slant sides
side1, side2, base = triangle_from_point(79, back.x)
print(f"sides ~ {float(side1):.6f} and {float(side2):.6f}; denominators have {len(str(side1.denominator))} digits")
