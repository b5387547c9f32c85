"""
Congruent numbers and their triangles
=====================================

N is congruent when it is the area of a right triangle with rational sides,
which happens exactly when y^2 = x^3 - N^2 x has a point of infinite order.
A point gives the triangle

    a = (x^2 - N^2) / y,   b = 2 N x / y,   c = (x^2 + N^2) / y.

This script runs the 8-descent over a few N, prints the triangles, and ends
with N = 157, whose smallest triangle has sides with dozens of digits.
"""

import time

from ecdescent import SearchBounds, eight_descent, family_congruent, naive_height


def triangle(N, point):
    x, y = point.x, point.y
    return abs((x * x - N * N) / y), abs(2 * N * x / y), abs((x * x + N * N) / y)


small = SearchBounds(2, 30, 20, 20, 40)
for N in (5, 6, 7, 13, 14, 15, 21, 22, 23):
    result = eight_descent(family_congruent(N), small)
    a, b, c = triangle(N, result.point)
    assert a * a + b * b == c * c and a * b / 2 == N
    print(f"N = {N:3d}: sides {a}, {b}, {c}")

# 1, 2 and 3 are not congruent, so every search must come back empty
for N in (1, 2, 3):
    result = eight_descent(family_congruent(N), small)
    print(f"N = {N}: {result.trace.notes[-1]} after {result.trace.bands['s1']} first-conic bands")

# the default bounds reach N = 157 in about a second
start = time.perf_counter()
result = eight_descent(family_congruent(157))
a, b, c = triangle(157, result.point)
print(f"\nN = 157 in {time.perf_counter() - start:.1f} s, naive height {naive_height(result.point)}")
print("x =", result.point.x)
for name, side in zip("abc", (a, b, c)):
    print(f"  {name} = {side}")
assert a * b / 2 == 157 and a * a + b * b == c * c
