"""
Which quartics are worth searching?
===================================

Most quartics a descent produces have no rational points at all, and a band
search over them is wasted time.  Two cheap filters catch most of them:

* a local test: z^2 = Q(r, s) must have solutions over the reals and over
  every p-adic field (only primes dividing the discriminant, and 2, matter);
* a residue sieve: inside a band, Q(r, s) must be a square modulo 64, 63,
  65 and 11 before anyone computes a square root.

This script shows both on the quartics met while solving N = 157.
"""

import numpy as np

from ecdescent import QuarticForm, eight_descent, family_congruent, is_everywhere_locally_soluble
from ecdescent.search import band_pairs, residue_mask
from ecdescent.solubility import bad_primes, padic_soluble, real_soluble

# a few hand-made cases
for c in [(-1, 0, 0, 0, -1), (3, 0, 0, 0, 3), (1, 0, 0, 0, 1), (61, 0, 0, 0, 61)]:
    q = QuarticForm(c)
    primes, _ = bad_primes(q)
    local = {p: padic_soluble(q, p) for p in primes}
    print(f"{str(c):24s} real: {real_soluble(q)!s:5s}  p-adic: {local}")

# the verdicts recorded by a real run
trace = eight_descent(family_congruent(157)).trace
verdicts = trace.verdicts
obstructions = {}
for v in verdicts:
    if not v["soluble"]:
        obstructions[v["obstruction"]] = obstructions.get(v["obstruction"], 0) + 1
print(f"\nN = 157: {len(verdicts)} quartics tested, {trace.quartics['insoluble']} rejected")
print("rejections by obstruction:", dict(sorted(obstructions.items(), key=lambda kv: -kv[1])))

# the quartic that finally produced the point, and how hard the sieve cuts it down
q = trace.quartic8.reduced()[0] if trace.quartic8 is not None else trace.quartic4.reduced()[0]
print("\nsearched quartic:", q.c, "locally soluble:", is_everywhere_locally_soluble(q).soluble)
bands = np.arange(2, 200)
kept = []
for band in bands:
    f, g = band_pairs(int(band))
    kept.append(residue_mask(q.c, f, g).mean())
kept = np.array(kept)
print(f"pairs surviving the sieve: mean {kept.mean():.3%}, worst band {kept.max():.3%}")
print(f"only about one pair in {round(1 / kept.mean())} reaches the exact square-root test")
