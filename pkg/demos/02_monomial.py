"""Recover a common eigenvector of a hidden monomial group from a nearby vector."""

import numpy as np

from unireduce import conjugate_group, eigenspace_intersection_oracle, monomial_eigenvector, reducibility_threshold
from unireduce.families import families
from unireduce.sampling import below_threshold, monomial_conjugator

rng = np.random.default_rng(0)
base = families()["twisted3_4"].group()
g = conjugate_group(base, monomial_conjugator(base.dim, rng))
n = g.dim
zeta = eigenspace_intersection_oracle(g)[0][0]
xi, eps, delta = below_threshold(g, zeta, reducibility_threshold(n), rng)
print(f"n = {n}, order {g.order}, threshold {reducibility_threshold(n):.2e}, measured eps {eps:.2e}")

c = monomial_eigenvector(g, xi)
print("path:", c.details.get("path"))
print(f"residual {c.max_residual:.1e}, ||xi - zeta'|| {np.sqrt(c.distance_sq):.2e} (must be < 1/n = {1 / n:.3f})")
print("bound holds:", c.bound_holds)
