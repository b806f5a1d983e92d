"""Irreducible groups keep every unit vector far from fixed."""

import numpy as np

from unireduce import reducibility_threshold, weak_defects
from unireduce.families import families

rng = np.random.default_rng(2)
for fam in families().values():
    if not fam.irreducible or fam.dim < 2:
        continue
    g = fam.group()
    xs = rng.standard_normal((2000, g.dim)) + 1j * rng.standard_normal((2000, g.dim))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    floor = min(weak_defects(g.elements, x).max() for x in xs)
    print(f"{fam.name:20s} n={g.dim} order={g.order:4d} min weak defect {floor:.3f} "
          f"(threshold {reducibility_threshold(g.dim):.1e})")
