"""Block structure, the eigenspace oracle and the truncation construction."""

import numpy as np

from unireduce import (
    commutant_basis,
    eigenspace_intersection_oracle,
    reduce_blocks,
    reducibility_threshold,
    truncate_eigenvector,
)
from unireduce.families import families
from unireduce.sampling import below_threshold, conjugated

rng = np.random.default_rng(1)
for name in ["sym3", "q8_plus_1", "pauli_plus_pauli", "diag3_4"]:
    g, _ = conjugated(families()[name].group(), rng)
    bd = reduce_blocks(g)
    frame = eigenspace_intersection_oracle(g)
    print(f"{name}: commutant dim {len(commutant_basis(g))}, blocks {list(bd.block_sizes)}, "
          f"common eigenvectors {len(frame)}")

g, _ = conjugated(families()["q8_plus_1"].group(), rng)
n = g.dim
zeta = eigenspace_intersection_oracle(g)[0][0]
xi, eps, _ = below_threshold(g, zeta, reducibility_threshold(n), rng)
c = truncate_eigenvector(g, xi)
print(f"truncate on q8+1: eps {eps:.2e}, ||xi - eta||^2 {c.distance_sq:.2e}, bound {c.bound_value:.2e}, "
      f"residual {c.max_residual:.1e}")

# the hand case: {I, diag(1, -1)} and xi = (sqrt(1 - d^2), d) gives ||xi - eta||^2 = d^2 = eps / 2
d = 1e-3
diag = families()["diag2"].group()
c = truncate_eigenvector(diag, np.array([np.sqrt(1 - d * d), d]))
print(f"hand case: distance_sq {c.distance_sq!r}, eps/2 {c.eps / 2!r}")
