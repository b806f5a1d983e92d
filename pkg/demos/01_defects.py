"""Close a group from generators and measure how far vectors are from being fixed."""

import numpy as np

from unireduce import close_group, defect, lambda_map
from unireduce.families import families

x = np.array([[0, 1], [1, 0]], dtype=complex)
z = np.diag([1, -1]).astype(complex)
pauli = close_group([x, z])
print("closure of X and Z, order:", pauli.order)

for name, xi in [("e1", np.array([1, 0])), ("(e1+e2)/sqrt2", np.array([1, 1]) / np.sqrt(2))]:
    r = defect(pauli, xi)
    print(f"  {name}: weak {r.weak_defect:.3f}, strong {r.strong_defect:.3f}")

s3 = families()["sym3"].group()
u = np.ones(3) / np.sqrt(3)
print("S3 on (1,1,1)/sqrt3: weak defect", defect(s3, u).weak_defect)
xi = u + 1e-4 * np.array([1, -1, 0])
xi /= np.linalg.norm(xi)
r = defect(s3, xi)
lm = lambda_map(s3, xi)
print(f"S3 on a nearby vector: weak {r.weak_defect:.2e}, strong {r.strong_defect:.2e}, "
      f"max ||G xi - lambda xi|| {lm.residuals.max():.2e}")
