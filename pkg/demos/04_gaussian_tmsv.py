"""Gaussian steering of a two-mode squeezed vacuum.

The steering matrix gamma - (0 + i Omega_B) acquires a negative
eigenvalue for any nonzero squeezing. A product of local thermal states
never does.
"""

import numpy as np

from covsteer.gaussian import GaussianCM, prop3, two_mode_squeezed_vacuum

for r in (0.0, 0.1, 0.5, 1.0):
    v = prop3(two_mode_squeezed_vacuum(r), "ab")
    print(f"r = {r:.1f}: min eigenvalue {-v.lhs:+.4f}, steerable {v.violated}")

thermal = GaussianCM(1, 1, np.diag([1.5, 1.5, 0.7, 0.7]))
print("thermal product:", prop3(thermal, "ab").violated, prop3(thermal, "ba").violated)
