"""From a violated covariance criterion to measurable witness observables.

For a Werner state above threshold we rotate both LOO sets onto the
singular vectors of the correlation block, pick the optimal uniform gain,
and confirm the violation directly from the joint moments of the new
observables (no covariance-matrix shortcut).
"""

import numpy as np

from covsteer import bipartite_blocks, extract_witness, family_state, gell_mann_loos, lur_test, prop1

state = family_state("werner-2", 0.8)
loo = gell_mann_loos(2)
blocks = bipartite_blocks(state, loo, loo)

print(prop1(blocks, direction="ab"))
w = extract_witness(blocks, loo, loo, "ab")
print(f"gain {w.gain:.4f}, block-form value {w.lurValue:.6f}, bound {w.bound}")

direct = lur_test(state, w.setA, w.setB, w.gain, "ab")
print(f"value from raw moments {direct.lhs:.6f} -> violated: {direct.violated}")

np.set_printoptions(precision=3, suppress=True)
print("first observable pair:")
print(w.setA[1])
print(w.setB[1])
