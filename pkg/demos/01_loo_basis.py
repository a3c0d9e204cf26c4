"""Local orthogonal observables and the uncertainty bound d - 1.

Builds the canonical LOO set for a qutrit, checks that it expands any
density matrix, and shows that the summed variance over the set never
drops below d - 1 (pure states sit exactly on the bound).
"""

import numpy as np

from covsteer import covariance_matrix, expectation, gell_mann_loos, lur_bound_loos, purity
from covsteer.random_states import random_density

d = 3
loos = gell_mann_loos(d)
print(f"{len(loos)} observables in dimension {d}")

rho = random_density(d, seed=1).entries
rebuilt = sum(expectation(rho, O) * O for O in loos)
print("expansion error:", np.max(np.abs(rebuilt - rho)))

# summed variance = trace of the covariance matrix = d - Tr(rho^2)
for rank in (1, 2, 3):
    rho = random_density(d, seed=rank, rank=rank).entries
    total = np.trace(covariance_matrix(rho, loos))
    print(f"rank {rank}: sum of variances {total:.6f}, d - purity {d - purity(rho):.6f}")

print("bound:", lur_bound_loos(d))
