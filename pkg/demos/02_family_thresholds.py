"""Steering thresholds of the built-in one-parameter families.

Each family is scanned with both covariance criteria in both directions.
The threshold is the smallest parameter at which the criterion flags the
state as steerable.
"""

from covsteer.analysis import threshold_scan
from covsteer.exceptions import NoViolationInRange

families = ["noisy-singlet", "isotropic-qutrit-F", "werner-2", "two-qutrit-Fprime"]

print(f"{'family':<20} {'criterion':<8} {'A->B':>10} {'B->A':>10}")
for fam in families:
    for crit in ("prop1", "prop2"):
        row = []
        for direction in ("ab", "ba"):
            try:
                row.append(f"{threshold_scan(fam, crit, direction):10.6f}")
            except NoViolationInRange:
                row.append(f"{'none':>10}")
        print(f"{fam:<20} {crit:<8} {row[0]} {row[1]}")
