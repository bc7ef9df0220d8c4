"""Run every verification suite and print the report lines.

Each suite checks a family of finite-level inequalities that the estimators
must satisfy exactly (up to 1e-9): ordering of the four partition values,
the spanning/separated comparison across scales, additivity and scaling
laws for the weighted sums, behavior under iteration powers and factor
maps, and the drift formula for the dimension.  A report fails if any
single inequality is violated, so a green run certifies a few thousand
relations at once.

Equivalent command line: pdim verify --suite all --seed 0
"""

import sys

from pdim import run_suite

reports = run_suite("all", seed=0)
for r in reports:
    print(r.line())

passed = sum(r.passed for r in reports)
print(f"\n{passed}/{len(reports)} suites passed")

# fault injection: shifting any inequality by 0.1 must flip its suite
from pdim.theorems import check_thm31

faulted = check_thm31(seed=0, fault=0.1)
print(f"fault-injected thm31 -> {faulted.status} "
      f"(worst violation {faulted.worst_violation:.3e})")

sys.exit(0 if passed == len(reports) else 1)
