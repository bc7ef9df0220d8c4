"""How a constant drift moves the pressure but not the dimension.

For phi_n = n A on the binary full shift the weighted partition function is
exactly log Q_n = n (A + log 2).  The s = 1 pressure therefore reads off
A + log 2, while the critical exponent of the power law stays at 1: shifting
every weight by the same linear-in-n amount cannot change where the n^s
normalization flips from divergence to extinction.
"""

import math

from pdim import (
    ConstantDrift,
    Estimator,
    FullShift,
    GrowthTable,
    dimension_estimate,
    exact_growth_table,
    s_pressure,
)

system = FullShift(2)

print("drift A   s=1 pressure   A + log 2   dimension")
for a in (0.0, 0.25, 0.5, 1.0, 2.0):
    rows = exact_growth_table(system, ConstantDrift(a, system), 0, range(8, 129, 8))
    table = GrowthTable(rows).filter(estimator=Estimator.SPANNING)
    p1 = s_pressure(table, 1.0, window_frac=1.0)
    dim = dimension_estimate(table).s0_hat
    print(f"  {a:5.2f}     {p1:9.6f}    {a + math.log(2):9.6f}   {dim:9.6f}")

# the jump in s: below the critical exponent the normalized values diverge,
# above it they vanish
rows = exact_growth_table(system, ConstantDrift(0.5, system), 0, range(8, 129, 8))
table = GrowthTable(rows).filter(estimator=Estimator.SPANNING)
print("\n    s   pressure statistic")
for s in (0.6, 0.8, 1.0, 1.2, 1.4):
    print(f"  {s:.1f}   {s_pressure(table, s, window_frac=1.0):12.4f}")
