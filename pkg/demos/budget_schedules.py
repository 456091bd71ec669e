"""
Significance budget schedules
=============================

Both streaming rules spend from a fixed error budget q distributed over
an infinite sequence (lambda_i). The power-law schedule spends faster up
front; the adaptive one decays slower than any power, which keeps late
hypotheses testable when the right exponent is unknown.
"""

import numpy as np

from streamfdr import make_adaptive_schedule, make_power_schedule

q = 0.1
power_fast = make_power_schedule(2.0, q)
power_slow = make_power_schedule(1.05, q)
adaptive = make_adaptive_schedule(q)

print(f"total budget q = {q}")
print(f"{'i':>8} {'power nu=2':>14} {'power nu=1.05':>14} {'adaptive':>14}")
for i in (1, 2, 3, 10, 100, 10_000, 1_000_000):
    print(
        f"{i:>8} {power_fast.lambda_at(i):14.4e} "
        f"{power_slow.lambda_at(i):14.4e} {adaptive.lambda_at(i):14.4e}"
    )

# How much of the budget is spent by step N: the nu=2 schedule burns most
# of it in the first hundred steps; the others hold reserves much longer.
print("\ncumulative spend as a share of q")
print(f"{'N':>8} {'power nu=2':>12} {'power nu=1.05':>14} {'adaptive':>12}")
for n in (10, 1_000, 100_000):
    spent = [float(s.prefix(n).sum()) / q for s in (power_fast, power_slow, adaptive)]
    print(f"{n:>8} {spent[0]:12.3f} {spent[1]:14.3f} {spent[2]:12.3f}")

# The residual side of the budget never goes negative.
for name, sched in (("nu=2", power_fast), ("nu=1.05", power_slow), ("adaptive", adaptive)):
    partial = np.cumsum(sched.prefix(100_000))
    assert partial[-1] < q
    print(f"residual after 1e5 steps ({name}): {q - partial[-1]:.6f}")
