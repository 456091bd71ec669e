"""
Streaming decisions
===================

Hypotheses arrive one at a time and each must be accepted or rejected on
the spot, using only the P-values seen so far. Two rules share a budget
schedule: one resets its budget clock at every discovery, the other
multiplies the budget by the discovery count. The static step-up
baseline, which needs the whole batch at once, is shown for contrast.
"""

import numpy as np

from streamfdr import bh_reject, make_power_schedule, run_stream

schedule = make_power_schedule(1.05, q=0.1)
pvals = [0.001, 0.40, 0.0009, 0.93, 0.002, 0.061, 0.30, 0.0001]

for engine in ("lord", "lond"):
    print(f"\n{engine} trace (q = 0.1, power schedule nu = 1.05)")
    print(f"{'i':>3} {'alpha_i':>12} {'p_i':>8} decision")
    for d in run_stream(engine, schedule, pvals):
        verdict = "REJECT" if d.rejected else "accept"
        print(f"{d.index:>3} {d.alpha:12.6f} {d.p:8.3f} {verdict}")

print("\nstatic step-up on the same batch:", sorted(bh_reject(pvals, 0.1)))

# The streaming guarantee: on pure-noise streams the expected share of
# false discoveries stays below q at every horizon, not just at the end.
rng = np.random.default_rng(0)
reps, n = 500, 2000
any_rejection = 0
for _ in range(reps):
    decisions = run_stream("lord", schedule, rng.random(n))
    any_rejection += any(d.rejected for d in decisions)
print(f"\n{reps} all-null streams of length {n}:")
print(f"  share with at least one (false) discovery: {any_rejection / reps:.3f} (budget q = 0.1)")
