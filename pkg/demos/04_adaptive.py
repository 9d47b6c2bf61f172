"""
Not knowing the overlap
=======================

When sum |f|^2 is unknown the optimal iteration count is unknown too. The
adaptive runner tries a short fixed list of counts, then random ones, and
stops at the first accepted shot.
"""

# %%
import math

import numpy as np

from ampsynth import RuntimeSchedule, adaptive_synthesize, indicator_spec

f = indicator_spec(8, [123])
schedule = RuntimeSchedule()
print("fixed prefix:", schedule.fixed_etas(f.N), " cap:", schedule.cap_for(f.N))

# %%
rounds, iters = [], []
for seed in range(200):
    out = adaptive_synthesize(f, seed=seed, schedule=schedule)
    rounds.append(out.rounds)
    iters.append(out.total_iterations)
rounds = np.array(rounds)
print(f"median rounds = {np.median(rounds):g}, worst = {rounds.max()}")
print(f"mean iterations = {np.mean(iters):.2f}  vs  known-overlap optimum "
      f"{round(math.pi / 4 * math.sqrt(f.N) - 0.5)}")

# %%
# Tail of the round count.
for r in range(1, rounds.max() + 1):
    print(f"P(rounds > {r}) = {np.mean(rounds > r):.3f}")
