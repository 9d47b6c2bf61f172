"""
Searching an unstructured table
===============================

A 10-qubit register, one marked entry out of 1024. Each amplification step
turns the state a fixed angle towards the marked entry; we watch the hit
probability climb, peak, and then fall again if we keep going.
"""

# %%
import math

import numpy as np

from ampsynth import M, PhaseFlip, UnitaryProgram, WH, overlap_u, plan, run

n = 10
N = 1 << n
marked = [613]

# U is the Walsh-Hadamard transform and the source is |0>, so U|0> is the
# uniform superposition and the overlap with one marked state is 1/sqrt(N).
U = UnitaryProgram(n, [WH(tuple(range(n)))])
u = overlap_u(U, 0, marked)
print(f"overlap u = {u:.6f}  (1/sqrt(N) = {1 / math.sqrt(N):.6f})")

# %%
# The planner picks the iteration count that maximises sin^2((2j+1) theta).
p = plan(u)
print(f"eta = {p.eta}, predicted hit probability = {p.predicted_success:.6f}")
print(f"pi/4 * sqrt(N) = {math.pi / 4 * math.sqrt(N):.2f}")

# %%
# Simulate every iteration count up to twice the optimum.
for eta in range(0, 2 * p.eta + 1, 5):
    hit = run(U, 0, marked, eta).probabilities()[marked[0]]
    bar = "#" * int(round(40 * hit))
    print(f"eta={eta:3d}  P(hit)={hit:.4f}  {bar}")

# %%
# Any U works, not just Walsh-Hadamard. Here a Hadamard is skipped on one
# qubit and a phase flip sits in the middle; the overlap shrinks or grows and
# the plan adapts.
U2 = UnitaryProgram(n, [WH(tuple(range(1, n))), PhaseFlip(np.arange(0, N, 3)), M(0)])
u2 = overlap_u(U2, 0, marked)
p2 = plan(u2)
final = run(U2, 0, marked, p2.eta)
print(f"custom U: u = {u2:.5f}, eta = {p2.eta}, P(hit) = {final.probabilities()[marked[0]]:.6f}")
