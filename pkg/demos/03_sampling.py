"""
Drawing from a classical distribution
=====================================

Probabilities are turned into amplitudes sqrt(p / max p), synthesised, then
measured. Shots where the ancilla reads 1 are discarded.
"""

# %%
import numpy as np

from ampsynth import compare, condition_on_ancilla, measure_shots, spec_from_probabilities, synthesize

p = np.array([0.5, 0.25, 0.125, 0.125] + [0.0] * 60)
f = spec_from_probabilities(p)
res = synthesize(f)
print(f"N = {f.N}, eta = {res.eta}, acceptance = {res.success_probability:.4f}")

# %%
counts = measure_shots(res.final_state, shots=200_000, seed=11)
kept, accepted = condition_on_ancilla(counts, f.n)
tv, chi, dof = compare(kept, f.target_distribution())
print(f"accepted {accepted} shots; tv = {tv:.4f}, chi^2 = {chi:.2f} on {dof} dof")
for x in sorted(kept):
    print(f"  x={x}: {kept[x] / accepted:.4f} (target {p[x]:.4f})")

# %%
# Sampling is deterministic for a given seed.
again = measure_shots(res.final_state, shots=200_000, seed=11)
print("reproducible:", again == counts)
