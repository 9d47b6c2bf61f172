"""
The two-dimensional picture
===========================

The amplification operator Q leaves the plane spanned by the source and its
target-projected partner invariant, and acts there as a rotation by 2 theta.
Here we check that numerically on a random instance and compare with the
explicit dense matrix.
"""

# %%
import numpy as np

from ampsynth import subspace_analysis
from ampsynth.oracle import dense_q, random_instance

rng = np.random.default_rng(3)
U, s, t = random_instance(4, rng, depth=5)
sa = subspace_analysis(U, s, t)
print(f"u = {sa.u:.5f}, theta = {sa.theta:.5f}")
print("matrix of Q in (s, w/u):\n", np.round(sa.two_by_two, 6))
print("residuals:", sa.residual_s, sa.residual_w)

# %%
expected = np.exp(-2j * sa.theta), np.exp(2j * sa.theta)
print("eigenvalues:", np.round(sa.eigenvalues, 8))
print("e^{-+2i theta}:", np.round(expected, 8))

# %%
# Dense Q, built independently, has the same eigenvalues among its spectrum.
q = dense_q(U, s, t)
spectrum = np.linalg.eigvals(q.entries)
gaps = [float(np.min(np.abs(spectrum - lam))) for lam in sa.eigenvalues]
print("closest dense eigenvalues differ by", gaps)
print("unitarity deviation of dense Q:", q.unitarity_deviation())
