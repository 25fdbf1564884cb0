"""
Photon statistics of an attenuated laser
========================================

How many photons does a weak coherent pulse carry? The photon number is
Poisson distributed around the mean ``mu``.
"""

from qkdtree import lumped_three_branch, poisson_pn, truncated_distribution

###############################################################################
# The three-branch view: vacuum, one photon, two or more photons.

for mu in (0.1, 0.2, 0.5):
    p0, p1, p2plus = lumped_three_branch(mu)
    print(f"mu={mu:.1f}  p0={p0:.4f}  p1={p1:.4f}  p2+={p2plus:.4f}  p2={poisson_pn(mu, 2):.4f}")

###############################################################################
# At mu = 0.5 about 9 % of pulses carry more than one photon, most of them
# exactly two. The remaining three-or-more share is below 2 %.

p2plus = lumped_three_branch(0.5)[2]
print(f"three or more photons: {p2plus - poisson_pn(0.5, 2):.4f}")

###############################################################################
# The exact engine truncates the Poisson series adaptively and keeps the
# truncated tail as an explicit mass.

dist = truncated_distribution(0.5, tail_tol=1e-12)
print(f"n_max={dist.n_max}  tail={dist.tail_mass:.2e}  mean={dist.mean():.12f}")
