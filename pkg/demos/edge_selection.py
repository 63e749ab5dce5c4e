"""
Selecting an edge without communication
=======================================

The input is ``K_n`` with one edge removed; the nodes must mark exactly the
two endpoints of an existing edge.  With zero rounds and private coins the
best one can do stays below ``1/e``; a helper that pre-selects a random
edge reaches ``1 - 1/C(n, 2)``.
"""

# %%
import math
from fractions import Fraction

import numpy as np

from qlocal.outcomes import min_solution_probability
from qlocal.protocols import edge_selection as es

# %%
# Success probability of the best private-coin strategy versus the helper.
print(" n   private coins     helper")
for n in range(3, 13):
    pi = es.pi_success(es.optimal_local_strategy(n))
    helper = 1 - Fraction(1, math.comb(n, 2))
    print(f"{n:2d}   {float(pi):.6f}     {float(helper):.6f}")
print(f"1/e = {math.exp(-1):.6f}")

# %%
# The closed form agrees with brute-force enumeration of output patterns.
rng = np.random.default_rng(0)
errs = [abs(es.pi_success(p) - es.pi_brute_force(p)) for p in (rng.random(k).tolist() for k in range(2, 11))]
print("largest deviation:", max(errs))

# %%
# A coarse landscape for k = 4 with the last three entries equal.  The
# formula assumes a sorted profile (the worst input removes the edge between
# the two nodes least likely to output 1), so unsorted points are masked.
grid = np.linspace(0, 1, 11)
a, b = np.meshgrid(grid, grid, indexing="ij")
values = np.where(a <= b, es.pi_success_array(np.stack([a, b, b, b], axis=-1)), -np.inf)
i, j = np.unravel_index(np.argmax(values), values.shape)
print(f"k=4 coarse maximum {values[i, j]:.4f} at p1={grid[i]:.1f}, p_rest={grid[j]:.1f}")
print("grid search:", es.pi_grid_search(4))

# %%
# Running the strategy through the simulator gives the same number.
n = 5
profile = es.optimal_local_strategy(n)
simulated = min_solution_probability(es.profile_protocol(profile).outcome(), es.edge_selection_problem(n))
print("simulated:", simulated, " formula:", es.pi_success(profile))
