"""
Zero rounds, three nodes, one shared GHZ state
==============================================

Three isolated nodes each hold one bit ``x_v`` with ``x_1 + x_2 + x_3`` even,
and must answer bits ``y_v`` with ``2 * sum(y) == sum(x) (mod 4)``.  No
deterministic (or shared-randomness) rule can do this, but a pre-shared GHZ
state makes it certain.
"""

# %%
from itertools import product

from qlocal.outcomes import format_distribution, min_solution_probability
from qlocal.protocols import mod4

protocol = mod4.ghz_protocol()
print(protocol.name, "under", protocol.model, "with", protocol.rounds, "rounds")

# %%
# The exact output distribution for every admissible input.  Even inputs
# give even-parity outputs, inputs summing to 2 give odd parity.
for g in protocol.inputs:
    print("x =", g.labels)
    print(format_distribution(protocol.exact(g)), end="")

# %%
# Every output in the support is valid, so the solution probability is 1.
print("solution probability:", min_solution_probability(protocol.outcome(), mod4.mod4_problem()))

# %%
# Classically each node can only apply a fixed function {0,1} -> {0,1}.
# All 64 triples fail on at least one input.
print("no deterministic triple works:", mod4.mod4_separable_impossibility())
tables = list(product((0, 1), repeat=2))
best = max(
    sum(mod4.mod4_valid(x, (a[x[0]], b[x[1]], c[x[2]])) for x in mod4.MOD4_INPUTS)
    for a, b, c in product(tables, repeat=3)
)
print(f"best deterministic triple wins on {best} of 4 inputs")

# %%
# Sampling agrees with the exact computation.
g = protocol.inputs[1]
print(format_distribution(protocol.sample(g, 20_000, seed=1)), end="")
