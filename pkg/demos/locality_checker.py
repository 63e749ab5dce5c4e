"""
Checking physical locality of outcomes
======================================

An outcome is local at radius ``t`` when every node set ``S`` sees the same
output marginal on any two inputs it cannot tell apart after ``t`` rounds.
The checker either confirms this or returns the offending set and inputs.
"""

# %%
from qlocal.checker import check_philocal, minimal_radius
from qlocal.graph import cycle_graph, view
from qlocal.outcomes import format_distribution
from qlocal.protocols import coloring, fairness

# %%
# What a pair of antipodal nodes on C_6 sees after one round: two arcs,
# with the two edges between the arcs still hidden.
ball = view(cycle_graph(range(6)), {0, 3}, 1)
print("nodes:", sorted(ball.seen_nodes))
print("edges:", sorted(ball.edges))

# %%
# Fair 2-coloring of an even cycle: each proper coloring with probability
# 1/2.  The input family contains rewired cycles that look the same to an
# antipodal pair just below the critical radius, while the pair's distance
# has the other parity.
for n in (6, 8, 10):
    o = coloring.two_coloring_outcome(n)
    t = coloring.critical_radius(n)
    low = check_philocal(o, t - 1)
    print(f"C_{n}: minimal radius {minimal_radius(o, t)}, expected {t};"
          f" at {t - 1} the witness set is {low.witness.subset}")

# %%
# Two-node consensus.  Whatever the probabilities p, q of deciding 0 on the
# mixed inputs, some single node sees equal labels on two inputs but
# different marginals.
v = check_philocal(fairness.consensus_outcome(1, 0), 0)
w = v.witness
print("S =", w.subset, "inputs", w.input_a.labels, "vs", w.input_b.labels)
print(format_distribution(w.marginal_a), end="")
print(format_distribution(w.marginal_b), end="")

failing = sum(not check_philocal(o, 0) for _, _, o in fairness.consensus_grid())
print(f"{failing} of 25 grid points fail at t = 0")
