"""
Quantum links versus teleportation on a subdivided star
=======================================================

The modulo-4 game moves to the three leaves of a star whose arms have ``k``
edges.  Classically the leaves need ``2k`` rounds to see each other.  A
center that prepares a GHZ state and forwards one qubit down each arm needs
only ``k`` rounds over quantum links, and ``k + 1`` rounds over classical
links when every edge carries a pre-shared Bell pair.
"""

# %%
import time

from qlocal.checker import check_philocal
from qlocal.outcomes import min_solution_probability
from qlocal.protocols import mod4

# %%
for k in (1, 2):
    problem = mod4.star_problem(k)
    quantum = mod4.star_protocol(k)
    tele = mod4.star_teleport_protocol(k)
    start = time.perf_counter()
    oq = quantum.outcome()
    ot = tele.outcome()
    print(f"k={k}: {quantum.model} in {quantum.rounds} rounds, {tele.model} in {tele.rounds} rounds"
          f" ({time.perf_counter() - start:.1f}s exact)")
    print("  solution probability:", min_solution_probability(oq, problem))
    print("  same outcome over teleportation:", oq == ot)
    print("  local at its round budget:", bool(check_philocal(ot, tele.rounds)))
    print(f"  deterministic LOCAL[{2 * k - 1}] impossible:", mod4.star_deterministic_impossibility(k, 2 * k - 1))
