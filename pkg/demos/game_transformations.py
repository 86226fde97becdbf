"""
Fixed agents as a transformation of the game
============================================

Agents that never cooperate just shrink the group; agents that always
cooperate shrink the group and lower the threshold by the same amount.
Agents with the same expected effort but different reliability do not
collapse onto either case.
"""

from itertools import combinations

import numpy as np

from crdhybrid import figure_preset, run_sweep
from crdhybrid.validation import total_variation

for name in ("fig5A", "fig5B"):
    result = run_sweep(figure_preset(name))
    dists = [np.array(r["stationary_distribution"]) for r in result.records]
    labels = [f"N={r['params']['N']},a={r['params']['a']},M={r['params']['M']}" for r in result.records]
    worst = max(np.abs(d - dists[0]).max() for d in dists[1:])
    print(f"{name}: {', '.join(labels)} -> max pointwise difference {worst:.1e}")

result = run_sweep(figure_preset("fig5C"))
for x, y in combinations(result.records, 2):
    tv = total_variation(x["stationary_distribution"], y["stationary_distribution"])
    print(f"(a={x['params']['a']}, p={x['params']['p']}) vs (a={y['params']['a']}, p={y['params']['p']}): TV {tv:.3f}")
