"""
Payoffs and fitness in hybrid groups
====================================

A group of six plays the collective risk dilemma with threshold three and a
90% chance of losing everything if the threshold is missed.  We look at what
a cooperator and a defector earn, how fixed agents shift those payoffs, and
what each strategy earns on average in a population of 100.
"""

import numpy as np

from crdhybrid import GameParams, HybridPolicy, PopulationModel, expected_payoff
from crdhybrid import payoff_cooperator, payoff_defector
from crdhybrid.dynamics import fitness_table

game = GameParams(N=6, M=3, r=0.9, b=1.0, c=0.1)

# %%
# Raw payoffs by number of cooperators in the group.  Cooperators pay 0.1 in
# every group; below the threshold everybody keeps only 10% in expectation.
print(" j   defector  cooperator")
for j in range(game.N + 1):
    coop = f"{payoff_cooperator(j, game):10.3f}" if j else "         -"
    print(f"{j:2d} {payoff_defector(j, game):10.3f} {coop}")

# %%
# Two fixed agents that cooperate together half of the time.  A defector with
# one adaptive co-cooperator now reaches the threshold whenever the agents
# chip in.
agents = HybridPolicy(a=2, p=0.5)
for i in range(game.N - agents.a + 1):
    d = expected_payoff("D", i, agents, game)
    c = expected_payoff("C", i, agents, game) if i else float("nan")
    print(f"i={i}: defector {d:.3f}  cooperator {c:.3f}")

# %%
# Fitness averages those payoffs over every possible group drawn from the
# population.  The sign of f_C - f_D tells which way imitation pushes.
model = PopulationModel.create(r=0.9, a=2, p=0.5)
f_c, f_d = fitness_table(model)
k = np.arange(1, model.Z)
gap = f_c[1:-1] - f_d[1:-1]
print("states where cooperating pays:", k[gap > 0].min(), "to", k[gap > 0].max())
