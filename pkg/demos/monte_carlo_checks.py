"""
Checking the analytics by simulation
====================================

The chain sampler draws the birth-death process directly; the agent-based
simulator plays explicit groups.  Both should approach the analytic
stationary distribution, the former at rate ``1/sqrt(steps)``.
"""

from crdhybrid import (
    PopulationModel,
    SimulationConfig,
    estimate_fitness_sampled,
    simulate_agents,
    simulate_chain,
    stationary_product_form,
)
from crdhybrid.dynamics import fitness_table

model = PopulationModel.create(r=0.9, a=2, p=0.5)
P = stationary_product_form(model).probabilities

for steps in (10**5, 10**6, 10**7):
    emp = simulate_chain(SimulationConfig(model, steps=steps, seed=0))
    print(f"chain, {steps:>9,d} steps: TV to analytic {emp.total_variation(P):.4f}")

# %%
# Fitness by sampling groups versus the hypergeometric average.
f_c, _ = fitness_table(model)
est, se = estimate_fitness_sampled(40, "C", model, samples=20_000, seed=1)
print(f"f_C(40): sampled {est:.4f} +/- {se:.4f}, exact {f_c[40]:.4f}")

# %%
# Explicit agents.  With a few groups per fitness estimate the imitation
# decision is noisy, so expect a looser match than the chain sampler.
emp = simulate_agents(SimulationConfig(model, steps=2 * 10**5, seed=0, group_samples=20))
print(f"agents, 200,000 steps: TV to analytic {emp.total_variation(P):.4f}")
