"""
Stationary distribution of the adaptive population
==================================================

The number of cooperators performs a birth-death walk on 0..Z.  We build its
transition matrix, solve for the long-run distribution two ways, and read
off average cooperation and group success.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from crdhybrid import (
    PopulationModel,
    average_cooperation,
    average_group_success,
    build_transition_matrix,
    stationary_eigen,
    stationary_product_form,
)

model = PopulationModel.create(r=0.9, a=2, p=0.5)
S = build_transition_matrix(model)
print("row sums deviate from 1 by at most", np.abs(S.row_sums() - 1).max())

# %%
# Closed form from detailed balance, and the eigenvector of eigenvalue one.
exact = stationary_product_form(model)
eig = stationary_eigen(model)
print("max difference between solvers:", np.abs(exact.probabilities - eig.probabilities).max())
print("detailed balance residual:", exact.detailed_balance_residual)

print(f"average cooperation {average_cooperation(exact):.4f}")
print(f"average group success {average_group_success(exact, model):.4f}")

# %%
# Fully cooperative agents at the threshold leave nothing for the population
# to do, and cooperation collapses.
lazy = model.replace(a=3, p=1.0)
print(f"a=M=3, p=1: cooperation {average_cooperation(stationary_product_form(lazy)):.4f}")

fig, ax = plt.subplots()
x = np.arange(model.Z + 1) / model.Z
ax.plot(x, exact.probabilities, label="a=2, p=0.5")
ax.plot(x, stationary_product_form(lazy).probabilities, label="a=3, p=1")
ax.set_xlabel("fraction of cooperators")
ax.set_ylabel("stationary probability")
ax.legend()
fig.savefig("stationary_distribution.png", dpi=120)
