"""
Cooperation and success heatmaps over risk and agent cooperativeness
====================================================================

Runs the ``fig4`` preset (N=6, M=3, one panel each for a=1, 2, 3 fixed
agents), writes one CSV per panel and draws the heatmaps.  Takes a few
seconds.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from crdhybrid import figure_preset, run_sweep, write_csv

spec = figure_preset("fig4")
result = run_sweep(spec)
print(f"{len(result.records)} cells, {len(result.skipped)} skipped")

r_values, p_values = spec.axis1[1], spec.axis2[1]
fig, axes = plt.subplots(2, len(spec.panels), figsize=(12, 7), sharex=True, sharey=True)
for i, panel in enumerate(spec.panels):
    sub = result.panel(i)
    write_csv(sub, f"fig4_a{panel['a']}.csv")
    for row, metric in enumerate(("avg_cooperation", "avg_success")):
        values = np.array([rec[metric] for rec in sub.records]).reshape(len(r_values), len(p_values))
        im = axes[row, i].imshow(values, origin="lower", extent=(0, 1, 0, 1), vmin=0, vmax=1, aspect="auto")
        axes[row, i].set_title(f"{metric}, a={panel['a']}")
        axes[row, i].set_xlabel("p")
        axes[row, i].set_ylabel("r")
fig.colorbar(im, ax=axes)
fig.savefig("fig4_heatmaps.png", dpi=120)

# %%
# The corner the text describes: high risk, unreliable agents.
sub = result.panel(2)
corner = [rec for rec in sub.records if rec["params"]["r"] == 1.0 and rec["params"]["p"] == 0.0][0]
print("a=3, r=1, p=0:", {k: round(corner[k], 4) for k in ("avg_cooperation", "avg_success")})
