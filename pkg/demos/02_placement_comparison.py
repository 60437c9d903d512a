"""
Edge, cloud and far cloud for a periodic echo client
====================================================

Every 20 s the client sends a payload and the server echoes it back. The
cloud and far-cloud servers sit behind 100 ms and 200 ms of extra delay.
Longer round trips keep the radio in its high-power states for longer.
"""

from drxsim import load_config, sweep

cfg = load_config("software_monitor")
print("payloads (B):", [int(v) for v in cfg.sweep_values])

runs = {s.label: sweep(s, cfg.sweep_parameter, cfg.sweep_values) for s in cfg.scenarios}

###############################################################################
# Mean current per placement, and the excess over the edge.

print(f"{'payload':>8} " + " ".join(f"{lab:>10}" for lab in runs) + "   cloud/edge")
for i, v in enumerate(cfg.sweep_values):
    currents = [runs[lab][i].mean_current * 1e3 for lab in runs]
    excess = runs["cloud"][i].mean_current / runs["edge"][i].mean_current - 1
    print(f"{int(v):>8} " + " ".join(f"{c:8.2f}mA" for c in currents) + f"   +{100 * excess:.1f}%")

###############################################################################
# The same numbers as a grouped bar chart.

from drxsim.plotting import grouped_bar_chart

grouped_bar_chart(
    [f"{v / 1024:g} KB" for v in cfg.sweep_values],
    {lab: [r.mean_current * 1e3 for r in reps] for lab, reps in runs.items()},
    "placement_comparison.svg",
    ylabel="mean current (mA)",
    xlabel="payload",
)
print("wrote placement_comparison.svg")
