"""
Cleaning a long current measurement
===================================

A phone's current draw is logged for nine hours. The first two hours are
dropped as warm-up. The rest is cut into one-hour slots and the slot with
the lowest mean is kept, since background activity only adds current.
"""

import numpy as np

from drxsim import SampleSeries, discard_warmup, slot_min_mean

rng = np.random.default_rng(0)
t = np.arange(0, 9 * 3600 + 1, 10.0)
current = 0.120 + rng.normal(0, 0.004, t.size)

# warm-up transient: everything runs hot for a while after boot
current += 0.08 * np.exp(-t / 1800)

# a background sync burst in some hours
for hour in (3, 4, 7):
    mask = (t >= hour * 3600) & (t < hour * 3600 + 900)
    current[mask] += rng.uniform(0.05, 0.2, mask.sum())

series = SampleSeries(t, current, "A")

###############################################################################
# Drop the warm-up and rank the remaining hours.

kept = discard_warmup(series, 2 * 3600)
print(f"kept {kept.span / 3600:g} h of {series.span / 3600:g} h")

best, slots = slot_min_mean(kept, 3600)
for s in slots:
    flag = "  <- selected" if s.slot_index == best.slot_index else ""
    print(f"slot {s.slot_index}: {s.mean_value * 1e3:7.2f} mA over {s.sample_count} samples{flag}")
