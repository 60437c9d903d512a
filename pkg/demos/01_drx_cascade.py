"""
The DRX cascade after a single packet
=====================================

One packet wakes the radio. It then steps down through short DRX, long
DRX and idle as the inactivity timers expire. We look at the timeline
and at how the two accounting modes charge it.
"""

from drxsim import EventTrace, PacketEvent, build_state_timeline, energy_of_interval, load_profile

profile = load_profile("default")
print("timers (s):", profile.timers)

###############################################################################
# A lone packet at t = 0, watched for one minute.

trace = EventTrace((PacketEvent(0.0, "down", 1460),), horizon=60.0)
timeline = build_state_timeline(trace, profile.timers)

for iv in timeline:
    avg = energy_of_interval(iv, profile, "average")
    exact = energy_of_interval(iv, profile, "exact-cycle")
    print(f"{iv.state.value:>9}  {iv.start:8.3f} -> {iv.end:8.3f} s   avg {avg:8.4f} J   exact {exact:8.4f} J")

###############################################################################
# Over whole DRX cycles the two modes agree. On a fragment they differ,
# because exact-cycle charges the wake window first.

total_avg = sum(energy_of_interval(iv, profile, "average") for iv in timeline)
total_exact = sum(energy_of_interval(iv, profile, "exact-cycle") for iv in timeline)
print(f"total: average {total_avg:.4f} J, exact-cycle {total_exact:.4f} J")
