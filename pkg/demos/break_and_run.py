# %% [markdown]
# # Bursts and pauses
#
# A two-state responder alternates between pausing and running. Each step it
# starts a run with probability P_r and breaks with probability P_b, and it
# responds at a local rate (LOR) only while running. Its long-run rate is
# LOR·P_r/(P_r+P_b). Does the schedule care about anything beyond that rate?

# %%
import numpy as np

from schedsim import BurstSpec, ResponderSpec, ScheduleSpec, SessionConfig, run_sweep

burst = BurstSpec(0.01, 0.01)
frac = burst.running_fraction
lor = np.arange(0, 201, 40.0)
cfg = dict(duration=300, repetitions=40, seed=3)


def compare(schedule):
    bursty = run_sweep(SessionConfig(rates=lor, **cfg), schedule, ResponderSpec(0, 0.005, burst))
    plain = run_sweep(SessionConfig(rates=lor * frac, **cfg), schedule)
    for p, q in zip(bursty, plain):
        mark = "inside" if q.hdi_lo <= p.R_mean <= q.hdi_hi else "OUTSIDE"
        print(f"LOR={p.B_nominal:>4.0f} eff={q.B_nominal:>5.1f}  "
              f"burst={p.R_mean:.3f}  plain={q.R_mean:.3f} [{q.hdi_lo:.2f}, {q.hdi_hi:.2f}] {mark}")


# %% [markdown]
# On RI 15 s only the mean rate matters: the bursty curve sits on the plain one.

# %%
compare(ScheduleSpec.ri(15))

# %% [markdown]
# RDRL 8 s rewards pauses, and breaks between runs are exactly that. At high
# local rates the bursty responder earns more than a steady one with the same
# average rate, so the equivalence holds only at moderate rates.

# %%
compare(ScheduleSpec.rdrl(8))
