# %% [markdown]
# # Feedback on a random-interval schedule
#
# Sweep response rates from 0 to 200 per minute on RI 5 s, then ask which
# feedback function describes the resulting curve best. Scale is reduced
# here (120 s sessions, 30 repetitions) so the script runs in seconds;
# `SessionConfig.desk()` gives the full desk profile.

# %%
import numpy as np

from schedsim import ScheduleSpec, SessionConfig, compare, fit, format_ranking, run_sweep

config = SessionConfig(duration=120, repetitions=30, rates=np.arange(0, 201, 10.0), seed=1)
points = run_sweep(config, ScheduleSpec.ri(5))

for p in points[::4]:
    print(f"B={p.B_nominal:>5.0f}  R={p.R_mean:6.3f}  95% HDI [{p.hdi_lo:.2f}, {p.hdi_hi:.2f}]")

# %% [markdown]
# Reinforcement climbs quickly, then levels off under 60/5 = 12 per minute.
# Four candidate curves compete. BIC penalizes the extra parameter in
# Killeen's form and the fixed normalizing rate drags Rachlin's power law.

# %%
B = np.array([p.B_nominal for p in points])
R = np.array([p.R_mean for p in points])
fits = [fit(f, B, R, size=5) for f in ("baum", "killeen", "prelec", "rachlin")]
print(format_ranking(compare(fits)))

# %% [markdown]
# The hyperbola's single parameter is the effective schedule size.

# %%
baum = fits[0]
print(f"fitted V = {baum.params['V']:.3f} s, asymptote {60 / baum.params['V']:.2f}/min")
